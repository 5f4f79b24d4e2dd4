"""Right-symmetric modules and comodules, stored as action matrices.

For a module ``M`` over ``A`` we keep, for every basis element ``e_a``:

* ``right[a][i]`` -- the vector ``m_i ∘ e_a``
* ``left[a][i]``  -- the vector ``e_a ∘ m_i``

Comodules use the same storage; only the axioms differ.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, List, Sequence, Tuple

from .algebra import Algebra, IdentityReport, IdentityResult, left_structure
from .linalg import SparseMatrix, SubspaceBasis, rank_nullspace, vec_clean
from .presets import DividedPowers
from .scalars import Number

__all__ = [
    "RsModule",
    "RsComodule",
    "AxiomViolation",
    "PresetUnavailable",
    "check_actions",
    "regular",
    "trivial",
    "antisymmetrize",
    "bar",
    "functions_U",
    "forms_top",
    "c1_module",
    "tensor",
    "lie_module_matrices",
    "dual",
    "coregular",
    "m_tensor_a",
    "point_module",
    "gl_point_data",
    "invariant_subspaces",
    "build_module",
]

Vec = Dict[int, Number]
Action = List[List[Vec]]  # [a][i] -> vector


class AxiomViolation(ValueError):
    pass


class PresetUnavailable(ValueError):
    pass


@dataclass
class RsModule:
    algebra: Algebra
    dim: int
    right: Action
    left: Action
    name: str = "M"
    origin: Tuple = ()
    kind = "module"

    def __post_init__(self) -> None:
        F = self.algebra.field
        n = self.algebra.dim
        if len(self.right) != n or len(self.left) != n:
            raise ValueError("need one action matrix per basis element of the algebra")
        for table in (self.right, self.left):
            for a in range(n):
                if len(table[a]) != self.dim:
                    raise ValueError("action matrix has the wrong size")
                table[a] = [vec_clean(F, v) for v in table[a]]

    # vector-level actions; ``a`` is a basis index
    def ract(self, v: Vec, a: int) -> Vec:
        """v ∘ e_a"""
        return _apply(self.algebra.field, self.right[a], v)

    def lact(self, a: int, v: Vec) -> Vec:
        """e_a ∘ v"""
        return _apply(self.algebra.field, self.left[a], v)

    def ract_elem(self, v: Vec, x: Vec) -> Vec:
        out: Dict[int, Number] = {}
        for a, c in x.items():
            _acc(out, self.ract(v, a), c)
        return vec_clean(self.algebra.field, out)

    def lact_elem(self, x: Vec, v: Vec) -> Vec:
        out: Dict[int, Number] = {}
        for a, c in x.items():
            _acc(out, self.lact(a, v), c)
        return vec_clean(self.algebra.field, out)

    def lie_left(self, a: int, v: Vec) -> Vec:
        """[e_a, v] = e_a∘v − v∘e_a, the Lie action of A^lie on M."""
        out = dict(self.lact(a, v))
        _acc(out, self.ract(v, a), -1)
        return vec_clean(self.algebra.field, out)

    def is_antisymmetric(self) -> bool:
        """Left action zero (modules) or right action zero (comodules)."""
        table = self.left if self.kind == "module" else self.right
        return all(not v for row in table for v in row)


class RsComodule(RsModule):
    kind = "comodule"


def _apply(F, matrix: List[Vec], v: Vec) -> Vec:
    out: Dict[int, Number] = {}
    for i, c in v.items():
        for k, x in matrix[i].items():
            out[k] = out.get(k, 0) + c * x
    return vec_clean(F, out)


def _acc(out: Dict[int, Number], v: Vec, c: Number) -> None:
    for k, x in v.items():
        out[k] = out.get(k, 0) + c * x


def _combo(F, *terms: Tuple[Number, Vec]) -> Vec:
    out: Dict[int, Number] = {}
    for c, v in terms:
        _acc(out, v, c)
    return vec_clean(F, out)


# -- axiom checks -----------------------------------------------------------

def _scan(name: str, dims: Sequence[int], fn: Callable[..., Vec]) -> Tuple[str, IdentityResult]:
    import itertools

    for idx in itertools.product(*(range(d) for d in dims)):
        d = fn(*idx)
        if d:
            return name, IdentityResult(False, idx, d)
    return name, IdentityResult(True)


def check_actions(M: RsModule) -> IdentityReport:
    """Verify the axioms for ``M.kind``; witnesses are (m, a, b) / (a, b, m)."""
    A = M.algebra
    F = A.field
    n, d = A.dim, M.dim
    e = {i: {i: 1} for i in range(d)}
    res: Dict[str, IdentityResult] = {}

    def mab(i, a, b):  # m∘(a∘b) − (m∘a)∘b
        return _combo(F, (1, M.ract_elem(e[i], A.mul_basis(a, b))),
                      (-1, M.ract(M.ract(e[i], a), b)))

    def abm(a, b, i):  # a∘(b∘m) − (a∘b)∘m
        return _combo(F, (1, M.lact(a, M.lact(b, e[i]))),
                      (-1, M.lact_elem(A.mul_basis(a, b), e[i])))

    if M.kind == "module":
        def maa(i, a, b):
            return _combo(F, (1, M.ract_elem(e[i], A.bracket_basis(a, b))),
                          (-1, M.ract(M.ract(e[i], a), b)),
                          (1, M.ract(M.ract(e[i], b), a)))

        def aam(a, b, i):
            return _combo(F, (1, M.ract(M.lact(a, e[i]), b)),
                          (-1, M.lact(a, M.ract(e[i], b))),
                          (-1, M.lact_elem(A.mul_basis(a, b), e[i])),
                          (1, M.lact(a, M.lact(b, e[i]))))

        res.update([_scan("MAA", (d, n, n), maa), _scan("AAM", (n, n, d), aam)])
        res["module"] = IdentityResult(res["MAA"].holds and res["AAM"].holds)
        res.update([_scan("special", (d, n, n), mab)])
    else:
        def co1(a, b, i):
            return _combo(F, (1, M.lact_elem(A.bracket_basis(a, b), e[i])),
                          (-1, M.lact(a, M.lact(b, e[i]))),
                          (1, M.lact(b, M.lact(a, e[i]))))

        def co2(a, b, i):
            return _combo(F, (-1, M.lact(b, M.ract(e[i], a))),
                          (1, M.ract(M.lact(b, e[i]), a)),
                          (-1, M.ract_elem(e[i], A.mul_basis(a, b))),
                          (1, M.ract(M.ract(e[i], a), b)))

        res.update([_scan("CO1", (n, n, d), co1), _scan("CO2", (n, n, d), co2)])
        res["comodule"] = IdentityResult(res["CO1"].holds and res["CO2"].holds)
        res.update([_scan("special", (n, n, d), abm)])
    res["antisymmetric"] = IdentityResult(M.is_antisymmetric())
    Z = left_structure(A).Z_l.vectors
    res.update([_scan("central", (len(Z), d), lambda z, i: M.lact_elem(Z[z], e[i]))])
    return IdentityReport(res)


def _self_check(M: RsModule) -> RsModule:
    rep = check_actions(M)
    key = "module" if M.kind == "module" else "comodule"
    if not rep.holds(key):
        bad = [k for k, r in rep.results.items() if not r.holds and k in ("MAA", "AAM", "CO1", "CO2")]
        raise AxiomViolation(f"{M.name}: axioms {bad} fail")
    return M


def _empty(n: int, d: int) -> Action:
    return [[{} for _ in range(d)] for _ in range(n)]


# -- constructors -------------------------------------------------------------

def regular(A: Algebra) -> RsModule:
    n = A.dim
    right = [[dict(A.mul_basis(i, a)) for i in range(n)] for a in range(n)]
    left = [[dict(A.mul_basis(a, i)) for i in range(n)] for a in range(n)]
    return RsModule(A, n, right, left, "regular", ("regular",))


def trivial(A: Algebra, dim: int = 1) -> RsModule:
    return RsModule(A, dim, _empty(A.dim, dim), _empty(A.dim, dim), "trivial", ("trivial",))


def antisymmetrize(M: RsModule) -> RsModule:
    A = M.algebra
    right = [[dict(v) for v in row] for row in M.right]
    return RsModule(A, M.dim, right, _empty(A.dim, M.dim), f"{M.name}_anti", ("anti", M))


def bar(M: RsModule) -> RsModule:
    """Antisymmetric module with right action r_a − l_a."""
    A = M.algebra
    F = A.field
    right = []
    for a in range(A.dim):
        right.append([_combo(F, (1, M.right[a][i]), (-1, M.left[a][i])) for i in range(M.dim)])
    return _self_check(RsModule(A, M.dim, right, _empty(A.dim, M.dim), f"{M.name}_bar", ("bar", M)))


def _witt_data(A: Algebra) -> DividedPowers:
    meta = A.meta
    if meta.get("preset") != "W":
        raise PresetUnavailable("this module needs a W_n(m) preset algebra")
    return DividedPowers(meta["p"], meta["m"])


def _witt_basis(A: Algebra, dp: DividedPowers):
    n = dp.n
    return [(dp.monomials[k // n], k % n) for k in range(A.dim)]


def functions_U(A: Algebra) -> RsModule:
    """U = O_n(m) with u ∘ a∂_i = a ∂_i(u); left action zero."""
    dp = _witt_data(A)
    basis = _witt_basis(A, dp)
    right = []
    for a, i in basis:
        row = []
        for u in dp.monomials:
            du = dp.partial(u, i)
            v = {}
            if du is not None:
                c, w = dp.mul(a, du)
                if w is not None:
                    v = {dp.index[w]: c}
            row.append(v)
        right.append(row)
    M = RsModule(A, dp.dim, right, _empty(A.dim, dp.dim), "functions", ("functions",))
    return _self_check(M)


def forms_top(A: Algebra) -> RsModule:
    """Top forms u dx: (u dx) ∘ a∂_i = ∂_i(a u) dx; left action zero."""
    dp = _witt_data(A)
    basis = _witt_basis(A, dp)
    right = []
    for a, i in basis:
        row = []
        for u in dp.monomials:
            c, au = dp.mul(a, u)
            v = {}
            if au is not None:
                w = dp.partial(au, i)
                if w is not None:
                    v = {dp.index[w]: c}
            row.append(v)
        right.append(row)
    M = RsModule(A, dp.dim, right, _empty(A.dim, dp.dim), "forms", ("forms",))
    return _self_check(M)


def c1_module(M: RsModule) -> RsModule:
    """C¹(A, M) = Hom(A, M) as an antisymmetric module.

    Basis ``b*dim M + j`` is the map sending e_b to m_j and other basis
    elements to zero.  The right action is
    (f∘a)(b) = b∘f(a) − f(b∘a) + f(b)∘a, i.e. (f∘a)(b) = d f(b, a).
    """
    A = M.algebra
    F = A.field
    n, d = A.dim, M.dim
    dim = n * d
    right: Action = _empty(n, dim)
    for a in range(n):
        for b0 in range(n):
            for j in range(d):
                f_idx = b0 * d + j
                out: Dict[int, Number] = {}
                # b ∘ f(a): only b-slot... f(a) = m_j if a == b0
                if a == b0:
                    for b in range(n):
                        for k, x in M.left[b][j].items():
                            out[b * d + k] = out.get(b * d + k, 0) + x
                # − f(b∘a): coefficient of e_b0 in e_b∘e_a
                for b in range(n):
                    c = A.mul_basis(b, a).get(b0)
                    if c:
                        out[b * d + j] = out.get(b * d + j, 0) - c
                # f(b)∘a: only b = b0
                for k, x in M.right[a][j].items():
                    out[b0 * d + k] = out.get(b0 * d + k, 0) + x
                right[a][f_idx] = vec_clean(F, out)
    C = RsModule(A, dim, right, _empty(n, dim), f"C1({M.name})", ("c1", M))
    return _self_check(C)


def lie_module_matrices(M: RsModule) -> List[List[Vec]]:
    """Right Lie action [m, e_a] = m∘e_a − e_a∘m as matrices [a][i]."""
    A = M.algebra
    F = A.field
    return [[_combo(F, (1, M.right[a][i]), (-1, M.left[a][i])) for i in range(M.dim)]
            for a in range(A.dim)]


def tensor(M: RsModule, N_dim: int, N_right: List[List[Vec]], name: str = "N") -> RsModule:
    """M ⊗ N for a right Lie module N given by matrices ``N_right[a][j] = [n_j, e_a]``.

    (m⊗n)∘a = m∘a ⊗ n + m ⊗ [n, a];  a∘(m⊗n) = a∘m ⊗ n.  Basis ``i*N_dim + j``.
    """
    A = M.algebra
    F = A.field
    n = A.dim
    if len(N_right) != n or any(len(r) != N_dim for r in N_right):
        raise ValueError("N needs one matrix per basis element")
    # N must be a right Lie module: [n,[a,b]] = [[n,a],b] − [[n,b],a]
    for a in range(n):
        for b in range(a + 1, n):
            br = A.bracket_basis(a, b)
            for j in range(N_dim):
                lhs: Dict[int, Number] = {}
                for t, c in br.items():
                    _acc(lhs, N_right[t][j], c)
                rhs = _combo(F, (1, _apply(F, N_right[b], N_right[a][j])),
                             (-1, _apply(F, N_right[a], N_right[b][j])))
                if _combo(F, (1, lhs), (-1, rhs)):
                    raise AxiomViolation("N is not a right Lie module")
    dim = M.dim * N_dim
    right = _empty(n, dim)
    left = _empty(n, dim)
    for a in range(n):
        for i in range(M.dim):
            for j in range(N_dim):
                r: Dict[int, Number] = {}
                for k, x in M.right[a][i].items():
                    r[k * N_dim + j] = r.get(k * N_dim + j, 0) + x
                for k, x in N_right[a][j].items():
                    r[i * N_dim + k] = r.get(i * N_dim + k, 0) + x
                right[a][i * N_dim + j] = r
                left[a][i * N_dim + j] = {k * N_dim + j: x for k, x in M.left[a][i].items()}
    return _self_check(RsModule(A, dim, right, left, f"{M.name}x{name}", ("tensor", M)))


def dual(M: RsModule) -> RsComodule:
    """M' with (a∘f)(m) = f(m∘a) and (f∘a)(m) = f(a∘m), in the dual basis."""
    A = M.algebra
    n, d = A.dim, M.dim
    right = _empty(n, d)
    left = _empty(n, d)
    for a in range(n):
        for i in range(d):
            # m_i ∘ e_a = Σ_k r[a][i][k] m_k  => (e_a∘f_k) has f_i-coefficient r[a][i][k]
            for k, x in M.right[a][i].items():
                left[a][k][i] = x
            for k, x in M.left[a][i].items():
                right[a][k][i] = x
    return _self_check(RsComodule(A, d, right, left, f"{M.name}'", ("dual", M)))


def coregular(A: Algebra) -> RsComodule:
    C = dual(regular(A))
    C.name = "coregular"
    return C


def m_tensor_a(M: RsModule) -> RsComodule:
    """Antisymmetric comodule M⊗A:  b∘(m⊗a) = m∘a⊗b − m⊗a∘b + b∘m⊗a.

    Basis ``i*dim A + a``.
    """
    if M.kind != "comodule":
        raise AxiomViolation("M⊗A is built from a comodule")
    A = M.algebra
    F = A.field
    n, d = A.dim, M.dim
    dim = d * n
    left = _empty(n, dim)
    for b in range(n):
        for i in range(d):
            for a in range(n):
                out: Dict[int, Number] = {}
                for k, x in M.right[a][i].items():
                    out[k * n + b] = out.get(k * n + b, 0) + x
                for t, x in A.mul_basis(a, b).items():
                    out[i * n + t] = out.get(i * n + t, 0) - x
                for k, x in M.left[b][i].items():
                    out[k * n + a] = out.get(k * n + a, 0) + x
                left[b][i * n + a] = vec_clean(F, out)
    return _self_check(RsComodule(A, dim, _empty(n, dim), left, f"{M.name}xA", ("m_tensor_a", M)))


def gl_point_data(A: Algebra, rep: Sequence[Sequence[Sequence[Number]]]) -> List[List[Vec]]:
    """Right Lie action on M₀ = K^r from a representation of gl_n.

    ``rep[i][j]`` is the r×r matrix of E_ij (rows act on row vectors, so
    ``[m, x_j∂_i] = m · rep[i][j]``).  Elements of degree ≠ 0 act by zero.
    """
    dp = _witt_data(A)
    basis = _witt_basis(A, dp)
    r = len(rep[0][0])
    out = []
    for a, i in basis:
        if sum(a) == 1:
            j = a.index(1)
            mat = rep[i][j]
            out.append([{k: mat[row][k] for k in range(r) if mat[row][k]} for row in range(r)])
        else:
            out.append([{} for _ in range(r)])
    return out


def point_module(A: Algebra, m0_dim: int, m0_right: List[List[Vec]]) -> RsModule:
    """U ⊗ M₀ with (u⊗m)∘a∂_i = a∂_i(u)⊗m + Σ_β u ∂^β(a) ⊗ [m, x^(β)∂_i].

    ``m0_right[k][j]`` is [m_j, e_k] for the basis element e_k of A.  Basis
    of the result is ``idx(u)*m0_dim + j``; left action is zero.
    """
    dp = _witt_data(A)
    F = A.field
    basis = _witt_basis(A, dp)
    n = A.dim
    nv = dp.n
    dim = dp.dim * m0_dim
    right = _empty(n, dim)
    for e_idx, (a, i) in enumerate(basis):
        for u in dp.monomials:
            iu = dp.index[u]
            for j in range(m0_dim):
                out: Dict[int, Number] = {}
                du = dp.partial(u, i)
                if du is not None:
                    c, w = dp.mul(a, du)
                    if w is not None:
                        out[dp.index[w] * m0_dim + j] = c
                for beta in dp.monomials:
                    if any(bb > aa for bb, aa in zip(beta, a)):
                        continue
                    da = tuple(aa - bb for aa, bb in zip(a, beta))
                    c, w = dp.mul(u, da)
                    if w is None:
                        continue
                    act = m0_right[dp.index[beta] * nv + i][j]
                    for k, x in act.items():
                        key = dp.index[w] * m0_dim + k
                        out[key] = out.get(key, 0) + c * x
                right[e_idx][iu * m0_dim + j] = vec_clean(F, out)
    return _self_check(RsModule(A, dim, right, _empty(n, dim), "point", ("point",)))


def invariant_subspaces(M: RsModule) -> Dict[str, SubspaceBasis]:
    """l_ass, l_inv for modules; r_ass, r_inv for comodules."""
    A = M.algebra
    F = A.field
    n, d = A.dim, M.dim
    e = [{i: 1} for i in range(d)]

    def kernel(fn, nrows) -> SubspaceBasis:
        cols = [fn(i) for i in range(d)]
        return rank_nullspace(SparseMatrix.from_columns(F, nrows, cols))[1]

    if M.kind == "module":
        def ass(i):
            col = {}
            for a in range(n):
                for b in range(n):
                    v = _combo(F, (1, M.ract_elem(e[i], A.mul_basis(a, b))),
                               (-1, M.ract(M.ract(e[i], a), b)))
                    for k, x in v.items():
                        col[(a * n + b) * d + k] = x
            return col

        def inv(i):
            col = {}
            for a in range(n):
                for k, x in M.ract(e[i], a).items():
                    col[a * d + k] = x
            return col

        out = {"l_ass": kernel(ass, n * n * d), "l_inv": kernel(inv, n * d)}
        big = out["l_ass"].echelon()
        assert all(big.contains(v) for v in out["l_inv"].vectors)
        return out

    def rass(i):
        col = {}
        for a in range(n):
            for b in range(n):
                v = _combo(F, (1, M.lact(a, M.lact(b, e[i]))),
                           (-1, M.lact_elem(A.mul_basis(a, b), e[i])))
                for k, x in v.items():
                    col[(a * n + b) * d + k] = x
        return col

    def rinv(i):
        col = {}
        for a in range(n):
            for k, x in M.lact(a, e[i]).items():
                col[a * d + k] = x
        return col

    out = {"r_ass": kernel(rass, n * n * d), "r_inv": kernel(rinv, n * d)}
    big = out["r_ass"].echelon()
    assert all(big.contains(v) for v in out["r_inv"].vectors)
    return out


def build_module(A: Algebra, name: str) -> RsModule:
    """Modules reachable by name from the command line."""
    name = name.strip().lower()
    simple: Dict[str, Callable[[Algebra], RsModule]] = {
        "regular": regular,
        "trivial": trivial,
        "coregular": coregular,
        "functions": functions_U,
        "forms": forms_top,
    }
    if name in simple:
        return simple[name](A)
    if name == "anti":
        return antisymmetrize(regular(A))
    if name == "bar":
        return bar(regular(A))
    if name == "c1":
        return c1_module(regular(A))
    if name == "c1-trivial":
        return c1_module(trivial(A))
    if name == "coregular_tensor_a":
        return m_tensor_a(coregular(A))
    raise PresetUnavailable(f"unknown module {name!r}")
