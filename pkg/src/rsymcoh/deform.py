"""Formal deformations μ_t = μ_0 + tμ_1 + t²μ_2 + … of a right-symmetric product.

All cochains here take values in the regular module.  There is no symbolic
``t``: a series is the list of its coefficients and every order-k condition
is checked as an exact cochain identity.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .algebra import Algebra, multiply
from .cochains import Cochain, _acc, d_rsym, d_rsym_matrix, rsym_keys
from .cohomology import is_coboundary
from .linalg import solve_linear, vec_clean
from .modules import RsModule, regular
from .scalars import Number, steenrod_coefficient

__all__ = [
    "DeformationSeries",
    "ObstructionFailure",
    "OrderReport",
    "SeriesNotVerified",
    "NotADerivation",
    "WrongCharacteristic",
    "product_cochain",
    "star",
    "gerstenhaber",
    "obstruction",
    "prolong",
    "verify_deformation",
    "apply_equivalence",
    "steenrod_square",
    "linear_map_cochain",
]

Vec = Dict[int, Number]


class SeriesNotVerified(ValueError):
    pass


class NotADerivation(ValueError):
    pass


class WrongCharacteristic(ValueError):
    pass


def _regular_of(A: Algebra, M: Optional[RsModule] = None) -> RsModule:
    return M if M is not None else regular(A)


def product_cochain(A: Algebra, M: Optional[RsModule] = None) -> Cochain:
    """μ_0(a, b) = a∘b as a 2-cochain."""
    M = _regular_of(A, M)
    return Cochain(A, M, 2, {(i, j): dict(A.mul_basis(i, j))
                             for i in range(A.dim) for j in range(A.dim)})


def linear_map_cochain(A: Algebra, columns: Sequence[Vec], M: Optional[RsModule] = None) -> Cochain:
    """The 1-cochain e_j ↦ columns[j]."""
    M = _regular_of(A, M)
    return Cochain(A, M, 1, {(j,): dict(v) for j, v in enumerate(columns)})


def star(psi: Cochain, phi: Cochain) -> Cochain:
    """(ψ⋆φ)(a,b,c) = ψ(a,φ(b,c)) − ψ(φ(a,b),c) − ψ(a,φ(c,b)) + ψ(φ(a,c),b)."""
    A = psi.algebra
    F = A.field

    def at(a: int, b: int, c: int) -> Vec:
        out: Dict[int, Number] = {}
        _acc(out, psi.value_at((a, phi.value((b, c)))))
        _acc(out, psi.value_at((phi.value((a, b)), c)), -1)
        _acc(out, psi.value_at((a, phi.value((c, b)))), -1)
        _acc(out, psi.value_at((phi.value((a, c)), b)))
        return out

    terms = {}
    for a, b, c in rsym_keys(A.dim, 3):
        v = vec_clean(F, at(a, b, c))
        if v:
            terms[(a, b, c)] = v
    return Cochain(A, psi.module, 3, terms)


def gerstenhaber(alpha: Cochain, beta: Cochain, which: str = "comp_ast") -> Cochain:
    """Gerstenhaber's insertion ``α∗β`` or cup ``α⌣β`` on full multilinear maps.

    With α of arity k+1 and β of arity l+1:
    α∗β(a_1..a_{k+l+1}) = Σ_{s=1}^{k+1} (−1)^{(s+1)l} α(a_1..a_{s−1}, β(a_s..a_{s+l}), ..),
    α⌣β(a_1..a_{k+l+2}) = α(a_1..a_{k+1}) ∘ β(a_{k+2}..).
    """
    A = alpha.algebra
    F = A.field
    ka, kb = alpha.nargs, beta.nargs
    if which == "comp_ast":
        l = kb - 1
        nout = ka + kb - 1

        def at(t):
            out: Dict[int, Number] = {}
            for s in range(1, ka + 1):
                inner = beta.value(t[s - 1:s + l])
                if not inner:
                    continue
                args = t[:s - 1] + (inner,) + t[s + l:]
                sign = -1 if ((s + 1) * l) % 2 else 1
                _acc(out, alpha.value_at(args), sign)
            return out
    elif which == "smile":
        nout = ka + kb

        def at(t):
            return multiply(A, alpha.value(t[:ka]), beta.value(t[ka:]))
    else:
        raise ValueError(f"unknown composition {which!r}")
    terms = {}
    for t in itertools.product(range(A.dim), repeat=nout):
        v = vec_clean(F, at(t))
        if v:
            terms[t] = v
    return Cochain(A, alpha.module, nout, terms, alternating=False)


# -- series ---------------------------------------------------------------

@dataclass
class OrderReport:
    k: int
    holds: bool
    witness: Optional[Tuple[int, ...]] = None
    defect: Optional[Vec] = None
    obstruction_dimH: Optional[int] = None


@dataclass
class DeformationSeries:
    algebra: Algebra
    terms: List[Cochain]
    verified_up_to: int = -1

    def __post_init__(self) -> None:
        if not self.terms:
            self.terms = [product_cochain(self.algebra)]
        mu0 = self.terms[0]
        if not (mu0 - product_cochain(self.algebra, mu0.module)).is_zero():
            raise ValueError("μ_0 must be the algebra's product")
        self.verified_up_to = max(self.verified_up_to, 0)

    @classmethod
    def from_first_order(cls, A: Algebra, mu1: Cochain) -> "DeformationSeries":
        return cls(A, [product_cochain(A, mu1.module), mu1])

    @property
    def order(self) -> int:
        return len(self.terms) - 1

    def term(self, k: int) -> Cochain:
        if k < len(self.terms):
            return self.terms[k]
        return Cochain.zero(self.algebra, self.terms[0].module, 2)

    def copy(self) -> "DeformationSeries":
        return DeformationSeries(self.algebra, list(self.terms), self.verified_up_to)


def _obs(s: DeformationSeries, k: int) -> Cochain:
    A = s.algebra
    total = Cochain.zero(A, s.terms[0].module, 3)
    for l in range(1, k):
        a, b = s.term(l), s.term(k - l)
        if a.is_zero() or b.is_zero():
            continue
        total = total + star(a, b)
    return total


def verify_deformation(s: DeformationSeries, K: int) -> List[OrderReport]:
    """Check (DFR.1) … (DFR.K); ``verified_up_to`` becomes the last order
    before the first failure."""
    reports = []
    first_fail = None
    for k in range(1, K + 1):
        lhs = _obs(s, k) + d_rsym(s.term(k))
        if lhs.is_zero():
            reports.append(OrderReport(k, True))
        else:
            key = min(lhs.terms)
            reports.append(OrderReport(k, False, key, lhs.terms[key]))
            if first_fail is None:
                first_fail = k
    s.verified_up_to = (K if first_fail is None else first_fail - 1)
    return reports


@dataclass
class ObstructionFailure:
    k: int
    obstruction: Cochain
    series: DeformationSeries   # the part that did prolong (orders < k)


def obstruction(s: DeformationSeries, k: int) -> Tuple[Cochain, bool]:
    """Obs_k = Σ_{l=1}^{k−1} μ_l ⋆ μ_{k−l}, and whether its class vanishes."""
    if k < 2:
        raise ValueError("obstructions start at order 2")
    if s.verified_up_to < k - 1:
        raise SeriesNotVerified(f"series verified only up to order {s.verified_up_to}")
    obs = _obs(s, k)
    if not d_rsym(obs).is_zero():
        raise AssertionError("obstruction is not a cocycle although lower orders hold")
    return obs, is_coboundary(obs) is not None


def prolong(s: DeformationSeries, K: int) -> Union[DeformationSeries, ObstructionFailure]:
    """Extend the series to order K by solving d μ_k = −Obs_k at each order."""
    A = s.algebra
    M = s.terms[0].module
    out = s.copy()
    if out.verified_up_to < out.order:
        verify_deformation(out, out.order)
        if out.verified_up_to < out.order:
            raise SeriesNotVerified(f"given terms fail at order {out.verified_up_to + 1}")
    matrix = None
    for k in range(out.order + 1, K + 1):
        obs, _ = obstruction(out, k)
        if obs.is_zero():
            mu = Cochain.zero(A, M, 2)
        else:
            if matrix is None:
                matrix = d_rsym_matrix(A, M, 2)
            sol = solve_linear(matrix, obs.scale(-1).coordinates())
            if sol is None:
                return ObstructionFailure(k, obs, out)
            mu = Cochain.from_coordinates(A, M, 2, sol[0])
        out.terms.append(mu)
        out.verified_up_to = k
    return out


# -- equivalences ----------------------------------------------------------

def _columns(c: Cochain) -> List[Vec]:
    return [c.value((j,)) for j in range(c.algebra.dim)]


def _apply_lin(cols: List[Vec], v: Vec) -> Vec:
    out: Dict[int, Number] = {}
    for j, x in v.items():
        _acc(out, cols[j], x)
    return out


def apply_equivalence(s: DeformationSeries, g: Sequence[Cochain],
                      K: Optional[int] = None) -> DeformationSeries:
    """ν_t(a, b) = g_t^{-1}(μ_t(g_t a, g_t b)) truncated at order K,
    with g_t = id + t g_1 + t² g_2 + …."""
    A = s.algebra
    F = A.field
    n = A.dim
    M = s.terms[0].module
    if K is None:
        K = max(s.order, len(g))
    ident = [{j: 1} for j in range(n)]
    gs = [ident] + [_columns(x) for x in g]
    gs += [[{} for _ in range(n)]] * (K + 1 - len(gs))
    # h = g^{-1}: h_0 = id, h_m = −Σ_{i=1}^m g_i h_{m−i}
    hs = [ident]
    for m in range(1, K + 1):
        cols = []
        for j in range(n):
            out: Dict[int, Number] = {}
            for i in range(1, m + 1):
                _acc(out, _apply_lin(gs[i], hs[m - i][j]), -1)
            cols.append(vec_clean(F, out))
        hs.append(cols)
    terms = []
    for k in range(K + 1):
        tk = {}
        for a in range(n):
            for b in range(n):
                out: Dict[int, Number] = {}
                for i, j, l in itertools.product(range(k + 1), repeat=3):
                    r = k - i - j - l
                    if r < 0:
                        continue
                    mu = s.term(j)
                    if mu.is_zero():
                        continue
                    ga, gb = gs[l][a], gs[r][b]
                    if not ga or not gb:
                        continue
                    _acc(out, _apply_lin(hs[i], mu.value_at((ga, gb))))
                v = vec_clean(F, out)
                if v:
                    tk[(a, b)] = v
        terms.append(Cochain(A, M, 2, tk))
    result = DeformationSeries(A, terms)
    if K >= 1 and g:
        expected = s.term(1) + d_rsym(g[0])
        if not (expected - terms[1]).is_zero():
            raise AssertionError("first-order term differs from μ_1 + d g_1")
    if s.verified_up_to >= K:
        verify_deformation(result, K)
    return result


# -- Steenrod squares -------------------------------------------------------

def _derivation_check(A: Algebra, cols: List[Vec], M: RsModule) -> bool:
    return d_rsym(linear_map_cochain(A, cols, M)).is_zero()


def steenrod_square(A: Algebra, D: Sequence[Vec], M: Optional[RsModule] = None) -> Cochain:
    """Sq D(a, b) = Σ_{i=1}^{p−1} D^i(a)∘D^{p−i}(b) / (i!(p−i)!).

    ``D[j]`` is the image of the j-th basis vector.
    """
    F = A.field
    p = F.characteristic
    if not p:
        raise WrongCharacteristic("Steenrod squares need a field of positive characteristic")
    M = _regular_of(A, M)
    n = A.dim
    cols = [vec_clean(F, dict(v)) for v in D]
    if len(cols) != n:
        raise ValueError("D needs one column per basis element")
    if not _derivation_check(A, cols, M):
        raise NotADerivation("D is not a derivation (not in Z¹_rsym(A, A))")
    powers = [[{j: 1} for j in range(n)]]
    for _ in range(p):
        powers.append([vec_clean(F, _apply_lin(cols, v)) for v in powers[-1]])
    if not _derivation_check(A, powers[p], M):
        raise AssertionError("D^p is not a derivation")
    coef = [0] + [steenrod_coefficient(i, p) for i in range(1, p)]
    terms = {}
    for a in range(n):
        for b in range(n):
            out: Dict[int, Number] = {}
            for i in range(1, p):
                x, y = powers[i][a], powers[p - i][b]
                if x and y:
                    _acc(out, multiply(A, x, y), coef[i])
            v = vec_clean(F, out)
            if v:
                terms[(a, b)] = v
    sq = Cochain(A, M, 2, terms)
    if not d_rsym(sq).is_zero():
        raise AssertionError("Sq D is not a cocycle")
    return sq
