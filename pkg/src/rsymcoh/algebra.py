"""Finite-dimensional algebras given by structure constants."""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .linalg import SparseMatrix, SubspaceBasis, rank_nullspace, solve_linear, vec_clean
from .scalars import FieldSpec, Number

__all__ = [
    "Algebra",
    "IdentityReport",
    "NoSecondProduct",
    "InvalidParams",
    "GradingViolation",
    "multiply",
    "associator",
    "commutator",
    "check_identities",
    "left_structure",
    "LeftStructure",
]

Vec = Dict[int, Number]
Table = Dict[Tuple[int, int], Vec]


class NoSecondProduct(ValueError):
    pass


class InvalidParams(ValueError):
    pass


class GradingViolation(ValueError):
    pass


@dataclass
class Algebra:
    field: FieldSpec
    dim: int
    basis_names: List[str]
    circ: Table
    ast: Optional[Table] = None
    grading: Optional[List[int]] = None
    meta: dict = dc_field(default_factory=dict)

    def __post_init__(self) -> None:
        if len(self.basis_names) != self.dim:
            raise InvalidParams("basis_names length differs from dim")
        self.circ = self._clean_table(self.circ)
        if self.ast is not None:
            self.ast = self._clean_table(self.ast)
        if self.grading is not None:
            if len(self.grading) != self.dim:
                raise InvalidParams("grading length differs from dim")
            for name, table in (("circ", self.circ), ("ast", self.ast or {})):
                for (i, j), v in table.items():
                    for k in v:
                        if self.grading[k] != self.grading[i] + self.grading[j]:
                            raise GradingViolation(f"{name}: e{i}*e{j} has a component on e{k}")
        # dense lookup rows for the hot paths
        self._circ_rows: List[List[Vec]] = self._dense(self.circ)
        self._ast_rows = self._dense(self.ast) if self.ast is not None else None

    def _clean_table(self, table: Table) -> Table:
        out = {}
        for (i, j), v in table.items():
            if not (0 <= i < self.dim and 0 <= j < self.dim):
                raise InvalidParams(f"index pair {(i, j)} out of range")
            if any(not 0 <= k < self.dim for k in v):
                raise InvalidParams(f"product e{i}e{j} leaves the basis")
            w = vec_clean(self.field, v)
            if w:
                out[(i, j)] = w
        return out

    def _dense(self, table: Table) -> List[List[Vec]]:
        empty: Vec = {}
        rows = [[empty] * self.dim for _ in range(self.dim)]
        for (i, j), v in table.items():
            rows[i][j] = v
        return rows

    # -- products of basis elements -----------------------------------
    def mul_basis(self, i: int, j: int) -> Vec:
        """e_i ∘ e_j (shared dict; do not mutate)."""
        return self._circ_rows[i][j]

    def ast_basis(self, i: int, j: int) -> Vec:
        if self._ast_rows is None:
            raise NoSecondProduct("this algebra has no second product")
        return self._ast_rows[i][j]

    def bracket_basis(self, i: int, j: int) -> Vec:
        out = dict(self._circ_rows[i][j])
        for k, x in self._circ_rows[j][i].items():
            out[k] = out.get(k, 0) - x
        return vec_clean(self.field, out)

    def basis_vector(self, i: int) -> Vec:
        return {i: 1}

    def element(self, coords: Dict[int, Number]) -> Vec:
        return vec_clean(self.field, coords)

    def name_of(self, v: Vec) -> str:
        if not v:
            return "0"
        F = self.field
        return " + ".join(f"{F.fmt(x)}*{self.basis_names[k]}" for k, x in sorted(v.items()))

    def index(self, name: str) -> int:
        try:
            return self.basis_names.index(name)
        except ValueError:
            raise InvalidParams(f"no basis element called {name!r}") from None


def _bilinear(A: Algebra, x: Vec, y: Vec, lookup: Callable[[int, int], Vec]) -> Vec:
    out: Dict[int, Number] = {}
    for i, a in x.items():
        for j, b in y.items():
            ab = a * b
            for k, c in lookup(i, j).items():
                out[k] = out.get(k, 0) + ab * c
    return vec_clean(A.field, out)


def multiply(A: Algebra, x: Vec, y: Vec, which: str = "circ") -> Vec:
    if which == "circ":
        return _bilinear(A, x, y, A.mul_basis)
    if which == "ast":
        return _bilinear(A, x, y, A.ast_basis)
    raise ValueError(f"unknown product {which!r}")


def commutator(A: Algebra, x: Vec, y: Vec) -> Vec:
    return _bilinear(A, x, y, A.bracket_basis)


def associator(A: Algebra, x: Vec, y: Vec, z: Vec) -> Vec:
    """(x, y, z) = x∘(y∘z) − (x∘y)∘z."""
    left = multiply(A, x, multiply(A, y, z))
    right = multiply(A, multiply(A, x, y), z)
    out = dict(left)
    for k, c in right.items():
        out[k] = out.get(k, 0) - c
    return vec_clean(A.field, out)


# -- identities -------------------------------------------------------------

@dataclass
class IdentityResult:
    holds: bool
    witness: Optional[Tuple[int, ...]] = None
    defect: Optional[Vec] = None


@dataclass
class IdentityReport:
    results: Dict[str, IdentityResult]

    def __getitem__(self, name: str) -> IdentityResult:
        return self.results[name]

    def holds(self, name: str) -> bool:
        return self.results[name].holds

    def summary(self) -> Dict[str, bool]:
        return {k: r.holds for k, r in self.results.items()}


class _Acc:
    """Accumulates signed products of basis-indexed vectors into one dict."""

    __slots__ = ("out",)

    def __init__(self):
        self.out: Dict[int, Number] = {}

    def add(self, c: Number, v: Vec) -> None:
        out = self.out
        for k, x in v.items():
            out[k] = out.get(k, 0) + c * x


def _identity_defects(A: Algebra) -> Dict[str, Callable[[int, int, int], Vec]]:
    F = A.field
    P = A._circ_rows
    S = A._ast_rows

    def lmul(T, i, v, c, acc):      # acc += c * (e_i . v)
        row = T[i]
        for t, x in v.items():
            acc.add(c * x, row[t])

    def rmul(T, v, k, c, acc):      # acc += c * (v . e_k)
        for t, x in v.items():
            acc.add(c * x, T[t][k])

    def vmul(T, u, v, c, acc):      # acc += c * (u . v)
        for t, x in u.items():
            lmul(T, t, v, c * x, acc)

    def done(acc):
        return vec_clean(F, acc.out)

    def ass_into(i, j, k, c, acc):
        lmul(P, i, P[j][k], c, acc)
        rmul(P, P[i][j], k, -c, acc)

    def associative(i, j, k):
        acc = _Acc()
        ass_into(i, j, k, 1, acc)
        return done(acc)

    def right_symmetric(i, j, k):
        acc = _Acc()
        ass_into(i, j, k, 1, acc)
        ass_into(i, k, j, -1, acc)
        return done(acc)

    def left_symmetric(i, j, k):
        acc = _Acc()
        ass_into(i, j, k, 1, acc)
        ass_into(j, i, k, -1, acc)
        return done(acc)

    def novikov(i, j, k):
        acc = _Acc()
        lmul(P, i, P[j][k], 1, acc)
        lmul(P, j, P[i][k], -1, acc)
        return done(acc)

    def br(i, j):
        return A.bracket_basis(i, j)

    def vbr(u, v):
        acc = _Acc()
        vmul(P, u, v, 1, acc)
        vmul(P, v, u, -1, acc)
        return acc.out

    def jacobi(i, j, k):
        acc = _Acc()
        acc.add(1, vbr({i: 1}, br(j, k)))
        acc.add(1, vbr({j: 1}, br(k, i)))
        acc.add(1, vbr({k: 1}, br(i, j)))
        return done(acc)

    checks: Dict[str, Callable[[int, int, int], Vec]] = {
        "associative": associative,
        "right-symmetric": right_symmetric,
        "left-symmetric": left_symmetric,
        "Novikov": novikov,
        "Jacobi": jacobi,
    }
    if S is None:
        return checks

    def ast_left_commutative(i, j, k):
        acc = _Acc()
        lmul(S, i, S[j][k], 1, acc)
        lmul(S, j, S[i][k], -1, acc)
        return done(acc)

    def circ_ast_exchange(i, j, k):
        acc = _Acc()
        lmul(P, i, S[j][k], 1, acc)
        lmul(S, j, P[i][k], -1, acc)
        return done(acc)

    def commutators_agree(i, j, k):
        inner = _Acc()
        inner.add(1, S[i][j])
        inner.add(-1, S[j][i])
        inner.add(-1, P[i][j])
        inner.add(1, P[j][i])
        acc = _Acc()
        rmul(S, inner.out, k, 1, acc)
        return done(acc)

    def mixed_five_term(i, j, k):
        acc = _Acc()
        rmul(S, br(i, j), k, 1, acc)
        lmul(S, i, P[k][j], 1, acc)
        rmul(P, S[i][k], j, -1, acc)
        lmul(S, j, P[k][i], -1, acc)
        rmul(P, S[j][k], i, 1, acc)
        return done(acc)

    checks.update({
        "ast-left-commutative": ast_left_commutative,
        "circ-ast-exchange": circ_ast_exchange,
        "commutators-agree": commutators_agree,
        "mixed-five-term": mixed_five_term,
    })
    return checks


BI_MULTIPLICATION_IDENTITIES = (
    "right-symmetric",
    "ast-left-commutative",
    "circ-ast-exchange",
    "commutators-agree",
    "mixed-five-term",
)


def check_identities(A: Algebra, names: Optional[Sequence[str]] = None) -> IdentityReport:
    """Evaluate each identity on every basis triple, stopping at the first witness."""
    checks = _identity_defects(A)
    if names is not None:
        checks = {k: checks[k] for k in names}
    results = {}
    n = A.dim
    for name, fn in checks.items():
        res = IdentityResult(True)
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    d = fn(i, j, k)
                    if d:
                        res = IdentityResult(False, (i, j, k), d)
                        break
                if not res.holds:
                    break
            if not res.holds:
                break
        results[name] = res
    return IdentityReport(results)


# -- left centre, left units, left-associative part ------------------------

@dataclass
class LeftStructure:
    Z_l: SubspaceBasis
    left_unit: Optional[Vec]          # one particular solution of e∘a = a
    Q_l_directions: SubspaceBasis     # solutions differ by these (equals Z_l)
    l_ass: SubspaceBasis

    @property
    def Q_l_family_dim(self) -> int:
        """Dimension of the affine family of left units (-1 when empty)."""
        return -1 if self.left_unit is None else self.Q_l_directions.dim


def _left_mult_system(A: Algebra) -> SparseMatrix:
    """Rows indexed by (j, k): coefficient of e_k in x∘e_j, columns by x."""
    n = A.dim
    cols = []
    for i in range(n):
        col = {}
        for j in range(n):
            for k, c in A.mul_basis(i, j).items():
                col[j * n + k] = c
        cols.append(col)
    return SparseMatrix.from_columns(A.field, n * n, cols)


def left_structure(A: Algebra) -> LeftStructure:
    n = A.dim
    F = A.field
    M = _left_mult_system(A)
    _, Z = rank_nullspace(M)
    rhs = {j * n + j: 1 for j in range(n)}
    sol = solve_linear(M, rhs)
    unit, directions = (sol if sol is not None else (None, Z))
    # l_ass: x with (x, e_a, e_b) = 0 for all a, b
    cols = []
    for i in range(n):
        col: Dict[int, Number] = {}
        for a in range(n):
            for b in range(n):
                d = associator(A, {i: 1}, {a: 1}, {b: 1})
                for k, c in d.items():
                    col[(a * n + b) * n + k] = c
        cols.append(col)
    _, lass = rank_nullspace(SparseMatrix.from_columns(F, n * n * n, cols))
    return LeftStructure(Z, unit, directions, lass)
