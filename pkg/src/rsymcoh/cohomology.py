"""Cocycles, coboundaries and (co)homology dimensions.

Every space is handled in coordinates.  For C^k (k >= 1) the layout is the
one of :func:`rsym_keys`: lexicographic on ``(a0, increasing tail)`` with the
module index innermost.  Lie cochains use increasing k-tuples the same way.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import Algebra, check_identities
from .cochains import (
    Chain,
    Cochain,
    LieCochain,
    _boundary_terms,
    chain_keys,
    d_lie_matrix,
    d_rsym,
    d_rsym_matrix,
    lie_boundary,
    lie_keys,
    rsym_keys,
)
from .linalg import Echelon, SparseMatrix, SubspaceBasis, rank_nullspace, solve_linear, vec_clean
from .modules import RsModule, c1_module, invariant_subspaces, regular, trivial
from .scalars import Number

__all__ = [
    "CohomologyReport",
    "OutOfMemoryBudget",
    "NotACocycle",
    "NotNovikov",
    "AssociatorEscapesSubmodule",
    "DEFAULT_BUDGET",
    "cohomology",
    "is_coboundary",
    "express_class",
    "classes_independent",
    "nabla",
    "novikov_h2",
    "derivation_space",
    "homology",
    "lie_homology",
    "comparison",
]

Vec = Dict[int, Number]
DEFAULT_BUDGET = 10 ** 6


class OutOfMemoryBudget(RuntimeError):
    pass


class NotACocycle(ValueError):
    pass


class NotNovikov(ValueError):
    pass


class AssociatorEscapesSubmodule(ValueError):
    pass


@dataclass
class CohomologyReport:
    degree: int
    flavor: str
    dim_C: int
    dim_Z: int
    dim_B: int
    representatives: list
    kernel_basis: SubspaceBasis
    image_basis: SubspaceBasis
    extra: dict = dc_field(default_factory=dict)

    @property
    def dim_H(self) -> int:
        return self.dim_Z - self.dim_B


def _check_budget(budget: Optional[int], *sizes: int) -> None:
    if budget is not None and max(sizes) > budget:
        raise OutOfMemoryBudget(f"cochain space of dimension {max(sizes)} exceeds budget {budget}")


def _representatives(F, ambient: int, Z: SubspaceBasis, B: SubspaceBasis) -> List[Vec]:
    """Kernel vectors that are independent modulo B, in echelon order."""
    ech = Echelon(F, ambient)
    for v in B.vectors:
        ech.add(v)
    reps = []
    for z in Z.vectors:
        if ech.add(z):
            reps.append(z)
    return reps


def _d0_columns(A: Algebra, M: RsModule, lass: SubspaceBasis) -> List[Vec]:
    """Images d m (as C¹ coordinates) of the l.ass basis vectors m."""
    D = M.dim
    cols = []
    for m in lass.vectors:
        col: Dict[int, Number] = {}
        for a in range(A.dim):
            v = M.lact(a, m)
            w = M.ract(m, a)
            for i, x in v.items():
                col[a * D + i] = col.get(a * D + i, 0) + x
            for i, x in w.items():
                col[a * D + i] = col.get(a * D + i, 0) - x
        cols.append(vec_clean(A.field, col))
    return cols


def _l_ass(M: RsModule) -> SubspaceBasis:
    return invariant_subspaces(M)["l_ass"]


def cohomology(A: Algebra, M: RsModule, k: int, flavor: str = "rsym",
               budget: Optional[int] = DEFAULT_BUDGET) -> CohomologyReport:
    if k < 0:
        raise ValueError("degree must be non-negative")
    if flavor == "lie":
        return _lie_cohomology(A, M, k, budget)
    if flavor == "novikov":
        if k != 2:
            raise ValueError("Novikov cohomology is implemented in degree 2")
        return novikov_h2(A, budget)
    if flavor != "rsym":
        raise ValueError(f"unknown flavor {flavor!r}")
    F = A.field
    n, D = A.dim, M.dim
    if k == 0:
        lass = _l_ass(M)
        cols = _d0_columns(A, M, lass)
        # kernel inside l.ass, expressed in M coordinates
        d0 = SparseMatrix.from_columns(F, n * D, cols)
        _, ker = rank_nullspace(d0)
        Z = []
        for c in ker.vectors:
            v: Dict[int, Number] = {}
            for j, x in c.items():
                for i, y in lass.vectors[j].items():
                    v[i] = v.get(i, 0) + x * y
            Z.append(vec_clean(F, v))
        Zb = SubspaceBasis.span(F, D, Z)
        Bb = SubspaceBasis(D, F, [])
        reps = [Cochain.from_element(A, M, v) for v in Zb.vectors]
        return CohomologyReport(0, "rsym", lass.dim, Zb.dim, 0, reps, Zb, Bb)
    size_k = len(rsym_keys(n, k)) * D
    size_k1 = len(rsym_keys(n, k + 1)) * D
    _check_budget(budget, size_k, size_k1)
    _, Z = rank_nullspace(d_rsym_matrix(A, M, k))
    if k == 1:
        dim_prev = _l_ass(M)
        image_cols = _d0_columns(A, M, dim_prev)
    else:
        image_cols = d_rsym_matrix(A, M, k - 1).column_dicts()
    B = SubspaceBasis.span(F, size_k, image_cols)
    reps = [Cochain.from_coordinates(A, M, k, v)
            for v in _representatives(F, size_k, Z, B)]
    return CohomologyReport(k, "rsym", size_k, Z.dim, B.dim, reps, Z, B)


def _lie_from_coordinates(A: Algebra, M: RsModule, k: int, vec: Vec) -> LieCochain:
    keys = lie_keys(A.dim, k)
    D = M.dim
    terms: Dict[Tuple[int, ...], Vec] = {}
    for idx, x in vec.items():
        q, m = divmod(idx, D)
        terms.setdefault(keys[q], {})[m] = x
    return LieCochain(A, M, k, terms)


def _lie_coordinates(phi: LieCochain) -> Vec:
    D = phi.module.dim
    index = {key: i for i, key in enumerate(lie_keys(phi.algebra.dim, phi.degree))}
    out = {}
    for key, v in phi.terms.items():
        for m, x in v.items():
            out[index[key] * D + m] = x
    return out


def _lie_cohomology(A: Algebra, M: RsModule, k: int, budget: Optional[int]) -> CohomologyReport:
    """Chevalley–Eilenberg cohomology for the Lie action [a, m] = a∘m − m∘a."""
    F = A.field
    D = M.dim
    size_k = len(lie_keys(A.dim, k)) * D
    _check_budget(budget, size_k, len(lie_keys(A.dim, k + 1)) * D)
    _, Z = rank_nullspace(d_lie_matrix(A, M, k))
    if k == 0:
        B = SubspaceBasis(size_k, F, [])
    else:
        B = SubspaceBasis.span(F, size_k, d_lie_matrix(A, M, k - 1).column_dicts())
    reps = [_lie_from_coordinates(A, M, k, v) for v in _representatives(F, size_k, Z, B)]
    return CohomologyReport(k, "lie", size_k, Z.dim, B.dim, reps, Z, B)


def is_coboundary(psi: Cochain) -> Optional[Cochain]:
    """A primitive ω with d ω = ψ, or None when the class of ψ is nontrivial."""
    A, M = psi.algebra, psi.module
    F = A.field
    if psi.alternating is False:
        psi = psi.to_alternating()
    if psi.nargs >= 1 and not d_rsym(psi).is_zero():
        raise NotACocycle("d ψ ≠ 0")
    k = psi.nargs
    if k == 0:
        if psi.is_zero():
            return Cochain.zero(A, M, 0)
        if not d_rsym(psi).is_zero():
            raise NotACocycle("d m ≠ 0")
        return None
    if psi.is_zero():
        return Cochain.zero(A, M, k - 1)
    target = psi.coordinates()
    if k == 1:
        lass = _l_ass(M)
        cols = _d0_columns(A, M, lass)
        sol = solve_linear(SparseMatrix.from_columns(F, A.dim * M.dim, cols), target)
        if sol is None:
            return None
        x, _ = sol
        m: Dict[int, Number] = {}
        for j, c in x.items():
            for i, y in lass.vectors[j].items():
                m[i] = m.get(i, 0) + c * y
        return Cochain.from_element(A, M, vec_clean(F, m))
    sol = solve_linear(d_rsym_matrix(A, M, k - 1), target)
    if sol is None:
        return None
    return Cochain.from_coordinates(A, M, k - 1, sol[0])


def _coboundary_columns(A: Algebra, M: RsModule, k: int) -> List[Vec]:
    if k == 1:
        return _d0_columns(A, M, _l_ass(M))
    return d_rsym_matrix(A, M, k - 1).column_dicts()


def _checked_coordinates(c: Cochain) -> Vec:
    if not c.alternating:
        c = c.to_alternating()
    if not d_rsym(c).is_zero():
        raise NotACocycle("d ψ ≠ 0")
    return c.coordinates()


def express_class(psi: Cochain, cocycles: Sequence[Cochain]) -> Optional[List[Number]]:
    """Coefficients c with ψ − Σ c_i z_i a coboundary, or None if ψ is outside their span."""
    A, M, k = psi.algebra, psi.module, psi.nargs
    if k < 1:
        raise ValueError("classes are compared in degree >= 1")
    size = len(rsym_keys(A.dim, k)) * M.dim
    cols = [_checked_coordinates(z) for z in cocycles]
    cols += _coboundary_columns(A, M, k)
    sol = solve_linear(SparseMatrix.from_columns(A.field, size, cols), _checked_coordinates(psi))
    if sol is None:
        return None
    x = sol[0]
    return [x.get(i, 0) for i in range(len(cocycles))]


def classes_independent(cocycles: Sequence[Cochain]) -> bool:
    """True when the classes of the given cocycles are linearly independent in H^k."""
    if not cocycles:
        return True
    A, M, k = cocycles[0].algebra, cocycles[0].module, cocycles[0].nargs
    ech = Echelon(A.field, len(rsym_keys(A.dim, k)) * M.dim)
    for v in _coboundary_columns(A, M, k):
        ech.add(v)
    return all(ech.add(_checked_coordinates(z)) for z in cocycles)


def nabla(T: RsModule, mt: Vec, submodule: Optional[SubspaceBasis] = None) -> Cochain:
    """∇(m̃)(a, b) = m̃∘(a∘b) − (m̃∘a)∘b, a symmetric 2-cocycle.

    ``submodule`` is the subspace M ⊆ T that must contain every associator
    (m̃, e_a, e_b); by default no restriction is imposed.
    """
    A = T.algebra
    F = A.field
    ech = submodule.echelon() if submodule is not None else None
    terms = {}
    for a in range(A.dim):
        for b in range(A.dim):
            v = dict(T.ract_elem(mt, A.mul_basis(a, b)))
            for i, x in T.ract(T.ract(mt, a), b).items():
                v[i] = v.get(i, 0) - x
            v = vec_clean(F, v)
            if v and ech is not None and not ech.contains(v):
                raise AssociatorEscapesSubmodule(f"(m̃, e{a}, e{b}) leaves the submodule")
            if v:
                terms[(a, b)] = v
    return Cochain(A, T, 2, terms)


def _novikov_rows(A: Algebra) -> List[Vec]:
    """Rows of ψ ↦ ψ(a, b∘c) − ψ(b, a∘c) for ψ ∈ C²(A, K)."""
    n = A.dim
    rows = []
    index = {key: i for i, key in enumerate(rsym_keys(n, 2))}
    for a in range(n):
        for b in range(n):
            for c in range(n):
                row: Dict[int, Number] = {}
                for t, x in A.mul_basis(b, c).items():
                    row[index[(a, t)]] = row.get(index[(a, t)], 0) + x
                for t, x in A.mul_basis(a, c).items():
                    row[index[(b, t)]] = row.get(index[(b, t)], 0) - x
                row = vec_clean(A.field, row)
                if row:
                    rows.append(row)
    return rows


def novikov_h2(A: Algebra, budget: Optional[int] = DEFAULT_BUDGET) -> CohomologyReport:
    """H²_nov(A, K): rsym 2-cocycles with ψ(a, b∘c) = ψ(b, a∘c), modulo d C¹."""
    if not check_identities(A, ["Novikov", "right-symmetric"]).holds("Novikov"):
        raise NotNovikov("the algebra fails the Novikov identity")
    F = A.field
    K = trivial(A)
    n = A.dim
    size = len(rsym_keys(n, 2))
    _check_budget(budget, size, len(rsym_keys(n, 3)))
    d2 = d_rsym_matrix(A, K, 2)
    rows = d2.row_dicts() + _novikov_rows(A)
    _, Z = rank_nullspace(SparseMatrix.from_rows(F, size, rows))
    B = SubspaceBasis.span(F, size, d_rsym_matrix(A, K, 1).column_dicts())
    reps = [Cochain.from_coordinates(A, K, 2, v) for v in _representatives(F, size, Z, B)]
    return CohomologyReport(2, "novikov", size, Z.dim, B.dim, reps, Z, B)


def derivation_space(A: Algebra, budget: Optional[int] = DEFAULT_BUDGET) -> CohomologyReport:
    """Z¹_rsym(A, A) (derivations of ∘), with Z¹_lie(A, A) for comparison.

    ``extra`` holds ``dim_Z_lie`` and ``injective``: whether antisymmetrization
    (the identity in degree one) embeds Z¹_rsym into Z¹_lie.
    """
    M = regular(A)
    rep = cohomology(A, M, 1, "rsym", budget)
    lie = cohomology(A, M, 1, "lie", budget)
    # in degree one both complexes use the same coordinates (a, m)
    lie_ech = lie.kernel_basis.echelon()
    injective = all(lie_ech.contains(v) for v in rep.kernel_basis.vectors)
    rep.extra = {"dim_Z_lie": lie.dim_Z, "injective": injective}
    return rep


# -- homology ---------------------------------------------------------------

def _r_ass(M: RsModule) -> SubspaceBasis:
    subs = invariant_subspaces(M)
    return subs["r_ass"] if "r_ass" in subs else subs["l_ass"]


def _boundary_matrix(A: Algebra, M: RsModule, k: int) -> SparseMatrix:
    """∂: C_k → C_{k−1} for k ≥ 2 in the chain_keys layout."""
    src = chain_keys(A, M, k)
    dst = {key: i for i, key in enumerate(chain_keys(A, M, k - 1))}
    cols = []
    for (m, a0, tail) in src:
        out: Dict = {}
        _boundary_terms(A, M, m, a0, tail, 1, out)
        cols.append({dst[key]: x for key, x in out.items() if A.field.reduce(x)})
    return SparseMatrix.from_columns(A.field, len(dst), cols)


def _chain_from_coordinates(A: Algebra, M: RsModule, k: int, vec: Vec) -> Chain:
    keys = chain_keys(A, M, k)
    return Chain(A, M, k, {keys[i]: x for i, x in vec.items()})


def homology(A: Algebra, M: RsModule, k: int,
             budget: Optional[int] = DEFAULT_BUDGET) -> CohomologyReport:
    """H_k of the chain complex M⊗A⊗Λ^{k−1}A with C_0 = M^{r.ass} and ∂_1 = 0."""
    F = A.field
    if k < 0:
        raise ValueError("degree must be non-negative")
    if k == 0:
        rass = _r_ass(M)
        Zb = SubspaceBasis(M.dim, F, rass.vectors)
        Bb = SubspaceBasis(M.dim, F, [])
        reps = [Chain(A, M, 0, {(i, 0, ()): x for i, x in v.items()}) for v in Zb.vectors]
        return CohomologyReport(0, "rsym-homology", rass.dim, rass.dim, 0, reps, Zb, Bb)
    size = len(chain_keys(A, M, k))
    _check_budget(budget, size, len(chain_keys(A, M, k + 1)))
    if k == 1:
        Z = SubspaceBasis(size, F, [{i: 1} for i in range(size)])
    else:
        _, Z = rank_nullspace(_boundary_matrix(A, M, k))
    B = SubspaceBasis.span(F, size, _boundary_matrix(A, M, k + 1).column_dicts())
    reps = [_chain_from_coordinates(A, M, k, v) for v in _representatives(F, size, Z, B)]
    return CohomologyReport(k, "rsym-homology", size, Z.dim, B.dim, reps, Z, B)


def _lie_boundary_matrix(A: Algebra, N: RsModule, k: int) -> SparseMatrix:
    src = [(n, w) for n in range(N.dim) for w in lie_keys(A.dim, k)]
    dst = {key: i for i, key in enumerate((n, w) for n in range(N.dim) for w in lie_keys(A.dim, k - 1))}
    cols = []
    for n, w in src:
        out = lie_boundary(A, N, n, w)
        cols.append({dst[key]: x for key, x in out.items() if A.field.reduce(x)})
    return SparseMatrix.from_columns(A.field, len(dst), cols)


def lie_homology(A: Algebra, N: RsModule, k: int,
                 budget: Optional[int] = DEFAULT_BUDGET) -> CohomologyReport:
    """Chevalley–Eilenberg homology of N ⊗ Λ^k A for the Lie action x·n = x∘n − n∘x."""
    F = A.field
    size = N.dim * len(lie_keys(A.dim, k))
    _check_budget(budget, size, N.dim * len(lie_keys(A.dim, k + 1)))
    if k == 0:
        Z = SubspaceBasis(size, F, [{i: 1} for i in range(size)])
    else:
        _, Z = rank_nullspace(_lie_boundary_matrix(A, N, k))
    B = SubspaceBasis.span(F, size, _lie_boundary_matrix(A, N, k + 1).column_dicts())
    reps = _representatives(F, size, Z, B)
    return CohomologyReport(k, "lie-homology", size, Z.dim, B.dim, reps, Z, B)


def comparison(A: Algebra, M: RsModule, k: int,
               budget: Optional[int] = DEFAULT_BUDGET) -> Tuple[int, int]:
    """(dim H^{k+1}_rsym(A, M), dim H^k_lie(A, C¹(A, M))), computed separately."""
    if k < 1:
        raise ValueError("the comparison holds for k >= 1")
    rs = cohomology(A, M, k + 1, "rsym", budget).dim_H
    lie = cohomology(A, c1_module(M), k, "lie", budget).dim_H
    return rs, lie
