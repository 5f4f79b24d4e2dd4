"""Explicit 2-cocycles: central-extension cocycles, W_n(m) families, gl_n deformations.

Indices s, l, r (partial derivatives / coordinates) are 1-based as in the usual
notation x_1..x_n; k is the exponent in ∂^{p^k}.  A power x^{p^m−1} is taken
as the divided-power monomial x^{(p^m−1)} (the ordinary power differs by the
factor (p^m−1)!, which vanishes mod p when m ≥ 2).
"""
from __future__ import annotations

from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .algebra import Algebra, check_identities, multiply
from .cochains import Cochain, _acc, d_rsym
from .cohomology import NotACocycle
from .deform import linear_map_cochain, steenrod_square
from .linalg import vec_clean
from .modules import PresetUnavailable, regular, trivial
from .presets import DividedPowers
from .scalars import Number

__all__ = [
    "NotACocycle",
    "PreconditionFailed",
    "theta",
    "psi1",
    "psi2",
    "psi3",
    "psi4",
    "psi5",
    "osborn1",
    "osborn2",
    "partial_power_derivation",
    "eta",
    "eta_bar",
    "trace_form",
    "novikov_R",
    "cocycle_family",
]

Vec = Dict[int, Number]
Multi = Tuple[int, ...]
Poly = Dict[Multi, int]


class PreconditionFailed(ValueError):
    pass


def _checked(psi: Cochain) -> Cochain:
    if not d_rsym(psi).is_zero():
        raise NotACocycle("constructed cochain is not a cocycle")
    return psi


def _witt(A: Algebra) -> DividedPowers:
    if A.meta.get("preset") != "W":
        raise PresetUnavailable("this family is defined on W_n(m)")
    return DividedPowers(A.meta["p"], A.meta["m"])


def _witt_family(A: Algebra, fn: Callable[[DividedPowers, Multi, int, Multi, int], List[Tuple[Poly, int]]]
                 ) -> Cochain:
    """Build ψ(x^(a)∂_i, x^(b)∂_j) = Σ poly ∂_target from ``fn``."""
    dp = _witt(A)
    n = dp.n
    p = dp.p
    basis = [(dp.monomials[k // n], k % n) for k in range(A.dim)]
    terms = {}
    for ka, (a, i) in enumerate(basis):
        for kb, (b, j) in enumerate(basis):
            out: Dict[int, Number] = {}
            for poly, target in fn(dp, a, i, b, j):
                for mono, c in poly.items():
                    idx = dp.index[mono] * n + target
                    out[idx] = (out.get(idx, 0) + c) % p
            v = vec_clean(A.field, out)
            if v:
                terms[(ka, kb)] = v
    return Cochain(A, regular(A), 2, terms)


def _mono(a: Multi) -> Poly:
    return {tuple(a): 1}


def _dpow(dp: DividedPowers, u: Poly, l: int, times: int) -> Poly:
    return dp.partial_vec(u, l, times)


def _scale(u: Poly, c: int, p: int) -> Poly:
    return {k: (c * x) % p for k, x in u.items() if (c * x) % p}


def _check_index(dp: DividedPowers, *idx: int) -> None:
    for x in idx:
        if not 1 <= x <= dp.n:
            raise PreconditionFailed(f"index {x} outside 1..{dp.n}")


def _check_k(dp: DividedPowers, l: int, k: int) -> None:
    if not 0 <= k < dp.m[l]:
        raise PreconditionFailed(f"k must satisfy 0 <= k < m_{l + 1} = {dp.m[l]}")


def psi1(A: Algebra, s: int = 1, l: int = 1, r: int = 1) -> Cochain:
    """δ_{j,r} x_r^{(top)} (δ_{i,s} uv∂_l − x_s ∂_l(u) v ∂_i)."""
    dp = _witt(A)
    _check_index(dp, s, l, r)
    s, l, r = s - 1, l - 1, r - 1
    top = _mono(dp.top(r))
    xs = _mono(dp.unit_vector(s))

    def fn(dp, a, i, b, j):
        if j != r:
            return []
        u, v = _mono(a), _mono(b)
        out = []
        if i == s:
            out.append((dp.mul_vec(top, dp.mul_vec(u, v)), l))
        w = dp.mul_vec(top, dp.mul_vec(xs, dp.mul_vec(_dpow(dp, u, l, 1), v)))
        out.append((_scale(w, -1, dp.p), i))
        return out

    return _checked(_witt_family(A, fn))


def psi2(A: Algebra, l: int = 1, k: int = 0, r: int = 1) -> Cochain:
    """δ_{j,r} x_r^{(top)} ∂_l^{p^k}(u) v ∂_i."""
    dp = _witt(A)
    _check_index(dp, l, r)
    l, r = l - 1, r - 1
    _check_k(dp, l, k)
    top = _mono(dp.top(r))

    def fn(dp, a, i, b, j):
        if j != r:
            return []
        return [(dp.mul_vec(top, dp.mul_vec(_dpow(dp, _mono(a), l, dp.p ** k), _mono(b))), i)]

    return _checked(_witt_family(A, fn))


def psi3(A: Algebra, s: int = 1, l: int = 1) -> Cochain:
    """δ_{i,s} u ∂_j(v) ∂_l − x_s ∂_l(u) ∂_j(v) ∂_i."""
    dp = _witt(A)
    _check_index(dp, s, l)
    s, l = s - 1, l - 1
    xs = _mono(dp.unit_vector(s))

    def fn(dp, a, i, b, j):
        u, dv = _mono(a), _dpow(dp, _mono(b), j, 1)
        out = []
        if i == s:
            out.append((dp.mul_vec(u, dv), l))
        w = dp.mul_vec(xs, dp.mul_vec(_dpow(dp, u, l, 1), dv))
        out.append((_scale(w, -1, dp.p), i))
        return out

    return _checked(_witt_family(A, fn))


def psi4(A: Algebra, l: int = 1, k: int = 0) -> Cochain:
    """∂_l^{p^k}(u) ∂_j(v) ∂_i."""
    dp = _witt(A)
    _check_index(dp, l)
    l -= 1
    _check_k(dp, l, k)

    def fn(dp, a, i, b, j):
        return [(dp.mul_vec(_dpow(dp, _mono(a), l, dp.p ** k), _dpow(dp, _mono(b), j, 1)), i)]

    return _checked(_witt_family(A, fn))


def partial_power_derivation(A: Algebra, l: int = 1, k: int = 0) -> List[Vec]:
    """Columns of u∂_i ↦ ∂_l^{p^k}(u) ∂_i."""
    dp = _witt(A)
    _check_index(dp, l)
    l -= 1
    _check_k(dp, l, k)
    n = dp.n
    cols = []
    for idx in range(A.dim):
        a, i = dp.monomials[idx // n], idx % n
        b = dp.partial(a, l, dp.p ** k)
        cols.append({} if b is None else {dp.index[b] * n + i: 1})
    return cols


def psi5(A: Algebra, l: int = 1, k: int = 0) -> Cochain:
    """Sq ∂_l^{p^k}."""
    return steenrod_square(A, partial_power_derivation(A, l, k))


def _w1(A: Algebra) -> DividedPowers:
    dp = _witt(A)
    if dp.n != 1:
        raise PresetUnavailable("defined on W_1(m) only")
    return dp


def _osborn(A: Algebra, drop: int) -> Cochain:
    dp = _w1(A)
    w = _mono(dp.top(0, drop))

    def fn(dp, a, i, b, j):
        return [(dp.mul_vec(w, dp.mul_vec(_mono(a), _mono(b))), 0)]

    return _checked(_witt_family(A, fn))


def osborn1(A: Algebra) -> Cochain:
    """(u∂, v∂) ↦ x^{(p^m−1)} uv ∂."""
    return _osborn(A, 1)


def osborn2(A: Algebra) -> Cochain:
    """(u∂, v∂) ↦ x^{(p^m−2)} uv ∂."""
    return _osborn(A, 2)


def theta(A: Algebra) -> Cochain:
    """ϑ(e_i, e_j) = −(−1)^i δ_{i+j, p^m−1}, trivial coefficients."""
    dp = _w1(A)
    N = dp.bounds[0]
    terms = {}
    for ki in range(A.dim):
        for kj in range(A.dim):
            i, j = ki - 1, kj - 1
            if i + j == N - 1:
                terms[(ki, kj)] = {0: (-1 if i % 2 == 0 else 1)}
    return _checked(Cochain(A, trivial(A), 2, terms))


# -- gl_n ------------------------------------------------------------------------

def _gl_n(A: Algebra) -> int:
    if A.meta.get("preset") != "gl":
        raise PresetUnavailable("defined on gl_n")
    return A.meta["n"]


def trace_form(A: Algebra) -> List[Number]:
    n = _gl_n(A)
    return [1 if (k // n) == (k % n) else 0 for k in range(A.dim)]


def _trace(tr: List[Number], v: Vec) -> Number:
    return sum(tr[k] * x for k, x in v.items())


def _traceless(A: Algebra, X: Vec) -> None:
    if A.field.reduce(_trace(trace_form(A), X)):
        raise PreconditionFailed("X must be traceless")


def eta(A: Algebra, X: Vec) -> Cochain:
    """η_X(a, b) = (tr b)[X, a]."""
    _traceless(A, X)
    tr = trace_form(A)
    F = A.field
    terms = {}
    for a in range(A.dim):
        xa = multiply(A, X, {a: 1})
        ax = multiply(A, {a: 1}, X)
        bracket = vec_clean(F, {k: xa.get(k, 0) - ax.get(k, 0) for k in set(xa) | set(ax)})
        for b in range(A.dim):
            if tr[b] and bracket:
                terms[(a, b)] = {k: tr[b] * x for k, x in bracket.items()}
    return _checked(Cochain(A, regular(A), 2, terms))


def eta_bar(A: Algebra, X: Vec) -> Cochain:
    """η̄_X(a, b) = (tr b) X∘a − (tr a∘b) X + (tr a) X∘b."""
    _traceless(A, X)
    tr = trace_form(A)
    terms = {}
    for a in range(A.dim):
        for b in range(A.dim):
            out: Dict[int, Number] = {}
            _acc(out, multiply(A, X, {a: 1}), tr[b])
            _acc(out, X, -_trace(tr, A.mul_basis(a, b)))
            _acc(out, multiply(A, X, {b: 1}), tr[a])
            v = vec_clean(A.field, out)
            if v:
                terms[(a, b)] = v
    return _checked(Cochain(A, regular(A), 2, terms))


# -- Novikov central extensions ----------------------------------------------

def novikov_R(A: Algebra, R: Sequence[Vec], pi: Sequence[Number]) -> Cochain:
    """ϑ(a, b) = π(a∘R(b)) for R ∈ Der_0 and π∘R = 0."""
    F = A.field
    n = A.dim
    if not check_identities(A, ["Novikov"]).holds("Novikov"):
        raise PreconditionFailed("A is not a Novikov algebra")
    R = [vec_clean(F, dict(v)) for v in R]
    if len(R) != n or len(pi) != n:
        raise PreconditionFailed("R and π must have one entry per basis element")
    if not d_rsym(linear_map_cochain(A, R)).is_zero():
        raise PreconditionFailed("R is not a derivation")
    for a in range(n):
        for b in range(a + 1, n):
            u = multiply(A, {a: 1}, R[b])
            v = multiply(A, {b: 1}, R[a])
            if vec_clean(F, {k: u.get(k, 0) - v.get(k, 0) for k in set(u) | set(v)}):
                raise PreconditionFailed(f"a∘R(b) ≠ b∘R(a) at ({a}, {b})")
    for a in range(n):
        if F.reduce(_trace(list(pi), R[a])):
            raise PreconditionFailed("π∘R ≠ 0")
    terms = {}
    for a in range(n):
        for b in range(n):
            x = F.reduce(_trace(list(pi), multiply(A, {a: 1}, R[b])))
            if x:
                terms[(a, b)] = {0: x}
    return _checked(Cochain(A, trivial(A), 2, terms))


# -- name-based access (used by the CLI) ----------------------------------------

def cocycle_family(A: Algebra, family: str, params: Optional[Dict[str, str]] = None) -> Cochain:
    params = dict(params or {})

    def geti(key: str, default: int) -> int:
        try:
            return int(params.pop(key, default))
        except ValueError:
            raise PreconditionFailed(f"{key} must be an integer") from None

    family = family.strip().lower()
    if family == "theta":
        out = theta(A)
    elif family == "psi1":
        out = psi1(A, geti("s", 1), geti("l", 1), geti("r", 1))
    elif family == "psi2":
        out = psi2(A, geti("l", 1), geti("k", 0), geti("r", 1))
    elif family == "psi3":
        out = psi3(A, geti("s", 1), geti("l", 1))
    elif family == "psi4":
        out = psi4(A, geti("l", 1), geti("k", 0))
    elif family in ("psi5", "sq"):
        out = psi5(A, geti("l", 1), geti("k", 0))
    elif family == "osborn1":
        out = osborn1(A)
    elif family == "osborn2":
        out = osborn2(A)
    elif family in ("eta", "eta_bar"):
        name = params.pop("X", params.pop("x", "E12"))
        try:
            X = {A.index(name): 1}
        except ValueError:
            raise PreconditionFailed(f"unknown basis element {name!r}") from None
        out = eta(A, X) if family == "eta" else eta_bar(A, X)
    else:
        raise PreconditionFailed(f"unknown family {family!r}")
    if params:
        raise PreconditionFailed(f"unused parameter(s) {sorted(params)}")
    return out
