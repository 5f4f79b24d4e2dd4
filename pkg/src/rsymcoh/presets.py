"""Preset algebras: matrix algebras gl(n), divided powers O_n(m), and W_n(m).

Monomials of the divided-power algebra are multi-indices ``alpha`` with
``0 <= alpha_i < p**m_i``; the product is
``x^(a) x^(b) = C(a+b, a) x^(a+b)`` (zero when some exponent overflows, which
is consistent because the binomial vanishes mod p in that case).
"""
from __future__ import annotations

import itertools
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import Algebra, InvalidParams
from .scalars import FieldSpec, GF, Q, binomial_in_field

__all__ = [
    "DividedPowers",
    "gl",
    "divided_power_algebra",
    "witt",
    "w1m",
    "build_preset",
    "parse_preset",
]

Multi = Tuple[int, ...]


class DividedPowers:
    """Bookkeeping for the monomial basis of O_n(m) over F_p."""

    def __init__(self, p: int, m: Sequence[int]):
        if not m or any(mi < 1 for mi in m):
            raise InvalidParams("m must be a non-empty list of positive integers")
        self.field = GF(p)
        self.p = p
        self.m = tuple(m)
        self.n = len(m)
        self.bounds = tuple(p ** mi for mi in m)
        self.monomials: List[Multi] = list(itertools.product(*(range(b) for b in self.bounds)))
        self.index: Dict[Multi, int] = {a: i for i, a in enumerate(self.monomials)}

    @property
    def dim(self) -> int:
        return len(self.monomials)

    def name(self, a: Multi) -> str:
        if self.n == 1:
            return f"x^({a[0]})"
        return "x^(" + ",".join(map(str, a)) + ")"

    def mul(self, a: Multi, b: Multi) -> Tuple[int, Optional[Multi]]:
        """Coefficient and monomial of x^(a) x^(b); monomial None means zero."""
        c = 1
        out = []
        for ai, bi, bound in zip(a, b, self.bounds):
            s = ai + bi
            if s >= bound:
                return 0, None
            c = c * binomial_in_field(s, ai, self.field) % self.p
            if not c:
                return 0, None
            out.append(s)
        return c, tuple(out)

    def mul_vec(self, u: Dict[Multi, int], v: Dict[Multi, int]) -> Dict[Multi, int]:
        out: Dict[Multi, int] = {}
        for a, x in u.items():
            for b, y in v.items():
                c, ab = self.mul(a, b)
                if ab is not None:
                    out[ab] = (out.get(ab, 0) + c * x * y) % self.p
        return {k: x for k, x in out.items() if x}

    def partial(self, a: Multi, i: int, times: int = 1) -> Optional[Multi]:
        """∂_i^times x^(a) = x^(a - times*eps_i), or None."""
        if a[i] < times:
            return None
        b = list(a)
        b[i] -= times
        return tuple(b)

    def partial_vec(self, u: Dict[Multi, int], i: int, times: int = 1) -> Dict[Multi, int]:
        out = {}
        for a, x in u.items():
            b = self.partial(a, i, times)
            if b is not None:
                out[b] = x
        return out

    def monomial(self, a: Multi) -> Dict[Multi, int]:
        return {tuple(a): 1}

    def top(self, i: int, drop: int = 1) -> Multi:
        """The exponent vector with x_i^(p^{m_i} - drop) and zeros elsewhere."""
        a = [0] * self.n
        a[i] = self.bounds[i] - drop
        return tuple(a)

    def unit_vector(self, i: int) -> Multi:
        a = [0] * self.n
        a[i] = 1
        return tuple(a)


def gl(n: int, field: FieldSpec = Q) -> Algebra:
    """Matrix units E_ij (index i*n + j) with matrix multiplication."""
    if n < 1:
        raise InvalidParams("n must be positive")
    circ = {}
    for i in range(n):
        for j in range(n):
            for l in range(n):
                circ[(i * n + j, j * n + l)] = {i * n + l: 1}
    names = [f"E{i + 1}{j + 1}" for i in range(n) for j in range(n)]
    return Algebra(field, n * n, names, circ, meta={"preset": "gl", "n": n})


def divided_power_algebra(n: int, m: Sequence[int], p: int) -> Algebra:
    if len(m) != n:
        raise InvalidParams("m must have n entries")
    dp = DividedPowers(p, m)
    circ = {}
    for a in dp.monomials:
        for b in dp.monomials:
            c, ab = dp.mul(a, b)
            if ab is not None:
                circ[(dp.index[a], dp.index[b])] = {dp.index[ab]: c}
    grading = [sum(a) for a in dp.monomials]
    return Algebra(dp.field, dp.dim, [dp.name(a) for a in dp.monomials], circ,
                   grading=grading, meta={"preset": "O", "n": n, "m": tuple(m), "p": p})


def witt(n: int, m: Sequence[int], p: int) -> Algebra:
    """W_n(m): basis x^(a)∂_i at index ``idx(a)*n + i``.

    u∂_i ∘ v∂_j = v ∂_j(u) ∂_i   and   u∂_i ∗ v∂_j = ∂_i(u) v ∂_j.
    """
    if len(m) != n:
        raise InvalidParams("m must have n entries")
    dp = DividedPowers(p, m)
    circ: Dict[Tuple[int, int], Dict[int, int]] = {}
    ast: Dict[Tuple[int, int], Dict[int, int]] = {}

    def idx(a: Multi, i: int) -> int:
        return dp.index[a] * n + i

    for a in dp.monomials:
        for i in range(n):
            for b in dp.monomials:
                for j in range(n):
                    # circ: v ∂_j(u) ∂_i with u = x^(a), v = x^(b)
                    da = dp.partial(a, j)
                    if da is not None:
                        c, prod = dp.mul(b, da)
                        if prod is not None:
                            circ[(idx(a, i), idx(b, j))] = {idx(prod, i): c}
                    # ast: ∂_i(u) v ∂_j
                    da = dp.partial(a, i)
                    if da is not None:
                        c, prod = dp.mul(da, b)
                        if prod is not None:
                            ast[(idx(a, i), idx(b, j))] = {idx(prod, j): c}
    names = []
    grading = []
    for a in dp.monomials:
        for i in range(n):
            names.append(f"{dp.name(a)}d{i + 1}")
            grading.append(sum(a) - 1)
    return Algebra(dp.field, n * dp.dim, names, circ, ast, grading,
                   meta={"preset": "W", "n": n, "m": tuple(m), "p": p})


def w1m(p: int, m: int = 1) -> Algebra:
    """W_1(m) with basis e_i = x^(i+1)∂ for i = -1 .. p^m - 2.

    Index ``k`` in the structure tables holds e_{k-1}.  Same tables as
    ``witt(1, [m], p)``; only the names differ.
    """
    A = witt(1, [m], p)
    A.basis_names = [f"e{k - 1}" for k in range(A.dim)]
    A.meta = {"preset": "W", "n": 1, "m": (m,), "p": p, "labels": "e"}
    return A


# -- preset specification strings -----------------------------------------

def _parse_params(text: str) -> Dict[str, str]:
    """Split ``n=2,p=5,m=1,1`` into {'n': '2', 'p': '5', 'm': '1,1'}."""
    params: Dict[str, str] = {}
    key = None
    for piece in text.split(","):
        piece = piece.strip()
        if not piece:
            raise InvalidParams(f"empty parameter in {text!r}")
        if "=" in piece:
            key, value = piece.split("=", 1)
            key = key.strip()
            if key in params:
                raise InvalidParams(f"parameter {key!r} given twice")
            params[key] = value.strip()
        elif key is not None:
            params[key] += "," + piece
        else:
            raise InvalidParams(f"cannot parse {text!r}")
    return params


def _int(params: Dict[str, str], key: str, default: Optional[int] = None) -> int:
    if key not in params:
        if default is None:
            raise InvalidParams(f"missing parameter {key!r}")
        return default
    try:
        return int(params[key])
    except ValueError:
        raise InvalidParams(f"parameter {key!r} must be an integer") from None


def _int_list(params: Dict[str, str], key: str, length: int) -> List[int]:
    if key not in params:
        return [1] * length
    try:
        vals = [int(x) for x in params[key].split(",")]
    except ValueError:
        raise InvalidParams(f"parameter {key!r} must be integers") from None
    if len(vals) == 1 and length > 1:
        vals = vals * length
    if len(vals) != length:
        raise InvalidParams(f"parameter {key!r} needs {length} entries")
    return vals


def parse_preset(spec: str) -> Tuple[str, Dict[str, str]]:
    name, _, rest = spec.partition(":")
    name = name.strip().lower()
    return name, (_parse_params(rest) if rest.strip() else {})


def build_preset(spec: str) -> Algebra:
    """Build an algebra from ``gl:n=2``, ``w1m:p=5,m=1``, ``w:n=2,p=5,m=1,1``,
    or ``o:n=1,p=5,m=2``.  ``gl`` also accepts ``p=`` for a prime field."""
    name, params = parse_preset(spec)
    known = {"gl": {"n", "p"}, "w1m": {"p", "m"}, "w": {"n", "p", "m"}, "o": {"n", "p", "m"}}
    if name not in known:
        raise InvalidParams(f"unknown preset {name!r}")
    extra = set(params) - known[name]
    if extra:
        raise InvalidParams(f"unknown parameter(s) {sorted(extra)} for {name}")
    try:
        if name == "gl":
            p = _int(params, "p", 0)
            return gl(_int(params, "n"), GF(p) if p else Q)
        p = _int(params, "p")
        if name == "w1m":
            return w1m(p, _int(params, "m", 1))
        n = _int(params, "n")
        m = _int_list(params, "m", n)
        if name == "w":
            return witt(n, m, p)
        return divided_power_algebra(n, m, p)
    except ValueError as exc:
        if isinstance(exc, InvalidParams):
            raise
        raise InvalidParams(str(exc)) from exc
