"""Cochains, chains and the operators acting on them.

A :class:`Cochain` with ``nargs = k`` is a multilinear map
``psi(a_0, a_1, ..., a_{k-1})`` into a module.  When ``alternating`` is true
(the normal case) it is skew-symmetric in ``a_1 .. a_{k-1}`` and only keys with
a strictly increasing tail are stored; when false every argument tuple is a
key, which is what face maps and the insertion products produce.

Operator formulas are written once as "evaluate at this basis tuple" functions
that take an evaluator ``ev(tuple) -> vector``.  The same formula then serves
two purposes: applied to a concrete cochain it computes the image, and applied
to the *universal* evaluator (see :func:`operator_matrix`) it produces the
matrix of the operator in a single sweep over the output keys.  The universal
evaluator returns vectors whose integer keys pack
``(input coordinate, current module index)`` as ``coord * D + m``; the module
actions below only ever touch ``m``.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple, Union

from .algebra import Algebra
from .linalg import SparseMatrix, vec_clean
from .modules import RsModule
from .scalars import FieldSpec, Number

__all__ = [
    "Cochain",
    "LieCochain",
    "Chain",
    "Pairing",
    "NotLeftAssociative",
    "WrongModule",
    "InvalidPairing",
    "DegreeZero",
    "face_map",
    "d_rsym",
    "d_lie",
    "interior",
    "rho_action",
    "rho_lie",
    "first_slot",
    "antisymmetrize_f",
    "lift_F",
    "lift_F_inverse",
    "cup_product",
    "scalar_pairing",
    "bar_pairing",
    "t_operator",
    "boundary",
    "lie_boundary",
    "rsym_keys",
    "lie_keys",
    "operator_matrix",
]

Vec = Dict[int, Number]
Key = Tuple[int, ...]
Arg = Union[int, Vec]
Evaluator = Callable[[Key], Vec]


class NotLeftAssociative(ValueError):
    pass


class WrongModule(ValueError):
    pass


class InvalidPairing(ValueError):
    pass


class DegreeZero(ValueError):
    pass


# -- small helpers ---------------------------------------------------------

@lru_cache(maxsize=None)
def sort_sign(t: Key) -> Tuple[int, Key]:
    """Sign of the sorting permutation of ``t`` and the sorted tuple (0 on repeats)."""
    if len(set(t)) < len(t):
        return 0, t
    inv = 0
    for i in range(len(t)):
        for j in range(i + 1, len(t)):
            if t[i] > t[j]:
                inv += 1
    return (-1 if inv % 2 else 1), tuple(sorted(t))


def _acc(out: Dict[int, Number], v: Vec, c: Number = 1) -> None:
    for k, x in v.items():
        out[k] = out.get(k, 0) + c * x


def _support(arg: Arg) -> List[Tuple[int, Number]]:
    if isinstance(arg, int):
        return [(arg, 1)]
    return list(arg.items())


def _ev_multi(ev: Evaluator, args: Sequence[Arg]) -> Vec:
    """Multilinear extension of ``ev`` to vector-valued arguments."""
    if all(isinstance(a, int) for a in args):
        return ev(tuple(args))  # type: ignore[arg-type]
    out: Dict[int, Number] = {}
    for combo in itertools.product(*(_support(a) for a in args)):
        c = 1
        key = []
        for idx, x in combo:
            c *= x
            key.append(idx)
        if c:
            _acc(out, ev(tuple(key)), c)
    return out


class _Act:
    """Module actions on packed vectors (``coord * D + m``)."""

    def __init__(self, M: RsModule):
        self.M = M
        self.D = M.dim

    def _apply(self, table: List[Vec], v: Vec, c: Number, out: Dict[int, Number]) -> None:
        D = self.D
        for idx, x in v.items():
            q, m = divmod(idx, D)
            base = q * D
            cx = c * x
            for m2, y in table[m].items():
                out[base + m2] = out.get(base + m2, 0) + cx * y

    def left(self, a: Arg, v: Vec) -> Vec:
        out: Dict[int, Number] = {}
        for b, c in _support(a):
            self._apply(self.M.left[b], v, c, out)
        return out

    def right(self, v: Vec, a: Arg) -> Vec:
        out: Dict[int, Number] = {}
        for b, c in _support(a):
            self._apply(self.M.right[b], v, c, out)
        return out

    def lie_left(self, a: int, v: Vec) -> Vec:
        """[e_a, v] = e_a∘v − v∘e_a."""
        out: Dict[int, Number] = {}
        self._apply(self.M.left[a], v, 1, out)
        self._apply(self.M.right[a], v, -1, out)
        return out


def rsym_keys(n: int, nargs: int, alternating: bool = True) -> List[Key]:
    """Keys of C^nargs in the fixed order: lexicographic on (a0, tail)."""
    if nargs == 0:
        return [()]
    if alternating:
        tails = list(itertools.combinations(range(n), nargs - 1))
        return [(a0,) + t for a0 in range(n) for t in tails]
    return list(itertools.product(range(n), repeat=nargs))


def lie_keys(n: int, k: int) -> List[Key]:
    return list(itertools.combinations(range(n), k))


# -- cochains -----------------------------------------------------------------

@dataclass
class Cochain:
    algebra: Algebra
    module: RsModule
    nargs: int
    terms: Dict[Key, Vec] = dc_field(default_factory=dict)
    alternating: bool = True

    def __post_init__(self) -> None:
        if self.module.algebra is not self.algebra and self.module.algebra.dim != self.algebra.dim:
            raise WrongModule("module lives over a different algebra")
        F = self.algebra.field
        clean = {}
        for key, v in self.terms.items():
            if len(key) != self.nargs:
                raise ValueError(f"key {key} has the wrong length")
            if self.alternating and self.nargs > 1:
                s, tail = sort_sign(key[1:])
                if not s:
                    continue
                key = (key[0],) + tail
                v = {k: s * x for k, x in v.items()}
                if key in clean:
                    v = _add(clean[key], v)
            w = vec_clean(F, v)
            if w:
                clean[key] = w
            else:
                clean.pop(key, None)
        self.terms = clean
        if self.nargs == 0 and self.terms:
            _require_left_associative(self.module, self.terms.get((), {}))

    @property
    def degree(self) -> int:
        return self.nargs

    @property
    def field(self) -> FieldSpec:
        return self.algebra.field

    # evaluation -------------------------------------------------------
    def value(self, args: Key) -> Vec:
        if self.alternating and self.nargs > 1:
            s, tail = sort_sign(args[1:])
            if not s:
                return {}
            v = self.terms.get((args[0],) + tail)
            if v is None:
                return {}
            return v if s == 1 else {k: -x for k, x in v.items()}
        return self.terms.get(args, {})

    def value_at(self, args: Sequence[Arg]) -> Vec:
        return vec_clean(self.field, _ev_multi(self.value, args))

    # construction -----------------------------------------------------
    @classmethod
    def zero(cls, A: Algebra, M: RsModule, nargs: int, alternating: bool = True) -> "Cochain":
        return cls(A, M, nargs, {}, alternating)

    @classmethod
    def from_element(cls, A: Algebra, M: RsModule, m: Vec) -> "Cochain":
        """A degree-0 cochain; ``m`` must lie in M^{l.ass}."""
        return cls(A, M, 0, {(): dict(m)})

    @classmethod
    def from_function(cls, A: Algebra, M: RsModule, nargs: int,
                      fn: Callable[[Key], Vec], alternating: bool = True) -> "Cochain":
        terms = {}
        for key in rsym_keys(A.dim, nargs, alternating):
            v = fn(key)
            if v:
                terms[key] = v
        return cls(A, M, nargs, terms, alternating)

    @classmethod
    def random(cls, A: Algebra, M: RsModule, nargs: int, rng: random.Random,
               density: float = 0.4, alternating: bool = True) -> "Cochain":
        F = A.field
        terms = {}
        for key in rsym_keys(A.dim, nargs, alternating):
            if rng.random() < density:
                v = {m: _random_scalar(F, rng) for m in range(M.dim) if rng.random() < density}
                if v:
                    terms[key] = v
        return cls(A, M, nargs, terms, alternating)

    def to_full(self) -> "Cochain":
        if not self.alternating:
            return self
        return Cochain.from_function(self.algebra, self.module, self.nargs, self.value, False)

    def to_alternating(self) -> "Cochain":
        """Compress a full cochain; raises if it is not skew in the tail."""
        if self.alternating:
            return self
        A = self.algebra
        out = Cochain.from_function(A, self.module, self.nargs, self.value, True)
        for key in rsym_keys(A.dim, self.nargs, False):
            if vec_clean(self.field, _sub(self.value(key), out.value(key))):
                raise ValueError(f"not alternating at {key}")
        return out

    # linear structure ---------------------------------------------------
    def _compatible(self, other: "Cochain") -> None:
        if self.nargs != other.nargs:
            raise ValueError("degree mismatch")
        if self.module.dim != other.module.dim:
            raise WrongModule("module mismatch")

    def __add__(self, other: "Cochain") -> "Cochain":
        return self.combine(other, 1)

    def __sub__(self, other: "Cochain") -> "Cochain":
        return self.combine(other, -1)

    def __neg__(self) -> "Cochain":
        return self.scale(-1)

    def combine(self, other: "Cochain", c: Number) -> "Cochain":
        self._compatible(other)
        if self.alternating != other.alternating:
            a, b = self.to_full(), other.to_full()
        else:
            a, b = self, other
        terms = {k: dict(v) for k, v in a.terms.items()}
        for k, v in b.terms.items():
            terms[k] = _add(terms.get(k, {}), {i: c * x for i, x in v.items()})
        return Cochain(self.algebra, self.module, self.nargs, terms, a.alternating)

    def scale(self, c: Number) -> "Cochain":
        return Cochain(self.algebra, self.module, self.nargs,
                       {k: {i: c * x for i, x in v.items()} for k, v in self.terms.items()},
                       self.alternating)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Cochain):
            return NotImplemented
        if self.nargs != other.nargs:
            return False
        return (self - other).is_zero()

    # coordinates --------------------------------------------------------
    def coordinates(self, keys: Optional[List[Key]] = None) -> Vec:
        """Vector in the layout used by the cohomology matrices."""
        if keys is None:
            keys = rsym_keys(self.algebra.dim, self.nargs, self.alternating)
        D = self.module.dim
        index = {k: i for i, k in enumerate(keys)}
        out = {}
        for key, v in self.terms.items():
            base = index[key] * D
            for m, x in v.items():
                out[base + m] = x
        return out

    @classmethod
    def from_coordinates(cls, A: Algebra, M: RsModule, nargs: int, vec: Vec,
                         alternating: bool = True) -> "Cochain":
        keys = rsym_keys(A.dim, nargs, alternating)
        D = M.dim
        terms: Dict[Key, Vec] = {}
        for idx, x in vec.items():
            q, m = divmod(idx, D)
            terms.setdefault(keys[q], {})[m] = x
        return cls(A, M, nargs, terms, alternating)


def _add(u: Vec, v: Vec) -> Vec:
    out = dict(u)
    _acc(out, v)
    return out


def _sub(u: Vec, v: Vec) -> Vec:
    out = dict(u)
    _acc(out, v, -1)
    return out


def _random_scalar(F: FieldSpec, rng: random.Random) -> Number:
    if F.p:
        return rng.randrange(1, F.p)
    return rng.choice([-3, -2, -1, 1, 2, 3])


def _require_left_associative(M: RsModule, m: Vec) -> None:
    A = M.algebra
    F = A.field
    for a in range(A.dim):
        for b in range(A.dim):
            lhs = M.ract_elem(m, A.mul_basis(a, b))
            rhs = M.ract(M.ract(m, a), b)
            if vec_clean(F, _sub(lhs, rhs)):
                raise NotLeftAssociative(f"(m, e{a}, e{b}) != 0")


@dataclass
class LieCochain:
    """Alternating map Λ^k A → M, stored on increasing k-tuples."""

    algebra: Algebra
    module: RsModule
    degree: int
    terms: Dict[Key, Vec] = dc_field(default_factory=dict)

    def __post_init__(self) -> None:
        F = self.algebra.field
        clean: Dict[Key, Vec] = {}
        for key, v in self.terms.items():
            if len(key) != self.degree:
                raise ValueError(f"key {key} has the wrong length")
            s, skey = sort_sign(key)
            if not s:
                continue
            v = {k: s * x for k, x in v.items()}
            if skey in clean:
                v = _add(clean[skey], v)
            w = vec_clean(F, v)
            if w:
                clean[skey] = w
            else:
                clean.pop(skey, None)
        self.terms = clean

    @property
    def field(self) -> FieldSpec:
        return self.algebra.field

    def value(self, args: Key) -> Vec:
        s, key = sort_sign(args)
        if not s:
            return {}
        v = self.terms.get(key)
        if v is None:
            return {}
        return v if s == 1 else {k: -x for k, x in v.items()}

    def value_at(self, args: Sequence[Arg]) -> Vec:
        return vec_clean(self.field, _ev_multi(self.value, args))

    @classmethod
    def from_function(cls, A: Algebra, M: RsModule, k: int, fn: Callable[[Key], Vec]) -> "LieCochain":
        terms = {}
        for key in lie_keys(A.dim, k):
            v = fn(key)
            if v:
                terms[key] = v
        return cls(A, M, k, terms)

    @classmethod
    def random(cls, A: Algebra, M: RsModule, k: int, rng: random.Random,
               density: float = 0.4) -> "LieCochain":
        F = A.field
        terms = {}
        for key in lie_keys(A.dim, k):
            if rng.random() < density:
                v = {m: _random_scalar(F, rng) for m in range(M.dim) if rng.random() < density}
                if v:
                    terms[key] = v
        return cls(A, M, k, terms)

    def combine(self, other: "LieCochain", c: Number) -> "LieCochain":
        terms = {k: dict(v) for k, v in self.terms.items()}
        for k, v in other.terms.items():
            terms[k] = _add(terms.get(k, {}), {i: c * x for i, x in v.items()})
        return LieCochain(self.algebra, self.module, self.degree, terms)

    def __add__(self, other):
        return self.combine(other, 1)

    def __sub__(self, other):
        return self.combine(other, -1)

    def scale(self, c: Number) -> "LieCochain":
        return LieCochain(self.algebra, self.module, self.degree,
                          {k: {i: c * x for i, x in v.items()} for k, v in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LieCochain):
            return NotImplemented
        return self.degree == other.degree and (self - other).is_zero()


# -- formulas at a basis tuple --------------------------------------------

def _face_at(A: Algebra, act: _Act, ev: Evaluator, t: Key, i: int) -> Dict[int, Number]:
    """D_i psi at t = (a_0, ..., a_k), 1 <= i <= k."""
    out: Dict[int, Number] = {}
    a0, ai = t[0], t[i]
    rest = t[1:i] + t[i + 1:]
    _acc(out, act.left(a0, ev((ai,) + rest)))
    _acc(out, _ev_multi(ev, (A.mul_basis(a0, ai),) + rest), -1)
    _acc(out, act.right(ev((a0,) + rest), ai))
    for j in range(i + 1, len(t)):
        args: List[Arg] = list(t)
        args[j] = A.bracket_basis(ai, t[j])
        del args[i]
        _acc(out, _ev_multi(ev, args))
    return out


def _d_rsym_at(A: Algebra, act: _Act, ev: Evaluator, t: Key) -> Dict[int, Number]:
    """d psi = -Σ_i (-1)^i D_i psi."""
    out: Dict[int, Number] = {}
    for i in range(1, len(t)):
        _acc(out, _face_at(A, act, ev, t, i), 1 if i % 2 else -1)
    return out


def _d_lie_at(A: Algebra, act: _Act, ev: Evaluator, t: Key) -> Dict[int, Number]:
    """Chevalley–Eilenberg: Σ(-1)^{i+1}[a_i, φ(..â_i..)] + Σ_{i<j}(-1)^{i+j} φ([a_i,a_j], ..)."""
    out: Dict[int, Number] = {}
    n = len(t)
    for i in range(n):
        rest = t[:i] + t[i + 1:]
        _acc(out, act.lie_left(t[i], ev(rest)), -1 if i % 2 else 1)
    for i in range(n):
        for j in range(i + 1, n):
            rest = tuple(t[k] for k in range(n) if k != i and k != j)
            _acc(out, _ev_multi(ev, (A.bracket_basis(t[i], t[j]),) + rest),
                 -1 if (i + j) % 2 else 1)
    return out


def _rho_at(A: Algebra, act: _Act, ev: Evaluator, x: Vec, t: Key) -> Dict[int, Number]:
    """(psi ∘ x)(a_0..a_k) = a_0∘psi(x,a_1..) − psi(a_0∘x,..) + psi(a_0..)∘x + Σ psi(..[x,a_i]..)."""
    from .algebra import commutator, multiply

    out: Dict[int, Number] = {}
    a0 = t[0]
    tail = t[1:]
    _acc(out, act.left(a0, _ev_multi(ev, (x,) + tail)))
    _acc(out, _ev_multi(ev, (multiply(A, {a0: 1}, x),) + tail), -1)
    _acc(out, act.right(ev(t), x))
    for i in range(1, len(t)):
        args: List[Arg] = list(t)
        args[i] = commutator(A, x, {t[i]: 1})
        _acc(out, _ev_multi(ev, args))
    return out


# -- operators on concrete cochains ------------------------------------------

def _build(psi: Cochain, nargs: int, alternating: bool, fn: Callable[[Key], Dict[int, Number]],
           module: Optional[RsModule] = None) -> Cochain:
    A = psi.algebra
    M = module if module is not None else psi.module
    F = A.field
    terms = {}
    for key in rsym_keys(A.dim, nargs, alternating):
        v = vec_clean(F, fn(key))
        if v:
            terms[key] = v
    return Cochain(A, M, nargs, terms, alternating)


def face_map(i: int, psi: Cochain) -> Cochain:
    """D_i psi as a full (not necessarily alternating) cochain with one more argument."""
    if psi.nargs < 1:
        raise DegreeZero("face maps start in degree 1")
    k = psi.nargs
    A = psi.algebra
    if i < 1:
        raise ValueError("face index starts at 1")
    if i > k:
        return Cochain.zero(A, psi.module, k + 1, alternating=False)
    act = _Act(psi.module)
    return _build(psi, k + 1, False, lambda t: _face_at(A, act, psi.value, t, i))


def d_rsym(psi: Cochain) -> Cochain:
    A = psi.algebra
    M = psi.module
    if psi.nargs == 0:
        m = psi.terms.get((), {})
        act = _Act(M)
        return _build(psi, 1, True, lambda t: _add(act.left(t[0], m), _neg(act.right(m, t[0]))))
    act = _Act(M)
    return _build(psi, psi.nargs + 1, psi.alternating,
                  lambda t: _d_rsym_at(A, act, psi.value, t))


def _neg(v: Vec) -> Vec:
    return {k: -x for k, x in v.items()}


def d_lie(phi: LieCochain) -> LieCochain:
    A = phi.algebra
    act = _Act(phi.module)
    return LieCochain.from_function(A, phi.module, phi.degree + 1,
                                    lambda t: vec_clean(A.field, _d_lie_at(A, act, phi.value, t)))


def interior(x: Vec, psi: Cochain) -> Cochain:
    """i(x)psi(a_0, ..., a_{k-2}) = psi(a_0, x, a_1, ...); zero on degree <= 1."""
    A = psi.algebra
    if psi.nargs <= 1:
        return Cochain.zero(A, psi.module, max(psi.nargs - 1, 0), psi.alternating)
    return _build(psi, psi.nargs - 1, psi.alternating,
                  lambda t: _ev_multi(psi.value, (t[0], x) + t[1:]))


def rho_action(x: Vec, psi: Cochain) -> Cochain:
    """The right action psi ∘ x on C^k for k >= 1."""
    if psi.nargs < 1:
        raise DegreeZero("the action is defined from degree 1 on")
    A = psi.algebra
    act = _Act(psi.module)
    return _build(psi, psi.nargs, psi.alternating, lambda t: _rho_at(A, act, psi.value, x, t))


def rho_lie(x: Vec, psi: Cochain) -> Cochain:
    """rho_lie(x) psi = −(psi ∘ x)."""
    return rho_action(x, psi).scale(-1)


def first_slot(a: Vec, psi: Cochain) -> LieCochain:
    """i_0(a)psi(a_1..a_{k-1}) = psi(a, a_1, ..., a_{k-1}) as a Lie cochain."""
    if psi.nargs < 1:
        raise DegreeZero("needs at least one argument")
    A = psi.algebra
    return LieCochain.from_function(A, psi.module, psi.nargs - 1,
                                    lambda t: psi.value_at((a,) + t))


# Sign conventions for f and F: see the property tests.  With the literal
# signs, both maps anticommute with the differentials in every degree; the
# extra (-1)^k below makes them honest chain maps while keeping the k = 2
# case of f and the k = 1 case of F exactly as displayed.

def antisymmetrize_f(psi: Cochain) -> LieCochain:
    """fψ(a_1..a_k) = (-1)^k Σ_i (-1)^{i+k+1} ψ(a_i, a_1..â_i..a_k)
    = Σ_i (-1)^{i+1} ψ(a_i, a_1..â_i..a_k)."""
    if psi.nargs < 1:
        raise DegreeZero("f starts in degree 1")
    A = psi.algebra
    k = psi.nargs

    def fn(t: Key) -> Vec:
        out: Dict[int, Number] = {}
        for i in range(k):
            _acc(out, psi.value((t[i],) + t[:i] + t[i + 1:]), -1 if i % 2 else 1)
        return vec_clean(A.field, out)

    return LieCochain.from_function(A, psi.module, k, fn)


def _c1_base(phi_module: RsModule) -> RsModule:
    if not phi_module.origin or phi_module.origin[0] != "c1":
        raise WrongModule("lift_F needs a cochain valued in c1_module(M)")
    return phi_module.origin[1]


def lift_F(phi: LieCochain) -> Cochain:
    """Fφ(a_0, a_1..a_k) = (-1)^k φ(a_1..a_k)(a_0)."""
    M = _c1_base(phi.module)
    A = phi.algebra
    D = M.dim
    k = phi.degree
    sign = -1 if k % 2 else 1
    terms: Dict[Key, Vec] = {}
    for tail, v in phi.terms.items():
        for idx, x in v.items():
            a0, m = divmod(idx, D)
            terms.setdefault((a0,) + tail, {})[m] = sign * x
    return Cochain(A, M, k + 1, terms)


def lift_F_inverse(psi: Cochain, c1: RsModule) -> LieCochain:
    if _c1_base(c1).dim != psi.module.dim:
        raise WrongModule("c1 module does not match")
    D = psi.module.dim
    k = psi.nargs - 1
    sign = -1 if k % 2 else 1
    terms: Dict[Key, Vec] = {}
    for key, v in psi.terms.items():
        slot = terms.setdefault(key[1:], {})
        for m, x in v.items():
            slot[key[0] * D + m] = sign * x
    return LieCochain(psi.algebra, c1, k, terms)


# -- cup products -----------------------------------------------------------

@dataclass
class Pairing:
    """Bilinear map M × N → S with (m∪n)∘a = m∘a∪n + m∪[n,a] and a∘(m∪n) = a∘m∪n.

    ``table[(i, j)]`` is m_i ∪ n_j.  N is used through its Lie action
    [n, a] = n∘a − a∘n.
    """

    M: RsModule
    N: RsModule
    S: RsModule
    table: Dict[Tuple[int, int], Vec]

    def __post_init__(self) -> None:
        self._check()

    def pair(self, m: Vec, n: Vec) -> Vec:
        out: Dict[int, Number] = {}
        for i, x in m.items():
            for j, y in n.items():
                v = self.table.get((i, j))
                if v:
                    _acc(out, v, x * y)
        return out

    def _check(self) -> None:
        A = self.M.algebra
        F = A.field
        for a in range(A.dim):
            for i in range(self.M.dim):
                for j in range(self.N.dim):
                    m, n = {i: 1}, {j: 1}
                    mn = vec_clean(F, self.pair(m, n))
                    n_a = _sub(self.N.ract(n, a), self.N.lact(a, n))
                    lhs = self.S.ract(mn, a)
                    rhs = _add(self.pair(self.M.ract(m, a), n), self.pair(m, n_a))
                    if vec_clean(F, _sub(lhs, rhs)):
                        raise InvalidPairing(f"right axiom fails at (m{i}, n{j}, e{a})")
                    lhs = self.S.lact(a, mn)
                    rhs = self.pair(self.M.lact(a, m), n)
                    if vec_clean(F, _sub(lhs, rhs)):
                        raise InvalidPairing(f"left axiom fails at (m{i}, n{j}, e{a})")


def scalar_pairing(M: RsModule) -> Pairing:
    """M × K → M, m ∪ λ = λ m."""
    from .modules import trivial

    K = trivial(M.algebra)
    return Pairing(M, K, M, {(i, 0): {i: 1} for i in range(M.dim)})


def bar_pairing(M: RsModule) -> Pairing:
    """K × M → M̄, λ ∪ m = λ m."""
    from .modules import bar, trivial

    K = trivial(M.algebra)
    return Pairing(K, M, bar(M), {(0, j): {j: 1} for j in range(M.dim)})


def _shuffles(n: int, k: int) -> Iterator[Tuple[int, Tuple[int, ...], Tuple[int, ...]]]:
    """(sign, first k positions, last n-k positions) over (k, n-k)-shuffles of 0..n-1."""
    for first in itertools.combinations(range(n), k):
        second = tuple(i for i in range(n) if i not in first)
        s, _ = sort_sign(first + second)
        yield s, first, second


def cup_product(psi: Cochain, phi: LieCochain, pairing: Pairing) -> Cochain:
    """(ψ∪φ)(a_0, a_1..a_{k+l}) = Σ_σ sgn σ ψ(a_0, a_σ(1..k)) ∪ φ(a_σ(k+1..k+l))."""
    if psi.module.dim != pairing.M.dim or phi.module.dim != pairing.N.dim:
        raise InvalidPairing("pairing does not match the cochains' modules")
    k = psi.nargs - 1
    l = phi.degree
    shuffles = list(_shuffles(k + l, k))

    def fn(t: Key) -> Vec:
        out: Dict[int, Number] = {}
        tail = t[1:]
        for s, first, second in shuffles:
            u = psi.value((t[0],) + tuple(tail[i] for i in first))
            if not u:
                continue
            w = phi.value(tuple(tail[i] for i in second))
            if w:
                _acc(out, pairing.pair(u, w), s)
        return out

    return _build(psi, k + l + 1, True, fn, module=pairing.S)


def t_operator(psi: Cochain) -> Cochain:
    """Tψ(a_0..a_k) = Σ_{i=1}^k (-1)^{i+k} a_i ∗ ψ(a_0, ..â_i..).  Regular coefficients."""
    A = psi.algebra
    if A.ast is None:
        from .algebra import NoSecondProduct

        raise NoSecondProduct("T needs the second product")
    if psi.module.dim != A.dim or psi.module.origin[:1] != ("regular",):
        raise WrongModule("T is defined for regular coefficients")
    k = psi.nargs

    def fn(t: Key) -> Vec:
        out: Dict[int, Number] = {}
        for i in range(1, k + 1):
            v = psi.value(t[:i] + t[i + 1:])
            s = 1 if (i + k) % 2 == 0 else -1
            for j, x in v.items():
                _acc(out, A.ast_basis(t[i], j), s * x)
        return out

    return _build(psi, k + 1, True, fn)


# -- chains -------------------------------------------------------------------

ChainKey = Tuple[int, int, Tuple[int, ...]]  # (m, a0, increasing tail)


@dataclass
class Chain:
    """Element of M ⊗ A ⊗ Λ^{k-1} A (k = degree ≥ 1), or of M^{r.ass} (k = 0)."""

    algebra: Algebra
    module: RsModule
    degree: int
    terms: Dict[ChainKey, Number] = dc_field(default_factory=dict)

    def __post_init__(self) -> None:
        F = self.algebra.field
        clean: Dict[ChainKey, Number] = {}
        for key, x in self.terms.items():
            if self.degree == 0:
                skey = key
                s = 1
            else:
                m, a0, tail = key
                if len(tail) != self.degree - 1:
                    raise ValueError("tail length does not match degree")
                s, stail = sort_sign(tuple(tail))
                if not s:
                    continue
                skey = (m, a0, stail)
            clean[skey] = clean.get(skey, 0) + s * x
        self.terms = {k: F.reduce(x) for k, x in clean.items() if F.reduce(x)}

    @classmethod
    def random(cls, A: Algebra, M: RsModule, degree: int, rng: random.Random,
               density: float = 0.3) -> "Chain":
        terms = {}
        for m in range(M.dim):
            for a0 in range(A.dim):
                for tail in itertools.combinations(range(A.dim), degree - 1):
                    if rng.random() < density:
                        terms[(m, a0, tail)] = _random_scalar(A.field, rng)
        return cls(A, M, degree, terms)

    def is_zero(self) -> bool:
        return not self.terms


def chain_keys(A: Algebra, M: RsModule, degree: int) -> List[ChainKey]:
    return [(m, a0, tail) for m in range(M.dim) for a0 in range(A.dim)
            for tail in itertools.combinations(range(A.dim), degree - 1)]


def _boundary_terms(A: Algebra, M: RsModule, m: int, a0: int, tail: Key,
                    c: Number, out: Dict[ChainKey, Number]) -> None:
    k = len(tail)

    def put(mv: Vec, av: Vec, wedge: Sequence[Arg], coef: Number) -> None:
        for wk in itertools.product(*(_support(w) for w in wedge)):
            wc = coef
            idx = []
            for i, x in wk:
                wc *= x
                idx.append(i)
            s, st = sort_sign(tuple(idx))
            if not s or not wc:
                continue
            for mi, x in mv.items():
                for ai, y in av.items():
                    key = (mi, ai, st)
                    out[key] = out.get(key, 0) + s * wc * x * y

    em = {m: 1}
    for i in range(k):
        ai = tail[i]
        rest = tail[:i] + tail[i + 1:]
        s = c if i % 2 == 0 else -c           # (-1)^{i+1} with 1-based i
        put(M.ract(em, a0), {ai: 1}, rest, s)
        put(em, A.mul_basis(a0, ai), rest, -s)
        put(M.lact(ai, em), {a0: 1}, rest, s)
        for j in range(i + 1, k):
            wedge: List[Arg] = list(tail)
            wedge[j] = A.bracket_basis(ai, tail[j])
            del wedge[i]
            put(em, {a0: 1}, wedge, s)


def boundary(c: Chain) -> Chain:
    """The rsym boundary; chains of degree ≤ 1 go to zero."""
    A, M = c.algebra, c.module
    if c.degree <= 1:
        return Chain(A, M, max(c.degree - 1, 0), {})
    out: Dict[ChainKey, Number] = {}
    for (m, a0, tail), x in c.terms.items():
        _boundary_terms(A, M, m, a0, tail, x, out)
    return Chain(A, M, c.degree - 1, out)


def lie_boundary(A: Algebra, N: RsModule, n: int, wedge: Key) -> Dict[Tuple[int, Key], Number]:
    """CE boundary of n ⊗ x_1∧..∧x_k for the left Lie action x·n = x∘n − n∘x:

    Σ_i (-1)^i (x_i·n) ⊗ ..x̂_i.. + Σ_{i<j} (-1)^{i+j} n ⊗ [x_i,x_j]∧..x̂_i..x̂_j..
    (1-based i, j).  Keys of the result are (n-index, increasing wedge).
    """
    out: Dict[Tuple[int, Key], Number] = {}
    k = len(wedge)
    en = {n: 1}
    for i in range(k):
        rest = wedge[:i] + wedge[i + 1:]
        s = 1 if i % 2 else -1               # (-1)^{i} with 1-based i
        for ni, x in N.lie_left(wedge[i], en).items():
            out[(ni, rest)] = out.get((ni, rest), 0) + s * x
    for i in range(k):
        for j in range(i + 1, k):
            rest = tuple(wedge[t] for t in range(k) if t != i and t != j)
            s = 1 if (i + j) % 2 == 0 else -1
            for b, x in A.bracket_basis(wedge[i], wedge[j]).items():
                sg, key = sort_sign((b,) + rest)
                if sg:
                    out[(n, key)] = out.get((n, key), 0) + s * sg * x
    return out


# -- operator matrices via the universal cochain ---------------------------------

def operator_matrix(A: Algebra, M: RsModule, nargs_in: int, nargs_out: int,
                    formula: Callable[[Evaluator, Key], Dict[int, Number]],
                    in_keys: List[Key], out_keys: List[Key],
                    in_alternating: bool = True, lie: bool = False) -> SparseMatrix:
    """Matrix of a linear operator given by a pointwise formula.

    Columns follow ``in_keys × range(D)``, rows ``out_keys × range(D)``.
    """
    D = M.dim
    index = {k: i for i, k in enumerate(in_keys)}
    mods = list(range(D))

    def univ(args: Key) -> Vec:
        if lie:
            s, key = sort_sign(args)
        elif in_alternating and len(args) > 1:
            s, tail = sort_sign(args[1:])
            key = (args[0],) + tail
        else:
            s, key = 1, args
        if not s:
            return {}
        base = index[key] * D
        return {(base + m) * D + m: s for m in mods}

    F = A.field
    entries: Dict[Tuple[int, int], Number] = {}
    for r, key in enumerate(out_keys):
        vec = formula(univ, key)
        for idx, x in vec.items():
            x = F.reduce(x)
            if x:
                col, m = divmod(idx, D)
                entries[(r * D + m, col)] = x
    return SparseMatrix(len(out_keys) * D, len(in_keys) * D, F, entries)


def d_rsym_matrix(A: Algebra, M: RsModule, nargs: int) -> SparseMatrix:
    """Matrix of d: C^nargs → C^{nargs+1} for nargs ≥ 1 (alternating layout)."""
    act = _Act(M)
    return operator_matrix(A, M, nargs, nargs + 1,
                           lambda ev, t: _d_rsym_at(A, act, ev, t),
                           rsym_keys(A.dim, nargs), rsym_keys(A.dim, nargs + 1))


def d_lie_matrix(A: Algebra, M: RsModule, k: int) -> SparseMatrix:
    act = _Act(M)
    return operator_matrix(A, M, k, k + 1, lambda ev, t: _d_lie_at(A, act, ev, t),
                           lie_keys(A.dim, k), lie_keys(A.dim, k + 1), lie=True)
