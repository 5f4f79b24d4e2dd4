"""Exact scalars over Q and F_p.

Internally every scalar is a plain Python number: ``Fraction`` (or ``int``)
over Q and an ``int`` residue in ``[0, p)`` over F_p.  The :class:`FieldSpec`
object carries the arithmetic that differs between the two cases, so the hot
loops elsewhere can use ``+``, ``-`` and ``*`` directly and call
:meth:`FieldSpec.reduce` once at the end.

:class:`Scalar` is a small checked wrapper for callers that want field
mismatches caught at the point of use.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Dict, Optional, Union

__all__ = [
    "FieldSpec",
    "Scalar",
    "FieldMismatch",
    "DivisionByZero",
    "ParseError",
    "scalar_arith",
    "binomial_in_field",
    "steenrod_coefficient",
    "Q",
    "GF",
]

Number = Union[int, Fraction]
Vec = Dict[int, Number]


_SCALAR_TEXT = re.compile(r"[+-]?\d+(/\d+)?")


class FieldMismatch(ValueError):
    """Two operands live over different fields."""


class DivisionByZero(ZeroDivisionError):
    pass


class ParseError(ValueError):
    pass


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Either the rationals (``kind == "Q"``) or a prime field ``F_p``."""

    kind: str
    p: int = 0

    def __post_init__(self) -> None:
        if self.kind == "Q":
            if self.p != 0:
                raise ValueError("Q takes no modulus")
        elif self.kind == "Fp":
            if not _is_prime(self.p):
                raise ValueError(f"modulus {self.p} is not prime")
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def is_prime_field(self) -> bool:
        return self.kind == "Fp"

    # -- arithmetic on raw numbers -------------------------------------
    def reduce(self, x: Number) -> Number:
        if self.p:
            if isinstance(x, Fraction):
                return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
            return x % self.p
        return x

    def coerce(self, x: Number) -> Number:
        """Bring an integer or fraction into canonical form for this field."""
        if self.p:
            if isinstance(x, Fraction):
                if x.denominator % self.p == 0:
                    raise DivisionByZero(f"{x} has no image in F_{self.p}")
            return self.reduce(x)
        if isinstance(x, Fraction):
            return x.numerator if x.denominator == 1 else x
        return int(x)

    def is_zero(self, x: Number) -> bool:
        if self.p:
            return x % self.p == 0
        return x == 0

    def inv(self, x: Number) -> Number:
        if self.is_zero(x):
            raise DivisionByZero("inverse of zero")
        if self.p:
            return pow(int(x) % self.p, -1, self.p)
        return Fraction(1) / x

    def div(self, x: Number, y: Number) -> Number:
        return self.reduce(x * self.inv(y))

    def neg(self, x: Number) -> Number:
        return self.reduce(-x)

    # -- text ----------------------------------------------------------
    def fmt(self, x: Number) -> str:
        x = self.reduce(x)
        if isinstance(x, Fraction):
            if x.denominator == 1:
                return str(x.numerator)
            return f"{x.numerator}/{x.denominator}"
        return str(x)

    def parse(self, text: Union[str, int]) -> Number:
        if isinstance(text, int) and not isinstance(text, bool):
            return self.coerce(text)
        if not isinstance(text, str):
            raise ParseError(f"scalar must be text, got {text!r}")
        if not _SCALAR_TEXT.fullmatch(text.strip()):
            raise ParseError(f"bad scalar {text!r}; expected an integer or a/b")
        try:
            value = Fraction(text.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad scalar {text!r}") from exc
        try:
            return self.coerce(value)
        except DivisionByZero as exc:
            raise ParseError(str(exc)) from exc

    # -- serialisation -------------------------------------------------
    def to_json(self) -> dict:
        if self.p:
            return {"kind": "Fp", "p": self.p}
        return {"kind": "Q"}

    @classmethod
    def from_json(cls, obj: dict) -> "FieldSpec":
        if not isinstance(obj, dict) or "kind" not in obj:
            raise ParseError(f"bad field description {obj!r}")
        try:
            if obj["kind"] == "Q":
                return cls("Q")
            if obj["kind"] == "Fp":
                return cls("Fp", int(obj["p"]))
        except (KeyError, ValueError, TypeError) as exc:
            raise ParseError(f"bad field description {obj!r}") from exc
        raise ParseError(f"unknown field kind {obj['kind']!r}")

    def __str__(self) -> str:
        return f"F_{self.p}" if self.p else "Q"


Q = FieldSpec("Q")


def GF(p: int) -> FieldSpec:
    return FieldSpec("Fp", p)


@dataclass(frozen=True)
class Scalar:
    """A field element that remembers its field."""

    field: FieldSpec
    value: Number

    @classmethod
    def of(cls, field: FieldSpec, x: Union[str, Number]) -> "Scalar":
        if isinstance(x, str):
            return cls(field, field.parse(x))
        return cls(field, field.coerce(x))

    def _other(self, other: object) -> Number:
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return other.value
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.field.coerce(other)
        raise TypeError(f"cannot combine Scalar with {type(other).__name__}")

    def __add__(self, other):
        return Scalar(self.field, self.field.reduce(self.value + self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return Scalar(self.field, self.field.reduce(self.value - self._other(other)))

    def __rsub__(self, other):
        return Scalar(self.field, self.field.reduce(self._other(other) - self.value))

    def __mul__(self, other):
        return Scalar(self.field, self.field.reduce(self.value * self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return Scalar(self.field, self.field.div(self.value, self._other(other)))

    def __neg__(self):
        return Scalar(self.field, self.field.neg(self.value))

    def inverse(self) -> "Scalar":
        return Scalar(self.field, self.field.inv(self.value))

    def is_zero(self) -> bool:
        return self.field.is_zero(self.value)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Scalar):
            return self.field == other.field and self.value == other.value
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.value == self.field.coerce(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field, self.value))

    def __str__(self) -> str:
        return self.field.fmt(self.value)


_BINARY = {
    "add": lambda x, y: x + y,
    "sub": lambda x, y: x - y,
    "mul": lambda x, y: x * y,
    "div": lambda x, y: x / y,
    "eq": lambda x, y: x == y,
}


def scalar_arith(op: str, x: Scalar, y: Optional[Scalar] = None) -> Union[Scalar, bool]:
    """Apply ``op`` (add, sub, mul, div, neg, inv, eq) to checked scalars."""
    if op in ("neg", "inv"):
        if y is not None:
            raise TypeError(f"{op} is unary")
        return -x if op == "neg" else x.inverse()
    if op not in _BINARY:
        raise ValueError(f"unknown operation {op!r}")
    if y is None:
        raise TypeError(f"{op} is binary")
    if x.field != y.field:
        raise FieldMismatch(f"{x.field} vs {y.field}")
    return _BINARY[op](x, y)


def binomial_in_field(n: int, k: int, field: FieldSpec = Q) -> Number:
    """C(n, k) reduced into ``field``; zero when k < 0 or k > n."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if k < 0 or k > n:
        return 0
    return field.reduce(comb(n, k))


def steenrod_coefficient(i: int, p: int) -> int:
    """The residue of 1 / (i! (p-i)!) modulo p, for 0 < i < p."""
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    if not 0 < i < p:
        raise ValueError(f"index {i} outside 1..{p - 1}")
    denom = 1
    for t in range(1, i + 1):
        denom = denom * t % p
    for t in range(1, p - i + 1):
        denom = denom * t % p
    return pow(denom, -1, p)
