"""Sparse exact linear algebra over a :class:`FieldSpec`.

Vectors are ``dict[int, number]`` with no stored zeros.  Matrices are built
column-oriented (the cochain code naturally produces images of basis vectors)
but elimination works on rows.

Everything funnels through :class:`Echelon`, an incremental reduced row echelon
form.  Because the reduced echelon form of a row space is unique, ranks,
kernels and particular solutions do not depend on the order in which rows are
fed in or on which pivot is picked first.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .scalars import FieldSpec, Number

__all__ = [
    "DimensionMismatch",
    "SparseMatrix",
    "SubspaceBasis",
    "Echelon",
    "rank_nullspace",
    "solve_linear",
    "vec_add",
    "vec_scale",
    "vec_clean",
    "vec_is_zero",
]

Vec = Dict[int, Number]


class DimensionMismatch(ValueError):
    pass


# -- vector helpers ---------------------------------------------------------

def vec_clean(F: FieldSpec, v: Vec) -> Vec:
    """Reduce every entry into ``F`` and drop zeros."""
    out = {}
    for k, x in v.items():
        x = F.reduce(x)
        if x:
            out[k] = x
    return out


def vec_add(F: FieldSpec, u: Vec, v: Vec, c: Number = 1) -> Vec:
    out = dict(u)
    for k, x in v.items():
        y = F.reduce(out.get(k, 0) + c * x)
        if y:
            out[k] = y
        else:
            out.pop(k, None)
    return out


def vec_scale(F: FieldSpec, v: Vec, c: Number) -> Vec:
    return vec_clean(F, {k: c * x for k, x in v.items()})


def vec_is_zero(F: FieldSpec, v: Vec) -> bool:
    return all(F.is_zero(x) for x in v.values())


# -- matrices ---------------------------------------------------------------

@dataclass
class SparseMatrix:
    rows: int
    cols: int
    field: FieldSpec
    entries: Dict[Tuple[int, int], Number] = dc_field(default_factory=dict)

    @classmethod
    def from_columns(cls, F: FieldSpec, nrows: int, columns: Sequence[Vec]) -> "SparseMatrix":
        entries = {}
        for c, col in enumerate(columns):
            for r, x in col.items():
                if not 0 <= r < nrows:
                    raise DimensionMismatch(f"row {r} outside 0..{nrows - 1}")
                x = F.reduce(x)
                if x:
                    entries[(r, c)] = x
        return cls(nrows, len(columns), F, entries)

    @classmethod
    def from_rows(cls, F: FieldSpec, ncols: int, rows: Sequence[Vec]) -> "SparseMatrix":
        entries = {}
        for r, row in enumerate(rows):
            for c, x in row.items():
                if not 0 <= c < ncols:
                    raise DimensionMismatch(f"column {c} outside 0..{ncols - 1}")
                x = F.reduce(x)
                if x:
                    entries[(r, c)] = x
        return cls(len(rows), ncols, F, entries)

    @classmethod
    def from_dense(cls, F: FieldSpec, data: Sequence[Sequence[Number]]) -> "SparseMatrix":
        ncols = len(data[0]) if data else 0
        return cls.from_rows(F, ncols, [{c: x for c, x in enumerate(row) if x} for row in data])

    def row_dicts(self) -> List[Vec]:
        out: List[Vec] = [dict() for _ in range(self.rows)]
        for (r, c), x in self.entries.items():
            out[r][c] = x
        return out

    def column_dicts(self) -> List[Vec]:
        out: List[Vec] = [dict() for _ in range(self.cols)]
        for (r, c), x in self.entries.items():
            out[c][r] = x
        return out

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.cols, self.rows, self.field,
                            {(c, r): x for (r, c), x in self.entries.items()})

    def apply(self, v: Vec) -> Vec:
        F = self.field
        out: Dict[int, Number] = {}
        for (r, c), x in self.entries.items():
            y = v.get(c)
            if y:
                out[r] = out.get(r, 0) + x * y
        return vec_clean(F, out)


# -- incremental reduced echelon form ---------------------------------------

class Echelon:
    """Reduced row echelon form built one row at a time.

    ``pivots`` maps each pivot column to its normalised row; every stored row
    has zero entries in all other pivot columns.
    """

    def __init__(self, F: FieldSpec, ncols: int):
        self.F = F
        self.ncols = ncols
        self.pivots: Dict[int, Vec] = {}
        # column -> pivot columns whose rows have a nonzero entry there
        self._users: Dict[int, set] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, v: Vec) -> Vec:
        """The remainder of ``v`` after clearing all pivot columns."""
        F = self.F
        w = vec_clean(F, v)
        hits = [c for c in w if c in self.pivots]
        for c in hits:
            x = w.get(c)
            if not x:
                continue
            for k, y in self.pivots[c].items():
                z = F.reduce(w.get(k, 0) - x * y)
                if z:
                    w[k] = z
                else:
                    w.pop(k, None)
        return w

    def add(self, v: Vec) -> bool:
        """Insert ``v``; return True if it raised the rank."""
        F = self.F
        w = self.reduce(v)
        if not w:
            return False
        # deterministic choice: lowest column becomes the pivot
        pc = min(w)
        inv = F.inv(w[pc])
        w = {k: F.reduce(x * inv) for k, x in w.items()}
        # clear the new pivot column from the existing rows
        for oc in list(self._users.get(pc, ())):
            row = self.pivots[oc]
            x = row.get(pc)
            if not x:
                continue
            for k, y in w.items():
                z = F.reduce(row.get(k, 0) - x * y)
                if z:
                    if k not in row:
                        self._users.setdefault(k, set()).add(oc)
                    row[k] = z
                else:
                    row.pop(k, None)
                    self._users.get(k, set()).discard(oc)
        self._users.pop(pc, None)
        self.pivots[pc] = w
        for k in w:
            if k != pc:
                self._users.setdefault(k, set()).add(pc)
        return True

    def contains(self, v: Vec) -> bool:
        return not self.reduce(v)

    def rows(self) -> List[Vec]:
        return [dict(self.pivots[c]) for c in sorted(self.pivots)]

    def kernel(self) -> List[Vec]:
        """Basis of {x : R x = 0}, one vector per free column."""
        F = self.F
        free_cols = [c for c in range(self.ncols) if c not in self.pivots]
        # column -> (pivot col, coefficient) for fast lookup
        by_col: Dict[int, List[Tuple[int, Number]]] = {}
        for pc, row in self.pivots.items():
            for k, x in row.items():
                if k != pc:
                    by_col.setdefault(k, []).append((pc, x))
        out = []
        for f in free_cols:
            v = {f: 1}
            for pc, x in by_col.get(f, ()):
                v[pc] = F.reduce(-x)
            out.append(v)
        return out


@dataclass
class SubspaceBasis:
    """A subspace stored by its reduced echelon basis."""

    ambient_dim: int
    field: FieldSpec
    vectors: List[Vec]

    @classmethod
    def span(cls, F: FieldSpec, ambient_dim: int, vecs: Iterable[Vec]) -> "SubspaceBasis":
        ech = Echelon(F, ambient_dim)
        for v in vecs:
            ech.add(v)
        return cls(ambient_dim, F, ech.rows())

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def echelon(self) -> Echelon:
        ech = Echelon(self.field, self.ambient_dim)
        for v in self.vectors:
            ech.add(v)
        return ech

    def contains(self, v: Vec) -> bool:
        return self.echelon().contains(v)

    def coordinates(self, v: Vec) -> Optional[List[Number]]:
        """Coefficients of ``v`` in this basis, or None if ``v`` lies outside."""
        F = self.field
        coeffs = []
        rest = vec_clean(F, v)
        for b in self.vectors:
            pc = min(b)
            c = rest.get(pc, 0)
            coeffs.append(c)
            if c:
                rest = vec_add(F, rest, b, -c)
        return None if rest else coeffs


def rank_nullspace(M: SparseMatrix) -> Tuple[int, SubspaceBasis]:
    ech = Echelon(M.field, M.cols)
    for row in M.row_dicts():
        if row:
            ech.add(row)
    kernel = SubspaceBasis.span(M.field, M.cols, ech.kernel())
    return ech.rank, kernel


def solve_linear(M: SparseMatrix, b: Vec) -> Optional[Tuple[Vec, SubspaceBasis]]:
    """Solve ``M x = b``.  Free variables of the particular solution are zero."""
    if any(not 0 <= r < M.rows for r in b):
        raise DimensionMismatch("right-hand side longer than the matrix has rows")
    F = M.field
    n = M.cols
    rows = M.row_dicts()
    ech = Echelon(F, n + 1)
    for r, row in enumerate(rows):
        aug = dict(row)
        if b.get(r):
            aug[n] = F.reduce(b[r])
        if aug:
            ech.add(aug)
    if n in ech.pivots:
        return None
    x = {}
    for pc, row in ech.pivots.items():
        y = row.get(n)
        if y:
            x[pc] = y
    kernel_ech = Echelon(F, n)
    for row in rows:
        if row:
            kernel_ech.add(row)
    return x, SubspaceBasis.span(F, n, kernel_ech.kernel())
