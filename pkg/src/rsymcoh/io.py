"""JSON interchange for algebras, modules, cochains and reports.

Scalars are written as text (``"3"`` or ``"-1/2"``), indices are 0-based, and
keys appear in the documented order.
"""
from __future__ import annotations

import json
from typing import Any, Dict, List, Union

from .algebra import Algebra, InvalidParams
from .cochains import Chain, Cochain, LieCochain
from .cohomology import CohomologyReport
from .modules import RsComodule, RsModule
from .scalars import FieldSpec, ParseError

__all__ = [
    "algebra_to_json",
    "algebra_from_json",
    "module_to_json",
    "module_from_json",
    "cochain_to_json",
    "cochain_from_json",
    "report_to_json",
    "dumps",
    "load_json_file",
]


def dumps(obj: Any) -> str:
    return json.dumps(obj, ensure_ascii=False, indent=2) + "\n"


def load_json_file(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc


# -- algebras -------------------------------------------------------------------

def _table_to_json(F: FieldSpec, table: Dict) -> List[list]:
    rows = []
    for (i, j) in sorted(table):
        for k, c in sorted(table[(i, j)].items()):
            rows.append([i, j, k, F.fmt(c)])
    return rows


def _table_from_json(F: FieldSpec, rows: Any, dim: int) -> Dict:
    if not isinstance(rows, list):
        raise ParseError("structure constants must be a list")
    table: Dict = {}
    for row in rows:
        if not (isinstance(row, list) and len(row) == 4):
            raise ParseError(f"bad structure-constant entry {row!r}")
        i, j, k, c = row
        if not all(isinstance(x, int) and 0 <= x < dim for x in (i, j, k)):
            raise ParseError(f"index out of range in {row!r}")
        v = table.setdefault((i, j), {})
        v[k] = F.reduce(v.get(k, 0) + F.parse(c))
    return table


def algebra_to_json(A: Algebra) -> dict:
    F = A.field
    out: Dict[str, Any] = {
        "field": F.to_json(),
        "dim": A.dim,
        "basis": list(A.basis_names),
        "circ": _table_to_json(F, A.circ),
    }
    if A.ast is not None:
        out["ast"] = _table_to_json(F, A.ast)
    if A.grading is not None:
        out["grading"] = list(A.grading)
    return out


def algebra_from_json(obj: Any) -> Algebra:
    if not isinstance(obj, dict):
        raise ParseError("algebra JSON must be an object")
    try:
        F = FieldSpec.from_json(obj["field"])
        dim = obj["dim"]
        if not isinstance(dim, int) or dim < 0:
            raise ParseError("dim must be a non-negative integer")
        basis = obj.get("basis") or [f"e{i}" for i in range(dim)]
        circ = _table_from_json(F, obj["circ"], dim)
        ast = _table_from_json(F, obj["ast"], dim) if obj.get("ast") is not None else None
        grading = obj.get("grading")
    except KeyError as exc:
        raise ParseError(f"missing key {exc}") from None
    try:
        return Algebra(F, dim, list(basis), circ, ast, grading)
    except InvalidParams as exc:
        raise ParseError(str(exc)) from exc


# -- modules --------------------------------------------------------------------

def _action_to_json(F: FieldSpec, action) -> List[list]:
    rows = []
    for a, mats in enumerate(action):
        for i, v in enumerate(mats):
            for j, c in sorted(v.items()):
                rows.append([a, i, j, F.fmt(c)])
    return rows


def _action_from_json(F: FieldSpec, rows: Any, n: int, d: int):
    act = [[{} for _ in range(d)] for _ in range(n)]
    if not isinstance(rows, list):
        raise ParseError("action must be a list")
    for row in rows:
        if not (isinstance(row, list) and len(row) == 4):
            raise ParseError(f"bad action entry {row!r}")
        a, i, j, c = row
        if not (isinstance(a, int) and 0 <= a < n and isinstance(i, int) and 0 <= i < d
                and isinstance(j, int) and 0 <= j < d):
            raise ParseError(f"index out of range in {row!r}")
        v = act[a][i]
        v[j] = F.reduce(v.get(j, 0) + F.parse(c))
    return act


def module_to_json(M: RsModule) -> dict:
    F = M.algebra.field
    out: Dict[str, Any] = {
        "dim": M.dim,
        "right": _action_to_json(F, M.right),
        "left": _action_to_json(F, M.left),
    }
    if M.kind != "module":
        out["kind"] = M.kind
    return out


def module_from_json(A: Algebra, obj: Any, name: str = "M") -> RsModule:
    if not isinstance(obj, dict):
        raise ParseError("module JSON must be an object")
    try:
        d = obj["dim"]
        right = _action_from_json(A.field, obj["right"], A.dim, d)
        left = _action_from_json(A.field, obj["left"], A.dim, d)
    except KeyError as exc:
        raise ParseError(f"missing key {exc}") from None
    cls = RsComodule if obj.get("kind") == "comodule" else RsModule
    return cls(A, d, right, left, name, ("file",))


# -- cochains -----------------------------------------------------------------

def cochain_to_json(c: Union[Cochain, LieCochain, Chain]) -> dict:
    F = c.algebra.field
    terms = []
    if isinstance(c, Chain):
        for (m, a0, tail), x in sorted(c.terms.items()):
            terms.append([m, a0, list(tail), F.fmt(x)])
        return {"degree": c.degree, "kind": "chain", "terms": terms}
    if isinstance(c, LieCochain):
        for key in sorted(c.terms):
            for m, x in sorted(c.terms[key].items()):
                terms.append([list(key), m, F.fmt(x)])
        return {"degree": c.degree, "kind": "lie", "terms": terms}
    if not c.alternating:
        c = c.to_alternating()
    for key in sorted(c.terms):
        a0 = key[0] if key else None
        for m, x in sorted(c.terms[key].items()):
            terms.append([a0, list(key[1:]), m, F.fmt(x)])
    return {"degree": c.nargs, "terms": terms}


def cochain_from_json(A: Algebra, M: RsModule, obj: Any) -> Cochain:
    if not isinstance(obj, dict) or "degree" not in obj or "terms" not in obj:
        raise ParseError("cochain JSON needs 'degree' and 'terms'")
    k = obj["degree"]
    F = A.field
    terms: Dict = {}
    for row in obj["terms"]:
        if not (isinstance(row, list) and len(row) == 4 and isinstance(row[1], list)):
            raise ParseError(f"bad cochain entry {row!r}")
        a0, tail, m, x = row
        tail = tuple(tail)
        if list(tail) != sorted(set(tail)):
            raise ParseError(f"wedge indices must increase strictly: {row!r}")
        key = tail if k == 0 else (a0,) + tail
        if k == 0 and a0 is not None:
            raise ParseError("degree-0 terms take null as a0")
        if not all(isinstance(i, int) and 0 <= i < A.dim for i in key):
            raise ParseError(f"index out of range in {row!r}")
        if not (isinstance(m, int) and 0 <= m < M.dim):
            raise ParseError(f"module index out of range in {row!r}")
        v = terms.setdefault(key, {})
        v[m] = F.reduce(v.get(m, 0) + F.parse(x))
    return Cochain(A, M, k, terms)


def report_to_json(r: CohomologyReport) -> dict:
    out: Dict[str, Any] = {
        "degree": r.degree,
        "dimC": r.dim_C,
        "dimZ": r.dim_Z,
        "dimB": r.dim_B,
        "dimH": r.dim_H,
        "representatives": [cochain_to_json(c) for c in r.representatives
                            if isinstance(c, (Cochain, LieCochain, Chain))],
    }
    return out
