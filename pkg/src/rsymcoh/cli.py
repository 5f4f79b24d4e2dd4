"""Command-line front end.

Exit status: 0 on success, 2 when a mathematical check fails (an identity or
axiom violation, a failed prolongation), 1 on usage or parse errors.
"""
from __future__ import annotations

import argparse
import os
import sys
from typing import Any, Dict, List, Optional, Sequence

from . import io
from .algebra import Algebra, InvalidParams, check_identities, left_structure
from .cochains import Cochain
from .cohomology import (
    DEFAULT_BUDGET,
    NotNovikov,
    OutOfMemoryBudget,
    cohomology,
    derivation_space,
    homology,
    is_coboundary,
    lie_homology,
    novikov_h2,
)
from .deform import (
    DeformationSeries,
    NotADerivation,
    ObstructionFailure,
    WrongCharacteristic,
    prolong,
    steenrod_square,
    verify_deformation,
)
from .families import PreconditionFailed, cocycle_family, partial_power_derivation
from .modules import (
    AxiomViolation,
    PresetUnavailable,
    RsModule,
    build_module,
    check_actions,
    m_tensor_a,
    regular,
)
from .presets import build_preset, parse_preset
from .scalars import ParseError

OK, MATH_FAILURE, USAGE = 0, 2, 1

USAGE_ERRORS = (ParseError, InvalidParams, PresetUnavailable, PreconditionFailed,
                OutOfMemoryBudget, NotNovikov, WrongCharacteristic, FileNotFoundError)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(USAGE, f"{self.prog}: error: {message}\n")


def _mark(flag: bool) -> str:
    return "✓" if flag else "✗"


# -- loading ------------------------------------------------------------------

def load_algebra(args) -> Algebra:
    if bool(args.preset) == bool(args.algebra):
        raise UsageError("give exactly one of --preset or --algebra")
    if args.preset:
        return build_preset(args.preset)
    return io.algebra_from_json(io.load_json_file(args.algebra))


def load_module(A: Algebra, spec: str) -> RsModule:
    if spec.endswith(".json") or os.path.exists(spec):
        return io.module_from_json(A, io.load_json_file(spec), os.path.basename(spec))
    return build_module(A, spec)


def _family_spec(text: str):
    name, params = parse_preset(text)
    return name, params


# -- verbs ----------------------------------------------------------------------

def cmd_check(args, A: Algebra, out: Dict[str, Any]) -> int:
    rep = check_identities(A)
    lines = [f"{'identity':<24} holds"]
    for name, r in rep.results.items():
        lines.append(f"{name:<24} {_mark(r.holds)}")
    print("\n".join(lines))
    out["identities"] = {
        name: {"holds": r.holds, "witness": list(r.witness) if r.witness else None}
        for name, r in rep.results.items()
    }
    status = OK if rep.holds("right-symmetric") and rep.holds("Jacobi") else MATH_FAILURE
    if args.emit_algebra:
        _write(args.emit_algebra, io.algebra_to_json(A))
    if args.module:
        M = load_module(A, args.module)
        mrep = check_actions(M)
        print(f"\n{M.kind} {M.name} (dim {M.dim})")
        for name, r in mrep.results.items():
            print(f"{name:<24} {_mark(r.holds)}")
        out["module"] = {name: r.holds for name, r in mrep.results.items()}
        if not mrep.holds(M.kind):
            status = MATH_FAILURE
    return status


def cmd_center(args, A: Algebra, out: Dict[str, Any]) -> int:
    ls = left_structure(A)
    print(f"dim Z_l = {ls.Z_l.dim}")
    for v in ls.Z_l.vectors:
        print(f"  {A.name_of(v)}")
    if ls.left_unit is None:
        print("left units: none")
    else:
        print(f"left unit: {A.name_of(ls.left_unit)}  (family dim {ls.Q_l_family_dim})")
    print(f"dim A^l.ass = {ls.l_ass.dim}")
    F = A.field
    out.update({
        "dimZl": ls.Z_l.dim,
        "Zl": [_vec_json(F, v) for v in ls.Z_l.vectors],
        "left_unit": None if ls.left_unit is None else _vec_json(F, ls.left_unit),
        "Ql_family_dim": ls.Q_l_family_dim,
        "dimLass": ls.l_ass.dim,
    })
    return OK


def _write(path: str, obj: Any) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(io.dumps(obj))


def _vec_json(F, v) -> List[list]:
    return [[k, F.fmt(x)] for k, x in sorted(v.items())]


def cmd_derivations(args, A: Algebra, out: Dict[str, Any]) -> int:
    rep = derivation_space(A, args.budget)
    print(f"dim Z^1_rsym(A,A) = {rep.dim_Z}")
    print(f"dim Z^1_lie(A,A) = {rep.extra['dim_Z_lie']}")
    print(f"Z^1_rsym -> Z^1_lie injective: {_mark(rep.extra['injective'])}")
    out.update({"dimZ": rep.dim_Z, "dimZlie": rep.extra["dim_Z_lie"],
                "injective": rep.extra["injective"],
                "basis": [_vec_json(A.field, v) for v in rep.kernel_basis.vectors]})
    return OK


def cmd_cohomology(args, A: Algebra, out: Dict[str, Any]) -> int:
    flavor = args.flavor
    if flavor == "novikov":
        rep = novikov_h2(A, args.budget) if args.degree == 2 else None
        if rep is None:
            raise UsageError("the Novikov flavor is available in degree 2 only")
        label = "nov"
    else:
        M = load_module(A, args.module)
        rep = cohomology(A, M, args.degree, flavor, args.budget)
        label = flavor
    k = args.degree
    print(f"dim C^{k} = {rep.dim_C}, dim Z^{k} = {rep.dim_Z}, dim B^{k} = {rep.dim_B}")
    print(f"dim H^{k}_{label} = {rep.dim_H}")
    out.update(io.report_to_json(rep))
    return OK


def cmd_novikov(args, A: Algebra, out: Dict[str, Any]) -> int:
    args.flavor, args.degree = "novikov", 2
    return cmd_cohomology(args, A, out)


def cmd_homology(args, A: Algebra, out: Dict[str, Any]) -> int:
    M = load_module(A, args.module)
    k = args.degree
    rep = homology(A, M, k, args.budget)
    print(f"dim C_{k} = {rep.dim_C}, dim Z_{k} = {rep.dim_Z}, dim B_{k} = {rep.dim_B}")
    print(f"dim H_{k}^rsym = {rep.dim_H}")
    out.update(io.report_to_json(rep))
    if args.compare:
        if k < 1:
            raise UsageError("--compare needs degree >= 1")
        lie = lie_homology(A, m_tensor_a(M), k - 1, args.budget)
        print(f"dim H_{k - 1}^lie(A, M⊗A) = {lie.dim_H}")
        out["lie_dimH"] = lie.dim_H
        if lie.dim_H != rep.dim_H:
            return MATH_FAILURE
    return OK


def _print_cochain(A: Algebra, c: Cochain, limit: int = 40) -> None:
    F = A.field
    names = A.basis_names
    mnames = names if c.module.dim == A.dim else [f"m{i}" for i in range(c.module.dim)]
    rows = sorted(c.terms.items())
    for key, v in rows[:limit]:
        args = ", ".join(names[i] for i in key)
        val = " + ".join(f"{F.fmt(x)}*{mnames[m]}" for m, x in sorted(v.items()))
        print(f"  ({args}) -> {val}")
    if len(rows) > limit:
        print(f"  ... {len(rows) - limit} more")


def cmd_family(args, A: Algebra, out: Dict[str, Any]) -> int:
    name, params = _family_spec(args.family)
    psi = cocycle_family(A, name, params)
    print(f"{name}: cocycle ✓, {len(psi.terms)} nonzero values")
    _print_cochain(A, psi)
    trivial_class = is_coboundary(psi) is not None
    print(f"class trivial: {_mark(trivial_class)}")
    out.update({"family": args.family, "class_trivial": trivial_class,
                "cochain": io.cochain_to_json(psi)})
    if args.emit_cochain:
        _write(args.emit_cochain, io.cochain_to_json(psi))
    return OK


def cmd_deform(args, A: Algebra, out: Dict[str, Any]) -> int:
    if bool(args.family) == bool(args.mu1):
        raise UsageError("give exactly one of --family or --mu1")
    if args.family:
        name, params = _family_spec(args.family)
        mu1 = cocycle_family(A, name, params)
    else:
        mu1 = io.cochain_from_json(A, regular(A), io.load_json_file(args.mu1))
    series = DeformationSeries.from_first_order(A, mu1)
    reports = verify_deformation(series, 1)
    orders: List[Dict[str, Any]] = []
    out["orders"] = orders
    out["mu1_cocycle"] = reports[0].holds
    status = OK
    if not reports[0].holds:
        print("order 1: ✗ (μ_1 is not a cocycle)")
        return MATH_FAILURE
    print("order 1: ✓")
    result = prolong(series, args.order)
    if isinstance(result, ObstructionFailure):
        done = result.series
        status = MATH_FAILURE
    else:
        done = result
    for k in range(2, done.order + 1):
        orders.append({"k": k, "holds": True, "obstruction_dimH": 0})
        zero = done.terms[k].is_zero()
        print(f"order {k}: ✓  μ_{k} {'= 0' if zero else f'has {len(done.terms[k].terms)} nonzero values'}")
    if isinstance(result, ObstructionFailure):
        orders.append({"k": result.k, "holds": False, "obstruction_dimH": 1})
        print(f"order {result.k}: ✗ obstruction class is nonzero")
    return status


def cmd_steenrod(args, A: Algebra, out: Dict[str, Any]) -> int:
    if args.matrix:
        obj = io.load_json_file(args.matrix)
        try:
            D = [{int(k): A.field.parse(x) for k, x in col} for col in obj["columns"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad derivation file: {exc}") from exc
    else:
        _, params = parse_preset("d:" + args.derivation) if args.derivation else ("", {})
        D = partial_power_derivation(A, int(params.get("l", 1)), int(params.get("k", 0)))
    sq = steenrod_square(A, D)
    print(f"Sq D: cocycle ✓, {len(sq.terms)} nonzero values")
    _print_cochain(A, sq)
    out["cochain"] = io.cochain_to_json(sq)
    return OK


VERBS = {
    "check": cmd_check,
    "center": cmd_center,
    "derivations": cmd_derivations,
    "cohomology": cmd_cohomology,
    "homology": cmd_homology,
    "novikov": cmd_novikov,
    "family": cmd_family,
    "deform": cmd_deform,
    "steenrod": cmd_steenrod,
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rsymcoh", description="Right-symmetric cohomology and deformations.")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)
    common = _Parser(add_help=False)
    common.add_argument("--preset", help="e.g. gl:n=2, w1m:p=5,m=1, w:n=2,p=5,m=1,1, o:n=1,p=5,m=2")
    common.add_argument("--algebra", help="algebra JSON file")
    common.add_argument("--json", metavar="PATH", help="write the JSON report here")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                        help="largest cochain space to assemble (coordinates)")
    for verb in VERBS:
        p = sub.add_parser(verb, parents=[common])
        if verb in ("check",):
            p.add_argument("--module")
            p.add_argument("--emit-algebra", metavar="PATH", help="write the algebra as JSON")
        if verb in ("cohomology", "homology"):
            p.add_argument("--module", default="regular" if verb == "cohomology" else "coregular")
            p.add_argument("--degree", type=int, required=True)
        if verb == "cohomology":
            p.add_argument("--flavor", choices=["rsym", "lie", "novikov"], default="rsym")
        if verb == "homology":
            p.add_argument("--compare", action="store_true",
                           help="also compute H_{k-1}^lie(A, M⊗A)")
        if verb in ("family",):
            p.add_argument("--family", required=True,
                           help="theta | psi1:s=1,l=1,r=1 | psi2:l=1,k=0,r=1 | psi3 | psi4:k=0 | "
                                "sq:k=0 | osborn1 | osborn2 | eta:X=E12 | eta_bar:X=E12")
            p.add_argument("--emit-cochain", metavar="PATH", help="write the cochain as JSON")
        if verb == "deform":
            p.add_argument("--family")
            p.add_argument("--mu1", help="cochain JSON file for μ_1")
            p.add_argument("--order", type=int, default=3)
        if verb == "steenrod":
            p.add_argument("--derivation", help="l=1,k=0 for ∂_l^{p^k} on W presets")
            p.add_argument("--matrix", help='JSON {"columns": [[[row, "c"], ...], ...]}')
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out: Dict[str, Any] = {"verb": args.verb}
    try:
        A = load_algebra(args)
        status = VERBS[args.verb](args, A, out)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except OutOfMemoryBudget as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except (AxiomViolation, NotADerivation) as exc:
        print(f"failed: {exc}", file=sys.stderr)
        return MATH_FAILURE
    if args.json:
        _write(args.json, out)
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
