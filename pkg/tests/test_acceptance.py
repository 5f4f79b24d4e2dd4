"""Acceptance criteria, one PASS/FAIL line each.

Run directly (``python tests/test_acceptance.py``) for the summary table, or
through pytest, where every criterion is its own test and the lines are
repeated in the terminal summary.
"""
from __future__ import annotations

import random
import sys
import time
from typing import Callable, List, Tuple

import pytest

from rsymcoh.algebra import commutator, left_structure
from rsymcoh.cochains import (
    Chain,
    Cochain,
    LieCochain,
    antisymmetrize_f,
    boundary,
    cup_product,
    d_lie,
    d_rsym,
    face_map,
    interior,
    lift_F,
    rho_lie,
    scalar_pairing,
    t_operator,
)
from rsymcoh.cohomology import (
    classes_independent,
    cohomology,
    comparison,
    derivation_space,
    express_class,
    homology,
    is_coboundary,
    lie_homology,
    novikov_h2,
)
from rsymcoh.deform import (
    DeformationSeries,
    obstruction,
    prolong,
    star,
    steenrod_square,
    verify_deformation,
)
from rsymcoh.families import eta, psi1, psi2, psi3, psi4, psi5, theta
from rsymcoh.modules import c1_module, coregular, m_tensor_a, regular, trivial
from rsymcoh.presets import build_preset, gl, w1m

RESULTS: List[str] = []

Outcome = Tuple[bool, str]


def _gl2():
    return gl(2)


def _w1():
    return w1m(5, 1)


def _sl2_basis(A):
    return [eta(A, {1: 1}), eta(A, {2: 1}), eta(A, {0: 1, 3: -1})]


# -- criteria -----------------------------------------------------------------------

def c1() -> Outcome:
    A = _gl2()
    rep = cohomology(A, regular(A), 2)
    basis = _sl2_basis(A)
    solved = [express_class(r, basis) for r in rep.representatives]
    ok = rep.dim_H == 3 and all(s is not None for s in solved)
    return ok, f"dim H² = {rep.dim_H}; classes written as η_X + coboundary: {sum(s is not None for s in solved)}/{len(solved)}"


def c2() -> Outcome:
    A = _gl2()
    rep = cohomology(A, regular(A), 3)
    return rep.dim_H == 0, f"dim H³ = {rep.dim_H}"


def c3() -> Outcome:
    A = _gl2()
    dims = [cohomology(A, trivial(A), k).dim_H for k in (1, 2, 3)]
    return dims == [0, 0, 0], f"dim H^1..3(gl2, K) = {dims}"


def c4() -> Outcome:
    A = _w1()
    rep = cohomology(A, trivial(A), 2)
    th = theta(A)
    cocycle = d_rsym(th).is_zero()
    nontrivial = is_coboundary(th) is None
    return rep.dim_H == 1 and cocycle and nontrivial, \
        f"dim H² = {rep.dim_H}; θ cocycle: {cocycle}; θ not a coboundary: {nontrivial}"


def c5() -> Outcome:
    A = _w1()
    rep = novikov_h2(A)
    return rep.dim_H == 0, f"dim H²_nov = {rep.dim_H}"


def c6() -> Outcome:
    A = _w1()
    rep = cohomology(A, regular(A), 2)
    fams = [psi1(A), psi2(A), psi3(A), psi4(A), psi5(A)]
    cocycles = all(d_rsym(f).is_zero() for f in fams)
    independent = classes_independent(fams)
    ok = rep.dim_H == 5 and cocycles and independent
    return ok, (f"dim H² = {rep.dim_H} (expected 5); five families are cocycles: {cocycles}; "
                f"classes independent: {independent}")


def c7() -> Outcome:
    A = _w1()
    z1 = derivation_space(A).dim_Z
    ls = left_structure(A)
    e0 = A.index("e0")
    unit_ok = ls.left_unit is not None and ls.left_unit.get(e0, 0) == 1 and \
        ls.Z_l.contains({k: v for k, v in ls.left_unit.items() if k != e0})
    ok = z1 == 2 and ls.Z_l.dim == 1 and ls.Q_l_family_dim == 1 and unit_ok
    return ok, f"dim Z¹ = {z1}; dim Z_l = {ls.Z_l.dim}; Q_l family dim = {ls.Q_l_family_dim}; e0 + Z_l: {unit_ok}"


def c8() -> Outcome:
    pairs = []
    for A in (_gl2(), _w1()):
        for k in (1, 2):
            pairs.append(comparison(A, regular(A), k))
    return all(a == b for a, b in pairs), f"(H^{{k+1}}_rsym, H^k_lie(C¹)) = {pairs}"


def c9() -> Outcome:
    A = _gl2()
    rng = random.Random(9)
    stars, zeros, verified = 0, 0, 0
    for _ in range(5):
        while True:
            x, y, z = (rng.randint(-3, 3) for _ in range(3))
            X = {k: v for k, v in {0: x, 1: y, 2: z, 3: -x}.items() if v}
            if X:
                break
        e = eta(A, X)
        stars += star(e, e).is_zero()
        out = prolong(DeformationSeries.from_first_order(A, e), 4)
        if isinstance(out, DeformationSeries):
            zeros += all(out.term(k).is_zero() for k in range(2, 5))
            verified += all(r.holds for r in verify_deformation(out, 4))
    ok = stars == zeros == verified == 5
    return ok, f"η⋆η = 0: {stars}/5; μ_2..μ_4 = 0: {zeros}/5; verified to order 4: {verified}/5"


def _random_element(A, rng):
    v = {i: A.field.reduce(rng.randint(-4, 4)) for i in range(A.dim) if rng.random() < 0.6}
    return {k: x for k, x in v.items() if x} or {0: 1}


def _properties(A, rng, trials: int) -> List[str]:
    """Names of the properties that failed on A."""
    failed = set()
    M, K = regular(A), trivial(A)
    P = scalar_pairing(M)
    C1 = c1_module(M)
    N = coregular(A)
    Z = cohomology(A, M, 2).kernel_basis.vectors
    F = A.field
    has_ast = A.ast is not None
    derivations = derivation_space(A).kernel_basis.vectors if F.characteristic else []
    for t in range(trials):
        k = 1 + t % 3
        psi = Cochain.random(A, M, k, rng)
        if not d_rsym(d_rsym(psi)).is_zero():
            failed.add("d²=0")
        small = Cochain.random(A, M, 1 + t % 2, rng)
        for j in range(2, small.nargs + 2):
            for i in range(1, j):
                if face_map(j, face_map(i, small)) != face_map(i, face_map(j - 1, small)):
                    failed.add("pre-simplicial")
        x, y = _random_element(A, rng), _random_element(A, rng)
        xy = commutator(A, x, y)
        p2 = Cochain.random(A, M, 2 + t % 2, rng)
        for l in range(2, p2.nargs + 1):
            if interior(x, face_map(l, p2)) != face_map(l - 1, interior(x, p2)):
                failed.add("Cartan (i)")
        if interior(x, face_map(1, p2)) != rho_lie(x, p2).scale(-1):
            failed.add("Cartan (ii)")
        if rho_lie(xy, p2) != rho_lie(x, rho_lie(y, p2)) - rho_lie(y, rho_lie(x, p2)):
            failed.add("Cartan (iii)")
        if interior(x, rho_lie(y, p2)) - rho_lie(y, interior(x, p2)) != interior(xy, p2):
            failed.add("Cartan (iv)")
        if d_rsym(interior(x, p2)) + interior(x, d_rsym(p2)) != rho_lie(x, p2).scale(-1):
            failed.add("Cartan (v)")
        if antisymmetrize_f(d_rsym(psi)) != d_lie(antisymmetrize_f(psi)):
            failed.add("f chain map")
        phi = LieCochain.random(A, C1, 1 + t % 2, rng)
        if lift_F(d_lie(phi)) != d_rsym(lift_F(phi)):
            failed.add("F chain map")
        kk, l = 1 + t % 2, 1 + (t // 2) % 2
        u, w = Cochain.random(A, M, kk + 1, rng), LieCochain.random(A, K, l, rng)
        lhs = d_rsym(cup_product(u, w, P))
        rhs = cup_product(d_rsym(u), w, P) - cup_product(u, d_lie(w), P).scale((-1) ** kk)
        if lhs != rhs:
            failed.add("cup Leibniz")
        if has_ast and t_operator(d_rsym(psi)) != d_rsym(t_operator(psi)):
            failed.add("T d = d T")
        ch = Chain.random(A, N, 2 + t % 3, rng)
        if not boundary(boundary(ch)).is_zero():
            failed.add("∂²=0")
        if t % 4 == 0:
            v = {}
            for z in Z:
                c = F.reduce(rng.randint(-2, 2))
                for key, val in z.items():
                    v[key] = F.reduce(v.get(key, 0) + c * val)
            mu1 = Cochain.from_coordinates(A, M, 2, {key: val for key, val in v.items() if val})
            s = DeformationSeries.from_first_order(A, mu1)
            verify_deformation(s, 1)
            obs, _ = obstruction(s, 2)
            if not d_rsym(obs).is_zero():
                failed.add("d Obs = 0")
            out = prolong(s, 2)
            if isinstance(out, DeformationSeries):
                obs3, _ = obstruction(out, 3)
                if not d_rsym(obs3).is_zero():
                    failed.add("d Obs = 0")
            elif not d_rsym(out.obstruction).is_zero():
                failed.add("d Obs = 0")
        if derivations:
            coords = {}
            for z in derivations:
                c = F.reduce(rng.randint(0, 4))
                for key, val in z.items():
                    coords[key] = F.reduce(coords.get(key, 0) + c * val)
            D = [{} for _ in range(A.dim)]
            for idx, val in coords.items():
                if val:
                    a, m = divmod(idx, A.dim)
                    D[a][m] = val
            if not d_rsym(steenrod_square(A, D)).is_zero():
                failed.add("Sq D ∈ Z²")
    return sorted(failed)


def c10() -> Outcome:
    rng = random.Random(10)
    report = []
    ok = True
    # Sq needs characteristic p, so gl2 is also run over F5 for that property
    for name, A in (("gl2/Q", _gl2()), ("W1(1)/F5", _w1()), ("gl2/F5", build_preset("gl:n=2,p=5"))):
        trials = 100 if name != "gl2/F5" else 25
        failed = _properties(A, rng, trials)
        ok &= not failed
        report.append(f"{name}: {trials} trials, failures {failed or 'none'}")
    return ok, "; ".join(report)


def c11() -> Outcome:
    A = _w1()
    M = coregular(A)
    h = homology(A, M, 2).dim_H
    l = lie_homology(A, m_tensor_a(M), 1).dim_H
    return h == l, f"dim H_2^rsym = {h}; dim H_1^lie(A, M⊗A) = {l}"


CRITERIA: List[Tuple[int, str, float, Callable[[], Outcome]]] = [
    (1, "gl2 H²(regular) = 3, classes are η_X", 15, c1),
    (2, "gl2 H³(regular) = 0", 60, c2),
    (3, "gl2 H^k(trivial) = 0, k = 1..3", 30, c3),
    (4, "W1(1)/F5 H²(trivial) = 1, θ nontrivial", 10, c4),
    (5, "W1(1)/F5 H²_nov = 0", 10, c5),
    (6, "W1(1)/F5 H²(regular) = 5, five families independent", 60, c6),
    (7, "W1(1)/F5 Z¹ = 2, Z_l = 1, Q_l = e0 + Z_l", 5, c7),
    (8, "comparison H^{k+1}_rsym = H^k_lie(C¹)", 120, c8),
    (9, "η_X deformations on gl2", 30, c9),
    (10, "randomized property suites", 180, c10),
    (11, "homology H_2 = H_1^lie(M⊗A)", 60, c11),
]


def evaluate(number: int) -> Tuple[bool, str]:
    _, title, limit, fn = CRITERIA[number - 1]
    start = time.perf_counter()
    ok, detail = fn()
    elapsed = time.perf_counter() - start
    in_time = elapsed < limit
    passed = ok and in_time
    timing = f"{elapsed:.2f} s of {limit:g} s" + ("" if in_time else " (TOO SLOW)")
    line = f"{'PASS' if passed else 'FAIL'}  [{number:2d}] {title}: {detail} ({timing})"
    RESULTS.append(line)
    print(line)
    return passed, line


@pytest.mark.parametrize("number", [c[0] for c in CRITERIA])
def test_acceptance(number):
    passed, line = evaluate(number)
    assert passed, line


def main() -> int:
    outcomes = [evaluate(c[0])[0] for c in CRITERIA]
    print(f"\n{sum(outcomes)}/{len(outcomes)} criteria pass")
    return 0 if all(outcomes) else 1


if __name__ == "__main__":
    sys.exit(main())
