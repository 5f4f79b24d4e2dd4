from __future__ import annotations

import pytest

from rsymcoh.cochains import Cochain, d_rsym
from rsymcoh.cohomology import classes_independent, express_class, is_coboundary
from rsymcoh.deform import linear_map_cochain
from rsymcoh.families import (
    PreconditionFailed,
    cocycle_family,
    eta,
    eta_bar,
    novikov_R,
    osborn1,
    osborn2,
    partial_power_derivation,
    psi1,
    psi2,
    psi3,
    psi4,
    psi5,
    theta,
)
from rsymcoh.modules import PresetUnavailable, regular
from rsymcoh.presets import w1m, witt

from conftest import random_element


def test_theta_values(w1):
    th = theta(w1)
    e = w1.index
    assert th.value((e("e1"), e("e3"))) == {0: 1}
    assert th.value((e("e0"), e("e3"))) == {}
    assert d_rsym(th).is_zero()
    assert is_coboundary(th) is None


def test_w1_families_independent(w1):
    fams = [psi1(w1), psi2(w1), psi3(w1), psi4(w1), psi5(w1)]
    for f in fams:
        assert d_rsym(f).is_zero()
        assert is_coboundary(f) is None
    assert classes_independent(fams)


def test_psi1_matches_osborn1(w1):
    assert psi1(w1) == osborn1(w1)
    assert d_rsym(osborn2(w1)).is_zero()


def test_osborn2_class_relation(w1):
    fams = [psi1(w1), psi2(w1), psi3(w1), psi4(w1), psi5(w1)]
    coeffs = express_class(osborn2(w1), fams)
    # osborn2 lies in the span of the five family classes
    assert coeffs is not None


def test_sq_derivation_is_psi5(w1):
    from rsymcoh.deform import steenrod_square

    assert psi5(w1) == steenrod_square(w1, partial_power_derivation(w1, 1, 0))


@pytest.mark.parametrize("p", [7])
def test_families_at_larger_prime(p):
    A = w1m(p, 1)
    fams = [psi1(A), psi2(A), psi3(A), psi4(A), psi5(A)]
    assert classes_independent(fams)


def test_families_m2():
    A = w1m(5, 2)
    fams = [psi1(A), psi2(A, k=0), psi2(A, k=1), psi3(A), psi4(A, k=0), psi4(A, k=1),
            psi5(A, k=0), psi5(A, k=1)]
    for f in fams:
        assert d_rsym(f).is_zero()
    assert classes_independent(fams)


def test_witt_two_variables_families_are_cocycles():
    A = witt(2, [1, 1], 5)
    for f in (psi1(A, 1, 2, 1), psi3(A, 1, 2), psi4(A, 2, 0), psi5(A, 1, 0)):
        assert d_rsym(f).is_zero()


def test_family_preconditions(w1, gl2):
    with pytest.raises(PresetUnavailable):
        theta(gl2)
    with pytest.raises(PreconditionFailed):
        psi1(w1, s=2)
    with pytest.raises(PreconditionFailed):
        psi4(w1, k=1)
    with pytest.raises(PreconditionFailed):
        eta(gl2, {0: 1})  # E11 is not traceless
    with pytest.raises(PreconditionFailed):
        cocycle_family(w1, "psi9")
    with pytest.raises(PreconditionFailed):
        cocycle_family(w1, "psi1", {"q": "1"})


def test_eta_value(gl2):
    e = gl2.index
    X = {e("E12"): 1}
    assert eta(gl2, X).value((e("E22"), e("E11"))) == {e("E12"): 1}


def test_eta_bar_differs_by_coboundary(gl2, rng):
    tr = [1, 0, 0, 1]
    for _ in range(5):
        X = random_element(gl2, rng)
        X[3] = -X.get(0, 0)
        X = {k: v for k, v in X.items() if v}
        if not X:
            continue
        omega = linear_map_cochain(gl2, [{k: tr[j] * x for k, x in X.items()} for j in range(4)])
        assert eta_bar(gl2, X) - eta(gl2, X) == d_rsym(omega)


def test_eta_spans_h2(gl2):
    from rsymcoh.cohomology import cohomology

    basis = [eta(gl2, {1: 1}), eta(gl2, {2: 1}), eta(gl2, {0: 1, 3: -1})]
    assert classes_independent(basis)
    assert cohomology(gl2, regular(gl2), 2).dim_H == len(basis)


def test_novikov_R_gives_theta_class(w1):
    shift = [{}] + [{i - 1: 1} for i in range(1, 5)]    # e_i ↦ e_{i-1}, i.e. ad ∂ up to sign
    pi = [0, 0, 0, 0, 1]
    th = novikov_R(w1, shift, pi)
    coeffs = express_class(th, [theta(w1)])
    assert coeffs is not None and coeffs[0] != 0


def test_novikov_R_preconditions(w1, gl2):
    shift = [{}] + [{i - 1: 1} for i in range(1, 5)]
    with pytest.raises(PreconditionFailed):
        novikov_R(w1, shift, [0, 0, 0, 1, 0])  # π∘R ≠ 0
    with pytest.raises(PreconditionFailed):
        novikov_R(w1, [{i: 1} for i in range(5)], [0] * 5)  # identity is not a derivation
    with pytest.raises(PreconditionFailed):
        novikov_R(gl2, [{}] * 4, [0] * 4)


def test_cocycle_family_by_name(w1, gl2):
    assert cocycle_family(w1, "sq", {"k": "0"}) == psi5(w1)
    assert cocycle_family(w1, "psi1", {"s": "1", "l": "1", "r": "1"}) == psi1(w1)
    assert cocycle_family(gl2, "eta", {"X": "E12"}) == eta(gl2, {1: 1})
    assert isinstance(cocycle_family(gl2, "eta_bar", {"X": "E21"}), Cochain)
