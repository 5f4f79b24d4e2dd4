from __future__ import annotations

import json

import pytest

from rsymcoh import io
from rsymcoh.cochains import Chain, Cochain, LieCochain
from rsymcoh.cohomology import cohomology
from rsymcoh.modules import build_module, coregular, regular
from rsymcoh.presets import build_preset
from rsymcoh.scalars import ParseError


@pytest.mark.parametrize("spec", ["gl:n=2", "w1m:p=5,m=1", "gl:n=2,p=7", "o:n=1,p=5,m=2"])
def test_algebra_roundtrip(spec):
    A = build_preset(spec)
    obj = io.algebra_to_json(A)
    assert list(obj)[:4] == ["field", "dim", "basis", "circ"]
    B = io.algebra_from_json(json.loads(io.dumps(obj)))
    assert io.algebra_to_json(B) == obj
    assert B.circ == A.circ and B.ast == A.ast and B.grading == A.grading


def test_algebra_json_shape():
    obj = io.algebra_to_json(build_preset("w1m:p=5,m=1"))
    assert obj["field"] == {"kind": "Fp", "p": 5}
    assert all(isinstance(c, str) for *_, c in obj["circ"])
    assert "ast" in obj and obj["grading"] == [-1, 0, 1, 2, 3]
    assert io.algebra_to_json(build_preset("gl:n=2"))["field"] == {"kind": "Q"}


@pytest.mark.parametrize("name", ["regular", "trivial", "bar", "coregular"])
def test_module_roundtrip(alg, name):
    M = build_module(alg, name)
    obj = io.module_to_json(M)
    N = io.module_from_json(alg, json.loads(io.dumps(obj)))
    assert N.kind == M.kind
    assert io.module_to_json(N) == obj


def test_cochain_roundtrip(alg, rng):
    M = regular(alg)
    for k in (1, 2, 3):
        c = Cochain.random(alg, M, k, rng)
        obj = io.cochain_to_json(c)
        assert obj["degree"] == k
        for a0, tail, m, x in obj["terms"]:
            assert list(tail) == sorted(set(tail))
            assert isinstance(x, str)
        assert io.cochain_from_json(alg, M, json.loads(io.dumps(obj))) == c


def test_degree_zero_cochain(gl2):
    M = regular(gl2)
    c = Cochain.from_element(gl2, M, {0: 1, 3: 2})
    obj = io.cochain_to_json(c)
    assert obj["terms"] == [[None, [], 0, "1"], [None, [], 3, "2"]]
    assert io.cochain_from_json(gl2, M, obj) == c


def test_full_cochain_serializes_compressed(gl2, rng):
    c = Cochain.random(gl2, regular(gl2), 3, rng)
    assert io.cochain_to_json(c.to_full()) == io.cochain_to_json(c)


def test_other_kinds(gl2, rng):
    assert io.cochain_to_json(LieCochain.random(gl2, regular(gl2), 2, rng))["kind"] == "lie"
    assert io.cochain_to_json(Chain.random(gl2, coregular(gl2), 2, rng))["kind"] == "chain"


def test_report_json(gl2):
    rep = cohomology(gl2, regular(gl2), 2)
    obj = io.report_to_json(rep)
    assert list(obj) == ["degree", "dimC", "dimZ", "dimB", "dimH", "representatives"]
    assert (obj["degree"], obj["dimH"]) == (2, 3)
    assert len(obj["representatives"]) == 3


@pytest.mark.parametrize("bad", [
    [],
    {"dim": 2},
    {"field": {"kind": "Fp", "p": 4}, "dim": 1, "circ": []},
    {"field": {"kind": "Q"}, "dim": 2, "circ": [[0, 0, 5, "1"]]},
    {"field": {"kind": "Q"}, "dim": 2, "circ": [[0, 0, 1, "x"]]},
    {"field": {"kind": "Q"}, "dim": 2, "circ": [[0, 0, 1]]},
])
def test_bad_algebra_json(bad):
    with pytest.raises(ParseError):
        io.algebra_from_json(bad)


@pytest.mark.parametrize("bad", [
    {"degree": 2},
    {"degree": 2, "terms": [[0, [1, 0], 0, "1"]]},
    {"degree": 2, "terms": [[0, [9], 0, "1"]]},
    {"degree": 2, "terms": [[0, [1], 9, "1"]]},
    {"degree": 0, "terms": [[0, [], 0, "1"]]},
])
def test_bad_cochain_json(gl2, bad):
    with pytest.raises(ParseError):
        io.cochain_from_json(gl2, regular(gl2), bad)


def test_malformed_file(tmp_path):
    p = tmp_path / "a.json"
    p.write_text("{not json")
    with pytest.raises(ParseError):
        io.load_json_file(str(p))
