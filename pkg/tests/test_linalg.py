from __future__ import annotations

import random

import sympy
from hypothesis import given, settings, strategies as st
from sympy.polys.matrices import DomainMatrix

from rsymcoh.linalg import Echelon, SparseMatrix, SubspaceBasis, rank_nullspace, solve_linear
from rsymcoh.scalars import GF, Q


def random_dense(rng, rows, cols, F, density=0.4):
    return [[F.reduce(rng.randint(-3, 3)) if rng.random() < density else 0 for _ in range(cols)]
            for _ in range(rows)]


def sympy_rank(data, F):
    rows, cols = len(data), len(data[0])
    if F.characteristic:
        dom = sympy.GF(F.characteristic)
        M = DomainMatrix([[dom(x) for x in r] for r in data], (rows, cols), dom)
    else:
        M = DomainMatrix([[sympy.QQ(int(x.numerator) if hasattr(x, "numerator") else x) for x in r]
                          for r in data], (rows, cols), sympy.QQ)
    return M.rank()


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9), st.integers(1, 9), st.integers(1, 9), st.sampled_from([0, 2, 5, 7]))
def test_rank_matches_sympy(seed, rows, cols, p):
    F = GF(p) if p else Q
    rng = random.Random(seed)
    data = random_dense(rng, rows, cols, F)
    M = SparseMatrix.from_dense(F, data)
    r, ker = rank_nullspace(M)
    assert r == sympy_rank(data, F)
    assert ker.dim == cols - r
    for v in ker.vectors:
        assert not M.apply(v)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9), st.sampled_from([0, 5]))
def test_solve_linear(seed, p):
    F = GF(p) if p else Q
    rng = random.Random(seed)
    data = random_dense(rng, 6, 5, F)
    M = SparseMatrix.from_dense(F, data)
    x0 = {j: F.reduce(rng.randint(-2, 2)) for j in range(5)}
    x0 = {j: v for j, v in x0.items() if v}
    b = M.apply(x0)
    sol = solve_linear(M, b)
    assert sol is not None
    x, ker = sol
    assert M.apply(x) == b
    # a vector outside the column space has no solution
    r, _ = rank_nullspace(M)
    if r < 6:
        ech = Echelon(F, 6)
        for c in M.column_dicts():
            ech.add(c)
        for i in range(6):
            if not ech.contains({i: 1}):
                assert solve_linear(M, {i: 1}) is None
                break


def test_subspace_coordinates():
    F = Q
    B = SubspaceBasis.span(F, 3, [{0: 1, 1: 1}, {1: 1, 2: 1}, {0: 1, 2: -1}])
    assert B.dim == 2
    assert B.contains({0: 2, 1: 3, 2: 1})
    assert not B.contains({0: 1})


def test_transpose_apply():
    F = GF(7)
    M = SparseMatrix.from_dense(F, [[1, 2, 0], [0, 3, 4]])
    assert M.transpose().apply({0: 1, 1: 1}) == {0: 1, 1: 5, 2: 4}
