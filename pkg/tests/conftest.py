from __future__ import annotations

import random

import pytest

from rsymcoh.presets import gl, w1m

TRIALS = 100


@pytest.fixture(scope="session")
def gl2():
    return gl(2)


@pytest.fixture(scope="session")
def w1():
    return w1m(5, 1)


@pytest.fixture(params=["gl2", "w1"], scope="session")
def alg(request):
    return request.getfixturevalue(request.param)


@pytest.fixture
def rng():
    return random.Random(20261016)


def random_element(A, rng, density=0.6):
    F = A.field
    v = {}
    for i in range(A.dim):
        if rng.random() < density:
            x = F.reduce(rng.randint(-4, 4))
            if x:
                v[i] = x
    return v or {rng.randrange(A.dim): 1}


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
