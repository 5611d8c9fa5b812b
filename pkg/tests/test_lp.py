import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orthogate.lp import phase1_feasible

linprog = pytest.importorskip("scipy.optimize").linprog


def _scipy_feasible(A, b):
    res = linprog(np.zeros(A.shape[1]), A_eq=A, b_eq=b, bounds=[(0, None)] * A.shape[1], method="highs")
    return res.status == 0


def test_simple_feasible():
    x = phase1_feasible([[1, 1]], [1])
    assert x is not None and x.sum() == pytest.approx(1) and np.all(x >= 0)


def test_simple_infeasible():
    assert phase1_feasible([[1, 1], [1, -1]], [1, 2]) is None


def test_negative_rhs():
    x = phase1_feasible([[-1, 0]], [-2])
    np.testing.assert_allclose(x, [2, 0])


def test_shape_mismatch():
    with pytest.raises(ValueError):
        phase1_feasible([[1, 1]], [1, 2])


@settings(max_examples=80, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), m=st.integers(1, 6), n=st.integers(1, 8), planted=st.booleans())
def test_agrees_with_scipy(seed, m, n, planted):
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((m, n))
    if planted:
        b = A @ rng.uniform(0, 1, n)
    else:
        b = rng.standard_normal(m)
    x = phase1_feasible(A, b)
    assert (x is not None) == _scipy_feasible(A, b)
    if x is not None:
        assert np.all(x >= 0)
        assert np.max(np.abs(A @ x - b)) <= 1e-8


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), k=st.integers(2, 4), N=st.integers(2, 6))
def test_phase_systems_agree_with_scipy(seed, k, N):
    # the shape of system the capacity search produces
    rng = np.random.default_rng(seed)
    xi = rng.choice(np.arange(4) * np.pi / 2, size=(N, k))
    rows = [np.ones(N)]
    for r in range(k):
        for s in range(r + 1, k):
            rows += [np.cos(xi[:, r] - xi[:, s]), np.sin(xi[:, r] - xi[:, s])]
    A = np.array(rows)
    b = np.zeros(len(rows))
    b[0] = 1
    assert (phase1_feasible(A, b) is not None) == _scipy_feasible(A, b)
