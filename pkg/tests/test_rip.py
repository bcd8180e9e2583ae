import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from oracles import oracle_rip
from sparsecert._guard import EnumerationGuardError
from sparsecert.numeric import RationalMatrix, to_float
from sparsecert.rip import highest_rip_order, rip_constants, rip_table, symmetric_delta
from sparsecert.spark import spark
from sparsecert.transforms import random_rational_matrix

well_scaled = arrays(
    np.float64,
    st.tuples(st.integers(1, 4), st.integers(1, 6)),
    elements=st.floats(-3, 3, allow_nan=False).map(lambda x: round(x, 3)),
)


def test_identity_order_one():
    r = rip_constants(np.eye(2), 1)
    assert (r.alpha, r.beta, r.delta) == (1.0, 1.0, 0.0)


def test_diagonal_order_one():
    r = rip_constants(np.diag([1.0, 2.0]), 1)
    assert r.alpha == pytest.approx(1) and r.beta == pytest.approx(4)
    assert r.delta == pytest.approx(3 / 5)
    assert r.argmin_set == (0,) and r.argmax_set == (1,)


def test_zero_column_order_one():
    r = rip_constants(np.array([[1.0, 0.0], [2.0, 0.0]]), 1)
    assert r.alpha == 0.0 and r.delta == 1.0


def test_duplicate_columns_table():
    t = rip_table(np.array([[1.0, 1.0]]), 2)
    assert [(r.alpha, r.beta, r.delta) for r in t] == [(1.0, 1.0, 0.0), (0.0, 2.0, 1.0)]


def test_argsets_are_lexicographically_first():
    r = rip_constants(np.eye(3), 2)
    assert r.argmin_set == (0, 1) and r.argmax_set == (0, 1)


def test_rejections():
    with pytest.raises(ValueError):
        rip_constants(np.eye(2), 3)
    with pytest.raises(ValueError):
        rip_constants(np.array([[np.nan, 1.0]]), 1)
    with pytest.raises(ValueError):
        symmetric_delta(0.0, 0.0)
    with pytest.raises(ValueError, match="all-zero"):
        rip_constants(np.zeros((2, 2)), 1)
    with pytest.raises(EnumerationGuardError):
        rip_constants(np.ones((1, 25)), 1)
    with pytest.raises(ValueError):
        highest_rip_order(np.eye(2), alpha_floor=0.0)


def test_highest_order_examples():
    assert highest_rip_order(np.eye(3)) == 3
    assert highest_rip_order(np.array([[1.0, 0.0], [0.0, 0.0]])) == 0
    assert highest_rip_order(np.zeros((2, 2))) == 0


def test_highest_order_tracks_exact_spark():
    for seed in range(30):
        A = random_rational_matrix(3, 6, seed=seed)
        s = spark(A)
        F = to_float(A)
        expected = 6 if s.is_full_column_rank else s.value - 1
        assert highest_rip_order(F) == expected


def test_thread_count_does_not_change_result():
    rng = np.random.default_rng(0)
    A = rng.standard_normal((5, 14))
    assert rip_constants(A, 4, n_jobs=1) == rip_constants(A, 4, n_jobs=4)


def test_scaling_keeps_delta():
    rng = np.random.default_rng(1)
    A = rng.standard_normal((4, 7))
    for k in (1, 2, 3):
        r, r3 = rip_constants(A, k), rip_constants(3 * A, k)
        assert r3.alpha == pytest.approx(9 * r.alpha, rel=1e-10)
        assert r3.beta == pytest.approx(9 * r.beta, rel=1e-10)
        assert abs(r3.delta - r.delta) <= 1e-10


def test_sampled_quadratic_form_stays_inside_and_approaches_extremes():
    rng = np.random.default_rng(4)
    A = rng.standard_normal((3, 5))
    for k in (1, 2):
        r = rip_constants(A, k)
        S = np.array([rng.choice(5, k, replace=False) for _ in range(100_000)])
        X = rng.standard_normal((100_000, k))
        X /= np.linalg.norm(X, axis=1, keepdims=True)
        cols = A[:, S]  # (3, samples, k)
        vals = np.sum(np.einsum("msk,sk->sm", cols, X) ** 2, axis=1)
        lo, hi = vals.min(), vals.max()
        assert r.alpha - 1e-9 <= lo and hi <= r.beta + 1e-9
        assert lo - r.alpha <= 1e-3 * max(1.0, r.beta) and r.beta - hi <= 1e-3 * max(1.0, r.beta)


@settings(max_examples=60, deadline=None)
@given(well_scaled)
def test_matches_svd_oracle_and_is_monotone(A):
    assume(A.any())
    n = A.shape[1]
    prev = None
    for k in range(1, n + 1):
        r = rip_constants(A, k)
        lo, hi = oracle_rip(A, k)
        scale = max(1.0, hi)
        assert abs(r.alpha - lo) <= 1e-10 * scale
        assert abs(r.beta - hi) <= 1e-10 * scale
        if prev is not None:
            assert r.alpha <= prev.alpha + 1e-12 * scale
            assert r.beta >= prev.beta - 1e-12 * scale
        prev = r


def test_rational_input_after_float_conversion():
    A = RationalMatrix([["1/2", 0], [0, "3/2"]])
    r = rip_constants(to_float(A), 1)
    assert r.alpha == 0.25 and r.beta == 2.25
