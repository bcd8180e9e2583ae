import math
import random

import numpy as np
import pytest
from hypothesis import assume, given, settings

from oracles import oracle_nsp_constant, oracle_sparse_null_vector_exists
from sparsecert.nsp import (
    EXACT,
    LOWER_BOUND,
    highest_nsp_order,
    nsp_constant_exact_nullity1,
    nsp_constant_lower_bound,
    nsp_failure_certificate,
    nsp_ratio,
    nsp_report,
    top_k_support,
)
from sparsecert.numeric import RationalMatrix, nullity
from sparsecert.spark import spark
from sparsecert.transforms import random_rational_matrix
from strategies import rational_matrices

# Frozen from the sympy oracle: null vector (5, -8, -1, 3) up to scale.
NULLITY1 = [[1, 0, 2, -1], [0, 1, 1, 3], [1, 1, 0, 1]]


def _full_row_rank_4x5(rng):
    while True:
        A = random_rational_matrix(4, 5, seed=rng)
        if nullity(A) == 1:
            return A


def test_highest_order_examples():
    assert highest_nsp_order(RationalMatrix([[1, 0], [2, 0]])) == 0
    assert highest_nsp_order(RationalMatrix([[1, 1]])) == 1
    assert highest_nsp_order(RationalMatrix.identity(3)) == 3


def test_failure_certificate_examples():
    A = RationalMatrix([[1, 1]])
    assert nsp_failure_certificate(A, 2) == (1, -1)
    assert nsp_failure_certificate(A, 1) is None
    Z = RationalMatrix([[1, 2, 0], [3, 4, 0]])
    assert nsp_failure_certificate(Z, 1) == (0, 0, 1)
    with pytest.raises(ValueError):
        nsp_failure_certificate(A, 0)


@pytest.mark.parametrize(
    "rows, k, expected",
    [([[1, 1]], 1, 1.0), ([[1, 2]], 1, 2.0), ([[1, 0, 1], [0, 1, 1]], 1, 0.5)],
)
def test_exact_constant_examples(rows, k, expected):
    assert nsp_constant_exact_nullity1(RationalMatrix(rows), k) == pytest.approx(expected, abs=1e-15)


def test_exact_constant_frozen():
    A = RationalMatrix(NULLITY1)
    assert nsp_constant_exact_nullity1(A, 1) == pytest.approx(8 / 9, abs=1e-15)
    assert nsp_constant_exact_nullity1(A, 2) == pytest.approx(math.sqrt(178) / 4, abs=1e-15)


def test_exact_constant_rejections():
    with pytest.raises(ValueError, match="nullity"):
        nsp_constant_exact_nullity1(RationalMatrix([[1, 1, 0, 0], [0, 0, 1, 1]]), 1)
    with pytest.raises(ValueError, match="spark"):
        nsp_constant_exact_nullity1(RationalMatrix([[1, 1]]), 2)


def test_lower_bound_examples():
    A = RationalMatrix([[1, 1, 0, 0], [0, 0, 1, 1]])
    assert nsp_constant_lower_bound(A, 1, 2000, seed=0) >= 1 - 1e-6
    assert nsp_constant_lower_bound(A, 1, 0) == 0.0
    with pytest.raises(ValueError, match="trivial"):
        nsp_constant_lower_bound(RationalMatrix.identity(2), 1, 10)


def test_lower_bound_is_monotone_in_samples():
    A = RationalMatrix([[1, 2, 0, -1, 3], [0, 1, 1, 2, -1]])
    values = [nsp_constant_lower_bound(A, 1, s, seed=5) for s in (1, 10, 100, 400)]
    assert values == sorted(values)


def test_ratio_is_scale_invariant():
    h = np.array([0.3, -1.2, 0.5, 2.0])
    assert nsp_ratio(h, 2) == nsp_ratio(2 * h, 2)
    assert nsp_ratio(np.array([1.0, 0.0]), 1) == math.inf
    assert nsp_ratio(np.zeros(3), 1) == 0.0


def test_top_k_support_ties_go_low():
    assert top_k_support([1, -1, 1], 2) == [0, 1]
    assert top_k_support([0, 3, -3, 1], 1) == [1]


def test_report_kinds():
    assert all(e.kind == EXACT for e in nsp_report(RationalMatrix(NULLITY1)).constant_estimates.values())
    rep = nsp_report(RationalMatrix([[1, 2, 0, -1, 3], [0, 1, 1, 2, -1]]), samples=50)
    assert rep.highest_order == 2
    assert {e.kind for e in rep.constant_estimates.values()} == {LOWER_BOUND}
    full = nsp_report(RationalMatrix.identity(2))
    assert full.highest_order == 2 and full.failure_certificate is None
    assert full.constant_estimates[1].value == 0.0
    assert full.to_dict()["constant_estimates"]["1"]["kind"] == EXACT


def test_report_certificate_is_sparse_null_vector():
    A = RationalMatrix([[1, 2, 0, -1, 3], [0, 1, 1, 2, -1], [2, 3, -1, -4, 7]])
    rep = nsp_report(A, samples=10)
    h = rep.failure_certificate
    assert all(x == 0 for x in A @ h)
    assert sum(1 for x in h if x) <= rep.highest_order + 1


@settings(max_examples=40, deadline=None)
@given(rational_matrices(max_cols=7))
def test_highest_order_matches_sparse_null_vectors(A):
    order = highest_nsp_order(A)
    s = spark(A)
    n = A.shape[1]
    assert order == (n if s.is_full_column_rank else s.value - 1)
    for k in range(1, n + 1):
        exists = oracle_sparse_null_vector_exists(A.tolist(), k)
        assert exists == (k > order)
        assert (nsp_failure_certificate(A, k, s) is not None) == exists


def test_closed_form_matches_oracle_and_sampler():
    rng = random.Random(2)
    for _ in range(20):
        A = _full_row_rank_4x5(rng)
        s = spark(A)
        for k in range(1, s.value):
            exact = nsp_constant_exact_nullity1(A, k, s)
            assert abs(exact - oracle_nsp_constant(A.tolist(), k)) <= 1e-12
            assert abs(nsp_constant_lower_bound(A, k, 3, seed=1, spark_result=s) - exact) <= 1e-12


@settings(max_examples=30, deadline=None)
@given(rational_matrices(min_rows=3, max_rows=3, min_cols=4, max_cols=4))
def test_sampler_never_exceeds_exact(A):
    assume(nullity(A) == 1)
    s = spark(A)
    assume(s.value > 1)
    for k in range(1, s.value):
        assert nsp_constant_lower_bound(A, k, 20, seed=0, spark_result=s) <= nsp_constant_exact_nullity1(A, k, s) + 1e-12
