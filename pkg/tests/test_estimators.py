import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from sparsecert import (
    CertificateAnalyzer,
    ElementaryTransformer,
    NSPEstimator,
    RIPEstimator,
    SparkEstimator,
)
from sparsecert.numeric import RationalMatrix
from sparsecert.transforms import ElemOp

PLANE = [[1, 0, 1], [0, 1, 1]]


@pytest.mark.parametrize(
    "est",
    [
        SparkEstimator(force_large=True),
        NSPEstimator(k_max=2, n_samples=10, random_state=3),
        RIPEstimator(k_max=2, alpha_floor=1e-6),
        ElementaryTransformer(ops=["RS 0 1"]),
        CertificateAnalyzer(k_max=2, nsp_samples=5),
    ],
)
def test_params_round_trip_through_clone(est):
    twin = clone(est)
    assert twin.get_params() == est.get_params()
    assert twin is not est


def test_spark_estimator_accepts_lists_strings_and_arrays():
    for X in (PLANE, [["1", "0", "1"], ["0", "1", "1"]], np.array(PLANE)):
        est = SparkEstimator().fit(X)
        assert est.spark_ == 3 and est.witness_ == (0, 1, 2) and est.exact_recovery_k_ == 1


def test_nsp_estimator():
    est = NSPEstimator().fit(PLANE)
    assert est.highest_order_ == 2
    assert est.constants_[1] == pytest.approx(0.5)
    assert est.constant_kinds_ == {1: "EXACT", 2: "EXACT"}


def test_rip_estimator():
    est = RIPEstimator().fit(np.diag([1.0, 2.0]))
    assert np.allclose(est.alpha_, [1, 1]) and np.allclose(est.beta_, [4, 4])
    assert est.highest_order_ == 2
    with pytest.raises(ValueError):
        RIPEstimator().fit(np.array([[np.nan, 1.0]]))


def test_transformer_exact_and_inverse():
    A = RationalMatrix([[1, 1]])
    tr = ElementaryTransformer(ops=["CA 1 0 -1"]).fit(A)
    B = tr.transform(A)
    assert B == RationalMatrix([[1, 0]])
    assert tr.inverse_transform(B) == A


def test_transformer_float_and_shape_check():
    X = np.array([[1.0, 2.0], [3.0, 4.0]])
    tr = ElementaryTransformer(ops=[ElemOp.row_switch(0, 1), ElemOp.col_mult(1, "1/2")])
    Y = tr.fit_transform(X)
    assert np.array_equal(Y, np.array([[3.0, 2.0], [1.0, 1.0]]))
    assert np.array_equal(tr.inverse_transform(Y), X)
    with pytest.raises(ValueError):
        tr.transform(np.ones((3, 2)))
    with pytest.raises(NotFittedError):
        ElementaryTransformer(ops=["RS 0 1"]).transform(X)


def test_certificate_analyzer():
    rep = CertificateAnalyzer(nsp_samples=10).fit(PLANE).report_
    assert rep.spark.value == 3 and rep.highest_rip_order == 2
    assert rep.to_dict()["exact"]["source"] == "rational input"
    frep = CertificateAnalyzer(nsp_samples=10).fit(np.array(PLANE, dtype=float)).report_
    assert frep.spark.value == 3 and "float" in frep.exact_source
