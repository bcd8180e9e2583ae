"""Estimator-style front end.

The sensing matrix itself is the input ``X`` (rows = measurements,
columns = signal coordinates).  Fitting computes a certificate and stores it
in trailing-underscore attributes; parameters follow the usual
``get_params``/``set_params`` protocol so estimators can be cloned and
grid-searched.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .nsp import nsp_report
from .numeric import RationalMatrix
from .report import DEFAULT_NSP_SAMPLES, analyze
from .rip import DEFAULT_ALPHA_FLOOR, highest_rip_order, rip_table
from .spark import exact_recovery_sparsity, spark
from .transforms import ElemOp, OpSequence, apply_all, apply_float, inverse_op
from .validation import check_float_matrix, check_rational_matrix


class SparkEstimator(BaseEstimator):
    """Exact spark of a sensing matrix.

    Attributes set by ``fit``: ``spark_`` (int or ``"FULL_COLUMN_RANK"``),
    ``witness_``, ``coefficients_``, ``exact_recovery_k_``, ``result_``.
    """

    def __init__(self, force_large=False):
        self.force_large = force_large

    def fit(self, X, y=None):
        A = check_rational_matrix(X)
        res = spark(A, self.force_large)
        self.result_ = res
        self.spark_ = res.value
        self.witness_ = res.witness
        self.coefficients_ = res.coefficients
        self.exact_recovery_k_ = exact_recovery_sparsity(res)
        self.n_features_in_ = A.shape[1]
        return self


class NSPEstimator(BaseEstimator):
    """Highest NSP order, failure certificate and per-order constants."""

    def __init__(self, k_max=None, n_samples=DEFAULT_NSP_SAMPLES, random_state=0):
        self.k_max = k_max
        self.n_samples = n_samples
        self.random_state = random_state

    def fit(self, X, y=None):
        A = check_rational_matrix(X)
        rep = nsp_report(A, self.k_max, self.n_samples, int(self.random_state or 0))
        self.report_ = rep
        self.highest_order_ = rep.highest_order
        self.failure_certificate_ = rep.failure_certificate
        self.constants_ = {k: e.value for k, e in rep.constant_estimates.items()}
        self.constant_kinds_ = {k: e.kind for k, e in rep.constant_estimates.items()}
        self.n_features_in_ = A.shape[1]
        return self


class RIPEstimator(BaseEstimator):
    """Tightest asymmetric RIP constants for k = 1..k_max and the highest order.

    ``alpha_``, ``beta_`` and ``delta_`` are arrays indexed by ``k - 1``.
    """

    def __init__(self, k_max=None, alpha_floor=DEFAULT_ALPHA_FLOOR, n_jobs=1, force_large=False):
        self.k_max = k_max
        self.alpha_floor = alpha_floor
        self.n_jobs = n_jobs
        self.force_large = force_large

    def fit(self, X, y=None):
        F = check_float_matrix(X)
        m, n = F.shape
        k_max = self.k_max if self.k_max is not None else min(m, n)
        jobs = self.n_jobs or 1
        self.constants_ = rip_table(F, k_max, self.force_large, jobs)
        self.alpha_ = np.array([r.alpha for r in self.constants_])
        self.beta_ = np.array([r.beta for r in self.constants_])
        self.delta_ = np.array([r.delta for r in self.constants_])
        self.highest_order_ = highest_rip_order(F, self.alpha_floor, self.force_large, jobs)
        self.n_features_in_ = n
        return self


class ElementaryTransformer(TransformerMixin, BaseEstimator):
    """Apply a fixed sequence of elementary operations.

    ``ops`` is a list of :class:`ElemOp` or op-file lines such as
    ``"CA 1 0 -1"``.  Rational input stays exact; float input is transformed
    in floating point.
    """

    def __init__(self, ops=()):
        self.ops = ops

    def _parse(self, shape):
        from .formats import parse_ops_text

        ops = list(self.ops)
        if all(isinstance(op, ElemOp) for op in ops):
            return OpSequence(tuple(ops), shape)
        return parse_ops_text("\n".join(str(op) for op in ops), shape)

    def fit(self, X, y=None):
        shape = _shape(X)
        self.ops_ = self._parse(shape)
        self.n_features_in_ = shape[1]
        self.shape_ = shape
        return self

    def _run(self, X, ops):
        if _shape(X) != self.shape_:
            raise ValueError(f"fitted for shape {self.shape_}, got {_shape(X)}")
        if _is_float(X):
            F = check_float_matrix(X)
            for op in ops:
                F = apply_float(F, op)
            return F
        return apply_all(check_rational_matrix(X), ops)

    def transform(self, X):
        check_is_fitted(self, "ops_")
        return self._run(X, self.ops_)

    def inverse_transform(self, X):
        check_is_fitted(self, "ops_")
        return self._run(X, [inverse_op(op) for op in reversed(self.ops_.ops)])


class CertificateAnalyzer(BaseEstimator):
    """Spark, NSP and RIP certificates in one pass; result in ``report_``."""

    def __init__(
        self,
        k_max=None,
        alpha_floor=DEFAULT_ALPHA_FLOOR,
        nsp_samples=DEFAULT_NSP_SAMPLES,
        random_state=0,
        n_jobs=1,
        force_large=False,
    ):
        self.k_max = k_max
        self.alpha_floor = alpha_floor
        self.nsp_samples = nsp_samples
        self.random_state = random_state
        self.n_jobs = n_jobs
        self.force_large = force_large

    def fit(self, X, y=None):
        A = check_float_matrix(X) if _is_float(X) else check_rational_matrix(X)
        self.report_ = analyze(
            A,
            self.k_max,
            self.alpha_floor,
            self.nsp_samples,
            int(self.random_state or 0),
            self.n_jobs or 1,
            self.force_large,
        )
        self.n_features_in_ = self.report_.shape[1]
        return self


def _shape(X):
    if isinstance(X, RationalMatrix):
        return X.shape
    if isinstance(X, np.ndarray):
        return X.shape
    return check_rational_matrix(X).shape


def _is_float(X) -> bool:
    return isinstance(X, np.ndarray) and X.dtype.kind == "f"
