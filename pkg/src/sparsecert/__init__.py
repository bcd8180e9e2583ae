"""Sparse-recovery certificates (spark, NSP, RIP) of sensing matrices and their
behaviour under elementary row and column transformations."""

__version__ = "0.1.0"

from .numeric import RationalMatrix, columns_dependent, null_space_basis, rank_exact  # noqa: E402
from .spark import FULL_COLUMN_RANK, SparkResult, exact_recovery_sparsity, spark  # noqa: E402
from .transforms import ElemOp, OpKind, OpSequence, apply, apply_all  # noqa: E402
from .estimators import (  # noqa: E402
    CertificateAnalyzer,
    ElementaryTransformer,
    NSPEstimator,
    RIPEstimator,
    SparkEstimator,
)

__all__ = [
    "RationalMatrix",
    "rank_exact",
    "null_space_basis",
    "columns_dependent",
    "spark",
    "SparkResult",
    "FULL_COLUMN_RANK",
    "exact_recovery_sparsity",
    "ElemOp",
    "OpKind",
    "OpSequence",
    "apply",
    "apply_all",
    "SparkEstimator",
    "NSPEstimator",
    "RIPEstimator",
    "ElementaryTransformer",
    "CertificateAnalyzer",
]
