"""Input validation helpers shared by the estimators."""

from __future__ import annotations

import numpy as np
from sklearn.utils import check_array

from .numeric import RationalMatrix, to_float


def check_rational_matrix(X) -> RationalMatrix:
    """Coerce ``X`` to an exact :class:`RationalMatrix`.

    Nested lists of ints, Fractions or ``"p/q"`` strings and integer arrays
    are converted exactly; float arrays are taken at their binary values.
    """
    if isinstance(X, RationalMatrix):
        return X
    if isinstance(X, np.ndarray):
        if X.ndim != 2:
            raise ValueError(f"expected a 2-D matrix, got {X.ndim} dimension(s)")
        if X.dtype.kind == "f":
            X = check_float_matrix(X)
        return RationalMatrix(X.tolist())
    return RationalMatrix(X)


def check_float_matrix(X) -> np.ndarray:
    """Finite, non-empty, 2-D float64 array (rational input is rounded)."""
    if isinstance(X, RationalMatrix):
        return to_float(X)
    if isinstance(X, (list, tuple)) and X and isinstance(X[0], (list, tuple)):
        try:
            X = np.array(X, dtype=np.float64)
        except (TypeError, ValueError):
            return to_float(RationalMatrix(X))
    return check_array(X, dtype=np.float64, ensure_2d=True, ensure_min_samples=1, ensure_min_features=1)
