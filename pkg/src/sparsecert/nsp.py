"""Null space property: highest order, failure certificates and the constant C.

For a null vector h and an index set L with |L| <= k the NSP ratio is

    sqrt(k) * ||h_L||_2 / ||h_{L^c}||_1

and the smallest admissible constant of order k is its supremum over the
null space.  For a fixed h the supremum over L is attained at the k entries
of largest magnitude.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from .numeric import RationalMatrix, null_space_basis, nullity, orthonormalize
from .spark import SparkResult, spark

EXACT = "EXACT"
LOWER_BOUND = "LOWER_BOUND"

# closed-form constants are re-derived by brute force up to this many columns
BRUTE_FORCE_MAX_COLUMNS = 12


@dataclass(frozen=True)
class ConstantEstimate:
    value: float
    kind: str


@dataclass(frozen=True)
class NspReport:
    highest_order: int
    failure_certificate: tuple | None
    constant_estimates: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "highest_order": self.highest_order,
            "highest_order_convention": "spark - 1 (n when columns are independent)",
            "failure_certificate": [str(x) for x in self.failure_certificate]
            if self.failure_certificate is not None
            else None,
            "constant_estimates": {
                str(k): {"value": est.value, "kind": est.kind}
                for k, est in sorted(self.constant_estimates.items())
            },
        }


def _spark_of(A, spark_result):
    return spark_result if spark_result is not None else spark(A)


def highest_nsp_order(A: RationalMatrix, spark_result: SparkResult | None = None) -> int:
    """Largest k for which A has the NSP of order k (0 if none)."""
    s = _spark_of(A, spark_result)
    return A.shape[1] if s.is_full_column_rank else s.value - 1


def nsp_failure_certificate(
    A: RationalMatrix, k: int, spark_result: SparkResult | None = None
) -> tuple | None:
    """A nonzero null vector with at most k nonzeros, or None if none exists."""
    if k < 1:
        raise ValueError("order k must be >= 1")
    s = _spark_of(A, spark_result)
    if s.is_full_column_rank or s.value > k:
        return None
    h = [Fraction(0)] * A.shape[1]
    for j, c in zip(s.witness, s.coefficients):
        h[j] = c
    return tuple(h)


def top_k_support(h, k: int) -> list[int]:
    """Indices of the k largest |h_i|; ties go to the lower index."""
    order = sorted(range(len(h)), key=lambda i: (-abs(h[i]), i))
    return sorted(order[:k])


def _ratio_squared(h, support, k: int) -> Fraction:
    inside = set(support)
    num = sum((h[i] * h[i] for i in inside), Fraction(0))
    den = sum((abs(h[i]) for i in range(len(h)) if i not in inside), Fraction(0))
    if den == 0:
        if num == 0:
            return Fraction(0)
        raise ZeroDivisionError("null vector is supported inside the index set")
    return k * num / (den * den)


def _brute_force_ratio_squared(h, k: int) -> Fraction:
    best = Fraction(0)
    n = len(h)
    for size in range(1, min(k, n) + 1):
        for L in combinations(range(n), size):
            best = max(best, _ratio_squared(h, L, k))
    return best


def nsp_constant_exact_nullity1(
    A: RationalMatrix, k: int, spark_result: SparkResult | None = None
) -> float:
    """Smallest NSP constant of order k when N(A) is one-dimensional.

    The top-k closed form is cross-checked against every index set of size
    <= k when A has at most ``BRUTE_FORCE_MAX_COLUMNS`` columns; the two are
    compared exactly, as rationals.
    """
    basis = null_space_basis(A)
    if len(basis) != 1:
        raise ValueError(f"nullity is {len(basis)}, the exact constant needs nullity 1")
    s = _spark_of(A, spark_result)
    if k < 1:
        raise ValueError("order k must be >= 1")
    if not s.is_full_column_rank and k >= s.value:
        raise ValueError(f"order {k} >= spark {s.value}: no finite constant exists")
    (h,) = basis
    closed = _ratio_squared(h, top_k_support(h, k), k)
    if A.shape[1] <= BRUTE_FORCE_MAX_COLUMNS:
        brute = _brute_force_ratio_squared(h, k)
        if brute != closed:
            raise AssertionError(f"closed form {closed} disagrees with brute force {brute}")
    return math.sqrt(closed)


def nsp_ratio(h, k: int) -> float:
    """NSP ratio of a float vector at its top-k index set."""
    h = np.asarray(h, dtype=np.float64)
    mags = np.abs(h)
    order = np.argsort(-mags, kind="stable")
    num = math.sqrt(k) * float(np.linalg.norm(h[order[:k]]))
    den = float(mags[order[k:]].sum())
    if den == 0.0:
        return 0.0 if num == 0.0 else math.inf
    return num / den


def _sample_direction(basis: np.ndarray, seed: int, index: int) -> np.ndarray:
    # one generator per sample so results do not depend on how samples are split
    rng = np.random.default_rng([seed, index])
    h = basis @ rng.standard_normal(basis.shape[1])
    return h / np.linalg.norm(h)


def nsp_constant_lower_bound(
    A: RationalMatrix,
    k: int,
    samples: int,
    seed: int = 0,
    spark_result: SparkResult | None = None,
) -> float:
    """Running maximum of the NSP ratio over null vectors.

    The candidates are the exact null-space basis vectors and the sparsest
    null vector (from the spark witness), followed by ``samples`` random
    unit vectors.  Extremal directions are often sparse and have measure
    zero, so random draws alone rarely come close to them.  With
    ``samples=0`` nothing is evaluated and the result is 0.

    This is a lower bound on the smallest constant, never the constant
    itself unless the null space is one-dimensional.
    """
    if k < 1:
        raise ValueError("order k must be >= 1")
    if samples < 0:
        raise ValueError("samples must be nonnegative")
    basis = null_space_basis(A)
    if not basis:
        raise ValueError("trivial null space: the NSP holds with any constant")
    s = _spark_of(A, spark_result)
    if not s.is_full_column_rank and k >= s.value:
        raise ValueError(f"order {k} >= spark {s.value}: no finite constant exists")
    if samples == 0:
        return 0.0
    structured = list(basis)
    if not s.is_full_column_rank:
        structured.append(nsp_failure_certificate(A, s.value, s))
    best = max(nsp_ratio([float(x) for x in v], k) for v in structured)
    Q = orthonormalize(np.array([[float(x) for x in v] for v in basis]).T)
    for i in range(samples):
        best = max(best, nsp_ratio(_sample_direction(Q, seed, i), k))
    return best


def nsp_report(
    A: RationalMatrix,
    k_max: int | None = None,
    samples: int = 1000,
    seed: int = 0,
    spark_result: SparkResult | None = None,
) -> NspReport:
    s = _spark_of(A, spark_result)
    order = highest_nsp_order(A, s)
    certificate = None if s.is_full_column_rank else nsp_failure_certificate(A, s.value, s)
    d = nullity(A)
    top = order if k_max is None else min(order, k_max)
    estimates = {}
    for k in range(1, top + 1):
        if d == 0:
            # vacuous: every C > 0 works, the infimum is 0
            estimates[k] = ConstantEstimate(0.0, EXACT)
        elif d == 1:
            estimates[k] = ConstantEstimate(nsp_constant_exact_nullity1(A, k, s), EXACT)
        else:
            estimates[k] = ConstantEstimate(
                nsp_constant_lower_bound(A, k, samples, seed, s), LOWER_BOUND
            )
    return NspReport(order, certificate, estimates)
