"""Spark of a matrix with a minimal dependent-column witness."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from ._guard import check_enumeration
from .numeric import RationalMatrix, _integer_rank, _integer_rows, null_space_basis

FULL_COLUMN_RANK = "FULL_COLUMN_RANK"


@dataclass(frozen=True)
class SparkResult:
    """Spark value plus the lexicographically smallest minimal dependent set.

    ``value`` is an int, or :data:`FULL_COLUMN_RANK` when the columns are
    independent.  ``coefficients`` satisfy
    ``sum(c * A[:, w] for c, w in zip(coefficients, witness)) == 0`` and are
    all nonzero.
    """

    value: int | str
    n_cols: int
    witness: tuple | None = None
    coefficients: tuple | None = None

    @property
    def is_full_column_rank(self) -> bool:
        return self.value == FULL_COLUMN_RANK

    def as_int(self) -> int:
        """Spark as a number; ``n + 1`` stands in for full column rank."""
        return self.n_cols + 1 if self.is_full_column_rank else self.value

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "witness": list(self.witness) if self.witness is not None else None,
            "coefficients": [str(c) for c in self.coefficients]
            if self.coefficients is not None
            else None,
        }


def _primitive(vec) -> tuple:
    # integer, gcd 1, first nonzero entry positive
    lcm = 1
    for x in vec:
        lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
    ints = [int(x * lcm) for x in vec]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    sign = -1 if next(x for x in ints if x) < 0 else 1
    return tuple(Fraction(sign * x // g) for x in ints)


def spark(A: RationalMatrix, force_large: bool = False) -> SparkResult:
    """Smallest number of linearly dependent columns of ``A``.

    Subsets are scanned by ascending size and lexicographically within a
    size, so the first dependent subset found is minimal and deterministic.
    """
    m, n = A.shape
    check_enumeration(n, force_large)
    cols = _integer_rows(A.columns())
    rank = _integer_rank([list(c) for c in cols])
    for size in range(1, n + 1):
        if size > rank:
            # every subset of this size is dependent and all smaller ones were not
            witness = tuple(range(size))
            break
        found = None
        for S in combinations(range(n), size):
            if _integer_rank([list(cols[j]) for j in S]) < size:
                found = S
                break
        if found is not None:
            witness = found
            break
    else:
        return SparkResult(FULL_COLUMN_RANK, n)

    (h,) = null_space_basis(A.submatrix(witness))
    coefficients = _primitive(h)
    assert all(coefficients), "minimal dependent set with a zero coefficient"
    return SparkResult(len(witness), n, witness, coefficients)


def exact_recovery_sparsity(result: SparkResult) -> int:
    """Largest k with spark > 2k: every k-sparse signal is uniquely determined."""
    if result.is_full_column_rank:
        return result.n_cols // 2
    return (result.value - 1) // 2

