"""Tightest asymmetric RIP constants by exhaustive column-subset enumeration."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations, islice

import numpy as np

from ._guard import check_enumeration
from .numeric import check_finite, gram_extremes

DEFAULT_ALPHA_FLOOR = 1e-9
_CHUNK = 4096


@dataclass(frozen=True)
class RipConstants:
    """Tightest (alpha, beta) over all k-sparse x, and the symmetric delta.

    ``alpha`` is the smallest squared singular value over all k-column
    submatrices and ``beta`` the largest; ``argmin_set``/``argmax_set`` are
    the lexicographically first subsets attaining them.
    """

    order: int
    alpha: float
    beta: float
    delta: float
    argmin_set: tuple
    argmax_set: tuple

    def to_dict(self) -> dict:
        return {
            "k": self.order,
            "alpha": self.alpha,
            "beta": self.beta,
            "delta": self.delta,
            "argmin_set": list(self.argmin_set),
            "argmax_set": list(self.argmax_set),
        }


def symmetric_delta(alpha: float, beta: float) -> float:
    """delta = (beta - alpha) / (beta + alpha)."""
    if beta <= 0.0:
        raise ValueError("beta must be positive; an all-zero matrix has no RIP constant")
    return (beta - alpha) / (beta + alpha)


def _chunk_extremes(A: np.ndarray, combos: np.ndarray):
    stack = np.transpose(A[:, combos], (1, 0, 2))
    lo, hi = gram_extremes(stack)
    i, j = int(np.argmin(lo)), int(np.argmax(hi))
    return lo[i], combos[i], hi[j], combos[j]


def _chunks(n: int, k: int):
    it = combinations(range(n), k)
    while True:
        block = list(islice(it, _CHUNK))
        if not block:
            return
        yield np.array(block, dtype=np.intp)


def rip_constants(A, k: int, force_large: bool = False, n_jobs: int = 1) -> RipConstants:
    """Exact tightest asymmetric RIP constants of order ``k``.

    Every one of the C(n, k) column subsets is visited.  Work can be spread
    over ``n_jobs`` threads; the result does not depend on it.
    """
    A = check_finite(A)
    n = A.shape[1]
    if not 1 <= k <= n:
        raise ValueError(f"order k={k} must satisfy 1 <= k <= n={n}")
    check_enumeration(n, force_large)
    if n_jobs > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            parts = list(pool.map(lambda c: _chunk_extremes(A, c), _chunks(n, k)))
    else:
        parts = [_chunk_extremes(A, c) for c in _chunks(n, k)]

    # chunks are in lexicographic order; strict comparisons keep the first hit
    alpha, argmin, beta, argmax = parts[0]
    for lo, lo_set, hi, hi_set in parts[1:]:
        if lo < alpha:
            alpha, argmin = lo, lo_set
        if hi > beta:
            beta, argmax = hi, hi_set
    alpha, beta = float(alpha), float(beta)
    return RipConstants(
        order=k,
        alpha=alpha,
        beta=beta,
        delta=symmetric_delta(alpha, beta),
        argmin_set=tuple(int(i) for i in argmin),
        argmax_set=tuple(int(i) for i in argmax),
    )


def rip_table(A, k_max: int, force_large: bool = False, n_jobs: int = 1) -> list[RipConstants]:
    return [rip_constants(A, k, force_large, n_jobs) for k in range(1, k_max + 1)]


def highest_rip_order(
    A,
    alpha_floor: float = DEFAULT_ALPHA_FLOOR,
    force_large: bool = False,
    n_jobs: int = 1,
) -> int:
    """Largest k whose tightest lower constant exceeds ``alpha_floor``.

    Orders are scanned upward and the scan stops at the first failure, since
    the RIP of order k implies the RIP of every smaller order.
    """
    if not alpha_floor > 0:
        raise ValueError("alpha_floor must be positive")
    A = check_finite(A)
    if not A.any():
        return 0
    order = 0
    for k in range(1, A.shape[1] + 1):
        if rip_constants(A, k, force_large, n_jobs).alpha <= alpha_floor:
            break
        order = k
    return order
