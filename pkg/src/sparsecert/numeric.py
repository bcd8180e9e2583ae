"""Exact rational linear algebra and small spectral primitives.

Everything that decides linear (in)dependence runs over :class:`fractions.Fraction`
so that rank, null space and spark are exact.  Floating point is used only
for singular values, which are computed from the eigenvalues of the Gram
matrix of a (small) column submatrix.
"""

from __future__ import annotations

import math
import numbers
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

# Target accuracy of the Gram route.  Near zero the absolute bound holds for
# sigma**2 (the quantity RIP constants use), not for sigma itself.
SVD_RTOL = 1e-10
SVD_ATOL = 1e-12

IndexSet = tuple  # sorted distinct zero-based column indices
RationalVector = tuple  # tuple of Fraction


def as_rational(value) -> Fraction:
    """Convert ``value`` to a canonical :class:`Fraction`.

    Accepts integers (Python or numpy), fractions, rational literals such as
    ``"-3/4"`` and finite floats (taken at their exact binary value).
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not matrix entries")
    if isinstance(value, (numbers.Integral, np.integer)):
        return Fraction(int(value))
    if isinstance(value, str):
        text = value.strip()
        try:
            return Fraction(text)
        except ZeroDivisionError:
            raise ValueError(f"zero denominator in rational literal {value!r}") from None
        except ValueError:
            raise ValueError(f"invalid rational literal {value!r}") from None
    if isinstance(value, (numbers.Real, np.floating)):
        if not math.isfinite(value):
            raise ValueError(f"non-finite entry {value!r}")
        return Fraction(float(value))
    if isinstance(value, numbers.Rational):
        return Fraction(value.numerator, value.denominator)
    raise TypeError(f"cannot interpret {type(value).__name__} as a rational number")


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class RationalMatrix:
    """Immutable m x n matrix over the rationals (m, n >= 1)."""

    __slots__ = ("_rows", "_shape")

    def __init__(self, rows: Iterable[Iterable]):
        data = tuple(tuple(as_rational(x) for x in row) for row in rows)
        if not data or not data[0]:
            raise ValueError("matrix must have at least one row and one column")
        n = len(data[0])
        for i, row in enumerate(data):
            if len(row) != n:
                raise ValueError(f"row {i} has {len(row)} entries, expected {n}")
        self._rows = data
        self._shape = (len(data), n)

    @classmethod
    def _trusted(cls, rows: tuple) -> "RationalMatrix":
        obj = cls.__new__(cls)
        obj._rows = rows
        obj._shape = (len(rows), len(rows[0]))
        return obj

    @classmethod
    def identity(cls, size: int) -> "RationalMatrix":
        one, zero = Fraction(1), Fraction(0)
        return cls._trusted(
            tuple(tuple(one if i == j else zero for j in range(size)) for i in range(size))
        )

    @classmethod
    def zeros(cls, m: int, n: int) -> "RationalMatrix":
        return cls._trusted(tuple((Fraction(0),) * n for _ in range(m)))

    @property
    def shape(self) -> tuple[int, int]:
        return self._shape

    @property
    def rows(self) -> tuple:
        return self._rows

    def __getitem__(self, idx):
        i, j = idx
        return self._rows[i][j]

    def column(self, j: int) -> tuple:
        return tuple(row[j] for row in self._rows)

    def columns(self) -> list[tuple]:
        return [tuple(col) for col in zip(*self._rows)]

    def submatrix(self, cols: Sequence[int]) -> "RationalMatrix":
        return RationalMatrix._trusted(tuple(tuple(row[j] for j in cols) for row in self._rows))

    @property
    def T(self) -> "RationalMatrix":
        return RationalMatrix._trusted(tuple(tuple(col) for col in zip(*self._rows)))

    def __matmul__(self, other):
        if isinstance(other, RationalMatrix):
            if self._shape[1] != other._shape[0]:
                raise ValueError(f"shape mismatch {self._shape} @ {other._shape}")
            cols = other.columns()
            return RationalMatrix._trusted(
                tuple(tuple(_dot(row, col) for col in cols) for row in self._rows)
            )
        vec = tuple(as_rational(x) for x in other)
        if len(vec) != self._shape[1]:
            raise ValueError(f"vector of length {len(vec)} does not match {self._shape}")
        return tuple(_dot(row, vec) for row in self._rows)

    def __mul__(self, scalar) -> "RationalMatrix":
        c = as_rational(scalar)
        return RationalMatrix._trusted(tuple(tuple(c * x for x in row) for row in self._rows))

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self._rows == other._rows

    def __hash__(self) -> int:
        return hash(self._rows)

    def __repr__(self) -> str:
        body = ", ".join("[" + ", ".join(format_rational(x) for x in row) + "]" for row in self._rows)
        return f"RationalMatrix([{body}])"

    def tolist(self) -> list[list[Fraction]]:
        return [list(row) for row in self._rows]

    def to_strings(self) -> list[list[str]]:
        return [[format_rational(x) for x in row] for row in self._rows]

    def zero_columns(self) -> list[int]:
        return [j for j, col in enumerate(zip(*self._rows)) if not any(col)]


def _dot(u, v) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


# ---------------------------------------------------------------------------
# exact rank / null space


def _integer_rows(vectors: Iterable[Sequence[Fraction]]) -> list[list[int]]:
    # Scaling a vector by a nonzero constant does not change the rank.
    out = []
    for vec in vectors:
        lcm = 1
        for x in vec:
            lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
        out.append([int(x * lcm) for x in vec])
    return out


def _integer_rank(rows: list[list[int]]) -> int:
    """Fraction-free elimination over Z; ``rows`` is consumed."""
    rank = 0
    if not rows:
        return 0
    width = len(rows[0])
    for col in range(width):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        p_row = rows[rank]
        p = p_row[col]
        for r in range(rank + 1, len(rows)):
            a = rows[r][col]
            if a:
                new = [p * x - a * y for x, y in zip(rows[r], p_row)]
                g = 0
                for x in new:
                    g = math.gcd(g, x)
                if g > 1:
                    new = [x // g for x in new]
                rows[r] = new
        rank += 1
        if rank == len(rows):
            break
    return rank


def rank_exact(A: RationalMatrix) -> int:
    """Rank of ``A`` over the rationals."""
    m, n = A.shape
    # eliminate along the shorter side
    vectors = A.rows if m <= n else A.columns()
    return _integer_rank(_integer_rows(vectors))


def rref(A: RationalMatrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form of ``A`` and its pivot columns."""
    R = A.tolist()
    m, n = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        pivot = next((i for i in range(r, m) if R[i][c] != 0), None)
        if pivot is None:
            continue
        R[r], R[pivot] = R[pivot], R[r]
        inv = 1 / R[r][c]
        R[r] = [x * inv for x in R[r]]
        for i in range(m):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                R[i] = [x - f * y for x, y in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return R, pivots


def null_space_basis(A: RationalMatrix) -> list[tuple]:
    """Basis of N(A), one vector per free column of the RREF.

    Free columns are taken in ascending order; each basis vector has a 1 in
    its own free column and 0 in the other free columns.
    """
    R, pivots = rref(A)
    n = A.shape[1]
    pivot_set = set(pivots)
    basis = []
    for f in (c for c in range(n) if c not in pivot_set):
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, p in enumerate(pivots):
            v[p] = -R[row][f]
        basis.append(tuple(v))
    return basis


def nullity(A: RationalMatrix) -> int:
    return A.shape[1] - rank_exact(A)


def check_index_set(S: Iterable[int], n: int) -> tuple:
    S = tuple(int(i) for i in S)
    if any(b <= a for a, b in zip(S, S[1:])):
        raise ValueError(f"index set {S} must be strictly increasing")
    if S and (S[0] < 0 or S[-1] >= n):
        raise ValueError(f"index set {S} out of range for {n} columns")
    return S


def columns_dependent(A: RationalMatrix, S: Iterable[int]) -> bool:
    """True iff the columns of ``A`` indexed by ``S`` are linearly dependent."""
    S = check_index_set(S, A.shape[1])
    if not S:
        raise ValueError("index set must be nonempty")
    if len(S) > A.shape[0]:
        return True
    cols = [tuple(row[j] for row in A.rows) for j in S]
    return _integer_rank(_integer_rows(cols)) < len(S)


# ---------------------------------------------------------------------------
# floating point side


def to_float(A: RationalMatrix) -> np.ndarray:
    """Round every entry of ``A`` to the nearest double."""
    try:
        out = np.array([[float(x) for x in row] for row in A.rows], dtype=np.float64)
    except OverflowError:
        raise ValueError("matrix entry overflows a 64-bit float") from None
    if not np.all(np.isfinite(out)):
        raise ValueError("matrix entry overflows a 64-bit float")
    return out


def check_finite(A) -> np.ndarray:
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2 or 0 in A.shape:
        raise ValueError(f"expected a non-empty 2-D matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix contains NaN or infinite entries")
    return A


def gram_extremes(stack: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Smallest and largest eigenvalue of A_i^T A_i for a stack of matrices.

    ``stack`` has shape (batch, m, k).  Returned values are the squared
    extreme singular values, clipped at 0.
    """
    gram = np.einsum("bmi,bmj->bij", stack, stack)
    eig = np.linalg.eigvalsh(gram)
    # eigenvalues of a PSD matrix can come back slightly negative
    return np.maximum(eig[:, 0], 0.0), np.maximum(eig[:, -1], 0.0)


def extreme_singular_values(A) -> tuple[float, float]:
    """(sigma_min, sigma_max) of ``A`` via the spectrum of its Gram matrix."""
    A = check_finite(A)
    lo, hi = gram_extremes(A[np.newaxis])
    return math.sqrt(lo[0]), math.sqrt(hi[0])


def orthonormalize(V, tol: float = 1e-12) -> np.ndarray:
    """Modified Gram-Schmidt with one re-orthogonalization pass.

    Columns of ``V`` that are (numerically) in the span of the earlier ones
    are dropped, so the result has orthonormal columns spanning range(V).
    """
    V = check_finite(V)
    basis: list[np.ndarray] = []
    for x in V.T:
        v = x.astype(np.float64, copy=True)
        norm0 = np.linalg.norm(v)
        if norm0 == 0.0:
            continue
        for _ in range(2):
            for q in basis:
                v -= (q @ v) * q
        norm = np.linalg.norm(v)
        if norm <= tol * norm0:
            continue
        basis.append(v / norm)
    if not basis:
        return np.zeros((V.shape[0], 0))
    return np.column_stack(basis)


def complete_orthonormal_basis(v) -> np.ndarray:
    """Square orthonormal matrix whose first column is ``v / ||v||``.

    The remaining columns come from Gram-Schmidt on the standard basis.
    """
    v = np.asarray(v, dtype=np.float64).ravel()
    if np.linalg.norm(v) == 0.0:
        raise ValueError("cannot complete a basis from the zero vector")
    n = v.size
    Phi = orthonormalize(np.column_stack([v, np.eye(n)]), tol=1e-8)
    if Phi.shape[1] != n:
        raise ArithmeticError("Gram-Schmidt completion lost a direction")
    return Phi
