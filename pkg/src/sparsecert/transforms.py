"""Elementary row/column operations, their matrices and random generators.

Index conventions for the two addition kinds (zero-based):

* ``ROW_ADD(i, j, c)`` adds ``c`` times row ``i`` to row ``j``.
* ``COL_ADD(i, j, c)`` adds ``c`` times column ``j`` to column ``i``.

Both are realized by the same elementary matrix ``E`` (identity with
``E[j, i] = c``), applied as ``E @ A`` for rows and ``A @ E`` for columns.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .numeric import RationalMatrix, as_rational, format_rational, rank_exact


class OpKind(str, Enum):
    ROW_SWITCH = "ROW_SWITCH"
    ROW_MULT = "ROW_MULT"
    ROW_ADD = "ROW_ADD"
    COL_SWITCH = "COL_SWITCH"
    COL_MULT = "COL_MULT"
    COL_ADD = "COL_ADD"

    @property
    def is_row(self) -> bool:
        return self.name.startswith("ROW")

    @property
    def is_switch(self) -> bool:
        return self.name.endswith("SWITCH")

    @property
    def is_mult(self) -> bool:
        return self.name.endswith("MULT")

    @property
    def is_add(self) -> bool:
        return self.name.endswith("ADD")

    @property
    def mnemonic(self) -> str:
        return self.name[0] + self.name.split("_")[1][0]


ALL_KINDS = tuple(OpKind)
# every kind except column addition preserves spark and NSP/RIP orders
INVARIANT_KINDS = tuple(k for k in OpKind if k is not OpKind.COL_ADD)
ROW_KINDS = tuple(k for k in OpKind if k.is_row)

DEFAULT_COEFFICIENT_POOL = tuple(
    Fraction(x) for x in ("1", "-1", "2", "-2", "3", "-3", "1/2", "-1/2", "1/3", "-1/3")
)


@dataclass(frozen=True)
class ElemOp:
    kind: OpKind
    i: int
    j: int | None = None
    c: Fraction | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", OpKind(self.kind))
        if self.c is not None:
            object.__setattr__(self, "c", as_rational(self.c))
        if self.i < 0 or (self.j is not None and self.j < 0):
            raise ValueError(f"negative index in {self}")
        if self.kind.is_switch or self.kind.is_add:
            if self.j is None:
                raise ValueError(f"{self.kind.value} needs two indices")
            if self.i == self.j:
                raise ValueError(f"{self.kind.value} needs i != j, got {self.i}")
        elif self.j is not None:
            raise ValueError(f"{self.kind.value} takes a single index")
        if self.kind.is_switch:
            if self.c is not None:
                raise ValueError("switch operations take no coefficient")
        elif self.c is None:
            raise ValueError(f"{self.kind.value} needs a coefficient")
        if self.kind.is_mult and self.c == 0:
            raise ValueError("multiplication by 0 is not an elementary operation")

    @classmethod
    def row_switch(cls, i, j):
        return cls(OpKind.ROW_SWITCH, i, j)

    @classmethod
    def row_mult(cls, i, c):
        return cls(OpKind.ROW_MULT, i, None, c)

    @classmethod
    def row_add(cls, i, j, c):
        return cls(OpKind.ROW_ADD, i, j, c)

    @classmethod
    def col_switch(cls, i, j):
        return cls(OpKind.COL_SWITCH, i, j)

    @classmethod
    def col_mult(cls, i, c):
        return cls(OpKind.COL_MULT, i, None, c)

    @classmethod
    def col_add(cls, i, j, c):
        return cls(OpKind.COL_ADD, i, j, c)

    def indices(self) -> tuple:
        return (self.i,) if self.j is None else (self.i, self.j)

    def check_shape(self, shape: tuple[int, int]) -> None:
        bound = shape[0] if self.kind.is_row else shape[1]
        what = "row" if self.kind.is_row else "column"
        for idx in self.indices():
            if idx >= bound:
                raise IndexError(f"{what} index {idx} out of range for shape {shape} in {self}")

    def __str__(self) -> str:
        parts = [self.kind.mnemonic, *map(str, self.indices())]
        if self.c is not None:
            parts.append(format_rational(self.c))
        return " ".join(parts)

    def to_dict(self) -> dict:
        return {"op": str(self)}


@dataclass(frozen=True)
class OpSequence:
    """Ordered elementary operations for matrices of a fixed shape."""

    ops: tuple
    shape: tuple

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple(self.ops))
        object.__setattr__(self, "shape", tuple(self.shape))
        for op in self.ops:
            op.check_shape(self.shape)

    def __iter__(self):
        return iter(self.ops)

    def __len__(self):
        return len(self.ops)

    def __getitem__(self, idx):
        if isinstance(idx, slice):
            return OpSequence(self.ops[idx], self.shape)
        return self.ops[idx]

    @property
    def has_col_add(self) -> bool:
        return any(op.kind is OpKind.COL_ADD for op in self.ops)

    @property
    def row_only(self) -> bool:
        return all(op.kind.is_row for op in self.ops)

    def to_text(self) -> str:
        return "".join(f"{op}\n" for op in self.ops)


def apply(A: RationalMatrix, op: ElemOp) -> RationalMatrix:
    """Apply one elementary operation exactly."""
    op.check_shape(A.shape)
    if op.kind.is_row:
        return RationalMatrix._trusted(tuple(_apply_lines(list(A.rows), op)))
    return RationalMatrix._trusted(tuple(zip(*_apply_lines(A.columns(), op))))


def _apply_lines(lines: list, op: ElemOp) -> list:
    i, j, c = op.i, op.j, op.c
    if op.kind.is_switch:
        lines[i], lines[j] = lines[j], lines[i]
    elif op.kind.is_mult:
        lines[i] = tuple(c * x for x in lines[i])
    elif op.kind is OpKind.ROW_ADD:
        lines[j] = tuple(y + c * x for x, y in zip(lines[i], lines[j]))
    else:  # COL_ADD: column i += c * column j
        lines[i] = tuple(x + c * y for x, y in zip(lines[i], lines[j]))
    return lines


def apply_float(A, op: ElemOp) -> np.ndarray:
    """Floating point counterpart of :func:`apply`."""
    B = np.array(A, dtype=np.float64, copy=True)
    op.check_shape(B.shape)
    M = B if op.kind.is_row else B.T  # view: edits land in B
    i, j = op.i, op.j
    c = float(op.c) if op.c is not None else None
    if op.kind.is_switch:
        M[[i, j]] = M[[j, i]]
    elif op.kind.is_mult:
        M[i] *= c
    elif op.kind is OpKind.ROW_ADD:
        M[j] += c * M[i]
    else:
        M[i] += c * M[j]
    return B


def apply_all(A: RationalMatrix, ops: Iterable[ElemOp]) -> RationalMatrix:
    for op in ops:
        A = apply(A, op)
    return A


def elementary_matrix(op: ElemOp, size: int) -> RationalMatrix:
    """E with ``apply(A, op) == E @ A`` (row kinds) or ``A @ E`` (column kinds)."""
    for idx in op.indices():
        if idx >= size:
            raise IndexError(f"index {idx} out of range for size {size}")
    E = [list(row) for row in RationalMatrix.identity(size).rows]
    if op.kind.is_switch:
        E[op.i], E[op.j] = E[op.j], E[op.i]
    elif op.kind.is_mult:
        E[op.i][op.i] = op.c
    else:
        E[op.j][op.i] = op.c
    return RationalMatrix._trusted(tuple(tuple(row) for row in E))


def inverse_op(op: ElemOp) -> ElemOp:
    if op.kind.is_switch:
        return op
    if op.kind.is_mult:
        return ElemOp(op.kind, op.i, None, 1 / op.c)
    return ElemOp(op.kind, op.i, op.j, -op.c)


def sequence_matrices(ops: OpSequence) -> tuple[RationalMatrix, RationalMatrix]:
    """(P, Q) with ``apply_all(A, ops) == P @ A @ Q``."""
    m, n = ops.shape
    P, Q = RationalMatrix.identity(m), RationalMatrix.identity(n)
    for op in ops:
        if op.kind.is_row:
            P = elementary_matrix(op, m) @ P
        else:
            Q = Q @ elementary_matrix(op, n)
    return P, Q


# ---------------------------------------------------------------------------
# random generation


def _rng(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def _feasible(kind: OpKind, shape) -> bool:
    size = shape[0] if kind.is_row else shape[1]
    return size >= (1 if kind.is_mult else 2)


def random_op(
    shape: tuple[int, int],
    allowed_kinds: Sequence[OpKind] = INVARIANT_KINDS,
    seed=None,
    coefficient_pool: Sequence = DEFAULT_COEFFICIENT_POOL,
) -> ElemOp:
    """Uniform over the feasible kinds, then uniform over indices and pool.

    ``seed`` may be an int or a :class:`random.Random` to draw from.
    """
    rng = _rng(seed)
    pool = [as_rational(c) for c in coefficient_pool]
    if not pool or any(c == 0 for c in pool):
        raise ValueError("coefficient pool must be nonempty and free of zeros")
    kinds = [OpKind(k) for k in allowed_kinds if _feasible(OpKind(k), shape)]
    if not kinds:
        raise ValueError(f"no operation kind in {list(allowed_kinds)} fits shape {shape}")
    kind = rng.choice(kinds)
    size = shape[0] if kind.is_row else shape[1]
    if kind.is_mult:
        return ElemOp(kind, rng.randrange(size), None, rng.choice(pool))
    i, j = rng.sample(range(size), 2)
    if kind.is_switch:
        return ElemOp(kind, i, j)
    return ElemOp(kind, i, j, rng.choice(pool))


def random_op_sequence(
    shape, count: int, allowed_kinds=INVARIANT_KINDS, seed=None, coefficient_pool=DEFAULT_COEFFICIENT_POOL
) -> OpSequence:
    rng = _rng(seed)
    return OpSequence(
        tuple(random_op(shape, allowed_kinds, rng, coefficient_pool) for _ in range(count)), shape
    )


def random_invertible(size: int, seed=None, op_count: int = 8) -> RationalMatrix:
    """Product of ``op_count`` random elementary matrices of all six kinds."""
    if op_count < 1:
        raise ValueError("op_count must be >= 1")
    rng = _rng(seed)
    B = RationalMatrix.identity(size)
    for _ in range(op_count):
        op = random_op((size, size), ALL_KINDS, rng)
        E = elementary_matrix(op, size)
        B = E @ B if op.kind.is_row else B @ E
    assert rank_exact(B) == size
    return B


def random_permuted_diagonal(
    size: int, seed=None, coefficient_pool: Sequence = DEFAULT_COEFFICIENT_POOL
) -> RationalMatrix:
    """P @ D for a random permutation P and nonzero diagonal D."""
    rng = _rng(seed)
    perm = list(range(size))
    rng.shuffle(perm)
    diag = [as_rational(rng.choice(coefficient_pool)) for _ in range(size)]
    # (P D)[r, perm[r]] = d[perm[r]]
    rows = []
    for r in range(size):
        row = [Fraction(0)] * size
        row[perm[r]] = diag[perm[r]]
        rows.append(row)
    return RationalMatrix(rows)


def random_rational_matrix(m: int, n: int, entries: Sequence = range(-3, 4), seed=None) -> RationalMatrix:
    rng = _rng(seed)
    pool = [as_rational(x) for x in entries]
    return RationalMatrix([[rng.choice(pool) for _ in range(n)] for _ in range(m)])
