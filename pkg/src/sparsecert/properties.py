"""Differential checks of the invariance results for elementary transformations.

Each ``check_*`` function recomputes the relevant certificate before and
after a transformation and compares them.  A ``FAIL`` verdict means an
invariance that must hold was violated, i.e. a bug somewhere in the stack.
Column addition is the one kind with no invariance; trials using it are
classified ``EXPECTED_BREAK`` instead.
"""

from __future__ import annotations

import json
import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Mapping, Sequence

import numpy as np

from . import __version__
from .nsp import highest_nsp_order, nsp_constant_exact_nullity1, nsp_failure_certificate
from .numeric import (
    RationalMatrix,
    as_rational,
    check_finite,
    columns_dependent,
    complete_orthonormal_basis,
    null_space_basis,
    nullity,
    to_float,
)
from .rip import DEFAULT_ALPHA_FLOOR, highest_rip_order, rip_constants
from .spark import SparkResult, _primitive, spark
from .transforms import (
    DEFAULT_COEFFICIENT_POOL,
    INVARIANT_KINDS,
    ElemOp,
    OpKind,
    OpSequence,
    apply,
    apply_all,
    apply_float,
    random_invertible,
    random_op_sequence,
    random_permuted_diagonal,
    random_rational_matrix,
)

PASS = "PASS"
FAIL = "FAIL"
EXPECTED_BREAK = "EXPECTED_BREAK"

SCHEMA_VERSION = "1.0"
RIP_BOUND_TOL = 1e-9
ZERO_ALPHA_TOL = 1e-12
UNIVERSALITY_TOL = 1e-10


@dataclass
class InvarianceCheckResult:
    check_id: str
    verdict: str
    before: dict = field(default_factory=dict)
    after: dict = field(default_factory=dict)
    ops: OpSequence | None = None
    matrix_before: RationalMatrix | None = None
    matrix_after: RationalMatrix | None = None
    detail: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.verdict == EXPECTED_BREAK and not (self.ops is not None and self.ops.has_col_add):
            raise ValueError("EXPECTED_BREAK requires a column addition in the operations")

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def to_dict(self) -> dict:
        out = {
            "check_id": self.check_id,
            "verdict": self.verdict,
            "before": self.before,
            "after": self.after,
            "detail": self.detail,
        }
        if self.ops is not None:
            out["ops"] = [str(op) for op in self.ops]
        return out


@dataclass
class CounterexampleArtifact:
    """A transformation that breaks a certificate, with enough data to replay it."""

    description: str
    matrix: RationalMatrix
    construction: OpSequence | np.ndarray
    broken_quantity: dict
    replay: Callable[[], bool] = field(repr=False, default=lambda: False)

    def to_dict(self) -> dict:
        if isinstance(self.construction, OpSequence):
            construction = {"ops": [str(op) for op in self.construction]}
        else:
            construction = {"phi": self.construction.tolist()}
        return {
            "description": self.description,
            "matrix": self.matrix.to_strings(),
            "construction": construction,
            "broken_quantity": self.broken_quantity,
        }


@lru_cache(maxsize=8192)
def _spark(A: RationalMatrix) -> SparkResult:
    return spark(A)


def _spark_value(A: RationalMatrix):
    return _spark(A).value


def _reject_col_add(ops: OpSequence, what: str) -> None:
    if ops.has_col_add:
        raise ValueError(f"{what} does not apply to column addition; use check_column_addition_effect")


def _as_sequence(ops, shape) -> OpSequence:
    return ops if isinstance(ops, OpSequence) else OpSequence(tuple(ops), shape)


# ---------------------------------------------------------------------------
# invariance checks


def check_spark_invariance(A: RationalMatrix, ops) -> InvarianceCheckResult:
    ops = _as_sequence(ops, A.shape)
    _reject_col_add(ops, "spark invariance")
    B = apply_all(A, ops)
    before, after = _spark_value(A), _spark_value(B)
    return InvarianceCheckResult(
        "spark_invariance",
        PASS if before == after else FAIL,
        {"spark": before},
        {"spark": after},
        ops,
        A,
        B,
    )


def check_same_linear_dependence(A: RationalMatrix, row_ops, S: Sequence[int]) -> bool:
    """Row operations leave the dependence of every column group unchanged."""
    row_ops = _as_sequence(row_ops, A.shape)
    if not row_ops.row_only:
        raise ValueError("only row operations preserve the dependence of column groups")
    return columns_dependent(A, S) == columns_dependent(apply_all(A, row_ops), S)


def certificate_orders(A: RationalMatrix, alpha_floor: float = DEFAULT_ALPHA_FLOOR) -> dict:
    """Spark, highest NSP order (exact) and highest RIP order (spectral)."""
    s = _spark(A)
    return {
        "spark": s.value,
        "highest_nsp_order": highest_nsp_order(A, s),
        "highest_rip_order": highest_rip_order(to_float(A), alpha_floor),
    }


def check_order_invariance(
    A: RationalMatrix, ops, alpha_floor: float = DEFAULT_ALPHA_FLOOR
) -> InvarianceCheckResult:
    """Highest NSP order (exact) and highest RIP order (spectral) before and after."""
    ops = _as_sequence(ops, A.shape)
    _reject_col_add(ops, "order invariance")
    B = apply_all(A, ops)
    before, after = certificate_orders(A, alpha_floor), certificate_orders(B, alpha_floor)
    same = (
        before["highest_nsp_order"] == after["highest_nsp_order"]
        and before["highest_rip_order"] == after["highest_rip_order"]
    )
    detail = {
        # the spectral order should match the exact one; a mismatch points at
        # a borderline singular value, not at a broken invariance
        "spectral_matches_exact_before": before["highest_rip_order"] == before["highest_nsp_order"],
        "spectral_matches_exact_after": after["highest_rip_order"] == after["highest_nsp_order"],
    }
    return InvarianceCheckResult(
        "order_invariance", PASS if same else FAIL, before, after, ops, A, B, detail
    )


def check_rip_transform_bounds(A, op: ElemOp, k: int, tol: float = RIP_BOUND_TOL) -> InvarianceCheckResult:
    """Compare tightest RIP constants before/after one operation with the proof bounds.

    Switches must leave (alpha, beta) unchanged; multiplications must stay
    within [min(a, c^2 a), max(b, c^2 b)]; a row addition must keep alpha
    positive and beta below 2 (1 + c^2) b.  ``tol`` is relative to
    ``max(1, beta, beta')``.
    """
    if op.kind is OpKind.COL_ADD:
        raise ValueError("column addition has no RIP bound")
    A = check_finite(A)
    B = apply_float(A, op)
    r0, r1 = rip_constants(A, k), rip_constants(B, k)
    a, b, a1, b1 = r0.alpha, r0.beta, r1.alpha, r1.beta
    t = tol * max(1.0, b, b1)
    detail: dict = {"op": str(op), "k": k}
    if op.kind.is_switch:
        ok = abs(a1 - a) <= t and abs(b1 - b) <= t
    elif op.kind.is_mult:
        c2 = float(op.c) ** 2
        lo, hi = min(a, c2 * a), max(b, c2 * b)
        detail.update(alpha_bound=lo, beta_bound=hi)
        ok = a1 >= lo - t and b1 <= hi + t
    else:
        c2 = float(op.c) ** 2
        hi = 2 * (1 + c2) * b
        detail.update(beta_bound=hi)
        ok = b1 <= hi + t and (a <= ZERO_ALPHA_TOL or a1 > ZERO_ALPHA_TOL)
    return InvarianceCheckResult(
        "rip_transform_bounds",
        PASS if ok else FAIL,
        {"alpha": a, "beta": b},
        {"alpha": a1, "beta": b1},
        detail=detail,
    )


def check_nsp_constant_bound(A: RationalMatrix, c, i: int, k: int) -> InvarianceCheckResult:
    """Exact nullity-1 NSP constant after scaling column ``i`` by ``c``."""
    c = as_rational(c)
    op = ElemOp.col_mult(i, c)
    if nullity(A) != 1:
        raise ValueError("exact NSP constants need nullity 1")
    B = apply(A, op)
    C = nsp_constant_exact_nullity1(A, k, _spark(A))
    C1 = nsp_constant_exact_nullity1(B, k, _spark(B))
    bound = max(abs(float(c)) * C, C / abs(float(c)))
    return InvarianceCheckResult(
        "nsp_constant_bound",
        PASS if C1 <= bound + 1e-9 else FAIL,
        {"C": C},
        {"C": C1},
        OpSequence((op,), A.shape),
        A,
        B,
        {"bound": bound, "k": k},
    )


def check_zero_column_propositions(A: RationalMatrix, k: int = 1) -> InvarianceCheckResult:
    """A zero column kills the NSP and the RIP at every order 1..k."""
    zeros = A.zero_columns()
    if not zeros:
        raise ValueError("matrix has no zero column")
    if k < 1:
        raise ValueError("order k must be >= 1")
    s = _spark(A)
    cert = nsp_failure_certificate(A, 1, s)
    support = [j for j, x in enumerate(cert or ()) if x != 0]
    F = to_float(A)
    alphas = [rip_constants(F, kk).alpha if F.any() else 0.0 for kk in range(1, min(k, A.shape[1]) + 1)]
    nsp_order = highest_nsp_order(A, s)
    rip_order = highest_rip_order(F)
    ok = (
        len(support) == 1
        and support[0] in zeros
        and all(a <= ZERO_ALPHA_TOL for a in alphas)
        and nsp_order == 0
        and rip_order == 0
    )
    return InvarianceCheckResult(
        "zero_column_propositions",
        PASS if ok else FAIL,
        {
            "zero_columns": zeros,
            "certificate_support": support,
            "alphas": alphas,
            "highest_nsp_order": nsp_order,
            "highest_rip_order": rip_order,
        },
        matrix_before=A,
    )


def check_corollaries(
    A: RationalMatrix, seed: int = 0, alpha_floor: float = DEFAULT_ALPHA_FLOOR
) -> InvarianceCheckResult:
    """B1 @ A (B1 invertible) and A @ B2 (B2 permuted diagonal) keep all orders."""
    m, n = A.shape
    B1 = random_invertible(m, seed, 8)
    B2 = random_permuted_diagonal(n, seed)
    ref = certificate_orders(A, alpha_floor)
    left = certificate_orders(B1 @ A, alpha_floor)
    right = certificate_orders(A @ B2, alpha_floor)
    keys = ("spark", "highest_nsp_order", "highest_rip_order")
    ok = all(left[q] == ref[q] and right[q] == ref[q] for q in keys)
    return InvarianceCheckResult(
        "corollaries",
        PASS if ok else FAIL,
        ref,
        {"left_product": left, "right_product": right},
        matrix_before=A,
        detail={"B1": B1.to_strings(), "B2": B2.to_strings()},
    )


def check_column_addition_effect(
    A: RationalMatrix, ops, alpha_floor: float = DEFAULT_ALPHA_FLOOR
) -> InvarianceCheckResult:
    """Report what a sequence containing column additions did to the certificates."""
    ops = _as_sequence(ops, A.shape)
    if not ops.has_col_add:
        raise ValueError("no column addition in the operations")
    B = apply_all(A, ops)
    before, after = certificate_orders(A, alpha_floor), certificate_orders(B, alpha_floor)
    return InvarianceCheckResult(
        "column_addition",
        EXPECTED_BREAK,
        before,
        after,
        ops,
        A,
        B,
        {"changed": sorted(q for q in before if before[q] != after[q])},
    )


# ---------------------------------------------------------------------------
# constructions


def zero_column_witness(A: RationalMatrix) -> OpSequence:
    """spark(A) - 1 column additions that turn a witness column into zero.

    With ``sum(k_i a_i) = 0`` over the spark witness and target ``t`` (the
    last witness column), add ``(k_i / k_t) a_i`` to ``a_t`` for every other
    witness member.
    """
    s = _spark(A)
    if s.is_full_column_rank:
        raise ValueError("columns are independent; no column addition sequence yields a zero column")
    if s.value == 1:
        raise ValueError("matrix already has a zero column")
    *others, t = s.witness
    coeffs = dict(zip(s.witness, s.coefficients))
    ops = tuple(ElemOp.col_add(t, i, coeffs[i] / coeffs[t]) for i in others)
    return OpSequence(ops, A.shape)


def check_column_addition_break(alpha_floor: float = DEFAULT_ALPHA_FLOOR) -> list[CounterexampleArtifact]:
    """The two canonical one-step column-addition counterexamples, replayed."""

    def build(description, A, op):
        ops = OpSequence((op,), A.shape)

        def replay():
            B = apply_all(A, ops)
            return certificate_orders(A, alpha_floor) == before and certificate_orders(B, alpha_floor) == after

        B = apply_all(A, ops)
        before, after = certificate_orders(A, alpha_floor), certificate_orders(B, alpha_floor)
        broken = {
            "spark": [before["spark"], after["spark"]],
            "highest_nsp_order": [before["highest_nsp_order"], after["highest_nsp_order"]],
            "highest_rip_order": [before["highest_rip_order"], after["highest_rip_order"]],
            "result": B.to_strings(),
        }
        return CounterexampleArtifact(description, A, ops, broken, replay)

    return [
        build(
            "zero column disappears: spark 1 -> 2",
            RationalMatrix([[1, 0]]),
            ElemOp.col_add(1, 0, 1),
        ),
        build(
            "zero column appears: spark 2 -> 1",
            RationalMatrix([[1, 1]]),
            ElemOp.col_add(1, 0, -1),
        ),
    ]


def universality_counterexample(
    A: RationalMatrix, alpha_floor: float = DEFAULT_ALPHA_FLOOR
) -> CounterexampleArtifact:
    """An orthonormal Phi for which A @ Phi has a zero first column.

    Phi's first column is a unit null vector of A; the rest is Gram-Schmidt
    completion.  A itself has alpha_1 > 0, A @ Phi has alpha_1 = 0.
    """
    m, n = A.shape
    if m >= n:
        raise ValueError("need more columns than rows for a guaranteed null vector")
    if A.zero_columns():
        raise ValueError("A already has a zero column; the counterexample would be vacuous")
    h = _primitive(null_space_basis(A)[0])
    Phi = complete_orthonormal_basis([float(x) for x in h])
    F = to_float(A)
    alpha_before = rip_constants(F, 1).alpha
    product = F @ Phi
    alpha_after = rip_constants(product, 1).alpha
    ortho_err = float(np.max(np.abs(Phi.T @ Phi - np.eye(n))))

    def replay():
        P = F @ Phi
        return (
            float(np.max(np.abs(Phi.T @ Phi - np.eye(n)))) <= UNIVERSALITY_TOL
            and rip_constants(P, 1).alpha <= UNIVERSALITY_TOL
            and rip_constants(F, 1).alpha > alpha_floor
        )

    return CounterexampleArtifact(
        "orthonormal change of basis destroys the RIP of order 1",
        A,
        Phi,
        {
            "alpha_1_before": alpha_before,
            "alpha_1_after": alpha_after,
            "orthonormality_error": ortho_err,
            "null_vector": [str(x) for x in h],
        },
        replay,
    )


# ---------------------------------------------------------------------------
# fuzzing


@dataclass(frozen=True)
class FuzzConfig:
    shapes: tuple = ((4, 8),)
    entries: tuple = tuple(range(-3, 4))
    kinds: tuple = INVARIANT_KINDS
    trials: int = 200
    ops_per_trial: int = 12
    seed: int = 42
    alpha_floor: float = DEFAULT_ALPHA_FLOOR
    rip_orders: tuple = (1, 2)
    coefficient_pool: tuple = DEFAULT_COEFFICIENT_POOL

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        object.__setattr__(self, "shapes", tuple(tuple(s) for s in self.shapes))
        object.__setattr__(self, "kinds", tuple(OpKind(k) for k in self.kinds))
        object.__setattr__(self, "entries", tuple(as_rational(x) for x in self.entries))
        object.__setattr__(self, "coefficient_pool", tuple(as_rational(x) for x in self.coefficient_pool))

    def to_dict(self) -> dict:
        return {
            "shapes": [list(s) for s in self.shapes],
            "entries": [str(x) for x in self.entries],
            "kinds": [k.value for k in self.kinds],
            "trials": self.trials,
            "ops_per_trial": self.ops_per_trial,
            "seed": self.seed,
            "alpha_floor": self.alpha_floor,
            "rip_orders": list(self.rip_orders),
            "coefficient_pool": [str(x) for x in self.coefficient_pool],
        }


# A trial check takes (A, ops, config, trial_seed) and returns zero or more
# results; it is rerun unchanged while shrinking a failure.
TrialCheck = Callable[[RationalMatrix, OpSequence, FuzzConfig, str], list]


def _trial_spark(A, ops, cfg, tseed):
    return [check_spark_invariance(A, ops)]


def _trial_orders(A, ops, cfg, tseed):
    return [check_order_invariance(A, ops, cfg.alpha_floor)]


def _trial_lemma(A, ops, cfg, tseed):
    rng = random.Random(f"{tseed}/lemma")
    n = A.shape[1]
    S = sorted(rng.sample(range(n), rng.randint(1, n)))
    row_ops = OpSequence(tuple(op for op in ops if op.kind.is_row), A.shape)
    ok = check_same_linear_dependence(A, row_ops, S)
    return [InvarianceCheckResult("same_linear_dependence", PASS if ok else FAIL, detail={"S": S})]


def _trial_rip_bounds(A, ops, cfg, tseed):
    cur = A
    n = A.shape[1]
    for step, op in enumerate(ops):
        F = to_float(cur)
        if F.any():
            for k in cfg.rip_orders:
                if k <= n:
                    res = check_rip_transform_bounds(F, op, k)
                    if not res.passed:
                        res.detail["step"] = step
                        return [res]
        cur = apply(cur, op)
    return [InvarianceCheckResult("rip_transform_bounds", PASS)]


def _trial_nsp_bound(A, ops, cfg, tseed):
    out = []
    cur = A
    for op in ops:
        if op.kind is OpKind.COL_MULT and nullity(cur) == 1 and not _spark(cur).is_full_column_rank:
            if _spark(cur).value > 1:
                out.append(check_nsp_constant_bound(cur, op.c, op.i, 1))
        cur = apply(cur, op)
    return out


def _trial_zero_column(A, ops, cfg, tseed):
    return [check_zero_column_propositions(A, 1)] if A.zero_columns() else []


def _trial_corollaries(A, ops, cfg, tseed):
    seed = random.Random(f"{tseed}/corollaries").getrandbits(64)
    return [check_corollaries(A, seed, cfg.alpha_floor)]


DEFAULT_CHECKS: dict[str, TrialCheck] = {
    "spark_invariance": _trial_spark,
    "order_invariance": _trial_orders,
    "same_linear_dependence": _trial_lemma,
    "rip_transform_bounds": _trial_rip_bounds,
    "nsp_constant_bound": _trial_nsp_bound,
    "zero_column_propositions": _trial_zero_column,
    "corollaries": _trial_corollaries,
}


def _fails(check: TrialCheck, A, ops, cfg, tseed) -> bool:
    try:
        return any(r.verdict == FAIL for r in check(A, ops, cfg, tseed))
    except Exception:
        # a shrink step that makes the check inapplicable is not a reproduction
        return False


def _toward_zero(x: Fraction) -> list[Fraction]:
    if x == 0:
        return []
    out = [Fraction(0)]
    t = Fraction(math.trunc(x))
    if t != x and t != 0:
        out.append(t)
    if abs(x) > 1 and x.denominator == 1:
        out.append(x - (1 if x > 0 else -1))
    return out


def shrink_failure(
    A: RationalMatrix, ops: OpSequence, still_fails: Callable[[RationalMatrix, OpSequence], bool]
) -> tuple[RationalMatrix, OpSequence]:
    """Minimize a failing (A, ops) pair.

    First drop operations from the tail, then move matrix entries toward 0
    (row-major, first candidate that keeps the failure wins), repeating until
    nothing changes.
    """
    while len(ops) and still_fails(A, ops[:-1]):
        ops = ops[:-1]
    changed = True
    while changed:
        changed = False
        for r in range(A.shape[0]):
            for c in range(A.shape[1]):
                for cand in _toward_zero(A[r, c]):
                    rows = A.tolist()
                    rows[r][c] = cand
                    B = RationalMatrix(rows)
                    if still_fails(B, ops):
                        A, changed = B, True
                        break
    return A, ops


def _run_trial(index: int, cfg: FuzzConfig, checks: Mapping[str, TrialCheck]) -> dict:
    tseed = f"{cfg.seed}/{index}"
    rng = random.Random(tseed)
    shape = rng.choice(cfg.shapes)
    A = random_rational_matrix(*shape, entries=cfg.entries, seed=rng)
    ops = random_op_sequence(shape, cfg.ops_per_trial, cfg.kinds, rng, cfg.coefficient_pool)
    if ops.has_col_add:
        res = check_column_addition_effect(A, ops, cfg.alpha_floor)
        return {"index": index, "results": {"column_addition": [res]}, "A": A, "ops": ops, "tseed": tseed}
    results = {cid: check(A, ops, cfg, tseed) for cid, check in checks.items()}
    return {"index": index, "results": results, "A": A, "ops": ops, "tseed": tseed}


def fuzz_suite(
    config: FuzzConfig | None = None,
    checks: Mapping[str, TrialCheck] | None = None,
    n_jobs: int = 1,
) -> dict:
    """Run seeded random trials through every check and summarize.

    The summary depends only on ``config`` and ``checks``; ``n_jobs`` just
    spreads trials over threads.  The first failing trial (by index) stops
    the accounting and is shrunk into a reproduction.
    """
    cfg = config or FuzzConfig()
    checks = dict(DEFAULT_CHECKS if checks is None else checks)
    if n_jobs > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            trials = list(pool.map(lambda i: _run_trial(i, cfg, checks), range(cfg.trials)))
    else:
        trials = [_run_trial(i, cfg, checks) for i in range(cfg.trials)]

    counts: dict[str, dict[str, int]] = {}
    breaks = {"trials": 0, "changed": {}}
    reproductions = []
    run = 0
    for trial in trials:
        run += 1
        failed = None
        for cid, results in trial["results"].items():
            bucket = counts.setdefault(cid, {PASS: 0, FAIL: 0, EXPECTED_BREAK: 0})
            for res in results:
                bucket[res.verdict] += 1
                if res.verdict == EXPECTED_BREAK:
                    breaks["trials"] += 1
                    for q in res.detail["changed"]:
                        breaks["changed"][q] = breaks["changed"].get(q, 0) + 1
                if res.verdict == FAIL and failed is None:
                    failed = (cid, res)
        if failed is not None:
            reproductions.append(_reproduction(trial, failed, cfg, checks))
            break

    return {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": "sparsecert", "version": __version__},
        "config": cfg.to_dict(),
        "trials_run": run,
        "checks": counts,
        "expected_breaks": breaks,
        "status": FAIL if reproductions else PASS,
        "reproductions": reproductions,
    }


def _reproduction(trial: dict, failed, cfg: FuzzConfig, checks) -> dict:
    cid, res = failed
    check = checks[cid]
    tseed = trial["tseed"]
    A, ops = shrink_failure(trial["A"], trial["ops"], lambda B, o: _fails(check, B, o, cfg, tseed))
    return {
        "check_id": cid,
        "trial": trial["index"],
        "trial_seed": tseed,
        "matrix": A.to_strings(),
        "ops": [str(op) for op in ops],
        "original_matrix": trial["A"].to_strings(),
        "original_ops": [str(op) for op in trial["ops"]],
        "detail": _jsonable(res.to_dict()),
    }


def _jsonable(obj):
    return json.loads(json.dumps(obj, default=str))


def report_json(report: dict) -> str:
    return json.dumps(_jsonable(report), indent=2, sort_keys=True) + "\n"
