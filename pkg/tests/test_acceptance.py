"""Acceptance criteria, one test per criterion.

Each test prints a single ``[acceptance NN] PASS|FAIL ...`` line (visible
even under output capture) before asserting.
"""

import random
import time

import numpy as np
import pytest

from oracles import oracle_nsp_constant, oracle_spark
from sparsecert.cli import main
from sparsecert.nsp import nsp_constant_exact_nullity1, nsp_constant_lower_bound
from sparsecert.numeric import RationalMatrix, nullity, rank_exact, to_float
from sparsecert.properties import (
    DEFAULT_CHECKS,
    PASS,
    FuzzConfig,
    check_column_addition_break,
    check_corollaries,
    check_nsp_constant_bound,
    check_order_invariance,
    check_zero_column_propositions,
    fuzz_suite,
    universality_counterexample,
    zero_column_witness,
)
from sparsecert.rip import rip_constants
from sparsecert.spark import spark
from sparsecert.transforms import (
    ElemOp,
    apply_all,
    apply_float,
    random_op_sequence,
    random_rational_matrix,
)


@pytest.fixture
def report(capsys):
    def _report(number, ok, detail):
        with capsys.disabled():
            print(f"\n[acceptance {number:02d}] {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail

    return _report


def _with_zero_column(A, rng):
    rows = A.tolist()
    z = rng.randrange(A.shape[1])
    for row in rows:
        row[z] = 0
    return RationalMatrix(rows)


def _without_zero_column(m, n, rng):
    while True:
        A = random_rational_matrix(m, n, seed=rng)
        if not A.zero_columns():
            return A


def _full_row_rank_4x5(count, seed):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        A = random_rational_matrix(4, 5, seed=rng)
        if rank_exact(A) == 4:
            out.append(A)
    return out


def test_01_spark_invariance_fuzz(report):
    cfg = FuzzConfig(shapes=((4, 8),), trials=200, ops_per_trial=12, seed=2024)
    t0 = time.perf_counter()
    rep = fuzz_suite(cfg, checks={"spark_invariance": DEFAULT_CHECKS["spark_invariance"]})
    elapsed = time.perf_counter() - t0
    passed = rep["checks"]["spark_invariance"][PASS]
    report(1, passed == 200 and rep["status"] == PASS and elapsed < 60, f"{passed}/200 equal, {elapsed:.1f}s")


def test_02_spark_range_and_zero_columns(report):
    rng = random.Random(202)
    bad = 0
    for inject in (True, False):
        for _ in range(100):
            A = _without_zero_column(4, 8, rng)
            if inject:
                A = _with_zero_column(A, rng)
            value = spark(A).value
            in_range = 1 <= value <= 4 + 1
            bad += not (in_range and (value == 1) == inject)
    report(2, bad == 0, f"{200 - bad}/200 in [1, m+1] with spark 1 exactly for zero columns")


def test_03_oracle_equivalence(report):
    rng = random.Random(303)
    agree = 0
    for _ in range(50):
        m = rng.randint(2, 4)
        n = rng.randint(m + 1, 8)
        A = random_rational_matrix(m, n, seed=rng)
        res = spark(A)
        size, _ = oracle_spark(A.tolist())
        agree += (res.value if not res.is_full_column_rank else None) == size
    report(3, agree == 50, f"{agree}/50 equal to all-subsets enumeration")


def test_04_rip_switch_invariance(report):
    rng = np.random.default_rng(404)
    prng = random.Random(404)
    worst = 0.0
    for _ in range(50):
        A = rng.standard_normal((5, 10))
        for op in (ElemOp.row_switch(*prng.sample(range(5), 2)), ElemOp.col_switch(*prng.sample(range(10), 2))):
            B = apply_float(A, op)
            for k in (1, 2, 3):
                r, r1 = rip_constants(A, k), rip_constants(B, k)
                scale = max(1.0, r.beta)
                worst = max(worst, abs(r1.alpha - r.alpha) / scale, abs(r1.beta - r.beta) / scale)
    report(4, worst <= 1e-10, f"max scaled change {worst:.2e} (limit 1e-10)")


def test_05_rip_mult_and_add_bounds(report):
    rng = np.random.default_rng(505)
    prng = random.Random(505)
    violations = checks = 0
    for _ in range(50):
        A = rng.standard_normal((5, 10))
        ops = []
        for c in ("1/2", "-1/2", "3", "-3"):
            ops.append(ElemOp.row_mult(prng.randrange(5), c))
            ops.append(ElemOp.col_mult(prng.randrange(10), c))
        for c in ("1", "-1", "2"):
            ops.append(ElemOp.row_add(*prng.sample(range(5), 2), c))
        for op in ops:
            B = apply_float(A, op)
            c2 = float(op.c) ** 2
            for k in (1, 2):
                r, r1 = rip_constants(A, k), rip_constants(B, k)
                if op.kind.is_mult:
                    ok = r1.alpha >= min(r.alpha, c2 * r.alpha) - 1e-9 and r1.beta <= max(r.beta, c2 * r.beta) + 1e-9
                else:
                    ok = r1.beta <= 2 * (1 + c2) * r.beta + 1e-9 and r1.alpha > 1e-12
                checks += 1
                violations += not ok
    report(5, violations == 0, f"{checks - violations}/{checks} bound checks hold")


def test_06_highest_order_invariance(report):
    rng = random.Random(606)
    same = nsp_same = rip_same = 0
    for _ in range(100):
        A = random_rational_matrix(4, 8, seed=rng)
        ops = random_op_sequence((4, 8), 12, seed=rng)
        res = check_order_invariance(A, ops, alpha_floor=1e-9)
        nsp_same += res.before["highest_nsp_order"] == res.after["highest_nsp_order"]
        rip_same += res.before["highest_rip_order"] == res.after["highest_rip_order"]
        same += res.verdict == PASS
    report(6, same == 100, f"NSP order {nsp_same}/100, RIP order {rip_same}/100 preserved")


def test_07_nsp_constant_nullity_one(report):
    worst_closed = worst_sampled = 0.0
    consistent = True
    for A in _full_row_rank_4x5(50, 707):
        assert nullity(A) == 1
        s = spark(A)
        for k in (1, 2, 3):
            truth = oracle_nsp_constant(A.tolist(), k)
            if k >= s.value:
                # no finite constant: the oracle sees a k-sparse null vector
                consistent &= truth == float("inf")
                with pytest.raises(ValueError):
                    nsp_constant_exact_nullity1(A, k, s)
                continue
            exact = nsp_constant_exact_nullity1(A, k, s)
            sampled = nsp_constant_lower_bound(A, k, 1, seed=k, spark_result=s)
            worst_closed = max(worst_closed, abs(exact - truth))
            worst_sampled = max(worst_sampled, abs(sampled - exact))
    ok = consistent and worst_closed <= 1e-12 and worst_sampled <= 1e-12
    report(7, ok, f"closed vs brute {worst_closed:.1e}, sampled vs closed {worst_sampled:.1e} (limit 1e-12)")


def test_08_nsp_constant_bound_after_column_mult(report):
    total = passed = 0
    for A in _full_row_rank_4x5(50, 707):
        s = spark(A)
        for c in ("1/2", "3"):
            for i in range(5):
                for k in range(1, min(3, s.value - 1) + 1):
                    total += 1
                    passed += check_nsp_constant_bound(A, c, i, k).verdict == PASS
    report(8, total > 0 and passed == total, f"{passed}/{total} within max(|c|C, C/|c|) + 1e-9")


def test_09_zero_column_propositions(report):
    rng = random.Random(909)
    passed = 0
    for _ in range(100):
        m = rng.randint(2, 4)
        A = _with_zero_column(random_rational_matrix(m, rng.randint(2, 8), seed=rng), rng)
        passed += check_zero_column_propositions(A, 1).verdict == PASS
    report(9, passed == 100, f"{passed}/100 with 1-sparse certificate, alpha_1 <= 1e-12, orders 0")


def test_10_zero_column_witness(report):
    rng = random.Random(1010)
    passed = 0
    for _ in range(50):
        while True:
            m = rng.randint(2, 4)
            A = random_rational_matrix(m, rng.randint(m + 1, 8), seed=rng)
            if spark(A).value >= 2:
                break
        ops = zero_column_witness(A)
        passed += len(ops) == spark(A).value - 1 and bool(apply_all(A, ops).zero_columns())
    report(10, passed == 50, f"{passed}/50 of length spark - 1 ending in a zero column")


def test_11_column_addition_breaks(report):
    appear, vanish = None, None
    for art in check_column_addition_break():
        if art.broken_quantity["spark"] == [1, 2]:
            vanish = art
        elif art.broken_quantity["spark"] == [2, 1]:
            appear = art
    ok = (
        vanish is not None
        and appear is not None
        and vanish.replay()
        and appear.replay()
        and appear.broken_quantity["highest_nsp_order"] == [1, 0]
        and appear.broken_quantity["highest_rip_order"] == [1, 0]
    )
    report(11, ok, "spark 1 -> 2 and 2 -> 1 replayed; NSP/RIP order 1 -> 0")


def test_12_corollaries(report):
    rng = random.Random(1212)
    passed = 0
    for t in range(100):
        A = random_rational_matrix(4, 8, seed=rng)
        passed += check_corollaries(A, seed=t).verdict == PASS
    report(12, passed == 100, f"{passed}/100 with spark and highest orders preserved")


def test_13_universality(report):
    rng = random.Random(1313)
    passed = 0
    done = 0
    while done < 50:
        A = random_rational_matrix(4, 6, seed=rng)
        if rip_constants(to_float(A), 1).alpha < 1e-6:
            continue
        done += 1
        art = universality_counterexample(A)
        bq = art.broken_quantity
        passed += bq["orthonormality_error"] <= 1e-10 and bq["alpha_1_after"] <= 1e-10 and art.replay()
    report(13, passed == 50, f"{passed}/50 with orthonormal Phi and alpha_1(A Phi) <= 1e-10")


def test_14_fuzz_report_determinism(report, tmp_path, capsys):
    paths = []
    for run, threads in enumerate((1, 1, 4)):
        out = tmp_path / f"fuzz{run}.json"
        code = main(["fuzz", "--seed", "42", "--threads", str(threads), "--output", str(out)])
        assert code == 0
        paths.append(out.read_bytes())
    capsys.readouterr()
    report(14, paths[0] == paths[1] == paths[2], "seed 42: byte-identical across 2 runs and threads {1, 4}")
