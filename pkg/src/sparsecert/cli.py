"""Command line entry point: ``sparsecert <command> ...``.

Exit codes: 0 on success (all checks PASS or EXPECTED_BREAK), 1 when any
check FAILs or a counterexample does not replay, 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from ._guard import EnumerationGuardError
from .formats import (
    FORMATS,
    MatrixParseError,
    OpParseError,
    detect_format,
    format_matrix,
    parse_matrix,
    parse_ops,
)
from .numeric import RationalMatrix
from .properties import (
    FAIL,
    FuzzConfig,
    check_column_addition_break,
    check_column_addition_effect,
    check_order_invariance,
    certificate_orders,
    check_spark_invariance,
    fuzz_suite,
    report_json,
    universality_counterexample,
    zero_column_witness,
)
from .report import DEFAULT_NSP_SAMPLES, analyze
from .rip import DEFAULT_ALPHA_FLOOR
from .transforms import OpKind, apply_all
from .validation import check_rational_matrix


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _load(path: str, fmt: str | None):
    return parse_matrix(path, fmt)


def _load_exact(path: str, fmt: str | None) -> RationalMatrix:
    return check_rational_matrix(_load(path, fmt))


def cmd_analyze(args) -> int:
    A = _load(args.matrix, args.format)
    rep = analyze(
        A,
        k_max=args.k_max,
        alpha_floor=args.alpha_floor,
        nsp_samples=args.nsp_samples,
        seed=args.seed,
        n_jobs=args.threads,
        force_large=args.force_large,
        matrix_id=Path(args.matrix).name,
    )
    if args.json:
        _emit(rep.to_json(args.timings), args.output)
    else:
        sys.stdout.write(rep.to_table(args.timings))
        if args.output:
            Path(args.output).write_text(rep.to_json(args.timings))
    return 0


def cmd_transform(args) -> int:
    fmt = (args.format or detect_format(args.matrix)).lower()
    A = _load_exact(args.matrix, fmt)
    ops = parse_ops(args.ops, A.shape)
    B = apply_all(A, ops)
    _emit(format_matrix(B, fmt), args.output)
    summary = {
        "ops": [str(op) for op in ops],
        "before": certificate_orders(A, args.alpha_floor),
        "after": certificate_orders(B, args.alpha_floor),
    }
    # keep stdout clean when the matrix itself goes there
    stream = sys.stdout if args.output else sys.stderr
    stream.write(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return 0


def cmd_invariance(args) -> int:
    A = _load_exact(args.matrix, args.format)
    ops = parse_ops(args.ops, A.shape)
    if ops.has_col_add:
        results = [check_column_addition_effect(A, ops, args.alpha_floor)]
    else:
        results = [check_spark_invariance(A, ops), check_order_invariance(A, ops, args.alpha_floor)]
    doc = {
        "schema_version": "1.0",
        "tool": {"name": "sparsecert", "version": __version__},
        "results": [r.to_dict() for r in results],
    }
    _emit(report_json(doc), args.output)
    return 1 if any(r.verdict == FAIL for r in results) else 0


def cmd_counterexample(args) -> int:
    if args.kind == "spark-break":
        artifacts = check_column_addition_break(args.alpha_floor)
    elif args.matrix is None:
        print(f"error: counterexample kind {args.kind!r} needs a matrix", file=sys.stderr)
        return 2
    elif args.kind == "universality":
        artifacts = [universality_counterexample(_load_exact(args.matrix, args.format), args.alpha_floor)]
    else:
        A = _load_exact(args.matrix, args.format)
        ops = zero_column_witness(A)
        B = apply_all(A, ops)
        artifacts = None
        doc_extra = {
            "description": "column additions that produce a zero column",
            "matrix": A.to_strings(),
            "ops": [str(op) for op in ops],
            "length": len(ops),
            "result": B.to_strings(),
            "zero_columns": B.zero_columns(),
        }
        ok = bool(B.zero_columns())
    if artifacts is not None:
        replays = [a.replay() for a in artifacts]
        doc_extra = {"artifacts": [dict(a.to_dict(), replayed=r) for a, r in zip(artifacts, replays)]}
        ok = all(replays)
    doc = {"schema_version": "1.0", "kind": args.kind, **doc_extra}
    _emit(report_json(doc), args.output)
    return 0 if ok else 1


def _parse_shape(text: str) -> tuple[int, int]:
    m, _, n = text.lower().partition("x")
    return int(m), int(n)


def _parse_kinds(text: str) -> tuple:
    table = {k.mnemonic: k for k in OpKind}
    table.update({k.value: k for k in OpKind})
    return tuple(table[t.strip().upper()] for t in text.split(",") if t.strip())


def cmd_fuzz(args) -> int:
    params: dict = {}
    if args.config:
        params.update(json.loads(Path(args.config).read_text()))
        if "kinds" in params:
            params["kinds"] = _parse_kinds(",".join(params["kinds"]))
    if args.trials is not None:
        params["trials"] = args.trials
    if args.seed is not None:
        params["seed"] = args.seed
    if args.shape:
        params["shapes"] = tuple(_parse_shape(s) for s in args.shape)
    if args.kinds:
        params["kinds"] = _parse_kinds(args.kinds)
    if args.ops_per_trial is not None:
        params["ops_per_trial"] = args.ops_per_trial
    if args.alpha_floor is not None:
        params["alpha_floor"] = args.alpha_floor
    cfg = FuzzConfig(**params)
    report = fuzz_suite(cfg, n_jobs=args.threads)
    _emit(report_json(report), args.output)
    return 1 if report["status"] == FAIL else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sparsecert",
        description="Spark, NSP and RIP certificates of sensing matrices under elementary transformations.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def matrix_args(p, optional=False):
        if optional:
            p.add_argument("matrix", nargs="?", help="matrix file (.json, .mtx, .csv)")
        else:
            p.add_argument("matrix", help="matrix file (.json, .mtx, .csv)")
        p.add_argument("--format", choices=FORMATS, help="override the format inferred from the extension")
        p.add_argument("--output", "-o", help="write the result here instead of stdout")

    p = sub.add_parser("analyze", help="compute spark, NSP and RIP certificates")
    matrix_args(p)
    p.add_argument("--k-max", type=int, help="largest RIP order to tabulate (default min(n, m+1, 6))")
    p.add_argument("--alpha-floor", type=float, default=DEFAULT_ALPHA_FLOOR)
    p.add_argument("--nsp-samples", type=int, default=DEFAULT_NSP_SAMPLES)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--force-large", action="store_true", help="allow enumeration above 24 columns")
    p.add_argument("--json", action="store_true", help="print the JSON report instead of the table")
    p.add_argument("--timings", action="store_true", help="include wall-clock timings (not reproducible)")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("transform", help="apply an operation file exactly")
    matrix_args(p)
    p.add_argument("ops", help="operation file (RS/RM/RA/CS/CM/CA lines)")
    p.add_argument("--alpha-floor", type=float, default=DEFAULT_ALPHA_FLOOR)
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("invariance", help="check certificates before and after an operation file")
    matrix_args(p)
    p.add_argument("ops", help="operation file")
    p.add_argument("--alpha-floor", type=float, default=DEFAULT_ALPHA_FLOOR)
    p.set_defaults(func=cmd_invariance)

    p = sub.add_parser("counterexample", help="build and replay a column-addition or universality counterexample")
    p.add_argument("kind", choices=("spark-break", "universality", "zero-column"))
    matrix_args(p, optional=True)
    p.add_argument("--alpha-floor", type=float, default=DEFAULT_ALPHA_FLOOR)
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("fuzz", help="seeded differential fuzzing of all invariance checks")
    p.add_argument("--config", help="JSON file with FuzzConfig fields")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--shape", action="append", help="matrix shape such as 4x8 (repeatable)")
    p.add_argument("--kinds", help="comma-separated op kinds, e.g. RS,RM,RA,CS,CM")
    p.add_argument("--ops-per-trial", type=int)
    p.add_argument("--alpha-floor", type=float)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_fuzz)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (MatrixParseError, OpParseError, EnumerationGuardError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
