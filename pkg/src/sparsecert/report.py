"""Full certificate bundle for one matrix."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .nsp import NspReport, nsp_report
from .numeric import RationalMatrix, to_float
from .rip import DEFAULT_ALPHA_FLOOR, highest_rip_order, rip_table
from .spark import SparkResult, exact_recovery_sparsity, spark

SCHEMA_VERSION = "1.0"
DEFAULT_K_MAX = 6
DEFAULT_NSP_SAMPLES = 1000


@dataclass
class AnalysisReport:
    matrix_id: str
    shape: tuple
    spark: SparkResult
    exact_recovery_k: int
    nsp: NspReport
    rip: list
    highest_rip_order: int
    config: dict
    exact_source: str
    timings: dict = field(default_factory=dict)

    def to_dict(self, include_timings: bool = False) -> dict:
        out = {
            "schema_version": SCHEMA_VERSION,
            "tool": {"name": "sparsecert", "version": __version__},
            "matrix": {"id": self.matrix_id, "rows": self.shape[0], "cols": self.shape[1]},
            "exact": {
                "source": self.exact_source,
                "spark": self.spark.to_dict(),
                "exact_recovery_k": self.exact_recovery_k,
                "highest_nsp_order": self.nsp.highest_order,
                "nsp_failure_certificate": self.nsp.to_dict()["failure_certificate"],
            },
            "spectral": {
                "rip": [r.to_dict() for r in self.rip],
                "highest_rip_order": self.highest_rip_order,
                "nsp_constants": self.nsp.to_dict()["constant_estimates"],
                "highest_nsp_order_convention": self.nsp.to_dict()["highest_order_convention"],
            },
            "config": self.config,
        }
        if include_timings:
            out["timings"] = self.timings
        return out

    def to_json(self, include_timings: bool = False) -> str:
        return json.dumps(self.to_dict(include_timings), indent=2, sort_keys=True) + "\n"

    def to_table(self, include_timings: bool = False) -> str:
        s = self.spark
        lines = [
            f"matrix {self.matrix_id}  ({self.shape[0]} x {self.shape[1]})",
            "",
            f"[exact]  spark               {s.value}"
            + (f"  witness {list(s.witness)}" if s.witness is not None else ""),
            f"[exact]  exact recovery k    {self.exact_recovery_k}",
            f"[exact]  highest NSP order   {self.nsp.highest_order}  (spark - 1)",
            f"[spect]  highest RIP order   {self.highest_rip_order}"
            f"  (alpha > {self.config['alpha_floor']:g})",
            "",
            f"{'k':>3} {'alpha_k':>14} {'beta_k':>14} {'delta_k':>12} {'NSP C':>12}  kind",
        ]
        for r in self.rip:
            est = self.nsp.constant_estimates.get(r.order)
            c = f"{est.value:12.6g}  {est.kind}" if est else f"{'-':>12}"
            lines.append(f"{r.order:>3} {r.alpha:14.6e} {r.beta:14.6e} {r.delta:12.6f} {c}")
        if include_timings and self.timings:
            lines.append("")
            lines.append("timings: " + ", ".join(f"{k} {v:.3f}s" for k, v in self.timings.items()))
        return "\n".join(lines) + "\n"


def analyze(
    A,
    k_max: int | None = None,
    alpha_floor: float = DEFAULT_ALPHA_FLOOR,
    nsp_samples: int = DEFAULT_NSP_SAMPLES,
    seed: int = 0,
    n_jobs: int = 1,
    force_large: bool = False,
    matrix_id: str = "A",
) -> AnalysisReport:
    """Spark, NSP and RIP certificates of ``A``.

    ``A`` may be a :class:`RationalMatrix` or a float array.  For float input
    the exact lane runs on the exact binary values of the entries.
    """
    if isinstance(A, RationalMatrix):
        R, source = A, "rational input"
        F = to_float(A)
    else:
        F = np.asarray(A, dtype=np.float64)
        R = RationalMatrix(F.tolist())
        source = "exact binary values of float input"
    if not any(x != 0 for row in R.rows for x in row):
        raise ValueError("all-zero matrix: RIP constants are undefined (beta = 0)")
    m, n = R.shape
    if k_max is None:
        # order m + 1 is where the RIP must fail when n > m; show it
        k_max = min(n, m + 1, DEFAULT_K_MAX)
    if not 1 <= k_max <= n:
        raise ValueError(f"k_max must be in [1, {n}]")

    timings = {}
    t0 = time.perf_counter()
    s = spark(R, force_large)
    timings["spark"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    nsp = nsp_report(R, k_max, nsp_samples, seed, s)
    timings["nsp"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    table = rip_table(F, k_max, force_large, n_jobs)
    order = highest_rip_order(F, alpha_floor, force_large, n_jobs)
    timings["rip"] = time.perf_counter() - t0

    config = {
        "k_max": k_max,
        "alpha_floor": alpha_floor,
        "nsp_samples": nsp_samples,
        "seed": seed,
        "force_large": force_large,
    }
    return AnalysisReport(
        matrix_id, (m, n), s, exact_recovery_sparsity(s), nsp, table, order, config, source, timings
    )
