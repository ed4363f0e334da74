"""Benchmark harness: multi-trial MSE comparison and solver scaling runs.

Each trial draws a synthetic observation, decomposes it with the envelope
pipeline and with each FIR baseline, and records the smooth-component MSE.
Trials are seeded ``base_seed + i`` so the whole report is reproducible
bit-for-bit.
"""

from __future__ import annotations

import csv
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .baseline import FirFilter, lti_smooth_estimate
from .core import BoxConstraint, NonPositiveParameterError, Signal, mse
from .kernel import KernelSpec, build_band
from .pipeline import PipelineParams, decompose_debiased
from .solver import SolveParams, solve_constrained_filter
from .synth import TrialSpec, generate_trial

__all__ = ["BenchReport", "run_mse_experiment", "run_scaling", "write_report_csv"]

PROPOSED = "proposed"


@dataclass(frozen=True)
class BenchReport:
    #: (trial_id, method_name, mse) rows, trials in seed order.
    trial_mses: tuple[tuple[int, str, float], ...]
    #: permutation sorting trials by the proposed method's MSE.
    ordering: tuple[int, ...]
    #: per-trial final-stage residual traces: trial_id -> ((iter, residual), ...)
    convergence_traces: dict[int, tuple[tuple[int, float], ...]]
    #: per-trial (wall_seconds, total_solver_iters) for the proposed method.
    timing: tuple[tuple[int, float, int], ...]

    def mses_for(self, method: str) -> np.ndarray:
        return np.array(
            [m for _, name, m in self.trial_mses if name == method], dtype=float
        )

    def method_names(self) -> list[str]:
        seen: list[str] = []
        for _, name, _ in self.trial_mses:
            if name not in seen:
                seen.append(name)
        return seen


def _n_workers() -> int:
    env = os.environ.get("ENVELOFIT_THREADS", "")
    try:
        cap = int(env) if env else 1
    except ValueError:
        cap = 1
    return max(1, cap)


def run_mse_experiment(
    n_trials: int,
    base_seed: int,
    pipeline: PipelineParams,
    baselines: list[FirFilter],
    trial_spec: TrialSpec | None = None,
) -> BenchReport:
    """Smooth-component MSE of the pipeline vs each baseline on fresh trials."""
    if n_trials < 1:
        raise NonPositiveParameterError(f"n_trials must be >= 1, got {n_trials}")
    template = trial_spec if trial_spec is not None else TrialSpec()

    def one(i: int):
        spec = replace(template, seed=base_seed + i)
        trial = generate_trial(spec)
        t_start = time.monotonic()
        dec = decompose_debiased(trial.observation, pipeline)
        wall = time.monotonic() - t_start
        rows = [(i, PROPOSED, mse(trial.smooth, dec.smooth))]
        for f in baselines:
            smooth, _ = lti_smooth_estimate(trial.observation, f)
            rows.append((i, f"hamming_lp_{f.length}", mse(trial.smooth, smooth)))
        final = dec.diagnostics[-1]
        iters = sum(r.iters for r in dec.diagnostics)
        return rows, final.residual_trace, (i, wall, iters)

    workers = min(_n_workers(), n_trials)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(one, range(n_trials)))
    else:
        results = [one(i) for i in range(n_trials)]

    all_rows: list[tuple[int, str, float]] = []
    traces: dict[int, tuple[tuple[int, float], ...]] = {}
    timing: list[tuple[int, float, int]] = []
    for i, (rows, trace, tm) in enumerate(results):
        all_rows.extend(rows)
        traces[i] = trace
        timing.append(tm)

    proposed = [m for _, name, m in all_rows if name == PROPOSED]
    ordering = tuple(int(j) for j in np.argsort(proposed, kind="stable"))
    return BenchReport(
        trial_mses=tuple(all_rows),
        ordering=ordering,
        convergence_traces=traces,
        timing=tuple(timing),
    )


def run_scaling(
    n_list: list[int],
    sigma: float = 20.0,
    lam: float = 1.0,
    iters: int = 30,
    repeats: int = 5,
    seed: int = 0,
) -> list[tuple[int, float]]:
    """Median per-iteration solver wall time for each signal length."""
    rng = np.random.default_rng(seed)
    out = []
    for n in n_list:
        spec = KernelSpec(sigma=sigma)
        build_band(spec, n)  # raises if the band does not fit
        t = np.arange(n) / 10.0
        y = Signal(np.sin(0.5 * t) + 0.1 * rng.standard_normal(n), 10.0)
        box_lo = y.samples - 1.0
        box_hi = y.samples + 1.0
        params = SolveParams(
            y=y,
            lam=lam,
            kernel=spec,
            box=BoxConstraint(box_lo, box_hi),
            max_iters=iters,
            trace_every=0,
        )
        times = []
        for _ in range(repeats):
            t0 = time.monotonic()
            solve_constrained_filter(params)
            times.append((time.monotonic() - t0) / iters)
        out.append((n, float(np.median(times))))
    return out


def write_report_csv(path, report: BenchReport) -> None:
    """One row per trial x method; plot-ready."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["trial_id", "method", "mse"])
        for trial_id, method, m in report.trial_mses:
            w.writerow([trial_id, method, repr(float(m))])
