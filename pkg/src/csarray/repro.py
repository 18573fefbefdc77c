"""The two published thinning experiments with their default settings and gates."""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .cs_synthesis import SolverConfig, SynthesisReport, synthesize
from .reference_patterns import load_fixture


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail}"


@dataclass(frozen=True)
class Example:
    key: str
    target: str
    published_cs: str
    published_count: int
    max_elements: int
    max_dev_db: float
    min_reduction_pct: float
    max_sidelobe_db: float | None
    max_runtime_s: float = 30.0


EXAMPLES = {
    "example1": Example(
        key="example1",
        target="chebyshev20",
        published_cs="cs_thinned_chebyshev20",
        published_count=12,
        max_elements=14,
        max_dev_db=3.0,
        min_reduction_pct=30.0,
        max_sidelobe_db=-27.0,
    ),
    "example2": Example(
        key="example2",
        target="taylor_kaiser29",
        published_cs="cs_thinned_taylor29",
        published_count=18,
        max_elements=20,
        max_dev_db=3.0,
        min_reduction_pct=31.0,
        max_sidelobe_db=None,
    ),
}


def positional_agreement(positions, published, tol: float = 0.2) -> list[tuple[float, float, float]]:
    """Pair each published position with the nearest synthesized one.

    Returns ``(published, nearest, |difference|)`` per published element.
    """
    positions = np.asarray(positions)
    rows = []
    for p in published:
        j = int(np.argmin(np.abs(positions - p)))
        rows.append((float(p), float(positions[j]), float(abs(positions[j] - p))))
    return rows


def run_example(key: str, x_max: float = 10.0, step: float = 0.1, config: SolverConfig | None = None, **kwargs):
    """Run one example; returns ``(report, checks, agreement_rows, runtime_s)``."""
    ex = EXAMPLES[key]
    reference = load_fixture(ex.target).array
    t0 = time.perf_counter()
    report = synthesize(reference, x_max=x_max, step=step, config=config, **kwargs)
    runtime = time.perf_counter() - t0
    return report, evaluate_gates(ex, report, runtime), agreement_for(ex, report), runtime


def agreement_for(ex: Example, report: SynthesisReport):
    published = load_fixture(ex.published_cs).array.positions
    return positional_agreement(report.sparse_array.positions, published)


def evaluate_gates(ex: Example, report: SynthesisReport, runtime: float) -> list[Check]:
    m = report.metrics
    checks = [
        Check(
            "element count",
            report.n_synthesized <= ex.max_elements,
            f"{report.n_synthesized} physical elements (limit {ex.max_elements}, published {ex.published_count})",
        ),
        Check(
            "pattern deviation",
            m.max_dev_db <= ex.max_dev_db,
            f"max {m.max_dev_db:.3f} dB, rms {m.rmse_db:.3f} dB above -50 dB (limit {ex.max_dev_db} dB)",
        ),
    ]
    if ex.max_sidelobe_db is not None:
        checks.append(
            Check(
                "peak sidelobe",
                m.peak_sidelobe_db <= ex.max_sidelobe_db,
                f"{m.peak_sidelobe_db:.3f} dB (limit {ex.max_sidelobe_db} dB, target {report.target_sidelobe_db:.3f} dB)",
            )
        )
    checks += [
        Check(
            "element reduction",
            report.reduction_pct >= ex.min_reduction_pct,
            f"{report.reduction_pct:.2f}% of {report.n_reference} (limit {ex.min_reduction_pct}%)",
        ),
        Check("runtime", runtime <= ex.max_runtime_s, f"{runtime:.3f} s (limit {ex.max_runtime_s} s)"),
        Check(
            "solver",
            report.solution.converged,
            f"{report.solution.method}, {report.solution.iterations_used} steps, converged={report.solution.converged}",
        ),
    ]
    return checks
