"""Pattern quality figures: sidelobe level, dB deviation, element savings."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .array_model import Pattern, to_db


@dataclass(frozen=True)
class PatternMetrics:
    peak_sidelobe_db: float
    main_lobe_peak_u: float
    rmse_db: float
    max_dev_db: float
    n_lobes: int


def lobe_boundaries(values) -> np.ndarray:
    """Indices of the local minima of ``|values|`` that separate lobes.

    A flat minimum counts once, at its leftmost index. End points are never
    boundaries.
    """
    a = np.abs(np.asarray(values, dtype=float))
    # collapse runs of equal values; keep the first index of each run
    starts = np.flatnonzero(np.r_[True, np.diff(a) != 0])
    b = a[starts]
    if b.size < 3:
        return np.zeros(0, dtype=int)
    is_min = (b[1:-1] < b[:-2]) & (b[1:-1] < b[2:])
    return starts[1:-1][is_min]


def _lobes(pattern: Pattern):
    a = np.abs(pattern.values)
    cuts = lobe_boundaries(a)
    edges = np.r_[0, cuts, a.size - 1]
    peak_idx = int(np.argmax(a))
    # main lobe: between the nearest boundaries around the global peak
    left = cuts[cuts < peak_idx]
    right = cuts[cuts > peak_idx]
    lo = int(left[-1]) if left.size else 0
    hi = int(right[0]) if right.size else a.size - 1
    return a, edges, peak_idx, lo, hi


def sidelobe_peaks(pattern: Pattern) -> list[tuple[float, float]]:
    """``(u, level_db)`` of the maximum of every lobe except the main lobe."""
    a, edges, peak_idx, lo, hi = _lobes(pattern)
    db = to_db(pattern)
    out = []
    for start, stop in zip(edges[:-1], edges[1:]):
        if start == lo and stop == hi:
            continue
        seg = slice(start, stop + 1)
        k = start + int(np.argmax(a[seg]))
        out.append((float(pattern.grid.u_values[k]), float(db[k])))
    return out


def peak_sidelobe_level(pattern: Pattern) -> float:
    """Level in dB of the highest lobe outside the main lobe.

    Lobes are the runs between adjacent local minima of ``|F|``; the main
    lobe is the one holding the global peak.

    Raises
    ------
    ValueError
        ``"no sidelobe structure"`` when the pattern has no local minimum,
        i.e. it is monotone or a single lobe.
    """
    a, edges, peak_idx, lo, hi = _lobes(pattern)
    outside = np.r_[a[:lo], a[hi + 1:]]
    if lo == 0 and hi == a.size - 1 or outside.size == 0:
        raise ValueError("no sidelobe structure")
    peak = a[peak_idx]
    if peak == 0:
        raise ValueError("degenerate pattern")
    level = np.max(outside) / peak
    return float(20 * np.log10(level)) if level > 0 else float("-inf")


def pattern_deviation(a: Pattern, b: Pattern, floor_db: float = -50.0) -> tuple[float, float]:
    """RMS and maximum |dB difference| where the reference ``a`` is above ``floor_db``."""
    if a.grid != b.grid:
        raise ValueError("patterns are sampled on different grids")
    da, dbb = to_db(a), to_db(b)
    mask = da >= floor_db
    if not mask.any():
        return 0.0, 0.0
    diff = np.abs(da[mask] - dbb[mask])
    return float(np.sqrt(np.mean(diff ** 2))), float(diff.max())


def element_reduction(n_uniform: int, n_sparse: int) -> float:
    """Percentage of elements saved, ``100 (n_uniform - n_sparse) / n_uniform``."""
    if n_sparse < 1 or n_uniform < 1:
        raise ValueError("element counts must be positive")
    if n_sparse > n_uniform:
        raise ValueError("sparse array has more elements than the uniform array")
    return 100.0 * (n_uniform - n_sparse) / n_uniform


def pattern_metrics(target: Pattern, candidate: Pattern, floor_db: float = -50.0) -> PatternMetrics:
    rmse, maxdev = pattern_deviation(target, candidate, floor_db)
    a, edges, peak_idx, lo, hi = _lobes(candidate)
    return PatternMetrics(
        peak_sidelobe_db=peak_sidelobe_level(candidate),
        main_lobe_peak_u=float(candidate.grid.u_values[peak_idx]),
        rmse_db=rmse,
        max_dev_db=maxdev,
        n_lobes=int(edges.size - 1),
    )
