"""Linear array geometry and array-factor evaluation.

Positions are always in wavelengths, so the free-space phase ``k d cos(theta)``
is evaluated as ``2*pi*d*u`` with ``u = cos(theta)``. Elements are isotropic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

#: Reporting floor for normalized dB values.
DB_FLOOR = -120.0


class ArrayModelError(ValueError):
    """Invalid array, grid or pattern."""


def _frozen(values, dtype=float) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class ElementPlacement:
    """One element: position (wavelengths), real excitation and phase (rad)."""

    position: float
    excitation: float
    phase: float = 0.0

    def __post_init__(self):
        if not np.isfinite(self.excitation):
            raise ArrayModelError("invalid excitation")
        if not np.isfinite(self.position):
            raise ArrayModelError("invalid position")
        # wrap into [-pi, pi)
        wrapped = (float(self.phase) + np.pi) % (2 * np.pi) - np.pi
        object.__setattr__(self, "phase", wrapped)

    @property
    def coefficient(self) -> complex:
        return self.excitation * np.exp(1j * self.phase)


@dataclass(frozen=True, eq=False)
class SymmetricArray:
    """Half of an array that is mirrored about the origin.

    ``has_center_element`` is derived: it is true iff the first position is 0.
    Under the doubled-sum pattern convention the centre element still
    contributes ``2 * R`` to the array factor; only the physical element
    count treats it as a single element.
    """

    positions: np.ndarray
    excitations: np.ndarray

    def __init__(self, positions: Iterable[float], excitations: Iterable[float]):
        pos = np.asarray(list(positions), dtype=float)
        exc = np.asarray(list(excitations), dtype=float)
        if pos.ndim != 1 or pos.shape != exc.shape:
            raise ArrayModelError("positions and excitations must be 1-D and equal length")
        if pos.size == 0:
            raise ArrayModelError("no elements")
        if not np.all(np.isfinite(exc)):
            raise ArrayModelError("invalid excitation")
        if not np.all(np.isfinite(pos)) or np.any(pos < 0):
            raise ArrayModelError("half-array positions must be finite and >= 0")
        if np.any(np.diff(pos) <= 0):
            raise ArrayModelError("half-array positions must be strictly increasing")
        object.__setattr__(self, "positions", _frozen(pos))
        object.__setattr__(self, "excitations", _frozen(exc))

    @classmethod
    def from_placements(cls, placements: Sequence[ElementPlacement]) -> "SymmetricArray":
        return cls([p.position for p in placements], [p.excitation for p in placements])

    @property
    def has_center_element(self) -> bool:
        return bool(self.positions[0] == 0.0)

    @property
    def half_elements(self) -> list[ElementPlacement]:
        return [ElementPlacement(float(d), float(r)) for d, r in zip(self.positions, self.excitations)]

    @property
    def n_half(self) -> int:
        return int(self.positions.size)

    @property
    def n_physical(self) -> int:
        return 2 * self.n_half - int(self.has_center_element)

    def scaled(self, factor: float) -> "SymmetricArray":
        return SymmetricArray(self.positions, factor * self.excitations)

    def normalized(self) -> "SymmetricArray":
        peak = np.max(np.abs(self.excitations))
        if peak == 0:
            raise ArrayModelError("cannot normalize an all-zero array")
        return self.scaled(1.0 / peak)

    def mirrored(self) -> list[ElementPlacement]:
        """Explicit full element list with signed positions.

        A centre element becomes one element carrying ``2 * R`` so that the
        full sum reproduces the doubled symmetric form exactly.
        """
        out = []
        for d, r in zip(self.positions[::-1], self.excitations[::-1]):
            if d > 0:
                out.append(ElementPlacement(-float(d), float(r)))
        for d, r in zip(self.positions, self.excitations):
            if d == 0:
                out.append(ElementPlacement(0.0, 2.0 * float(r)))
            else:
                out.append(ElementPlacement(float(d), float(r)))
        return out


@dataclass(frozen=True)
class AngleGrid:
    """Strictly increasing samples of ``u = cos(theta)`` in [-1, 1]."""

    u_values: np.ndarray

    def __init__(self, u_values: Iterable[float]):
        u = np.asarray(list(u_values), dtype=float)
        if u.ndim != 1 or u.size < 2:
            raise ArrayModelError("angle grid needs at least 2 samples")
        if np.any(~np.isfinite(u)) or np.any(np.abs(u) > 1.0):
            raise ArrayModelError("u values must lie in [-1, 1]")
        if np.any(np.diff(u) <= 0):
            raise ArrayModelError("u values must be strictly increasing")
        object.__setattr__(self, "u_values", _frozen(u))

    @classmethod
    def uniform(cls, m: int = 401, u_min: float = 0.0, u_max: float = 1.0) -> "AngleGrid":
        return cls(np.linspace(u_min, u_max, int(m)))

    @property
    def m(self) -> int:
        return int(self.u_values.size)

    @property
    def theta_deg(self) -> np.ndarray:
        return np.degrees(np.arccos(self.u_values))

    def __eq__(self, other):
        return isinstance(other, AngleGrid) and np.array_equal(self.u_values, other.u_values)

    __hash__ = None


@dataclass(frozen=True, eq=False)
class Pattern:
    """Real array-factor samples on an :class:`AngleGrid`."""

    grid: AngleGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (self.grid.m,):
            raise ArrayModelError("pattern length does not match grid")
        object.__setattr__(self, "values", _frozen(vals))

    @property
    def peak(self) -> float:
        return float(np.max(np.abs(self.values)))

    @property
    def db(self) -> np.ndarray:
        return to_db(self)


def _check_placements(elements: Sequence[ElementPlacement]):
    if len(elements) == 0:
        raise ArrayModelError("no elements")
    for el in elements:
        if not np.isfinite(el.excitation):
            raise ArrayModelError("invalid excitation")


def array_factor_full(elements: Sequence[ElementPlacement], grid: AngleGrid) -> Pattern:
    """Array factor ``sum_i R_i exp(j 2 pi d_i u)`` of an arbitrary linear array.

    Parameters
    ----------
    elements : sequence of ElementPlacement
        Elements with signed positions in wavelengths.
    grid : AngleGrid
        Sample directions.

    Returns
    -------
    Pattern
        The real part of the sum when the imaginary part is negligible
        (as for symmetric real arrays); otherwise the magnitude ``|F|``.
    """
    _check_placements(elements)
    pos = np.array([e.position for e in elements])
    coef = np.array([e.coefficient for e in elements])
    F = np.exp(2j * np.pi * np.outer(grid.u_values, pos)) @ coef
    # sum |R_i| bounds |F| and sets the rounding scale of the imaginary part
    scale = np.sum(np.abs(coef))
    if np.max(np.abs(F.imag)) <= 1e-12 * scale:
        return Pattern(grid, F.real)
    return Pattern(grid, np.abs(F))


def array_factor_symmetric(array: SymmetricArray, grid: AngleGrid) -> Pattern:
    """Array factor ``2 sum_i R_i cos(2 pi d_i u)`` of a symmetric array."""
    phase = 2 * np.pi * np.outer(grid.u_values, array.positions)
    return Pattern(grid, 2.0 * np.cos(phase) @ array.excitations)


def to_db(pattern: Pattern, floor_db: float = DB_FLOOR) -> np.ndarray:
    """Normalized pattern ``20 log10(|F| / peak)``, clamped below at ``floor_db``."""
    peak = pattern.peak
    if not peak > 0:
        raise ArrayModelError("degenerate pattern")
    mag = np.abs(pattern.values) / peak
    with np.errstate(divide="ignore"):
        out = 20.0 * np.log10(mag)
    return np.maximum(out, floor_db)
