"""Target arrays: Dolph-Chebyshev weights and tabulated reference arrays."""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .array_model import SymmetricArray
from .tables import read_element_table


class UnknownFixtureError(KeyError):
    """Name is neither a built-in fixture nor an existing file."""


@dataclass(frozen=True)
class ChebyshevSpec:
    n_elements: int
    sll_db: float
    spacing: float = 0.5

    def __post_init__(self):
        if int(self.n_elements) != self.n_elements or self.n_elements < 2:
            raise ValueError("Chebyshev array needs n_elements >= 2")
        if not self.sll_db < 0:
            raise ValueError("sll_db must be negative")
        if not self.spacing > 0:
            raise ValueError("spacing must be positive")


def _chebyshev_poly(order: int, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    inner = np.abs(x) <= 1.0
    out[inner] = np.cos(order * np.arccos(x[inner]))
    big = ~inner
    sign = np.where(x[big] < 0, (-1.0) ** order, 1.0)
    out[big] = sign * np.cosh(order * np.arccosh(np.abs(x[big])))
    return out


def chebyshev_excitations(spec: ChebyshevSpec) -> SymmetricArray:
    """Dolph-Chebyshev half-array for a uniform array of ``spec.n_elements``.

    The pattern ``T_{N-1}(x0 cos(psi/2))`` is sampled at the N DFT frequencies
    and inverted; the element offsets from the array centre are
    ``n - (N-1)/2``, which keeps the inversion exact for both parities.

    Even N gives half positions ``spacing * (i - 1/2)``; odd N gives
    ``spacing * i`` starting at the centre. The stored centre excitation is
    half the physical centre weight, so that the doubled symmetric sum
    reproduces the Chebyshev pattern. Excitations are normalized to max 1.
    """
    N = int(spec.n_elements)
    ratio = 10.0 ** (-spec.sll_db / 20.0)
    x0 = np.cosh(np.arccosh(ratio) / (N - 1))

    psi = 2 * np.pi * np.arange(N) / N
    samples = _chebyshev_poly(N - 1, x0 * np.cos(psi / 2))
    offsets = np.arange(N) - (N - 1) / 2
    weights = (np.cos(np.outer(offsets, psi)) @ samples) / N

    half = weights[N // 2:].copy()
    if N % 2 == 1:
        positions = spec.spacing * np.arange(half.size)
        half[0] *= 0.5
    else:
        positions = spec.spacing * (np.arange(half.size) + 0.5)
    return SymmetricArray(positions, half / np.max(half))


# Literature element tables. Positions in wavelengths.
TAYLOR_KAISER_29 = (
    [0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0, 5.5, 6.0, 6.5, 7.0],
    [1.0, 0.99328, 0.97329, 0.94063, 0.89622, 0.84132, 0.77748, 0.70645,
     0.63017, 0.55065, 0.46994, 0.39004, 0.31282, 0.24001, 0.17309],
)
MATRIX_PENCIL_CHEBYSHEV20 = (
    [0.0, 0.8206, 1.6381, 2.4481, 3.2432, 4.0071, 4.7145],
    [1.0, 0.95818, 0.84113, 0.67176, 0.48115, 0.30046, 0.23345],
)
MATRIX_PENCIL_TAYLOR29 = (
    [0.0, 0.8831, 1.7652, 2.6451, 3.5211, 4.3905, 5.2485, 6.0842],
    [1.0, 0.97859, 0.91634, 0.81903, 0.69547, 0.55651, 0.4137, 0.27782],
)
CS_THINNED_CHEBYSHEV20 = (
    [0.4, 1.2, 2.0, 2.8, 3.6, 4.5],
    [1.0, 0.92947, 0.79514, 0.61428, 0.41719, 0.2409],
)
CS_THINNED_TAYLOR29 = (
    [0.4, 1.2, 2.0, 2.8, 3.6, 4.4, 5.2, 6.0, 6.8],
    [1.0, 0.96431, 0.89689, 0.8045, 0.69429, 0.57146, 0.43998, 0.30694, 0.18562],
)
# Half-wave pitch positions; excitations come from chebyshev_excitations.
CHEBYSHEV20_POSITIONS = [0.25, 0.75, 1.25, 1.75, 2.25, 2.75, 3.25, 3.75, 4.25, 4.75]


def taylor_kaiser_fixture() -> SymmetricArray:
    """The 29-element Taylor-Kaiser reference (15 half entries incl. centre)."""
    return SymmetricArray(*TAYLOR_KAISER_29)


@dataclass(frozen=True, eq=False)
class ReferenceFixture:
    name: str
    array: SymmetricArray
    source: str

    @property
    def half_elements(self):
        return self.array.half_elements


def _chebyshev20() -> SymmetricArray:
    array = chebyshev_excitations(ChebyshevSpec(20, -30.0, 0.5))
    return SymmetricArray(CHEBYSHEV20_POSITIONS, array.excitations)


_BUILTINS = {
    "chebyshev20": (
        _chebyshev20,
        "uniform half-wave array, Dolph-Chebyshev N=20 SLL=-30 dB excitations",
    ),
    "taylor_kaiser29": (
        taylor_kaiser_fixture,
        "29-element Taylor-Kaiser taper at half-wave pitch",
    ),
    "matrix_pencil_chebyshev20": (
        lambda: SymmetricArray(*MATRIX_PENCIL_CHEBYSHEV20),
        "matrix-pencil thinning of chebyshev20 (literature values)",
    ),
    "matrix_pencil_taylor29": (
        lambda: SymmetricArray(*MATRIX_PENCIL_TAYLOR29),
        "matrix-pencil thinning of taylor_kaiser29 (literature values)",
    ),
    "cs_thinned_chebyshev20": (
        lambda: SymmetricArray(*CS_THINNED_CHEBYSHEV20),
        "compressive-sensing thinning of chebyshev20 (literature values)",
    ),
    "cs_thinned_taylor29": (
        lambda: SymmetricArray(*CS_THINNED_TAYLOR29),
        "compressive-sensing thinning of taylor_kaiser29 (literature values)",
    ),
}

#: Literature comparison columns for each example target.
COMPARISON_COLUMNS = {
    "chebyshev20": ("matrix_pencil_chebyshev20", "cs_thinned_chebyshev20"),
    "taylor_kaiser29": ("matrix_pencil_taylor29", "cs_thinned_taylor29"),
}


def builtin_fixture_names() -> list[str]:
    return sorted(_BUILTINS)


def load_fixture(name_or_path: str | os.PathLike) -> ReferenceFixture:
    """Return a built-in fixture by name, or read an element-table file.

    Raises
    ------
    UnknownFixtureError
        The argument names no built-in and does not look like a path.
    csarray.tables.TableReadError
        The file is missing or cannot be read.
    csarray.tables.MalformedTableError
        A line of the file does not parse.
    """
    key = str(name_or_path)
    if key in _BUILTINS:
        factory, source = _BUILTINS[key]
        return ReferenceFixture(key, factory(), source)
    path = Path(key)
    looks_like_path = bool(path.suffix) or os.sep in key
    if not path.exists() and not looks_like_path:
        raise UnknownFixtureError(
            f"unknown fixture {key!r}; built-ins are {', '.join(builtin_fixture_names())}"
        )
    return ReferenceFixture(path.stem, read_element_table(path), str(path))
