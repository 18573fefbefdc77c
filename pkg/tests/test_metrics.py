import numpy as np
import pytest

from csarray.array_model import AngleGrid, Pattern, array_factor_symmetric
from csarray.metrics import (
    element_reduction,
    lobe_boundaries,
    pattern_deviation,
    pattern_metrics,
    peak_sidelobe_level,
)
from csarray.reference_patterns import ChebyshevSpec, chebyshev_excitations


@pytest.fixture(scope="module")
def cheb20():
    return chebyshev_excitations(ChebyshevSpec(20, -30.0))


def test_chebyshev_sidelobe_level(cheb20):
    sll = peak_sidelobe_level(array_factor_symmetric(cheb20, AngleGrid.uniform(2001)))
    assert abs(sll + 30.0) <= 0.1


def test_refining_grid_is_stable(cheb20):
    coarse = peak_sidelobe_level(array_factor_symmetric(cheb20, AngleGrid.uniform(2001)))
    fine = peak_sidelobe_level(array_factor_symmetric(cheb20, AngleGrid.uniform(4001)))
    assert abs(coarse - fine) <= 0.05


def test_mirror_grid_gives_same_metrics(cheb20):
    pos = array_factor_symmetric(cheb20, AngleGrid.uniform(1001, 0, 1))
    neg = array_factor_symmetric(cheb20, AngleGrid.uniform(1001, -1, 0))
    assert peak_sidelobe_level(pos) == pytest.approx(peak_sidelobe_level(neg), abs=1e-9)
    mp, mn = pattern_metrics(pos, pos), pattern_metrics(neg, neg)
    assert mp.n_lobes == mn.n_lobes
    assert mp.main_lobe_peak_u == -mn.main_lobe_peak_u


def test_equal_lobes_give_zero_db():
    grid = AngleGrid.uniform(401)
    pat = Pattern(grid, np.abs(np.cos(np.pi * grid.u_values)))
    assert peak_sidelobe_level(pat) == pytest.approx(0.0, abs=1e-12)


def test_no_sidelobes():
    grid = AngleGrid.uniform(101)
    with pytest.raises(ValueError, match="no sidelobe structure"):
        peak_sidelobe_level(Pattern(grid, 1.0 - grid.u_values))


def test_plateau_minimum_counted_once_at_left():
    a = np.array([3.0, 1.0, 1.0, 1.0, 2.0, 0.5, 4.0])
    np.testing.assert_array_equal(lobe_boundaries(a), [1, 5])


def test_deviation_identical_and_scaled(cheb20):
    pat = array_factor_symmetric(cheb20, AngleGrid.uniform(401))
    assert pattern_deviation(pat, pat) == (0.0, 0.0)
    rms, mx = pattern_deviation(pat, Pattern(pat.grid, 3 * pat.values))
    assert rms == pytest.approx(0.0, abs=1e-12)
    assert mx == pytest.approx(0.0, abs=1e-12)


def test_deviation_masks_below_floor():
    grid = AngleGrid([0.0, 0.5, 1.0])
    a = Pattern(grid, [1.0, 1e-4, 0.5])  # -80 dB sample is ignored
    b = Pattern(grid, [1.0, 0.5, 0.5])
    assert pattern_deviation(a, b) == (0.0, 0.0)


def test_deviation_grid_mismatch():
    a = Pattern(AngleGrid.uniform(5), np.ones(5))
    b = Pattern(AngleGrid.uniform(5, -1, 1), np.ones(5))
    with pytest.raises(ValueError):
        pattern_deviation(a, b)


@pytest.mark.parametrize("n_u, n_s, pct", [(20, 12, 40.0), (29, 18, 37.93103448275862), (7, 7, 0.0)])
def test_element_reduction(n_u, n_s, pct):
    assert element_reduction(n_u, n_s) == pytest.approx(pct, abs=1e-12)


def test_element_reduction_rounds_to_published():
    assert round(element_reduction(29, 18)) == 38


def test_element_reduction_errors():
    with pytest.raises(ValueError):
        element_reduction(10, 11)
