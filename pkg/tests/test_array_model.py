import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from csarray.array_model import (
    DB_FLOOR,
    AngleGrid,
    ArrayModelError,
    ElementPlacement,
    Pattern,
    SymmetricArray,
    array_factor_full,
    array_factor_symmetric,
    to_db,
)
from csarray.reference_patterns import TAYLOR_KAISER_29

U0 = AngleGrid([0.0, 1.0])


def test_single_element_at_origin_is_flat():
    grid = AngleGrid.uniform(11, -1, 1)
    F = array_factor_full([ElementPlacement(0.0, 1.0)], grid)
    np.testing.assert_allclose(F.values, 1.0)


def test_quarter_wave_pair():
    els = [ElementPlacement(-0.25, 1.0), ElementPlacement(0.25, 1.0)]
    F = array_factor_full(els, U0)
    assert F.values[0] == pytest.approx(2.0)
    assert F.values[1] == pytest.approx(0.0, abs=1e-15)


def test_symmetric_quarter_wave():
    F = array_factor_symmetric(SymmetricArray([0.25], [1.0]), U0)
    assert F.values[0] == 2.0
    assert F.values[1] == pytest.approx(0.0, abs=1e-15)


def test_taylor_table_broadside_sum():
    grid = AngleGrid([0.0, 0.5])
    arr = SymmetricArray(*TAYLOR_KAISER_29)
    F = array_factor_symmetric(arr, grid)
    # 2 * sum of the 15 tabulated excitations
    assert F.values[0] == pytest.approx(2 * 9.89539, abs=1e-12)


def test_full_array_errors():
    with pytest.raises(ArrayModelError, match="no elements"):
        array_factor_full([], U0)
    with pytest.raises(ArrayModelError, match="invalid excitation"):
        ElementPlacement(0.1, float("nan"))
    with pytest.raises(ArrayModelError, match="no elements"):
        SymmetricArray([], [])


def test_asymmetric_array_returns_magnitude():
    els = [ElementPlacement(0.0, 1.0), ElementPlacement(0.5, 1.0)]
    grid = AngleGrid.uniform(5)
    F = array_factor_full(els, grid)
    expected = np.abs(1 + np.exp(1j * np.pi * grid.u_values))
    np.testing.assert_allclose(F.values, expected, atol=1e-14)


def test_phase_wraps_into_half_open_interval():
    assert ElementPlacement(0.0, 1.0, np.pi).phase == pytest.approx(-np.pi)
    assert ElementPlacement(0.0, 1.0, 3 * np.pi / 2).phase == pytest.approx(-np.pi / 2)


def test_symmetric_array_validation():
    with pytest.raises(ArrayModelError):
        SymmetricArray([0.5, 0.5], [1, 1])
    with pytest.raises(ArrayModelError):
        SymmetricArray([-0.5], [1])
    with pytest.raises(ArrayModelError):
        SymmetricArray([0.5], [np.inf])


def test_physical_count_and_centre():
    assert SymmetricArray([0.0, 0.5, 1.0], [1, 1, 1]).n_physical == 5
    assert SymmetricArray([0.25, 0.75], [1, 1]).n_physical == 4
    assert SymmetricArray(*TAYLOR_KAISER_29).n_physical == 29


def test_arrays_are_immutable():
    arr = SymmetricArray([0.25], [1.0])
    with pytest.raises(ValueError):
        arr.excitations[0] = 2.0


def test_angle_grid_validation():
    with pytest.raises(ArrayModelError):
        AngleGrid([0.0])
    with pytest.raises(ArrayModelError):
        AngleGrid([0.0, 1.5])
    with pytest.raises(ArrayModelError):
        AngleGrid([0.5, 0.2])
    g = AngleGrid.uniform(3)
    np.testing.assert_allclose(g.theta_deg, [90.0, 60.0, 0.0])


@pytest.mark.parametrize(
    "values, expected",
    [
        ([1, 1, 1], [0, 0, 0]),
        ([1, 0.1], [0, -20]),
        ([2, 1, 0], [0, -6.020599913279624, DB_FLOOR]),
    ],
)
def test_to_db(values, expected):
    grid = AngleGrid(np.linspace(0, 1, len(values)))
    np.testing.assert_allclose(to_db(Pattern(grid, values)), expected, atol=1e-12)


def test_to_db_degenerate():
    with pytest.raises(ArrayModelError, match="degenerate pattern"):
        to_db(Pattern(U0, [0.0, 0.0]))


half_arrays = st.integers(1, 12).flatmap(
    lambda n: st.tuples(
        st.lists(st.floats(0.0, 10.0), min_size=n, max_size=n, unique=True),
        st.lists(st.floats(0.0, 1.0), min_size=n, max_size=n),
    )
)


def _make(pair):
    pos, exc = pair
    order = np.argsort(pos)
    return SymmetricArray(np.asarray(pos)[order], np.asarray(exc)[order])


@settings(max_examples=100, deadline=None)
@given(half_arrays)
def test_symmetric_equals_mirrored_full(pair):
    arr = _make(pair)
    grid = AngleGrid.uniform(64, -1, 1)
    sym = array_factor_symmetric(arr, grid).values
    full = array_factor_full(arr.mirrored(), grid).values
    scale = 2 * np.abs(arr.excitations).sum() + 1e-300
    np.testing.assert_allclose(sym, full, rtol=1e-12, atol=1e-12 * scale)


@settings(max_examples=50, deadline=None)
@given(half_arrays, st.floats(0.01, 100.0))
def test_even_and_linear(pair, a):
    arr = _make(pair)
    grid = AngleGrid.uniform(33, -1, 1)
    F = array_factor_symmetric(arr, grid).values
    np.testing.assert_allclose(F, F[::-1], rtol=1e-12, atol=1e-12 * (np.abs(F).max() + 1e-300))
    Fa = array_factor_symmetric(arr.scaled(a), grid).values
    np.testing.assert_allclose(Fa, a * F, rtol=1e-12, atol=1e-12 * a * (np.abs(F).max() + 1e-300))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-5, 5).filter(lambda v: abs(v) > 1e-3), min_size=2, max_size=50))
def test_db_max_is_zero(values):
    grid = AngleGrid(np.linspace(-1, 1, len(values)))
    assert to_db(Pattern(grid, values)).max() == 0.0
