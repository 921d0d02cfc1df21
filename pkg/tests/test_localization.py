import dataclasses
import math

import numpy as np
import pytest

from atomloc.localization import (
    GridSpec,
    LocalizationMap,
    UnknownParameterError,
    chi_imag,
    find_peaks,
    scan,
    sweep,
)
from atomloc.model import PhysParams, linear_response_state


def synthetic_map(values, grid=None):
    grid = grid or GridSpec(nx=values.shape[1], ny=values.shape[0])
    return LocalizationMap(grid=grid, values=np.asarray(values, dtype=float),
                           params=PhysParams())


# ---------------------------------------------------------------------------
# GridSpec

def test_gridspec_validation():
    with pytest.raises(ValueError):
        GridSpec(nx=2)
    with pytest.raises(ValueError):
        GridSpec(x_min=0.5, x_max=-0.5)
    grid = GridSpec()
    assert grid.nx == grid.ny == 201
    assert grid.xs()[0] == -0.5 and grid.xs()[-1] == 0.5


# ---------------------------------------------------------------------------
# chi_imag

def test_chi_imag_direct_ratio():
    params = PhysParams(omega_p0=0.01)
    rho = np.zeros((3, 3), dtype=complex)
    rho[0, 1] = 0.01j
    assert chi_imag(params, rho) == pytest.approx(1.0, abs=1e-15)
    doubled = dataclasses.replace(params, alpha_scale=2.0)
    assert chi_imag(doubled, rho) == pytest.approx(2.0, abs=1e-15)


def test_chi_imag_two_level_limit():
    params = PhysParams(delta_p=0.0, omega_c0=0.0, theta=math.pi / 2)
    rho = linear_response_state(params, 0.0)
    assert chi_imag(params, rho) == pytest.approx(-1.0, abs=1e-12)


# ---------------------------------------------------------------------------
# scan

def test_scan_swap_symmetry():
    # p = 0, equal wave numbers, zero phases: the map is symmetric in x <-> y
    params = PhysParams(theta=math.pi / 2, delta_p=21.0)
    lmap = scan(params, GridSpec(nx=41, ny=41))
    assert np.abs(lmap.values - lmap.values.T).max() < 1e-9


def test_scan_parity_symmetry():
    params = PhysParams(theta=math.pi / 2, delta_p=21.0)
    lmap = scan(params, GridSpec(nx=41, ny=41))
    assert np.abs(lmap.values - lmap.values[::-1, ::-1]).max() < 1e-9


def test_scan_constant_without_field():
    params = PhysParams(omega_c0=0.0, delta_p=3.0)
    lmap = scan(params, GridSpec(nx=11, ny=11))
    assert np.ptp(lmap.values) == 0.0
    assert lmap.values[0, 0] == pytest.approx(-1.0 / (1.0 + 9.0), abs=1e-12)


def test_scan_layout_row_major_y_outer():
    params = PhysParams(delta_p=21.0, eta_phase=0.3)
    grid = GridSpec(nx=5, ny=4)
    lmap = scan(params, grid)
    assert lmap.values.shape == (4, 5)
    from atomloc.model import rabi_at, susceptibility_imag

    x = grid.xs()[3]
    y = grid.ys()[2]
    expected = susceptibility_imag(params, float(rabi_at(params, x, y)))
    assert lmap.values[2, 3] == pytest.approx(expected, abs=1e-12)


# ---------------------------------------------------------------------------
# find_peaks

def test_find_peaks_single_bump():
    grid = GridSpec(nx=41, ny=41)
    xs, ys = np.meshgrid(grid.xs(), grid.ys())
    values = np.exp(-((xs - 0.25) ** 2 + (ys - 0.25) ** 2) / 0.01)
    report = find_peaks(synthetic_map(values, grid))
    assert len(report.entries) == 1
    peak = report.entries[0]
    assert peak.quadrant == "I"
    assert peak.x == pytest.approx(0.25, abs=0.025)
    assert peak.y == pytest.approx(0.25, abs=0.025)
    assert peak.magnitude == pytest.approx(1.0, rel=1e-6)


def test_find_peaks_constant_map_empty():
    report = find_peaks(synthetic_map(np.full((9, 9), 0.5)))
    assert report.entries == ()


def test_find_peaks_magnitude_uses_absolute_value():
    grid = GridSpec(nx=21, ny=21)
    xs, ys = np.meshgrid(grid.xs(), grid.ys())
    values = -np.exp(-((xs - 0.25) ** 2 + (ys - 0.25) ** 2) / 0.01)
    report = find_peaks(synthetic_map(values, grid))
    assert len(report.entries) == 1
    assert report.entries[0].value < 0
    assert report.entries[0].magnitude == -report.entries[0].value


def test_find_peaks_axis_exclusion():
    grid = GridSpec(nx=41, ny=41)
    xs, ys = np.meshgrid(grid.xs(), grid.ys())
    on_axis = np.exp(-((xs - 0.25) ** 2 + ys**2) / 0.005)  # centred at y = 0
    report = find_peaks(synthetic_map(on_axis, grid))
    assert report.entries == ()
    # widening the band the other way keeps it
    report = find_peaks(synthetic_map(on_axis, grid), axis_exclusion=-1.0)
    assert len(report.entries) == 1


def test_find_peaks_sorting_and_tie_break():
    values = np.zeros((11, 11))
    values[2, 7] = 1.0   # quadrant IV area (y below axis), earlier row
    values[7, 2] = 1.0   # same magnitude, later row -> after in ties
    values[8, 8] = 2.0   # strongest
    report = find_peaks(synthetic_map(values))
    mags = [e.magnitude for e in report.entries]
    assert mags == sorted(mags, reverse=True)
    assert (report.entries[0].iy, report.entries[0].ix) == (8, 8)
    assert (report.entries[1].iy, report.entries[1].ix) == (2, 7)
    assert (report.entries[2].iy, report.entries[2].ix) == (7, 2)


def test_find_peaks_border_cells_never_qualify():
    values = np.zeros((9, 9))
    values[0, 4] = 5.0
    values[4, 8] = 5.0
    report = find_peaks(synthetic_map(values))
    assert report.entries == ()


def test_quadrant_classification():
    grid = GridSpec(nx=21, ny=21)
    values = np.zeros((21, 21))
    spots = {(15, 15): "I", (15, 5): "II", (5, 5): "III", (5, 15): "IV"}
    for (iy, ix) in spots:
        values[iy, ix] = 1.0
    report = find_peaks(synthetic_map(values, grid))
    got = {(e.iy, e.ix): e.quadrant for e in report.entries}
    assert got == spots


# ---------------------------------------------------------------------------
# physics maps

def test_detuning_family_peak_locations_and_parity():
    # strong-coupling detuned map: twin spikes at the field extremes
    params = PhysParams(delta_p=21.0, delta_c=0.0, omega_c0=10.0,
                        omega_p0=0.01, theta=math.pi / 2)
    lmap = scan(params, GridSpec(nx=81, ny=81))
    report = find_peaks(lmap)
    top_two = report.entries[:2]
    assert {e.quadrant for e in top_two} == {"I", "III"}
    assert abs(top_two[0].magnitude - top_two[1].magnitude) < 1e-6
    by_quadrant = {e.quadrant: e for e in top_two}
    assert (by_quadrant["I"].x, by_quadrant["I"].y) == (0.25, 0.25)
    assert (by_quadrant["III"].x, by_quadrant["III"].y) == (-0.25, -0.25)


def test_quadrant_magnitude_multisets_match_at_p_zero():
    params = PhysParams(delta_p=21.0, delta_c=0.0, omega_c0=10.0,
                        omega_p0=0.01, theta=math.pi / 2)
    report = find_peaks(scan(params, GridSpec(nx=81, ny=81)))
    mags_i = sorted(e.magnitude for e in report.in_quadrant("I"))
    mags_iii = sorted(e.magnitude for e in report.in_quadrant("III"))
    assert len(mags_i) == len(mags_iii)
    for a, b in zip(mags_i, mags_iii):
        assert abs(a - b) < 1e-6


def test_interference_breaks_quadrant_symmetry():
    # nonzero p makes the coupling-sign parity map onto -p, so the two
    # field-extreme quadrants must split by far more than solver noise
    params = PhysParams(delta_p=30.0, delta_c=15.0, omega_c0=10.0,
                        omega_p0=0.1, eta_phase=math.pi / 12,
                        theta=math.pi / 2.5)
    report = find_peaks(scan(params, GridSpec(nx=81, ny=81)))
    peak_i = report.strongest("I")
    peak_iii = report.strongest("III")
    assert abs(peak_i.value - peak_iii.value) > 1e-8  # 10x solver tolerance


def test_grid_refinement_stability():
    params = PhysParams(delta_p=21.0, delta_c=0.0, omega_c0=10.0,
                        omega_p0=0.01, theta=math.pi / 2)
    coarse = find_peaks(scan(params, GridSpec(nx=101, ny=101)))
    fine = find_peaks(scan(params, GridSpec(nx=201, ny=201)))
    coarse_cell = 1.0 / 100.0
    for quadrant in ("I", "III"):
        a = coarse.strongest(quadrant)
        b = fine.strongest(quadrant)
        assert abs(a.x - b.x) <= coarse_cell + 1e-12
        assert abs(a.y - b.y) <= coarse_cell + 1e-12
        assert abs(a.magnitude - b.magnitude) < 0.01 * a.magnitude


def test_scan_periodicity():
    params = PhysParams(delta_p=21.0)
    base = scan(params, GridSpec(nx=31, ny=31))
    shifted = scan(params, GridSpec(x_min=0.5, x_max=1.5, nx=31, ny=31))
    assert np.abs(base.values - shifted.values).max() < 1e-9


def test_scan_alpha_linearity_and_argmax_invariance():
    params = PhysParams(delta_p=30.0, delta_c=15.0, theta=1.3, omega_p0=0.1)
    grid = GridSpec(nx=31, ny=31)
    base = scan(params, grid)
    scaled = scan(dataclasses.replace(params, alpha_scale=4.0), grid)
    assert np.abs(scaled.values - 4.0 * base.values).max() < 1e-9
    assert np.argmax(np.abs(scaled.values)) == np.argmax(np.abs(base.values))


# ---------------------------------------------------------------------------
# sweep

def test_sweep_singleton_matches_scan():
    params = PhysParams(delta_p=21.0)
    grid = GridSpec(nx=21, ny=21)
    results = sweep(params, grid, "delta_p", [21.0])
    assert len(results) == 1
    direct = scan(params, grid)
    assert np.array_equal(results[0].map.values, direct.values)
    assert results[0].value == 21.0


def test_sweep_order_and_parameter_binding():
    params = PhysParams()
    grid = GridSpec(nx=15, ny=15)
    values = [21.0, 30.0, 40.0]
    results = sweep(params, grid, "delta_p", values)
    assert [r.value for r in results] == values
    for r, v in zip(results, values):
        assert r.map.params.delta_p == v
        assert r.map.params.omega_c0 == params.omega_c0


def test_sweep_theta_changes_interference():
    params = PhysParams(delta_p=30.0, delta_c=15.0, omega_p0=0.1,
                        eta_phase=math.pi / 12)
    grid = GridSpec(nx=21, ny=21)
    r1, r2 = sweep(params, grid, "theta", [math.pi / 2.1, math.pi / 2.7])
    assert np.abs(r1.map.values - r2.map.values).max() > 1e-3


def test_sweep_unknown_parameter():
    with pytest.raises(UnknownParameterError):
        sweep(PhysParams(), GridSpec(nx=5, ny=5), "omega_c0", [1.0])


def test_sweep_empty_values():
    with pytest.raises(ValueError):
        sweep(PhysParams(), GridSpec(nx=5, ny=5), "delta_p", [])


def test_scan_attaches_position_to_singular_failure(monkeypatch):
    # the steady-state operator is nonsingular for gamma > 0, so force a
    # failure to check that the offending grid point is attached
    from atomloc import localization as loc
    from atomloc.numerics import SingularMatrixError

    grid = GridSpec(nx=5, ny=7)
    flat_index = 3 * grid.nx + 2  # row j=3, column i=2

    def fail(params, omega_c_values):
        raise SingularMatrixError("pivot below threshold", flat_index)

    monkeypatch.setattr(loc.model, "susceptibility_imag_grid", fail)
    with pytest.raises(SingularMatrixError) as err:
        loc.scan(PhysParams(), grid)
    assert err.value.args[1] == pytest.approx(grid.xs()[2])
    assert err.value.args[2] == pytest.approx(grid.ys()[3])
