import json
import math

import numpy as np
import pytest

from atomloc.fileio import (
    ConfigParseError,
    ConfigValidationError,
    config_from_dict,
    load_config,
    write_csv,
    write_map_json,
    write_peaks_json,
    write_pgm,
)
from atomloc.localization import GridSpec, LocalizationMap, find_peaks
from atomloc.model import PhysParams, sgc_p


def make_map(values, grid=None):
    values = np.asarray(values, dtype=float)
    grid = grid or GridSpec(nx=values.shape[1], ny=values.shape[0])
    return LocalizationMap(grid=grid, values=values, params=PhysParams())


# ---------------------------------------------------------------------------
# config

def test_empty_config_is_full_default():
    config = config_from_dict({})
    assert config.params == PhysParams()
    assert config.grid == GridSpec()
    assert config.formats == ("csv",)
    assert config.sweep is None
    # the documented baseline values
    p = config.params
    assert (p.gamma, p.omega_p0, p.omega_c0) == (1.0, 0.01, 10.0)
    assert p.theta == math.pi / 2
    assert (p.delta_phase, p.eta_phase) == (0.0, 0.0)
    assert p.kappa1 == p.kappa2 == 2 * math.pi
    assert p.alpha_scale == 1.0
    assert (config.grid.x_min, config.grid.x_max) == (-0.5, 0.5)
    assert config.grid.nx == config.grid.ny == 201


def test_theta_override_sets_interference():
    config = config_from_dict({"theta": 1.4959965})
    assert sgc_p(config.params) == pytest.approx(0.0747, abs=1e-4)


def test_invalid_grid_rejected():
    with pytest.raises(ConfigValidationError, match="nx"):
        config_from_dict({"grid": {"nx": 2}})


def test_unknown_keys_rejected():
    with pytest.raises(ConfigValidationError, match="delta_q"):
        config_from_dict({"delta_q": 1.0})
    with pytest.raises(ConfigValidationError, match="grid"):
        config_from_dict({"grid": {"x_mid": 0.0}})


def test_bad_values_rejected():
    with pytest.raises(ConfigValidationError):
        config_from_dict({"gamma": "one"})
    with pytest.raises(ConfigValidationError):
        config_from_dict({"gamma": -1.0})
    with pytest.raises(ConfigValidationError):
        config_from_dict({"formats": []})
    with pytest.raises(ConfigValidationError):
        config_from_dict({"formats": ["bmp"]})
    with pytest.raises(ConfigValidationError):
        config_from_dict({"sweep": {"param": "delta_p"}})


def test_sweep_entry_parsed():
    config = config_from_dict(
        {"sweep": {"param": "delta_p", "values": [21, 30.0, 40]}})
    assert config.sweep == ("delta_p", [21.0, 30.0, 40.0])


def test_load_config_parse_error_has_location(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{\n "gamma": 1.0,\n}\n')
    with pytest.raises(ConfigParseError, match="line 3"):
        load_config(path)


def test_load_config_roundtrip(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"delta_p": 30.0, "grid": {"nx": 11, "ny": 13},
                                "formats": ["csv", "pgm"]}))
    config = load_config(path)
    assert config.params.delta_p == 30.0
    assert (config.grid.nx, config.grid.ny) == (11, 13)
    assert config.formats == ("csv", "pgm")


# ---------------------------------------------------------------------------
# CSV

def test_csv_line_count_and_header(tmp_path):
    path = tmp_path / "map.csv"
    write_csv(make_map(np.zeros((3, 3))), path)
    lines = path.read_text().splitlines()
    assert len(lines) == 10
    assert lines[0] == "x,y,chi_im"


def test_csv_constant_formatting(tmp_path):
    path = tmp_path / "map.csv"
    write_csv(make_map(np.full((3, 3), 0.5)), path)
    for line in path.read_text().splitlines()[1:]:
        assert line.endswith(",0.500000000")


def test_csv_row_major_order_and_roundtrip(tmp_path):
    rng = np.random.default_rng(0)
    values = rng.standard_normal((4, 6))
    grid = GridSpec(nx=6, ny=4)
    path = tmp_path / "map.csv"
    write_csv(make_map(values, grid), path)
    rows = [line.split(",") for line in path.read_text().splitlines()[1:]]
    assert len(rows) == 24
    xs = grid.xs()
    ys = grid.ys()
    k = 0
    for j in range(4):
        for i in range(6):
            x, y, v = (float(c) for c in rows[k])
            assert x == pytest.approx(xs[i], abs=1e-8)
            assert y == pytest.approx(ys[j], abs=1e-8)
            assert v == pytest.approx(values[j, i], rel=1e-8)
            k += 1


# ---------------------------------------------------------------------------
# PGM

def _parse_pgm(data: bytes):
    magic, dims, maxval, rest = data.split(b"\n", 3)
    nx, ny = (int(t) for t in dims.split())
    assert magic == b"P5" and int(maxval) == 65535
    pixels = np.frombuffer(rest, dtype=">u2").reshape(ny, nx)
    return pixels


def test_pgm_constant_is_mid_grey(tmp_path):
    path = tmp_path / "map.pgm"
    write_pgm(make_map(np.full((5, 7), 1.25)), path)
    pixels = _parse_pgm(path.read_bytes())
    assert pixels.shape == (5, 7)
    assert (pixels == 32768).all()


def test_pgm_two_level_map_hits_endpoints(tmp_path):
    values = np.zeros((4, 4))
    values[1, 2] = 1.0
    path = tmp_path / "map.pgm"
    write_pgm(make_map(values), path)
    pixels = _parse_pgm(path.read_bytes())
    assert set(np.unique(pixels)) == {0, 65535}


def test_pgm_detuned_map_extreme_pixels_in_quadrants_I_and_III(tmp_path):
    # the far-detuned twin-spike map renders with its darkest pixels at the
    # two field extremes (quadrants I and III); the brightest level is the
    # near-zero-coupling background, which also touches those quadrants
    import math

    from atomloc.localization import scan
    from atomloc.model import PhysParams

    params = PhysParams(delta_p=21.0, delta_c=0.0, omega_c0=10.0,
                        omega_p0=0.01, theta=0.5 * math.pi)
    grid = GridSpec(nx=81, ny=81)
    lmap = scan(params, grid)
    path = tmp_path / "map.pgm"
    write_pgm(lmap, path)
    pixels = _parse_pgm(path.read_bytes())

    xs = grid.xs()
    ys = grid.ys()[::-1]  # image rows run from y_max down

    def quadrants_of(mask):
        rows, cols = np.nonzero(mask)
        return {("I" if xs[c] > 0 else "II") if ys[r] > 0 else
                ("IV" if xs[c] > 0 else "III")
                for r, c in zip(rows, cols) if abs(xs[c]) > 0.01 and abs(ys[r]) > 0.01}

    darkest = quadrants_of(pixels == pixels.min())
    brightest = quadrants_of(pixels == pixels.max())
    assert darkest == {"I", "III"}
    assert {"I", "III"} <= brightest


def test_pgm_top_row_is_y_max(tmp_path):
    # value increases with y, so the top image row must be the brightest
    values = np.linspace(0.0, 1.0, 5)[:, None] * np.ones((5, 3))
    path = tmp_path / "map.pgm"
    write_pgm(make_map(values), path)
    pixels = _parse_pgm(path.read_bytes())
    assert (pixels[0] == 65535).all()    # y_max row first
    assert (pixels[-1] == 0).all()


# ---------------------------------------------------------------------------
# peaks JSON

def test_peaks_json_empty(tmp_path):
    path = tmp_path / "peaks.json"
    write_peaks_json([], path)
    assert json.loads(path.read_text()) == []


def test_peaks_json_schema(tmp_path):
    grid = GridSpec(nx=21, ny=21)
    xs, ys = np.meshgrid(grid.xs(), grid.ys())
    values = np.exp(-((xs - 0.25) ** 2 + (ys - 0.25) ** 2) / 0.01)
    report = find_peaks(make_map(values, grid))
    path = tmp_path / "peaks.json"
    write_peaks_json([(21.0, report), (None, report)], path)
    doc = json.loads(path.read_text())
    assert len(doc) == 2
    assert doc[0]["param_value"] == 21.0
    assert doc[1]["param_value"] is None
    peak = doc[0]["peaks"][0]
    assert set(peak) == {"quadrant", "x", "y", "chi_im", "magnitude"}
    assert peak["quadrant"] == "I"
    assert peak["magnitude"] == pytest.approx(1.0, rel=1e-6)


def test_peaks_json_angle_sweep_has_monotone_quadrant_I_magnitudes(tmp_path):
    from atomloc.localization import sweep

    base = PhysParams(delta_p=30.0, delta_c=15.0, omega_c0=10.0,
                      omega_p0=0.1, eta_phase=math.pi / 12)
    angles = [math.pi / 2.1, math.pi / 2.3, math.pi / 2.5, math.pi / 2.7]
    results = sweep(base, GridSpec(nx=81, ny=81), "theta", angles)
    path = tmp_path / "peaks.json"
    write_peaks_json([(r.value, r.report) for r in results], path)
    doc = json.loads(path.read_text())
    assert len(doc) == 4
    mags = [max((p["magnitude"] for p in entry["peaks"]
                 if p["quadrant"] == "I"), default=0.0) for entry in doc]
    assert all(b > a for a, b in zip(mags, mags[1:]))


def test_peaks_json_preserves_precision(tmp_path):
    grid = GridSpec(nx=21, ny=21)
    values = np.zeros((21, 21))
    values[15, 15] = 0.123456789123456789
    report = find_peaks(make_map(values, grid))
    path = tmp_path / "peaks.json"
    write_peaks_json([(None, report)], path)
    doc = json.loads(path.read_text())
    assert doc[0]["peaks"][0]["chi_im"] == values[15, 15]  # full precision


# ---------------------------------------------------------------------------
# determinism

def test_writers_are_deterministic(tmp_path):
    rng = np.random.default_rng(1)
    lmap = make_map(rng.standard_normal((8, 9)))
    report = find_peaks(lmap)
    outputs = {}
    for run in ("a", "b"):
        base = tmp_path / run
        base.mkdir()
        write_csv(lmap, base / "m.csv")
        write_pgm(lmap, base / "m.pgm")
        write_map_json(lmap, base / "m.json")
        write_peaks_json([(None, report)], base / "p.json")
        outputs[run] = [(f.name, f.read_bytes()) for f in sorted(base.iterdir())]
    assert outputs["a"] == outputs["b"]
