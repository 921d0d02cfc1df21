"""Run configuration and flat-file result formats.

Formats are chosen to be bit-specifiable and trivially parseable anywhere:
JSON for configuration and peak reports, CSV for maps (one ``x,y,chi_im``
row per sample), and 16-bit binary PGM as a viewer-friendly rendering of a
map.  Plotting happens downstream of these files, never in here.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .localization import GridSpec, LocalizationMap, PeakReport
from .model import PhysParams

VALID_FORMATS = ("csv", "json", "pgm")

# PhysParams field -> config key (identical names, listed for validation)
PARAM_KEYS = (
    "gamma", "delta_p", "delta_c", "omega_p0", "omega_c0", "theta",
    "delta_phase", "eta_phase", "kappa1", "kappa2", "alpha_scale",
)
GRID_KEYS = ("x_min", "x_max", "y_min", "y_max", "nx", "ny")


class ConfigError(ValueError):
    """Base class for configuration problems."""


class ConfigParseError(ConfigError):
    """The config file is not valid JSON."""


class ConfigValidationError(ConfigError):
    """The config parsed but violates an invariant."""


@dataclass(frozen=True)
class RunConfig:
    params: PhysParams = field(default_factory=PhysParams)
    grid: GridSpec = field(default_factory=GridSpec)
    output_dir: Path = Path(".")
    formats: tuple[str, ...] = ("csv",)
    sweep: tuple[str, list[float]] | None = None


def _require_number(value, key: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigValidationError(f"key {key!r} must be a number, got {value!r}")
    if not math.isfinite(value):
        raise ConfigValidationError(f"key {key!r} must be finite, got {value!r}")
    return float(value)


def config_from_dict(raw: dict) -> RunConfig:
    """Build a RunConfig from a parsed JSON document.

    Missing keys take the documented defaults (the coupling-resonant
    weak-probe baseline: gamma=1, omega_p0=0.01, omega_c0=10, theta=pi/2,
    phases 0, kappa=2*pi, alpha_scale=1, grid [-0.5, 0.5]^2 at 201x201).
    Unknown keys are rejected so that typos cannot silently revert a
    parameter to its default.
    """
    if not isinstance(raw, dict):
        raise ConfigValidationError(f"config root must be an object, got {type(raw).__name__}")
    known = set(PARAM_KEYS) | {"grid", "formats", "sweep", "output_dir"}
    for key in raw:
        if key not in known:
            raise ConfigValidationError(f"unknown config key {key!r}")

    param_kwargs = {k: _require_number(raw[k], k) for k in PARAM_KEYS if k in raw}
    try:
        params = PhysParams(**param_kwargs)
    except ValueError as exc:
        raise ConfigValidationError(str(exc)) from exc

    grid_kwargs = {}
    if "grid" in raw:
        grid_raw = raw["grid"]
        if not isinstance(grid_raw, dict):
            raise ConfigValidationError("key 'grid' must be an object")
        for key in grid_raw:
            if key not in GRID_KEYS:
                raise ConfigValidationError(f"unknown grid key {key!r}")
        for key in ("x_min", "x_max", "y_min", "y_max"):
            if key in grid_raw:
                grid_kwargs[key] = _require_number(grid_raw[key], f"grid.{key}")
        for key in ("nx", "ny"):
            if key in grid_raw:
                value = grid_raw[key]
                if isinstance(value, bool) or not isinstance(value, int):
                    raise ConfigValidationError(f"grid.{key} must be an integer")
                grid_kwargs[key] = value
    try:
        grid = GridSpec(**grid_kwargs)
    except ValueError as exc:
        raise ConfigValidationError(str(exc)) from exc

    formats: tuple[str, ...] = ("csv",)
    if "formats" in raw:
        fmts = raw["formats"]
        if not isinstance(fmts, list) or not fmts:
            raise ConfigValidationError("key 'formats' must be a non-empty list")
        seen = []
        for fmt in fmts:
            if fmt not in VALID_FORMATS:
                raise ConfigValidationError(
                    f"unknown format {fmt!r}; supported: {', '.join(VALID_FORMATS)}"
                )
            if fmt not in seen:
                seen.append(fmt)
        formats = tuple(seen)

    sweep = None
    if "sweep" in raw and raw["sweep"] is not None:
        sw = raw["sweep"]
        if not isinstance(sw, dict) or set(sw) - {"param", "values"}:
            raise ConfigValidationError(
                "key 'sweep' must be an object with keys 'param' and 'values'"
            )
        if "param" not in sw or "values" not in sw:
            raise ConfigValidationError("sweep needs both 'param' and 'values'")
        if not isinstance(sw["values"], list) or not sw["values"]:
            raise ConfigValidationError("sweep.values must be a non-empty list")
        values = [_require_number(v, "sweep.values") for v in sw["values"]]
        sweep = (str(sw["param"]), values)

    output_dir = Path(raw.get("output_dir", "."))
    return RunConfig(params=params, grid=grid, output_dir=output_dir,
                     formats=formats, sweep=sweep)


def load_config(path) -> RunConfig:
    """Parse a JSON config file; see :func:`config_from_dict` for the keys."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigParseError(
            f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    return config_from_dict(raw)


def _fmt(value: float) -> str:
    """9 significant digits, trailing zeros kept."""
    return f"{value:#.9g}"


def write_csv(lmap: LocalizationMap, path) -> None:
    """Write ``x,y,chi_im`` rows in row-major order (y outer, x inner)."""
    xs = lmap.grid.xs()
    ys = lmap.grid.ys()
    lines = ["x,y,chi_im"]
    for j in range(lmap.grid.ny):
        row = lmap.values[j]
        for i in range(lmap.grid.nx):
            lines.append(f"{_fmt(xs[i])},{_fmt(ys[j])},{_fmt(row[i])}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_pgm(lmap: LocalizationMap, path) -> None:
    """Render the map as a binary 16-bit PGM (P5, maxval 65535).

    Values map linearly from [min, max] onto [0, 65535]; a constant map
    renders mid-grey (32768).  The top image row corresponds to y_max.
    """
    values = lmap.values
    lo = float(values.min())
    hi = float(values.max())
    if hi > lo:
        scaled = np.rint((values - lo) / (hi - lo) * 65535.0)
    else:
        scaled = np.full_like(values, 32768.0)
    pixels = np.clip(scaled, 0, 65535).astype(">u2")
    pixels = pixels[::-1, :]  # image convention: first row is y_max
    header = f"P5\n{lmap.grid.nx} {lmap.grid.ny}\n65535\n".encode("ascii")
    Path(path).write_bytes(header + pixels.tobytes())


def write_map_json(lmap: LocalizationMap, path) -> None:
    """Map as a JSON document: grid, parameter snapshot and value rows."""
    doc = {
        "grid": {
            "x_min": lmap.grid.x_min, "x_max": lmap.grid.x_max,
            "y_min": lmap.grid.y_min, "y_max": lmap.grid.y_max,
            "nx": lmap.grid.nx, "ny": lmap.grid.ny,
        },
        "params": _params_dict(lmap.params),
        "chi_im": [[float(v) for v in row] for row in lmap.values],
    }
    Path(path).write_text(json.dumps(doc, indent=1) + "\n", encoding="utf-8")


def _params_dict(params: PhysParams) -> dict:
    return {key: getattr(params, key) for key in PARAM_KEYS}


def write_peaks_json(reports, path) -> None:
    """Serialise ``(param_value, PeakReport)`` pairs as a JSON array.

    ``param_value`` may be None for a plain (non-sweep) scan.  Floats are
    emitted with full round-trip precision.
    """
    doc = []
    for param_value, report in reports:
        peaks = [
            {
                "quadrant": e.quadrant,
                "x": e.x,
                "y": e.y,
                "chi_im": e.value,
                "magnitude": e.magnitude,
            }
            for e in report.entries
        ]
        doc.append({
            "param_value": None if param_value is None else float(param_value),
            "peaks": peaks,
        })
    Path(path).write_text(json.dumps(doc, indent=1) + "\n", encoding="utf-8")
