"""Spatial susceptibility maps, peak detection and parameter sweeps.

The imaginary probe susceptibility chi''(x, y) inherits its position
dependence from the standing-wave coupling field.  Because large |chi''|
marks positions where the probe interrogates the atom most strongly, the
grid of chi'' samples doubles as a (qualitative) atom-localization map; the
peak report classifies its strict local maxima by quadrant of the x-y plane.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field

import numpy as np

from . import model
from .model import PhysParams
from .numerics import SingularMatrixError

SWEEPABLE_PARAMS = ("delta_p", "delta_c", "theta")


class UnknownParameterError(ValueError):
    """Sweep was asked for a parameter it does not support."""


@dataclass(frozen=True)
class GridSpec:
    """Rectangular scan window in wavelength units."""

    x_min: float = -0.5
    x_max: float = 0.5
    y_min: float = -0.5
    y_max: float = 0.5
    nx: int = 201
    ny: int = 201

    def __post_init__(self):
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ValueError("grid bounds must satisfy min < max on both axes")
        if self.nx < 3 or self.ny < 3:
            raise ValueError(f"grid needs nx, ny >= 3, got nx={self.nx} ny={self.ny}")

    def xs(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.nx)

    def ys(self) -> np.ndarray:
        return np.linspace(self.y_min, self.y_max, self.ny)


@dataclass(frozen=True)
class LocalizationMap:
    """chi'' samples on a grid, with the parameters that produced them.

    ``values[j, i]`` is chi'' at (x_i, y_j); flattening row-major therefore
    runs y as the outer loop and x as the inner loop, both ascending.
    """

    grid: GridSpec
    values: np.ndarray  # (ny, nx) float
    params: PhysParams


@dataclass(frozen=True)
class PeakEntry:
    quadrant: str   # "I", "II", "III" or "IV"
    x: float
    y: float
    value: float       # signed chi'' at the peak cell
    magnitude: float   # |value|
    ix: int            # grid column index
    iy: int            # grid row index


@dataclass(frozen=True)
class PeakReport:
    """Strict local maxima of |chi''|, sorted by magnitude descending."""

    entries: tuple[PeakEntry, ...] = field(default_factory=tuple)

    def in_quadrant(self, quadrant: str) -> tuple[PeakEntry, ...]:
        return tuple(e for e in self.entries if e.quadrant == quadrant)

    def strongest(self, quadrant: str | None = None) -> PeakEntry | None:
        pool = self.entries if quadrant is None else self.in_quadrant(quadrant)
        return pool[0] if pool else None


@dataclass(frozen=True)
class SweepResult:
    value: float
    report: PeakReport
    map: LocalizationMap


def chi_imag(params: PhysParams, rho: np.ndarray) -> float:
    """chi'' = alpha * Im(rho_ab) / Omega_p for a given density matrix."""
    return params.alpha_scale * float(np.asarray(rho)[0, 1].imag) / params.omega_p0


def scan(params: PhysParams, grid: GridSpec) -> LocalizationMap:
    """Evaluate chi'' on the grid (weak-probe response at every point).

    All grid points are solved in one batched elimination, so the result is
    deterministic and independent of any evaluation order.
    """
    xs = grid.xs()
    ys = grid.ys()
    omega_c = model.rabi_at(params, xs[None, :], ys[:, None])
    try:
        values = model.susceptibility_imag_grid(params, omega_c)
    except SingularMatrixError as exc:
        index = exc.args[1] if len(exc.args) > 1 else 0
        j, i = divmod(int(index), grid.nx)
        raise SingularMatrixError(
            f"singular steady-state system at grid point "
            f"(x={xs[i]!r}, y={ys[j]!r})", xs[i], ys[j]
        ) from exc
    return LocalizationMap(grid=grid, values=values, params=params)


def find_peaks(lmap: LocalizationMap, axis_exclusion: float = 0.01) -> PeakReport:
    """Classify strict local maxima of |chi''| by quadrant.

    A cell is a peak iff its |value| strictly exceeds all 8 neighbours (border
    cells never qualify).  Cells within ``axis_exclusion`` (wavelength units)
    of either coordinate axis have no well-defined quadrant and are dropped.
    Entries are sorted by magnitude descending, ties broken row-major-first.
    A constant map yields an empty report.
    """
    mag = np.abs(lmap.values)
    interior = mag[1:-1, 1:-1]
    neighbor_max = np.full_like(interior, -np.inf)
    for dj in (-1, 0, 1):
        for di in (-1, 0, 1):
            if dj == 0 and di == 0:
                continue
            shifted = mag[1 + dj:mag.shape[0] - 1 + dj, 1 + di:mag.shape[1] - 1 + di]
            np.maximum(neighbor_max, shifted, out=neighbor_max)
    peak_rows, peak_cols = np.nonzero(interior > neighbor_max)
    peak_rows = peak_rows + 1
    peak_cols = peak_cols + 1

    xs = lmap.grid.xs()
    ys = lmap.grid.ys()
    entries = []
    for iy, ix in zip(peak_rows.tolist(), peak_cols.tolist()):
        x = float(xs[ix])
        y = float(ys[iy])
        if abs(x) <= axis_exclusion or abs(y) <= axis_exclusion:
            continue
        quadrant = ("I" if x > 0 else "II") if y > 0 else ("IV" if x > 0 else "III")
        value = float(lmap.values[iy, ix])
        entries.append(PeakEntry(
            quadrant=quadrant, x=x, y=y, value=value,
            magnitude=abs(value), ix=ix, iy=iy,
        ))
    entries.sort(key=lambda e: (-e.magnitude, e.iy * lmap.grid.nx + e.ix))
    return PeakReport(entries=tuple(entries))


def sweep(base: PhysParams, grid: GridSpec, param_name: str,
          values) -> list[SweepResult]:
    """Scan + peak report for each value of one swept parameter.

    ``param_name`` must be one of delta_p, delta_c or theta; all other
    parameters stay at their values in ``base``.
    """
    if param_name not in SWEEPABLE_PARAMS:
        raise UnknownParameterError(
            f"cannot sweep {param_name!r}; supported: {', '.join(SWEEPABLE_PARAMS)}"
        )
    values = [float(v) for v in values]
    if not values:
        raise ValueError("sweep needs at least one parameter value")
    results = []
    for v in values:
        if not math.isfinite(v):
            raise ValueError(f"sweep value {v} is not finite")
        params = dataclasses.replace(base, **{param_name: v})
        lmap = scan(params, grid)
        results.append(SweepResult(value=v, report=find_peaks(lmap), map=lmap))
    return results
