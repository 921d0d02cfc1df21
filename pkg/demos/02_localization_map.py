"""A full 2D localization map, exported to CSV and PGM.

The coupling field is the sum of two orthogonal standing waves, so the
atom-field interaction depends on where the atom sits in the wavelength
cell.  Scanning the weak-probe susceptibility chi'' over one cell produces
the localization pattern; with a far-detuned probe the pattern is a pair of
sharp twin spikes at the field extremes in quadrants I and III.

Outputs land in demos/output/.
"""

import math
from pathlib import Path

from atomloc import (
    GridSpec, PhysParams, find_peaks, scan, write_csv, write_peaks_json,
    write_pgm,
)

out_dir = Path(__file__).parent / "output"
out_dir.mkdir(exist_ok=True)

params = PhysParams(delta_p=21.0, delta_c=0.0, omega_c0=10.0,
                    omega_p0=0.01, theta=0.5 * math.pi)
grid = GridSpec(nx=201, ny=201)

print(f"scanning chi'' on a {grid.nx}x{grid.ny} grid "
      f"(delta_p = {params.delta_p}, coupling amplitude {params.omega_c0}) ...")
lmap = scan(params, grid)
print(f"value range: [{lmap.values.min():.6f}, {lmap.values.max():.6f}]")

report = find_peaks(lmap)
print(f"\n{len(report.entries)} strict local maxima of |chi''|; strongest first:")
for entry in report.entries[:6]:
    print(f"  quadrant {entry.quadrant:>3}  x={entry.x:+.3f} y={entry.y:+.3f} "
          f"chi''={entry.value:+.6f}")

write_csv(lmap, out_dir / "map_detuned_probe.csv")
write_pgm(lmap, out_dir / "map_detuned_probe.pgm")
write_peaks_json([(None, report)], out_dir / "map_detuned_probe_peaks.json")
print(f"\nwrote CSV, PGM and peak report to {out_dir}/")
print("the twin spikes sit where the standing waves both peak: "
      "(0.25, 0.25) and (-0.25, -0.25)")
