"""Decay-channel interference breaks the quadrant symmetry.

When the two dipole moments are not orthogonal (p = cos(theta) != 0), the
two spontaneous-emission channels interfere and the coupling-sign parity of
the model maps p -> -p instead of leaving the system invariant.  The two
field-extreme quadrants then stop being mirror images: sweeping theta below
pi/2 makes quadrant III deepen monotonically while a gain lobe (chi'' > 0)
grows around the quadrant-I extreme.

The tables print both the strongest peak per quadrant (by |chi''|, signed
value shown) and the largest positive value in each quadrant region, which
is where the emerging gain structure is easiest to see.
"""

import dataclasses
import math
from pathlib import Path

import numpy as np

from atomloc import GridSpec, PhysParams, find_peaks, scan, write_pgm

out_dir = Path(__file__).parent / "output"
out_dir.mkdir(exist_ok=True)

grid = GridSpec(nx=201, ny=201)
base = PhysParams(delta_p=30.0, delta_c=15.0, omega_c0=10.0, omega_p0=0.1,
                  delta_phase=0.0, eta_phase=math.pi / 12)

angles = [math.pi / 2.1, math.pi / 2.3, math.pi / 2.5, math.pi / 2.7]

print("dipole-angle family (delta_p = 30, delta_c = 15, omega_p = 0.1):")
print(f"{'theta':>9} {'p':>7} {'QI peak':>11} {'QIII peak':>11} "
      f"{'QI max+':>10} {'QIII max+':>10}")
for k, theta in enumerate(angles):
    params = dataclasses.replace(base, theta=theta)
    lmap = scan(params, grid)
    report = find_peaks(lmap)
    qi = report.strongest("I")
    qiii = report.strongest("III")
    xs, ys = np.meshgrid(grid.xs(), grid.ys())
    region_i = (xs > 0.01) & (ys > 0.01)
    region_iii = (xs < -0.01) & (ys < -0.01)
    print(f"{theta:9.4f} {math.cos(theta):7.4f} {qi.value:+11.6f} "
          f"{qiii.value:+11.6f} {lmap.values[region_i].max():+10.6f} "
          f"{lmap.values[region_iii].max():+10.6f}")
    write_pgm(lmap, out_dir / f"angle_family_{k}.pgm")

print(f"\nPGM renders written to {out_dir}/ (one per angle)")
print("quadrant III deepens steadily; the positive lobe in quadrant I grows")
print("with p, overtaking the map's negative background from the third angle on")
