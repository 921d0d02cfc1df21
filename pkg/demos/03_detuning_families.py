"""How the two detunings steer the localization pattern.

Two sweeps, each printed as a small table of per-quadrant peak values:

  * probe detuning delta_p at resonant coupling (delta_c = 0): the twin
    peaks in quadrants I and III stay exactly equal (the p = 0 parity of the
    model) and weaken monotonically as the probe detunes further beyond the
    reach of the field-dressed resonance;

  * coupling detuning delta_c at fixed delta_p = 30: same twin-peak
    structure, again with monotonically decreasing contrast.

Peak equality across quadrants holds to solver precision, so the quoted gap
column is a direct readout of the parity symmetry.
"""

import math
from pathlib import Path

from atomloc import GridSpec, PhysParams, sweep, write_peaks_json

out_dir = Path(__file__).parent / "output"
out_dir.mkdir(exist_ok=True)

grid = GridSpec(nx=201, ny=201)
base = PhysParams(delta_c=0.0, omega_c0=10.0, omega_p0=0.01, theta=0.5 * math.pi)

print("probe-detuning family (delta_c = 0):")
print(f"{'delta_p':>8} {'QI peak':>12} {'QIII peak':>12} {'|QI|-|QIII|':>12}")
results = sweep(base, grid, "delta_p", [21.0, 30.0, 40.0, 60.0])
for r in results:
    qi = r.report.strongest("I")
    qiii = r.report.strongest("III")
    print(f"{r.value:8.0f} {qi.value:12.6f} {qiii.value:12.6f} "
          f"{abs(qi.magnitude - qiii.magnitude):12.2e}")
write_peaks_json([(r.value, r.report) for r in results],
                 out_dir / "sweep_delta_p_peaks.json")

print("\ncoupling-detuning family (delta_p = 30):")
print(f"{'delta_c':>8} {'QI peak':>12} {'QIII peak':>12} {'|QI|-|QIII|':>12}")
base = PhysParams(delta_p=30.0, omega_c0=10.0, omega_p0=0.01, theta=0.5 * math.pi)
results = sweep(base, grid, "delta_c", [-1.0, -5.0, -10.0, -15.0])
for r in results:
    qi = r.report.strongest("I")
    qiii = r.report.strongest("III")
    print(f"{r.value:8.0f} {qi.value:12.6f} {qiii.value:12.6f} "
          f"{abs(qi.magnitude - qiii.magnitude):12.2e}")
write_peaks_json([(r.value, r.report) for r in results],
                 out_dir / "sweep_delta_c_peaks.json")

print(f"\npeak reports written to {out_dir}/")
