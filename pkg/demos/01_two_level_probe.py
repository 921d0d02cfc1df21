"""Warm-up: the undriven two-level probe line.

With the coupling field off and orthogonal dipoles (p = 0), the V system
collapses to a driven two-level atom, and the imaginary susceptibility of
the weak probe is the textbook Lorentzian

    chi''(Delta_p) = -gamma^2 / (gamma^2 + Delta_p^2)   (alpha = 1).

This script sweeps the probe detuning, compares the computed chi'' with the
closed form, and then shows what a *finite* probe amplitude does to the full
steady state: the line saturates by the extra 2*Omega_p^2 in the
denominator, which is exactly why chi'' is defined through the weak-probe
expansion rather than through the finite-probe steady state.
"""

import math

import numpy as np

from atomloc import PhysParams, steady_state, susceptibility_imag

detunings = np.linspace(-8.0, 8.0, 17)

print("probe line at omega_c = 0 (p = 0, gamma = 1):")
print(f"{'delta_p':>8} {'chi_im':>14} {'closed form':>14} {'difference':>12}")
worst = 0.0
for delta_p in detunings:
    params = PhysParams(delta_p=float(delta_p), omega_c0=0.0, theta=math.pi / 2)
    chi = susceptibility_imag(params, 0.0)
    exact = -1.0 / (1.0 + delta_p**2)
    worst = max(worst, abs(chi - exact))
    print(f"{delta_p:8.2f} {chi:14.9f} {exact:14.9f} {abs(chi - exact):12.2e}")
print(f"\nmax deviation from the closed form: {worst:.2e}\n")

print("finite-probe saturation of the resonant steady state (delta_p = 0):")
print(f"{'omega_p':>8} {'Im rho_ab / omega_p':>20} {'saturated form':>16}")
for omega_p in (0.01, 0.05, 0.2, 0.5):
    params = PhysParams(delta_p=0.0, omega_c0=0.0, omega_p0=omega_p,
                        theta=math.pi / 2)
    rho = steady_state(params, 0.0)
    ratio = rho[0, 1].imag / omega_p
    saturated = -1.0 / (1.0 + 2.0 * omega_p**2)
    print(f"{omega_p:8.2f} {ratio:20.9f} {saturated:16.9f}")
print("\nthe weak-probe susceptibility removes the 2*omega_p^2 term, so the")
print("reported chi'' is the linear-response value at any probe amplitude")
