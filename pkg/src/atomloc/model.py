"""V-type three-level atom with spontaneously generated coherence (SGC).

Level scheme: one ground state ``a`` and two excited states ``b`` and ``c``.
A weak probe of Rabi frequency Omega_p drives a<->b at detuning Delta_p; a
strong coupling field of Rabi frequency Omega_c drives a<->c at detuning
Delta_c.  Both excited states decay to ``a`` at rate 2*gamma, and when the
two dipole moments are non-orthogonal the decay channels interfere: the
cross terms carry p = cos(theta), with theta the angle between the dipoles.

Everything is expressed in units of the decay rate gamma.  The spatial
dependence enters only through the coupling Rabi frequency, which is the sum
of two orthogonal standing waves,

    Omega_c(x, y) = Omega_c0 * (sin(kappa1*x + delta) + sin(kappa2*y + eta)),

with positions measured in wavelength units (kappa = 2*pi by default).

The density-matrix equations of motion are linear in rho, so the steady
state is obtained exactly by replacing the rho_aa equation with the trace
constraint and solving the resulting 9x9 complex system.  Two independent
oracles back this up: RK4 time evolution of the same generator, and the
weak-probe expansion used for the susceptibility.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .numerics import (
    hermitian_eigenvalues_3x3,
    lu_solve,
    lu_solve_batched,
    rk4_step,
)

# Flattened density-matrix ordering: row-major over levels (a, b, c).
STATE_LABELS = ("aa", "ab", "ac", "ba", "bb", "bc", "ca", "cb", "cc")
AA, AB, AC, BA, BB, BC, CA, CB, CC = range(9)

# index pairs swapped by Hermitian transposition
_TRANSPOSE = {AB: BA, BA: AB, AC: CA, CA: AC, CB: BC, BC: CB}


class DegenerateDipoleAngleWarning(UserWarning):
    """theta hit 0 or pi, where the interference parameterisation degenerates."""


class DegenerateDenominatorError(ZeroDivisionError):
    """A closed-form coherence denominator vanished (unphysical parameters)."""


@dataclass(frozen=True)
class PhysParams:
    """Model constants, all dimensionless in units of gamma.

    gamma is kept as an explicit field only so tests can vary it and confirm
    that gamma-scaled outputs are scale invariant.
    """

    gamma: float = 1.0          # spontaneous decay scale, > 0
    delta_p: float = 0.0        # probe detuning Delta_p
    delta_c: float = 0.0        # coupling detuning Delta_c
    omega_p0: float = 0.01      # probe Rabi amplitude, > 0
    omega_c0: float = 10.0      # standing-wave Rabi amplitude, >= 0
    theta: float = math.pi / 2  # dipole angle; p = cos(theta)
    delta_phase: float = 0.0    # x standing-wave phase
    eta_phase: float = 0.0      # y standing-wave phase
    kappa1: float = 2 * math.pi  # x wave number (positions in wavelength units)
    kappa2: float = 2 * math.pi  # y wave number
    alpha_scale: float = 1.0    # susceptibility prefactor, > 0

    def __post_init__(self):
        values = [
            self.gamma, self.delta_p, self.delta_c, self.omega_p0,
            self.omega_c0, self.theta, self.delta_phase, self.eta_phase,
            self.kappa1, self.kappa2, self.alpha_scale,
        ]
        if not all(math.isfinite(v) for v in values):
            raise ValueError("all physical parameters must be finite")
        if self.gamma <= 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")
        if self.omega_p0 <= 0:
            raise ValueError(f"omega_p0 must be positive, got {self.omega_p0}")
        if self.omega_c0 < 0:
            raise ValueError(f"omega_c0 must be non-negative, got {self.omega_c0}")
        if self.kappa1 <= 0 or self.kappa2 <= 0:
            raise ValueError("wave numbers kappa1, kappa2 must be positive")
        if self.alpha_scale <= 0:
            raise ValueError(f"alpha_scale must be positive, got {self.alpha_scale}")


@dataclass(frozen=True)
class LiouvilleSystem:
    """Steady-state linear system: ``matrix @ rho_flat = rhs``.

    The row for rho_aa is the trace constraint (closure of the three
    populations); every other row states that the corresponding equation of
    motion vanishes.  Component ordering follows STATE_LABELS.
    """

    matrix: np.ndarray  # (9, 9) complex
    rhs: np.ndarray     # (9,) complex


@dataclass(frozen=True)
class ZerothOrderCoherences:
    """Closed-form weak-probe coherences (see :func:`zeroth_order`)."""

    rho0_ac: complex
    rho0_ab: complex
    rho0_cb: complex


def sgc_p(params: PhysParams) -> float:
    """Interference strength p = cos(theta), clamped to [-1, 1].

    Warns (without failing) when theta is at 0 or pi: parallel or
    anti-parallel dipoles make the two transitions indistinguishable and the
    model parameterisation degenerates there.
    """
    if abs(math.sin(params.theta)) < 1e-12:
        warnings.warn(
            f"theta={params.theta} is at a degenerate dipole alignment (0 or pi)",
            DegenerateDipoleAngleWarning,
            stacklevel=2,
        )
    return min(1.0, max(-1.0, math.cos(params.theta)))


def rabi_at(params: PhysParams, x, y):
    """Position-dependent coupling Rabi frequency Omega_c(x, y).

    Accepts scalars or numpy arrays for ``x`` and ``y`` (broadcasting).
    """
    return params.omega_c0 * (
        np.sin(params.kappa1 * x + params.delta_phase)
        + np.sin(params.kappa2 * y + params.eta_phase)
    )


def liouvillian_templates(params: PhysParams):
    """Decompose the generator as ``L_base + omega_c*L_c + omega_p*L_p``.

    The equations of motion are affine in both Rabi frequencies, so a scan
    over many field values only needs these three constant 9x9 templates.
    Returned matrices are in generator form (the rho_aa row is the physical
    equation of motion, not yet the trace constraint).
    """
    g = params.gamma
    p = sgc_p(params)
    pg = p * g
    g2 = 2.0 * g
    dp = params.delta_p
    dc = params.delta_c

    base = np.zeros((9, 9), dtype=complex)
    l_c = np.zeros((9, 9), dtype=complex)
    l_p = np.zeros((9, 9), dtype=complex)

    # rho_cc: -2g*cc + i*Oc*(ac - ca) - p*g*(cb + bc)
    base[CC, CC] = -g2
    base[CC, CB] = -pg
    base[CC, BC] = -pg
    l_c[CC, AC] = 1j
    l_c[CC, CA] = -1j
    # rho_bb: -2g*bb + i*Op*(ab - ba) - p*g*(cb + bc)
    base[BB, BB] = -g2
    base[BB, CB] = -pg
    base[BB, BC] = -pg
    l_p[BB, AB] = 1j
    l_p[BB, BA] = -1j
    # rho_ac: -(g + i*Dc)*ac - p*g*ab + i*Oc*(cc - aa) + i*Op*bc
    base[AC, AC] = -(g + 1j * dc)
    base[AC, AB] = -pg
    l_c[AC, CC] = 1j
    l_c[AC, AA] = -1j
    l_p[AC, BC] = 1j
    # rho_cb: i*Oc*ab - i*Op*ca - (i*(Dp - Dc) + 2g)*cb - p*g*(cc + bb)
    base[CB, CB] = -(1j * (dp - dc) + g2)
    base[CB, CC] = -pg
    base[CB, BB] = -pg
    l_c[CB, AB] = 1j
    l_p[CB, CA] = -1j
    # rho_ab: -p*g*ac - (g + i*Dp)*ab + i*Oc*cb + i*Op*(bb - aa)
    base[AB, AB] = -(g + 1j * dp)
    base[AB, AC] = -pg
    l_c[AB, CB] = 1j
    l_p[AB, BB] = 1j
    l_p[AB, AA] = -1j

    # Hermiticity: row for rho_ji is the conjugate of the row for rho_ij with
    # every column index transposed.
    for src, dst in ((AB, BA), (AC, CA), (CB, BC)):
        for mat in (base, l_c, l_p):
            for col in range(9):
                mat[dst, _TRANSPOSE.get(col, col)] = np.conj(mat[src, col])

    # rho_aa from its own physics: decay gains plus field terms.  Trace
    # conservation then holds as a coefficient-level identity, which
    # assemble_liouvillian verifies before swapping this row out.
    base[AA, CC] = g2
    base[AA, BB] = g2
    base[AA, CB] = 2.0 * pg
    base[AA, BC] = 2.0 * pg
    l_c[AA, AC] = -1j
    l_c[AA, CA] = 1j
    l_p[AA, AB] = -1j
    l_p[AA, BA] = 1j

    return base, l_c, l_p


def generator_matrix(params: PhysParams, omega_c: float,
                     omega_p: float | None = None) -> np.ndarray:
    """Full 9x9 generator G with d(rho_flat)/dt = G @ rho_flat.

    ``omega_p`` defaults to ``params.omega_p0``; passing 0 gives the
    probe-free generator used by the weak-probe oracles.
    """
    if omega_p is None:
        omega_p = params.omega_p0
    base, l_c, l_p = liouvillian_templates(params)
    return base + omega_c * l_c + omega_p * l_p


def _trace_replace(matrix: np.ndarray, check: bool = True) -> None:
    """Swap the rho_aa row for the trace constraint, in place."""
    if check:
        colsum = matrix[AA] + matrix[BB] + matrix[CC]
        if np.abs(colsum).max() != 0.0:
            raise AssertionError(
                "generator does not conserve the trace; assembly is inconsistent"
            )
    matrix[AA, :] = 0.0
    matrix[AA, AA] = 1.0
    matrix[AA, BB] = 1.0
    matrix[AA, CC] = 1.0


def assemble_liouvillian(params: PhysParams, omega_c: float,
                         omega_p: float | None = None) -> LiouvilleSystem:
    """Steady-state system at coupling ``omega_c``.

    Builds the full generator, verifies that the population columns sum to
    zero (trace conservation is a coefficient-level identity, so the check is
    exact), then replaces the rho_aa row by the trace constraint.
    """
    matrix = generator_matrix(params, omega_c, omega_p)
    _trace_replace(matrix)
    rhs = np.zeros(9, dtype=complex)
    rhs[AA] = 1.0
    return LiouvilleSystem(matrix=matrix, rhs=rhs)


def steady_state(params: PhysParams, omega_c: float,
                 omega_p: float | None = None) -> np.ndarray:
    """Exact steady-state density matrix, as a (3, 3) complex array.

    Unique for gamma > 0; Hermiticity and unit trace come out of the solve
    at machine precision rather than being imposed afterwards.
    """
    system = assemble_liouvillian(params, omega_c, omega_p)
    return lu_solve(system.matrix, system.rhs).reshape(3, 3)


def steady_state_grid(params: PhysParams, omega_c_values,
                      omega_p: float | None = None) -> np.ndarray:
    """Steady states for many coupling values at once, shape (N, 3, 3)."""
    if omega_p is None:
        omega_p = params.omega_p0
    oc = np.asarray(omega_c_values, dtype=float).ravel()
    base, l_c, l_p = liouvillian_templates(params)
    l0 = base + omega_p * l_p
    _trace_replace(l0)
    l_c = l_c.copy()
    l_c[AA, :] = 0.0  # trace row is field independent
    mats = l0[None, :, :] + oc[:, None, None] * l_c[None, :, :]
    rhs = np.zeros((oc.size, 9), dtype=complex)
    rhs[:, AA] = 1.0
    return lu_solve_batched(mats, rhs).reshape(-1, 3, 3)


def evolve_to_steady(params: PhysParams, omega_c: float, rho0: np.ndarray,
                     t_end: float, dt: float,
                     omega_p: float | None = None) -> np.ndarray:
    """Integrate the equations of motion with fixed-step RK4.

    Independent relaxation oracle for :func:`steady_state`: the rho_aa
    derivative is reconstructed from trace conservation inside the generator,
    so the trace is preserved along the whole trajectory.  ``t_end`` of at
    least 50/gamma is recommended for convergence to the steady state.
    """
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if dt > 0.01 / params.gamma:
        raise ValueError(
            f"dt={dt} too large; need dt <= 0.01/gamma = {0.01 / params.gamma}"
        )
    y = np.array(rho0, dtype=complex).reshape(9)
    gen = generator_matrix(params, omega_c, omega_p)
    derivative = gen.dot
    steps = int(round(t_end / dt))
    for _ in range(steps):
        y = rk4_step(derivative, y, dt)
    return y.reshape(3, 3)


def probe_response(params: PhysParams, omega_c: float):
    """Weak-probe expansion of the steady state: ``(rho0, drho_dOmega_p)``.

    ``rho0`` is the exact steady state with the probe off, and ``drho`` the
    exact first derivative with respect to the probe Rabi frequency, so
    ``rho0 + omega_p * drho`` reproduces the full solve up to O(omega_p^2).
    """
    base, l_c, l_p = liouvillian_templates(params)
    l0 = base + omega_c * l_c
    _trace_replace(l0)
    rhs0 = np.zeros(9, dtype=complex)
    rhs0[AA] = 1.0
    rho0 = lu_solve(l0, rhs0)

    rhs1 = -(l_p @ rho0)
    rhs1[AA] = 0.0  # trace of the correction vanishes
    drho = lu_solve(l0, rhs1)
    return rho0.reshape(3, 3), drho.reshape(3, 3)


def probe_response_grid(params: PhysParams, omega_c_values):
    """Batched :func:`probe_response`; returns (N, 3, 3) pairs."""
    oc = np.asarray(omega_c_values, dtype=float).ravel()
    base, l_c, l_p = liouvillian_templates(params)
    l0 = base.copy()
    _trace_replace(l0)
    l_c = l_c.copy()
    l_c[AA, :] = 0.0
    mats = l0[None, :, :] + oc[:, None, None] * l_c[None, :, :]

    rhs0 = np.zeros((oc.size, 9), dtype=complex)
    rhs0[:, AA] = 1.0
    rho0 = lu_solve_batched(mats, rhs0)

    rhs1 = -np.einsum("ij,nj->ni", l_p, rho0)
    rhs1[:, AA] = 0.0
    drho = lu_solve_batched(mats, rhs1)
    return rho0.reshape(-1, 3, 3), drho.reshape(-1, 3, 3)


def susceptibility_imag(params: PhysParams, omega_c: float) -> float:
    """Imaginary probe susceptibility chi'' = alpha * Im[rho_ab / Omega_p].

    Evaluated in the weak-probe sense: rho_ab is expanded to first order in
    the probe around the exact probe-free steady state, which removes the
    O(omega_p^2) self-saturation of the probe while keeping the interference
    contribution rho_ab(omega_p=0) that a finite probe amplitude divides.
    """
    rho0, drho = probe_response(params, omega_c)
    return params.alpha_scale * (
        rho0[0, 1].imag / params.omega_p0 + drho[0, 1].imag
    )


def susceptibility_imag_grid(params: PhysParams, omega_c_values) -> np.ndarray:
    """Batched :func:`susceptibility_imag`, preserving the input shape."""
    oc = np.asarray(omega_c_values, dtype=float)
    rho0, drho = probe_response_grid(params, oc.ravel())
    chi = params.alpha_scale * (
        rho0[:, 0, 1].imag / params.omega_p0 + drho[:, 0, 1].imag
    )
    return chi.reshape(oc.shape)


def linear_response_state(params: PhysParams, omega_c: float) -> np.ndarray:
    """Density matrix linearised in the probe: rho0 + omega_p0 * drho.

    Hermitian with unit trace; the smallest eigenvalue may dip below zero by
    O(omega_p0^2), which is the truncation error of the expansion, not a
    physical negativity.
    """
    rho0, drho = probe_response(params, omega_c)
    return rho0 + params.omega_p0 * drho


def zeroth_order(params: PhysParams, omega_c: float) -> ZerothOrderCoherences:
    """Closed-form coherences of the frozen-ground-state approximation.

    These are the weak-field expressions obtained by solving the three
    coupled coherence equations with the populations pinned to the ground
    state (rho_aa = 1).  Their validity is limited in two documented ways:
    for Omega_c of a few gamma and above all three deviate strongly from the
    true probe-free steady state (saturation of the a<->c transition is
    ignored), and rho0_cb is off by an O(1) relative factor even for weak
    coupling because the dropped population feed -p*gamma*rho_cc enters at
    the same order Omega_c^2 as the retained source.  :func:`steady_state`
    with ``omega_p=0`` is the exact reference; the validation suite checks
    both statements.

    All quantities dimensionless (gamma-scaled); gamma drops out entirely.
    """
    dp = params.delta_p / params.gamma
    dc = params.delta_c / params.gamma
    oc = omega_c / params.gamma
    p = sgc_p(params)

    den_ac = (2j + dc - dp) * (p * p + (dp - 1j) * (dc - 1j)) + (dc - 1j) * oc * oc
    den_ab = (2j + dc - dp) * (1j * p * p - 1j + dc * (1.0 + 1j * dp) + dp) \
        + (1.0 + 1j * dc) * oc * oc
    if min(abs(den_ac), abs(den_ab)) <= 1e-12:
        raise DegenerateDenominatorError(
            f"coherence denominator vanished (|den_ac|={abs(den_ac):.3e}, "
            f"|den_ab|={abs(den_ab):.3e})"
        )
    rho0_ac = ((dp - 1j) * (dp - 2j - dc) * oc - oc**3) / den_ac
    rho0_ab = p * oc * (2j + dc - dp) / den_ab
    rho0_cb = 1j * p * oc * oc / den_ac
    return ZerothOrderCoherences(rho0_ac=rho0_ac, rho0_ab=rho0_ab, rho0_cb=rho0_cb)


# ---------------------------------------------------------------------------
# density-matrix diagnostics

def hermiticity_error(rho: np.ndarray) -> float:
    """Max-norm distance from the Hermitian transpose."""
    r = np.asarray(rho)
    return float(np.abs(r - np.conj(np.swapaxes(r, -1, -2))).max())


def trace_error(rho: np.ndarray) -> float:
    """|trace - 1| (max over any leading batch axes)."""
    r = np.asarray(rho)
    tr = r[..., 0, 0] + r[..., 1, 1] + r[..., 2, 2]
    return float(np.abs(tr - 1.0).max())


def min_eigenvalue(rho: np.ndarray) -> float:
    """Smallest eigenvalue of the Hermitian part (single 3x3 state)."""
    return float(hermitian_eigenvalues_3x3(np.asarray(rho))[0])
