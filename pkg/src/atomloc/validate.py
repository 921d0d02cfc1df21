"""Built-in oracle cross-checks, runnable via ``atomloc validate``.

Each check pits one computational route against an independent one: the
closed-form two-level limit against the weak-probe pipeline, RK4 relaxation
against the direct linear solve, the frozen-ground-state closed forms
against the exact probe-free solve, and the discrete symmetries of the
standing-wave geometry against full map scans.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from . import localization, model
from .model import PhysParams


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _two_level_limit() -> CheckResult:
    """With the coupling off and p=0, chi'' must equal -gamma^2/(gamma^2+Dp^2)."""
    worst = 0.0
    for delta_p in (0.0, 1.0, 5.0, 30.0):
        params = PhysParams(delta_p=delta_p, omega_c0=0.0)
        chi = model.susceptibility_imag(params, 0.0)
        worst = max(worst, abs(chi - (-1.0 / (1.0 + delta_p**2))))
    return CheckResult(
        name="two_level_limit",
        passed=worst <= 1e-9,
        detail=f"max |chi'' + 1/(1+dp^2)| = {worst:.3e} (tol 1e-9)",
    )


def _relaxation_equivalence(draws: int = 12, seed: int = 20260809) -> CheckResult:
    """RK4 relaxation from the ground state lands on the linear-solve answer."""
    rng = np.random.default_rng(seed)
    worst_state = 0.0
    worst_residual = 0.0
    for _ in range(draws):
        params, omega_c = _random_draw(rng)
        rho_lin = model.steady_state(params, omega_c)
        rho0 = np.diag([1.0, 0.0, 0.0]).astype(complex)
        rho_rk4 = model.evolve_to_steady(params, omega_c, rho0,
                                         t_end=200.0 / params.gamma,
                                         dt=0.005 / params.gamma)
        worst_state = max(worst_state, np.abs(rho_lin - rho_rk4).max())
        gen = model.generator_matrix(params, omega_c)
        worst_residual = max(worst_residual, np.abs(gen @ rho_lin.reshape(9)).max())
    passed = worst_state <= 1e-7 and worst_residual <= 1e-9
    return CheckResult(
        name="relaxation_equivalence",
        passed=passed,
        detail=(f"max state diff {worst_state:.3e} (tol 1e-7), "
                f"max EOM residual {worst_residual:.3e} (tol 1e-9), {draws} draws"),
    )


def _weak_probe_reference(draws: int = 40, seed: int = 412) -> CheckResult:
    """Steady state at Omega_p=1e-6 matches the exact probe-free solve.

    The exact probe-free linear solve is the reference; the closed forms of
    :func:`model.zeroth_order` are checked separately below.  The deviation
    is measured on the coherence triple (ac, ab, cb) in vector-relative
    terms, and draws keep p and omega_c away from zero: all three reference
    coherences vanish linearly in those parameters while the probe
    correction does not, so a relative comparison degenerates there.
    """
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(draws):
        params, omega_c = _random_draw(rng, min_abs_p=0.05, min_abs_omega_c=0.5)
        params = dataclasses.replace(params, omega_p0=1e-6)
        exact = model.steady_state(params, omega_c, omega_p=0.0)
        weak = model.steady_state(params, omega_c)
        pairs = ((0, 2), (0, 1), (2, 1))  # ac, ab, cb
        ref = np.array([exact[i, j] for i, j in pairs])
        dev = np.array([weak[i, j] - exact[i, j] for i, j in pairs])
        worst = max(worst, np.linalg.norm(dev) / np.linalg.norm(ref))
    return CheckResult(
        name="weak_probe_reference",
        passed=worst <= 1e-4,
        detail=f"max relative coherence deviation {worst:.3e} (tol 1e-4), {draws} draws",
    )


def _frozen_state_forms(draws: int = 40, seed: int = 97) -> CheckResult:
    """Closed-form coherences behave as documented.

    They must converge to the exact probe-free solve in the weak-coupling
    regime (checked at omega_c = 0.05) and are expected to deviate strongly
    once the coupling saturates the a<->c transition (checked at
    omega_c = 5): the closed forms freeze the populations in the ground
    state, which is a confirmed limitation, not a solver bug.
    """
    rng = np.random.default_rng(seed)
    worst_weak = 0.0
    strong_dev = math.inf
    for _ in range(draws):
        params, _ = _random_draw(rng, min_abs_p=0.05)
        closed_weak = model.zeroth_order(params, 0.05)
        exact_weak = model.steady_state(params, 0.05, omega_p=0.0)
        worst_weak = max(
            worst_weak,
            abs(closed_weak.rho0_ac - exact_weak[0, 2]) / abs(exact_weak[0, 2]),
        )
        closed_strong = model.zeroth_order(params, 5.0)
        exact_strong = model.steady_state(params, 5.0, omega_p=0.0)
        strong_dev = min(
            strong_dev,
            abs(closed_strong.rho0_ac - exact_strong[0, 2]) / abs(exact_strong[0, 2]),
        )
    passed = worst_weak <= 1e-2 and strong_dev > 1e-2
    return CheckResult(
        name="frozen_state_closed_forms",
        passed=passed,
        detail=(f"weak-coupling relative error {worst_weak:.3e} (tol 1e-2); "
                f"saturated-regime deviation >= {strong_dev:.3e} (documented)"),
    )


def _symmetry_suite(n: int = 41) -> CheckResult:
    """Parity, coordinate swap, periodicity and alpha linearity on small maps."""
    grid = localization.GridSpec(nx=n, ny=n)
    base = PhysParams()  # p = cos(pi/2) ~ 0, zero phases, kappa1 = kappa2
    lmap = localization.scan(base, grid)
    values = lmap.values

    parity = np.abs(values - values[::-1, ::-1]).max()
    swap = np.abs(values - values.T).max()

    shifted_grid = localization.GridSpec(
        x_min=grid.x_min + 1.0, x_max=grid.x_max + 1.0, nx=n, ny=n)
    periodic = np.abs(values - localization.scan(base, shifted_grid).values).max()

    scaled = localization.scan(
        dataclasses.replace(base, alpha_scale=2.5), grid).values
    linearity = np.abs(scaled - 2.5 * values).max()

    worst = max(parity, swap, periodic, linearity)
    return CheckResult(
        name="symmetry_suite",
        passed=worst <= 1e-9,
        detail=(f"parity {parity:.2e}, swap {swap:.2e}, periodicity {periodic:.2e}, "
                f"alpha linearity {linearity:.2e} (tol 1e-9 each)"),
    )


def _state_validity(draws: int = 50, seed: int = 7) -> CheckResult:
    """Random steady states are Hermitian, unit-trace and positive."""
    rng = np.random.default_rng(seed)
    worst_herm = 0.0
    worst_trace = 0.0
    min_eig = math.inf
    for _ in range(draws):
        params, omega_c = _random_draw(rng)
        rho = model.steady_state(params, omega_c)
        worst_herm = max(worst_herm, model.hermiticity_error(rho))
        worst_trace = max(worst_trace, model.trace_error(rho))
        min_eig = min(min_eig, model.min_eigenvalue(rho))
    passed = worst_herm <= 1e-10 and worst_trace <= 1e-10 and min_eig >= -1e-8
    return CheckResult(
        name="state_validity",
        passed=passed,
        detail=(f"hermiticity {worst_herm:.2e}, trace {worst_trace:.2e} "
                f"(tol 1e-10), min eigenvalue {min_eig:.2e} (floor -1e-8)"),
    )


def _random_draw(rng: np.random.Generator, min_abs_p: float = 0.0,
                 min_abs_omega_c: float = 0.0):
    """Random parameter point within the supported ranges.

    theta keeps 0.35 rad away from the degenerate alignments 0 and pi: near
    alignment a decay channel closes and the slowest mode relaxes at about
    2*gamma*(1-|cos theta|), which would starve the finite-time relaxation
    oracle (a property of its time horizon, not of the solver).
    """
    while True:
        theta = rng.uniform(0.0, 2.0 * math.pi)
        if min(abs(theta), abs(theta - math.pi), abs(theta - 2 * math.pi)) < 0.35:
            continue
        if abs(math.cos(theta)) < min_abs_p:
            continue
        break
    params = PhysParams(
        delta_p=rng.uniform(-60.0, 60.0),
        delta_c=rng.uniform(-60.0, 60.0),
        omega_p0=rng.uniform(1e-3, 0.5),
        omega_c0=rng.uniform(0.0, 20.0),
        theta=theta,
    )
    while True:
        omega_c = float(model.rabi_at(params, rng.uniform(-0.5, 0.5),
                                      rng.uniform(-0.5, 0.5)))
        if abs(omega_c) >= min_abs_omega_c:
            break
        params = dataclasses.replace(params, omega_c0=rng.uniform(1.0, 20.0))
    return params, omega_c


def run_validation_suite() -> list[CheckResult]:
    """Run every cross-check; deterministic (fixed seeds)."""
    return [
        _two_level_limit(),
        _relaxation_equivalence(),
        _weak_probe_reference(),
        _frozen_state_forms(),
        _symmetry_suite(),
        _state_validity(),
    ]
