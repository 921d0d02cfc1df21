"""Dense complex linear algebra and integration kernels.

Everything in here is small and fixed-size by design: the physics modules
solve 9x9 complex systems (one per spatial sample, possibly many thousands of
them per map), diagnose 3x3 Hermitian matrices, and integrate short linear
ODE trajectories.  A hand-rolled LU with partial pivoting plus an explicit
3x3 eigenvalue formula keep the numerical behaviour predictable and make the
singularity threshold an explicit, testable contract.

All functions are pure; none of them mutate their arguments.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

# Relative pivot threshold: the steady-state operator is nonsingular for any
# physical parameter set with gamma > 0, so a pivot this small signals a
# malformed input rather than interesting physics.
PIVOT_RTOL = 1e-13

_HERMITIAN_TOL = 1e-9


class SingularMatrixError(ArithmeticError):
    """A pivot fell below the relative threshold during elimination."""


class NotHermitianError(ValueError):
    """Input matrix is further from Hermitian than the allowed tolerance."""


class NonFiniteStateError(ArithmeticError):
    """A state vector picked up a NaN or infinity."""


def _as_complex_matrix(a) -> np.ndarray:
    m = np.array(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not np.isfinite(m).all():
        raise ValueError("matrix contains non-finite entries")
    return m


def lu_solve(a, b) -> np.ndarray:
    """Solve ``a @ x = b`` by Gaussian elimination with partial pivoting.

    Parameters
    ----------
    a : (n, n) array_like of complex
    b : (n,) array_like of complex

    Returns
    -------
    (n,) complex ndarray solving the system to roughly machine precision
    for well-conditioned inputs.

    Raises
    ------
    SingularMatrixError
        If any pivot magnitude drops below ``PIVOT_RTOL`` times the largest
        magnitude of the original matrix.
    """
    m = _as_complex_matrix(a)
    rhs = np.array(b, dtype=complex)
    n = m.shape[0]
    if rhs.shape != (n,):
        raise ValueError(f"rhs shape {rhs.shape} does not match matrix size {n}")
    if not np.isfinite(rhs).all():
        raise ValueError("rhs contains non-finite entries")

    threshold = PIVOT_RTOL * np.abs(m).max()
    for k in range(n):
        piv = k + int(np.argmax(np.abs(m[k:, k])))
        pivot_mag = np.abs(m[piv, k])
        if pivot_mag < threshold or pivot_mag == 0.0:
            raise SingularMatrixError(
                f"pivot {pivot_mag:.3e} below threshold {threshold:.3e} "
                f"at elimination step {k}"
            )
        if piv != k:
            m[[k, piv]] = m[[piv, k]]
            rhs[[k, piv]] = rhs[[piv, k]]
        factors = m[k + 1:, k] / m[k, k]
        m[k + 1:, k + 1:] -= np.outer(factors, m[k, k + 1:])
        rhs[k + 1:] -= factors * rhs[k]

    x = np.zeros(n, dtype=complex)
    for k in range(n - 1, -1, -1):
        x[k] = (rhs[k] - m[k, k + 1:] @ x[k + 1:]) / m[k, k]
    return x


def lu_solve_batched(mats, rhs) -> np.ndarray:
    """Solve many same-size systems at once.

    Same algorithm and pivot threshold as :func:`lu_solve`, vectorised over a
    leading batch axis so that a full spatial scan costs a handful of numpy
    operations instead of one Python-level solve per grid point.

    Parameters
    ----------
    mats : (N, n, n) array_like of complex
    rhs : (N, n) or (N, n, k) array_like of complex; a trailing axis solves
        several right-hand sides against the same matrices.

    Raises
    ------
    SingularMatrixError
        Carries the index of the first offending system in ``args[1]``.
    """
    a = np.array(mats, dtype=complex)
    b = np.array(rhs, dtype=complex)
    if a.ndim != 3 or a.shape[1] != a.shape[2]:
        raise ValueError(f"expected (N, n, n) matrices, got shape {a.shape}")
    squeeze = b.ndim == 2
    if squeeze:
        b = b[:, :, None]
    nsys, n, _ = a.shape
    if b.shape[:2] != (nsys, n):
        raise ValueError(f"rhs shape {b.shape} does not match matrices {a.shape}")

    thresholds = PIVOT_RTOL * np.abs(a).max(axis=(1, 2))
    sys_idx = np.arange(nsys)
    for k in range(n):
        piv = k + np.argmax(np.abs(a[:, k:, k]), axis=1)
        pivot_mag = np.abs(a[sys_idx, piv, k])
        bad = (pivot_mag < thresholds) | (pivot_mag == 0.0)
        if bad.any():
            first = int(np.argmax(bad))
            raise SingularMatrixError(
                f"pivot below threshold at elimination step {k}", first
            )
        # swap rows k <-> piv in every system
        rows_k = a[sys_idx, k].copy()
        a[sys_idx, k] = a[sys_idx, piv]
        a[sys_idx, piv] = rows_k
        rhs_k = b[sys_idx, k].copy()
        b[sys_idx, k] = b[sys_idx, piv]
        b[sys_idx, piv] = rhs_k

        factors = a[:, k + 1:, k] / a[:, k, k][:, None]
        a[:, k + 1:, k + 1:] -= factors[:, :, None] * a[:, k, k + 1:][:, None, :]
        b[:, k + 1:, :] -= factors[:, :, None] * b[:, k, :][:, None, :]

    x = np.zeros_like(b)
    for k in range(n - 1, -1, -1):
        acc = np.einsum("nj,njm->nm", a[:, k, k + 1:], x[:, k + 1:, :])
        x[:, k, :] = (b[:, k, :] - acc) / a[:, k, k][:, None]
    return x[:, :, 0] if squeeze else x


def _trig_flank_anchor(h: np.ndarray):
    """Trace mean, spectral radius scale and the accurate trig root.

    The trigonometric cubic formula computes eigenvalues q + 2p*cos(...);
    the root on the flat flank of the cosine (the isolated one) comes out to
    machine precision, while a clustered pair only resolves to sqrt(eps).
    Returns ``(q, p, anchor)`` for input of any shape (..., 3, 3).
    """
    q = np.real(h[..., 0, 0] + h[..., 1, 1] + h[..., 2, 2]) / 3.0
    off = (
        np.abs(h[..., 0, 1]) ** 2
        + np.abs(h[..., 0, 2]) ** 2
        + np.abs(h[..., 1, 2]) ** 2
    )
    d0 = np.real(h[..., 0, 0]) - q
    d1 = np.real(h[..., 1, 1]) - q
    d2 = np.real(h[..., 2, 2]) - q
    p2 = d0**2 + d1**2 + d2**2 + 2.0 * off
    p = np.sqrt(p2 / 6.0)

    # det(B) with B = (h - q*I) / p, real for Hermitian input
    safe_p = np.where(p > 0.0, p, 1.0)
    b = (h - q[..., None, None] * np.eye(3)) / safe_p[..., None, None]
    det_b = np.real(
        b[..., 0, 0] * (b[..., 1, 1] * b[..., 2, 2] - b[..., 1, 2] * b[..., 2, 1])
        - b[..., 0, 1] * (b[..., 1, 0] * b[..., 2, 2] - b[..., 1, 2] * b[..., 2, 0])
        + b[..., 0, 2] * (b[..., 1, 0] * b[..., 2, 1] - b[..., 1, 1] * b[..., 2, 0])
    )
    phi = np.arccos(np.clip(det_b / 2.0, -1.0, 1.0)) / 3.0
    anchor = np.where(
        phi <= np.pi / 6.0,
        q + 2.0 * p * np.cos(phi),
        q + 2.0 * p * np.cos(phi + 2.0 * np.pi / 3.0),
    )
    return q, p, anchor


def _eigvals3_hermitian(h: np.ndarray) -> np.ndarray:
    """Eigenvalues of stacked 3x3 Hermitian matrices, ascending.

    Bulk variant used for monitoring many density matrices at once: the
    isolated root comes from the trig formula, the remaining pair from the
    exact trace and second-invariant identities.  A clustered pair resolves
    only to ~sqrt(eps)*scale absolute here, so near-degenerate eigenvalues
    around zero can read as low as about -1.5e-8; screen with this, then
    re-check candidates with the refined single-matrix function.
    """
    q, _, anchor = _trig_flank_anchor(h)

    # remaining pair from sum and second invariant (principal 2x2 minors)
    m2 = np.real(
        h[..., 0, 0] * h[..., 1, 1] - np.abs(h[..., 0, 1]) ** 2
        + h[..., 0, 0] * h[..., 2, 2] - np.abs(h[..., 0, 2]) ** 2
        + h[..., 1, 1] * h[..., 2, 2] - np.abs(h[..., 1, 2]) ** 2
    )
    pair_sum = 3.0 * q - anchor
    pair_prod = m2 - anchor * pair_sum
    half = 0.5 * pair_sum
    spread = np.sqrt(np.maximum(half**2 - pair_prod, 0.0))
    out = np.stack([anchor, half - spread, half + spread], axis=-1)
    return np.sort(out, axis=-1)


def _refined_pair(h: np.ndarray, anchor: float) -> tuple[float, float]:
    """The two eigenvalues of Hermitian ``h`` other than ``anchor``.

    Rayleigh-Ritz on the orthogonal complement of the anchor eigenvector:
    the pair splitting then comes from first-order matrix entries instead of
    a cancellation-prone discriminant, so even exactly degenerate pairs come
    out to machine precision.
    """
    shifted = h - anchor * np.eye(3)
    # null vector of the (rank-2) shifted matrix: the largest cross product
    # of two rows; bilinear dot products vanish on all rows by construction
    crosses = [
        np.cross(shifted[i], shifted[j]) for i, j in ((0, 1), (0, 2), (1, 2))
    ]
    norms = [np.linalg.norm(c) for c in crosses]
    best = int(np.argmax(norms))
    if norms[best] > 1e3 * np.finfo(float).tiny:
        v = crosses[best] / norms[best]
    else:
        # spectrum is (nearly) a triple cluster: any direction works because
        # every Rayleigh quotient already lies inside the cluster
        v = np.array([1.0, 0.0, 0.0], dtype=complex)

    # orthonormal complement via Gram-Schmidt on the two coordinate axes
    # least aligned with v (always well conditioned)
    k1, k2 = np.argsort(np.abs(v))[:2]
    u1 = np.zeros(3, dtype=complex)
    u1[k1] = 1.0
    u1 -= v * np.vdot(v, u1)
    u1 /= np.linalg.norm(u1)
    u2 = np.zeros(3, dtype=complex)
    u2[k2] = 1.0
    u2 -= v * np.vdot(v, u2) + u1 * np.vdot(u1, u2)
    u2 /= np.linalg.norm(u2)

    p11 = np.vdot(u1, h @ u1).real
    p22 = np.vdot(u2, h @ u2).real
    p12 = np.vdot(u1, h @ u2)
    mid = 0.5 * (p11 + p22)
    spread = math.hypot(0.5 * (p11 - p22), abs(p12))
    return mid - spread, mid + spread


def hermitian_eigenvalues_3x3(m) -> np.ndarray:
    """Eigenvalues of a 3x3 Hermitian matrix, ascending.

    The Hermitian part (m + m^dagger)/2 is diagonalised; the input must
    already be Hermitian to within 1e-9 or :class:`NotHermitianError` is
    raised.  Used as the positivity diagnostic for density matrices.

    The trigonometric cubic formula supplies the isolated eigenvalue, and
    the remaining two are refined by a 2x2 projection so that clustered
    pairs are resolved to machine precision as well.
    """
    h = _as_complex_matrix(m)
    if h.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got shape {h.shape}")
    if np.abs(h - h.conj().T).max() > _HERMITIAN_TOL:
        raise NotHermitianError(
            f"matrix deviates from Hermitian by {np.abs(h - h.conj().T).max():.3e}"
        )
    h = 0.5 * (h + h.conj().T)
    _, _, anchor = _trig_flank_anchor(h)
    lo, hi = _refined_pair(h, float(anchor))
    return np.sort(np.array([float(anchor), lo, hi]))


def rk4_step(f: Callable, y, dt: float) -> np.ndarray:
    """One classical 4th-order Runge-Kutta update of ``y' = f(y)``.

    Local truncation error is O(dt^5) for smooth autonomous ``f``.  Raises
    NonFiniteStateError as soon as the derivative or the update stops being
    finite, which in practice flags a too-large ``dt``.
    """
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    y0 = np.asarray(y)
    k1 = np.asarray(f(y0))
    if not np.isfinite(k1).all():
        raise NonFiniteStateError("derivative is non-finite at the current state")
    k2 = np.asarray(f(y0 + (0.5 * dt) * k1))
    k3 = np.asarray(f(y0 + (0.5 * dt) * k2))
    k4 = np.asarray(f(y0 + dt * k3))
    out = y0 + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    if not np.isfinite(out).all():
        raise NonFiniteStateError("state became non-finite during an RK4 step")
    return out
