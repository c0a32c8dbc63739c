"""Drift/diffusion construction and exact covariance-matrix propagation.

The covariance matrix obeys d(sigma)/dt = A sigma + sigma A^T + D with a
constant drift A and diffusion D, so the flow is computed in closed form
through the steady state and a matrix exponential, with no integrator
error.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .errors import NumericalError, PhysicalityError, StabilityError
from .states import Matrix, as_covariance, validate_physical

#: eigenvalues must sit strictly left of -TOL_STAB for stability
TOL_STAB = 1e-12

#: absolute max-norm budget for the steady-state residual A s + s A^T + D
STEADY_RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class SystemParams:
    """Physical parameters of the two dissipatively coupled modes.

    omega_a, omega_b are the mode frequencies, k_a, k_b the bath coupling
    rates, gn the effective x-x coupling strength between the modes, and
    m_a, m_b the bath mean occupation numbers. Dimensionless, hbar = k_B = 1.
    """

    omega_a: float = 1.0
    omega_b: float = 1.0
    k_a: float = 0.1
    k_b: float = 0.1
    gn: float = 0.0
    m_a: float = 0.0
    m_b: float = 0.0

    def __post_init__(self) -> None:
        if self.omega_a <= 0.0 or self.omega_b <= 0.0:
            raise PhysicalityError("mode frequencies omega_a, omega_b must be > 0")
        if self.k_a <= 0.0 or self.k_b <= 0.0:
            raise PhysicalityError("bath rates k_a, k_b must be > 0")
        if self.gn < 0.0:
            raise PhysicalityError("coupling gn must be >= 0")
        if self.m_a < 0.0 or self.m_b < 0.0:
            raise PhysicalityError("bath occupations m_a, m_b must be >= 0")


@dataclass(frozen=True)
class Trajectory:
    """Time grid plus the exact covariance matrix at each grid point."""

    times: np.ndarray
    covariances: np.ndarray  # shape (n, 4, 4)

    def __len__(self) -> int:
        return len(self.times)


def build_drift(params: SystemParams) -> Matrix:
    """Drift matrix of the linear quadrature dynamics."""
    wa, wb, ka, kb, gn = (
        params.omega_a,
        params.omega_b,
        params.k_a,
        params.k_b,
        params.gn,
    )
    return np.array(
        [
            [-ka, wa, 0.0, 0.0],
            [-wa, -ka, -gn, 0.0],
            [0.0, 0.0, -kb, wb],
            [-gn, 0.0, -wb, -kb],
        ]
    )


def build_diffusion(params: SystemParams) -> Matrix:
    """Diagonal diffusion matrix 2 k_j (2 M_j + 1) per mode quadrature."""
    da = 2.0 * params.k_a * (2.0 * params.m_a + 1.0)
    db = 2.0 * params.k_b * (2.0 * params.m_b + 1.0)
    return np.diag([da, da, db, db])


def is_stable(drift: np.ndarray, tol: float = TOL_STAB) -> bool:
    """True iff every drift eigenvalue has real part < -tol."""
    return bool(np.all(np.linalg.eigvals(drift).real < -tol))


def solve_steady(drift: np.ndarray, diffusion: np.ndarray) -> Matrix:
    """Stationary covariance solving A s + s A^T = -D.

    Solved as the dense 16x16 vectorised linear system
    (I (x) A + A (x) I) vec(s) = -vec(D), then symmetrised.
    """
    a = np.asarray(drift, dtype=float)
    d = np.asarray(diffusion, dtype=float)
    if not is_stable(a):
        raise StabilityError("drift matrix is not strictly stable")
    n = a.shape[0]
    eye = np.eye(n)
    lhs = np.kron(eye, a) + np.kron(a, eye)
    try:
        vec = np.linalg.solve(lhs, -d.flatten(order="F"))
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"steady-state system is singular: {exc}") from exc
    steady = vec.reshape((n, n), order="F")
    steady = (steady + steady.T) / 2.0
    residual = float(np.abs(a @ steady + steady @ a.T + d).max())
    if residual > STEADY_RESIDUAL_TOL:
        raise NumericalError(
            f"steady-state residual {residual:.3e} exceeds {STEADY_RESIDUAL_TOL:.1e}"
        )
    return steady


def lyapunov_rhs(sigma: np.ndarray, drift: np.ndarray, diffusion: np.ndarray) -> Matrix:
    """Instantaneous covariance velocity A sigma + sigma A^T + D."""
    rhs = drift @ sigma + sigma @ drift.T + diffusion
    return (rhs + rhs.T) / 2.0


def apply_propagator(
    propagator: np.ndarray, sigma0: np.ndarray, steady: np.ndarray
) -> Matrix:
    """Advance sigma0 with a precomputed e^{A t}: E (sigma0 - s) E^T + s."""
    out = propagator @ (sigma0 - steady) @ propagator.T + steady
    return (out + out.T) / 2.0


def propagate(
    sigma0: np.ndarray, drift: np.ndarray, diffusion: np.ndarray, t: float
) -> Matrix:
    """Exact covariance at time t >= 0 for a stable drift.

    propagate(sigma0, A, D, 0) returns sigma0 unchanged.
    """
    if t < 0.0:
        raise ValueError(f"propagation time must be nonnegative, got {t}")
    arr = as_covariance(sigma0)
    if t == 0.0:
        return arr.copy()
    steady = solve_steady(drift, diffusion)
    return apply_propagator(expm(np.asarray(drift, dtype=float) * t), arr, steady)


def trajectory(sigma0: np.ndarray, params: SystemParams, grid: np.ndarray) -> Trajectory:
    """Exact covariance trajectory on an increasing time grid starting at 0."""
    times = np.asarray(grid, dtype=float)
    if times.ndim != 1 or len(times) == 0:
        raise ValueError("time grid must be a nonempty 1-d array")
    if times[0] != 0.0:
        raise ValueError("time grid must start at t = 0")
    if len(times) > 1 and not np.all(np.diff(times) > 0.0):
        raise ValueError("time grid must be strictly increasing")
    arr = as_covariance(sigma0)
    drift = build_drift(params)
    diffusion = build_diffusion(params)
    steady = solve_steady(drift, diffusion)
    covs = np.empty((len(times), 4, 4))
    covs[0] = arr
    for i, t in enumerate(times[1:], start=1):
        covs[i] = apply_propagator(expm(drift * t), arr, steady)
    for i in range(len(times)):
        ok, diagnostic = validate_physical(covs[i])
        if not ok:
            raise NumericalError(
                f"trajectory point t = {times[i]:g} lost physicality: {diagnostic}"
            )
    return Trajectory(times=times.copy(), covariances=covs)
