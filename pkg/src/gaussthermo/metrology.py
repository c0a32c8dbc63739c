"""Uhlmann fidelity of Gaussian states and Fisher information for bath
occupation and temperature estimation.

The Fisher information for the common bath occupation M is obtained from
the fidelity between two trajectories whose baths differ by a small dM,
Q_M = 8 (1 - F) / dM^2, and converted to temperature sensitivity through
the chain rule on M(T) = 1 / (e^{omega/T} - 1).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy.linalg import expm

from .dynamics import (
    SystemParams,
    apply_propagator,
    build_diffusion,
    build_drift,
    solve_steady,
)
from .errors import NumericalError, PhysicalityError, StepSizeError
from .states import SYMPLECTIC_FORM, assert_physical

#: below this value of 1 - F the quotient 8(1 - F)/dM^2 is dominated by
#: rounding noise of the fidelity evaluation
_FIDELITY_RESOLUTION = 1e-13

_SHIFT_MODES = ("both", "a", "b")


@dataclass(frozen=True)
class QfiPoint:
    """Fisher information at one interaction time."""

    t: float
    q_m: float
    q_t: float
    m: float
    dm: float


def occupation(omega: float, temperature: float) -> float:
    """Bose-Einstein mean occupation 1/(e^{omega/T} - 1)."""
    if omega <= 0.0:
        raise PhysicalityError(f"transition frequency must be > 0, got {omega}")
    if temperature <= 0.0:
        raise PhysicalityError(f"temperature must be > 0, got {temperature}")
    return 1.0 / np.expm1(omega / temperature)


def occupation_to_temperature(omega: float, m: float) -> float:
    """Inverse of occupation(): T with 1/(e^{omega/T} - 1) = m."""
    if omega <= 0.0:
        raise PhysicalityError(f"transition frequency must be > 0, got {omega}")
    if m <= 0.0:
        raise PhysicalityError(f"occupation must be > 0 to define T, got {m}")
    return omega / np.log1p(1.0 / m)


def occupation_temperature_slope(omega: float, temperature: float) -> float:
    """dM/dT = omega / (4 T^2 sinh^2(omega / 2T))."""
    if temperature <= 0.0:
        raise PhysicalityError(f"temperature must be > 0, got {temperature}")
    return omega / (4.0 * temperature**2 * np.sinh(omega / (2.0 * temperature)) ** 2)


def _principal_sqrt(matrix: np.ndarray) -> np.ndarray:
    """Principal square root of a diagonalisable matrix via eigendecomposition."""
    eigvals, eigvecs = np.linalg.eig(matrix)
    scale = max(1.0, float(np.abs(matrix).max()))
    bad = eigvals.real < -1e-9 * scale
    if np.any(bad):
        raise NumericalError(
            "matrix square root undefined: eigenvalues with negative real part "
            f"{eigvals[bad]}"
        )
    root = eigvecs @ np.diag(np.sqrt(eigvals.astype(complex))) @ np.linalg.inv(eigvecs)
    residual = float(np.abs(root @ root - matrix).max())
    if residual > 1e-9 * scale:
        raise NumericalError(
            f"matrix square root residual {residual:.3e} exceeds tolerance"
        )
    return root


def uhlmann_fidelity(sigma1: np.ndarray, sigma2: np.ndarray) -> float:
    """Uhlmann fidelity of two zero-mean two-mode Gaussian states.

    Symmetric in its arguments, equal to 1 iff the states coincide, and
    strictly between 0 and 1 otherwise.
    """
    s1 = assert_physical(sigma1, "first state")
    s2 = assert_physical(sigma2, "second state")
    if np.array_equal(s1, s2):
        return 1.0
    omega = SYMPLECTIC_FORM
    mean = (s1 + s2) / 2.0
    try:
        aux = np.linalg.solve(2.0 * mean, omega + s2 @ omega @ s1)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"fidelity system is singular: {exc}") from exc
    xi = -omega @ aux / 2.0  # omega^{-1} = -omega
    xi_omega = xi @ omega
    try:
        inv_sq = np.linalg.matrix_power(np.linalg.inv(xi_omega), 2)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"fidelity auxiliary matrix is singular: {exc}") from exc
    root = _principal_sqrt(np.eye(4) + inv_sq / 4.0)
    numerator = np.linalg.det(2.0 * (root + np.eye(4)) @ xi)
    denominator = np.linalg.det(mean)
    quartic = numerator / denominator
    if abs(np.imag(quartic)) > 1e-9 * max(1.0, abs(quartic)):
        raise NumericalError(
            f"fidelity evaluation returned a complex value: {quartic}"
        )
    quartic = float(np.real(quartic))
    if quartic <= 0.0:
        raise NumericalError(f"fidelity evaluation returned F^4 = {quartic:.3e} <= 0")
    fidelity = quartic**0.25
    # accuracy degrades approaching the pure-state boundary, where the
    # square-root argument becomes singular
    if fidelity > 1.0 + 1e-7:
        raise NumericalError(f"fidelity {fidelity!r} exceeds 1 beyond tolerance")
    return min(fidelity, 1.0)


def _shifted(params: SystemParams, shift: str, dm_half: float) -> tuple[
    SystemParams, SystemParams
]:
    if shift not in _SHIFT_MODES:
        raise ValueError(f"shift must be one of {_SHIFT_MODES}, got {shift!r}")
    if shift in ("both", "a"):
        lo_a, hi_a = params.m_a - dm_half, params.m_a + dm_half
    else:
        lo_a = hi_a = params.m_a
    if shift in ("both", "b"):
        lo_b, hi_b = params.m_b - dm_half, params.m_b + dm_half
    else:
        lo_b = hi_b = params.m_b
    try:
        lower = replace(params, m_a=lo_a, m_b=lo_b)
    except PhysicalityError as exc:
        raise PhysicalityError(
            f"central occupation step dM = {2 * dm_half} leaves the physical "
            f"domain: {exc}"
        ) from exc
    return lower, replace(params, m_a=hi_a, m_b=hi_b)


def qfi_occupation(
    sigma0: np.ndarray,
    params: SystemParams,
    t: float,
    dm: float = 1e-3,
    shift: str = "both",
) -> float:
    """Fisher information for the bath occupation after interaction time t.

    Central variant: the fixed initial state is propagated under baths at
    M - dM/2 and M + dM/2 and the distinguishability of the two branches
    is converted into Q_M = 8 (1 - F) / dM^2. By default both baths are
    shifted together (the estimated parameter is their common occupation);
    shift='a' or 'b' probes a single bath instead.
    """
    if dm <= 0.0:
        raise ValueError(f"dm must be positive, got {dm}")
    if t < 0.0:
        raise ValueError(f"time must be nonnegative, got {t}")
    arr = assert_physical(sigma0, "initial state")
    lower, upper = _shifted(params, shift, dm / 2.0)
    drift = build_drift(params)
    if t == 0.0:
        return 0.0
    propagator = expm(drift * t)
    branch_lo = apply_propagator(propagator, arr, solve_steady(drift, build_diffusion(lower)))
    branch_hi = apply_propagator(propagator, arr, solve_steady(drift, build_diffusion(upper)))
    if np.array_equal(branch_lo, branch_hi):
        return 0.0
    gap = 1.0 - uhlmann_fidelity(branch_lo, branch_hi)
    if gap < _FIDELITY_RESOLUTION:
        if float(np.abs(branch_hi - branch_lo).max()) < 1e-13:
            return 0.0
        raise StepSizeError(
            f"1 - F = {gap:.3e} is below working precision; increase dM"
        )
    return 8.0 * gap / dm**2


def qfi_temperature(q_m: float, omega: float, temperature: float) -> float:
    """Reparametrise occupation information as temperature information.

    Q_T = Q_M (dM/dT)^2 with dM/dT evaluated at (omega, T).
    """
    slope = occupation_temperature_slope(omega, temperature)
    return q_m * slope * slope


def qfi_scan(
    sigma0: np.ndarray,
    params: SystemParams,
    grid: np.ndarray,
    dm: float = 1e-3,
    shift: str = "both",
    omega_ref: float | None = None,
) -> list[QfiPoint]:
    """Q_M and Q_T along a time grid for a fixed initial preparation.

    Q_T is evaluated at the temperature reproducing the mode-a bath
    occupation at transition frequency omega_ref (defaults to omega_a);
    it is reported as 0 when that occupation vanishes.
    """
    times = np.asarray(grid, dtype=float)
    if times.ndim != 1 or len(times) == 0:
        raise ValueError("time grid must be a nonempty 1-d array")
    if np.any(times < 0.0) or (len(times) > 1 and np.any(np.diff(times) <= 0.0)):
        raise ValueError("time grid must be nonnegative and strictly increasing")
    arr = assert_physical(sigma0, "initial state")
    omega = params.omega_a if omega_ref is None else float(omega_ref)
    lower, upper = _shifted(params, shift, dm / 2.0)
    drift = build_drift(params)
    steady_lo = solve_steady(drift, build_diffusion(lower))
    steady_hi = solve_steady(drift, build_diffusion(upper))
    if params.m_a > 0.0:
        slope = occupation_temperature_slope(
            omega, occupation_to_temperature(omega, params.m_a)
        )
    else:
        slope = 0.0
    points: list[QfiPoint] = []
    for t in times:
        if t == 0.0:
            q_m = 0.0
        else:
            propagator = expm(drift * t)
            branch_lo = apply_propagator(propagator, arr, steady_lo)
            branch_hi = apply_propagator(propagator, arr, steady_hi)
            if np.array_equal(branch_lo, branch_hi):
                q_m = 0.0
            else:
                gap = 1.0 - uhlmann_fidelity(branch_lo, branch_hi)
                if gap < _FIDELITY_RESOLUTION:
                    if float(np.abs(branch_hi - branch_lo).max()) < 1e-13:
                        q_m = 0.0
                    else:
                        raise StepSizeError(
                            f"1 - F = {gap:.3e} at t = {t:g} is below working "
                            "precision; increase dM"
                        )
                else:
                    q_m = 8.0 * gap / dm**2
        points.append(
            QfiPoint(t=float(t), q_m=q_m, q_t=q_m * slope * slope, m=params.m_a, dm=dm)
        )
    return points
