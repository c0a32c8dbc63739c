"""Bures-metric increments and the Riemannian speed of covariance evolution.

The squared line element along a trajectory of a two-mode Gaussian state
with suppressed first moments is

    ds^2 = (1/4) sum_j (d nu_j)^2 / (nu_j^2 - 1),    j = +, -

in terms of the symplectic eigenvalues nu_j, and the instantaneous speed
replaces d nu_j with the time derivative. The metric diverges along pure
directions (nu -> 1), which are reported as SingularMetricError rather
than regularised.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from scipy.linalg import expm

from .dynamics import (
    SystemParams,
    apply_propagator,
    build_diffusion,
    build_drift,
    lyapunov_rhs,
    solve_steady,
)
from .errors import SingularMetricError, StructuralError
from .states import (
    as_covariance,
    assert_physical,
    block_determinants,
    classify_separability,
    ppt_min_eigenvalue,
    purity_invariants,
    seralian,
    symplectic_eigenvalues,
)

#: speeds are undefined within this margin of purity (nu <= 1 + TOL_SING)
TOL_SING = 1e-9

#: below this gap between nu_plus and nu_minus the chain rule is replaced
#: by central finite differences
_DEGENERACY_GAP = 1e-10
_FD_STEP = 1e-6


class SymplecticRates(NamedTuple):
    """Time derivatives of (nu_plus, nu_minus); finite_difference marks the
    degenerate-spectrum fallback."""

    nu_plus: float
    nu_minus: float
    finite_difference: bool


@dataclass(frozen=True)
class SpeedSample:
    """Initial Riemannian speed of one state, with its invariants.

    nu_tilde_minus and the classification refer to the initial state;
    v_squared is the squared speed shortly after the evolution starts
    (NaN when the metric is still singular there, with excluded set).
    """

    nu_tilde_minus: float
    v_squared: float
    classification: str
    mu1: float
    mu2: float
    mu: float
    delta: float
    epsilon: float
    excluded: bool = False


def _check_regular(nu: float, label: str) -> None:
    if nu <= 1.0 + TOL_SING:
        raise SingularMetricError(
            f"metric singular along a pure direction: {label} = {nu:.12g} <= 1 + tol"
        )


def bures_increment(
    nu_now: tuple[float, float], nu_next: tuple[float, float]
) -> float:
    """Squared Bures length between neighbouring symplectic spectra."""
    ds2 = 0.0
    for label, now, nxt in zip(("nu_plus", "nu_minus"), nu_now, nu_next):
        _check_regular(now, label)
        ds2 += (nxt - now) ** 2 / (now * now - 1.0)
    return 0.25 * ds2


def _adjugate2(block: np.ndarray) -> np.ndarray:
    return np.array(
        [[block[1, 1], -block[0, 1]], [-block[1, 0], block[0, 0]]]
    )


def _rates_finite_difference(
    sigma: np.ndarray, sigma_dot: np.ndarray, h: float = _FD_STEP
) -> tuple[float, float]:
    step = h * (sigma_dot + sigma_dot.T) / 2.0
    up = symplectic_eigenvalues(sigma + step)
    dn = symplectic_eigenvalues(sigma - step)
    return (up[0] - dn[0]) / (2 * h), (up[1] - dn[1]) / (2 * h)


def symplectic_eigenvalue_rates(
    sigma: np.ndarray, sigma_dot: np.ndarray
) -> SymplecticRates:
    """Exact time derivatives of the symplectic eigenvalues.

    Uses the chain rule on the invariant formula via 2x2 adjugate trace
    identities; falls back to central finite differences (and flags it)
    when the spectrum is degenerate.
    """
    arr = as_covariance(sigma)
    dot = np.asarray(sigma_dot, dtype=float)
    if dot.shape != (4, 4) or not np.allclose(dot, dot.T, atol=1e-12, rtol=0.0):
        raise StructuralError("sigma_dot must be a symmetric 4x4 matrix")
    nu_plus, nu_minus = symplectic_eigenvalues(arr)
    if nu_plus - nu_minus < _DEGENERACY_GAP:
        fd_plus, fd_minus = _rates_finite_difference(arr, dot)
        return SymplecticRates(fd_plus, fd_minus, True)

    delta_dot = (
        np.trace(_adjugate2(arr[:2, :2]) @ dot[:2, :2])
        + np.trace(_adjugate2(arr[2:, 2:]) @ dot[2:, 2:])
        + 2.0 * np.trace(_adjugate2(arr[:2, 2:]) @ dot[:2, 2:])
    )
    det_sigma = float(np.linalg.det(arr))
    det_dot = det_sigma * float(np.trace(np.linalg.solve(arr, dot)))
    delta = seralian(arr)
    root = math.sqrt(delta * delta - 4.0 * det_sigma)
    sq_plus_dot = 0.5 * (delta_dot + (delta * delta_dot - 2.0 * det_dot) / root)
    sq_minus_dot = 0.5 * (delta_dot - (delta * delta_dot - 2.0 * det_dot) / root)
    return SymplecticRates(
        sq_plus_dot / (2.0 * nu_plus), sq_minus_dot / (2.0 * nu_minus), False
    )


def riemannian_speed(sigma: np.ndarray, sigma_dot: np.ndarray) -> float:
    """Squared instantaneous Bures speed of the evolving state."""
    nu_plus, nu_minus = symplectic_eigenvalues(sigma)
    _check_regular(nu_plus, "nu_plus")
    _check_regular(nu_minus, "nu_minus")
    rates = symplectic_eigenvalue_rates(sigma, sigma_dot)
    return 0.25 * (
        rates.nu_plus**2 / (nu_plus**2 - 1.0)
        + rates.nu_minus**2 / (nu_minus**2 - 1.0)
    )


def local_speed(sigma: np.ndarray, sigma_dot: np.ndarray, mode: str) -> float:
    """Squared Bures speed of the reduced single-mode state 'a' or 'b'."""
    if mode not in ("a", "b"):
        raise ValueError(f"mode must be 'a' or 'b', got {mode!r}")
    arr = as_covariance(sigma)
    dot = np.asarray(sigma_dot, dtype=float)
    sl = slice(0, 2) if mode == "a" else slice(2, 4)
    block = arr[sl, sl]
    block_dot = dot[sl, sl]
    det_block = float(block[0, 0] * block[1, 1] - block[0, 1] * block[1, 0])
    nu = math.sqrt(max(det_block, 0.0))
    _check_regular(nu, f"nu_{mode}")
    nu_dot = float(np.trace(_adjugate2(block) @ block_dot)) / (2.0 * nu)
    return 0.25 * nu_dot**2 / (nu * nu - 1.0)


@lru_cache(maxsize=64)
def _evolution_context(params: SystemParams, epsilon: float):
    drift = build_drift(params)
    diffusion = build_diffusion(params)
    steady = solve_steady(drift, diffusion)
    return drift, diffusion, steady, expm(drift * epsilon)


def initial_speed(
    sigma0: np.ndarray, params: SystemParams, epsilon: float
) -> SpeedSample:
    """Riemannian speed a short time epsilon after releasing sigma0.

    The state is evolved exactly to t = epsilon and the covariance
    velocity is taken from the equation of motion there. States whose
    spectrum is still within TOL_SING of purity at epsilon are returned
    with excluded = True and v_squared = NaN.
    """
    if epsilon <= 0.0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    arr = assert_physical(sigma0, "initial state")
    drift, diffusion, steady, propagator = _evolution_context(params, float(epsilon))
    evolved = apply_propagator(propagator, arr, steady)
    velocity = lyapunov_rhs(evolved, drift, diffusion)
    mu1, mu2, mu, delta = purity_invariants(arr)
    nu_tilde = ppt_min_eigenvalue(arr)
    label = classify_separability(arr)
    try:
        v_squared = riemannian_speed(evolved, velocity)
        excluded = False
    except SingularMetricError:
        v_squared = float("nan")
        excluded = True
    return SpeedSample(
        nu_tilde_minus=nu_tilde,
        v_squared=v_squared,
        classification=label,
        mu1=mu1,
        mu2=mu2,
        mu=mu,
        delta=delta,
        epsilon=float(epsilon),
        excluded=excluded,
    )
