"""Random two-mode Gaussian states under purity constraints.

States are drawn in standard form through their local-symplectic
invariants: marginal purities mu1, mu2 first, then the global purity mu
uniformly inside its admissible interval, then the seralian delta
uniformly inside its own interval. The same parametrisation yields the
maximally entangled states at fixed purities (seralian at its lower
bound), which generate the lower envelope of the initial-speed scatter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .dynamics import SystemParams
from .errors import PhysicalityError
from .geometry import initial_speed
from .states import Matrix, SimonInvariants, from_simon

#: slack used on the region boundaries when classifying triples
_REGION_TOL = 1e-12

#: radicands this far below zero are a domain error, closer is rounding
_RADICAND_TOL = 1e-12


@dataclass(frozen=True)
class PurityTriple:
    """Invariant record (mu1, mu2, mu, delta) of a two-mode state."""

    mu1: float
    mu2: float
    mu: float
    delta: float


@dataclass(frozen=True)
class SeedSpec:
    """Seed plus sample count; the stream is a pure function of these."""

    seed: int
    count: int


@dataclass(frozen=True)
class BoundPoint:
    """Minimal initial speed over extremal states at one nu_tilde_minus."""

    nu_tilde_minus: float
    v_squared: float
    mu1: float
    mu2: float
    mu: float
    feasible: bool


def sample_rng(seed: int, index: int) -> np.random.Generator:
    """Generator for one sample, reproducible from (seed, index) alone."""
    return np.random.default_rng([seed, index])


def global_purity_bounds(mu1: float, mu2: float) -> tuple[float, float]:
    """Admissible interval of the global purity at fixed marginals."""
    lo = mu1 * mu2
    return lo, lo / (lo + abs(mu1 - mu2))


def separable_mu_cap(mu1: float, mu2: float) -> float:
    """Global purities up to this value are separable for every seralian."""
    return mu1 * mu2 / (mu1 + mu2 - mu1 * mu2)


def coexistence_mu_cap(mu1: float, mu2: float) -> float:
    """Upper edge of the band where both behaviours occur."""
    return mu1 * mu2 / math.sqrt(mu1**2 + mu2**2 - mu1**2 * mu2**2)


def seralian_bounds(mu1: float, mu2: float, mu: float) -> tuple[float, float]:
    """Admissible seralian interval at fixed (mu1, mu2, mu)."""
    m2 = mu1 * mu1 * mu2 * mu2
    lo = 2.0 / mu + (mu1 - mu2) ** 2 / m2
    hi = min((mu1 + mu2) ** 2 / m2 - 2.0 / mu, 1.0 + 1.0 / mu**2)
    return lo, hi


def sample_invariants(rng: np.random.Generator) -> PurityTriple:
    """Draw one admissible invariant triple; resamples empty intervals."""
    while True:
        mu1 = 1.0 - rng.random()  # uniform on (0, 1]
        mu2 = 1.0 - rng.random()
        mu_lo, mu_hi = global_purity_bounds(mu1, mu2)
        mu = rng.uniform(mu_lo, mu_hi) if mu_hi > mu_lo else mu_lo
        d_lo, d_hi = seralian_bounds(mu1, mu2, mu)
        if d_hi < d_lo:
            continue
        delta = rng.uniform(d_lo, d_hi) if d_hi > d_lo else d_lo
        return PurityTriple(mu1=mu1, mu2=mu2, mu=mu, delta=delta)


def classify_region(triple: PurityTriple) -> str:
    """Region label: unphysical, separable, coexistence or entangled.

    In the coexistence band the realised state may fall on either side
    of the entanglement boundary depending on the seralian.
    """
    mu1, mu2, mu = triple.mu1, triple.mu2, triple.mu
    if not (0.0 < mu1 <= 1.0 + _REGION_TOL and 0.0 < mu2 <= 1.0 + _REGION_TOL):
        return "unphysical"
    mu_lo, mu_hi = global_purity_bounds(mu1, mu2)
    if mu < mu_lo - _REGION_TOL or mu > mu_hi + _REGION_TOL:
        return "unphysical"
    if mu <= separable_mu_cap(mu1, mu2) + _REGION_TOL:
        return "separable"
    if mu <= coexistence_mu_cap(mu1, mu2) + _REGION_TOL:
        return "coexistence"
    return "entangled"


def _checked_sqrt(radicand: float, label: str) -> float:
    if radicand < -_RADICAND_TOL:
        raise PhysicalityError(
            f"invalid invariant triple: radicand of {label} is {radicand:.3e} < 0"
        )
    return math.sqrt(max(radicand, 0.0))


def realize_state(triple: PurityTriple) -> Matrix:
    """Standard-form covariance matrix reproducing the invariant triple.

    The correlations are oriented so that c_plus >= 0 >= c_minus whenever
    the state can be entangled; the opposite joint orientation describes
    the same state up to a local rotation.
    """
    mu1, mu2, mu, delta = triple.mu1, triple.mu2, triple.mu, triple.delta
    if not (0.0 < mu1 <= 1.0 and 0.0 < mu2 <= 1.0):
        raise PhysicalityError(
            f"marginal purities must lie in (0, 1], got ({mu1}, {mu2})"
        )
    if mu <= 0.0:
        raise PhysicalityError(f"global purity must be positive, got {mu}")
    m2 = mu1 * mu1 * mu2 * mu2
    eta_minus = _checked_sqrt(
        (delta - (mu1 - mu2) ** 2 / m2) ** 2 - 4.0 / mu**2, "eta_minus"
    )
    eta_plus = _checked_sqrt(
        (delta - (mu1 + mu2) ** 2 / m2) ** 2 - 4.0 / mu**2, "eta_plus"
    )
    scale = math.sqrt(mu1 * mu2) / 4.0
    return from_simon(
        SimonInvariants(
            a=1.0 / mu1,
            b=1.0 / mu2,
            c_plus=scale * (eta_plus - eta_minus),
            c_minus=-scale * (eta_plus + eta_minus),
        )
    )


def sample_state(rng: np.random.Generator) -> tuple[PurityTriple, Matrix]:
    """Draw one random physical state (with a random joint sign of c+-)."""
    triple = sample_invariants(rng)
    sigma = realize_state(triple)
    if rng.random() < 0.5:
        flip = np.diag([1.0, 1.0, -1.0, -1.0])  # pi rotation of mode b
        sigma = flip @ sigma @ flip
    return triple, sigma


def gmems(mu1: float, mu2: float, mu: float) -> Matrix:
    """Maximally entangled state at fixed marginal and global purities.

    Saturates the lower seralian bound; c_plus = -c_minus =
    sqrt(1/(mu1 mu2) - 1/mu).
    """
    if not (0.0 < mu1 <= 1.0 and 0.0 < mu2 <= 1.0 and 0.0 < mu <= 1.0):
        raise PhysicalityError(
            f"purities must lie in (0, 1], got ({mu1}, {mu2}, {mu})"
        )
    c = _checked_sqrt(1.0 / (mu1 * mu2) - 1.0 / mu, "the correlation strength")
    return from_simon(
        SimonInvariants(a=1.0 / mu1, b=1.0 / mu2, c_plus=c, c_minus=-c)
    )


def gmems_purity_for_target(mu1: float, mu2: float, nu_tilde: float) -> float | None:
    """Global purity making the extremal state hit a target nu_tilde_minus.

    Returns None when no admissible global purity exists at these
    marginals.
    """
    root_s = (mu1 + mu2) / (mu1 * mu2)  # sqrt of Delta-tilde + 2/mu
    if root_s <= nu_tilde:
        return None
    mu = 1.0 / (nu_tilde * (root_s - nu_tilde))
    mu_lo, mu_hi = global_purity_bounds(mu1, mu2)
    if mu < mu_lo or mu > min(mu_hi, 1.0):
        return None
    return mu


# below ~1e-5 the standard-form entries overflow double precision in the
# invariant formulas; the speed infimum is converged well before that
_MU_FLOOR = 3e-5


def _bound_objective(
    log_mu: np.ndarray, nu_tilde: float, params: SystemParams, epsilon: float
) -> float:
    mu1, mu2 = float(np.exp(log_mu[0])), float(np.exp(log_mu[1]))
    if mu1 > 1.0 or mu2 > 1.0 or mu1 < _MU_FLOOR or mu2 < _MU_FLOOR:
        return float("inf")
    mu = gmems_purity_for_target(mu1, mu2, nu_tilde)
    if mu is None:
        return float("inf")
    try:
        sigma = gmems(mu1, mu2, mu)
    except PhysicalityError:
        return float("inf")
    sample = initial_speed(sigma, params, epsilon)
    if sample.excluded or abs(sample.nu_tilde_minus - nu_tilde) > 1e-8:
        return float("inf")
    return sample.v_squared


def speed_lower_bound(
    nu_grid: np.ndarray,
    params: SystemParams,
    epsilon: float,
    coarse: int = 18,
) -> list[BoundPoint]:
    """Envelope of minimal initial speeds over the extremal-state family.

    For each target nu_tilde_minus the two marginal purities are free
    parameters; they are scanned on a log grid and the best starts are
    polished with Nelder-Mead.
    """
    log_axis = np.log(np.geomspace(2.0 * _MU_FLOOR, 1.0, coarse))
    curve: list[BoundPoint] = []
    for nu_tilde in np.asarray(nu_grid, dtype=float):
        evals = []
        for la in log_axis:
            for lb in log_axis:
                x = np.array([la, lb])
                evals.append((_bound_objective(x, nu_tilde, params, epsilon), x))
        evals.sort(key=lambda item: item[0])
        best_value, best_x = evals[0]
        if not np.isfinite(best_value):
            curve.append(
                BoundPoint(
                    nu_tilde_minus=float(nu_tilde),
                    v_squared=float("nan"),
                    mu1=float("nan"),
                    mu2=float("nan"),
                    mu=float("nan"),
                    feasible=False,
                )
            )
            continue
        for _, start in evals[:3]:
            result = minimize(
                _bound_objective,
                start,
                args=(nu_tilde, params, epsilon),
                method="Nelder-Mead",
                options={"xatol": 1e-6, "fatol": 1e-12, "maxiter": 400},
            )
            if np.isfinite(result.fun) and result.fun < best_value:
                best_value, best_x = float(result.fun), result.x
        mu1, mu2 = float(np.exp(best_x[0])), float(np.exp(best_x[1]))
        mu = gmems_purity_for_target(mu1, mu2, nu_tilde)
        curve.append(
            BoundPoint(
                nu_tilde_minus=float(nu_tilde),
                v_squared=float(best_value),
                mu1=mu1,
                mu2=mu2,
                mu=float(mu) if mu is not None else float("nan"),
                feasible=True,
            )
        )
    return curve
