"""Two-mode Gaussian states as 4x4 quadrature covariance matrices.

Quadrature ordering is (x_a, p_a, x_b, p_b) and the vacuum covariance is
the identity: sigma_mn = <{df_m, df_n}> for the zero-mean fluctuation
operators df_m. Everything is dimensionless, hbar = k_B = 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .errors import NumericalError, PhysicalityError, StructuralError

Matrix = NDArray[np.float64]

#: slack allowed on nu_minus >= 1 in physicality checks
TOL_PHYS = 1e-9
#: slack on the nu_tilde_minus = 1 separability boundary; boundary states
#: are classified separable
TOL_CLASS = 1e-12

#: block-diagonal symplectic form, [[0, 1], [-1, 0]] per mode
SYMPLECTIC_FORM: Matrix = np.array(
    [
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0, 0.0],
    ]
)
SYMPLECTIC_FORM.setflags(write=False)

# partial transposition of mode b acts on sigma as the congruence p_b -> -p_b
_PT_FLIP = np.diag([1.0, 1.0, 1.0, -1.0])
_PT_FLIP.setflags(write=False)


def as_covariance(sigma: np.ndarray) -> Matrix:
    """Coerce to a 4x4 float array, requiring exact stored symmetry."""
    arr = np.asarray(sigma, dtype=float)
    if arr.shape != (4, 4):
        raise StructuralError(f"covariance matrix must be 4x4, got shape {arr.shape}")
    if not np.array_equal(arr, arr.T):
        raise StructuralError("covariance matrix must be symmetric as stored")
    return arr


def _det2(block: np.ndarray) -> float:
    return float(block[0, 0] * block[1, 1] - block[0, 1] * block[1, 0])


def block_determinants(sigma: np.ndarray) -> tuple[float, float, float]:
    """Determinants (det alpha, det beta, det gamma) of the 2x2 blocks."""
    return _det2(sigma[:2, :2]), _det2(sigma[2:, 2:]), _det2(sigma[:2, 2:])


def seralian(sigma: np.ndarray) -> float:
    """Local-symplectic invariant det alpha + det beta + 2 det gamma."""
    da, db, dg = block_determinants(sigma)
    return da + db + 2.0 * dg


def _spectrum_from_invariants(delta: float, det_sigma: float) -> tuple[float, float]:
    """Solve nu^4 - delta nu^2 + det sigma = 0 for the symplectic spectrum.

    Discriminants within rounding noise of zero are treated as exactly
    degenerate (nu_plus = nu_minus = det^(1/4)), and the small root is
    recovered from the product identity nu+^2 nu-^2 = det sigma instead
    of the cancelling difference.
    """
    radicand = delta * delta - 4.0 * det_sigma
    scale = max(1.0, delta * delta, 4.0 * abs(det_sigma))
    if radicand < -1e-8 * scale:
        raise NumericalError(
            "degenerate symplectic spectrum: discriminant "
            f"{radicand:.3e} is negative beyond tolerance"
        )
    if radicand < 1e-10 * scale:
        nu = float(max(det_sigma, 0.0)) ** 0.25
        return nu, nu
    nu_plus_sq = (delta + np.sqrt(radicand)) / 2.0
    nu_plus = np.sqrt(max(nu_plus_sq, 0.0))
    nu_minus = np.sqrt(max(det_sigma, 0.0) / nu_plus_sq) if nu_plus_sq > 0.0 else 0.0
    return float(nu_plus), float(nu_minus)


def symplectic_eigenvalues(sigma: np.ndarray) -> tuple[float, float]:
    """Symplectic eigenvalues (nu_plus, nu_minus) of a two-mode covariance.

    Invariant under symplectic congruences; nu_minus >= 1 characterises
    physical states.
    """
    arr = as_covariance(sigma)
    return _spectrum_from_invariants(seralian(arr), float(np.linalg.det(arr)))


def ppt_min_eigenvalue(sigma: np.ndarray) -> float:
    """Smallest symplectic eigenvalue after partial transposition of mode b.

    Values below 1 witness entanglement of the two-mode state.
    """
    arr = as_covariance(sigma)
    flipped = _PT_FLIP @ arr @ _PT_FLIP
    return _spectrum_from_invariants(
        seralian(flipped), float(np.linalg.det(flipped))
    )[1]


def validate_physical(sigma: np.ndarray) -> tuple[bool, str]:
    """Check positive definiteness and the uncertainty bound nu_minus >= 1.

    Returns (ok, diagnostic); the diagnostic names the violated quantity.
    Raises StructuralError for non-symmetric input.
    """
    arr = as_covariance(sigma)
    min_eig = float(np.linalg.eigvalsh(arr).min())
    if min_eig <= 0.0:
        return False, f"not positive definite: min eigenvalue {min_eig:.6e} <= 0"
    nu_plus, nu_minus = _spectrum_from_invariants(
        seralian(arr), float(np.linalg.det(arr))
    )
    if nu_minus < 1.0 - TOL_PHYS:
        return False, (
            f"uncertainty relation violated: nu_minus = {nu_minus:.12g} < 1"
        )
    return True, f"physical: nu_minus = {nu_minus:.12g}, nu_plus = {nu_plus:.12g}"


def assert_physical(sigma: np.ndarray, label: str = "covariance matrix") -> Matrix:
    """Return the validated array or raise PhysicalityError."""
    arr = as_covariance(sigma)
    ok, diagnostic = validate_physical(arr)
    if not ok:
        raise PhysicalityError(f"{label} is unphysical: {diagnostic}")
    return arr


@dataclass(frozen=True)
class SimonInvariants:
    """Standard-form parameters (a, b, c_plus, c_minus) of a two-mode state.

    The derived quantities are the marginal purities mu1, mu2, the global
    purity mu and the seralian delta.
    """

    a: float
    b: float
    c_plus: float
    c_minus: float

    @property
    def mu1(self) -> float:
        return 1.0 / self.a

    @property
    def mu2(self) -> float:
        return 1.0 / self.b

    @property
    def det_sigma(self) -> float:
        ab = self.a * self.b
        return (ab - self.c_plus**2) * (ab - self.c_minus**2)

    @property
    def mu(self) -> float:
        return 1.0 / np.sqrt(self.det_sigma)

    @property
    def delta(self) -> float:
        return self.a**2 + self.b**2 + 2.0 * self.c_plus * self.c_minus


def from_simon(inv: SimonInvariants) -> Matrix:
    """Build the standard-form covariance for the given invariants.

    Raises PhysicalityError when the parameter set describes no state.
    """
    sigma = np.array(
        [
            [inv.a, 0.0, inv.c_plus, 0.0],
            [0.0, inv.a, 0.0, inv.c_minus],
            [inv.c_plus, 0.0, inv.b, 0.0],
            [0.0, inv.c_minus, 0.0, inv.b],
        ]
    )
    return assert_physical(sigma, "standard-form parameter set")


def simon_invariants(sigma: np.ndarray) -> SimonInvariants:
    """Read (a, b, c_plus, c_minus) off a standard-form covariance matrix.

    The input must already be in standard form: diagonal 2x2 blocks with
    equal entries on each mode diagonal. Inverse of from_simon.
    """
    arr = as_covariance(sigma)
    scale = float(np.abs(arr).max())
    tol = 1e-10 * max(1.0, scale)
    pattern = np.array(
        [
            [arr[0, 0], 0.0, arr[0, 2], 0.0],
            [0.0, arr[1, 1], 0.0, arr[1, 3]],
            [arr[0, 2], 0.0, arr[2, 2], 0.0],
            [0.0, arr[1, 3], 0.0, arr[3, 3]],
        ]
    )
    if (
        np.abs(arr - pattern).max() > tol
        or abs(arr[0, 0] - arr[1, 1]) > tol
        or abs(arr[2, 2] - arr[3, 3]) > tol
    ):
        raise StructuralError("matrix is not in two-mode standard form")
    return SimonInvariants(
        a=float(arr[0, 0]),
        b=float(arr[2, 2]),
        c_plus=float(arr[0, 2]),
        c_minus=float(arr[1, 3]),
    )


def purity_invariants(sigma: np.ndarray) -> tuple[float, float, float, float]:
    """Local-symplectic invariants (mu1, mu2, mu, delta) of any physical state."""
    arr = as_covariance(sigma)
    da, db, _ = block_determinants(arr)
    det_sigma = float(np.linalg.det(arr))
    if da <= 0.0 or db <= 0.0 or det_sigma <= 0.0:
        raise PhysicalityError("purities undefined: nonpositive block determinant")
    return (
        1.0 / np.sqrt(da),
        1.0 / np.sqrt(db),
        1.0 / np.sqrt(det_sigma),
        seralian(arr),
    )


def purity(sigma: np.ndarray) -> float:
    """Global purity 1/sqrt(det sigma)."""
    return purity_invariants(sigma)[2]


def thermal_state(m_a: float, m_b: float) -> Matrix:
    """Product of single-mode thermal states with mean occupations m_a, m_b."""
    if m_a < 0.0 or m_b < 0.0:
        raise PhysicalityError(
            f"thermal occupations must be nonnegative, got ({m_a}, {m_b})"
        )
    return np.diag([1.0 + 2.0 * m_a, 1.0 + 2.0 * m_a, 1.0 + 2.0 * m_b, 1.0 + 2.0 * m_b])


def local_squeeze(sigma: np.ndarray, r_a: float, r_b: float) -> Matrix:
    """Apply the local squeezing congruence diag(e^r, e^-r) on each mode.

    Leaves the symplectic eigenvalues unchanged.
    """
    arr = as_covariance(sigma)
    s = np.diag([np.exp(r_a), np.exp(-r_a), np.exp(r_b), np.exp(-r_b)])
    out = s @ arr @ s
    return (out + out.T) / 2.0


def twin_beam(r: float) -> Matrix:
    """Two-mode squeezed vacuum with squeezing parameter r (pure state)."""
    ch = np.cosh(2.0 * r)
    sh = np.sinh(2.0 * r)
    return np.array(
        [
            [ch, 0.0, sh, 0.0],
            [0.0, ch, 0.0, -sh],
            [sh, 0.0, ch, 0.0],
            [0.0, -sh, 0.0, ch],
        ]
    )


def classify_separability(sigma: np.ndarray) -> str:
    """Label a physical state 'entangled' or 'separable' via the PPT test."""
    return "entangled" if ppt_min_eigenvalue(sigma) < 1.0 - TOL_CLASS else "separable"
