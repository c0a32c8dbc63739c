"""Dissipative two-mode Gaussian thermometers: exact covariance dynamics,
Bures-speed geometry, Fisher-information thermometry and random-state
sampling, with a CSV-emitting command line front end."""

from .dynamics import (
    SystemParams,
    Trajectory,
    build_diffusion,
    build_drift,
    is_stable,
    lyapunov_rhs,
    propagate,
    solve_steady,
    trajectory,
)
from .geometry import (
    SpeedSample,
    SymplecticRates,
    bures_increment,
    initial_speed,
    local_speed,
    riemannian_speed,
    symplectic_eigenvalue_rates,
)
from .metrology import (
    QfiPoint,
    occupation,
    occupation_to_temperature,
    qfi_occupation,
    qfi_scan,
    qfi_temperature,
    uhlmann_fidelity,
)
from .sampler import (
    BoundPoint,
    PurityTriple,
    SeedSpec,
    classify_region,
    gmems,
    realize_state,
    sample_invariants,
    sample_rng,
    sample_state,
    speed_lower_bound,
)
from .states import (
    SYMPLECTIC_FORM,
    SimonInvariants,
    classify_separability,
    from_simon,
    local_squeeze,
    ppt_min_eigenvalue,
    purity,
    purity_invariants,
    simon_invariants,
    symplectic_eigenvalues,
    thermal_state,
    twin_beam,
    validate_physical,
)

__version__ = "0.1.0"
