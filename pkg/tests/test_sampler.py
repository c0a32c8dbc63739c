import numpy as np
import pytest

from gaussthermo.dynamics import SystemParams
from gaussthermo.errors import PhysicalityError
from gaussthermo.geometry import initial_speed
from gaussthermo.sampler import (
    PurityTriple,
    classify_region,
    coexistence_mu_cap,
    global_purity_bounds,
    gmems,
    gmems_purity_for_target,
    realize_state,
    sample_invariants,
    sample_rng,
    sample_state,
    separable_mu_cap,
    seralian_bounds,
    speed_lower_bound,
)
from gaussthermo.states import (
    ppt_min_eigenvalue,
    purity_invariants,
    thermal_state,
    twin_beam,
    validate_physical,
)


def triple_within_bounds(triple):
    if not (0.0 < triple.mu1 <= 1.0 and 0.0 < triple.mu2 <= 1.0):
        return False
    lo, hi = global_purity_bounds(triple.mu1, triple.mu2)
    if not (lo - 1e-12 <= triple.mu <= hi + 1e-12):
        return False
    d_lo, d_hi = seralian_bounds(triple.mu1, triple.mu2, triple.mu)
    return d_lo - 1e-9 <= triple.delta <= d_hi + 1e-9


def test_sample_invariants_bulk_property():
    rng = np.random.default_rng(12345)
    regions = set()
    for _ in range(100_000):
        triple = sample_invariants(rng)
        assert triple_within_bounds(triple)
        regions.add(classify_region(triple))
    assert "separable" in regions and "entangled" in regions
    assert "unphysical" not in regions


def test_sampling_is_reproducible():
    first = sample_state(sample_rng(42, 7))
    second = sample_state(sample_rng(42, 7))
    assert first[0] == second[0]
    assert np.array_equal(first[1], second[1])
    other = sample_state(sample_rng(42, 8))
    assert not np.array_equal(first[1], other[1])


def test_realized_states_round_trip():
    for i in range(300):
        triple, sigma = sample_state(sample_rng(77, i))
        assert validate_physical(sigma)[0]
        mu1, mu2, mu, delta = purity_invariants(sigma)
        assert mu1 == pytest.approx(triple.mu1, abs=1e-8)
        assert mu2 == pytest.approx(triple.mu2, abs=1e-8)
        assert mu == pytest.approx(triple.mu, abs=1e-8)
        assert delta == pytest.approx(triple.delta, rel=1e-8, abs=1e-8)


def test_realize_state_vacuum_and_errors():
    assert realize_state(PurityTriple(1.0, 1.0, 1.0, 2.0)) == pytest.approx(np.eye(4))
    # global purity above its cap: eta radicands turn negative
    with pytest.raises(PhysicalityError):
        realize_state(PurityTriple(0.5, 0.5, 0.9, 8.5))
    with pytest.raises(PhysicalityError):
        realize_state(PurityTriple(1.5, 0.5, 0.5, 8.0))


def test_region_classification_examples():
    assert classify_region(PurityTriple(0.5, 0.5, 0.2, 3.0)) == "unphysical"
    assert classify_region(PurityTriple(0.5, 0.5, 0.26, 8.0)) == "separable"
    assert classify_region(PurityTriple(0.5, 0.5, 0.35, 7.0)) == "coexistence"
    assert classify_region(PurityTriple(0.5, 0.5, 0.9, 3.0)) == "entangled"
    assert separable_mu_cap(0.5, 0.5) == pytest.approx(1.0 / 3.0)
    assert coexistence_mu_cap(0.5, 0.5) == pytest.approx(0.25 / np.sqrt(0.4375))


def test_regions_agree_with_ppt_classification():
    checked = {"separable": 0, "entangled": 0, "coexistence": 0}
    for i in range(600):
        triple, sigma = sample_state(sample_rng(13, i))
        region = classify_region(triple)
        checked[region] += 1
        nu_tilde = ppt_min_eigenvalue(sigma)
        if region == "separable":
            assert nu_tilde >= 1.0 - 1e-9
        elif region == "entangled":
            assert nu_tilde < 1.0 + 1e-9
    assert checked["separable"] > 0 and checked["entangled"] > 0


def test_coexistence_region_has_both_behaviours():
    mu1 = mu2 = 0.5
    mu = 0.36  # inside (1/3, 0.3779...)
    d_lo, d_hi = seralian_bounds(mu1, mu2, mu)
    labels = set()
    for delta in np.linspace(d_lo, d_hi, 40):
        sigma = realize_state(PurityTriple(mu1, mu2, mu, delta))
        labels.add("entangled" if ppt_min_eigenvalue(sigma) < 1.0 else "separable")
    assert labels == {"entangled", "separable"}


def test_gmems_zero_correlation_limit():
    state = gmems(0.5, 0.4, 0.2)  # mu = mu1 mu2
    expected = thermal_state((1.0 / 0.5 - 1.0) / 2.0, (1.0 / 0.4 - 1.0) / 2.0)
    assert state == pytest.approx(expected, abs=1e-12)


def test_gmems_recovers_twin_beam_at_unit_purity():
    for r in (0.7, 1.3):
        mu_marginal = 1.0 / np.cosh(2.0 * r)
        state = gmems(mu_marginal, mu_marginal, 1.0)
        assert state == pytest.approx(twin_beam(r), rel=1e-12, abs=1e-12)


def test_gmems_saturates_seralian_lower_bound():
    for mu1, mu2, mu in ((0.6, 0.45, 0.5), (0.3, 0.3, 0.4), (0.8, 0.5, 0.42)):
        state = gmems(mu1, mu2, mu)
        _, _, _, delta = purity_invariants(state)
        lower, _ = seralian_bounds(mu1, mu2, mu)
        assert abs(delta - lower) <= 1e-10


def test_gmems_radicand_error():
    with pytest.raises(PhysicalityError):
        gmems(0.5, 0.5, 0.2)  # mu below mu1 mu2


def test_gmems_is_extremal_at_matched_invariants():
    rng = np.random.default_rng(21)
    mu1, mu2, mu = 0.7, 0.55, 0.6
    reference = ppt_min_eigenvalue(gmems(mu1, mu2, mu))
    d_lo, d_hi = seralian_bounds(mu1, mu2, mu)
    below = 0
    for _ in range(1000):
        delta = rng.uniform(d_lo, d_hi)
        sigma = realize_state(PurityTriple(mu1, mu2, mu, delta))
        if ppt_min_eigenvalue(sigma) < reference - 1e-10:
            below += 1
    assert below == 0


def test_gmems_purity_inversion():
    for mu1, mu2 in ((0.4, 0.3), (0.8, 0.8), (0.1, 0.6)):
        for target in (0.3, 0.7, 1.0):
            mu = gmems_purity_for_target(mu1, mu2, target)
            if mu is None:
                continue
            assert ppt_min_eigenvalue(gmems(mu1, mu2, mu)) == pytest.approx(
                target, abs=1e-9
            )
    assert gmems_purity_for_target(1.0, 1.0, 3.0) is None


def test_speed_lower_bound_masks_infeasible_bins():
    params = SystemParams(m_a=0.1, m_b=0.1)
    curve = speed_lower_bound(np.array([0.4, 1.0]), params, 1e-3, coarse=8)
    assert all(point.feasible for point in curve)
    assert all(np.isfinite(point.v_squared) for point in curve)
    assert curve[0].v_squared > 0.0


def test_speed_lower_bound_dominates_samples():
    params = SystemParams(m_a=0.5, m_b=0.5)
    grid = np.linspace(0.1, 1.0, 10)
    curve = speed_lower_bound(grid, params, 1e-3, coarse=10)
    xs = np.array([b.nu_tilde_minus for b in curve])
    ys = np.array([b.v_squared for b in curve])
    violations = 0
    for i in range(800):
        _, sigma = sample_state(sample_rng(31, i))
        sample = initial_speed(sigma, params, 1e-3)
        if sample.classification != "entangled" or sample.excluded:
            continue
        bound = np.interp(sample.nu_tilde_minus, xs, ys)
        if sample.v_squared < bound - 1e-9:
            violations += 1
    assert violations == 0
