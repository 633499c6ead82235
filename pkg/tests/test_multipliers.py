import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from convsplit.multipliers import (
    BoundsSpec,
    MultiplierState,
    SecantConfig,
    SecantFailure,
    bp_correct,
    bpmc_correct,
    clipped_mass,
    feedback,
)
from convsplit.grid import weighted_sum

UNIT = BoundsSpec(0.0, 1.0)


def _check_kkt(u, lam, bounds):
    assert u.min() >= bounds.m and u.max() <= bounds.M
    assert np.all(lam >= 0.0)
    assert np.all(lam * bounds.H(u) == 0.0)


def test_bounds_validation():
    with pytest.raises(ValueError):
        BoundsSpec(1.0, 1.0)
    with pytest.raises(ValueError):
        BoundsSpec(0.0, math.inf)
    with pytest.raises(ValueError):
        BoundsSpec(0.0, 1.0, "linear")
    assert BoundsSpec.positivity().dH_lower == 1.0


def test_derivative_of_quadratic_h():
    b = BoundsSpec(1.0, 2.0)
    assert b.dH_lower == 1.0 and b.dH_upper == -1.0


def test_inside_points_unchanged():
    v = np.array([0.1, 0.5, 0.9])
    u, s = bp_correct(v, MultiplierState.zeros(3), UNIT, 0.1)
    assert np.array_equal(u, v) and not np.any(s.lam)


def test_branch_formula_lower():
    u, s = bp_correct(np.array([-0.02, 0.5]), MultiplierState.zeros(2), UNIT, 0.1)
    assert u[0] == 0.0
    assert s.lam[0] == pytest.approx(0.2, rel=1e-14)


def test_branch_formula_upper():
    u, s = bp_correct(np.array([1.03]), MultiplierState.zeros(1), UNIT, 0.1)
    assert u[0] == 1.0
    # H'(1) = -1, so lam = (1 - 1.03) / (0.1 * -1)
    assert s.lam[0] == pytest.approx(0.3, rel=1e-13)


def test_random_out_of_range_predicate_scan(rng):
    for _ in range(50):
        v = rng.uniform(0.0, 1.0, 200)
        out = rng.random(200) < 0.3
        v[out] = rng.choice([-1.0, 1.0], out.sum()) * rng.uniform(0.0, 0.5, out.sum()) + (v[out] > 0.5)
        u, s = bp_correct(v, MultiplierState.zeros(200), UNIT, 0.05)
        _check_kkt(u, s.lam, UNIT)


def test_feedback_shifts_predictor():
    state = MultiplierState(np.array([0.5, 0.0]))
    fb = feedback(state, np.array([0.0, 0.3]), UNIT)
    np.testing.assert_array_equal(fb, [0.5, 0.0])
    u, s = bp_correct(np.array([0.04, 0.3]), state, UNIT, 0.1, fb)
    assert u[0] == 0.0 and s.lam[0] == pytest.approx(0.1)


def test_nonfinite_prediction_raises():
    with pytest.raises(FloatingPointError):
        bp_correct(np.array([np.nan]), MultiplierState.zeros(1), UNIT, 0.1)


def test_bpmc_zero_when_mass_already_right():
    v = np.array([0.2, 0.4, 0.6, 0.8])
    h = 0.25
    u, s = bpmc_correct(v, MultiplierState.zeros(4), UNIT, 0.1, h * v.sum(), h)
    assert s.xi == 0.0 and np.array_equal(u, v)


def test_bpmc_affine_shift():
    v = np.array([0.2, 0.4, 0.6, 0.8])
    h, tau, delta = 0.25, 0.1, 0.01
    target = h * v.sum() + delta
    u, s = bpmc_correct(v, MultiplierState.zeros(4), UNIT, tau, target, h)
    assert s.xi == pytest.approx(delta / (tau * 1.0), rel=1e-12)
    assert s.secant_iterations <= 2 + 2
    assert abs(h * u.sum() - target) <= 1e-13


def test_bpmc_with_clipping_hits_target(rng):
    h = 1.0 / 300
    v = np.clip(rng.normal(0.5, 0.4, 300), -0.3, 1.3)
    target = 0.55
    u, s = bpmc_correct(v, MultiplierState.zeros(300), UNIT, 0.01, target, h)
    _check_kkt(u, s.lam, UNIT)
    assert abs(h * u.sum() - target) <= 1e-13


def test_bpmc_mask_leaves_boundary():
    v = np.array([5.0, 0.2, -0.1, 0.7, -5.0])
    u, s = bpmc_correct(v, MultiplierState.zeros(5), UNIT, 0.1, 0.25 * 0.9, 0.25, mask=slice(1, -1))
    assert u[0] == 5.0 and u[-1] == -5.0
    assert 0.25 * u[1:-1].sum() == pytest.approx(0.225, abs=1e-14)


def test_bpmc_unreachable_target_fails():
    with pytest.raises(SecantFailure):
        bpmc_correct(np.full(4, 0.5), MultiplierState.zeros(4), UNIT, 0.1, 2.0, 0.25)


def test_bisection_fallback_when_secant_stalls():
    # a tiny seed puts both secant points on a flat piece of F
    v = np.full(10, -3.0)
    cfg = SecantConfig(xi1_seed=1e-9)
    u, s = bpmc_correct(v, MultiplierState.zeros(10), UNIT, 0.1, 0.5, 0.1, secant=cfg)
    assert abs(0.1 * u.sum() - 0.5) <= 1e-13
    _check_kkt(u, s.lam, UNIT)


@settings(max_examples=80, deadline=None)
@given(
    seed=st.integers(0, 2**31),
    frac=st.floats(0.05, 0.95),
    tau=st.floats(1e-4, 0.5),
    spread=st.floats(0.0, 0.6),
)
def test_bpmc_property(seed, frac, tau, spread):
    r = np.random.default_rng(seed)
    n = 64
    h = 1.0 / n
    v = r.uniform(-spread, 1 + spread, n)
    target = frac
    u, s = bpmc_correct(v, MultiplierState.zeros(n), UNIT, tau, target, h)
    _check_kkt(u, s.lam, UNIT)
    assert abs(h * u.sum() - target) <= 1e-13
    assert clipped_mass(u, UNIT, h) == weighted_sum(u, h)
