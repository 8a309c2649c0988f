"""Variance coefficients, threshold optimization, and Chernoff tail bounds."""

import math

import numpy as np
import pytest

from qstable.analysis import (
    TailConstants,
    bias_coefficient_1bit,
    optimize_thresholds,
    sample_complexity,
    tail_constants,
    variance_coefficient,
)
from qstable.dist import PowerStableDist, ZeroPlus

# High-precision optima pinned from the reference computation; the
# acceptance suite separately checks them against published roundings.
ONE_BIT_OPTIMA = {
    ZeroPlus: (1.593624253, 1.54413865237),
    1.0: (1.0, 2.46740110027),
    2.0: (0.2276308622, 3.06633312246),
}
TWO_BIT_OPTIMA = {
    ZeroPlus: ((3.365234367, 1.7716101, 0.7540323093), 1.12227396602),
    1.0: ((1.926898385, 1.000000011, 0.5189687241), 2.08726778562),
    2.0: ((0.5473675837, 0.1952661674, 0.09345457814), 2.23641127324),
}


def test_variance_closed_form_anchors():
    # 1-bit at eta = 1: information eta^2/(e^eta - 1) for the 0+ family,
    # 4/pi^2 for Cauchy
    assert variance_coefficient(ZeroPlus, 1.0) == pytest.approx(math.e - 1.0, rel=1e-13)
    assert variance_coefficient(1.0, 1.0) == pytest.approx(math.pi**2 / 4.0, rel=1e-13)


def test_variance_accepts_scalar_eta():
    assert variance_coefficient(1.0, 1.0) == variance_coefficient(1.0, np.array([1.0]))


def test_variance_eta_validation():
    with pytest.raises(ValueError, match="decreasing"):
        variance_coefficient(1.0, (0.5, 2.0))
    with pytest.raises(ValueError, match="positive"):
        variance_coefficient(1.0, (2.0, -0.5))
    with pytest.raises(ValueError, match="positive"):
        variance_coefficient(1.0, (math.inf, 1.0))
    with pytest.raises(ValueError):
        variance_coefficient(1.0, np.ones((2, 2)))


def test_variance_infinite_when_scheme_carries_no_information():
    # a gaussian-weight threshold 1e5 scales out: every sample lands in
    # the same bin and the information underflows to zero
    assert variance_coefficient(2.0, 1e-5) == math.inf


@pytest.mark.parametrize("alpha", list(ONE_BIT_OPTIMA))
def test_one_threshold_optima(alpha):
    eta_ref, v_ref = ONE_BIT_OPTIMA[alpha]
    etas, v = optimize_thresholds(alpha, 1)
    assert etas.shape == (1,)
    assert etas[0] == pytest.approx(eta_ref, rel=1e-6)
    assert v == pytest.approx(v_ref, rel=1e-9)
    # and it is a genuine interior minimum
    assert variance_coefficient(alpha, etas * 1.01) > v
    assert variance_coefficient(alpha, etas * 0.99) > v


@pytest.mark.parametrize("alpha", list(TWO_BIT_OPTIMA))
def test_three_threshold_optima(alpha):
    etas_ref, v_ref = TWO_BIT_OPTIMA[alpha]
    etas, v = optimize_thresholds(alpha, 3)
    assert etas.shape == (3,)
    np.testing.assert_allclose(etas, etas_ref, rtol=1e-5)
    assert v == pytest.approx(v_ref, rel=1e-9)
    # refinement pays: three thresholds beat the optimal single one
    assert v < ONE_BIT_OPTIMA[alpha][1]


def test_optimizer_rejects_other_sizes():
    for m in (0, 2, 4, 7):
        with pytest.raises(ValueError, match="m must be"):
            optimize_thresholds(1.0, m)


def test_geometric_ladder_beats_single_threshold():
    """A ratio-3 ladder pinned only by its smallest eta already recovers
    most of the 3-threshold gain in the 0+ family."""
    best = math.inf
    for eta3 in np.linspace(0.4, 0.9, 26):
        best = min(best, variance_coefficient(ZeroPlus, (9.0 * eta3, 3.0 * eta3, eta3)))
    assert TWO_BIT_OPTIMA[ZeroPlus][1] < best < ONE_BIT_OPTIMA[ZeroPlus][1]


# ---------------------------------------------------------------------------
# tail bounds


def _kl_by_hand(p: float, q: float) -> float:
    return p * math.log(p / q) + (1.0 - p) * math.log((1.0 - p) / (1.0 - q))


def test_tail_constants_zero_epsilon_is_small_deviation_limit():
    tc = tail_constants(ZeroPlus, 1.0, 0.0)
    two_v = 2.0 * (math.e - 1.0)
    assert tc.g_right == pytest.approx(two_v, rel=1e-12)
    assert tc.g_left == pytest.approx(two_v, rel=1e-12)
    assert tc.exponent_right == 0.0 and tc.exponent_left == 0.0
    assert tc.failure_bound(10**6) == 1.0


@pytest.mark.parametrize("alpha", [ZeroPlus, 1.0, 2.0, 1.3])
@pytest.mark.parametrize("epsilon", [0.1, 0.3, 0.7])
def test_tail_exponents_are_bernoulli_divergences(alpha, epsilon):
    """The Chernoff exponents must equal KL divergences between the split
    probabilities at the nominal and displaced thresholds, assembled
    here from plain cdf calls."""
    eta = 1.2
    dist = PowerStableDist(alpha)
    tc = tail_constants(alpha, eta, epsilon)
    p0 = dist.cdf(1.0 / eta)
    right = _kl_by_hand(dist.cdf(1.0 / ((1.0 + epsilon) * eta)), p0)
    left = _kl_by_hand(dist.cdf(1.0 / ((1.0 - epsilon) * eta)), p0)
    assert tc.exponent_right == pytest.approx(right, rel=1e-10)
    assert tc.exponent_left == pytest.approx(left, rel=1e-10)
    assert tc.g_right == pytest.approx(epsilon**2 / right, rel=1e-10)
    assert tc.g_left == pytest.approx(epsilon**2 / left, rel=1e-10)


def test_underestimation_tail_is_lighter():
    # overshoot comes from the slowly decaying upper tail, so its
    # constant is the larger one throughout the moderate-epsilon range
    for eps in (0.1, 0.3, 0.5, 0.9):
        tc = tail_constants(ZeroPlus, 1.0, eps)
        assert tc.g_right > tc.g_left


def test_tail_epsilon_one_left_limit_is_continuous():
    tc = tail_constants(ZeroPlus, 1.0, 1.0)
    # -log F(1) = 1 for the 0+ family at eta = 1
    assert tc.exponent_left == pytest.approx(1.0, rel=1e-12)
    assert tc.g_left == pytest.approx(1.0, rel=1e-12)
    near = tail_constants(ZeroPlus, 1.0, 1.0 - 1e-9)
    assert near.exponent_left == pytest.approx(tc.exponent_left, rel=1e-6)


def test_tail_beyond_epsilon_one_has_no_left_event():
    tc = tail_constants(1.0, 0.8, 1.5)
    assert tc.exponent_left is None and tc.g_left is None
    assert 0.0 < tc.failure_bound(50) < 1.0
    assert tc.failure_bound(50) == pytest.approx(math.exp(-50 * tc.exponent_right), rel=1e-12)


def test_tail_validation():
    with pytest.raises(ValueError, match="eta"):
        tail_constants(1.0, -1.0, 0.1)
    with pytest.raises(ValueError, match="epsilon"):
        tail_constants(1.0, 1.0, -0.2)


def test_failure_bound_decreases_with_n():
    tc = tail_constants(1.0, 1.0, 0.25)
    bounds = [tc.failure_bound(n) for n in (10, 100, 1000, 10000)]
    assert all(b1 > b2 for b1, b2 in zip(bounds, bounds[1:]))
    assert all(0.0 < b <= 1.0 for b in bounds)


def test_sample_complexity_exact_is_minimal():
    n_bound = sample_complexity(1.0, 1.0, 0.2, 1e-3)
    n_exact = sample_complexity(1.0, 1.0, 0.2, 1e-3, exact=True)
    tc = tail_constants(1.0, 1.0, 0.2)
    assert 1 <= n_exact <= n_bound
    assert tc.failure_bound(n_exact) <= 1e-3 < tc.failure_bound(n_exact - 1)
    expected = math.ceil(math.log(2.0 / 1e-3) / min(tc.exponent_right, tc.exponent_left))
    assert n_bound == expected


def test_sample_complexity_validation():
    for eps, delta in ((0.0, 0.1), (1.2, 0.1), (0.5, 0.0), (0.5, 1.0)):
        with pytest.raises(ValueError):
            sample_complexity(1.0, 1.0, eps, delta)


# ---------------------------------------------------------------------------
# 1-bit bias coefficient


def test_bias_coefficient_hand_anchors():
    # Cauchy at eta = 1: F S phi = (1/4)(pi^2/2); 0+ at eta = 1 works out
    # to (e - 1)/2
    assert bias_coefficient_1bit(1.0, 1.0) == pytest.approx(math.pi**2 / 8.0, rel=1e-12)
    assert bias_coefficient_1bit(ZeroPlus, 1.0) == pytest.approx((math.e - 1.0) / 2.0, rel=1e-12)


def test_bias_coefficient_validation():
    with pytest.raises(ValueError, match="eta"):
        bias_coefficient_1bit(1.0, 0.0)


def test_tail_constants_is_frozen_dataclass():
    tc = tail_constants(1.0, 1.0, 0.5)
    assert isinstance(tc, TailConstants)
    with pytest.raises(AttributeError):
        tc.epsilon = 0.7
