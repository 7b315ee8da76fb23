import math

import pytest

from qpurity import PURE_STATE_PURITY
from qpurity.errors import DegenerateBoundary, UnstableKernel
from qpurity.estimator.bandwidth import delta_star, solve_delta_opt
from qpurity.estimator.risk import RiskBounds, risk_bounds, theoretical_rate
from qpurity.estimator.variance import expected_estimate
from qpurity.helper.custom_enums import Regime, Side
from qpurity.states import SmoothnessClass, class_norm, vacuum


def test_parametric_rate():
    assert theoretical_rate(SmoothnessClass(0.2, 2.0), 0.9, 1000) == pytest.approx(1e-3)
    assert theoretical_rate(SmoothnessClass(0.2, 2.0), 0.9, 1000, Side.lower) == pytest.approx(1e-3)


def test_slow_rate_sides():
    cls = SmoothnessClass(0.2, 2.0)
    eta, n = 0.5, 10**5
    upper = theoretical_rate(cls, eta, n, Side.upper)
    lower = theoretical_rate(cls, eta, n, Side.lower)
    exponent = 4 * 0.2 / (0.5 + 0.4)
    assert upper == pytest.approx(n**-exponent)
    assert upper / lower == pytest.approx(math.log(n) ** exponent)


def test_sub_gaussian_rate():
    cls = SmoothnessClass(0.3, 1.0, L=2.0)
    x = 1 / solve_delta_opt(cls, 0.8, 10**4)
    assert theoretical_rate(cls, 0.8, 10**4) == pytest.approx(4.0 * math.exp(-4 * 0.3 * x))


def test_rate_boundary():
    with pytest.raises(DegenerateBoundary):
        theoretical_rate(SmoothnessClass(0.25, 2.0), 0.5, 1000)


def test_rates_decrease_with_n():
    for cls, eta in [(SmoothnessClass(0.2, 2.0), 0.5), (SmoothnessClass(0.2, 2.0), 0.9), (SmoothnessClass(0.5, 1.0), 0.7)]:
        assert theoretical_rate(cls, eta, 10**5) < theoretical_rate(cls, eta, 10**3)


def test_parametric_bounds():
    cls = SmoothnessClass(0.2, 2.0, L=0.8)
    eta, n = 0.9, 1000
    delta, _ = delta_star(0.2, eta, n)
    bounds = risk_bounds(cls, eta, delta, n)
    degenerate = 8 * eta**2 / ((1 - eta) ** 2 * math.pi**2 * n**2) * math.exp((1 - eta) / (eta * delta**2))
    linear = 8 * eta * 0.8 / (4 * 0.2 * eta - 1 + eta) / n
    assert bounds.regime is Regime.r2_parametric
    assert bounds.var_bound == pytest.approx(degenerate + linear)
    assert bounds.bias_bound_sq == pytest.approx(0.64 * math.exp(-0.8 / delta**2))
    assert bounds.total == bounds.bias_bound_sq + bounds.var_bound


def test_slow_bounds():
    cls = SmoothnessClass(0.2, 2.0)
    eta, n, delta = 0.5, 10**4, 0.4
    bounds = risk_bounds(cls, eta, delta, n)
    linear = 8 / (n * math.pi) * eta / (1 - eta - 0.8 * eta) * math.exp((0.5 - 0.4) / delta**2)
    degenerate = 8 * eta**2 / ((1 - eta) ** 2 * math.pi**2 * n**2) * math.exp(1 / delta**2)
    assert bounds.regime is Regime.r2_slow
    assert bounds.var_bound == pytest.approx(degenerate + linear)


def test_sub_gaussian_bounds():
    cls = SmoothnessClass(0.3, 1.0)
    eta, n, delta = 0.8, 10**4, 0.3
    c = (1 - eta) / (2 * eta)
    bounds = risk_bounds(cls, eta, delta, n)
    linear = 8 / (n * math.pi) * eta / (1 - eta) * math.exp(c / delta**2 - 0.6 / delta)
    degenerate = 8 * eta**2 / ((1 - eta) ** 2 * math.pi**2 * n**2) * math.exp(2 * c / delta**2)
    assert bounds.regime is Regime.r_lt_2
    assert bounds.var_bound == pytest.approx(degenerate + linear)
    assert bounds.bias_bound_sq == pytest.approx(math.exp(-1.2 / delta))


def test_bias_bound_grows_with_delta():
    cls = SmoothnessClass(0.3, 1.5, L=0.5)
    values = [risk_bounds(cls, 0.9, delta, 1000).bias_bound_sq for delta in (0.1, 0.5, 2.0, 100.0)]
    assert values == sorted(values)
    assert values[-1] < 0.25


def test_bounds_reject_delta():
    with pytest.raises(ValueError):
        risk_bounds(SmoothnessClass(0.2, 2.0), 0.9, 0.0, 100)


def test_risk_bounds_total():
    assert RiskBounds(0.5, 0.25, Regime.r2_parametric).total == 0.75


@pytest.mark.parametrize("delta", [0.3, 0.4, 0.5])
def test_vacuum_bias_within_bound(delta):
    """
    Test that the exact bias (e^{-1/(2δ²)}/(2π) for the vacuum) stays under L·e^{-2αδ^{-r}}
    """
    cls = SmoothnessClass(0.2, 2.0, L=class_norm(vacuum(), 0.2, 2.0))
    bias = abs(expected_estimate(vacuum(), delta) - PURE_STATE_PURITY)
    assert bias == pytest.approx(math.exp(-0.5 / delta**2) / (2 * math.pi), rel=1e-6)
    assert bias <= cls.L * math.exp(-2 * 0.2 / delta**2)
    assert bias**2 <= risk_bounds(cls, 0.9, delta, 1000).bias_bound_sq


@pytest.mark.parametrize(
    "cls, eta, delta",
    [
        (SmoothnessClass(0.2, 1.0), 0.5, 0.02),
        (SmoothnessClass(0.1, 2.0), 0.5, 0.03),
        (SmoothnessClass(0.2, 2.0), 0.9, 0.01),
    ],
)
def test_bounds_unstable_exponent(cls, eta, delta):
    with pytest.raises(UnstableKernel):
        risk_bounds(cls, eta, delta, 1000)


def test_bounds_at_largest_stable_exponent():
    eta = 0.5
    delta = math.sqrt(2 * 0.5 / 699)
    bounds = risk_bounds(SmoothnessClass(0.2, 2.0), eta, delta, 10**6)
    assert math.isfinite(bounds.var_bound)
