import math

import pytest

from qpurity import PURE_STATE_PURITY
from qpurity.errors import NonIntegrable, TooFewSamples, UnstableKernel
from qpurity.estimator.variance import asymptotic_variance, estimand, exact_variance, expected_estimate
from qpurity.states import cat, coherent, single_photon, squeezed, thermal, true_purity, vacuum


def vacuum_variance(eta):
    """Closed form of the asymptotic variance of the vacuum."""
    b = 1 / (2 * eta)
    integral = 4 * (math.sqrt(1 - b * b) + b * math.asin(b)) / (1 - b * b) ** 1.5
    return (integral - 4) / (4 * math.pi**2)


def test_expected_estimate_vacuum():
    delta = 0.4
    assert expected_estimate(vacuum(), delta) == pytest.approx((1 - math.exp(-1 / (2 * delta**2))) / (2 * math.pi), rel=1e-9)


def test_expected_estimate_thermal():
    tau, delta = math.tanh(0.5), 0.5
    expected = tau / (2 * math.pi) * (1 - math.exp(-1 / (2 * tau * delta**2)))
    assert expected_estimate(thermal(1.0), delta) == pytest.approx(expected, rel=1e-9)


def test_expected_estimate_limit():
    assert expected_estimate(single_photon(), 0.05) == pytest.approx(PURE_STATE_PURITY, rel=1e-9)


def test_expected_estimate_rejects_delta():
    with pytest.raises(ValueError):
        expected_estimate(vacuum(), 0.0)


def test_estimand():
    assert estimand(vacuum()) == PURE_STATE_PURITY
    assert estimand(thermal(2.0)) == true_purity(thermal(2.0))
    assert estimand(coherent(0.0)) == pytest.approx(PURE_STATE_PURITY, abs=1e-9)


def test_estimand_blind_to_phase():
    # phase averaging spreads |W̃|² over every ray, the kernel only sees |m|²
    assert estimand(coherent(4.0)) < PURE_STATE_PURITY
    assert estimand(cat(1.0)) < PURE_STATE_PURITY
    assert estimand(squeezed(0.5, 1.0)) < PURE_STATE_PURITY


@pytest.mark.parametrize("eta", [0.7, 0.9, 0.95])
def test_asymptotic_variance_vacuum(eta):
    assert asymptotic_variance(vacuum(), eta) == pytest.approx(vacuum_variance(eta), rel=1e-4)


def test_asymptotic_variance_reference():
    assert asymptotic_variance(vacuum(), 0.9) == pytest.approx(0.1029, abs=5e-4)


@pytest.mark.parametrize("eta", [0.2, 0.5])
def test_asymptotic_variance_not_integrable(eta):
    with pytest.raises(NonIntegrable):
        asymptotic_variance(vacuum(), eta)


def test_asymptotic_variance_thermal():
    assert asymptotic_variance(thermal(1.0), 0.9) > 0


def test_exact_variance_limit():
    # n·Var → 4ζ₁, which tends to the asymptotic variance as δ → 0
    n = 10**14
    assert n * exact_variance(vacuum(), 0.9, 0.08, n) == pytest.approx(asymptotic_variance(vacuum(), 0.9), rel=1e-3)


def test_exact_variance_decreases_with_n():
    values = [exact_variance(vacuum(), 0.9, 0.35, n) for n in (10, 100, 1000)]
    assert values[0] > values[1] > values[2] > 0


def test_exact_variance_few_samples():
    with pytest.raises(TooFewSamples):
        exact_variance(vacuum(), 0.9, 0.35, 1)


def test_exact_variance_unstable():
    with pytest.raises(UnstableKernel):
        exact_variance(vacuum(), 0.5, 0.02, 100)
