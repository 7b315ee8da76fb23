import math

import numpy as np
import pytest

from qpurity.errors import ConfigError, TooFewSamples, TooManySamples, UnstableKernel
from qpurity.estimator import (
    EstimatorConfig,
    empirical_power,
    estimate_pairwise_oracle,
    estimate_quadratic_functional,
    kernel_g,
    kernel_mass,
    t_grid,
)
from qpurity.tomography import HomodyneSample, SampleBatch


def batch(values):
    return SampleBatch(values, np.zeros(len(values)))


@pytest.mark.parametrize("kwargs", [{"eta": 1.0, "delta": 0.5}, {"eta": 0.0, "delta": 0.5}, {"eta": 0.9, "delta": 0.0}, {"eta": 0.9, "delta": math.inf}, {"eta": 0.9, "delta": 0.5, "dt": 0.0}])
def test_config_validation(kwargs):
    with pytest.raises(ConfigError):
        EstimatorConfig(**kwargs)


def test_config_properties():
    cfg = EstimatorConfig(0.81, 0.5)
    assert cfg.t_max == pytest.approx(1 / (0.5 * 0.9))
    assert cfg.a == pytest.approx(0.095)


def test_two_equal_samples_closed_form():
    # |S(t)|² - n = 2 for two equal samples, so d² = η/(8π) ∫ 2|t| e^{at²} dt
    # Simpson error is O(dt⁴), about 5e-9 relative at the default dt=0.05
    cfg = EstimatorConfig(0.9, 0.5, dt=0.005)
    result = estimate_quadratic_functional(batch([0.3, 0.3]), cfg)
    expected = cfg.eta * math.expm1(cfg.a * cfg.t_max**2) / (4 * math.pi * cfg.a)
    assert result.d2_hat == pytest.approx(expected, rel=1e-9)
    assert result.kernel_mass == pytest.approx(expected, rel=1e-12)


def test_result_fields():
    cfg = EstimatorConfig(0.9, 0.4)
    result = estimate_quadratic_functional(batch([0.1, -0.4, 1.2]), cfg)
    assert result.n == 3
    assert result.eta == 0.9
    assert result.delta == 0.4
    assert result.t_max == cfg.t_max
    assert result.nodes % 2 == 1


def test_sequence_of_samples():
    values = [HomodyneSample(0.1, 0.0), HomodyneSample(-0.7, 1.0), HomodyneSample(0.4, 2.0)]
    cfg = EstimatorConfig(0.8, 0.5)
    assert estimate_quadratic_functional(values, cfg) == estimate_quadratic_functional(batch([0.1, -0.7, 0.4]), cfg)


def test_phases_are_ignored():
    cfg = EstimatorConfig(0.8, 0.5)
    first = estimate_quadratic_functional(SampleBatch([0.1, 0.9], [0.0, 0.0]), cfg)
    second = estimate_quadratic_functional(SampleBatch([0.1, 0.9], [1.0, 3.0]), cfg)
    assert first == second


def test_too_few_samples():
    with pytest.raises(TooFewSamples):
        estimate_quadratic_functional(batch([0.5]), EstimatorConfig(0.9, 0.5))


def test_non_finite_samples():
    with pytest.raises(ValueError):
        estimate_quadratic_functional(batch([0.5, math.nan]), EstimatorConfig(0.9, 0.5))


def test_unstable_kernel():
    with pytest.raises(UnstableKernel):
        estimate_quadratic_functional(batch([0.0, 1.0]), EstimatorConfig(0.5, 0.01))


def test_t_grid():
    cfg = EstimatorConfig(0.9, 0.2)
    nodes, weights = t_grid(batch([3.0, -1.0]), cfg)
    spacing = nodes[1] - nodes[0]
    assert (nodes.size - 1) % 2 == 0
    assert nodes[0] == 0.0
    assert nodes[-1] == pytest.approx(cfg.t_max)
    assert spacing <= math.pi / 16 + 1e-12
    assert weights.sum() == pytest.approx(cfg.t_max)


def test_t_grid_spacing_override():
    cfg = EstimatorConfig(0.9, 0.5, dt=0.5)
    nodes, _ = t_grid(batch([0.0, 1.0]), cfg)
    assert nodes[1] - nodes[0] <= 0.5


def test_kernel_mass():
    cfg = EstimatorConfig(0.6, 0.3)
    assert kernel_mass(cfg) == pytest.approx(0.6 * (math.exp(0.2 * cfg.t_max**2) - 1) / (0.2 * 4 * math.pi))


def test_empirical_power_blocks():
    rng = np.random.default_rng(0)
    y = rng.normal(size=5000)
    nodes = np.linspace(0, 3, 7)
    expected = np.abs(np.exp(1j * np.outer(nodes, y)).sum(axis=1)) ** 2
    np.testing.assert_allclose(empirical_power(y, nodes), expected, rtol=1e-10)


def test_kernel_g_at_zero():
    eta, t_max = 0.9, 2.0
    a = (1 - eta) / 2
    assert kernel_g(0.0, t_max, eta) == pytest.approx(math.expm1(a * t_max**2) / a, rel=1e-10)


def test_kernel_g_even():
    y = np.array([0.3, 1.7, 12.0])
    np.testing.assert_array_equal(kernel_g(y, 3.0, 0.8), kernel_g(-y, 3.0, 0.8))


@pytest.mark.parametrize("y", [0.0, 1.3, 4.0])
def test_kernel_g_grid_matches_adaptive(y):
    cfg = EstimatorConfig(0.8, 1 / (3 * math.sqrt(0.8)))
    grid = t_grid(batch([0.0, 0.5]), EstimatorConfig(cfg.eta, cfg.delta, dt=0.01))
    assert kernel_g(y, cfg.t_max, cfg.eta, grid=grid) == pytest.approx(kernel_g(y, cfg.t_max, cfg.eta), rel=1e-6, abs=1e-6)


def test_oracle_three_points():
    cfg = EstimatorConfig(0.9, 0.5)
    samples = batch([0.0, 1.0, -1.0])
    grid = t_grid(samples, cfg)
    g1, g2 = kernel_g(1.0, cfg.t_max, cfg.eta, grid=grid), kernel_g(2.0, cfg.t_max, cfg.eta, grid=grid)
    expected = cfg.eta / (24 * math.pi) * (4 * g1 + 2 * g2)
    assert estimate_pairwise_oracle(samples, cfg) == pytest.approx(expected, rel=1e-12)


def test_oracle_matches_fast_path():
    rng = np.random.default_rng(2024)
    for _ in range(200):
        n = int(rng.integers(2, 61))
        cfg = EstimatorConfig(float(rng.uniform(0.5, 0.99)), float(rng.uniform(0.2, 1.0)))
        samples = batch(rng.normal(0, 1, n))
        fast = estimate_quadratic_functional(samples, cfg).d2_hat
        oracle = estimate_pairwise_oracle(samples, cfg)
        assert oracle == pytest.approx(fast, rel=1e-8, abs=1e-10 * kernel_mass(cfg))


def test_oracle_refuses_large_samples():
    with pytest.raises(TooManySamples):
        estimate_pairwise_oracle(batch(np.zeros(2001)), EstimatorConfig(0.9, 0.5))
