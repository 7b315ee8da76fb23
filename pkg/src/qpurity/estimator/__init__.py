"""
Kernel U-statistic estimator of the purity d² = ∫W².

    d²_n = η / (4π n(n-1)) ∫_{|t|≤T} |t| e^{at²} (|S(t)|² - n) dt,

with S(t) = Σ_k e^{itY_k}, a = (1-η)/2 and T = 1/(δ√η).  The integrand is even,
so the integral is taken as twice the Simpson integral over [0, T].
"""
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.integrate import quad

from qpurity import logger
from qpurity.defaults import MAX_KERNEL_EXPONENT, MAX_ORACLE_SAMPLES, MAX_T_SPACING
from qpurity.errors import ConfigError, TooFewSamples, TooManySamples, UnstableKernel
from qpurity.helper import even_intervals, simpson_weights
from qpurity.tomography import SampleLike, as_batch

""" Number of samples folded into S(t) per block """
SAMPLE_BLOCK = 2048


@dataclass(frozen=True)
class EstimatorConfig:
    """
    Efficiency, bandwidth and quadrature spacing of one estimate.

    ``dt`` overrides the default node spacing min(0.05, π/(4(max|Y|+1))).
    """

    eta: float
    delta: float
    dt: Optional[float] = None

    def __post_init__(self):
        """Validate the configuration."""
        if not 0.0 < self.eta < 1.0:
            raise ConfigError(f"eta must lie in the open interval (0, 1), got {self.eta}.")
        if not (self.delta > 0 and math.isfinite(self.delta)):
            raise ConfigError(f"delta must be positive and finite, got {self.delta}.")
        if self.dt is not None and not self.dt > 0:
            raise ConfigError(f"dt must be positive, got {self.dt}.")

    @property
    def t_max(self) -> float:
        """Frequency truncation T = 1/(δ√η)."""
        return 1.0 / (self.delta * math.sqrt(self.eta))

    @property
    def a(self) -> float:
        """Exponent (1-η)/2 of the deconvolution weight."""
        return (1.0 - self.eta) / 2.0


@dataclass(frozen=True)
class EstimateResult:
    """An estimate and its quadrature diagnostics."""

    d2_hat: float
    delta: float
    t_max: float
    nodes: int
    kernel_mass: float
    eta: float
    n: int


def check_kernel_exponent(a: float, t_max: float) -> None:
    """Raise UnstableKernel when e^{aT²} is beyond working precision."""
    exponent = a * t_max * t_max
    if exponent > MAX_KERNEL_EXPONENT:
        raise UnstableKernel(
            f"a·T² = {exponent:.4g} exceeds {MAX_KERNEL_EXPONENT:g}; increase delta for this eta."
        )


def t_grid(samples: SampleLike, cfg: EstimatorConfig) -> Tuple[np.ndarray, np.ndarray]:
    """
    Simpson nodes and weights on [0, T] shared by the fast path and the oracle.

    :return: (nodes, weights), with an even number of intervals.
    """
    y = as_batch(samples).y
    spread = float(np.abs(y).max()) if y.size else 0.0
    spacing = cfg.dt if cfg.dt is not None else min(MAX_T_SPACING, math.pi / (4.0 * (spread + 1.0)))
    intervals = even_intervals(cfg.t_max, spacing)
    nodes = np.linspace(0.0, cfg.t_max, intervals + 1)
    return nodes, simpson_weights(intervals, cfg.t_max / intervals)


def _folded_kernel(nodes: np.ndarray, weights: np.ndarray, a: float) -> np.ndarray:
    """Weights of 2 t e^{at²} on the half grid."""
    return 2.0 * weights * nodes * np.exp(a * nodes * nodes)


def kernel_mass(cfg: EstimatorConfig) -> float:
    """(1/4π²) ∫_{|t|≤T} η |t| e^{at²} π dt in closed form."""
    return cfg.eta * math.expm1(cfg.a * cfg.t_max**2) / (cfg.a * 4.0 * math.pi)


def _validate(samples: SampleLike, cfg: EstimatorConfig):
    batch = as_batch(samples)
    n = len(batch)
    if n < 2:
        raise TooFewSamples(f"The estimator needs at least 2 samples, got {n}.")
    if not np.all(np.isfinite(batch.y)):
        raise ValueError("Samples must be finite.")
    check_kernel_exponent(cfg.a, cfg.t_max)
    return batch, n


def empirical_power(y: np.ndarray, nodes: np.ndarray) -> np.ndarray:
    """|S(t)|² at every node, accumulated over fixed sample blocks."""
    cos_sum = np.zeros(nodes.size)
    sin_sum = np.zeros(nodes.size)
    for start in range(0, y.size, SAMPLE_BLOCK):
        phase = np.outer(nodes, y[start : start + SAMPLE_BLOCK])
        cos_sum += np.cos(phase).sum(axis=1)
        sin_sum += np.sin(phase).sum(axis=1)
    return cos_sum * cos_sum + sin_sum * sin_sum


def estimate_quadratic_functional(samples: SampleLike, cfg: EstimatorConfig) -> EstimateResult:
    """
    Fast O(n·m) evaluation of the U-statistic through |S(t)|².

    :param samples: Noisy samples (only y enters, the kernel is blind to φ).
    :param cfg: Efficiency and bandwidth.
    :raises TooFewSamples: If fewer than two samples are given.
    :raises UnstableKernel: If a·T² > 700.
    """
    batch, n = _validate(samples, cfg)
    nodes, weights = t_grid(batch, cfg)
    kernel = _folded_kernel(nodes, weights, cfg.a)
    power = empirical_power(batch.y, nodes)
    d2_hat = cfg.eta / (4.0 * math.pi * n * (n - 1)) * float(kernel @ (power - n))
    logger.debug("d2_hat=%s with n=%s, delta=%s, T=%s, nodes=%s", d2_hat, n, cfg.delta, cfg.t_max, nodes.size)
    return EstimateResult(
        d2_hat=d2_hat,
        delta=cfg.delta,
        t_max=cfg.t_max,
        nodes=int(nodes.size),
        kernel_mass=kernel_mass(cfg),
        eta=cfg.eta,
        n=n,
    )


def estimate_pairwise_oracle(samples: SampleLike, cfg: EstimatorConfig) -> float:
    """
    The literal double sum η/(4π n(n-1)) Σ_{k≠l} g(Y_k - Y_l) on the shared t-grid.

    Quadratic in n, refuses more than 2000 samples.
    """
    batch, n = _validate(samples, cfg)
    if n > MAX_ORACLE_SAMPLES:
        raise TooManySamples(f"The pairwise oracle accepts at most {MAX_ORACLE_SAMPLES} samples, got {n}.")
    grid = t_grid(batch, cfg)
    y = batch.y
    total = 0.0
    for k in range(n - 1):
        total += float(kernel_g(y[k + 1 :] - y[k], cfg.t_max, cfg.eta, grid=grid).sum())
    return cfg.eta / (4.0 * math.pi * n * (n - 1)) * 2.0 * total


def kernel_g(y, t_max: float, eta: float, grid: Tuple[np.ndarray, np.ndarray] = None):
    """
    g(y) = 2 ∫₀^T t e^{at²} cos(ty) dt with a = (1-η)/2.

    :param y: Scalar or array of differences.
    :param t_max: Truncation T.
    :param eta: Detection efficiency.
    :param grid: (nodes, weights) on [0, T]; adaptive quadrature is used without it.
    """
    a = (1.0 - eta) / 2.0
    check_kernel_exponent(a, t_max)
    y_arr = np.abs(np.asarray(y, dtype=float))
    if grid is not None:
        nodes, weights = grid
        values = np.cos(np.multiply.outer(y_arr, nodes)) @ _folded_kernel(nodes, weights, a)
    else:
        values = np.vectorize(lambda value: _kernel_g_adaptive(value, t_max, a), otypes=[float])(y_arr)
    return float(values) if np.ndim(values) == 0 else values


def _kernel_g_adaptive(y: float, t_max: float, a: float) -> float:
    def weight(t):
        return t * math.exp(a * t * t)

    if y * t_max <= 2.0 * math.pi:
        value, _ = quad(lambda t: weight(t) * math.cos(t * y), 0.0, t_max, epsabs=0.0, epsrel=1e-13, limit=200)
    else:
        value, _ = quad(weight, 0.0, t_max, weight="cos", wvar=y, epsabs=0.0, epsrel=1e-13, limit=200)
    return 2.0 * value
