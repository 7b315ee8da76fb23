"""
Moments of the estimator computed from the state.

Everything here is expressed through m(s) = E[e^{isX}], the characteristic
function of the ideal quadrature with a uniform phase, in the frequency s = √η t.
Noise enters as the factor e^{-c s₁s₂} with c = (1-η)/(2η).
"""
import math
from typing import Tuple

import numpy as np

from qpurity import logger
from qpurity.defaults import MAX_KERNEL_EXPONENT, VARIANCE_SPACING
from qpurity.errors import NegativeVariance, NonIntegrable, TailNotNegligible, TooFewSamples, UnstableKernel
from qpurity.estimator.bandwidth import noise_exponent
from qpurity.helper import even_intervals, folded_grid, simpson_weights
from qpurity.states import (
    StateModel,
    alpha_threshold,
    frequency_cutoff,
    is_rotation_invariant,
    marginal_char_fn,
    marginal_on_lattice,
    modulus_shift,
    true_purity,
)

""" Simpson spacing of the one-dimensional moment quadratures """
MOMENT_SPACING = 0.01

""" Relative size of the variance integrand allowed on the box boundary """
VARIANCE_TAIL = 1e-10

""" How the asymptotic variance removes the squared mean """
SUBTRACTION_TERM = "4*theta^2"


def expected_estimate(state: StateModel, delta: float) -> float:
    """
    E[d²_n] = (1/4π) ∫_{|s|≤1/δ} |s| |m(s)|² ds.

    Exact for every n ≥ 2 and independent of η.  For rotation-invariant states
    this is (1/4π²) times the integral of |W̃|² over the ball of radius 1/δ.
    """
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}.")
    s_max = 1.0 / delta
    intervals = even_intervals(s_max, MOMENT_SPACING)
    s = np.linspace(0.0, s_max, intervals + 1)
    weights = simpson_weights(intervals, s_max / intervals)
    power = np.abs(marginal_char_fn(state, s)) ** 2
    return float(weights @ (s * power)) / (2.0 * math.pi)


def estimand(state: StateModel) -> float:
    """
    Limit of E[d²_n] as δ → 0.

    Equals the purity for rotation-invariant states.  For the others the kernel
    is blind to φ and targets the phase-averaged characteristic function instead.
    """
    if is_rotation_invariant(state):
        return true_purity(state)
    return expected_estimate(state, 1.0 / frequency_cutoff(state))


def _lattice(state: StateModel, half_width: float, intervals: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """
    Folded grid on [-S, S] with m on its nodes and on every pairwise sum.

    :return: (nodes, weights, m at nodes, m at node_i + node_j).
    """
    nodes, weights = folded_grid(half_width, intervals)
    spacing = half_width / intervals
    sums = marginal_on_lattice(state, -2.0 * half_width, spacing, 4 * intervals + 1)
    at_nodes = sums[intervals : 3 * intervals + 1]
    index = np.arange(nodes.size)
    return nodes, weights, at_nodes, sums[index[:, None] + index[None, :]]


def _pair_weights(nodes: np.ndarray, weights: np.ndarray) -> np.ndarray:
    radial = weights * np.abs(nodes)
    return np.outer(radial, radial)


def asymptotic_variance(state: StateModel, eta: float, t_max: float = None, nodes: int = None) -> float:
    """
    Asymptotic variance 𝒲 of √n(d²_n - d²) in the parametric regime.

        𝒲 = (1/4π²) ∬ |s₁||s₂| e^{-c s₁s₂} Re[m(s₁) m(s₂) conj m(s₁+s₂)] ds₁ds₂ - 4θ²

    :param state: The catalogued state.
    :param eta: Detection efficiency.
    :param t_max: Half-width of the square integration box in s.
    :param nodes: Simpson intervals per half axis.
    :raises NonIntegrable: If c ≥ 2κ, κ the Gaussian decay rate of the state.
    :raises NegativeVariance: If the quadrature is below -1e-6.
    """
    c = noise_exponent(eta)
    kappa = alpha_threshold(state)
    if c >= 2.0 * kappa:
        raise NonIntegrable(
            f"The variance integrand of {state.label()} is not integrable at eta={eta:g}:"
            f" (1-eta)/(2 eta) = {c:.4g} must be below {2 * kappa:.4g}."
        )
    if t_max is None:
        t_max = modulus_shift(state) + math.sqrt(35.0 / (kappa - c / 2.0))
    intervals = nodes if nodes is not None else even_intervals(t_max, VARIANCE_SPACING)
    intervals += intervals % 2
    s, w, m, m_sum = _lattice(state, t_max, intervals)
    integrand = np.exp(-c * np.outer(s, s)) * np.real(np.outer(m, m) * np.conj(m_sum)) * np.outer(np.abs(s), np.abs(s))
    edge = max(np.abs(integrand[0]).max(), np.abs(integrand[:, 0]).max())
    if edge > VARIANCE_TAIL * np.abs(integrand).max():
        raise TailNotNegligible(f"Variance integrand is not negligible at |s| = {t_max:g}.")
    theta = estimand(state)
    value = float(w @ integrand @ w) / (4.0 * math.pi**2) - 4.0 * theta**2
    logger.debug("W for %s at eta=%s: %s (box %s, %s intervals)", state.label(), eta, value, t_max, intervals)
    if value < -1e-6:
        raise NegativeVariance(f"Asymptotic variance quadrature gave {value:.4g}.")
    return max(value, 0.0)


def exact_variance(state: StateModel, eta: float, delta: float, n: int) -> float:
    """
    Finite-sample variance of d²_n by the Hoeffding decomposition.

        Var = 2/(n(n-1)) [2(n-2)(E h₁² - θ²) + (E h² - θ²)]

    with θ = E[d²_n] and, over the box [-1/δ, 1/δ]²,

        E h₁² = (1/16π²) ∬ |s₁||s₂| e^{-c s₁s₂} Re[conj m(s₁) conj m(s₂) m(s₁+s₂)]
        E h²  = (1/16π²) ∬ |s₁||s₂| e^{-2c s₁s₂} |m(s₁+s₂)|²
    """
    if n < 2:
        raise TooFewSamples(f"The variance needs n >= 2, got {n}.")
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}.")
    c = noise_exponent(eta)
    half_width = 1.0 / delta
    if 2.0 * c * half_width**2 > MAX_KERNEL_EXPONENT:
        raise UnstableKernel(f"e^(2c/delta^2) overflows at delta={delta:g}, eta={eta:g}.")
    intervals = even_intervals(half_width, VARIANCE_SPACING)
    s, w, m, m_sum = _lattice(state, half_width, intervals)
    pairs = _pair_weights(s, w)
    cross = np.outer(s, s)
    theta = float((w * np.abs(s)) @ (np.abs(m) ** 2)) / (4.0 * math.pi)
    projection = float(np.sum(pairs * np.exp(-c * cross) * np.real(np.outer(m, m) * np.conj(m_sum))))
    projection /= 16.0 * math.pi**2
    degenerate = float(np.sum(pairs * np.exp(-2.0 * c * cross) * np.abs(m_sum) ** 2)) / (16.0 * math.pi**2)
    zeta1 = projection - theta**2
    zeta2 = degenerate - theta**2
    value = 2.0 / (n * (n - 1)) * (2.0 * (n - 2) * zeta1 + zeta2)
    logger.debug("Exact variance at n=%s, delta=%s: zeta1=%s, zeta2=%s", n, delta, zeta1, zeta2)
    if value < 0:
        raise NegativeVariance(f"Exact variance quadrature gave {value:.4g}.")
    return value
