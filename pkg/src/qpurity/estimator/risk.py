"""Theoretical convergence rates and finite-sample risk bounds."""
import math
from dataclasses import dataclass

from qpurity.defaults import MAX_KERNEL_EXPONENT
from qpurity.errors import DegenerateBoundary, UnstableKernel
from qpurity.estimator.bandwidth import noise_exponent, regime_of, solve_delta_opt
from qpurity.helper.custom_enums import Regime, Side
from qpurity.states import SmoothnessClass


@dataclass(frozen=True)
class RiskBounds:
    """Upper bounds on the squared bias and the variance of the estimator."""

    bias_bound_sq: float
    var_bound: float
    regime: Regime

    @property
    def total(self) -> float:
        """Bound on the mean squared error."""
        return self.bias_bound_sq + self.var_bound


def theoretical_rate(cls: SmoothnessClass, eta: float, n: int, side: Side = Side.upper) -> float:
    """
    Squared minimax rate φ_n² on the class.

    * r < 2: L² e^{-4α x^r} with x = 1/δ_opt.
    * r = 2, slow: n^{-4α/(c+2α)} (upper) or (n log n)^{-4α/(c+2α)} (lower).
    * r = 2, parametric: 1/n.

    :raises DegenerateBoundary: On the r = 2 boundary c = 2α.
    """
    regime = regime_of(cls, eta)
    if regime is Regime.r_lt_2:
        x = 1.0 / solve_delta_opt(cls, eta, n)
        return cls.L**2 * math.exp(-4.0 * cls.alpha * x**cls.r)
    if regime is Regime.r2_parametric:
        return 1.0 / n
    exponent = -4.0 * cls.alpha / (noise_exponent(eta) + 2.0 * cls.alpha)
    if side is Side.lower:
        return (n * math.log(n)) ** exponent
    return float(n) ** exponent


def _bounded_exp(exponent: float, delta: float, eta: float) -> float:
    if exponent > MAX_KERNEL_EXPONENT:
        raise UnstableKernel(
            f"Risk bound exponent {exponent:.4g} exceeds {MAX_KERNEL_EXPONENT:g} at delta={delta:g}, eta={eta:g};"
            " increase delta."
        )
    return math.exp(exponent)


def risk_bounds(cls: SmoothnessClass, eta: float, delta: float, n: int) -> RiskBounds:
    """
    Bias and variance bounds at bandwidth δ.

    The first variance term 8η²/((1-η)² π² n²) e^{(1-η)/(ηδ²)} is shared by every
    regime; the second one depends on the regime.

    :raises UnstableKernel: If an exponent of the variance bound exceeds 700.
    """
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}.")
    regime = regime_of(cls, eta)
    alpha, r, L = cls.alpha, cls.r, cls.L
    c = noise_exponent(eta)
    inv2 = delta**-2
    bias_bound_sq = L**2 * math.exp(-4.0 * alpha * delta ** (-r))
    degenerate = 8.0 * eta**2 / (1.0 - eta) ** 2 / (math.pi**2 * n**2) * _bounded_exp(2.0 * c * inv2, delta, eta)
    if regime is Regime.r_lt_2:
        growth = _bounded_exp(c * inv2 - 2.0 * alpha * delta ** (-r), delta, eta)
        linear = 8.0 * L / (n * math.pi) * eta / (1.0 - eta) * growth
    elif regime is Regime.r2_slow:
        growth = _bounded_exp((c - 2.0 * alpha) * inv2, delta, eta)
        linear = 8.0 * L / (n * math.pi) * eta / (1.0 - eta - 4.0 * alpha * eta) * growth
    else:
        denominator = 4.0 * alpha * eta - 1.0 + eta
        if denominator <= 0:  # pragma: no cover
            raise DegenerateBoundary("4αη - 1 + η must be positive in the parametric regime.")
        linear = 8.0 * eta * L / denominator / n
    return RiskBounds(bias_bound_sq=bias_bound_sq, var_bound=degenerate + linear, regime=regime)
