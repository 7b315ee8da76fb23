"""
Bandwidth rules.

Every rule maps (η, n) and, when it needs one, a smoothness class to a
bandwidth δ.  Rules are registered in :data:`ALL_RULES`.
"""
import math
from functools import lru_cache
from typing import Callable, Dict, Optional, Tuple

from scipy.optimize import bisect

from qpurity import logger
from qpurity.errors import DegenerateBoundary, IterateCollapse, SampleTooSmall
from qpurity.helper.custom_enums import Regime
from qpurity.states import SmoothnessClass

""" Lower end of the bisection bracket in x = 1/δ """
BRACKET_LOW = 1e-6

""" Smallest sample size for which log n - (log log n)² is used """
MIN_LOG_BUDGET_N = 8


def noise_exponent(eta: float) -> float:
    """c = (1-η)/(2η), the exponent of the deconvolution weight in x = 1/δ."""
    return (1.0 - eta) / (2.0 * eta)


def log_budget(n: int) -> float:
    """log n - (log log n)², the right-hand side of the bandwidth equation."""
    if n < MIN_LOG_BUDGET_N:
        raise SampleTooSmall(f"The bandwidth equation needs n >= {MIN_LOG_BUDGET_N}, got {n}.")
    budget = math.log(n) - math.log(math.log(n)) ** 2
    if budget <= 0:
        raise SampleTooSmall(f"log n - (log log n)^2 = {budget:g} is not positive for n={n}.")
    return budget


def _require_sub_gaussian(cls: SmoothnessClass, rule: str) -> None:
    if not cls.r < 2:
        raise ValueError(f"Rule {rule} requires r < 2, got r={cls.r}.")


def solve_delta_opt(cls: SmoothnessClass, eta: float, n: int) -> float:
    """
    Solve (1-η)/(2η) δ⁻² + 2α δ⁻ʳ = log n - (log log n)² for δ.

    The left-hand side is increasing in x = 1/δ, so bisection in x on a
    doubled bracket finds the unique root.

    :raises SampleTooSmall: If n < 8.
    """
    _require_sub_gaussian(cls, "delta_opt")
    budget = log_budget(n)
    c = noise_exponent(eta)

    def excess(x: float) -> float:
        return c * x * x + 2.0 * cls.alpha * x**cls.r - budget

    high = 1.0
    while excess(high) <= 0:
        high *= 2.0
    root = bisect(excess, BRACKET_LOW, high, xtol=1e-300, rtol=1e-15, maxiter=200)
    residual = excess(root)
    logger.debug("delta_opt: x=%s, residual=%s (n=%s, eta=%s)", root, residual, n, eta)
    return 1.0 / root


def regime_of(cls: SmoothnessClass, eta: float) -> Regime:
    """
    Variance regime of the estimator on the class.

    :raises DegenerateBoundary: If r = 2 and (1-η)/(2η) = 2α.
    """
    if cls.r < 2:
        return Regime.r_lt_2
    return _r2_regime(cls.alpha, eta)


def _r2_regime(alpha: float, eta: float) -> Regime:
    gap = noise_exponent(eta) - 2.0 * alpha
    if math.isclose(gap, 0.0, abs_tol=1e-15) or math.isclose(noise_exponent(eta), 2.0 * alpha, rel_tol=1e-12):
        raise DegenerateBoundary(
            f"(1-eta)/(2 eta) = 2 alpha at eta={eta:g}, alpha={alpha:g}: neither rate regime applies."
        )
    return Regime.r2_slow if gap > 0 else Regime.r2_parametric


def delta_star(alpha: float, eta: float, n: int) -> Tuple[float, Regime]:
    """
    Bandwidth of the Gaussian-decay classes (r = 2).

    :return: (δ, regime); slow regime δ = (log n / (c + 2α))^{-1/2},
        parametric regime δ = (η log n / (1-η))^{-1/2}.
    """
    if n < 2:
        raise SampleTooSmall(f"delta_star needs n >= 2, got {n}.")
    regime = _r2_regime(alpha, eta)
    log_n = math.log(n)
    if regime is Regime.r2_slow:
        delta = (log_n / (noise_exponent(eta) + 2.0 * alpha)) ** -0.5
    else:
        delta = (eta * log_n / (1.0 - eta)) ** -0.5
    return delta, regime


def delta_adaptive(variant: int, eta: float, n: int, A: Optional[float] = None) -> float:
    """
    Adaptive bandwidths that do not depend on the class parameters.

    :param variant: 1 or 2.
    :param A: Constant above the class α, required by variant 2.
    :raises SampleTooSmall: If the expression under the root is not positive.
    """
    if variant not in (1, 2):
        raise ValueError(f"Adaptive variant must be 1 or 2, got {variant}.")
    if n < 2:
        raise SampleTooSmall(f"Adaptive bandwidths need n >= 2, got {n}.")
    base = 2.0 * eta * math.log(n) / (1.0 - eta)
    if variant == 1:
        inner = base - math.sqrt(base)
    else:
        if A is None or not A > 0:
            raise ValueError(f"Adaptive variant 2 needs A > 0, got {A}.")
        inner = base - (4.0 * A * eta / (1.0 - eta)) * math.sqrt(base)
    if inner <= 0:
        raise SampleTooSmall(f"Adaptive variant {variant} is undefined at n={n}, eta={eta:g}.")
    return inner**-0.5


def auto_iterations(r: float) -> int:
    """Smallest k >= 1 with r <= 2k/(k+1)."""
    return max(1, math.ceil(r / (2.0 - r) - 1e-12))


def delta_iterative(cls: SmoothnessClass, eta: float, n: int, k: Optional[int] = None) -> float:
    """
    Successive approximations δ_k = (s_n - (α/a) δ_{k-1}^{-r})^{-1/2} from δ₀ = s_n^{-1/2}.

    :param k: Number of refinements, chosen from r when ``None``.
    :raises IterateCollapse: If an iterate becomes undefined.
    """
    _require_sub_gaussian(cls, "iterative")
    a = (1.0 - eta) / (4.0 * eta)
    s_n = log_budget(n) / (2.0 * a)
    if k is None:
        k = auto_iterations(cls.r)
    if k < 0:
        raise ValueError(f"k must be non-negative, got {k}.")
    delta = s_n**-0.5
    for step in range(1, k + 1):
        inner = s_n - (cls.alpha / a) * delta ** (-cls.r)
        if inner <= 0:
            raise IterateCollapse(f"Iterate {step} collapsed (n={n} is too small for the class).")
        delta = inner**-0.5
    return delta


class BandwidthRule:
    """Holder for a bandwidth rule."""

    name: str
    description: str
    needs_class: bool
    selector: Callable[..., float]

    def __init__(self, name: str, description: str, needs_class: bool, selector: Callable[..., float]):
        """Initialise the rule."""
        self.name = name
        self.description = description
        self.needs_class = needs_class
        self.selector = selector

    def applies_to(self, cls: SmoothnessClass) -> bool:
        """Whether the rule is defined for the class."""
        if self.name == "delta_star":
            return cls.r == 2
        if self.name in ("delta_opt", "iterative"):
            return cls.r < 2
        if self.name in ("adaptive1", "adaptive2"):
            return cls.r <= 1
        return True


def _fixed(eta, n, cls, delta=None, **_):
    if delta is None or not delta > 0:
        raise ValueError(f"Rule fixed needs a positive delta, got {delta}.")
    return float(delta)


def _delta_opt(eta, n, cls, **_):
    return solve_delta_opt(cls, eta, n)


def _delta_star(eta, n, cls, **_):
    if cls.r != 2:
        raise ValueError(f"Rule delta_star requires r = 2, got r={cls.r}.")
    return delta_star(cls.alpha, eta, n)[0]


def _adaptive1(eta, n, cls, **_):
    return delta_adaptive(1, eta, n)


def _adaptive2(eta, n, cls, A=None, **_):
    return delta_adaptive(2, eta, n, A=A)


def _iterative(eta, n, cls, k=None, **_):
    return delta_iterative(cls, eta, n, k=k)


RULE_FIXED = BandwidthRule("fixed", "User supplied bandwidth", False, _fixed)
RULE_DELTA_OPT = BandwidthRule("delta_opt", "Root of the bias-variance balance equation (r < 2)", True, _delta_opt)
RULE_DELTA_STAR = BandwidthRule("delta_star", "Closed form for Gaussian decay (r = 2)", True, _delta_star)
RULE_ADAPTIVE1 = BandwidthRule("adaptive1", "Class-free adaptive bandwidth", False, _adaptive1)
RULE_ADAPTIVE2 = BandwidthRule("adaptive2", "Adaptive bandwidth with constant A", False, _adaptive2)
RULE_ITERATIVE = BandwidthRule("iterative", "Successive approximations of delta_opt (r < 2)", True, _iterative)

"""Dictionary of all bandwidth rules"""
ALL_RULES: Dict[str, BandwidthRule] = {
    rule.name: rule
    for rule in (RULE_FIXED, RULE_DELTA_OPT, RULE_DELTA_STAR, RULE_ADAPTIVE1, RULE_ADAPTIVE2, RULE_ITERATIVE)
}


@lru_cache(maxsize=128)
def resolve_rule(name: str) -> BandwidthRule:
    """
    Get a bandwidth rule by name.

    :param name: The name of the rule
    :return: The rule
    """
    if name.lower() in ALL_RULES:
        return ALL_RULES[name.lower()]
    raise ValueError(f"Bandwidth rule {name} not recognised.")


def select_bandwidth(
    rule: str,
    eta: float,
    n: int,
    cls: Optional[SmoothnessClass] = None,
    **params,
) -> float:
    """
    Bandwidth of a named rule.

    :param rule: Rule name, see :data:`ALL_RULES`.
    :param params: ``delta`` for ``fixed``, ``A`` for ``adaptive2``, ``k`` for ``iterative``.
    """
    resolved = resolve_rule(rule)
    if resolved.needs_class and cls is None:
        raise ValueError(f"Rule {resolved.name} needs a smoothness class (alpha, r).")
    delta = resolved.selector(eta, n, cls, **params)
    logger.debug("Rule %s gives delta=%s at n=%s", resolved.name, delta, n)
    return delta
