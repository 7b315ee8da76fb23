"""
Monte Carlo harness.

Replicate ``i`` at sample size ``n`` always draws from the seed sequence
``SeedSequence(seed, spawn_key=(n, i))``, and replicates are reduced in index
order, so every summary is identical whatever the number of worker processes.
"""
import math
import multiprocessing
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from progress.bar import Bar
from scipy import stats

from qpurity import PURE_STATE_PURITY, logger
from qpurity.defaults import DEFAULT_RULE, DEFAULT_SEED
from qpurity.errors import ConfigError, InsufficientPoints, UnstableKernel
from qpurity.estimator import EstimatorConfig, estimate_quadratic_functional
from qpurity.estimator.bandwidth import resolve_rule, select_bandwidth
from qpurity.estimator.risk import risk_bounds, theoretical_rate
from qpurity.estimator.variance import asymptotic_variance, estimand, exact_variance, expected_estimate
from qpurity.helper.custom_enums import Verdict
from qpurity.states import SmoothnessClass, StateModel, true_purity
from qpurity.tomography import NoiseConfig, simulate

MSE_COLUMNS = (
    "n",
    "mean_estimate",
    "bias",
    "variance",
    "mse",
    "mse_stderr",
    "theoretical_rate",
    "bias_bound_sq",
    "var_bound",
)


@dataclass(frozen=True)
class ExperimentPlan:
    """Schedule of a Monte Carlo run."""

    state: StateModel
    eta: float
    n_grid: Tuple[int, ...]
    replicates: int
    rule: str = DEFAULT_RULE
    cls: Optional[SmoothnessClass] = None
    seed: int = DEFAULT_SEED
    delta: Optional[float] = None
    A: Optional[float] = None
    k: Optional[int] = None
    bounds: bool = True

    def __post_init__(self):
        """Validate the schedule."""
        object.__setattr__(self, "n_grid", tuple(int(n) for n in self.n_grid))
        NoiseConfig(self.eta)
        if self.replicates < 2:
            raise ConfigError(f"An experiment needs at least 2 replicates, got {self.replicates}.")
        if not self.n_grid:
            raise ConfigError("n_grid must not be empty.")
        if any(b <= a for a, b in zip(self.n_grid, self.n_grid[1:])):
            raise ConfigError(f"n_grid must be strictly increasing, got {list(self.n_grid)}.")
        if self.n_grid[0] < 2:
            raise ConfigError("Every sample size must be at least 2.")
        try:
            resolve_rule(self.rule)
        except ValueError as err:
            raise ConfigError(str(err)) from err

    def bandwidth(self, n: int) -> float:
        """Bandwidth of the plan's rule at sample size ``n``."""
        return select_bandwidth(self.rule, self.eta, n, self.cls, delta=self.delta, A=self.A, k=self.k)


@dataclass(frozen=True)
class McRow:
    """Monte Carlo moments at one sample size."""

    n: int
    delta: float
    mean_estimate: float
    empirical_bias: float
    empirical_variance: float
    empirical_mse: float
    mse_stderr: float
    mean_stderr: float
    expected_estimate: float
    theoretical_rate: float
    bias_bound_sq: float
    var_bound: float

    def as_record(self) -> Dict[str, float]:
        """Row in the ``mse.csv`` column layout."""
        return {
            "n": self.n,
            "mean_estimate": self.mean_estimate,
            "bias": self.empirical_bias,
            "variance": self.empirical_variance,
            "mse": self.empirical_mse,
            "mse_stderr": self.mse_stderr,
            "theoretical_rate": self.theoretical_rate,
            "bias_bound_sq": self.bias_bound_sq,
            "var_bound": self.var_bound,
        }


@dataclass(frozen=True)
class McSummary:
    """Per sample size Monte Carlo rows of one plan."""

    rows: Tuple[McRow, ...]
    truth: float
    plan: Optional[ExperimentPlan] = None

    def as_records(self) -> List[Dict[str, float]]:
        """All rows in the ``mse.csv`` column layout."""
        return [row.as_record() for row in self.rows]


@dataclass(frozen=True)
class NormalityResult:
    """Standardised residuals √n(d²_n - θ)/√V and their distance to N(0, 1)."""

    ks_distance: float
    skewness: float
    excess_kurtosis: float
    residuals: Tuple[float, ...]
    variance_used: float
    asymptotic_variance: float
    empirical_n_var: float
    delta: float
    n: int
    center: float


@dataclass(frozen=True)
class ClassifierResult:
    """Verdict of the purity threshold classifier."""

    verdict: Verdict
    margin: float


@dataclass(frozen=True)
class ClassificationResult:
    """Verdict counts over replicates."""

    counts: Dict[str, int]
    estimates: Tuple[float, ...] = field(repr=False)
    delta: float = 0.0


def _replicate(task: Tuple[StateModel, float, int, float, int, int]) -> float:
    """Simulate and estimate one replicate, for the multiprocessing pool."""
    state, eta, n, delta, seed, index = task
    samples = simulate(state, n, NoiseConfig(eta), seed, replicate=(n, index))
    return estimate_quadratic_functional(samples, EstimatorConfig(eta, delta)).d2_hat


def replicate_estimates(
    state: StateModel,
    eta: float,
    n: int,
    delta: float,
    replicates: int,
    seed: int,
    threads: int = 1,
) -> np.ndarray:
    """
    Estimates of ``replicates`` independent data sets of size ``n``, in replicate order.

    :param threads: Worker processes; one runs in-process.
    """
    tasks = [(state, eta, n, delta, seed, index) for index in range(replicates)]
    bar = Bar(f"n={n}", max=replicates)
    results = []
    if threads > 1:
        with multiprocessing.Pool(processes=threads) as pool:
            for value in pool.imap(_replicate, tasks, chunksize=max(1, replicates // (4 * threads))):
                results.append(value)
                bar.next()
    else:
        for task in tasks:
            results.append(_replicate(task))
            bar.next()
    bar.finish()
    return np.array(results, dtype=float)


def _moments(estimates: np.ndarray, truth: float) -> Dict[str, float]:
    count = estimates.size
    mean = float(estimates.mean())
    squared_errors = (estimates - truth) ** 2
    return {
        "mean_estimate": mean,
        "empirical_bias": mean - truth,
        "empirical_variance": float(np.mean((estimates - mean) ** 2)),
        "empirical_mse": float(squared_errors.mean()),
        "mse_stderr": float(squared_errors.std(ddof=1) / math.sqrt(count)),
        "mean_stderr": float(estimates.std(ddof=1) / math.sqrt(count)),
    }


def run_mse_experiment(plan: ExperimentPlan, threads: int = 1) -> McSummary:
    """
    Empirical risk E|d²_n - d²|² at every sample size of the plan.

    The truth is the closed-form purity; rates and bounds are filled when the
    plan carries a smoothness class, NaN otherwise or where e^{2c/δ²} overflows.
    """
    truth = true_purity(plan.state)
    rows = []
    for n in plan.n_grid:
        delta = plan.bandwidth(n)
        logger.info("Running %s replicates of %s at n=%s (delta=%s)", plan.replicates, plan.state.label(), n, delta)
        estimates = replicate_estimates(plan.state, plan.eta, n, delta, plan.replicates, plan.seed, threads)
        if plan.cls is not None and plan.bounds:
            rate = theoretical_rate(plan.cls, plan.eta, n)
            try:
                bounds = risk_bounds(plan.cls, plan.eta, delta, n)
                bias_bound_sq, var_bound = bounds.bias_bound_sq, bounds.var_bound
            except UnstableKernel as err:
                logger.warning("Risk bounds left empty at n=%s: %s", n, err)
                bias_bound_sq = var_bound = math.nan
        else:
            rate = bias_bound_sq = var_bound = math.nan
        rows.append(
            McRow(
                n=n,
                delta=delta,
                expected_estimate=expected_estimate(plan.state, delta),
                theoretical_rate=rate,
                bias_bound_sq=bias_bound_sq,
                var_bound=var_bound,
                **_moments(estimates, truth),
            )
        )
    return McSummary(rows=tuple(rows), truth=truth, plan=plan)


def rate_regression(summary: Union[McSummary, Sequence[McRow]]) -> float:
    """
    Least-squares slope of log(mse) against log(n).

    :raises InsufficientPoints: With fewer than three rows of positive MSE.
    """
    rows = summary.rows if isinstance(summary, McSummary) else tuple(summary)
    points = [(row.n, row.empirical_mse) for row in rows if row.empirical_mse > 0]
    if len(points) < 3:
        raise InsufficientPoints(f"Rate regression needs 3 points with positive mse, got {len(points)}.")
    log_n = np.log([n for n, _ in points])
    log_mse = np.log([mse for _, mse in points])
    centred = log_n - log_n.mean()
    return float(centred @ (log_mse - log_mse.mean()) / (centred @ centred))


def normality_statistics(residuals: Sequence[float]) -> Tuple[float, float, float]:
    """
    KS distance to N(0, 1), skewness and excess kurtosis.

    :return: (ks_distance, skewness, excess_kurtosis)
    """
    z = np.asarray(residuals, dtype=float)
    distance = float(stats.kstest(z, "norm").statistic)
    with np.errstate(divide="ignore", invalid="ignore"):
        skewness = float(stats.skew(z))
        kurtosis = float(stats.kurtosis(z, fisher=True))
    return distance, skewness, kurtosis


def run_normality_check(
    state: StateModel,
    eta: float,
    n: int,
    replicates: int,
    rule: str,
    seed: int,
    cls: Optional[SmoothnessClass] = None,
    variance: str = "asymptotic",
    threads: int = 1,
    **rule_params: Any,
) -> NormalityResult:
    """
    Standardised residuals z_i = √n(d²_{n,i} - θ)/√V of ``replicates`` estimates.

    :param variance: ``asymptotic`` standardises by 𝒲, ``exact`` by n times the
        finite-sample variance at the chosen bandwidth.
    """
    if variance not in ("asymptotic", "exact"):
        raise ValueError(f"variance must be 'asymptotic' or 'exact', got {variance}.")
    delta = select_bandwidth(rule, eta, n, cls, **rule_params)
    limit = asymptotic_variance(state, eta)
    scale = limit if variance == "asymptotic" else n * exact_variance(state, eta, delta, n)
    center = estimand(state)
    estimates = replicate_estimates(state, eta, n, delta, replicates, seed, threads)
    residuals = math.sqrt(n) * (estimates - center) / math.sqrt(scale)
    distance, skewness, kurtosis = normality_statistics(residuals)
    logger.info("Normality at n=%s: ks=%s, skew=%s, kurtosis=%s", n, distance, skewness, kurtosis)
    return NormalityResult(
        ks_distance=distance,
        skewness=skewness,
        excess_kurtosis=kurtosis,
        residuals=tuple(residuals.tolist()),
        variance_used=scale,
        asymptotic_variance=limit,
        empirical_n_var=float(n * estimates.var(ddof=1)),
        delta=delta,
        n=n,
        center=center,
    )


def purity_classify(d2_hat: float, tau: float) -> ClassifierResult:
    """Pure iff |d2_hat - 1/(2π)| < τ; the margin is |d2_hat - 1/(2π)| - τ."""
    if not tau > 0:
        raise ValueError(f"tau must be positive, got {tau}.")
    margin = abs(d2_hat - PURE_STATE_PURITY) - tau
    return ClassifierResult(verdict=Verdict.pure if margin < 0 else Verdict.mixed, margin=margin)


def run_classification(
    state: StateModel,
    eta: float,
    n: int,
    replicates: int,
    rule: str,
    tau: float,
    seed: int,
    cls: Optional[SmoothnessClass] = None,
    threads: int = 1,
    **rule_params: Any,
) -> ClassificationResult:
    """Classify every replicate estimate and count the verdicts."""
    delta = select_bandwidth(rule, eta, n, cls, **rule_params)
    estimates = replicate_estimates(state, eta, n, delta, replicates, seed, threads)
    counts = {verdict.name: 0 for verdict in Verdict}
    for value in estimates.tolist():
        counts[purity_classify(value, tau).verdict.name] += 1
    return ClassificationResult(counts=counts, estimates=tuple(estimates.tolist()), delta=delta)
