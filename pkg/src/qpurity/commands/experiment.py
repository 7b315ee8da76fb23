"""
Experiment command.

Run the Monte Carlo schedule of the configuration and write ``mse.csv``,
``normality.csv`` and ``summary.json`` into the output directory.
"""
import csv
import dataclasses
import math
import pathlib
from typing import Any, Dict, Optional

import tabulate

from qpurity import format_float, logger
from qpurity.commands import dump_json, output_dir, with_provenance
from qpurity.config.types import RunConfig
from qpurity.errors import Divergent, InsufficientPoints
from qpurity.estimator.variance import SUBTRACTION_TERM, estimand, exact_variance
from qpurity.experiments import (
    MSE_COLUMNS,
    ExperimentPlan,
    McSummary,
    NormalityResult,
    rate_regression,
    run_mse_experiment,
    run_normality_check,
)
from qpurity.helper import get_maxcolwidth, get_style
from qpurity.states import SmoothnessClass, StateModel

MSE_FILE = "mse.csv"
NORMALITY_FILE = "normality.csv"
SUMMARY_FILE = "summary.json"


def _cell(value: Any) -> str:
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def _plan(config: RunConfig, state: StateModel) -> ExperimentPlan:
    try:
        cls = config.smoothness_class(state)
        bounds = True
    except Divergent as err:
        logger.warning("%s is not in the class, rates and bounds are left empty: %s", state.label(), err)
        cls = SmoothnessClass(alpha=config.alpha, r=config.r)
        bounds = False
    return ExperimentPlan(
        state=state,
        eta=config.eta,
        n_grid=config.n_grid,
        replicates=config.replicates,
        rule=config.rule,
        cls=cls,
        seed=config.seed,
        delta=config.delta,
        A=config.A,
        k=config.k,
        bounds=bounds,
    )


def write_mse(summary: McSummary, path: pathlib.Path) -> None:
    """Write the per sample size rows."""
    with open(path, "w", newline="") as out:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(MSE_COLUMNS)
        for record in summary.as_records():
            writer.writerow([_cell(record[column]) for column in MSE_COLUMNS])


def write_normality(result: NormalityResult, path: pathlib.Path) -> None:
    """Write the standardised residuals."""
    with open(path, "w", newline="") as out:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(("replicate", "residual"))
        for index, residual in enumerate(result.residuals):
            writer.writerow((index, format_float(residual)))


def _print_rows(summary: McSummary, wrap: bool) -> None:
    headers = ("n", "delta", "Mean", "Bias", "Variance", "MSE", "Rate", "Bound")
    maxcolwidth = get_maxcolwidth(headers, wrap)
    data = [
        (
            row.n,
            f"{row.delta:.4g}",
            f"{row.mean_estimate:.6g}",
            f"{row.empirical_bias:.3g}",
            f"{row.empirical_variance:.3g}",
            f"{row.empirical_mse:.3g} ± {row.mse_stderr:.2g}",
            f"{row.theoretical_rate:.3g}",
            f"{row.bias_bound_sq + row.var_bound:.3g}",
        )
        for row in summary.rows
    ]
    print(
        tabulate.tabulate(
            headers=headers,
            tabular_data=data,
            tablefmt=get_style(),
            maxcolwidths=maxcolwidth,
            maxheadercolwidths=maxcolwidth,
        )
    )


def experiment(config: RunConfig, normality: bool = True, wrap: bool = True) -> Dict[str, Any]:
    """
    Run the experiment of the configuration.

    :param config: The run configuration
    :param normality: Also run the normality check at ``normality_n``
    :param wrap: Wrap long table cells
    :return: The summary written to ``summary.json``
    """
    state = config.state_model()
    plan = _plan(config, state)
    summary = run_mse_experiment(plan, threads=config.threads)
    out = output_dir(config)
    write_mse(summary, out / MSE_FILE)
    _print_rows(summary, wrap)

    slope: Optional[float]
    try:
        slope = rate_regression(summary)
    except InsufficientPoints as err:
        logger.debug("No rate regression: %s", err)
        slope = None

    payload: Dict[str, Any] = {
        "state": state.label(),
        "truth": summary.truth,
        "estimand": estimand(state),
        "rate_slope": slope,
        "rows": [dataclasses.asdict(row) for row in summary.rows],
    }
    if normality:
        n = config.normality_n or config.n_grid[-1]
        replicates = config.normality_replicates or config.replicates
        result = run_normality_check(
            state,
            config.eta,
            n,
            replicates,
            config.rule,
            config.seed,
            cls=plan.cls,
            variance=config.variance,
            threads=config.threads,
            **config.rule_params(),
        )
        write_normality(result, out / NORMALITY_FILE)
        exact_n_var = n * exact_variance(state, config.eta, result.delta, n)
        payload.update(
            {
                "ks_distance": result.ks_distance,
                "skewness": result.skewness,
                "excess_kurtosis": result.excess_kurtosis,
                "normality_n": n,
                "normality_delta": result.delta,
                "asymptotic_variance": result.asymptotic_variance,
                "exact_n_variance": exact_n_var,
                "empirical_n_variance": result.empirical_n_var,
                "standardisation": config.variance,
                "variance_note": (
                    f"W subtracts {SUBTRACTION_TERM}; at finite n the degenerate U-statistic term adds"
                    f" {exact_n_var - result.asymptotic_variance!r} to n*Var"
                ),
            }
        )
        logger.info("KS distance %s at n=%s", result.ks_distance, n)
    payload = with_provenance(_finite(payload), config)
    (out / SUMMARY_FILE).write_text(dump_json(payload) + "\n")
    print(f"Wrote {out / MSE_FILE}, {out / SUMMARY_FILE}" + (f", {out / NORMALITY_FILE}" if normality else ""))
    return payload


def _finite(value: Any) -> Any:
    """Replace NaN by None so the summary is strict JSON."""
    if isinstance(value, float) and math.isnan(value):
        return None
    if isinstance(value, dict):
        return {key: _finite(item) for key, item in value.items()}
    if isinstance(value, list):
        return [_finite(item) for item in value]
    return value
