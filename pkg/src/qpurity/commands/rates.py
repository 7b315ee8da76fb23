"""
Rates command.

Print the bandwidth of every rule that applies to a class, with the squared
rate and the risk bounds at that bandwidth.
"""
from typing import Any, Dict, List

import tabulate

from qpurity import logger
from qpurity.commands import dump_json, with_provenance
from qpurity.config.types import RunConfig
from qpurity.errors import IterateCollapse, SampleTooSmall
from qpurity.estimator.bandwidth import ALL_RULES, regime_of, select_bandwidth
from qpurity.estimator.risk import risk_bounds, theoretical_rate
from qpurity.helper import get_maxcolwidth, get_style
from qpurity.helper.custom_enums import OutputFormat, Regime, Side


def rate_rows(config: RunConfig) -> List[Dict[str, Any]]:
    """
    One row per applicable rule.

    ``fixed`` is listed only when a delta is configured; ``adaptive2`` uses
    A = (1-η)/(4η), where it coincides with ``adaptive1``, unless A is configured.
    Rules that are undefined at this n are skipped.

    :raises DegenerateBoundary: On the r = 2 boundary (1-η)/(2η) = 2α.
    """
    cls = config.smoothness_class()
    eta, n = config.eta, config.n
    regime = regime_of(cls, eta)
    rate = theoretical_rate(cls, eta, n, Side.upper)
    rate_lower = theoretical_rate(cls, eta, n, Side.lower) if regime is Regime.r2_slow else None
    params = config.rule_params()
    if params["A"] is None:
        params["A"] = (1.0 - eta) / (4.0 * eta)
    rows = []
    for name, rule in ALL_RULES.items():
        if name == "fixed" and config.delta is None:
            continue
        if not rule.applies_to(cls):
            continue
        try:
            delta = select_bandwidth(name, eta, n, cls, **params)
        except (SampleTooSmall, IterateCollapse) as err:
            logger.warning("Skipping rule %s: %s", name, err)
            continue
        bounds = risk_bounds(cls, eta, delta, n)
        rows.append(
            {
                "rule": name,
                "delta": delta,
                "regime": regime.name,
                "rate": rate,
                "rate_lower": rate_lower,
                "bias_bound_sq": bounds.bias_bound_sq,
                "var_bound": bounds.var_bound,
            }
        )
    return rows


def rates(config: RunConfig, output: OutputFormat = OutputFormat.CONSOLE, wrap: bool = True) -> List[Dict[str, Any]]:
    """
    Print the rates table or its JSON form.

    :param config: The run configuration (alpha, r, L, eta, n and rule parameters)
    :param output: Console table or JSON
    :param wrap: Wrap long table cells
    """
    rows = rate_rows(config)
    if output is OutputFormat.JSON:
        print(dump_json(with_provenance({"rows": rows}, config)))
        return rows
    headers = ("Rule", "delta", "Regime", "Rate", "Rate (lower)", "Bias² bound", "Variance bound")
    maxcolwidth = get_maxcolwidth(headers, wrap)
    data = [
        (
            row["rule"],
            f"{row['delta']:.6g}",
            row["regime"],
            f"{row['rate']:.6g}",
            "-" if row["rate_lower"] is None else f"{row['rate_lower']:.6g}",
            f"{row['bias_bound_sq']:.6g}",
            f"{row['var_bound']:.6g}",
        )
        for row in rows
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
    return rows
