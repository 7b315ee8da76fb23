"""
Estimate command.

Read a sample file, pick a bandwidth and print the purity estimate as JSON.
"""
from typing import Any, Dict, Optional

from qpurity import logger
from qpurity.commands import dump_json, with_provenance
from qpurity.config.types import RunConfig
from qpurity.errors import ConfigError
from qpurity.estimator import EstimatorConfig, estimate_quadratic_functional
from qpurity.estimator.bandwidth import select_bandwidth
from qpurity.estimator.variance import estimand
from qpurity.experiments import purity_classify
from qpurity.states import true_purity
from qpurity.tomography import read_samples


def estimate(config: RunConfig, tau: Optional[float] = None) -> Dict[str, Any]:
    """
    Estimate the purity of the samples in ``config.samples``.

    :param config: The run configuration
    :param tau: Threshold of the pure/mixed verdict, no verdict without it
    :return: The JSON payload that was printed
    """
    if config.samples is None:
        raise ConfigError("No sample file given, pass SAMPLES or set 'samples' in the config.")
    samples = read_samples(config.samples)
    n = len(samples)
    delta = select_bandwidth(config.rule, config.eta, n, config.smoothness_class(), **config.rule_params())
    result = estimate_quadratic_functional(samples, EstimatorConfig(config.eta, delta, dt=config.dt))
    logger.info("Estimated d2=%s from %s samples", result.d2_hat, n)

    payload: Dict[str, Any] = {
        "d2_hat": result.d2_hat,
        "delta": result.delta,
        "rule": config.rule,
        "t_max": result.t_max,
        "nodes": result.nodes,
        "kernel_mass": result.kernel_mass,
        "eta": result.eta,
        "n": result.n,
    }
    if config.state is not None:
        state = config.state_model()
        truth = true_purity(state)
        payload.update(
            {
                "state": state.label(),
                "true_purity": truth,
                "abs_error": abs(result.d2_hat - truth),
                "estimand": estimand(state),
            }
        )
    if tau is not None:
        verdict = purity_classify(result.d2_hat, tau)
        payload.update({"tau": tau, "verdict": verdict.verdict.name, "margin": verdict.margin})
    payload = with_provenance(payload, config)
    print(dump_json(payload))
    return payload
