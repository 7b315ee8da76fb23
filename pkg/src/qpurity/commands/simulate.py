"""
Simulate command.

Draw noisy homodyne samples of a catalogued state and write them as CSV.
"""
import pathlib
from typing import Optional

from qpurity import logger
from qpurity.commands import output_dir
from qpurity.config.types import RunConfig
from qpurity.tomography import NoiseConfig, samples_checksum, simulate, write_samples

""" Default file name of simulated samples """
SAMPLES_FILE = "samples.csv"


def simulate_samples(config: RunConfig, output: Optional[str] = None) -> pathlib.Path:
    """
    Simulate ``config.n`` samples and write them to ``output`` (or ``<out>/samples.csv``).

    :param config: The run configuration
    :param output: Explicit path of the CSV file
    :return: The path written
    """
    state = config.state_model()
    noise = NoiseConfig(config.eta)
    logger.debug("Simulating %s samples of %s at eta=%s", config.n, state.label(), config.eta)
    samples = simulate(state, config.n, noise, config.seed, method=config.method)
    if output is None:
        path = output_dir(config) / SAMPLES_FILE
    else:
        path = pathlib.Path(output)
        path.parent.mkdir(parents=True, exist_ok=True)
    write_samples(samples, path)
    print(f"Wrote {len(samples)} samples of {state.label()} to {path}")
    print(f"sha256: {samples_checksum(path)}")
    return path
