import json
import pathlib

import pytest

from qpurity.states import vacuum
from qpurity.tomography import NoiseConfig, simulate, write_samples


@pytest.fixture
def vacuum_samples(tmp_path):
    """Write 2000 noisy vacuum samples at eta=0.9 and return the file"""
    samples = simulate(vacuum(), 2000, NoiseConfig(0.9), seed=7)
    return write_samples(samples, tmp_path / "samples.csv")


@pytest.fixture
def sample_file(tmp_path):
    """Write a sample file from raw text"""

    def write(text: str, name: str = "samples.csv") -> pathlib.Path:
        path = tmp_path / name
        path.write_text(text)
        return path

    return write


@pytest.fixture
def config_file(tmp_path):
    """Write a JSON config file from keyword values"""

    def write(**values) -> pathlib.Path:
        path = tmp_path / "qpurity.json"
        path.write_text(json.dumps(values))
        return path

    return write
