"""
Simulate quantum homodyne tomography data and estimate the purity of the measured state.

The purity d² = ∫W² of a Wigner function W is estimated from noisy quadrature
measurements with an order-2 U-statistic; bandwidth rules, convergence rates,
risk bounds and the asymptotic variance of that estimator are provided along
with a seeded Monte Carlo harness that checks them.
"""
import logging
import math
import tempfile

import colorlog

__version__ = "0.4.0"

_, QPURITY_LOG_NAME = tempfile.mkstemp(suffix="qpurity_log")

_handler = colorlog.StreamHandler()
_handler.setFormatter(colorlog.ColoredFormatter("%(log_color)s%(message)s"))

_filehandler = logging.FileHandler(QPURITY_LOG_NAME, mode="w+")
_filehandler.setLevel(logging.DEBUG)

logger = colorlog.getLogger(__name__)
logger.addHandler(_handler)
logger.addHandler(_filehandler)

""" Purity of every pure state, 1/(2π) """
PURE_STATE_PURITY = 1.0 / (2.0 * math.pi)


def format_float(value: float) -> str:
    """Shortest round-trip decimal text for a float."""
    return repr(float(value))
