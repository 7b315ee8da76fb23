"""A module containing custom enums for qpurity."""
from enum import Enum


class Regime(Enum):
    """Variance regime of the estimator for a smoothness class."""

    r_lt_2 = 1
    r2_slow = 2
    r2_parametric = 3


class Side(Enum):
    """Which bound of a rate to report."""

    upper = 1
    lower = 2


class Verdict(Enum):
    """Outcome of the purity classifier."""

    pure = 1
    mixed = 2


class OutputFormat(Enum):
    """Represent the available console formats."""

    CONSOLE = 1
    JSON = 2

    @classmethod
    def get_all(cls):
        """Return a list with all Enumerations."""
        return [format.name for format in cls]
