"""Define a standard data class for qpurity run configuration."""
import dataclasses
import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, Mapping, Optional, Tuple

from qpurity.defaults import (
    DEFAULT_ALPHA,
    DEFAULT_ETA,
    DEFAULT_METHOD,
    DEFAULT_N,
    DEFAULT_N_GRID,
    DEFAULT_OUT,
    DEFAULT_R,
    DEFAULT_REPLICATES,
    DEFAULT_RULE,
    DEFAULT_SEED,
    DEFAULT_STATE,
    DEFAULT_TAU,
    DEFAULT_THREADS,
    DEFAULT_VARIANCE,
)
from qpurity.errors import ConfigError
from qpurity.estimator.bandwidth import ALL_RULES
from qpurity.states import ALL_STATES, SmoothnessClass, StateModel, class_norm, resolve_state

logger = logging.getLogger(__name__)

STATE_KEYS = ("x0", "nbar", "xi", "disp", "beta")


@dataclass(frozen=True)
class RunConfig:
    """
    qpurity run configuration.

    Mirrors an experiment plan plus output paths; every field can come from the
    JSON config file or from a command line flag.
    """

    state: Optional[str] = None
    x0: Optional[float] = None
    nbar: Optional[float] = None
    xi: Optional[float] = None
    disp: Optional[float] = None
    beta: Optional[float] = None
    eta: float = DEFAULT_ETA
    n: int = DEFAULT_N
    n_grid: Tuple[int, ...] = DEFAULT_N_GRID
    replicates: int = DEFAULT_REPLICATES
    rule: str = DEFAULT_RULE
    delta: Optional[float] = None
    dt: Optional[float] = None
    A: Optional[float] = None
    k: Optional[int] = None
    alpha: float = DEFAULT_ALPHA
    r: float = DEFAULT_R
    L: Optional[float] = None
    seed: int = DEFAULT_SEED
    threads: int = DEFAULT_THREADS
    out: str = DEFAULT_OUT
    samples: Optional[str] = None
    tau: float = DEFAULT_TAU
    method: str = DEFAULT_METHOD
    normality_n: Optional[int] = None
    normality_replicates: Optional[int] = None
    variance: str = DEFAULT_VARIANCE

    def __post_init__(self):
        """Normalise sequences and validate every value."""
        object.__setattr__(self, "n_grid", tuple(self.n_grid))
        self._validate()

    def _validate(self):
        if self.state is not None and self.state.lower() not in ALL_STATES:
            raise ConfigError(f"Unknown state {self.state!r}, expected one of {sorted(ALL_STATES)}.")
        if not (isinstance(self.eta, (int, float)) and 0.0 < self.eta < 1.0):
            raise ConfigError(f"eta must lie in the open interval (0, 1), got {self.eta}.")
        if self.n < 1:
            raise ConfigError(f"n must be at least 1, got {self.n}.")
        if not self.n_grid or any(int(v) < 2 for v in self.n_grid):
            raise ConfigError(f"n_grid must hold sample sizes >= 2, got {list(self.n_grid)}.")
        if any(b <= a for a, b in zip(self.n_grid, self.n_grid[1:])):
            raise ConfigError(f"n_grid must be strictly increasing, got {list(self.n_grid)}.")
        if self.replicates < 2:
            raise ConfigError(f"replicates must be at least 2, got {self.replicates}.")
        if self.rule.lower() not in ALL_RULES:
            raise ConfigError(f"Unknown bandwidth rule {self.rule!r}, expected one of {sorted(ALL_RULES)}.")
        for name in ("delta", "dt", "A", "L"):
            value = getattr(self, name)
            if value is not None and not (value > 0 and math.isfinite(value)):
                raise ConfigError(f"{name} must be positive, got {value}.")
        if self.k is not None and self.k < 0:
            raise ConfigError(f"k must be non-negative, got {self.k}.")
        if not self.alpha > 0:
            raise ConfigError(f"alpha must be positive, got {self.alpha}.")
        if not 0 < self.r <= 2:
            raise ConfigError(f"r must lie in (0, 2], got {self.r}.")
        if not 0 <= self.seed < 2**64:
            raise ConfigError(f"seed must be an unsigned 64-bit integer, got {self.seed}.")
        if self.threads < 1:
            raise ConfigError(f"threads must be at least 1, got {self.threads}.")
        if not self.tau > 0:
            raise ConfigError(f"tau must be positive, got {self.tau}.")
        if self.method not in ("auto", "fast", "generic"):
            raise ConfigError(f"Unknown sampling method {self.method!r}.")
        if self.variance not in ("asymptotic", "exact"):
            raise ConfigError(f"variance must be 'asymptotic' or 'exact', got {self.variance!r}.")
        if self.normality_n is not None and self.normality_n < 2:
            raise ConfigError(f"normality_n must be at least 2, got {self.normality_n}.")
        if self.normality_replicates is not None and self.normality_replicates < 2:
            raise ConfigError(f"normality_replicates must be at least 2, got {self.normality_replicates}.")
        if self.state is not None:
            self.state_model()

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any]) -> "RunConfig":
        """Build a config from a parsed document, rejecting unknown keys."""
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"Unknown configuration key(s): {', '.join(unknown)}.")
        try:
            return cls(**data)
        except TypeError as err:
            raise ConfigError(f"Invalid configuration value: {err}") from err

    def override(self, **flags: Any) -> "RunConfig":
        """Return a copy with every flag that is not ``None`` applied."""
        values = {key: value for key, value in flags.items() if value is not None}
        if values:
            logger.debug("Overriding configuration with %s", values)
        try:
            return dataclasses.replace(self, **values)
        except TypeError as err:
            raise ConfigError(f"Invalid configuration value: {err}") from err

    def state_model(self, default: str = DEFAULT_STATE) -> StateModel:
        """The configured state, or the default catalogue state when none is named."""
        params = {key: getattr(self, key) for key in STATE_KEYS if getattr(self, key) is not None}
        try:
            return resolve_state(self.state or default, **params)
        except ValueError as err:
            raise ConfigError(str(err)) from err

    def smoothness_class(self, state: Optional[StateModel] = None) -> SmoothnessClass:
        """
        The configured class (α, r, L).

        Without an explicit L, the smallest L of ``state`` in the class is used,
        or 1 when there is no state.
        """
        if self.L is not None:
            norm = self.L
        elif state is not None:
            norm = class_norm(state, self.alpha, self.r)
        else:
            norm = 1.0
        return SmoothnessClass(alpha=self.alpha, r=self.r, L=norm)

    def rule_params(self) -> Dict[str, Any]:
        """Keyword parameters of the bandwidth rules."""
        return {"delta": self.delta, "A": self.A, "k": self.k}

    def asdict(self) -> Dict[str, Any]:
        """Plain dictionary for provenance records."""
        data = dataclasses.asdict(self)
        data["n_grid"] = list(self.n_grid)
        return data
