"""
Catalogue of quantum states described by the Fourier transform of their Wigner function.

The Fourier convention is W̃(u, v) = ∬ W(p, q) e^{i(up + vq)} dp dq, so that on a
ray W̃(t cos φ, t sin φ) is the characteristic function E[e^{itX} | Φ = φ] of the
ideal quadrature measurement.
"""
import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Any, Callable, Dict, Tuple, Union

import numpy as np

from qpurity import PURE_STATE_PURITY, logger
from qpurity.defaults import DEFAULT_RADIAL_NODES, MIN_PHI_NODES, TAIL_TOLERANCE
from qpurity.errors import Divergent, TailNotNegligible
from qpurity.helper import even_intervals, simpson_weights

ArrayLike = Union[float, np.ndarray]


class StateKind(Enum):
    """Kinds of catalogued states."""

    Vacuum = "vacuum"
    SinglePhoton = "single_photon"
    Cat = "cat"
    Coherent = "coherent"
    Squeezed = "squeezed"
    Thermal = "thermal"


ROTATION_INVARIANT = frozenset({StateKind.Vacuum, StateKind.SinglePhoton, StateKind.Thermal})


@dataclass(frozen=True)
class StateModel:
    """
    One catalogued state and its parameters.

    Only the parameters of the given kind are meaningful, the others stay at zero.
    """

    kind: StateKind
    x0: float = 0.0
    nbar: float = 0.0
    xi: float = 0.0
    disp: float = 0.0
    beta: float = 0.0

    def __post_init__(self):
        """Check the parameter ranges of the kind."""
        if not isinstance(self.kind, StateKind):
            raise ValueError(f"Unknown state kind {self.kind!r}.")
        for name in ("x0", "nbar", "xi", "disp", "beta"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"State parameter {name} must be finite.")
        if self.kind is StateKind.Cat and self.x0 <= 0:
            raise ValueError("A cat state needs x0 > 0.")
        if self.kind is StateKind.Coherent and self.nbar < 0:
            raise ValueError("A coherent state needs nbar >= 0.")
        if self.kind is StateKind.Thermal and self.beta <= 0:
            raise ValueError("A thermal state needs beta > 0.")

    @property
    def name(self) -> str:
        """Catalogue name of the kind."""
        return self.kind.value

    @property
    def params(self) -> Dict[str, float]:
        """Parameters that define this state."""
        return {key: getattr(self, key) for key in STATE_PARAMETERS[self.kind]}

    def label(self) -> str:
        """Human readable name, e.g. ``thermal(beta=1.0)``."""
        params = ", ".join(f"{k}={v:g}" for k, v in self.params.items())
        return f"{self.name}({params})" if params else self.name


STATE_PARAMETERS: Dict[StateKind, Tuple[str, ...]] = {
    StateKind.Vacuum: (),
    StateKind.SinglePhoton: (),
    StateKind.Cat: ("x0",),
    StateKind.Coherent: ("nbar",),
    StateKind.Squeezed: ("xi", "disp"),
    StateKind.Thermal: ("beta",),
}


@dataclass(frozen=True)
class SmoothnessClass:
    """Parameters (α, r, L) of the class of super-smooth Wigner functions."""

    alpha: float
    r: float
    L: float = field(default=1.0)

    def __post_init__(self):
        """Check parameter ranges."""
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}.")
        if not 0 < self.r <= 2:
            raise ValueError(f"r must lie in (0, 2], got {self.r}.")
        if not self.L > 0:
            raise ValueError(f"L must be positive, got {self.L}.")


def vacuum() -> StateModel:
    """The zero-photon state."""
    return StateModel(StateKind.Vacuum)


def single_photon() -> StateModel:
    """The one-photon Fock state."""
    return StateModel(StateKind.SinglePhoton)


def cat(x0: float) -> StateModel:
    """Even Schrödinger cat state of two coherent components at ±x0."""
    return StateModel(StateKind.Cat, x0=float(x0))


def coherent(nbar: float) -> StateModel:
    """Coherent state with mean photon number nbar."""
    return StateModel(StateKind.Coherent, nbar=float(nbar))


def squeezed(xi: float, disp: float = 0.0) -> StateModel:
    """Displaced squeezed state."""
    return StateModel(StateKind.Squeezed, xi=float(xi), disp=float(disp))


def thermal(beta: float) -> StateModel:
    """Thermal state at inverse temperature beta."""
    return StateModel(StateKind.Thermal, beta=float(beta))


class CatalogueEntry:
    """Holder for a catalogue entry."""

    name: str
    factory: Callable[..., StateModel]
    description: str
    example: Dict[str, float]

    def __init__(
        self,
        name: str,
        factory: Callable[..., StateModel],
        description: str,
        example: Dict[str, float],
    ):
        """Initialise the entry."""
        self.name = name
        self.factory = factory
        self.description = description
        self.example = example

    def __call__(self, **params: Any) -> StateModel:
        """Build the state, falling back to the example parameters."""
        values = {**self.example, **{k: v for k, v in params.items() if v is not None}}
        unknown = set(values) - set(self.example)
        if unknown:
            raise ValueError(f"State {self.name} takes no parameter(s) {sorted(unknown)}.")
        return self.factory(**values)


STATE_VACUUM = CatalogueEntry("vacuum", vacuum, "Zero-photon pure state", {})
STATE_SINGLE_PHOTON = CatalogueEntry(
    "single_photon", single_photon, "One-photon Fock state", {}
)
STATE_CAT = CatalogueEntry("cat", cat, "Even Schrödinger cat state", {"x0": 1.0})
STATE_COHERENT = CatalogueEntry(
    "coherent", coherent, "Laser pulse with nbar mean photons", {"nbar": 4.0}
)
STATE_SQUEEZED = CatalogueEntry(
    "squeezed", squeezed, "Displaced squeezed state", {"xi": 0.5, "disp": 1.0}
)
STATE_THERMAL = CatalogueEntry(
    "thermal", thermal, "Mixed equilibrium state at temperature 1/beta", {"beta": 1.0}
)

_STATES: Tuple[CatalogueEntry, ...] = (
    STATE_VACUUM,
    STATE_SINGLE_PHOTON,
    STATE_CAT,
    STATE_COHERENT,
    STATE_SQUEEZED,
    STATE_THERMAL,
)
"""Dictionary of all catalogue entries"""
ALL_STATES: Dict[str, CatalogueEntry] = {entry.name: entry for entry in _STATES}


def resolve_state(name: str, **params: Any) -> StateModel:
    """
    Build a catalogued state from its name.

    :param name: The catalogue name, e.g. ``thermal``.
    :param params: State parameters; missing ones take the catalogue example value.
    :return: The state.
    """
    if name.lower() not in ALL_STATES:
        raise ValueError(f"State {name} not recognised.")
    return ALL_STATES[name.lower()](**params)


def catalogue() -> Tuple[StateModel, ...]:
    """Every catalogue entry built with its example parameters."""
    return tuple(entry() for entry in _STATES)


def is_rotation_invariant(state: StateModel) -> bool:
    """Whether W̃ depends on (u, v) only through ‖(u, v)‖."""
    return state.kind in ROTATION_INVARIANT


def _thermal_tanh(state: StateModel) -> float:
    return math.tanh(state.beta / 2.0)


def alpha_threshold(state: StateModel) -> float:
    """
    Supremum of α such that the state belongs to some class 𝒜(α, 2, L).

    This is the Gaussian decay rate κ of the state: |W̃(w)|² = O(e^{-2κ‖w‖²}).
    """
    if state.kind is StateKind.Squeezed:
        return math.exp(-2.0 * abs(state.xi)) / 4.0
    if state.kind is StateKind.Thermal:
        return 1.0 / (4.0 * _thermal_tanh(state))
    return 0.25


def quadrature_scale(state: StateModel) -> float:
    """Standard-deviation-like spread of the quadrature distribution."""
    if state.kind is StateKind.Coherent:
        return math.sqrt(state.nbar)
    if state.kind is StateKind.Squeezed:
        return math.exp(abs(state.xi)) + abs(state.disp)
    if state.kind is StateKind.Thermal:
        return math.sqrt(0.5 / _thermal_tanh(state))
    if state.kind is StateKind.Cat:
        return state.x0
    return math.sqrt(0.5)


def modulus_shift(state: StateModel) -> float:
    """Radius around which |W̃| peaks away from the origin (cat interference)."""
    if state.kind is StateKind.Cat:
        return 2.0 * state.x0
    return 0.0


def frequency_cutoff(state: StateModel) -> float:
    """Radius beyond which |W̃|² is below e^{-50} on every ray."""
    return modulus_shift(state) + math.sqrt(25.0 / alpha_threshold(state))


def _radial_profile(state: StateModel, t: np.ndarray) -> np.ndarray:
    """W̃ of a rotation-invariant state as a function of the radius."""
    t2 = t * t
    if state.kind is StateKind.Vacuum:
        return np.exp(-t2 / 4.0).astype(complex)
    if state.kind is StateKind.SinglePhoton:
        return ((1.0 - t2 / 2.0) * np.exp(-t2 / 4.0)).astype(complex)
    if state.kind is StateKind.Thermal:
        return np.exp(-t2 / (4.0 * _thermal_tanh(state))).astype(complex)
    raise ValueError(f"State {state.name} is not rotation invariant.")


def char_fn(state: StateModel, u: ArrayLike, v: ArrayLike) -> Any:
    """
    Fourier transform W̃(u, v) of the Wigner function.

    :param state: The catalogued state.
    :param u: Frequency paired with p, scalar or array.
    :param v: Frequency paired with q, broadcastable with ``u``.
    :return: Complex scalar or array.
    """
    u_arr, v_arr = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
    kind = state.kind
    if kind in ROTATION_INVARIANT:
        result = _radial_profile(state, np.hypot(u_arr, v_arr))
    elif kind is StateKind.Cat:
        x0 = state.x0
        # e^{-X0²} cosh(X0 v) e^{-v²/4} folded into two shifted Gaussians
        interference = 0.5 * (np.exp(-((v_arr - 2 * x0) ** 2) / 4.0) + np.exp(-((v_arr + 2 * x0) ** 2) / 4.0))
        envelope = np.exp(-(u_arr**2) / 4.0)
        both = envelope * (np.exp(-(v_arr**2) / 4.0) * np.cos(x0 * u_arr) + interference)
        result = (both / (1.0 + math.exp(-x0 * x0))).astype(complex)
    elif kind is StateKind.Coherent:
        result = np.exp(-(u_arr**2 + v_arr**2) / 4.0 + 1j * math.sqrt(state.nbar) * v_arr)
    elif kind is StateKind.Squeezed:
        squeeze = math.exp(2.0 * state.xi)
        result = np.exp(-(u_arr**2) * squeeze / 4.0 - (v_arr**2) / (4.0 * squeeze) + 1j * state.disp * v_arr)
    else:  # pragma: no cover
        raise ValueError(f"State {state.name} not recognised.")
    if result.ndim == 0:
        return complex(result)
    return result


def char_fn_radial(state: StateModel, t: ArrayLike, phi: ArrayLike) -> Any:
    """
    W̃(t cos φ, t sin φ), the characteristic function of X given Φ = φ.

    Rotation-invariant states ignore φ exactly.
    """
    if is_rotation_invariant(state):
        t_arr, _ = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(phi, dtype=float))
        result = _radial_profile(state, t_arr)
        return complex(result) if result.ndim == 0 else result
    t_arr = np.asarray(t, dtype=float)
    phi_arr = np.asarray(phi, dtype=float)
    return char_fn(state, t_arr * np.cos(phi_arr), t_arr * np.sin(phi_arr))


def true_purity(state: StateModel) -> float:
    """Closed-form purity d² = ∫W²: 1/(2π) for pure states, tanh(β/2)/(2π) for thermal ones."""
    if state.kind is StateKind.Thermal:
        return _thermal_tanh(state) / (2.0 * math.pi)
    return PURE_STATE_PURITY


def _phi_nodes(count: int = MIN_PHI_NODES) -> np.ndarray:
    """Equispaced nodes of one period [0, π) for the periodic trapezoid rule."""
    return np.arange(count) * (math.pi / count)


def _radial_moduli(state: StateModel, t: np.ndarray) -> np.ndarray:
    """|W̃|² on the radial grid, one column per φ node (a single column if invariant)."""
    if is_rotation_invariant(state):
        return np.abs(_radial_profile(state, t))[:, None] ** 2
    phis = _phi_nodes()
    return np.abs(char_fn_radial(state, t[:, None], phis[None, :])) ** 2


def _log_radial_moduli(state: StateModel, t: np.ndarray) -> np.ndarray:
    """
    log|W̃|² on the radial grid in closed form, shaped like :func:`_radial_moduli`.

    Finite wherever W̃ ≠ 0, however far the Gaussian envelope has decayed.
    """
    t2 = (t * t)[:, None]
    kind = state.kind
    if kind is StateKind.Vacuum:
        return -t2 / 2.0
    if kind is StateKind.Thermal:
        return -t2 / (2.0 * _thermal_tanh(state))
    if kind is StateKind.SinglePhoton:
        with np.errstate(divide="ignore"):
            return 2.0 * np.log(np.abs(1.0 - t2 / 2.0)) - t2 / 2.0
    phis = _phi_nodes()
    u = t[:, None] * np.cos(phis)[None, :]
    v = t[:, None] * np.sin(phis)[None, :]
    if kind is StateKind.Coherent:
        return -(u * u + v * v) / 2.0
    if kind is StateKind.Squeezed:
        squeeze = math.exp(2.0 * state.xi)
        return -(u * u) * squeeze / 2.0 - (v * v) / (2.0 * squeeze)
    if kind is StateKind.Cat:
        x0 = state.x0
        exponents = (v * v / 4.0, (v - 2 * x0) ** 2 / 4.0, (v + 2 * x0) ** 2 / 4.0)
        smallest = np.minimum(np.minimum(exponents[0], exponents[1]), exponents[2])
        inner = np.exp(smallest - exponents[0]) * np.cos(x0 * u) + 0.5 * (
            np.exp(smallest - exponents[1]) + np.exp(smallest - exponents[2])
        )
        with np.errstate(divide="ignore"):
            log_inner = np.log(np.abs(inner)) - smallest
        return -(u * u) / 2.0 + 2.0 * log_inner - 2.0 * math.log1p(math.exp(-x0 * x0))
    raise ValueError(f"State {state.name} not recognised.")  # pragma: no cover


def _radial_integral(state: StateModel, t_max: float, nodes: int, log_weight=None) -> float:
    """
    (1/4π²) ∫₀^π ∫_ℝ |t| |W̃(t cos φ, t sin φ)|² w(t) dt dφ by radial Simpson quadrature.

    |W̃|² is π-periodic in φ, so the φ direction uses the periodic trapezoid rule.
    """
    t = np.linspace(0.0, t_max, nodes + 1)
    weights = simpson_weights(nodes, t_max / nodes)
    if log_weight is None:
        radial = t[:, None] * _radial_moduli(state, t)
    else:
        # the weight alone overflows long before the weighted integrand does
        with np.errstate(divide="ignore"):
            radial = np.exp(np.log(t)[:, None] + _log_radial_moduli(state, t) + log_weight(t)[:, None])
    per_phi = weights @ radial
    # ∫_ℝ |t| … dt = 2 ∫₀ t … dt, and the φ-average over [0, π) times π
    return float(2.0 * math.pi * per_phi.mean() / (4.0 * math.pi**2))


def _tail_ratio(state: StateModel, t_max: float) -> float:
    """max_φ |W̃(t_max, φ)|² · t_max."""
    return float(_radial_moduli(state, np.array([t_max])).max() * t_max)


def purity_by_plancherel(
    state: StateModel, t_max: float = None, nodes: int = DEFAULT_RADIAL_NODES
) -> float:
    """
    Purity (1/4π²) ∬ |W̃|² by radial quadrature.

    :param state: The catalogued state.
    :param t_max: Radial truncation, defaults to the state's frequency cutoff.
    :param nodes: Number of Simpson intervals (at least 64, rounded up to even).
    :raises TailNotNegligible: If |W̃(t_max, ·)|² · t_max ≥ 1e-12.
    """
    if nodes < 64:
        raise ValueError(f"Plancherel quadrature needs at least 64 nodes, got {nodes}.")
    nodes += nodes % 2
    if t_max is None:
        t_max = frequency_cutoff(state)
    tail = _tail_ratio(state, t_max)
    if tail >= TAIL_TOLERANCE:
        raise TailNotNegligible(
            f"|W̃|²·t at t_max={t_max:g} is {tail:.3g} for {state.label()}, increase t_max."
        )
    logger.debug("Plancherel purity of %s with t_max=%s, nodes=%s", state.label(), t_max, nodes)
    return _radial_integral(state, t_max, nodes)


def class_norm(state: StateModel, alpha: float, r: float, max_doublings: int = 10) -> float:
    """
    Smallest L such that ∬ |W̃|² e^{2α‖w‖^r} dw ≤ (2π)² L.

    The truncation radius starts at the frequency cutoff and doubles until the
    weighted integrand is negligible. The integrand is evaluated as
    exp(log t + log|W̃|² + 2αt^r).

    :raises Divergent: If the weighted integrand does not decay.
    """
    if alpha < 0:
        raise ValueError(f"alpha must be non-negative, got {alpha}.")
    if not 0 < r <= 2:
        raise ValueError(f"r must lie in (0, 2], got {r}.")

    def log_weight(t):
        return 2.0 * alpha * t**r

    log_tolerance = math.log(TAIL_TOLERANCE)
    t_max = frequency_cutoff(state)
    for _ in range(max_doublings):
        t = np.linspace(0.0, t_max, 4097)[1:]
        with np.errstate(divide="ignore"):
            log_profile = np.log(t) + _log_radial_moduli(state, t).max(axis=1) + log_weight(t)
        if log_profile[-1] < log_tolerance + log_profile.max():
            intervals = max(DEFAULT_RADIAL_NODES, even_intervals(t_max, 0.01))
            value = _radial_integral(state, t_max, intervals, log_weight)
            logger.debug(
                "Class norm of %s for alpha=%s, r=%s: %s (t_max=%s)", state.label(), alpha, r, value, t_max
            )
            return value
        t_max *= 2.0
    raise Divergent(
        f"∬|W̃|² e^(2α‖w‖^r) diverges for {state.label()} at alpha={alpha:g}, r={r:g}"
        f" (membership for r=2 needs alpha < {alpha_threshold(state):g})."
    )


def marginal_char_fn(state: StateModel, t: ArrayLike, phi_nodes: int = 2 * MIN_PHI_NODES) -> Any:
    """
    E[e^{itX}] with Φ uniform on [0, π]: (1/π) ∫₀^π W̃(t cos φ, t sin φ) dφ.

    :param phi_nodes: Simpson intervals of the φ quadrature (at least 256).
    """
    if is_rotation_invariant(state):
        t_arr = np.asarray(t, dtype=float)
        result = _radial_profile(state, t_arr)
        return complex(result) if result.ndim == 0 else result
    return _marginal_quadrature(state, np.asarray(t, dtype=float), max(phi_nodes, MIN_PHI_NODES))


def _marginal_quadrature(state: StateModel, t: np.ndarray, phi_nodes: int) -> Any:
    phi_nodes += phi_nodes % 2
    phis = np.linspace(0.0, math.pi, phi_nodes + 1)
    weights = simpson_weights(phi_nodes, math.pi / phi_nodes) / math.pi
    values = char_fn_radial(state, t[..., None], phis) @ weights
    return complex(values) if np.ndim(values) == 0 else values


@lru_cache(maxsize=64)
def _cached_marginal(state: StateModel, start: float, spacing: float, count: int) -> np.ndarray:
    return marginal_char_fn(state, start + spacing * np.arange(count))


def marginal_on_lattice(state: StateModel, start: float, spacing: float, count: int) -> np.ndarray:
    """Marginal characteristic function on ``start + spacing * arange(count)``, cached."""
    values = _cached_marginal(state, float(start), float(spacing), int(count))
    return values.copy()
