"""
Noisy homodyne tomography data.

Ideal draws are pairs (X, Φ) with Φ uniform on [0, π) and X | Φ = φ distributed
as the Radon transform of the Wigner function along φ.  The detector then
reports Y = √η X + √((1-η)/2) ξ with ξ standard normal.
"""
import csv
import hashlib
import math
import pathlib
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, NamedTuple, Sequence, Tuple, Union

import numpy as np
from scipy.integrate import cumulative_trapezoid, trapezoid

from qpurity import format_float, logger
from qpurity.defaults import DEFAULT_DENSITY_POINTS, DEFAULT_PHI_CELLS
from qpurity.errors import ConfigError, MassDeficit, NegativeDensity, NumericRegimeError, SampleFormatError
from qpurity.states import (
    StateKind,
    StateModel,
    char_fn_radial,
    frequency_cutoff,
    quadrature_scale,
)

SAMPLE_HEADER = ("y", "phi")

NEGATIVE_RIPPLE = 1e-8
MASS_TOLERANCE = 1e-6
IMAGINARY_TOLERANCE = 1e-9


@dataclass(frozen=True)
class HomodyneSample:
    """One noisy quadrature measurement at a local oscillator phase."""

    y: float
    phi: float


@dataclass(frozen=True)
class NoiseConfig:
    """Detection efficiency of the homodyne detector."""

    eta: float

    def __post_init__(self):
        """Reject efficiencies outside of the open interval (0, 1)."""
        if not 0.0 < self.eta < 1.0:
            raise ConfigError(f"eta must lie in the open interval (0, 1), got {self.eta}.")

    @property
    def noise_sd(self) -> float:
        """Standard deviation √((1-η)/2) of the additive Gaussian noise."""
        return math.sqrt((1.0 - self.eta) / 2.0)


class IdealSamples(NamedTuple):
    """Noiseless draws (x, phi) as two arrays of equal length."""

    x: np.ndarray
    phi: np.ndarray


class SampleBatch:
    """
    Noisy samples stored column-wise.

    Behaves as a sequence of :class:`HomodyneSample`.
    """

    def __init__(self, y: Iterable[float], phi: Iterable[float]):
        """Store copies of the two columns."""
        self.y = np.array(y, dtype=float).reshape(-1)
        self.phi = np.array(phi, dtype=float).reshape(-1)
        if self.y.shape != self.phi.shape:
            raise ValueError("y and phi columns must have the same length.")

    def __len__(self) -> int:
        return self.y.size

    def __iter__(self) -> Iterator[HomodyneSample]:
        for y, phi in zip(self.y.tolist(), self.phi.tolist()):
            yield HomodyneSample(y, phi)

    def __getitem__(self, index: int) -> HomodyneSample:
        return HomodyneSample(float(self.y[index]), float(self.phi[index]))

    def __eq__(self, other) -> bool:
        if not isinstance(other, SampleBatch):
            return NotImplemented
        return np.array_equal(self.y, other.y) and np.array_equal(self.phi, other.phi)

    def __repr__(self) -> str:
        return f"SampleBatch(n={len(self)})"


SampleLike = Union[SampleBatch, Sequence[HomodyneSample]]


def as_batch(samples: SampleLike) -> SampleBatch:
    """Column view of any sequence of samples."""
    if isinstance(samples, SampleBatch):
        return samples
    samples = list(samples)
    return SampleBatch([s.y for s in samples], [s.phi for s in samples])


@dataclass(frozen=True)
class DensityTable:
    """Conditional density p(x | φ) tabulated on a uniform grid."""

    grid: np.ndarray
    values: np.ndarray
    cdf: np.ndarray
    phi: float = 0.0

    @property
    def mass(self) -> float:
        """Trapezoid mass of the table."""
        return float(trapezoid(self.values, self.grid))

    def cdf_at(self, x: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
        """Piecewise-linear CDF."""
        return np.interp(x, self.grid, self.cdf, left=0.0, right=1.0)

    def ppf(self, u: np.ndarray) -> np.ndarray:
        """Inverse CDF by monotone linear interpolation, ties go to the left endpoint."""
        return _inverse_cdf(self.grid, self.cdf, np.asarray(u, dtype=float))


def default_x_max(state: StateModel) -> float:
    """Half-width of density grids, eight spreads past the state's scale."""
    return 8.0 * (1.0 + quadrature_scale(state))


def _frequency_grid(state: StateModel, x_max: float) -> Tuple[np.ndarray, np.ndarray]:
    """Symmetric t-grid and trapezoid weights for inverse Fourier on |x| ≤ x_max."""
    half_width = frequency_cutoff(state)
    # aliased copies sit 2π/h apart; h = π/(2 x_max) keeps them 4 x_max away
    spacing = math.pi / (2.0 * x_max)
    half_count = int(math.ceil(half_width / spacing))
    t = spacing * np.arange(-half_count, half_count + 1)
    weights = np.full(t.size, spacing)
    weights[0] = weights[-1] = spacing / 2.0
    return t, weights


def _density_matrix(state: StateModel, phis: np.ndarray, grid: np.ndarray, x_max: float) -> np.ndarray:
    """
    Raw p(x | φ) for every φ in ``phis`` (rows) and x in ``grid`` (columns).

    One batched product E @ (w · W̃) with E = e^{-itx}.
    """
    t, weights = _frequency_grid(state, x_max)
    transforms = char_fn_radial(state, t[:, None], phis[None, :]) * weights[:, None]
    kernel = np.exp(-1j * np.outer(grid, t))
    raw = (kernel @ transforms).T / (2.0 * math.pi)
    residue = float(np.abs(raw.imag).max())
    if residue >= IMAGINARY_TOLERANCE:
        raise NumericRegimeError(f"Inverse Fourier left an imaginary residue of {residue:.3g}.")
    return raw.real


def _finish_table(state: StateModel, phi: float, grid: np.ndarray, raw: np.ndarray) -> DensityTable:
    lowest = float(raw.min())
    if lowest < -NEGATIVE_RIPPLE:
        raise NegativeDensity(f"Density of {state.label()} at phi={phi:g} reaches {lowest:.3g}.")
    values = np.where(raw < 0.0, 0.0, raw)
    if lowest < 0.0:
        logger.debug("Clamped negative ripple %s of %s at phi=%s", lowest, state.label(), phi)
    mass = float(trapezoid(values, grid))
    if abs(mass - 1.0) > MASS_TOLERANCE:
        raise MassDeficit(f"Density of {state.label()} at phi={phi:g} has mass {mass!r}.")
    values = values / mass
    cdf = cumulative_trapezoid(values, grid, initial=0.0)
    cdf = np.maximum.accumulate(cdf / cdf[-1])
    return DensityTable(grid=grid, values=values, cdf=cdf, phi=float(phi))


def conditional_density(
    state: StateModel, phi: float, x_max: float = None, m: int = DEFAULT_DENSITY_POINTS
) -> DensityTable:
    """
    Tabulate p(x | φ) = (1/2π) ∫ W̃(t cos φ, t sin φ) e^{-itx} dt.

    :param state: The catalogued state.
    :param phi: Local oscillator phase.
    :param x_max: Grid half-width, defaults to :func:`default_x_max`.
    :param m: Number of grid points, at least 512.
    :raises NegativeDensity: If a value is below -1e-8.
    :raises MassDeficit: If the mass deviates from one by more than 1e-6.
    """
    if m < 512:
        raise ValueError(f"Density tables need at least 512 points, got {m}.")
    if x_max is None:
        x_max = default_x_max(state)
    grid = np.linspace(-x_max, x_max, m)
    raw = _density_matrix(state, np.array([float(phi)]), grid, x_max)[0]
    return _finish_table(state, phi, grid, raw)


@lru_cache(maxsize=16)
def phi_lattice_tables(
    state: StateModel, cells: int = DEFAULT_PHI_CELLS, m: int = DEFAULT_DENSITY_POINTS
) -> Tuple[DensityTable, ...]:
    """Density tables at φ_j = jπ/cells for j = 0..cells."""
    x_max = default_x_max(state)
    grid = np.linspace(-x_max, x_max, m)
    phis = np.arange(cells + 1) * (math.pi / cells)
    raw = _density_matrix(state, phis, grid, x_max)
    logger.debug("Built %s density tables for %s", cells + 1, state.label())
    return tuple(_finish_table(state, phi, grid, row) for phi, row in zip(phis, raw))


def _inverse_cdf(grid: np.ndarray, cdf: np.ndarray, u: np.ndarray) -> np.ndarray:
    upper = np.clip(np.searchsorted(cdf, u, side="left"), 1, grid.size - 1)
    lower = upper - 1
    c0, c1 = cdf[lower], cdf[upper]
    width = c1 - c0
    frac = np.divide(u - c0, width, out=np.zeros_like(u), where=width > 0)
    frac = np.clip(frac, 0.0, 1.0)
    return grid[lower] + frac * (grid[upper] - grid[lower])


def sample_from_table(table: DensityTable, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``n`` values from one density table by inverse CDF."""
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}.")
    return table.ppf(rng.random(n))


def _fast_path(state: StateModel, phi: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    n = phi.size
    kind = state.kind
    if kind is StateKind.Vacuum:
        return rng.normal(0.0, math.sqrt(0.5), n)
    if kind is StateKind.Coherent:
        return math.sqrt(state.nbar) * np.sin(phi) + rng.normal(0.0, math.sqrt(0.5), n)
    if kind is StateKind.Squeezed:
        squeeze = math.exp(2.0 * state.xi)
        variance = (squeeze * np.cos(phi) ** 2 + np.sin(phi) ** 2 / squeeze) / 2.0
        return state.disp * np.sin(phi) + np.sqrt(variance) * rng.standard_normal(n)
    if kind is StateKind.Thermal:
        return rng.normal(0.0, math.sqrt(0.5 / math.tanh(state.beta / 2.0)), n)
    if kind is StateKind.SinglePhoton:
        sign = np.where(rng.random(n) < 0.5, -1.0, 1.0)
        return sign * np.sqrt(rng.gamma(1.5, 1.0, n))
    raise ValueError(f"No direct sampler for {state.name}.")


def _generic_path(state: StateModel, phi: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    tables = phi_lattice_tables(state)
    cells = len(tables) - 1
    position = phi / (math.pi / cells)
    left = np.minimum(np.floor(position).astype(int), cells - 1)
    # pick the upper table with probability equal to its interpolation weight
    chosen = left + (rng.random(phi.size) < position - left)
    u = rng.random(phi.size)
    x = np.empty(phi.size)
    for index in np.unique(chosen):
        mask = chosen == index
        x[mask] = tables[index].ppf(u[mask])
    return x


def has_fast_path(state: StateModel) -> bool:
    """Whether a closed-form sampler exists for the state."""
    return state.kind is not StateKind.Cat


def sample_ideal(state: StateModel, n: int, rng: np.random.Generator, method: str = "auto") -> IdealSamples:
    """
    Draw n ideal pairs: Φ ~ U[0, π), then X | Φ.

    :param method: ``auto`` (closed form when available), ``fast`` or ``generic``.
    """
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}.")
    if method not in ("auto", "fast", "generic"):
        raise ValueError(f"Sampling method {method} not recognised.")
    phi = rng.uniform(0.0, math.pi, n)
    if method == "generic" or (method == "auto" and not has_fast_path(state)):
        x = _generic_path(state, phi, rng)
    else:
        x = _fast_path(state, phi, rng)
    return IdealSamples(x=x, phi=phi)


def apply_noise(ideal: IdealSamples, cfg: NoiseConfig, rng: np.random.Generator) -> SampleBatch:
    """Y = √η X + √((1-η)/2) ξ, keeping the phases."""
    x = np.asarray(ideal.x, dtype=float)
    y = math.sqrt(cfg.eta) * x + cfg.noise_sd * rng.standard_normal(x.size)
    return SampleBatch(y, ideal.phi)


def sample_streams(seed: int, stream: Tuple[int, ...] = ()) -> Tuple[np.random.Generator, np.random.Generator]:
    """Independent (ideal, noise) generators of one logical task."""
    ideal_seq, noise_seq = np.random.SeedSequence(seed, spawn_key=tuple(stream)).spawn(2)
    return np.random.default_rng(ideal_seq), np.random.default_rng(noise_seq)


def simulate(
    state: StateModel,
    n: int,
    noise: NoiseConfig,
    seed: int,
    replicate: Union[int, Tuple[int, ...]] = 0,
    method: str = "auto",
) -> SampleBatch:
    """
    Ideal sampling followed by the noise channel on two independent streams.

    :param replicate: Index (or tuple of indices) of the logical task under ``seed``.
    """
    stream = replicate if isinstance(replicate, tuple) else (replicate,)
    ideal_rng, noise_rng = sample_streams(seed, stream)
    return apply_noise(sample_ideal(state, n, ideal_rng, method=method), noise, noise_rng)


def write_samples(samples: SampleLike, path: Union[str, pathlib.Path]) -> pathlib.Path:
    """Write samples as ``y,phi`` CSV with shortest round-trip floats and LF endings."""
    path = pathlib.Path(path)
    batch = as_batch(samples)
    with open(path, "w", newline="") as out:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(SAMPLE_HEADER)
        for y, phi in zip(batch.y.tolist(), batch.phi.tolist()):
            writer.writerow((format_float(y), format_float(phi)))
    logger.debug("Wrote %s samples to %s", len(batch), path)
    return path


def read_samples(path: Union[str, pathlib.Path]) -> SampleBatch:
    """
    Read a ``y,phi`` CSV.

    :raises SampleFormatError: On a missing header, a wrong column count or a non-finite value.
    """
    ys, phis = [], []
    with open(path, newline="") as src:
        reader = csv.reader(src)
        header = next(reader, None)
        if header is None or tuple(h.strip() for h in header) != SAMPLE_HEADER:
            raise SampleFormatError(f"{path}: expected header 'y,phi', got {header!r}.")
        for line, row in enumerate(reader, start=2):
            if len(row) != 2:
                raise SampleFormatError(f"{path}:{line}: expected 2 columns, got {len(row)}.")
            try:
                y, phi = float(row[0]), float(row[1])
            except ValueError as err:
                raise SampleFormatError(f"{path}:{line}: {err}") from err
            if not (math.isfinite(y) and math.isfinite(phi)):
                raise SampleFormatError(f"{path}:{line}: non-finite value.")
            ys.append(y)
            phis.append(phi)
    return SampleBatch(ys, phis)


def samples_checksum(path: Union[str, pathlib.Path]) -> str:
    """SHA-256 hex digest of a sample file."""
    return hashlib.sha256(pathlib.Path(path).read_bytes()).hexdigest()
