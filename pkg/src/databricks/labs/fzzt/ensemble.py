"""Monte Carlo over the Gaussian Hermitian ensemble with density ∝ e^{−Tr M²}.

Samples are drawn in blocks of 1000 from Philox streams keyed by (seed, N, block), so any
block can be regenerated on its own and a run does not depend on how blocks are scheduled
across threads. Block results are merged in block order."""

import functools
import logging
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np

from databricks.labs.blueprint.parallel import Threads

from databricks.labs.fzzt.airy import Airy
from databricks.labs.fzzt.errors import (
    DomainError,
    EnsembleSizeError,
    InsufficientSamples,
    NonMonotoneRegion,
    SingularResolvent,
)
from databricks.labs.fzzt.precision import Numerics
from databricks.labs.fzzt.quadrature import HalfLine, RealLine, integrate

logger = logging.getLogger(__name__)

CONVENTION = "exp(-Tr M^2)"
MAX_N = 64
MIN_SAMPLES = 1000
BLOCK = 1000
SINGULAR_DISTANCE = 1e-8
SUPPORT_MARGIN = 0.5
BOOTSTRAP_ROUNDS = 200
MAX_SLOPE_CI = 0.6
# stream key of the bootstrap resampler, apart from any ensemble size
_BOOTSTRAP_STREAM = 2**31 - 1


@dataclass(frozen=True)
class EnsembleSample:
    N: int
    matrix: np.ndarray
    seed: int
    convention: str = CONVENTION


@dataclass(frozen=True)
class DetShift:
    z: complex


@dataclass(frozen=True)
class TracePower:
    k: int


@dataclass(frozen=True)
class Resolvent:
    z: complex


Observable = DetShift | TracePower | Resolvent


@dataclass(frozen=True)
class McEstimate:
    """Running mean of a complex observable with the sum of squared deviations ``m2``."""

    mean: complex
    std_error: float
    samples: int
    seed: int
    m2: float = 0.0

    @classmethod
    def of(cls, values: np.ndarray, seed: int) -> "McEstimate":
        n = len(values)
        mean = complex(np.mean(values))
        m2 = float(np.sum(np.abs(values - mean) ** 2))
        return cls(mean, _std_error(m2, n), n, seed, m2)

    def merge(self, other: "McEstimate") -> "McEstimate":
        n = self.samples + other.samples
        if n == 0:
            return self
        delta = other.mean - self.mean
        mean = self.mean + delta * other.samples / n
        m2 = self.m2 + other.m2 + abs(delta) ** 2 * self.samples * other.samples / n
        return McEstimate(mean, _std_error(m2, n), n, self.seed, m2)


def _std_error(m2: float, n: int) -> float:
    if n < 2:
        return math.inf
    return math.sqrt(m2 / (n - 1)) / math.sqrt(n)


def _check_size(N: int):
    if not 1 <= N <= MAX_N:
        msg = f"ensemble size must be in [1, {MAX_N}], got {N}"
        raise EnsembleSizeError(msg)


def _generator(seed: int, *key: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=key)))


def _draw(rng: np.random.Generator, N: int, count: int) -> np.ndarray:
    """``count`` Hermitian N×N matrices: diagonal variance ½, off-diagonal parts variance ¼."""
    diagonal = rng.normal(0.0, math.sqrt(0.5), size=(count, N))
    real = rng.normal(0.0, 0.5, size=(count, N, N))
    imag = rng.normal(0.0, 0.5, size=(count, N, N))
    upper = np.triu(real + 1j * imag, k=1)
    matrices = upper + np.conj(np.swapaxes(upper, -1, -2))
    index = np.arange(N)
    matrices[:, index, index] = diagonal
    return matrices


def sample_ensemble(N: int, seed: int) -> EnsembleSample:
    _check_size(N)
    matrix = _draw(_generator(seed, N), N, 1)[0]
    return EnsembleSample(N, matrix, seed)


def _blocks(samples: int) -> list[tuple[int, int]]:
    return [(b, min(BLOCK, samples - b * BLOCK)) for b in range(math.ceil(samples / BLOCK))]


def _eigenvalue_block(N: int, seed: int, block: int, count: int) -> tuple[int, np.ndarray]:
    return block, np.linalg.eigvalsh(_draw(_generator(seed, N, block), N, count))


def eigenvalues(N: int, samples: int, seed: int) -> np.ndarray:
    """Spectra of ``samples`` matrices, one row per matrix, regenerated block by block in a thread pool."""
    _check_size(N)
    if samples < 1:
        msg = f"need at least one sample, got {samples}"
        raise DomainError(msg)
    tasks = [functools.partial(_eigenvalue_block, N, seed, b, count) for b, count in _blocks(samples)]
    results = Threads.strict(f"sampling {samples} matrices of size {N}", tasks)
    return np.concatenate([spectrum for _, spectrum in sorted(results, key=lambda r: r[0])])


def _evaluator(obs: Observable) -> Callable[[np.ndarray], np.ndarray]:
    match obs:
        case DetShift(z):
            return lambda spectra: np.prod(z - spectra, axis=1)
        case TracePower(k):
            return lambda spectra: np.sum(spectra**k, axis=1).astype(complex)

        case Resolvent(z):

            def resolvent(spectra):
                distance = np.min(np.abs(z - spectra))
                if distance < SINGULAR_DISTANCE:
                    msg = f"a sampled eigenvalue lies within {distance:.3g} of z = {z}"
                    raise SingularResolvent(msg)
                return np.sum(1.0 / (z - spectra), axis=1)

            return resolvent
    msg = f"unknown observable: {obs}"
    raise DomainError(msg)


def expect_observable(N: int, obs: Observable, samples: int, seed: int) -> McEstimate:
    if samples < MIN_SAMPLES:
        msg = f"Monte Carlo estimates need at least {MIN_SAMPLES} samples, got {samples}"
        raise DomainError(msg)
    evaluate = _evaluator(obs)
    spectra = eigenvalues(N, samples, seed)
    estimates = [McEstimate.of(evaluate(spectra[b * BLOCK : b * BLOCK + count]), seed) for b, count in _blocks(samples)]
    estimate = functools.reduce(McEstimate.merge, estimates)
    logger.info(f"⟨{obs}⟩ at N={N}: {estimate.mean:.6g} ± {estimate.std_error:.2g} from {samples} samples")
    return estimate


def det_shift_oracle(N: int, z: Any, numerics: Numerics) -> complex:
    """⟨det(z − M)⟩ by one-dimensional quadratures of the Gaussian weights.

    At N=2 the integral over (m₁₁, m₂₂, Re m₁₂, Im m₁₂) reduces, by the angular symmetry of m₁₂,
    to moments in m₁₁, m₂₂ and r = |m₁₂| with weight 2πr·e^{−2r²}."""
    ctx = numerics.ctx
    z = numerics.number(z)
    tol = numerics.tolerance()

    def moment(f, domain):
        return integrate(f, domain, tol, numerics).value.value

    g0 = moment(lambda a: ctx.exp(-a * a), RealLine())
    g1 = moment(lambda a: a * ctx.exp(-a * a), RealLine())
    if N == 1:
        return complex((z * g0 - g1) / g0)
    if N == 2:
        r0 = moment(lambda r: 2 * ctx.pi * r * ctx.exp(-2 * r * r), HalfLine())
        r2 = moment(lambda r: 2 * ctx.pi * r**3 * ctx.exp(-2 * r * r), HalfLine())
        return complex(((z * g0 - g1) ** 2 * r0 - g0**2 * r2) / (g0**2 * r0))
    msg = f"the quadrature oracle covers N ∈ {{1, 2}}, got {N}"
    raise EnsembleSizeError(msg)


@dataclass(frozen=True)
class VarianceScaling:
    slope: float
    slope_ci: tuple[float, float]
    variances: dict[int, float]
    covariances: dict[int, float]


def _slope(sizes: np.ndarray, variances: np.ndarray) -> float:
    return float(np.polyfit(np.log(sizes), np.log(variances), 1)[0])


def variance_scaling(sizes: Sequence[int], samples: int, seed: int) -> VarianceScaling:
    """Least-squares slope of log Var(Tr M²/N²) against log N, with a bootstrap interval.

    The covariance of Tr M²/N² and Tr M⁴/N³ is reported per N alongside."""
    sizes = list(sizes)
    if len(sizes) < 4 or any(b <= a for a, b in zip(sizes, sizes[1:])):
        msg = f"variance scaling needs at least four strictly increasing sizes, got {sizes}"
        raise DomainError(msg)
    if samples < MIN_SAMPLES:
        msg = f"variance scaling needs at least {MIN_SAMPLES} samples per size, got {samples}"
        raise DomainError(msg)
    first, second = {}, {}
    for N in sizes:
        spectra = eigenvalues(N, samples, seed)
        first[N] = np.sum(spectra**2, axis=1) / N**2
        second[N] = np.sum(spectra**4, axis=1) / N**3
    variances = {N: float(np.var(first[N], ddof=1)) for N in sizes}
    covariances = {N: float(np.cov(first[N], second[N])[0, 1]) for N in sizes}
    log_sizes = np.array(sizes, dtype=float)
    slope = _slope(log_sizes, np.array([variances[N] for N in sizes]))
    rng = _generator(seed, _BOOTSTRAP_STREAM)
    slopes = []
    for _ in range(BOOTSTRAP_ROUNDS):
        resampled = [np.var(first[N][rng.integers(0, samples, samples)], ddof=1) for N in sizes]
        slopes.append(_slope(log_sizes, np.array(resampled)))
    low, high = (float(q) for q in np.percentile(slopes, [2.5, 97.5]))
    logger.info(f"variance slope {slope:.3f}, bootstrap interval [{low:.3f}, {high:.3f}]")
    if high - low > MAX_SLOPE_CI:
        msg = f"bootstrap interval [{low:.3f}, {high:.3f}] on the variance slope is wider than {MAX_SLOPE_CI}"
        raise InsufficientSamples(msg)
    return VarianceScaling(slope, (low, high), variances, covariances)


def spectral_support(N: int, samples: int, seed: int) -> tuple[float, float]:
    spectra = eigenvalues(N, samples, seed)
    return float(spectra.min()), float(spectra.max())


@dataclass(frozen=True)
class ResolventInversion:
    max_inversion_gap: float
    grid: tuple[float, ...]
    values: tuple[float, ...]


def _normalized_resolvent(spectra: np.ndarray, N: int) -> Callable[[np.ndarray], np.ndarray]:
    scaled = spectra / math.sqrt(N)

    def r(z):
        return np.array([np.sum(1.0 / (point - scaled)) / scaled.size for point in np.atleast_1d(z)])

    return r


def empirical_resolvent_inverse(N: int, grid: Sequence[float], samples: int, seed: int) -> ResolventInversion:
    """Inverts r(z) = ⟨Tr(z − M/√N)⁻¹⟩/N on a real grid outside the spectrum and reports
    max |r(r⁻¹(y)) − y| over the midpoints between grid values, with r⁻¹ by interpolation."""
    if samples < MIN_SAMPLES:
        msg = f"the empirical resolvent needs at least {MIN_SAMPLES} samples, got {samples}"
        raise DomainError(msg)
    points = np.asarray(sorted(grid), dtype=float)
    if len(points) < 2:
        msg = "the resolvent grid needs at least two points"
        raise DomainError(msg)
    spectra = eigenvalues(N, samples, seed)
    scaled = spectra / math.sqrt(N)
    low, high = float(scaled.min()), float(scaled.max())
    intrudes = (points > low - SUPPORT_MARGIN) & (points < high + SUPPORT_MARGIN)
    if intrudes.any():
        msg = f"grid point {points[intrudes][0]:.4g} is within {SUPPORT_MARGIN} of the support [{low:.4g}, {high:.4g}]"
        raise NonMonotoneRegion(msg)
    r = _normalized_resolvent(spectra, N)
    values = r(points)
    if not np.all(np.diff(values) < 0):
        msg = "the empirical resolvent is not strictly decreasing on the grid"
        raise NonMonotoneRegion(msg)
    targets = (values[:-1] + values[1:]) / 2
    # np.interp needs increasing abscissae
    inverse = np.interp(targets, values[::-1], points[::-1])
    gap = float(np.max(np.abs(r(inverse) - targets)))
    logger.info(f"resolvent inversion on {len(points)} points at N={N}: max gap {gap:.3g}")
    return ResolventInversion(gap, tuple(points.tolist()), tuple(values.tolist()))


@dataclass(frozen=True)
class EdgePoint:
    s: float
    z: float
    mean: complex
    std_error: float
    exact: float
    airy: float


def edge_profile(N: int, s_grid: Sequence[float], samples: int, seed: int, numerics: Numerics) -> list[EdgePoint]:
    """⟨det(z − M)⟩ at z = √(2N) + s/(√2·N^{1/6}) next to 2^{−N}H_N(z) and Ai(s); plot data only."""
    airy = Airy(numerics)
    spectra = eigenvalues(N, samples, seed)
    scale = 1 / (math.sqrt(2) * N ** (1 / 6))
    rows = []
    for s in s_grid:
        z = math.sqrt(2 * N) + s * scale
        estimate = McEstimate.of(np.prod(z - spectra, axis=1), seed)
        exact = float(np.polynomial.hermite.hermval(z, [0] * N + [1])) / 2**N
        rows.append(EdgePoint(s, z, estimate.mean, estimate.std_error, exact, float(airy.real_part(s))))
    return rows
