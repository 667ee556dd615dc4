"""The Ξ function by three routes, its moments a₂ₙ, critical-line zeros and loop observables.

Ξ(z) = ½s(s−1)π^{−s/2}Γ(s/2)ζ(s) with s = iz + ½. The reference route sums ζ by the
Chebyshev-accelerated alternating series for η; the fourier route integrates the derived
theta kernel against e^{izu}; the series route sums Σ a₂ₙ(−1)ⁿz^{2n}/(2n)!."""

import dataclasses
import functools
import logging
import math
import threading
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Any, Literal

from databricks.labs.blueprint.parallel import Threads

from databricks.labs.fzzt.errors import (
    DomainError,
    NearZeroSingularity,
    NonConvergence,
    RouteDomainError,
    SeriesTruncationError,
    UnsupportedFormat,
)
from databricks.labs.fzzt.kernels import (
    DEFAULT_MARGIN,
    DEFAULT_WINDOW,
    ThetaKernel,
    literal_kernel,
    xi_kernel,
)
from databricks.labs.fzzt.precision import (
    Numerics,
    PrecisionComplex,
    PrecisionNumber,
    PrecisionScalar,
    context_for,
)
from databricks.labs.fzzt.quadrature import HalfLine, Window, fourier_transform, integrate
from databricks.labs.fzzt.roots import refine_sign_change

logger = logging.getLogger(__name__)

Route = Literal["reference", "fourier", "series"]

ZETA_GUARD_DIGITS = 15
SERIES_GUARD_DIGITS = 20
FOURIER_MAX_IMAG = 2
MAX_SCAN_STEP = 0.25
COMPLETE_SCAN_STEP = 0.05
SCAN_CHUNK = 25.0
MAX_SERIES_TERMS = 400
ZERO_LIST_FORMAT = 1

_local = threading.local()


@dataclass(frozen=True)
class XiValue:
    z: PrecisionNumber
    value: PrecisionNumber
    route: Route
    precision: int
    error_estimate: PrecisionScalar | None = None


@dataclass(frozen=True)
class ZeroList:
    """Positive zeros λₙ of Ξ on the real axis, strictly increasing.

    ``coverage`` holds the normalized union of scanned intervals; ``scan_height`` is the end
    of the covered interval that starts at 0, so merging partial scans is associative and
    independent of order."""

    zeros: tuple[PrecisionScalar, ...] = ()
    brackets: tuple[tuple[PrecisionScalar, PrecisionScalar], ...] = ()
    residuals: tuple[PrecisionScalar, ...] = ()
    coverage: tuple[tuple[float, float], ...] = ()
    step: float = COMPLETE_SCAN_STEP
    digits: int = 50
    warnings: tuple[str, ...] = field(default=())

    def __len__(self):
        return len(self.zeros)

    @property
    def scan_height(self) -> float:
        if not self.coverage or self.coverage[0][0] > 0:
            return 0.0
        return self.coverage[0][1]

    @property
    def complete(self) -> bool:
        return self.step <= COMPLETE_SCAN_STEP and self.scan_height > 0

    def values(self) -> list[Any]:
        return [z.value for z in self.zeros]

    def head(self, count: int) -> "ZeroList":
        """First ``count`` zeros; the covered height shrinks to the last kept bracket."""
        if count >= len(self.zeros):
            return self
        height = float(self.brackets[count - 1][1]) if count > 0 else 0.0
        return dataclasses.replace(
            self,
            zeros=self.zeros[:count],
            brackets=self.brackets[:count],
            residuals=self.residuals[:count],
            coverage=((0.0, height),),
        )

    def below(self, height: float) -> "ZeroList":
        count = sum(1 for z in self.zeros if float(z) <= height)
        trimmed = self.head(count)
        return dataclasses.replace(trimmed, coverage=((0.0, min(height, self.scan_height)),))

    def merge(self, other: "ZeroList") -> "ZeroList":
        records: dict[str, tuple[PrecisionScalar, tuple[PrecisionScalar, PrecisionScalar], PrecisionScalar]] = {}
        for source in (self, other):
            for zero, bracket, residual in zip(source.zeros, source.brackets, source.residuals):
                records.setdefault(_zero_key(zero), (zero, bracket, residual))
        ordered = sorted(records.values(), key=lambda r: r[0].value)
        return ZeroList(
            zeros=tuple(r[0] for r in ordered),
            brackets=tuple(r[1] for r in ordered),
            residuals=tuple(r[2] for r in ordered),
            coverage=_union(self.coverage + other.coverage),
            step=max(self.step, other.step),
            digits=min(self.digits, other.digits),
            warnings=tuple(sorted(set(self.warnings + other.warnings))),
        )

    def as_dict(self) -> dict[str, Any]:
        ctx = context_for(self.digits)
        return {
            "format_version": ZERO_LIST_FORMAT,
            "precision_digits": self.digits,
            "scan_height": self.scan_height,
            "step": self.step,
            "zeros": [ctx.nstr(z.value, self.digits) for z in self.zeros],
            "brackets": [[ctx.nstr(a.value, self.digits), ctx.nstr(b.value, self.digits)] for a, b in self.brackets],
            "residuals": [ctx.nstr(r.value, 5) for r in self.residuals],
        }

    @classmethod
    def from_dict(cls, raw: dict[str, Any]) -> "ZeroList":
        version = raw.get("format_version")
        if version != ZERO_LIST_FORMAT:
            raise UnsupportedFormat(version)
        numerics = Numerics(int(raw["precision_digits"]))
        return cls(
            zeros=tuple(numerics.scalar(z) for z in raw["zeros"]),
            brackets=tuple((numerics.scalar(a), numerics.scalar(b)) for a, b in raw["brackets"]),
            residuals=tuple(numerics.scalar(r) for r in raw["residuals"]),
            coverage=((0.0, float(raw["scan_height"])),),
            step=float(raw.get("step", COMPLETE_SCAN_STEP)),
            digits=numerics.digits,
        )


def _zero_key(zero: PrecisionScalar) -> str:
    return f"{float(zero.value):.8f}"


def _union(intervals: Sequence[tuple[float, float]]) -> tuple[tuple[float, float], ...]:
    out: list[tuple[float, float]] = []
    for lo, hi in sorted(intervals):
        if out and lo <= out[-1][1]:
            out[-1] = (out[-1][0], max(out[-1][1], hi))
        else:
            out.append((lo, hi))
    return tuple(out)


def _eta_tables(n: int, digits: int):
    """Chebyshev weights d_k and log(k+1) for n-term η summation, cached per thread."""
    cache: dict[tuple[int, int], tuple[list[Any], list[Any]]] | None = getattr(_local, "eta", None)
    if cache is None:
        cache = {}
        _local.eta = cache
    key = (n, digits)
    if key not in cache:
        ctx = context_for(digits)
        term = ctx.one
        weights = [term]
        for i in range(1, n + 1):
            term = term * 4 * (n + i - 1) * (n - i + 1) / ((2 * i - 1) * (2 * i))
            weights.append(weights[-1] + term)
        logs = [ctx.log(k + 1) for k in range(n)]
        cache[key] = (weights, logs)
    return cache[key]


def zeta(s: Any, numerics: Numerics) -> Any:
    """ζ(s) by the Chebyshev-accelerated alternating series, with the functional equation for Re s < ½."""
    ctx = numerics.ctx
    s = numerics.number(s)
    if ctx.re(s) < 0.5:
        completion = _completion(s, numerics)
        reflected = 1 - s
        return _completion(reflected, numerics) * zeta(reflected, numerics) / completion
    return +_eta_zeta(s, numerics)


def _eta_zeta(s: Any, numerics: Numerics) -> Any:
    digits = numerics.digits + ZETA_GUARD_DIGITS
    ctx = context_for(digits)
    s = ctx.convert(s)
    t = abs(ctx.im(s))
    denominator = 1 - ctx.power(2, 1 - s)
    if abs(denominator) < ctx.mpf(10) ** (-numerics.digits // 2):
        msg = f"ζ({ctx.nstr(s, 8)}): the η series cannot resolve the pole neighbourhood of s = 1"
        raise RouteDomainError(msg)
    target = numerics.digits * math.log(10) + math.pi * float(t) / 2 + math.log(1 + 2 * float(t)) + 10
    n = int(math.ceil(target / math.log(3 + math.sqrt(8))))
    weights, logs = _eta_tables(n, digits)
    last = weights[n]
    total = ctx.zero
    for k in range(n):
        term = (weights[k] - last) * ctx.exp(-s * logs[k])
        total = total - term if k % 2 else total + term
    value = -total / (last * denominator)
    return numerics.ctx.convert(value)


def _completion(s: Any, numerics: Numerics) -> Any:
    """½s(s−1)π^{−s/2}Γ(s/2)."""
    digits = numerics.digits + ZETA_GUARD_DIGITS
    ctx = context_for(digits)
    s = ctx.convert(s)
    half = s / 2
    if ctx.re(half) <= 0 and abs(half - ctx.nint(ctx.re(half))) < ctx.mpf(10) ** (-numerics.digits // 2):
        msg = f"Γ(s/2) has a pole at s = {ctx.nstr(s, 8)}"
        raise RouteDomainError(msg)
    value = s * (s - 1) / 2 * ctx.exp(ctx.loggamma(half) - half * ctx.log(ctx.pi))
    return numerics.ctx.convert(value)


class XiFunction:
    """Ξ evaluator bound to one working precision and kernel configuration.

    Instances are safe to share between threads: every evaluation looks up the calling
    thread's mpmath context, and the caches only ever gain entries."""

    def __init__(
        self,
        numerics: Numerics,
        *,
        window: float = DEFAULT_WINDOW,
        margin: int = DEFAULT_MARGIN,
        quadrature_tol: Any | None = None,
    ):
        self._numerics = numerics
        self._guard = numerics.guarded(SERIES_GUARD_DIGITS)
        self._theta = ThetaKernel(self._guard, margin=margin)
        self._kernel = xi_kernel(numerics, window=window, margin=margin)
        self._window = window
        self._margin = margin
        self._tol = numerics.tolerance() if quadrature_tol is None else numerics.real(quadrature_tol)
        self._moments: dict[int, Any] = {}
        self._f_memo: dict[tuple[int, Any], Any] = {}
        self._lock = threading.Lock()

    @property
    def numerics(self) -> Numerics:
        return self._numerics

    @property
    def kernel(self):
        return self._kernel

    @property
    def window(self) -> float:
        return self._window

    @property
    def margin(self) -> int:
        return self._margin

    def reference(self, z: Any) -> Any:
        ctx = self._numerics.ctx
        z = self._numerics.number(z)
        if ctx.im(z) > 0:
            z = -z
        s = ctx.mpc(0, 1) * z + ctx.mpf(0.5)
        return _completion(s, self._numerics) * zeta(s, self._numerics)

    @functools.cached_property
    def xi_zero(self) -> Any:
        return self.reference(0)

    @functools.cached_property
    def calibration(self) -> Any:
        """Constant c with Ξ(z) = c∫e^{izu}Φ(u)du, fixed once at z = 0."""
        ctx = self._numerics.ctx
        transform = fourier_transform(self._kernel, 0, self._numerics, tol=self._tol)
        c = ctx.re(self.xi_zero) / ctx.re(transform.value.value)
        logger.debug(f"fourier calibration constant c = {ctx.nstr(c, 20)}")
        return c

    def fourier(self, z: Any) -> tuple[Any, Any]:
        ctx = self._numerics.ctx
        z = self._numerics.number(z)
        if abs(ctx.im(z)) > FOURIER_MAX_IMAG:
            msg = f"fourier route needs |Im z| ≤ {FOURIER_MAX_IMAG}, got {ctx.nstr(ctx.im(z), 6)}"
            raise RouteDomainError(msg)
        result = fourier_transform(self._kernel, z, self._numerics, tol=self._tol)
        c = self.calibration
        return c * result.value.value, c * result.error_estimate.value

    def a2n(self, n: int) -> PrecisionScalar:
        """a₂ₙ = 4∫₁^∞ ℓ^{−1/4} f(ℓ)(½ log ℓ)^{2n} dℓ."""
        if n < 0:
            msg = f"a2n needs n ≥ 0, got {n}"
            raise DomainError(msg)
        return self._numerics.scalar(self._moment(n))

    def _moment(self, n: int) -> Any:
        cached = self._moments.get(n)
        if cached is not None:
            return cached
        ctx = self._guard.ctx
        upper = self._moment_upper_limit(n)
        breakpoints = tuple(2**k for k in range(1, int(math.log2(upper))))
        quarter = ctx.mpf(0.25)

        def integrand(ell):
            key = (ctx.prec, ell)
            theta = self._f_memo.get(key)
            if theta is None:
                theta = self._theta.raw("f_of_ell", ell, ctx)
                self._f_memo[key] = theta
            return 4 * ell ** (-quarter) * theta * (ctx.log(ell) / 2) ** (2 * n)

        result = integrate(integrand, Window(1, upper, breakpoints), 1, self._guard, allow_nonconvergence=True)
        value = result.value.value
        if result.error_estimate.value > abs(value) * ctx.mpf(10) ** (-(self._numerics.digits + 5)):
            msg = f"a2n({n}) quadrature error {ctx.nstr(result.error_estimate.value, 3)} is too large"
            raise NonConvergence(msg, best=result.value, estimate=result.error_estimate)
        with self._lock:
            self._moments[n] = value
        logger.debug(f"a2n({n}) = {ctx.nstr(value, 15)} on [1, {upper}] with {result.nodes_used} nodes")
        return value

    def _moment_upper_limit(self, n: int) -> int:
        ctx = self._guard.ctx
        tol = ctx.mpf(10) ** (-(self._guard.digits + 10))
        upper = 4
        while upper <= 2**16:
            log_half = ctx.log(upper) / 2
            slope = ctx.pi - ctx.mpf(1.25) / upper - 2 * n / (upper * ctx.log(upper))
            bound = 4 * 1.01 * ctx.pi**2 * ctx.power(upper, 1.25) * log_half ** (2 * n) * ctx.exp(-ctx.pi * upper)
            if slope > 1 and bound / slope <= tol:
                return upper
            upper *= 2
        msg = f"a2n({n}): no integration window below 2^16 meets the tolerance"
        raise NonConvergence(msg)

    def series(self, z: Any, order: int | None = None) -> tuple[Any, Any]:
        """Σ_{n≤order} a₂ₙ(−1)ⁿz^{2n}/(2n)! and a truncation estimate from the next two terms.

        Without an order, terms are added until two consecutive ones fall below the tolerance
        on the decreasing side of the series."""
        ctx = self._guard.ctx
        z = self._guard.number(z)
        z2 = z * z
        tol = self._numerics.tolerance()
        total = ctx.zero
        weight = ctx.one
        terms: list[Any] = []
        limit = MAX_SERIES_TERMS if order is None else order + 2
        for n in range(limit + 1):
            if n > 0:
                weight = -weight * z2 / ((2 * n - 1) * (2 * n))
            term = self._moment(n) * weight
            terms.append(term)
            if order is None:
                total += term
                if n > 2 and abs(term) + abs(terms[-2]) < tol / 10 and abs(term) <= abs(terms[-2]):
                    estimate = abs(term) + abs(terms[-2])
                    return self._numerics.ctx.convert(total), estimate
            elif n <= order:
                total += term
        if order is None:
            msg = f"series route did not settle within {MAX_SERIES_TERMS} terms at |z| = {ctx.nstr(abs(z), 6)}"
            raise SeriesTruncationError(msg, estimate=self._numerics.scalar(abs(terms[-1])))
        estimate = abs(terms[-1]) + abs(terms[-2])
        if estimate > tol:
            msg = f"order {order} leaves a truncation estimate {ctx.nstr(estimate, 3)} at |z| = {ctx.nstr(abs(z), 6)}"
            raise SeriesTruncationError(msg, estimate=self._numerics.scalar(estimate))
        return self._numerics.ctx.convert(total), estimate

    def evaluate(self, z: Any, route: Route = "reference", order: int | None = None) -> XiValue:
        numerics = self._numerics
        estimate = None
        match route:
            case "reference":
                value = self.reference(z)
            case "fourier":
                value, estimate = self.fourier(z)
            case "series":
                value, estimate = self.series(z, order)
            case _:
                msg = f"unknown Ξ route: {route}"
                raise RouteDomainError(msg)
        return XiValue(
            z=numerics.wrap(z),
            value=PrecisionComplex(numerics.ctx.mpc(value), numerics.digits),
            route=route,
            precision=numerics.digits,
            error_estimate=None if estimate is None else numerics.scalar(estimate),
        )

    def real_part(self, x: Any) -> Any:
        return self._numerics.ctx.re(self.reference(x))

    def find_zeros(self, T: Any, step: Any = COMPLETE_SCAN_STEP) -> ZeroList:
        """Scans the reference route on [0, T] for sign changes and refines every bracket.

        The scan is split into chunks that run in a thread pool and are merged afterwards."""
        height, step = float(T), float(step)
        if height <= 0:
            msg = f"scan height must be positive, got {height}"
            raise DomainError(msg)
        if step > MAX_SCAN_STEP:
            msg = f"scan step {step} exceeds {MAX_SCAN_STEP}"
            raise DomainError(msg)
        warnings: list[str] = []
        if step > COMPLETE_SCAN_STEP:
            warning = f"ScanStepTooCoarse: step {step} > {COMPLETE_SCAN_STEP}, zero list not marked complete"
            logger.warning(warning)
            warnings.append(warning)
        points = int(math.ceil(height / step))
        per_chunk = max(1, int(SCAN_CHUNK / step))
        tasks = []
        for first in range(0, points, per_chunk):
            last = min(points, first + per_chunk)
            tasks.append(functools.partial(self._scan, first, last, step, height))
        logger.info(f"Scanning Ξ for zeros on [0, {height}] with step {step} in {len(tasks)} chunk(s)")
        found = Threads.strict(f"scanning Ξ zeros up to {height}", tasks)
        merged = functools.reduce(ZeroList.merge, found, ZeroList(step=step, digits=self._numerics.digits))
        merged = dataclasses.replace(merged, warnings=tuple(sorted(set(merged.warnings + tuple(warnings)))))
        expected = zero_count_estimate(height, self._numerics)
        if height >= 14 and abs(len(merged) - expected) > 1:
            logger.warning(f"found {len(merged)} zeros below {height}, smooth count predicts {expected:.2f}")
        logger.info(f"Found {len(merged)} zeros of Ξ below {height}")
        return merged

    def _scan(self, first: int, last: int, step: float, height: float) -> ZeroList:
        ctx = self._numerics.ctx
        grid = [min(ctx.mpf(j) * ctx.mpf(step), ctx.mpf(height)) for j in range(first, last + 1)]
        values = [self.real_part(x) for x in grid]
        zeros, brackets, residuals, warnings = [], [], [], []
        for i in range(len(grid) - 1):
            if values[i] == 0 or values[i] * values[i + 1] < 0:
                zero, bracket = refine_sign_change(self.real_part, grid[i], grid[i + 1], values[i], self._numerics)
                zeros.append(self._numerics.scalar(zero))
                brackets.append((self._numerics.scalar(bracket[0]), self._numerics.scalar(bracket[1])))
                residuals.append(self._numerics.scalar(abs(self.reference(zero))))
            elif 0 < i and abs(values[i]) < abs(values[i - 1]) and abs(values[i]) < abs(values[i + 1]):
                if abs(values[i]) < ctx.mpf("1e-3") * max(abs(values[i - 1]), abs(values[i + 1])):
                    warning = f"tangential near-zero at {ctx.nstr(grid[i], 10)} treated as non-zero"
                    logger.warning(warning)
                    warnings.append(warning)
        logger.debug(f"scanned [{ctx.nstr(grid[0], 6)}, {ctx.nstr(grid[-1], 6)}]: {len(zeros)} zero(s)")
        return ZeroList(
            zeros=tuple(zeros),
            brackets=tuple(brackets),
            residuals=tuple(residuals),
            coverage=((float(grid[0]), float(grid[-1])),),
            step=step,
            digits=self._numerics.digits,
            warnings=tuple(warnings),
        )

    def product(self, z: Any, zeros: ZeroList) -> Any:
        z = self._numerics.number(z)
        value = self.xi_zero
        for zero in zeros.zeros:
            value *= 1 - z * z / zero.value**2
        return value

    def grid(self, start: float, stop: float, points: int) -> list[tuple[Any, Any]]:
        ctx = self._numerics.ctx
        if points < 2:
            msg = f"a grid needs at least two points, got {points}"
            raise DomainError(msg)
        xs = ctx.linspace(ctx.mpf(start), ctx.mpf(stop), points)
        return [(x, ctx.re(self.reference(x))) for x in xs]


@functools.lru_cache(maxsize=16)
def xi_function(
    digits: int, window: float = DEFAULT_WINDOW, margin: int = DEFAULT_MARGIN, quadrature_tol: str | None = None
) -> XiFunction:
    return XiFunction(Numerics(digits), window=window, margin=margin, quadrature_tol=quadrature_tol)


def xi_eval(z: Any, route: Route, numerics: Numerics, order: int | None = None) -> XiValue:
    return xi_function(numerics.digits).evaluate(z, route, order)


def a2n(n: int, numerics: Numerics) -> PrecisionScalar:
    return xi_function(numerics.digits).a2n(n)


def find_zeros(T: Any, step: Any, numerics: Numerics, xi: XiFunction | None = None) -> ZeroList:
    """Zeros of Ξ on [0, T]; ``xi`` carries a kernel window, margin and tolerance other than the defaults."""
    return (xi or xi_function(numerics.digits)).find_zeros(T, step)


def product_reconstruct(z: Any, zeros: ZeroList, numerics: Numerics) -> PrecisionNumber:
    return numerics.wrap(xi_function(numerics.digits).product(z, zeros))


def zero_count_estimate(T: Any, numerics: Numerics) -> float:
    """Smooth Riemann–von Mangoldt count θ(T)/π + 1 of zeros with 0 < λ ≤ T."""
    ctx = numerics.ctx
    return float(ctx.siegeltheta(numerics.real(T)) / ctx.pi + 1)


def central_difference(f, x: Any, numerics: Numerics, step: Any | None = None) -> Any:
    """Fourth-order central difference of a fixed-precision function; the default step balances
    rounding against truncation at the working precision."""
    ctx = numerics.ctx
    h = ctx.mpf(10) ** (-(numerics.digits // 5)) if step is None else numerics.real(step)
    return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h)


@dataclass(frozen=True)
class LoopObservables:
    z: PrecisionNumber
    W: PrecisionNumber
    R: PrecisionNumber
    R_zero_sum: PrecisionNumber
    tail: PrecisionNumber


def loop_observables(z: Any, zeros: ZeroList, numerics: Numerics) -> LoopObservables:
    """W = log ζ(iz + ½) and R = dW/dz, the latter both by differentiation and by the zero sum.

    The zero sum adds Σ 2z/(z² − λ²) over listed zeros, the smooth part of d/dz log Ξ that
    comes from the Γ and π factors, and the zero-density tail above the scan height."""
    ctx = numerics.ctx
    z = numerics.number(z)
    for zero in zeros.zeros:
        if min(abs(z - zero.value), abs(z + zero.value)) < ctx.mpf("1e-6"):
            msg = f"z = {ctx.nstr(z, 12)} sits on the zero {ctx.nstr(zero.value, 12)}"
            raise NearZeroSingularity(msg)
    i = ctx.mpc(0, 1)

    def log_zeta(w):
        s = i * w + ctx.mpf(0.5)
        value = zeta(s, numerics)
        if value == 0:
            msg = f"ζ vanishes at s = {ctx.nstr(s, 12)}"
            raise NearZeroSingularity(msg)
        return ctx.log(value)

    W = log_zeta(z)
    R = central_difference(log_zeta, z, numerics)
    s = i * z + ctx.mpf(0.5)
    smooth = -i * (2 * s - 1) / (s * (s - 1)) + i / 2 * ctx.log(ctx.pi) - i / 2 * ctx.digamma(s / 2)
    paired = ctx.fsum(2 * z / (z * z - zero.value**2) for zero in zeros.zeros)
    tail = _density_tail(z, zeros, numerics)
    return LoopObservables(
        z=numerics.wrap(z),
        W=numerics.wrap(W),
        R=numerics.wrap(R),
        R_zero_sum=numerics.wrap(paired + tail + smooth),
        tail=numerics.wrap(tail),
    )


def _density_tail(z: Any, zeros: ZeroList, numerics: Numerics) -> Any:
    """∫_T^∞ g(t)θ′(t)/π dt − g(T)S(T) with g(t) = 2z/(z² − t²) and S(T) = N(T) − θ(T)/π − 1."""
    ctx = numerics.ctx
    height = ctx.mpf(zeros.scan_height)
    if height <= 0:
        return ctx.zero

    def weight(t):
        return 2 * z / (z * z - t * t)

    def density(t):
        return weight(t) * ctx.siegeltheta(t, derivative=1) / ctx.pi

    result = integrate(density, HalfLine(height), ctx.mpf("1e-20"), numerics, allow_nonconvergence=True)
    counted = sum(1 for zero in zeros.zeros if zero.value <= height)
    fluctuation = counted - ctx.siegeltheta(height) / ctx.pi - 1
    return result.value.value - weight(height) * fluctuation


@dataclass(frozen=True)
class KernelComparison:
    max_gap: PrecisionScalar
    argmax: PrecisionScalar
    derived_at_zero: PrecisionScalar
    literal_at_zero: PrecisionScalar
    identity: tuple[tuple[PrecisionScalar, PrecisionNumber, PrecisionNumber, PrecisionScalar], ...]


def compare_kernels(
    numerics: Numerics, *, grid: Sequence[Any] | None = None, points: Sequence[Any] = (0.5, 1, 2)
) -> KernelComparison:
    """Maximum pointwise gap between the derived and literal kernels, and the transform identity.

    The literal kernel equals Φ(φ/2)e^{−φ/4}/2, so its transform at z is Ξ(2z + i/2)/c."""
    ctx = numerics.ctx
    theta = ThetaKernel(numerics)
    if grid is None:
        grid = ctx.linspace(-3, 3, 601)
    best_gap, best_at = ctx.zero, ctx.zero
    for u in grid:
        derived = theta.evaluate("phi_derived", u).value
        gap = abs(derived - theta.evaluate("phi_literal", u).value)
        if gap > best_gap:
            best_gap, best_at = gap, numerics.real(u)
    xi = xi_function(numerics.digits)
    literal = literal_kernel(numerics)
    rows = []
    for z in points:
        transform = fourier_transform(literal, z, numerics).value.value
        expected = xi.reference(2 * numerics.number(z) + ctx.mpc(0, 0.5)) / xi.calibration
        gap = numerics.scalar(abs(transform - expected))
        rows.append((numerics.scalar(z), numerics.wrap(transform), numerics.wrap(expected), gap))
    logger.info(f"kernel variants differ by up to {ctx.nstr(best_gap, 6)} at u = {ctx.nstr(best_at, 6)}")
    return KernelComparison(
        max_gap=numerics.scalar(best_gap),
        argmax=numerics.scalar(best_at),
        derived_at_zero=theta.evaluate("phi_derived", 0),
        literal_at_zero=theta.evaluate("phi_literal", 0),
        identity=tuple(rows),
    )
