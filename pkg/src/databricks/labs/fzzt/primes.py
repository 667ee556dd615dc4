"""Prime-power side of the macroscopic loop: W(ℓ) from the zeros, the weighted prime-power
count, their comparison through the explicit formula, and the Euler product for log ζ."""

import functools
import logging
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Literal

import numpy as np

from databricks.labs.fzzt.errors import ConvergenceDomainError, DomainError, RangeError
from databricks.labs.fzzt.precision import Numerics, PrecisionNumber, PrecisionScalar
from databricks.labs.fzzt.quadrature import Window, integrate
from databricks.labs.fzzt.xi import ZeroList

logger = logging.getLogger(__name__)

MAX_ELL = 10**6
MIN_EXPLICIT_ELL = 2.5
EXPLICIT_SCAN_HEIGHT = 100.0
DEFAULT_CESARO = 10
MIN_EULER_PRIMES = 100
# π(x) < 1.25506·x/log x for x > 1
_PRIME_COUNT_MAJORANT = 1.25506
# J(2): the prime 2 on the lower limit contributes half its jump
LOWER_LIMIT_COUNT = Fraction(1, 2)

Smoothing = Literal["none"] | tuple[Literal["cesaro"], int]

_sieve_lock = threading.Lock()


def sieve(limit: int) -> np.ndarray:
    """Primes up to ``limit`` by the sieve of Eratosthenes."""
    if limit < 2:
        return np.array([], dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.flatnonzero(flags).astype(np.int64)


@functools.lru_cache(maxsize=8)
def _primes(limit: int) -> np.ndarray:
    with _sieve_lock:
        primes = sieve(limit)
    primes.setflags(write=False)
    logger.debug(f"sieved {len(primes)} primes up to {limit}")
    return primes


@dataclass(frozen=True)
class PrimePowerCount:
    ell: PrecisionScalar
    strict: PrecisionScalar
    weak: PrecisionScalar
    average: PrecisionScalar


def _weighted_count(primes: np.ndarray, bound: int) -> Fraction:
    """Σ_{pⁿ ≤ bound} 1/n."""
    total = Fraction(0)
    bases = primes[primes <= bound]
    powers = bases.copy()
    n = 1
    while len(bases):
        total += Fraction(len(bases), n)
        powers = powers * bases
        keep = powers <= bound
        bases, powers = bases[keep], powers[keep]
        n += 1
    return total


def _check_ell(ell: Any, numerics: Numerics) -> Any:
    value = numerics.real(ell)
    if not 2 <= value <= MAX_ELL:
        msg = f"prime counting needs 2 ≤ ℓ ≤ {MAX_ELL}, got {numerics.ctx.nstr(value, 10)}"
        raise RangeError(msg)
    return value


def prime_side(ell: Any, numerics: Numerics) -> PrimePowerCount:
    ctx = numerics.ctx
    ell = _check_ell(ell, numerics)
    weak_bound = int(ctx.floor(ell))
    strict_bound = int(ctx.ceil(ell)) - 1
    primes = _primes(weak_bound)
    weak = _weighted_count(primes, weak_bound)
    strict = _weighted_count(primes, strict_bound)

    def exact(q: Fraction) -> PrecisionScalar:
        return numerics.scalar(ctx.mpf(q.numerator) / q.denominator)

    return PrimePowerCount(
        ell=numerics.scalar(ell),
        strict=exact(strict),
        weak=exact(weak),
        average=exact((strict + weak) / 2),
    )


def _cesaro_order(smoothing: Smoothing) -> int:
    if smoothing == "none":
        return 1
    kind, order = smoothing
    if kind != "cesaro" or order < 1:
        msg = f"unknown smoothing: {smoothing}"
        raise DomainError(msg)
    return order


def _zero_sum(log_ell: Any, zeros: list[Any], order: int, ctx) -> Any:
    """Average of the last ``order`` partial sums of Σ 2cos(λₙ log ℓ)."""
    n = len(zeros)
    if n == 0:
        return ctx.zero
    order = min(order, n)
    terms = [2 * ctx.cos(zero * log_ell) for zero in zeros]
    head = ctx.fsum(terms[: n - order + 1])
    weighted = ctx.fsum(terms[j] * (n - j) for j in range(n - order + 1, n))
    return head + weighted / order


def w_loop(ell: Any, zeros: ZeroList, numerics: Numerics, smoothing: Smoothing = "none") -> PrecisionScalar:
    """W(ℓ) = 1/log ℓ − Σₙ 2cos(λₙ log ℓ)/(ℓ^{1/2} log ℓ) − 1/(ℓ(ℓ²−1) log ℓ) over the listed zeros.

    The zeros are summed in increasing order; ``("cesaro", M)`` averages the last M partial sums."""
    ctx = numerics.ctx
    ell = numerics.real(ell)
    if ell <= 1 or abs(ctx.log(ell)) <= ctx.mpf("1e-6"):
        msg = f"W(ℓ) needs ℓ > 1 away from 1, got {ctx.nstr(ell, 12)}"
        raise DomainError(msg)
    return numerics.scalar(_w(ell, zeros.values(), _cesaro_order(smoothing), ctx))


def _w(ell: Any, zeros: list[Any], order: int, ctx) -> Any:
    log_ell = ctx.log(ell)
    oscillating = _zero_sum(log_ell, zeros, order, ctx) / ctx.sqrt(ell)
    return (1 - oscillating - 1 / (ell * (ell * ell - 1))) / log_ell


@dataclass(frozen=True)
class ExplicitCheck:
    ell: PrecisionScalar
    loop_integral: PrecisionScalar
    prime_average: PrecisionScalar
    gap: PrecisionScalar
    corrected_gap: PrecisionScalar
    lower_limit: PrecisionScalar
    zeros_used: int
    warnings: tuple[str, ...] = ()


def explicit_check(
    ell: Any, zeros: ZeroList, numerics: Numerics, smoothing: Smoothing = ("cesaro", DEFAULT_CESARO)
) -> ExplicitCheck:
    """Compares ∫₂^ℓ W with the prime-power count.

    ``gap`` is |∫W − prime_average|. The integral equals J(ℓ) − J(2) with J(2) = ½, so
    ``corrected_gap`` measures it against prime_average − ½ instead; only that one shrinks
    as zeros are added."""
    ctx = numerics.ctx
    ell = numerics.real(ell)
    if ell < MIN_EXPLICIT_ELL:
        msg = f"explicit_check needs ℓ ≥ {MIN_EXPLICIT_ELL}, got {ctx.nstr(ell, 10)}"
        raise DomainError(msg)
    count = prime_side(ell, numerics)
    warnings = []
    if zeros.scan_height < EXPLICIT_SCAN_HEIGHT:
        warning = f"zero list reaches height {zeros.scan_height:.2f}, below {EXPLICIT_SCAN_HEIGHT}"
        logger.warning(warning)
        warnings.append(warning)
    values = zeros.values()
    order = _cesaro_order(smoothing)
    # in u = log ℓ every zero oscillates with the fixed period 2π/λ
    edges = tuple(ctx.log(q) for q in sorted(set(_prime_powers(int(ctx.floor(ell))))) if 2 < q < ell)
    frequency = max(values, default=ctx.zero)
    period = 2 * ctx.pi / frequency if frequency > 0 else None

    def integrand(u):
        t = ctx.exp(u)
        return _w(t, values, order, ctx) * t

    result = integrate(
        integrand,
        Window(ctx.log(2), ctx.log(ell), edges),
        ctx.mpf("1e-12"),
        numerics,
        period=period,
        allow_nonconvergence=True,
    )
    if not result.converged:
        warning = f"loop integral stopped at error {ctx.nstr(result.error_estimate.value, 3)}"
        logger.warning(warning)
        warnings.append(warning)
    loop = result.value.value
    lower = ctx.mpf(LOWER_LIMIT_COUNT.numerator) / LOWER_LIMIT_COUNT.denominator
    average = count.average.value
    logger.info(f"explicit formula at ℓ={ctx.nstr(ell, 8)}: ∫W = {ctx.nstr(loop, 10)}, count {ctx.nstr(average, 10)}")
    return ExplicitCheck(
        ell=numerics.scalar(ell),
        loop_integral=numerics.scalar(loop),
        prime_average=count.average,
        gap=numerics.scalar(abs(loop - average)),
        corrected_gap=numerics.scalar(abs(loop - (average - lower))),
        lower_limit=numerics.scalar(lower),
        zeros_used=len(values),
        warnings=tuple(warnings),
    )


def _prime_powers(limit: int) -> list[int]:
    out = []
    for p in _primes(max(limit, 2)).tolist():
        q = p
        while q <= limit:
            out.append(q)
            q *= p
    return out


@dataclass(frozen=True)
class EulerLogZeta:
    z: PrecisionNumber
    value: PrecisionNumber
    tail_bound: PrecisionScalar
    primes_used: int


def euler_log_zeta(z: Any, p_max: int, numerics: Numerics) -> EulerLogZeta:
    """log ζ(iz + ½) = Σ_p Σ_n p^{−ns}/n over primes up to ``p_max``.

    The omitted primes are bounded through π(x) < 1.25506·x/log x, which gives
    Σ_{p>P} Σ_n p^{−nσ}/n ≤ 1.25506·σ·P^{1−σ} / ((σ−1)·log P·(1 − P^{−σ}))."""
    ctx = numerics.ctx
    z = numerics.number(z)
    s = ctx.mpc(0, 1) * z + ctx.mpf(0.5)
    sigma = ctx.re(s)
    if sigma <= 1:
        msg = f"the Euler product converges for Im z < −½, got Im z = {ctx.nstr(ctx.im(z), 8)}"
        raise ConvergenceDomainError(msg)
    if p_max < MIN_EULER_PRIMES:
        msg = f"p_max must be at least {MIN_EULER_PRIMES}, got {p_max}"
        raise DomainError(msg)
    target = numerics.digits * ctx.ln10 + 5
    primes = _primes(p_max).tolist()
    terms = []
    for p in primes:
        log_p = ctx.log(p)
        cut = int(ctx.ceil(target / (sigma * log_p))) + 1
        ratio = ctx.exp(-s * log_p)
        power = ratio
        for n in range(1, cut + 1):
            terms.append(power / n)
            power *= ratio
    value = ctx.fsum(terms)
    P = ctx.mpf(p_max)
    tail = _PRIME_COUNT_MAJORANT * sigma * P ** (1 - sigma) / ((sigma - 1) * ctx.log(P) * (1 - P ** (-sigma)))
    tail += len(primes) * ctx.exp(-target)
    logger.debug(f"Euler product over {len(primes)} primes at s={ctx.nstr(s, 8)}: tail ≤ {ctx.nstr(tail, 3)}")
    return EulerLogZeta(
        z=numerics.wrap(z), value=numerics.wrap(value), tail_bound=numerics.scalar(tail), primes_used=len(primes)
    )
