"""The reciprocal factorial 1/Π(z) = 1/Γ(z+1) and the Fourier transform of the Liouville kernel.

The real-line integral ∫e^{izφ}e^{−e^φ}dφ evaluates to Γ(iz), not to 1/Π(z); it is computed as
it converges and reported next to the reference Γ so the two can be compared."""

import logging
from dataclasses import dataclass
from typing import Any

from databricks.labs.fzzt.errors import DomainError, PoleAtZero
from databricks.labs.fzzt.kernels import liouville_kernel
from databricks.labs.fzzt.precision import Numerics, PrecisionNumber, PrecisionScalar
from databricks.labs.fzzt.quadrature import Window, integrate

logger = logging.getLogger(__name__)

DEFAULT_FACTORS = 1000
MIN_FACTORS = 100
MAX_TAIL_TERMS = 1000


@dataclass(frozen=True)
class RecFactValue:
    z: PrecisionNumber
    value: PrecisionNumber
    route: str
    tail_bound: PrecisionScalar | None = None


def _product(z: Any, factors: int, numerics: Numerics) -> tuple[Any, Any]:
    """e^{γz}Π_{n≤N}(1+z/n)e^{−z/n} times the Hurwitz-ζ correction for n > N.

    log Π_{n>N}(1+z/n)e^{−z/n} = Σ_{k≥2}(−1)^{k+1}z^kζ(k, N+1)/k for |z| < N+1."""
    ctx = numerics.ctx
    value = ctx.exp(ctx.euler * z)
    for n in range(1, factors + 1):
        value *= (1 + z / n) * ctx.exp(-z / n)
        if value == 0:
            return value, ctx.zero
    radius = abs(z) / (factors + 1)
    if radius >= 1:
        msg = f"|z| = {ctx.nstr(abs(z), 6)} is outside the tail expansion radius {factors + 1}"
        raise DomainError(msg)
    correction = ctx.zero
    bound = ctx.inf
    for k in range(2, MAX_TAIL_TERMS):
        term = (-1) ** (k + 1) * z**k * ctx.zeta(k, factors + 1) / k
        correction += term
        bound = abs(term) * radius / (1 - radius)
        if bound < ctx.eps * max(ctx.one, abs(correction)):
            break
    return value * ctx.exp(correction), bound * abs(value)


def recfact_eval(z: Any, numerics: Numerics, route: str = "product", factors: int = DEFAULT_FACTORS) -> RecFactValue:
    """1/Π(z) by the Weierstrass product (``route="product"``) or by mpmath's reciprocal Γ."""
    z = numerics.number(z)
    if route == "reference":
        return RecFactValue(numerics.wrap(z), numerics.wrap(numerics.ctx.rgamma(z + 1)), "reference")
    if route != "product":
        msg = f"unknown reciprocal factorial route: {route}"
        raise DomainError(msg)
    if factors < MIN_FACTORS:
        msg = f"the product route needs at least {MIN_FACTORS} factors, got {factors}"
        raise DomainError(msg)
    value, bound = _product(z, factors, numerics)
    return RecFactValue(numerics.wrap(z), numerics.wrap(value), f"product({factors})", numerics.scalar(bound))


def shift_residual(z: Any, numerics: Numerics, factors: int = DEFAULT_FACTORS) -> PrecisionScalar:
    """|1/Π(z−1) − z/Π(z)| on the product route."""
    z = numerics.number(z)
    below = recfact_eval(z - 1, numerics, factors=factors).value.value
    here = recfact_eval(z, numerics, factors=factors).value.value
    return numerics.scalar(abs(below - z * here))


@dataclass(frozen=True)
class LiouvilleTransform:
    z: PrecisionNumber
    value: PrecisionNumber
    reference: PrecisionNumber
    discrepancy: PrecisionScalar
    error_estimate: PrecisionScalar
    route: str


def liouville_fourier(z: Any, numerics: Numerics) -> LiouvilleTransform:
    """∫e^{izφ − e^φ}dφ = Γ(iz).

    For Im z < 0 the integral converges as written. For 0 ≤ Im z < 1 the absolutely convergent
    ∫e^{(iz+1)φ − e^φ}dφ = Γ(iz+1) is computed and divided by iz."""
    ctx = numerics.ctx
    z = numerics.number(z)
    if z == 0:
        msg = "z = 0 puts iz on the pole of Γ"
        raise PoleAtZero(msg)
    i = ctx.mpc(0, 1)
    if ctx.im(z) < 0:
        exponent, divisor, route = i * z, ctx.one, "direct"
    elif ctx.im(z) < 1:
        exponent, divisor, route = i * z + 1, i * z, "shifted"
    else:
        msg = f"the Liouville transform needs Im z < 1, got {ctx.nstr(ctx.im(z), 6)}"
        raise DomainError(msg)
    kernel = liouville_kernel()
    tol = numerics.tolerance()
    rate = ctx.re(exponent)
    # left tail decays like e^{rate·φ}, right tail like e^{−e^φ}
    start = ctx.log(tol / 10) / rate
    end = ctx.log(ctx.log(10 / tol) + 2 * abs(exponent) + 10)
    frequency = abs(ctx.im(exponent))
    period = 2 * ctx.pi / frequency if frequency > ctx.mpf("1e-3") else None
    result = integrate(
        lambda phi: ctx.exp(exponent * phi) * kernel.eval(phi, ctx),
        Window(start, end, (0,)),
        tol,
        numerics,
        period=period,
    )
    value = ctx.mpc(result.value.value) / divisor
    reference = ctx.gamma(i * z)
    logger.debug(f"Liouville transform at z={ctx.nstr(z, 8)} by the {route} route: {ctx.nstr(value, 15)}")
    return LiouvilleTransform(
        z=numerics.wrap(z),
        value=numerics.wrap(value),
        reference=numerics.wrap(reference),
        discrepancy=numerics.scalar(abs(value - reference)),
        error_estimate=numerics.scalar((result.error_estimate.value + tol) / abs(divisor)),
        route=route,
    )
