"""Ai(z) as the (2,1) FZZT partition function.

The reference route sums the Maclaurin pair through ₀F₁ with enough guard digits to absorb
the cancellation on the positive axis, and switches to the exponential asymptotic expansions
beyond the radius where their smallest term drops below the working precision. The
kontsevich route integrates e^{izφ + iφ³/3} along rays rotated into the convergence sectors."""

import logging
import math
from dataclasses import dataclass
from typing import Any, Literal

from databricks.labs.fzzt.errors import DomainError, NonConvergence
from databricks.labs.fzzt.kernels import airy_kernel
from databricks.labs.fzzt.precision import Numerics, PrecisionNumber, PrecisionScalar, context_for
from databricks.labs.fzzt.quadrature import fourier_transform
from databricks.labs.fzzt.roots import refine_sign_change
from databricks.labs.fzzt.xi import ZeroList

logger = logging.getLogger(__name__)

AiryRoute = Literal["reference", "kontsevich"]

MAX_ZEROS = 20
ZERO_SCAN_STEP = 0.05
POSITIVE_CHECK = 10.0
ODE_STEP = 1e-3


@dataclass(frozen=True)
class AiryValue:
    z: PrecisionNumber
    value: PrecisionNumber
    route: AiryRoute
    error_estimate: PrecisionScalar | None = None


class Airy:
    def __init__(self, numerics: Numerics, *, max_imag: float = 1.0):
        self._numerics = numerics
        self._kernel = airy_kernel(max_imag=max_imag)

    @property
    def switchover_radius(self) -> float:
        """|z| above which the asymptotic expansion's smallest term is below 10^-digits."""
        return (0.75 * self._numerics.digits * math.log(10)) ** (2 / 3)

    def reference(self, z: Any) -> Any:
        z = self._numerics.number(z)
        if abs(z) <= self.switchover_radius:
            return self._maclaurin(z)
        return self._asymptotic(z)

    def _maclaurin(self, z: Any) -> Any:
        magnitude = float(abs(z))
        guard = int(math.ceil(4 / 3 * magnitude**1.5 / math.log(10))) + 10
        ctx = context_for(self._numerics.digits + guard)
        z = ctx.convert(z)
        cube = z**3 / 9
        c1 = ctx.power(3, ctx.mpf(-2) / 3) / ctx.gamma(ctx.mpf(2) / 3)
        c2 = ctx.power(3, ctx.mpf(-1) / 3) / ctx.gamma(ctx.mpf(1) / 3)
        value = c1 * ctx.hyp0f1(ctx.mpf(2) / 3, cube) - c2 * z * ctx.hyp0f1(ctx.mpf(4) / 3, cube)
        return +self._numerics.ctx.convert(value)

    def _asymptotic(self, z: Any) -> Any:
        ctx = self._numerics.ctx
        if ctx.re(z) >= 0 or abs(ctx.arg(z)) < 2 * ctx.pi / 3:
            zeta = ctx.mpf(2) / 3 * z ** ctx.mpf(1.5)
            terms = self._asymptotic_terms(zeta)
            total = ctx.fsum((-1) ** k * u for k, u in enumerate(terms))
            return ctx.exp(-zeta) / (2 * ctx.sqrt(ctx.pi) * z ** ctx.mpf(0.25)) * total
        w = -z
        zeta = ctx.mpf(2) / 3 * w ** ctx.mpf(1.5)
        terms = self._asymptotic_terms(zeta)
        even = ctx.fsum((-1) ** (k // 2) * u for k, u in enumerate(terms) if k % 2 == 0)
        odd = ctx.fsum((-1) ** (k // 2) * u for k, u in enumerate(terms) if k % 2 == 1)
        phase = zeta - ctx.pi / 4
        return (ctx.cos(phase) * even + ctx.sin(phase) * odd) / (ctx.sqrt(ctx.pi) * w ** ctx.mpf(0.25))

    def _asymptotic_terms(self, zeta: Any) -> list[Any]:
        """u_k/ζ^k up to the smallest term, u_k = Γ(3k+½)/(54^k k! Γ(k+½))."""
        ctx = self._numerics.ctx
        floor = ctx.eps
        terms = [ctx.one]
        coefficient = ctx.one
        k = 0
        while True:
            k += 1
            coefficient *= ctx.mpf((6 * k - 5) * (6 * k - 3) * (6 * k - 1)) / (216 * k * (2 * k - 1))
            term = coefficient / zeta**k
            if abs(term) >= abs(terms[-1]):
                break
            terms.append(term)
            if abs(term) < floor:
                break
        if abs(terms[-1]) > ctx.mpf(10) ** (5 - self._numerics.digits):
            msg = f"asymptotic Ai expansion stalls at {ctx.nstr(abs(terms[-1]), 3)} for |ζ| = {ctx.nstr(abs(zeta), 6)}"
            raise NonConvergence(msg, estimate=self._numerics.scalar(abs(terms[-1])))
        return terms

    def kontsevich(self, z: Any) -> tuple[Any, Any]:
        ctx = self._numerics.ctx
        result = fourier_transform(self._kernel, z, self._numerics)
        return result.value.value / (2 * ctx.pi), result.error_estimate.value / (2 * ctx.pi)

    def evaluate(self, z: Any, route: AiryRoute = "reference") -> AiryValue:
        numerics = self._numerics
        estimate = None
        if route == "reference":
            value = self.reference(z)
        elif route == "kontsevich":
            value, estimate = self.kontsevich(z)
        else:
            msg = f"unknown Airy route: {route}"
            raise DomainError(msg)
        return AiryValue(
            z=numerics.wrap(z),
            value=numerics.wrap(value),
            route=route,
            error_estimate=None if estimate is None else numerics.scalar(estimate),
        )

    def real_part(self, x: Any) -> Any:
        return self._numerics.ctx.re(self.reference(x))

    def zeros(self, count: int) -> ZeroList:
        """First ``count`` zeros on the negative axis by a sign-change scan, nearest to 0 first.

        The positive axis is scanned up to +10 as well; a sign change there is recorded as a
        warning on the returned list."""
        if not 0 <= count <= MAX_ZEROS:
            msg = f"airy_zeros supports up to {MAX_ZEROS} zeros, got {count}"
            raise DomainError(msg)
        ctx = self._numerics.ctx
        numerics = self._numerics
        step = ctx.mpf(ZERO_SCAN_STEP)
        zeros, brackets, residuals = [], [], []
        right, f_right = ctx.zero, self.real_part(0)
        j = 0
        while len(zeros) < count:
            j += 1
            left = -step * j
            f_left = self.real_part(left)
            if f_left == 0 or f_left * f_right < 0:
                zero, (lo, hi) = refine_sign_change(self.real_part, left, right, f_left, numerics)
                zeros.append(numerics.scalar(zero))
                brackets.append((numerics.scalar(lo), numerics.scalar(hi)))
                residuals.append(numerics.scalar(abs(self.reference(zero))))
                logger.debug(f"Ai zero {len(zeros)} at {ctx.nstr(zero, 15)}")
            right, f_right = left, f_left
        warnings = self._positive_axis_warnings()
        return ZeroList(
            zeros=tuple(zeros),
            brackets=tuple(brackets),
            residuals=tuple(residuals),
            coverage=((float(right), POSITIVE_CHECK),),
            step=ZERO_SCAN_STEP,
            digits=numerics.digits,
            warnings=tuple(warnings),
        )

    def _positive_axis_warnings(self) -> list[str]:
        ctx = self._numerics.ctx
        previous = self.real_part(0)
        warnings = []
        for x in ctx.linspace(0, POSITIVE_CHECK, int(POSITIVE_CHECK / ZERO_SCAN_STEP) + 1)[1:]:
            current = self.real_part(x)
            if current * previous <= 0:
                warning = f"sign change of Ai on the positive axis near {ctx.nstr(x, 6)}"
                logger.warning(warning)
                warnings.append(warning)
            previous = current
        return warnings

    def ode_residual(self, z: Any) -> PrecisionScalar:
        """|Ai″(z) − z·Ai(z)| with a 5-point second difference at step 10⁻³."""
        ctx = self._numerics.ctx
        z = self._numerics.number(z)
        h = ctx.mpf(ODE_STEP)
        f = self.reference
        second = (-f(z + 2 * h) + 16 * f(z + h) - 30 * f(z) + 16 * f(z - h) - f(z - 2 * h)) / (12 * h * h)
        return self._numerics.scalar(abs(second - z * f(z)))

    def grid(self, start: float, stop: float, points: int) -> list[tuple[Any, Any]]:
        ctx = self._numerics.ctx
        if points < 2:
            msg = f"a grid needs at least two points, got {points}"
            raise DomainError(msg)
        return [(x, self.real_part(x)) for x in ctx.linspace(ctx.mpf(start), ctx.mpf(stop), points)]


def airy_eval(z: Any, route: AiryRoute, numerics: Numerics) -> AiryValue:
    return Airy(numerics).evaluate(z, route)


def airy_zeros(count: int, numerics: Numerics) -> ZeroList:
    return Airy(numerics).zeros(count)


def airy_grid(start: float, stop: float, points: int, numerics: Numerics) -> list[tuple[Any, Any]]:
    return Airy(numerics).grid(start, stop, points)


def airy_ode_residual(z: Any, numerics: Numerics) -> PrecisionScalar:
    return Airy(numerics).ode_residual(z)
