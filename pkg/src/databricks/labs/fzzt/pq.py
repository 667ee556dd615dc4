"""Generalized (p,1) reading of a Kontsevich kernel.

The Taylor expansion of log g about 0, cut at order p+1, is matched against
``−(iφ)^{p+1}/(p+1) + Σ_{k=1}^{p−2} s_k (iφ)^{k+1}/(k+1)``. The truncated model
``Ξ_p(z) = ∫e^{izφ + T_{p+1}(φ)}dφ`` then satisfies ``QΞ_p = zΞ_p`` with the polynomial
``Q(x) = i·T′(ix)``, and the couplings define a matrix potential whose orthogonal polynomials
Bₙ come out of the generating function ``exp(−V(y+1) + 2zy)``."""

import functools
import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Any, Literal

from databricks.labs.fzzt.errors import DomainError, NonDecayingTruncation, OrderOverflow
from databricks.labs.fzzt.kernels import KernelSpec, liouville_kernel, xi_kernel
from databricks.labs.fzzt.precision import Numerics, PrecisionNumber, PrecisionScalar, context_for
from databricks.labs.fzzt.quadrature import Window, choose_window, fourier_transform, integrate
from databricks.labs.fzzt.series import MAX_ORDER, PowerSeries, series_op
from databricks.labs.fzzt.xi import xi_function

logger = logging.getLogger(__name__)

Convention = Literal["series_matching"]
KernelName = Literal["xi", "liouville"]

MAX_ORTH_DEGREE = 12
TRUNCATED_MAX_WINDOW = 12.0


@dataclass(frozen=True)
class CouplingSet:
    """Couplings of one truncation order.

    ``s`` follows the series-matching convention; ``s_derivative`` holds the off-by-one reading
    ``i^{−(k+1)}·L_k`` for comparison. ``extra`` keeps the log coefficients the (p,1) template has no
    slot for (the linear and φ^p terms), which vanish for even kernels."""

    p: int
    s: dict[int, PrecisionNumber]
    leading_coeff: PrecisionScalar
    log_coefficients: PowerSeries
    s_derivative: dict[int, PrecisionNumber] = field(default_factory=dict)
    normalization: PrecisionNumber | None = None
    alpha: PrecisionScalar | None = None
    kernel: KernelName = "xi"
    even: bool = True
    extra: dict[int, PrecisionNumber] = field(default_factory=dict)
    convention: Convention = "series_matching"

    def log_polynomial(self, numerics: Numerics) -> PowerSeries:
        """T_{p+1} rebuilt from the couplings, the normalization and the leading coefficient."""
        ctx = numerics.ctx
        i = ctx.mpc(0, 1)
        coeffs = [ctx.zero] * (self.p + 2)
        coeffs[0] = numerics.number(self.normalization)
        for k, s_k in self.s.items():
            coeffs[k + 1] = numerics.number(s_k) * i ** (k + 1) / (k + 1)
        for k, value in self.extra.items():
            coeffs[k] = numerics.number(value)
        coeffs[self.p + 1] = numerics.number(self.leading_coeff)
        if self.even:
            coeffs = [c if k % 2 == 0 else ctx.zero for k, c in enumerate(coeffs)]
        return PowerSeries.from_coefficients([_real_if_close(c, ctx) for c in coeffs], numerics)


def _real_if_close(value: Any, ctx) -> Any:
    if isinstance(value, ctx.mpc) and abs(value.imag) <= ctx.eps * 8 * max(ctx.one, abs(value.real)):
        return value.real
    return value


def _kernel(name: KernelName, numerics: Numerics) -> KernelSpec:
    if name == "xi":
        return xi_kernel(numerics)
    if name == "liouville":
        return liouville_kernel()
    msg = f"unknown kernel for coupling extraction: {name}"
    raise DomainError(msg)


def log_kernel_series(order: int, numerics: Numerics, kernel: KernelName = "xi") -> PowerSeries:
    """Taylor coefficients L_0…L_order of log g about 0."""
    if order > MAX_ORDER:
        msg = f"log kernel order {order} exceeds the maximum of {MAX_ORDER}"
        raise OrderOverflow(msg)
    spec = _kernel(kernel, numerics)
    return series_op("log", spec.taylor(order, numerics))


def admissible_orders(max_p: int, numerics: Numerics, kernel: KernelName = "xi") -> list[int]:
    """Truncation orders p ≤ max_p with p+1 even and L_{p+1} < 0."""
    ctx = numerics.ctx
    logs = log_kernel_series(max_p + 1, numerics, kernel)
    return [p for p in range(1, max_p + 1) if (p + 1) % 2 == 0 and ctx.re(logs.coeffs[p + 1]) < 0]


def extract_sk(p: int, numerics: Numerics, kernel: KernelName = "xi") -> CouplingSet:
    ctx = numerics.ctx
    if p < 1:
        msg = f"truncation order must be at least 1, got {p}"
        raise DomainError(msg)
    logs = log_kernel_series(p + 1, numerics, kernel)
    coeffs = [ctx.convert(c) for c in logs.coeffs]
    leading = ctx.re(coeffs[p + 1])
    if (p + 1) % 2 != 0 or leading >= 0:
        msg = f"p={p}: the truncated log kernel does not decay (order {p + 1}, coefficient {ctx.nstr(leading, 6)})"
        raise NonDecayingTruncation(msg)
    i = ctx.mpc(0, 1)
    s = {k: numerics.wrap(_real_if_close((k + 1) * coeffs[k + 1] * i ** (-(k + 1)), ctx)) for k in range(1, p - 1)}
    derivative = {k: numerics.wrap(_real_if_close(coeffs[k] * i ** (-(k + 1)), ctx)) for k in range(1, p - 1)}
    extra = {k: numerics.wrap(coeffs[k]) for k in sorted({1, p}) if k < p + 1}
    alpha = ctx.power(abs((p + 1) * leading), ctx.one / (p + 1))
    logger.debug(f"extracted {len(s)} couplings at p={p} from the {kernel} kernel, L_(p+1) = {ctx.nstr(leading, 10)}")
    return CouplingSet(
        p=p,
        s=s,
        leading_coeff=numerics.scalar(leading),
        log_coefficients=logs,
        s_derivative=derivative,
        normalization=numerics.wrap(coeffs[0]),
        alpha=numerics.scalar(alpha),
        kernel=kernel,
        even=kernel == "xi",
        extra=extra,
    )


def _decay_bound(coeffs: Sequence[Any]):
    """Bound on |e^{T(φ)}| for |φ| ≥ R once the majorant polynomial has turned down at R."""

    def bound(radius, ctx):
        top = len(coeffs) - 1
        lead = ctx.re(ctx.convert(coeffs[top]))
        rest = [abs(ctx.convert(c)) for c in coeffs[1:top]]
        slope = ctx.fsum((k + 1) * c * radius**k for k, c in enumerate(rest)) + top * lead * radius ** (top - 1)
        if slope >= 0:
            return ctx.inf
        value = ctx.re(ctx.convert(coeffs[0])) + ctx.fsum(c * radius ** (k + 1) for k, c in enumerate(rest))
        return ctx.exp(value + lead * radius**top)

    return bound


def truncated_log(couplings: CouplingSet, numerics: Numerics) -> KernelSpec:
    """KernelSpec of e^{T_{p+1}(φ)}."""
    polynomial = couplings.log_polynomial(numerics)
    coeffs = polynomial.coeffs

    def evaluate(phi, ctx):
        total = ctx.zero
        for c in reversed(coeffs):
            total = total * phi + ctx.convert(c)
        return ctx.exp(total)

    def taylor(order: int, n: Numerics) -> PowerSeries:
        padded = PowerSeries.from_coefficients(coeffs[: order + 1], n, order)
        return series_op("exp", padded)

    return KernelSpec(
        f"truncated_log({couplings.p})",
        evaluate,
        _decay_bound(coeffs),
        even=couplings.even,
        taylor=taylor,
        max_window=TRUNCATED_MAX_WINDOW,
    )


@functools.lru_cache(maxsize=32)
def _couplings(p: int, digits: int, kernel: KernelName) -> CouplingSet:
    return extract_sk(p, Numerics(digits), kernel)


def xi_p_eval(z: Any, p: int, numerics: Numerics, kernel: KernelName = "xi") -> PrecisionNumber:
    couplings = _couplings(p, numerics.digits, kernel)
    result = fourier_transform(truncated_log(couplings, numerics), z, numerics)
    return result.value


def xi_p_sweep(orders: Sequence[int], points: Sequence[Any], numerics: Numerics) -> dict[int, PrecisionScalar]:
    """max over the points of |c·Ξ_p(z) − Ξ(z)|, with c the Fourier calibration constant."""
    xi = xi_function(numerics.digits)
    ctx = numerics.ctx
    gaps = {}
    for p in orders:
        gaps[p] = numerics.scalar(
            max(abs(xi.calibration * xi_p_eval(z, p, numerics).value - xi.reference(z)) for z in points)
        )
        logger.info(f"Ξ_{p}: largest gap to Ξ on {len(points)} points is {ctx.nstr(gaps[p].value, 5)}")
    return gaps


@dataclass(frozen=True)
class GenAiryResidual:
    z: PrecisionNumber
    p: int
    residual: PrecisionScalar
    error_estimate: PrecisionScalar
    boundary: PrecisionNumber


def q_polynomial(couplings: CouplingSet, numerics: Numerics) -> PowerSeries:
    """Q(x) = i·T′(ix) as a polynomial in x."""
    ctx = numerics.ctx
    i = ctx.mpc(0, 1)
    derivative = series_op("differentiate", couplings.log_polynomial(numerics))
    return PowerSeries.from_coefficients([i * c * i**j for j, c in enumerate(derivative.coeffs)], numerics)


def gen_airy_residual(
    z: Any,
    p: int,
    numerics: Numerics,
    *,
    perturb: tuple[int, float] | None = None,
    kernel: KernelName = "xi",
) -> GenAiryResidual:
    """|∫e^{izφ}(Q(−iφ) − z)e^{T}dφ − i[e^{izφ}e^{T}]| over the truncation window, scaled by c.

    ``perturb=(j, δ)`` adds δ to the coefficient of x^j in Q before integrating."""
    ctx = numerics.ctx
    z = numerics.number(z)
    couplings = _couplings(p, numerics.digits, kernel)
    spec = truncated_log(couplings, numerics)
    q = list(q_polynomial(couplings, numerics).coeffs)
    if perturb is not None:
        j, delta = perturb
        if not 0 <= j < len(q):
            msg = f"Q has degree {len(q) - 1}, cannot perturb x^{j}"
            raise DomainError(msg)
        q[j] += ctx.mpf(delta)
    tol = numerics.tolerance()
    radius, truncation = choose_window(spec, numerics, abs(ctx.im(z)), p, tol / 10)

    def q_at(phi):
        x = -ctx.mpc(0, 1) * phi
        total = ctx.zero
        for c in reversed(q):
            total = total * x + c
        return total

    def integrand(phi):
        return ctx.expj(z * phi) * (q_at(phi) - z) * spec.eval(phi, ctx)

    frequency = abs(ctx.re(z))
    period = 2 * ctx.pi / frequency if frequency > ctx.mpf("1e-3") else None
    result = integrate(integrand, Window(-radius, radius, (0,)), tol, numerics, period=period)

    def edge(phi):
        return ctx.expj(z * phi) * spec.eval(phi, ctx)

    boundary = ctx.mpc(0, 1) * (edge(radius) - edge(-radius))
    c = xi_function(numerics.digits).calibration if kernel == "xi" else ctx.one
    residual = abs(c * (result.value.value - boundary))
    estimate = abs(c) * (result.error_estimate.value + truncation) + 16 * ctx.eps
    return GenAiryResidual(
        z=numerics.wrap(z),
        p=p,
        residual=numerics.scalar(residual),
        error_estimate=numerics.scalar(estimate),
        boundary=numerics.wrap(boundary),
    )


def truncated_potential(couplings: CouplingSet, numerics: Numerics, order: int | None = None) -> PowerSeries:
    """V_trunc(y+1) = V_p(y+1) + Σ s_k V_k(y+1) as a series in y, with V_k(M) = Σ_{j=1}^{k}(M^j − I)/j."""
    ctx = numerics.ctx
    order = couplings.p if order is None else order

    def template(k: int) -> list[Any]:
        # [y^m](1+y)^j = C(j, m); the identity parts cancel the constant
        return [ctx.zero] + [
            ctx.fsum(ctx.mpf(math.comb(j, m)) / j for j in range(m, k + 1)) for m in range(1, order + 1)
        ]

    coeffs = template(couplings.p)
    for k, s_k in couplings.s.items():
        weight = numerics.number(s_k)
        coeffs = [a + weight * b for a, b in zip(coeffs, template(k))]
    return PowerSeries.from_coefficients(coeffs, numerics)


def orth_poly(n: int, potential: PowerSeries, numerics: Numerics) -> PowerSeries:
    """Bₙ(z) = n!·[yⁿ] exp(−V(y) + 2zy) as a polynomial in z, for V given as a series in y.

    With e_j = [y^j]exp(−V(y)), Bₙ(z) = n!·Σ_m e_{n−m}(2z)^m/m!."""
    if not 0 <= n <= MAX_ORTH_DEGREE:
        msg = f"orthogonal polynomial degree must be in [0, {MAX_ORTH_DEGREE}], got {n}"
        raise OrderOverflow(msg)
    ctx = context_for(max(numerics.digits, potential.digits))
    values = list(potential.coeffs[: n + 1])
    negated = PowerSeries.from_coefficients([-ctx.convert(v) for v in values], numerics, n)
    weights = series_op("exp", negated).coeffs
    coeffs = [
        math.factorial(n) * ctx.convert(weights[n - m]) * 2**m / math.factorial(m) for m in range(n + 1)
    ]
    return PowerSeries.from_coefficients(coeffs, numerics)
