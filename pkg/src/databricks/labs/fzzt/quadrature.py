"""Adaptive double-exponential quadrature and Fourier-type transforms of one-dimensional kernels.

All integrals go through mpmath's tanh-sinh rule, which places nodes by a double-exponential
variable transformation and refines them geometrically, doubling the node density at each
degree. Finite pieces of oscillatory integrals are cut at one period of ``e^{izφ}``."""

import logging
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any

from databricks.labs.fzzt.errors import (
    ContourDivergence,
    FzztError,
    IntegrandEvaluationFailure,
    NonConvergence,
    WindowTooSmall,
)
from databricks.labs.fzzt.precision import (
    Numerics,
    PrecisionNumber,
    PrecisionScalar,
)

if TYPE_CHECKING:
    from databricks.labs.fzzt.kernels import KernelSpec

logger = logging.getLogger(__name__)

WINDOW_STEP = 0.25


@dataclass(frozen=True)
class HalfLine:
    start: Any = 0


@dataclass(frozen=True)
class RealLine:
    pass


@dataclass(frozen=True)
class Window:
    start: Any
    end: Any
    breakpoints: tuple[Any, ...] = ()


Domain = HalfLine | RealLine | Window


@dataclass(frozen=True)
class QuadratureResult:
    value: PrecisionNumber
    error_estimate: PrecisionScalar
    nodes_used: int
    converged: bool = True


def _points(domain: Domain, numerics: Numerics, period: Any | None) -> list[Any]:
    ctx = numerics.ctx
    if isinstance(domain, HalfLine):
        return [numerics.real(domain.start), ctx.inf]
    if isinstance(domain, RealLine):
        return [ctx.ninf, ctx.inf]
    start, end = numerics.real(domain.start), numerics.real(domain.end)
    if end <= start:
        msg = f"empty window [{start}, {end}]"
        raise ValueError(msg)
    inner = sorted(numerics.real(b) for b in domain.breakpoints if start < numerics.real(b) < end)
    edges = [start, *inner, end]
    if period is None:
        return edges
    points = [edges[0]]
    for a, b in zip(edges, edges[1:]):
        pieces = max(1, int(ctx.ceil((b - a) / period)))
        step = (b - a) / pieces
        points.extend(a + step * k for k in range(1, pieces))
        points.append(b)
    return points


def _guarded(f: Callable[..., Any], numerics: Numerics, counter: list[int]) -> Callable[..., Any]:
    ctx = numerics.ctx

    def inner(*args):
        counter[0] += 1
        try:
            y = f(*args)
        except FzztError:
            raise
        except (ArithmeticError, ValueError) as e:
            msg = f"integrand failed at {ctx.nstr(args[0], 10) if len(args) == 1 else args}: {e}"
            raise IntegrandEvaluationFailure(msg, node=args) from e
        if ctx.isnan(y) or ctx.isinf(y):
            msg = f"integrand is not finite at {args}"
            raise IntegrandEvaluationFailure(msg, node=args)
        return y

    return inner


def integrate(
    f: Callable[[Any], Any],
    domain: Domain,
    tol: Any,
    numerics: Numerics,
    *,
    period: Any | None = None,
    max_degree: int | None = None,
    allow_nonconvergence: bool = False,
) -> QuadratureResult:
    """Integrates ``f`` over the domain to absolute tolerance ``tol``.

    ``f`` receives and returns numbers of the calling thread's context for ``numerics``.
    The reported error estimate adds a rounding floor to the rule's extrapolated error. If the
    estimate stays above ``tol``, raises :class:`NonConvergence` carrying the best value, or
    returns it flagged as not converged when ``allow_nonconvergence`` is set."""
    return integrate_nd(
        f,
        [domain],
        tol,
        numerics,
        periods=[period],
        max_degree=max_degree,
        allow_nonconvergence=allow_nonconvergence,
    )


def integrate_nd(
    f: Callable[..., Any],
    domains: Sequence[Domain],
    tol: Any,
    numerics: Numerics,
    *,
    periods: Sequence[Any | None] | None = None,
    max_degree: int | None = None,
    allow_nonconvergence: bool = False,
) -> QuadratureResult:
    ctx = numerics.ctx
    tol = numerics.real(tol)
    if tol <= 0:
        msg = f"tolerance must be positive, got {tol}"
        raise ValueError(msg)
    if not 1 <= len(domains) <= 3:
        msg = f"only 1 to 3 dimensional integrals are supported, got {len(domains)}"
        raise ValueError(msg)
    periods = periods or [None] * len(domains)
    axes = [_points(d, numerics, p) for d, p in zip(domains, periods)]
    counter = [0]
    kwargs: dict[str, Any] = {"error": True}
    if max_degree is not None:
        kwargs["maxdegree"] = max_degree
    value, err = ctx.quad(_guarded(f, numerics, counter), *axes, **kwargs)
    floor = 16 * ctx.eps * max(ctx.one, abs(value))
    estimate = abs(err) + floor
    logger.debug(f"quadrature over {len(axes[0]) - 1} piece(s): {counter[0]} nodes, error {ctx.nstr(estimate, 3)}")
    converged = estimate <= tol
    if not converged and not allow_nonconvergence:
        msg = f"quadrature stopped at error {ctx.nstr(estimate, 3)} above tolerance {ctx.nstr(tol, 3)}"
        raise NonConvergence(msg, best=numerics.wrap(value), estimate=numerics.scalar(estimate))
    return QuadratureResult(numerics.wrap(value), numerics.scalar(estimate), counter[0], converged)


def _oscillation_period(numerics: Numerics, frequency: Any) -> Any | None:
    ctx = numerics.ctx
    if abs(frequency) < ctx.mpf("1e-3"):
        return None
    return 2 * ctx.pi / abs(frequency)


def choose_window(kernel: "KernelSpec", numerics: Numerics, growth: Any, power: int, tol: Any) -> tuple[Any, Any]:
    """Smallest half-width on the kernel's window ladder whose truncated tail is below ``tol``.

    The tail beyond R is bounded by ``decay_bound(R)·R^power·e^{growth·R}``, which dominates the
    tail integral for kernels decaying at least like a Gaussian past their minimal window."""
    ctx = numerics.ctx
    radius = ctx.mpf(kernel.min_window)
    while radius <= kernel.max_window:
        bound = kernel.decay_bound(radius, ctx) * radius**power * ctx.exp(growth * radius)
        if bound <= tol:
            return radius, bound
        radius += WINDOW_STEP
    msg = f"{kernel.id}: window {kernel.max_window} cannot bring the truncation error below {ctx.nstr(tol, 3)}"
    raise WindowTooSmall(msg)


def fourier_transform(
    kernel: "KernelSpec",
    z: Any,
    numerics: Numerics,
    *,
    tol: Any | None = None,
    power: int = 0,
) -> QuadratureResult:
    """Computes ``∫ φ^power g(φ) e^{izφ} dφ`` for the kernel ``g``.

    Even kernels are integrated on the half line as ``2∫cos`` (even power) or ``2i∫sin`` (odd
    power); for real z the result then has an exactly zero imaginary part. Kernels with rotated
    contours are integrated along their two rays."""
    ctx = numerics.ctx
    z = numerics.number(z)
    tol = numerics.tolerance() if tol is None else numerics.real(tol)
    if kernel.rays:
        return _ray_transform(kernel, z, numerics, tol, power)
    growth = abs(ctx.im(z))
    radius, truncation = choose_window(kernel, numerics, growth, power, tol / 10)
    period = _oscillation_period(numerics, ctx.re(z))
    evaluate = kernel.eval
    if kernel.even:
        trig = ctx.cos if power % 2 == 0 else ctx.sin
        scale = 2 if power % 2 == 0 else 2j

        def half_line(phi):
            return trig(z * phi) * phi**power * evaluate(phi, ctx)

        result = integrate(half_line, Window(0, radius, kernel.breakpoints), tol, numerics, period=period)
        value = ctx.mpc(result.value.value) * scale
    else:

        def full_line(phi):
            return ctx.expj(z * phi) * phi**power * evaluate(phi, ctx)

        breakpoints = (*[-b for b in kernel.breakpoints], 0, *kernel.breakpoints)
        result = integrate(full_line, Window(-radius, radius, breakpoints), tol, numerics, period=period)
        value = ctx.mpc(result.value.value)
        scale = 1
    estimate = abs(scale) * result.error_estimate.value + truncation
    return QuadratureResult(
        numerics.wrap(ctx.mpc(value)), numerics.scalar(estimate), result.nodes_used, result.converged
    )


def _ray_transform(kernel: "KernelSpec", z: Any, numerics: Numerics, tol: Any, power: int) -> QuadratureResult:
    ctx = numerics.ctx
    if abs(ctx.im(z)) > kernel.max_imag:
        msg = f"{kernel.id}: |Im z| = {ctx.nstr(abs(ctx.im(z)), 5)} leaves the rotated contour's convergence sectors"
        raise ContourDivergence(msg)
    radius, truncation = choose_window(kernel, numerics, abs(z), power, tol / 10)
    total = ctx.mpc(0)
    error = ctx.zero
    nodes = 0
    for direction, angle in kernel.rays:
        unit = ctx.expj(angle)
        period = _oscillation_period(numerics, abs(z))

        def along(t, unit=unit):
            phi = t * unit
            return ctx.expj(z * phi) * phi**power * kernel.eval(phi, ctx) * unit

        result = integrate(along, Window(0, radius), tol / 2, numerics, period=period)
        total += direction * result.value.value
        error += result.error_estimate.value
        nodes += result.nodes_used
    return QuadratureResult(numerics.wrap(ctx.mpc(total)), numerics.scalar(error + 2 * truncation), nodes)
