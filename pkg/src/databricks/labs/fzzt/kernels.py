import functools
import logging
import math
from collections.abc import Callable
from dataclasses import dataclass
from typing import Any, Literal

from databricks.labs.fzzt.errors import KernelDomainError, OrderOverflow, TailBudgetTooLoose
from databricks.labs.fzzt.precision import Numerics, PrecisionScalar, context_for
from databricks.labs.fzzt.series import MAX_ORDER, PowerSeries, series_op

logger = logging.getLogger(__name__)

Variant = Literal["f_of_ell", "phi_derived", "phi_literal"]

DEFAULT_WINDOW = 3.5
DEFAULT_MARGIN = 20
SERIES_GUARD_DIGITS = 20
# 1 + Σ_{q≥2} q⁴e^{−π(q²−1)x} stays below this once x ≥ 1
_THETA_ENVELOPE = 1.01


@dataclass(frozen=True)
class KernelSpec:
    """One-dimensional Kontsevich integrand g(φ).

    ``eval`` and ``decay_bound`` take the point and the mpmath context to compute in; a
    kernel never holds on to a context, so specs can be shared between threads. Kernels with
    ``rays`` are integrated along rotated rays ``(direction, angle)`` from the origin instead
    of the real line."""

    id: str
    eval: Callable[[Any, Any], Any]
    decay_bound: Callable[[Any, Any], Any]
    even: bool
    taylor: Callable[[int, Numerics], PowerSeries] | None = None
    min_window: float = 0.5
    max_window: float = DEFAULT_WINDOW
    breakpoints: tuple[float, ...] = ()
    rays: tuple[tuple[int, float], ...] = ()
    max_imag: float = 1.0


@dataclass(frozen=True)
class ThetaTailBudget:
    """Number of retained q-terms and a rigorous bound on the omitted ones.

    Omitted terms are positive and dominated by the geometric majorant
    ``A_{K+1}/(1 − r)`` with ``A_q = pref·q⁴e^{−πq²x}``, evaluated at the smallest theta
    argument ``x_min`` the budget covers."""

    K: int
    tail_bound: PrecisionScalar
    variant: Variant
    x_min: Any

    def extended(self, extra: int) -> "ThetaTailBudget":
        ctx = context_for(self.tail_bound.digits)
        bound = _tail_bound(self.variant, self.x_min, self.K + extra, ctx)
        return ThetaTailBudget(self.K + extra, PrecisionScalar(bound, self.tail_bound.digits), self.variant, self.x_min)


def _theta_argument(variant: Variant, point: Any, ctx) -> Any:
    if variant == "f_of_ell":
        return point
    if variant == "phi_derived":
        return ctx.exp(2 * point)
    return ctx.exp(point)


def _majorant_prefactor(variant: Variant, x: Any, ctx) -> Any:
    if variant == "f_of_ell":
        return ctx.pi**2 * x * ctx.sqrt(x)
    if variant == "phi_derived":
        return 2 * ctx.pi**2 * x ** ctx.mpf(2.25)
    return ctx.pi**2 * x**2


def _terms_needed(x: Any, ctx, margin: int) -> int:
    target = ctx.dps * ctx.ln10 + margin
    return max(1, int(ctx.ceil(ctx.sqrt(target / (ctx.pi * x)))))


def _tail_bound(variant: Variant, x: Any, K: int, ctx) -> Any:
    first = _majorant_prefactor(variant, x, ctx) * (K + 1) ** 4 * ctx.exp(-ctx.pi * (K + 1) ** 2 * x)
    ratio = (ctx.mpf(K + 2) / (K + 1)) ** 4 * ctx.exp(-ctx.pi * (2 * K + 3) * x)
    if ratio >= 1:
        msg = f"{variant}: {K} terms leave a non-geometric tail at x={ctx.nstr(x, 8)}"
        raise TailBudgetTooLoose(msg)
    return first / (1 - ratio)


def _reflected(variant: Variant, point: Any, ctx) -> tuple[Variant, Any, Any]:
    """Maps a point with theta argument below 1 onto Φ at |u|, where the q-sum does not cancel.

    Φ is even and the literal kernel equals Φ(φ/2)e^{−φ/4}/2."""
    if point >= 0 or variant == "f_of_ell":
        return variant, point, ctx.one
    if variant == "phi_derived":
        return variant, -point, ctx.one
    return "phi_derived", -point / 2, ctx.exp(-point / 4) / 2


def _theta_sum(variant: Variant, point: Any, K: int, ctx) -> Any:
    pi = ctx.pi
    x = _theta_argument(variant, point, ctx)
    match variant:
        case "f_of_ell":
            lead, sub, outer = pi**2 * x, ctx.mpf(1.5) * pi, ctx.sqrt(x)
        case "phi_derived":
            lead, sub, outer = 2 * pi**2 * x, 3 * pi, ctx.exp(ctx.mpf(2.5) * point)
        case _:
            lead, sub, outer = pi**2 * x**2, ctx.mpf(1.5) * pi * x, ctx.one
    base = ctx.exp(-pi * x)
    weight = base
    step = base**3
    square = base**2
    total = ctx.zero
    for q in range(1, K + 1):
        q2 = q * q
        total += (lead * q2 - sub) * q2 * weight
        weight *= step
        step *= square
    return total * outer


class ThetaKernel:
    """Theta-like kernel of the Ξ function in its three variants.

    * ``f_of_ell``: f(ℓ) = Σ_q (π²q⁴ℓ − (3/2)πq²)ℓ^{1/2}e^{−πq²ℓ}, for ℓ ≥ 1
    * ``phi_derived``: Φ(u) = Σ_q (2π²q⁴e^{9u/2} − 3πq²e^{5u/2})e^{−πq²e^{2u}}, even in u
    * ``phi_literal``: Σ_k (π²k⁴e^{2φ} − (3/2)πk²e^{φ})e^{−πk²e^{φ}}

    :param numerics: Numerics
        Working precision of returned values.
    :param margin: int
        Extra nats demanded of the q-cutoff beyond ``digits·ln 10``.
    """

    def __init__(self, numerics: Numerics, *, margin: int = DEFAULT_MARGIN):
        self._numerics = numerics
        self._margin = margin

    @property
    def numerics(self) -> Numerics:
        return self._numerics

    @property
    def margin(self) -> int:
        return self._margin

    def budget(self, variant: Variant, lowest_point: Any) -> ThetaTailBudget:
        """Tail budget valid at every point at or above ``lowest_point``.

        Both the majorant and its ratio decrease as the theta argument grows, so a budget
        built for the lowest point of a window covers the whole window. Negative points of the
        φ variants are summed at their reflection, so a window reaching below 0 is covered by
        the budget at 0."""
        ctx = self._numerics.ctx
        point = self._numerics.real(lowest_point)
        self._check_domain(variant, point)
        if variant != "f_of_ell" and point < 0:
            point = ctx.zero
        x = _theta_argument(variant, point, ctx)
        K = _terms_needed(x, ctx, self._margin)
        bound = _tail_bound(variant, x, K, ctx)
        logger.debug(f"{variant} tail budget at {ctx.nstr(point, 6)}: K={K}, bound {ctx.nstr(bound, 3)}")
        return ThetaTailBudget(K, self._numerics.scalar(bound), variant, x)

    def evaluate(
        self, variant: Variant, point: Any, budget: ThetaTailBudget | None = None, tol: Any | None = None
    ) -> PrecisionScalar:
        ctx = self._numerics.ctx
        point = self._numerics.real(point)
        self._check_domain(variant, point)
        if budget is None:
            budget = self.budget(variant, point)
        if budget.variant != variant:
            msg = f"budget was built for {budget.variant}, not {variant}"
            raise TailBudgetTooLoose(msg)
        summed, at, factor = _reflected(variant, point, ctx)
        x = _theta_argument(summed, at, ctx)
        if x < budget.x_min * (1 - ctx.eps * 16):
            msg = f"budget covers theta arguments from {ctx.nstr(budget.x_min, 8)}, got {ctx.nstr(x, 8)}"
            raise TailBudgetTooLoose(msg)
        if tol is not None and budget.tail_bound.value > self._numerics.real(tol):
            msg = f"tail bound {ctx.nstr(budget.tail_bound.value, 3)} exceeds tolerance {tol}"
            raise TailBudgetTooLoose(msg)
        guarded = context_for(self._numerics.digits + 10)
        value = _theta_sum(summed, guarded.convert(at), budget.K, guarded) * guarded.convert(factor)
        return self._numerics.scalar(value)

    def raw(self, variant: Variant, point: Any, ctx) -> Any:
        """Evaluates in ``ctx`` at its current precision with a per-point budget; used inside quadrature."""
        summed, at, factor = _reflected(variant, point, ctx)
        x = _theta_argument(summed, at, ctx)
        return _theta_sum(summed, at, _terms_needed(x, ctx, self._margin), ctx) * factor

    def series(self, order: int) -> PowerSeries:
        """Taylor series of Φ about 0, summed q-term by q-term until the terms drop below the coefficient floor."""
        return kernel_series(order, self._numerics.digits, self._margin)

    @staticmethod
    def _check_domain(variant: Variant, point: Any):
        if variant == "f_of_ell" and point < 1:
            msg = f"f(ℓ) is defined for ℓ ≥ 1, got {point}"
            raise KernelDomainError(msg)


def kernel_eval(variant: Variant, point: Any, numerics: Numerics, budget: ThetaTailBudget | None = None):
    return ThetaKernel(numerics).evaluate(variant, point, budget)


@functools.lru_cache(maxsize=64)
def kernel_series(order: int, digits: int, margin: int = DEFAULT_MARGIN) -> PowerSeries:
    if order > MAX_ORDER:
        msg = f"kernel series order {order} exceeds the maximum of {MAX_ORDER}"
        raise OrderOverflow(msg)
    guarded = Numerics(digits + SERIES_GUARD_DIGITS)
    ctx = guarded.ctx
    floor = ctx.mpf(10) ** (-(digits + 5))
    e2 = PowerSeries.exponential(2, order, guarded)
    e92 = PowerSeries.exponential(ctx.mpf(4.5), order, guarded)
    e52 = PowerSeries.exponential(ctx.mpf(2.5), order, guarded)
    total = PowerSeries.zero(order, guarded)
    quiet = 0
    q = 0
    while quiet < 2:
        q += 1
        if q > 400:
            msg = f"kernel series of order {order} did not settle after {q} q-terms"
            raise TailBudgetTooLoose(msg)
        prefactor = e92.scale(2 * ctx.pi**2 * q**4) + e52.scale(-3 * ctx.pi * q**2)
        term = prefactor * series_op("exp", e2.scale(-ctx.pi * q**2))
        total = total + term
        quiet = quiet + 1 if term.max_abs() < floor and q > 1 else 0
    logger.debug(f"kernel series of order {order} at {digits} digits used {q} q-terms (K={q - 2} effective)")
    return PowerSeries(total.coeffs, digits)


def _xi_decay(radius, ctx):
    return _THETA_ENVELOPE * 2 * ctx.pi**2 * ctx.exp(ctx.mpf(4.5) * radius - ctx.pi * ctx.exp(2 * radius))


def _literal_decay(radius, ctx):
    return _THETA_ENVELOPE * ctx.pi**2 * ctx.exp(ctx.mpf(2.5) * radius - ctx.pi * ctx.exp(radius))


def xi_kernel(numerics: Numerics, *, window: float = DEFAULT_WINDOW, margin: int = DEFAULT_MARGIN) -> KernelSpec:
    theta = ThetaKernel(numerics, margin=margin)

    def evaluate(u, ctx):
        return theta.raw("phi_derived", u, ctx)

    def taylor(order: int, n: Numerics) -> PowerSeries:
        return kernel_series(order, n.digits, margin)

    return KernelSpec("xi_derived", evaluate, _xi_decay, even=True, taylor=taylor, max_window=window)


def literal_kernel(numerics: Numerics, *, window: float = DEFAULT_WINDOW, margin: int = DEFAULT_MARGIN) -> KernelSpec:
    theta = ThetaKernel(numerics, margin=margin)

    def evaluate(phi, ctx):
        return theta.raw("phi_literal", phi, ctx)

    return KernelSpec("xi_literal", evaluate, _literal_decay, even=False, min_window=1, max_window=2 * window)


def airy_kernel(*, max_imag: float = 1.0) -> KernelSpec:
    """e^{iφ³/3} on the rays arg φ = 5π/6 (inbound) and π/6 (outbound), where it decays like e^{−|φ|³/3}."""

    def evaluate(phi, ctx):
        return ctx.expj(phi**3 / 3)

    def decay(radius, ctx):
        return ctx.exp(-(radius**3) / 3)

    def taylor(order: int, n: Numerics) -> PowerSeries:
        ctx = n.ctx
        cubic = PowerSeries.from_coefficients([0, 0, 0, ctx.mpc(0, 1) / 3], n, order) if order >= 3 else None
        if cubic is None:
            return PowerSeries.from_coefficients([1], n, order)
        return series_op("exp", cubic)

    return KernelSpec(
        "airy",
        evaluate,
        decay,
        even=False,
        taylor=taylor,
        min_window=1,
        max_window=20,
        rays=((-1, 5 * math.pi / 6), (1, math.pi / 6)),
        max_imag=max_imag,
    )


def liouville_kernel() -> KernelSpec:
    """e^{−e^φ}; it tends to 1 as φ → −∞, so it has no real-line Fourier transform at real z."""

    def evaluate(phi, ctx):
        return ctx.exp(-ctx.exp(phi))

    def decay(_radius, ctx):
        return ctx.one

    def taylor(order: int, n: Numerics) -> PowerSeries:
        return series_op("exp", PowerSeries.exponential(1, order, n).scale(-1))

    return KernelSpec("liouville", evaluate, decay, even=False, taylor=taylor)


def gaussian_kernel() -> KernelSpec:
    def evaluate(phi, ctx):
        return ctx.exp(-(phi**2))

    def decay(radius, ctx):
        return ctx.exp(-(radius**2))

    def taylor(order: int, n: Numerics) -> PowerSeries:
        square = PowerSeries.from_coefficients([0, 0, -1], n, order) if order >= 2 else None
        if square is None:
            return PowerSeries.from_coefficients([1], n, order)
        return series_op("exp", square)

    return KernelSpec("gaussian", evaluate, decay, even=True, taylor=taylor, min_window=1, max_window=16)
