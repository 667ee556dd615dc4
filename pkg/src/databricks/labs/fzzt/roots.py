import logging
from collections.abc import Callable
from typing import Any

from databricks.labs.fzzt.precision import Numerics

logger = logging.getLogger(__name__)

BISECTION_WIDTH = 1e-6
BRACKET_WIDTH = 1e-10


def bisect(f: Callable[[Any], Any], a: Any, b: Any, fa: Any, width: float) -> tuple[Any, Any, Any]:
    while b - a > width:
        mid = (a + b) / 2
        fm = f(mid)
        if fm == 0:
            return mid, mid, fm
        if fa * fm < 0:
            b = mid
        else:
            a, fa = mid, fm
    return a, b, fa


def refine_sign_change(
    f: Callable[[Any], Any], a: Any, b: Any, fa: Any, numerics: Numerics
) -> tuple[Any, tuple[Any, Any]]:
    """Bisection down to 10⁻⁶, then a secant step, then a bracket narrower than 10⁻¹⁰.

    If the secant iterate leaves the bisection bracket, or the sign change does not survive
    around it, bisection carries on to the final width instead."""
    ctx = numerics.ctx
    if fa == 0:
        return a, (a, a)
    a, b, fa = bisect(f, a, b, fa, BISECTION_WIDTH)
    if a == b:
        return a, (a, b)
    delta = ctx.mpf(BRACKET_WIDTH) / 4
    try:
        x = ctx.re(ctx.findroot(f, (a, b), solver="secant", verify=False, tol=ctx.mpf(10) ** (-30)))
        if a <= x <= b and f(x - delta) * f(x + delta) <= 0:
            return x, (x - delta, x + delta)
        logger.debug(f"secant left the bracket [{ctx.nstr(a, 12)}, {ctx.nstr(b, 12)}], bisecting")
    except (ZeroDivisionError, ValueError) as e:
        logger.debug(f"secant step failed on [{ctx.nstr(a, 12)}, {ctx.nstr(b, 12)}]: {e}")
    a, b, _ = bisect(f, a, b, fa, BRACKET_WIDTH / 2)
    return (a + b) / 2, (a, b)
