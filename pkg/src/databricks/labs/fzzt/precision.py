import logging
import operator
import threading
from collections.abc import Callable
from dataclasses import dataclass
from typing import Any, Union

import mpmath

from databricks.labs.fzzt.errors import DomainError, PrecisionError

logger = logging.getLogger(__name__)

MIN_DIGITS = 30
DEFAULT_DIGITS = 50

_local = threading.local()


def context_for(digits: int) -> mpmath.MPContext:
    """Returns the calling thread's mpmath context for the given digit budget.

    mpmath contexts raise and restore their own precision inside quadrature and special
    functions, so a context is never shared between threads."""
    contexts: dict[int, mpmath.MPContext] | None = getattr(_local, "contexts", None)
    if contexts is None:
        contexts = {}
        _local.contexts = contexts
    ctx = contexts.get(digits)
    if ctx is None:
        ctx = mpmath.MPContext()
        ctx.dps = digits
        contexts[digits] = ctx
        logger.debug(f"Created working context at {digits} digits for {threading.current_thread().name}")
    return ctx


@dataclass(frozen=True)
class PrecisionScalar:
    value: Any
    digits: int

    def __post_init__(self):
        if self.digits < MIN_DIGITS:
            msg = f"precision budget must be at least {MIN_DIGITS} digits, got {self.digits}"
            raise PrecisionError(msg)

    def _combine(self, other: Any, op: Callable[[Any, Any], Any], *, swap: bool = False) -> "PrecisionNumber":
        digits = self.digits
        if isinstance(other, PrecisionScalar):
            digits = max(digits, other.digits)
            other = other.value
        ctx = context_for(digits)
        left, right = ctx.convert(self.value), ctx.convert(other)
        if swap:
            left, right = right, left
        return _wrap(op(left, right), digits)

    def __add__(self, other):
        return self._combine(other, operator.add)

    def __radd__(self, other):
        return self._combine(other, operator.add, swap=True)

    def __sub__(self, other):
        return self._combine(other, operator.sub)

    def __rsub__(self, other):
        return self._combine(other, operator.sub, swap=True)

    def __mul__(self, other):
        return self._combine(other, operator.mul)

    def __rmul__(self, other):
        return self._combine(other, operator.mul, swap=True)

    def __truediv__(self, other):
        return self._combine(other, operator.truediv)

    def __rtruediv__(self, other):
        return self._combine(other, operator.truediv, swap=True)

    def __neg__(self):
        return _wrap(-context_for(self.digits).convert(self.value), self.digits)

    def __abs__(self) -> "PrecisionScalar":
        return PrecisionScalar(abs(context_for(self.digits).convert(self.value)), self.digits)

    def __lt__(self, other):
        return self._compare(other) < 0

    def __le__(self, other):
        return self._compare(other) <= 0

    def __gt__(self, other):
        return self._compare(other) > 0

    def __ge__(self, other):
        return self._compare(other) >= 0

    def _compare(self, other: Any) -> int:
        diff = self - other
        if isinstance(diff, PrecisionComplex):
            msg = "complex values are not ordered"
            raise TypeError(msg)
        if diff.value > 0:
            return 1
        if diff.value < 0:
            return -1
        return 0

    def __float__(self) -> float:
        return float(self.value)

    def __complex__(self) -> complex:
        return complex(self.value)

    def __str__(self) -> str:
        return context_for(self.digits).nstr(self.value, self.digits)


@dataclass(frozen=True)
class PrecisionComplex(PrecisionScalar):
    @property
    def real(self) -> PrecisionScalar:
        return PrecisionScalar(context_for(self.digits).convert(self.value).real, self.digits)

    @property
    def imag(self) -> PrecisionScalar:
        return PrecisionScalar(context_for(self.digits).convert(self.value).imag, self.digits)

    def __float__(self) -> float:
        raise TypeError("cannot convert a complex value to float")


PrecisionNumber = Union[PrecisionScalar, PrecisionComplex]


def _wrap(value: Any, digits: int) -> PrecisionNumber:
    if isinstance(value, mpmath.mpc) or hasattr(value, "_mpc_"):
        return PrecisionComplex(value, digits)
    return PrecisionScalar(value, digits)


class Numerics:
    """Working-precision handle passed to every evaluator.

    A handle is immutable and may be shared freely; the mpmath context behind it is looked up
    per thread, so evaluators running in a thread pool never step on each other's precision.

    :param digits: int
        Working precision in decimal digits, at least 30.
    """

    def __init__(self, digits: int = DEFAULT_DIGITS):
        if digits < MIN_DIGITS:
            msg = f"precision budget must be at least {MIN_DIGITS} digits, got {digits}"
            raise PrecisionError(msg)
        self._digits = digits

    def __repr__(self):
        return f"Numerics(digits={self._digits})"

    @property
    def digits(self) -> int:
        return self._digits

    @property
    def ctx(self) -> mpmath.MPContext:
        return context_for(self._digits)

    @property
    def eps(self):
        return self.ctx.eps

    def guarded(self, extra: int) -> "Numerics":
        return Numerics(self._digits + extra)

    def tolerance(self, slack: int = 5):
        """10^-(digits - slack): the agreement level promised between independent routes."""
        return self.ctx.mpf(10) ** (slack - self._digits)

    def number(self, x: Any):
        if isinstance(x, PrecisionScalar):
            x = x.value
        if isinstance(x, complex) and x.imag == 0:
            x = x.real
        return self.ctx.convert(x)

    def real(self, x: Any):
        value = self.number(x)
        if isinstance(value, self.ctx.mpc):
            if value.imag != 0:
                msg = f"expected a real number, got {value}"
                raise DomainError(msg)
            value = value.real
        return value

    def complex(self, x: Any):
        return self.ctx.mpc(self.number(x))

    def is_real(self, x: Any) -> bool:
        value = self.number(x)
        return not isinstance(value, self.ctx.mpc) or value.imag == 0

    def scalar(self, x: Any) -> PrecisionScalar:
        return PrecisionScalar(self.real(x), self._digits)

    def wrap(self, x: Any) -> PrecisionNumber:
        return _wrap(self.number(x), self._digits)
