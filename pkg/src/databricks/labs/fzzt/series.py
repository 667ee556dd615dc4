"""Truncated formal power series with extended-precision coefficients.

Coefficients are kept as raw mpmath numbers at the series' digit budget; every operation
produces a result of the same declared order, so truncation is never silent."""

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from typing import Any, Literal

from databricks.labs.fzzt.errors import (
    ComposeNonzeroConstantTerm,
    LogOfZeroConstantTerm,
    OrderMismatch,
    OrderOverflow,
)
from databricks.labs.fzzt.precision import Numerics, PrecisionNumber, _wrap, context_for

logger = logging.getLogger(__name__)

MAX_ORDER = 64

SeriesKind = Literal["add", "mul", "exp", "log", "compose", "differentiate"]


@dataclass(frozen=True)
class PowerSeries:
    coeffs: tuple[Any, ...]
    digits: int

    def __post_init__(self):
        if not self.coeffs:
            raise OrderMismatch("a power series needs at least the constant coefficient")
        if self.order > MAX_ORDER:
            msg = f"series order {self.order} exceeds the maximum of {MAX_ORDER}"
            raise OrderOverflow(msg)

    @classmethod
    def from_coefficients(cls, values: Iterable[Any], numerics: Numerics, order: int | None = None) -> "PowerSeries":
        ctx = numerics.ctx
        coeffs = [numerics.number(v) for v in values]
        if order is not None:
            if len(coeffs) > order + 1:
                msg = f"{len(coeffs)} coefficients do not fit into order {order}"
                raise OrderOverflow(msg)
            coeffs += [ctx.zero] * (order + 1 - len(coeffs))
        return cls(tuple(coeffs), numerics.digits)

    @classmethod
    def zero(cls, order: int, numerics: Numerics) -> "PowerSeries":
        return cls.from_coefficients([], numerics, order)

    @classmethod
    def exponential(cls, rate: Any, order: int, numerics: Numerics) -> "PowerSeries":
        """Taylor series of e^{rate·u} about u = 0."""
        ctx = numerics.ctx
        rate = numerics.number(rate)
        coeffs = [ctx.one]
        for k in range(1, order + 1):
            coeffs.append(coeffs[-1] * rate / k)
        return cls(tuple(coeffs), numerics.digits)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def ctx(self):
        return context_for(self.digits)

    def coefficient(self, k: int) -> PrecisionNumber:
        return _wrap(self.coeffs[k], self.digits)

    def evaluate(self, x: Any):
        ctx = self.ctx
        x = ctx.convert(x.value if hasattr(x, "digits") else x)
        total = ctx.zero
        for c in reversed(self.coeffs):
            total = total * x + c
        return total

    def truncate(self, order: int) -> "PowerSeries":
        if order > self.order:
            msg = f"cannot truncate order {self.order} up to {order}"
            raise OrderOverflow(msg)
        return PowerSeries(self.coeffs[: order + 1], self.digits)

    def scale(self, factor: Any) -> "PowerSeries":
        ctx = self.ctx
        factor = ctx.convert(factor)
        return PowerSeries(tuple(c * factor for c in self.coeffs), self.digits)

    def max_abs(self):
        ctx = self.ctx
        return max(abs(ctx.convert(c)) for c in self.coeffs)

    def __add__(self, other: "PowerSeries") -> "PowerSeries":
        return series_op("add", self, other)

    def __mul__(self, other: "PowerSeries") -> "PowerSeries":
        return series_op("mul", self, other)


def series_op(kind: SeriesKind, a: PowerSeries, b: PowerSeries | None = None) -> PowerSeries:
    """Applies one truncated-series operation.

    Binary kinds (add, mul, compose) need both operands at the same order; the result digit
    budget is the larger of the two."""
    if kind in {"add", "mul", "compose"}:
        if b is None:
            msg = f"{kind} needs a second operand"
            raise OrderMismatch(msg)
        if a.order != b.order:
            msg = f"{kind}: orders differ ({a.order} vs {b.order})"
            raise OrderMismatch(msg)
    digits = max(a.digits, b.digits) if b is not None else a.digits
    ctx = context_for(digits)
    left = [ctx.convert(c) for c in a.coeffs]
    right = [ctx.convert(c) for c in b.coeffs] if b is not None else []
    match kind:
        case "add":
            out = [x + y for x, y in zip(left, right)]
        case "mul":
            out = _mul(left, right, ctx)
        case "exp":
            out = _exp(left, ctx)
        case "log":
            out = _log(left, ctx)
        case "compose":
            out = _compose(left, right, ctx)
        case "differentiate":
            out = [k * left[k] for k in range(1, len(left))] or [ctx.zero]
        case _:
            msg = f"unknown series operation: {kind}"
            raise ValueError(msg)
    return PowerSeries(tuple(out), digits)


def _mul(a: Sequence[Any], b: Sequence[Any], ctx) -> list[Any]:
    n = len(a)
    out = [ctx.zero] * n
    for i, x in enumerate(a):
        if not x:
            continue
        for j in range(n - i):
            out[i + j] += x * b[j]
    return out


def _exp(a: Sequence[Any], ctx) -> list[Any]:
    # E' = A'E, with the constant term pulled out as a scalar factor
    out = [ctx.exp(a[0])]
    for k in range(1, len(a)):
        acc = ctx.zero
        for j in range(1, k + 1):
            acc += j * a[j] * out[k - j]
        out.append(acc / k)
    return out


def _log(a: Sequence[Any], ctx) -> list[Any]:
    if not a[0]:
        raise LogOfZeroConstantTerm("log needs a nonzero constant term")
    out = [ctx.log(a[0])]
    for k in range(1, len(a)):
        acc = ctx.zero
        for j in range(1, k):
            acc += j * out[j] * a[k - j]
        out.append((a[k] - acc / k) / a[0])
    return out


def _compose(a: Sequence[Any], b: Sequence[Any], ctx) -> list[Any]:
    if b[0]:
        raise ComposeNonzeroConstantTerm("inner series of a composition must have zero constant term")
    n = len(a)
    out = [ctx.zero] * n
    for c in reversed(a):
        out = _mul(out, b, ctx)
        out[0] += c
    return out
