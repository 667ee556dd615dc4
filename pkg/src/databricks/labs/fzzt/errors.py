"""Exception hierarchy shared by every module.

Each concrete error names the module it belongs to, so that the command-line front end can
emit module-qualified codes such as ``xi-function.RouteDomainError``. Errors fall into three
categories, which map onto process exit statuses in :mod:`databricks.labs.fzzt.cli`.
"""

from typing import Any, ClassVar


class FzztError(Exception):
    module: ClassVar[str] = "fzzt"
    category: ClassVar[str] = "error"

    @property
    def code(self) -> str:
        return f"{self.module}.{type(self).__name__}"


class ConfigError(FzztError):
    module = "cli"
    category = "config"


class NumericalError(FzztError):
    category = "numerical"


class DomainError(FzztError, ValueError):
    category = "domain"


# numeric-core


class PrecisionError(DomainError):
    module = "numeric-core"


class LogOfZeroConstantTerm(DomainError):
    module = "numeric-core"


class ComposeNonzeroConstantTerm(DomainError):
    module = "numeric-core"


class OrderMismatch(DomainError):
    module = "numeric-core"


class OrderOverflow(DomainError):
    module = "numeric-core"


class NonConvergence(NumericalError):
    """Raised when an adaptive scheme stops before meeting its tolerance.

    The best value reached so far and its error estimate are kept, so callers can decide
    whether a looser answer is still useful."""

    module = "numeric-core"

    def __init__(self, message: str, *, best: Any = None, estimate: Any = None):
        super().__init__(message)
        self.best = best
        self.estimate = estimate


class IntegrandEvaluationFailure(NumericalError):
    module = "numeric-core"

    def __init__(self, message: str, *, node: Any = None):
        super().__init__(message)
        self.node = node


class WindowTooSmall(NumericalError):
    module = "numeric-core"


# theta-kernel


class KernelDomainError(DomainError):
    module = "theta-kernel"


class TailBudgetTooLoose(NumericalError):
    module = "theta-kernel"


# xi-function


class RouteDomainError(DomainError):
    module = "xi-function"


class SeriesTruncationError(NumericalError):
    module = "xi-function"

    def __init__(self, message: str, *, estimate: Any = None):
        super().__init__(message)
        self.estimate = estimate


class NearZeroSingularity(DomainError):
    module = "xi-function"


# airy


class ContourDivergence(DomainError):
    module = "airy"


# fzzt-matrix


class ConfluenceUnstable(NumericalError):
    module = "fzzt-matrix"


# pq-model


class NonDecayingTruncation(DomainError):
    module = "pq-model"


# arithmetic-bridge


class LoopDomainError(DomainError):
    module = "arithmetic-bridge"


class RangeError(DomainError):
    module = "arithmetic-bridge"


class ConvergenceDomainError(DomainError):
    module = "arithmetic-bridge"


# recip-gamma


class PoleAtZero(DomainError):
    module = "recip-gamma"


# ensemble-mc


class EnsembleSizeError(DomainError):
    module = "ensemble-mc"


class SingularResolvent(DomainError):
    module = "ensemble-mc"


class NonMonotoneRegion(DomainError):
    module = "ensemble-mc"


class InsufficientSamples(NumericalError):
    module = "ensemble-mc"


# cli


class UnknownKey(ConfigError):
    def __init__(self, key: str):
        super().__init__(f"unknown configuration key: {key}")
        self.key = key


class ConfigTypeError(ConfigError, TypeError):
    pass


class ConfigValueError(ConfigError, ValueError):
    pass


class MissingFile(ConfigError):
    pass


class UnsupportedFormat(ConfigError):
    def __init__(self, version: Any):
        super().__init__(f"unsupported zero list format_version: {version!r}")
        self.version = version
