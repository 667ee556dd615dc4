import dataclasses
import json
import logging
import types
import typing
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Literal

from databricks.labs.fzzt.errors import ConfigTypeError, ConfigValueError, MissingFile, UnknownKey
from databricks.labs.fzzt.precision import MIN_DIGITS

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ZeroScanConfig:
    T: float = 100.0
    step: float = 0.05


@dataclass(frozen=True)
class OutputConfig:
    format: Literal["csv", "json"] = "csv"
    path: str | None = None


@dataclass(frozen=True)
class RunConfig:
    precision_digits: int = 50
    quadrature_tol: float = 1e-30
    theta_window: float = 3.5
    theta_tail_margin: int = 20
    zero_scan: ZeroScanConfig = field(default_factory=ZeroScanConfig)
    output: OutputConfig = field(default_factory=OutputConfig)
    seed: int = 20240101
    zero_cache: str | None = None
    log_level: str = "INFO"

    def __post_init__(self):
        if self.precision_digits < MIN_DIGITS:
            msg = f"precision_digits must be at least {MIN_DIGITS}, got {self.precision_digits}"
            raise ConfigValueError(msg)
        for name, value in (
            ("quadrature_tol", self.quadrature_tol),
            ("theta_window", self.theta_window),
            ("zero_scan.T", self.zero_scan.T),
            ("zero_scan.step", self.zero_scan.step),
        ):
            if value <= 0:
                msg = f"{name} must be positive, got {value}"
                raise ConfigValueError(msg)
        if self.theta_tail_margin < 0:
            msg = f"theta_tail_margin must not be negative, got {self.theta_tail_margin}"
            raise ConfigValueError(msg)
        if self.output.format not in {"csv", "json"}:
            msg = f"output.format must be csv or json, got {self.output.format}"
            raise ConfigValueError(msg)

    def as_dict(self) -> dict[str, Any]:
        return dataclasses.asdict(self)


def _flatten(raw: dict[str, Any], prefix: str = "") -> dict[str, Any]:
    out = {}
    for key, value in raw.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            out.update(_flatten(value, f"{name}."))
        else:
            out[name] = value
    return out


def _read_file(path: Path) -> dict[str, Any]:
    if not path.exists():
        msg = f"configuration file not found: {path}"
        raise MissingFile(msg)
    text = path.read_text(encoding="utf-8")
    if text.lstrip().startswith("{"):
        try:
            return _flatten(json.loads(text))
        except json.JSONDecodeError as e:
            msg = f"{path}: malformed JSON: {e}"
            raise ConfigValueError(msg) from None
    values: dict[str, Any] = {}
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            msg = f"{path}:{number}: expected key=value, got {line!r}"
            raise ConfigValueError(msg)
        key, value = (part.strip() for part in line.split("=", 1))
        values[key] = value
    return values


def _fields(klass: type, prefix: str = "") -> dict[str, type]:
    hints = typing.get_type_hints(klass)
    out = {}
    for f in dataclasses.fields(klass):
        field_type = hints[f.name]
        if dataclasses.is_dataclass(field_type):
            out.update(_fields(field_type, f"{prefix}{f.name}."))
        else:
            out[f"{prefix}{f.name}"] = field_type
    return out


def _coerce(key: str, value: Any, field_type: Any) -> Any:
    """Converts strings from key=value files and flags; JSON values must already have the right type."""
    optional = isinstance(field_type, types.UnionType) or typing.get_origin(field_type) is typing.Union
    if optional:
        if value is None or (isinstance(value, str) and value.lower() in {"", "none", "null"}):
            return None
        field_type = next(arg for arg in typing.get_args(field_type) if arg is not type(None))
    if typing.get_origin(field_type) is Literal:
        if value not in typing.get_args(field_type):
            msg = f"{key}: expected one of {typing.get_args(field_type)}, got {value!r}"
            raise ConfigValueError(msg)
        return value
    if isinstance(value, str) and field_type is not str:
        try:
            return field_type(value)
        except ValueError:
            msg = f"{key}: cannot read {value!r} as {field_type.__name__}"
            raise ConfigTypeError(msg) from None
    if field_type is float and isinstance(value, int) and not isinstance(value, bool):
        return float(value)
    if not isinstance(value, field_type) or (field_type is int and isinstance(value, bool)):
        msg = f"{key}: expected {field_type.__name__}, got {type(value).__name__}"
        raise ConfigTypeError(msg)
    return value


def parse_config(path: str | Path | None = None, overrides: dict[str, Any] | None = None) -> RunConfig:
    """Defaults, then the file (JSON or key=value lines), then ``overrides`` with dotted keys."""
    known = _fields(RunConfig)
    values: dict[str, Any] = {}
    sources = []
    if path is not None:
        sources.append(_read_file(Path(path)))
    sources.append({k: v for k, v in (overrides or {}).items() if v is not None})
    for source in sources:
        for key, value in source.items():
            if key not in known:
                raise UnknownKey(key)
            values[key] = _coerce(key, value, known[key])
    nested: dict[str, dict[str, Any]] = {"zero_scan": {}, "output": {}}
    top: dict[str, Any] = {}
    for key, value in values.items():
        head, _, tail = key.partition(".")
        if tail:
            nested[head][tail] = value
        else:
            top[key] = value
    config = RunConfig(**top, zero_scan=ZeroScanConfig(**nested["zero_scan"]), output=OutputConfig(**nested["output"]))
    logger.debug(f"effective configuration: {config.as_dict()}")
    return config
