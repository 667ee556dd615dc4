import csv
import dataclasses
import io
import json
import logging
import sys
from abc import ABC, abstractmethod
from collections.abc import Sequence
from pathlib import Path
from types import UnionType
from typing import Any, ClassVar, Protocol, TextIO

logger = logging.getLogger(__name__)


class DataclassInstance(Protocol):
    __dataclass_fields__: ClassVar[dict]


Dataclass = type[DataclassInstance]


class ArtifactWriter(ABC):
    """Destination for the tables a command produces, and for the run manifest beside them.

    Rows are dataclass instances whose fields are ``str``, ``int``, ``float`` or ``bool``,
    optionally ``| None``. High-precision numbers travel as decimal strings so that nothing is
    rounded on the way out."""

    @abstractmethod
    def save_rows(self, name: str, rows: Sequence[DataclassInstance], klass: Dataclass) -> None:
        raise NotImplementedError

    @abstractmethod
    def save_manifest(self, manifest: dict[str, Any]) -> None:
        raise NotImplementedError

    _builtin_type_mapping: ClassVar[dict[type, str]] = {
        str: "string",
        int: "integer",
        bool: "boolean",
        float: "number",
    }

    @classmethod
    def _columns_for(cls, klass: Dataclass) -> list[tuple[str, str, bool]]:
        columns = []
        for f in dataclasses.fields(klass):
            field_type = f.type
            nullable = False
            if isinstance(field_type, UnionType):
                nullable = type(None) in field_type.__args__
                field_type = field_type.__args__[0]
            if field_type not in cls._builtin_type_mapping:
                msg = f"Cannot auto-convert {field_type}"
                raise TypeError(msg)
            columns.append((f.name, cls._builtin_type_mapping[field_type], nullable or f.default is None))
        return columns

    @classmethod
    def _filter_none_rows(cls, rows, klass):
        if len(rows) == 0:
            return rows

        results = []
        class_fields = dataclasses.fields(klass)
        for row in rows:
            if row is None:
                continue
            for field in class_fields:
                if field.default is not None and getattr(row, field.name) is None:
                    msg = f"required field {field.name} is None in {klass.__name__} row {dataclasses.asdict(row)}"
                    raise ValueError(msg)
            results.append(row)
        return results


class FileWriter(ArtifactWriter):
    """Writes one artifact per command as RFC-4180 CSV or a JSON document.

    With ``path=None`` the artifact goes to ``stdout`` and the manifest to ``stderr`` as a
    single JSON line; otherwise the manifest lands next to the artifact as
    ``<artifact>.manifest.json``."""

    def __init__(self, path: str | Path | None, fmt: str = "csv", *, stdout: TextIO | None = None, stderr=None):
        self._path = None if path is None else Path(path)
        self._format = fmt
        self._stdout = stdout
        self._stderr = stderr
        self.written: list[str] = []

    @property
    def path(self) -> Path | None:
        return self._path

    def save_rows(self, name: str, rows: Sequence[DataclassInstance], klass: Dataclass) -> None:
        rows = self._filter_none_rows(rows, klass)
        columns = self._columns_for(klass)
        match self._format:
            case "csv":
                text = self._csv(columns, rows)
            case "json":
                text = self._json(name, columns, rows)
            case _:
                msg = f"unknown artifact format: {self._format}"
                raise ValueError(msg)
        if self._path is None:
            (self._stdout or sys.stdout).write(text)
            logger.debug(f"wrote {len(rows)} row(s) of {name} to stdout")
            return
        self._path.parent.mkdir(parents=True, exist_ok=True)
        self._path.write_text(text, encoding="utf-8", newline="")
        self.written.append(str(self._path))
        logger.info(f"Wrote {len(rows)} row(s) of {name} to {self._path}")

    @staticmethod
    def _csv(columns: list[tuple[str, str, bool]], rows: Sequence[DataclassInstance]) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\r\n", quoting=csv.QUOTE_MINIMAL)
        names = [name for name, _, _ in columns]
        writer.writerow(names)
        for row in rows:
            writer.writerow(["" if getattr(row, n) is None else getattr(row, n) for n in names])
        return buffer.getvalue()

    @staticmethod
    def _json(name: str, columns: list[tuple[str, str, bool]], rows: Sequence[DataclassInstance]) -> str:
        document = {
            "artifact": name,
            "columns": [{"name": n, "type": t, "nullable": nullable} for n, t, nullable in columns],
            "rows": [dataclasses.asdict(row) for row in rows],
        }
        return json.dumps(document, ensure_ascii=False, indent=2) + "\n"

    def save_manifest(self, manifest: dict[str, Any]) -> None:
        if self._path is None:
            line = json.dumps(manifest, ensure_ascii=False, sort_keys=True)
            (self._stderr or sys.stderr).write(line + "\n")
            return
        target = self._path.with_name(f"{self._path.name}.manifest.json")
        target.write_text(json.dumps(manifest, ensure_ascii=False, indent=2, sort_keys=True), encoding="utf-8")
        self.written.append(str(target))
        logger.debug(f"run manifest written to {target}")


class MockWriter(ArtifactWriter):
    def __init__(self):
        self._saved: list[tuple[str, Sequence[DataclassInstance]]] = []
        self.manifests: list[dict[str, Any]] = []

    def save_rows(self, name: str, rows: Sequence[DataclassInstance], klass: Dataclass) -> None:
        rows = self._filter_none_rows(rows, klass)
        self._columns_for(klass)
        logger.debug(f"Mock writer received {len(rows)} row(s) for {name}")
        self._saved.append((name, list(rows)))

    def save_manifest(self, manifest: dict[str, Any]) -> None:
        self.manifests.append(manifest)

    def rows_written_for(self, name: str) -> list[DataclassInstance]:
        rows: list[DataclassInstance] = []
        for stub_name, stub_rows in self._saved:
            if stub_name != name:
                continue
            rows += stub_rows
        return rows
