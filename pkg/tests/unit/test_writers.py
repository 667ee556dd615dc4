import io
import json
import re
from dataclasses import dataclass

import pytest

from databricks.labs.fzzt.writers import FileWriter, MockWriter


@dataclass
class Foo:
    first: str
    second: bool


@dataclass
class Point:
    z: str
    value: str
    error: float | None = None


@dataclass
class DummyClass:
    key: str
    value: str | None = None


@dataclass
class Unsupported:
    items: list


def test_mock_writer_save_rows():
    writer = MockWriter()

    writer.save_rows("foo", [Foo("aaa", True), Foo("bbb", False)], Foo)

    assert writer.rows_written_for("foo") == [Foo("aaa", True), Foo("bbb", False)]
    assert writer.rows_written_for("bar") == []


def test_required_field_missing():
    rows = [DummyClass("1", "test"), DummyClass("2", None), DummyClass(None, "value")]

    with pytest.raises(ValueError, match=re.escape("required field key is None in DummyClass row {'key': None")):
        MockWriter().save_rows("dummy", rows, DummyClass)


def test_unsupported_column_type():
    with pytest.raises(TypeError, match="Cannot auto-convert"):
        MockWriter().save_rows("bad", [Unsupported([1])], Unsupported)


def test_csv_to_stdout_keeps_digits_and_quotes():
    stdout, stderr = io.StringIO(), io.StringIO()
    writer = FileWriter(None, "csv", stdout=stdout, stderr=stderr)

    writer.save_rows("xi", [Point("0", "0.49712077818831410991", None), Point("1,5", "-0.1", 1e-30)], Point)
    writer.save_manifest({"command": "xi eval", "status": "ok"})

    assert stdout.getvalue() == 'z,value,error\r\n0,0.49712077818831410991,\r\n"1,5",-0.1,1e-30\r\n'
    assert json.loads(stderr.getvalue()) == {"command": "xi eval", "status": "ok"}
    assert writer.written == []


def test_json_artifact_with_manifest(tmp_path):
    target = tmp_path / "out" / "xi.json"
    writer = FileWriter(target, "json")

    writer.save_rows("xi", [Point("0", "0.5")], Point)
    writer.save_manifest({"status": "ok"})

    document = json.loads(target.read_text())
    assert document["artifact"] == "xi"
    assert document["columns"][2] == {"name": "error", "type": "number", "nullable": True}
    assert document["rows"] == [{"z": "0", "value": "0.5", "error": None}]
    manifest = tmp_path / "out" / "xi.json.manifest.json"
    assert json.loads(manifest.read_text()) == {"status": "ok"}
    assert writer.written == [str(target), str(manifest)]


def test_unknown_format():
    with pytest.raises(ValueError):
        FileWriter(None, "parquet", stdout=io.StringIO()).save_rows("foo", [Foo("a", True)], Foo)
