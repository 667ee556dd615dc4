import json

import pytest

from databricks.labs.fzzt.config import RunConfig, parse_config
from databricks.labs.fzzt.errors import ConfigTypeError, ConfigValueError, MissingFile, UnknownKey


def test_defaults():
    config = parse_config()
    assert config == RunConfig()
    assert config.precision_digits == 50
    assert config.zero_scan.T == 100.0
    assert config.output.format == "csv"
    assert config.zero_cache is None


def test_key_value_file_with_comments(tmp_path):
    path = tmp_path / "run.conf"
    path.write_text(
        "# working precision\nprecision_digits = 40\nzero_scan.T=50  # shorter scan\n\nzero_cache = none\n"
    )
    config = parse_config(path)
    assert config.precision_digits == 40
    assert config.zero_scan.T == 50.0
    assert config.zero_scan.step == 0.05
    assert config.zero_cache is None


def test_json_file_with_nested_sections(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"seed": 7, "output": {"format": "json", "path": "out.json"}, "theta_window": 4}))
    config = parse_config(path)
    assert config.seed == 7
    assert config.output.format == "json"
    assert config.output.path == "out.json"
    assert config.theta_window == 4.0


def test_overrides_win_over_the_file(tmp_path):
    path = tmp_path / "run.conf"
    path.write_text("precision_digits = 40\nseed = 3\n")
    config = parse_config(path, {"precision_digits": 60, "seed": None, "output.format": "json"})
    assert config.precision_digits == 60
    assert config.seed == 3
    assert config.output.format == "json"


def test_unknown_key(tmp_path):
    path = tmp_path / "run.conf"
    path.write_text("precision = 40\n")
    with pytest.raises(UnknownKey):
        parse_config(path)


@pytest.mark.parametrize(
    "overrides, error",
    [
        ({"precision_digits": "many"}, ConfigTypeError),
        ({"seed": 1.5}, ConfigTypeError),
        ({"precision_digits": True}, ConfigTypeError),
        ({"precision_digits": 20}, ConfigValueError),
        ({"quadrature_tol": 0.0}, ConfigValueError),
        ({"theta_tail_margin": -1}, ConfigValueError),
        ({"output.format": "xml"}, ConfigValueError),
    ],
)
def test_invalid_values(overrides, error):
    with pytest.raises(error):
        parse_config(overrides=overrides)


def test_missing_file(tmp_path):
    with pytest.raises(MissingFile):
        parse_config(tmp_path / "absent.conf")


def test_malformed_lines(tmp_path):
    path = tmp_path / "run.conf"
    path.write_text("precision_digits 40\n")
    with pytest.raises(ConfigValueError):
        parse_config(path)
    path.write_text("{not json")
    with pytest.raises(ConfigValueError):
        parse_config(path)


def test_as_dict_is_nested():
    assert RunConfig().as_dict()["zero_scan"] == {"T": 100.0, "step": 0.05}
