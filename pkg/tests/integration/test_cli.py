import pytest

from databricks.labs.fzzt.cli import EXIT_OK, run_command
from databricks.labs.fzzt.writers import MockWriter


def interior_minima(rows) -> list[float]:
    xs = [float(r.x) for r in rows]
    magnitudes = [float(r.magnitude) for r in rows]
    return [
        xs[i]
        for i in range(1, len(rows) - 1)
        if magnitudes[i] < magnitudes[i - 1] and magnitudes[i] <= magnitudes[i + 1]
    ]


def run(*argv: str) -> MockWriter:
    writer = MockWriter()
    assert run_command(argv, writer=writer) == EXIT_OK
    return writer


@pytest.mark.parametrize(
    "grid, zeros, step",
    [
        (("xi", "grid", "--from", "0", "--to", "30", "--points", "601"), ("xi", "zeros", "--T", "30"), 0.05),
        (("airy", "grid", "--from", "-10", "--to", "0", "--points", "201"), ("airy", "zeros", "--count", "6"), 0.05),
    ],
)
def test_grid_minima_sit_on_the_zeros(grid, zeros, step):
    rows = run(*grid, "--digits", "30").rows_written_for(f"{grid[0]}_grid")
    found = [float(r.zero) for r in run(*zeros, "--digits", "30").rows_written_for(f"{zeros[0]}_zeros")]
    minima = interior_minima(rows)
    assert len(minima) == len(found)
    for x, zero in zip(sorted(minima), sorted(found)):
        assert abs(x - zero) <= step + 1e-9


def test_zero_cache_is_reused(tmp_path, mocker):
    cache = str(tmp_path / "zeros.json")
    run("xi", "zeros", "--T", "30", "--digits", "30", "--zero-cache", cache)
    scan = mocker.patch("databricks.labs.fzzt.cache.find_zeros")
    writer = run("xi", "zeros", "--T", "26", "--digits", "30", "--zero-cache", cache)
    scan.assert_not_called()
    assert len(writer.rows_written_for("xi_zeros")) == 3
