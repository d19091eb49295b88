import json
import re
from dataclasses import replace
from xml.etree import ElementTree

import numpy
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ybcav import Map2D, RunConfig, extract_contour, parse_config, read_map_csv, render_config, render_heatmap
from ybcav import cli
from ybcav.represent.sweep import TASKS
from ybcav.utils.errors import ConfigError, GainNotConvergedError
from ybcav.utils.export import export_map
from ybcav.utils.plot import PlotTransform, contour_path

SVG = "{http://www.w3.org/2000/svg}"


@pytest.fixture
def small_map():
    return Map2D(
        x=numpy.array([-1.0, 1.0]),
        y=numpy.array([-31.0, -29.0]),
        values=numpy.array([[0.0, 1.0], [1.0, 0.0]]),
        metadata={
            "grid": {"nx": 2, "ny": 2},
            "version": "0.1.0",
            "errors": [{"ix": 0, "iy": 1, "message": "NumericalError: stuck"}],
        },
    )


def _cell_fills(svg: str) -> list[str]:
    root = ElementTree.fromstring(svg.encode("utf-8"))
    cells = next(g for g in root.iter(f"{SVG}g") if g.get("id") == "cells")
    return [rect.get("fill") for rect in cells.iter(f"{SVG}rect")]


def test_empty_config_is_default():
    cfg = parse_config("")
    assert cfg == RunConfig()

    op = cfg.operating_point()
    assert op.omega_mot == 19.0
    assert op.omega_pump == 1.5
    assert op.delta_pump == 2.8


def test_config_powers_and_comments():
    cfg = parse_config("# MOT beam\np_mot_mw = 20   # full power\n\nnx = 4\ncoherent_pump = true\n")
    assert cfg.omega_mot() == pytest.approx(19.0, rel=1e-12)
    assert cfg.nx == 4
    assert cfg.coherent_pump
    assert cfg.sim_config().coherent_pump
    assert cfg.grid_spec().nx == 4

    cfg = parse_config("pump_model = one-way\n")
    assert cfg.operating_point().pump_model == "one-way"
    assert cfg.grid_spec().base.pump_model == "one-way"


@pytest.mark.parametrize(
    "text, line",
    [
        ("delta_mot_mhz = -30\ndelta_mot_mhz = -25\n", 2),
        ("kappa_mhz = 0.07\nlaser = on\n", 2),
        ("omega_pump_mhz = 1.5\np_pump_mw = 5.7\n", 2),
        ("nx = ten\n", 1),
        ("coherent_pump = yes\n", 1),
        ("delta_pump_mhz = nan\n", 1),
        ("\n\nnx 10\n", 3),
    ],
)
def test_config_errors(text, line):
    with pytest.raises(ConfigError) as e:
        parse_config(text)
    assert e.value.line == line
    assert f"line {line}" in str(e.value)


def test_config_records_validate():
    with pytest.raises(ConfigError):
        parse_config("kappa_mhz = -1\n")

    with pytest.raises(ConfigError):
        parse_config("task = colour\n")

    with pytest.raises(ConfigError):
        parse_config("pump_model = coherent\n")

    with pytest.raises(ConfigError):
        RunConfig(omega_mot_mhz=19.0, p_mot_mw=20.0)


def test_render_default_round_trip():
    cfg = RunConfig(omega_pump_mhz=1.2, checkpoint="run.ckpt", task="gain")
    assert parse_config(render_config(cfg)) == cfg


@given(
    st.floats(min_value=-100.0, max_value=100.0),
    st.floats(min_value=-100.0, max_value=100.0),
    st.floats(min_value=0.0, max_value=10.0),
    st.integers(min_value=0, max_value=2**31),
    st.booleans(),
    st.sampled_from(TASKS),
)
def test_render_round_trip(delta_pump, delta_cavity, p_pump, rng_seed, coherent, task):
    cfg = RunConfig(
        delta_pump_mhz=delta_pump,
        delta_cavity_mhz=delta_cavity,
        p_pump_mw=p_pump,
        rng_seed=rng_seed,
        coherent_pump=coherent,
        task=task,
    )
    assert parse_config(render_config(cfg)) == cfg


def test_export_layout(small_map, tmp_path):
    values = small_map.values.copy()
    values[1, 0] = numpy.nan
    map2d = replace(small_map, values=values)

    csv_path, meta_path = export_map(map2d, tmp_path / "map")
    assert csv_path.name == "map.csv"
    assert meta_path.name == "map.meta.jsonl"

    rows = [line.split(",") for line in csv_path.read_text(encoding="utf-8").splitlines()]
    assert len(rows) == 3
    assert all(len(row) == 3 for row in rows)
    assert rows[0][0] == ""
    assert [float(v) for v in rows[0][1:]] == [-1.0, 1.0]
    assert [float(row[0]) for row in rows[1:]] == [-31.0, -29.0]
    # x = 1, y = −31
    assert rows[1][2] == ""

    records = [json.loads(line) for line in meta_path.read_text(encoding="utf-8").splitlines()]
    assert records[0]["record"] == "map"
    assert {r["record"] for r in records} >= {"grid", "version", "error"}
    [error] = [r for r in records if r["record"] == "error"]
    assert (error["ix"], error["iy"]) == (0, 1)


def test_export_round_trip(small_map, tmp_path):
    values = numpy.random.default_rng(3).normal(size=(2, 2)) * 1e-3
    values[0, 0] = numpy.nan
    map2d = replace(small_map, values=values)

    csv_path, _ = export_map(map2d, tmp_path / "map")
    x, y, read = read_map_csv(csv_path)

    assert numpy.array_equal(x, map2d.x)
    assert numpy.array_equal(y, map2d.y)
    assert numpy.array_equal(read, values, equal_nan=True)


def test_svg_fills(small_map):
    svg = render_heatmap(small_map)
    assert svg.startswith('<?xml version="1.0"')
    assert set(_cell_fills(svg)) == {"#00008b", "#8b0000"}

    uniform = replace(small_map, values=numpy.full((2, 2), 0.7))
    assert set(_cell_fills(render_heatmap(uniform))) == {"#00008b"}

    blank = replace(small_map, values=numpy.full((2, 2), numpy.nan))
    svg = render_heatmap(blank, title="Δ <map>")
    assert "no data" in svg
    assert set(_cell_fills(svg)) == {"#d3d3d3"}
    assert "Δ &lt;map&gt;" in svg


def test_svg_contours():
    values = numpy.zeros((3, 3))
    values[1, 1] = 1.0
    map2d = Map2D(x=numpy.array([0.0, 1.0, 2.0]), y=numpy.array([-31.0, -30.0, -29.0]), values=values)

    contours = extract_contour(map2d)
    svg = render_heatmap(map2d, contours=contours)
    transform = PlotTransform.for_map(map2d)

    paths = re.findall(r'<path d="([^"]+)"/>', svg)
    assert paths == [contour_path(contours[0], transform)]

    px, py = transform(*contours[0][0])
    assert paths[0].startswith(f"M {px:.3f},{py:.3f}")

    # corners of the plot area sit half a spacing beyond the outer samples
    assert transform(-0.5, -28.5) == pytest.approx((transform.left, transform.top))


def test_cli_params(capsys):
    assert cli.main(["params"]) == cli.EXIT_OK
    assert "c1" in capsys.readouterr().out


def test_cli_config_errors(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("laser = on\n", encoding="utf-8")
    assert cli.main(["params", "--config", str(bad)]) == cli.EXIT_CONFIG
    assert cli.main(["params", "--config", str(tmp_path / "missing.cfg")]) == cli.EXIT_CONFIG
    assert cli.main(["params", "--workers", "0"]) == cli.EXIT_CONFIG


def test_cli_numerical_error(monkeypatch):
    def stuck(op):
        raise GainNotConvergedError([1.0, 2.0])

    monkeypatch.setattr(cli, "small_signal_gain", stuck)
    assert cli.main(["gain"]) == cli.EXIT_NUMERICAL


def test_cli_threshold_map(tmp_path):
    config = tmp_path / "dark.cfg"
    config.write_text("omega_pump_mhz = 0\nnx = 2\nny = 2\n", encoding="utf-8")

    outputs = []
    for run in ("a", "b"):
        base = tmp_path / run
        argv = ["threshold-map", "--config", str(config), "--out", str(base), "--svg"]
        assert cli.main(argv) == cli.EXIT_OK
        assert (tmp_path / f"{run}.meta.jsonl").exists()
        assert (tmp_path / f"{run}.svg").exists()
        outputs.append((tmp_path / f"{run}.csv").read_bytes())

    assert outputs[0] == outputs[1]


def test_cli_resume(tmp_path):
    config = tmp_path / "dark.cfg"
    config.write_text("omega_pump_mhz = 0\nnx = 2\nny = 2\n", encoding="utf-8")
    checkpoint = tmp_path / "dark.ckpt"
    argv = ["threshold-map", "--config", str(config), "--out", str(tmp_path / "dark")]
    argv += ["--resume", str(checkpoint)]

    assert cli.main(argv) == cli.EXIT_OK
    lines = checkpoint.read_text(encoding="utf-8").splitlines()
    assert len(lines) == 1 + 4

    # a record cut short by an interrupted write is computed again
    checkpoint.write_text("\n".join(lines[:3]) + "\n" + lines[3][:2], encoding="utf-8")
    assert cli.main(argv) == cli.EXIT_OK
    assert checkpoint.read_text(encoding="utf-8").splitlines() == lines

    checkpoint.write_text("\n".join(lines[:3] + ["0,zero,1.0"]) + "\n", encoding="utf-8")
    assert cli.main(argv) == cli.EXIT_CONFIG
