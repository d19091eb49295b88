import numpy
import pytest

from ybcav import (
    MAP_CENTRE,
    GridSpec,
    Map2D,
    SimConfig,
    derived_params,
    dressed_states,
    extract_contour,
    region_stats,
    run_map,
    run_panels,
)
from ybcav.library.defaults import CAVITY_AXIS, PUMP_AXIS
from ybcav.represent import sweep
from ybcav.represent.contour import is_closed, polygon_centroid
from ybcav.utils.errors import CheckpointMismatchError, NumericalError


@pytest.fixture
def dark_grid():
    return GridSpec(-1.0, 1.0, 2, -31.0, -29.0, 2, base=MAP_CENTRE.but(omega_pump=0.0))


@pytest.fixture
def gain_grid():
    return GridSpec(2.0, 3.5, 3, -32.0, -28.0, 3, base=MAP_CENTRE, task="gain")


def _map(values):
    values = numpy.asarray(values, dtype=float)
    return Map2D(
        x=numpy.arange(values.shape[0], dtype=float),
        y=numpy.arange(values.shape[1], dtype=float),
        values=values,
    )


def test_grid_spec():
    grid = GridSpec(-4.0, 8.0, 4, -40.0, -20.0, 3, base=MAP_CENTRE)
    assert grid.x == pytest.approx([-4.0, 0.0, 4.0, 8.0])
    assert grid.y == pytest.approx([-40.0, -30.0, -20.0])

    op = grid.point(1, 2)
    assert op.delta_pump == 0.0
    assert op.delta_cavity == -20.0
    assert op.delta_mot == MAP_CENTRE.delta_mot

    assert grid.cells()[:5] == [(0, 0), (1, 0), (2, 0), (3, 0), (0, 1)]
    assert grid.signature() == GridSpec(-4.0, 8.0, 4, -40.0, -20.0, 3, base=MAP_CENTRE).signature()

    with pytest.raises(ValueError):
        GridSpec(0.0, 1.0, 1, 0.0, 1.0, 2)
    with pytest.raises(ValueError):
        GridSpec(1.0, 0.0, 2, 0.0, 1.0, 2)
    with pytest.raises(ValueError):
        GridSpec(0.0, 1.0, 2, 0.0, 1.0, 2, task="colour")


def test_cell_seed(gain_grid):
    assert sweep.cell_seed(gain_grid, 1, 2) == sweep.cell_seed(gain_grid, 1, 2)
    assert sweep.cell_seed(gain_grid, 1, 2) != sweep.cell_seed(gain_grid, 2, 1)


def test_dark_maps(dark_grid):
    threshold = run_map(dark_grid)
    assert threshold.shape == (2, 2)
    assert numpy.array_equal(threshold.values, numpy.zeros((2, 2)))
    assert threshold.metadata["errors"] == []
    assert threshold.metadata["resumed_cells"] == 0
    assert threshold.metadata["version"]

    frequency = run_map(GridSpec(-1.0, 1.0, 2, -31.0, -29.0, 2, base=dark_grid.base, task="frequency"))
    assert numpy.isnan(frequency.values).all()
    # below threshold is not a failure
    assert frequency.metadata["errors"] == []

    photons = run_map(GridSpec(-1.0, 1.0, 2, -31.0, -29.0, 2, base=dark_grid.base, task="photons"))
    assert numpy.array_equal(photons.values, numpy.zeros((2, 2)))


def test_parallel_matches_serial(gain_grid):
    serial = run_map(gain_grid, workers=1)
    parallel = run_map(gain_grid, workers=2)
    assert numpy.isfinite(serial.values).all()
    assert numpy.array_equal(serial.values, parallel.values)


def test_checkpoint_resume(gain_grid, tmp_path):
    path = tmp_path / "gain.ckpt"
    full = run_map(gain_grid, checkpoint_path=path)

    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0].startswith(sweep.CHECKPOINT_TAG)
    assert len(lines) == 1 + 9

    # interrupted after four cells
    path.write_text("\n".join(lines[:5]) + "\n", encoding="utf-8")
    resumed = run_map(gain_grid, checkpoint_path=path)

    assert resumed.metadata["resumed_cells"] == 4
    assert numpy.array_equal(full.values, resumed.values)
    assert len(path.read_text(encoding="utf-8").splitlines()) == 1 + 9

    other = GridSpec(2.0, 3.5, 4, -32.0, -28.0, 3, base=MAP_CENTRE, task="gain")
    with pytest.raises(CheckpointMismatchError):
        run_map(other, checkpoint_path=path)


def test_checkpoint_resume_after_torn_write(gain_grid, tmp_path):
    path = tmp_path / "gain.ckpt"
    full = run_map(gain_grid, checkpoint_path=path)
    lines = path.read_text(encoding="utf-8").splitlines()

    # killed while writing the fifth record
    path.write_text("\n".join(lines[:5]) + "\n" + lines[5][:4], encoding="utf-8")
    resumed = run_map(gain_grid, checkpoint_path=path)

    assert resumed.metadata["resumed_cells"] == 4
    assert numpy.array_equal(full.values, resumed.values)

    text = path.read_text(encoding="utf-8")
    assert text.endswith("\n")
    assert len(text.splitlines()) == 1 + 9
    done, _ = sweep.read_checkpoint(path, sweep.checkpoint_key(gain_grid, SimConfig()))
    assert len(done) == 9


def test_unreadable_checkpoint_record(gain_grid, tmp_path):
    path = tmp_path / "gain.ckpt"
    run_map(gain_grid, checkpoint_path=path)
    lines = path.read_text(encoding="utf-8").splitlines()

    path.write_text("\n".join(lines[:3] + ["1,one,2.0"] + lines[3:]) + "\n", encoding="utf-8")
    with pytest.raises(CheckpointMismatchError):
        run_map(gain_grid, checkpoint_path=path)

    # a header cut short is another run's file
    path.write_text(lines[0][:10], encoding="utf-8")
    with pytest.raises(CheckpointMismatchError):
        run_map(gain_grid, checkpoint_path=path)


def test_failed_cells_are_recorded(dark_grid, tmp_path, monkeypatch):
    def evaluate(grid, cfg, ix, iy):
        if (ix, iy) == (1, 0):
            raise NumericalError("steady state went astray")
        return 0.0

    monkeypatch.setattr(sweep, "evaluate_cell", evaluate)
    path = tmp_path / "dark.ckpt"
    map2d = run_map(dark_grid, checkpoint_path=path)

    assert numpy.isnan(map2d.values[1, 0])
    assert numpy.nansum(map2d.values) == 0.0
    [error] = map2d.metadata["errors"]
    assert (error["ix"], error["iy"]) == (1, 0)
    assert "NumericalError" in error["message"]
    assert "# error 1,0," in path.read_text(encoding="utf-8")


def test_map_cut():
    map2d = _map(numpy.arange(12).reshape(4, 3))
    along_x = map2d.cut("x", at=1.2)
    assert list(along_x) == [1.0, 4.0, 7.0, 10.0]
    assert along_x.index.name == "delta_pump"

    along_y = map2d.cut("y", at=3.0)
    assert list(along_y) == [9.0, 10.0, 11.0]

    with pytest.raises(ValueError):
        map2d.cut("z", at=0.0)

    with pytest.raises(ValueError):
        Map2D(x=numpy.zeros(2), y=numpy.zeros(3), values=numpy.zeros((3, 2)))


def test_region_stats():
    values = numpy.zeros((5, 5))
    values[0:3, 1] = 1.0
    values[4, 4] = 1.0
    values[2, 3] = numpy.nan

    stats = region_stats(_map(values))
    assert stats.n_regions == 2
    assert stats.area == 3
    assert stats.fraction == pytest.approx(0.75)
    assert stats.centroid_x == pytest.approx(1.0)
    assert stats.centroid_y == pytest.approx(1.0)

    empty = region_stats(_map(numpy.zeros((3, 3))))
    assert empty.n_regions == 0
    assert numpy.isnan(empty.centroid_x)


def test_contour_of_empty_map():
    assert extract_contour(_map(numpy.zeros((3, 3)))) == []


def test_contour_around_one_cell():
    values = numpy.zeros((3, 3))
    values[1, 1] = 1.0
    map2d = _map(values)

    [polyline] = extract_contour(map2d)
    assert polyline.shape == (5, 2)
    assert is_closed(polyline)
    assert {tuple(p) for p in polyline[:-1]} == {(0.5, 1.0), (1.5, 1.0), (1.0, 0.5), (1.0, 1.5)}

    stats = region_stats(map2d)
    assert polygon_centroid(polyline) == pytest.approx((stats.centroid_x, stats.centroid_y))


def test_contour_reaching_the_border():
    values = numpy.zeros((3, 3))
    values[0, 0] = 1.0

    [polyline] = extract_contour(_map(values))
    assert not is_closed(polyline)
    assert {tuple(p) for p in polyline} == {(0.5, 0.0), (0.0, 0.5)}


def test_contour_saddle():
    # mean above the level: the inside corners stay connected
    polylines = extract_contour(_map([[1.0, 0.0], [0.0, 1.0]]))
    pairs = {frozenset(map(tuple, p)) for p in polylines}
    assert pairs == {
        frozenset({(0.5, 0.0), (1.0, 0.5)}),
        frozenset({(0.0, 0.5), (0.5, 1.0)}),
    }

    # mean below the level: each inside corner is cut off on its own
    polylines = extract_contour(_map([[0.6, 0.0], [0.0, 0.6]]))
    ends = sorted(tuple(sorted(map(tuple, p))) for p in polylines)
    assert len(ends) == 2
    assert numpy.array(ends[0]) == pytest.approx(numpy.array([(0.0, 1 / 6), (1 / 6, 0.0)]))
    assert numpy.array(ends[1]) == pytest.approx(numpy.array([(5 / 6, 1.0), (1.0, 5 / 6)]))


def test_contour_treats_nan_as_outside():
    values = numpy.ones((3, 3))
    values[1, 1] = numpy.nan

    [polyline] = extract_contour(_map(values))
    assert is_closed(polyline)
    assert polygon_centroid(polyline) == pytest.approx((1.0, 1.0))


def test_panels_on_a_fixed_cavity_axis():
    grid = GridSpec(2.0, 3.0, 2, -31.0, -29.0, 2, base=MAP_CENTRE, task="gain")
    panels = run_panels(grid, delta_mots=(-25.0, -35.0), omega_mots=(19.0,))

    assert set(panels) == {(-25.0, 19.0), (-35.0, 19.0)}
    for (delta_mot, omega_mot), map2d in panels.items():
        assert map2d.shape == (2, 2)
        assert map2d.y == pytest.approx(grid.y)
        assert map2d.metadata["operating_point"]["delta_mot"] == delta_mot
        assert map2d.metadata["operating_point"]["omega_mot"] == omega_mot

    moved = run_panels(grid, delta_mots=(-25.0,), omega_mots=(19.0,), follow_mot=True)
    assert moved[-25.0, 19.0].y == pytest.approx(grid.y + 5.0)


def test_panels_track_the_mot():
    # gain along Δ_cavity at the pump peak, one panel per Δ_MOT
    grid = GridSpec(2.4, 2.8, 2, -42.0, -18.0, 97, base=MAP_CENTRE, task="gain")
    panels = run_panels(grid, delta_mots=(-25.0, -30.0, -35.0), omega_mots=(19.0,))

    peaks = []
    for delta_mot in (-25.0, -30.0, -35.0):
        cut = panels[delta_mot, 19.0].cut("y", at=2.4)
        assert 0 < cut.values.argmax() < len(cut) - 1
        peaks.append(cut.idxmax())

    assert peaks[0] > peaks[1] > peaks[2]
    slope = (peaks[2] - peaks[0]) / (-35.0 + 25.0)
    assert 0.7 <= slope <= 1.3

    # gain along Δ_pump at the Raman condition, one panel per Ω_MOT
    grid = GridSpec(-1.0, 7.0, 81, -31.0, -30.0, 2, base=MAP_CENTRE, task="gain")
    panels = run_panels(grid, delta_mots=(-30.0,), omega_mots=(13.0, 19.0, 26.0))

    for omega_mot in (13.0, 19.0, 26.0):
        cut = panels[-30.0, omega_mot].cut("x", at=-30.0)
        assert 0 < cut.values.argmax() < len(cut) - 1
        shift = dressed_states(-30.0, omega_mot).stark_shift
        assert 0.7 <= cut.idxmax() / shift <= 1.3


@pytest.mark.slow
def test_threshold_map_region():
    grid = GridSpec(*PUMP_AXIS, 60, *CAVITY_AXIS, 60, base=MAP_CENTRE, task="threshold")
    map2d = run_map(grid, workers=2)

    stats = region_stats(map2d)
    assert stats.area > 0
    assert stats.fraction > 0.9
    assert stats.centroid_y == pytest.approx(MAP_CENTRE.delta_cavity, abs=3.0)
    assert stats.centroid_x == pytest.approx(2.76, abs=1.5)

    # bounded along the pump axis
    assert numpy.nansum(map2d.values[0, :]) == 0.0


@pytest.mark.slow
def test_threshold_region_closes_on_a_wide_cavity_axis():
    grid = GridSpec(*PUMP_AXIS, 13, -160.0, 0.0, 41, base=MAP_CENTRE, task="threshold")
    map2d = run_map(grid, workers=2)

    stats = region_stats(map2d)
    assert stats.fraction > 0.9

    # no lasing on the bare line side, nor far below the Raman condition
    assert numpy.nansum(map2d.values[:, -3:]) == 0.0
    assert numpy.nansum(map2d.values[:, 0]) == 0.0
    assert map2d.values[grid.x.searchsorted(2.0), grid.y.searchsorted(-32.0)] == 1.0

    dominant = max(extract_contour(map2d), key=len)
    assert is_closed(dominant)
    cx, cy = polygon_centroid(dominant)
    assert abs(cx - stats.centroid_x) <= 2 * (grid.x[1] - grid.x[0])
    assert abs(cy - stats.centroid_y) <= 2 * (grid.y[1] - grid.y[0])


@pytest.mark.slow
def test_frequency_map_redshift():
    grid = GridSpec(1.5, 3.5, 3, -33.0, -27.0, 3, base=MAP_CENTRE, task="frequency")
    map2d = run_map(grid, SimConfig(t_transient=100.0, t_window=64.0), workers=4)

    shifts = map2d.values[numpy.isfinite(map2d.values)]
    assert len(shifts) == 9
    assert (shifts < 0).mean() >= 0.9

    # the dispersive pull of the bare line, plus a margin for the Raman line, bounds the shift
    collective = derived_params(MAP_CENTRE.cavity, MAP_CENTRE.atom).omega_cavity_collective
    bound = collective**2 / (dressed_states(-30.0, 19.0).stark_shift - grid.y_max)
    assert -1.1 * bound < shifts.min() < -0.8
