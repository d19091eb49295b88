"""Maps over the pump and cavity detunings"""

from __future__ import annotations

import hashlib
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Iterable, Literal

import numpy
import pandas
from scipy import ndimage
from tqdm import tqdm

from ..components.drive import OperatingPoint
from ..modeling.dynamics import SimConfig, simulate
from ..modeling.threshold import is_lasing, small_signal_gain
from ..utils.decorators import timer
from ..utils.errors import BelowThresholdError, CheckpointMismatchError, NumericalError
from ..utils.math import technical

logger = logging.getLogger("ybcav")
logger.setLevel(logging.INFO)

ch = logging.StreamHandler()
ch.setLevel(logging.INFO)
formatter = logging.Formatter("%(message)s")
ch.setFormatter(formatter)
logger.addHandler(ch)


Task = Literal["threshold", "gain", "frequency", "photons"]
TASKS = ("threshold", "gain", "frequency", "photons")

CHECKPOINT_TAG = "# ybcav-checkpoint"


@dataclass(frozen=True)
class GridSpec:
    """
    Rectangular grid with Δ_pump along X and Δ_cavity along Y.

    :param x_min: Lowest pump detuning, MHz.
    :type x_min: float
    :param x_max: Highest pump detuning, MHz.
    :type x_max: float
    :param nx: Points along X.
    :type nx: int
    :param y_min: Lowest cavity detuning, MHz.
    :type y_min: float
    :param y_max: Highest cavity detuning, MHz.
    :type y_max: float
    :param ny: Points along Y.
    :type ny: int
    :param base: Template for every other parameter.
    :type base: OperatingPoint
    :param task: What each cell holds. Defaults to 'threshold'.
    :type task: str

    :raises ValueError: For fewer than 2 points or an empty range on an axis, or an unknown task.
    """

    x_min: float
    x_max: float
    nx: int
    y_min: float
    y_max: float
    ny: int
    base: OperatingPoint = field(default_factory=OperatingPoint)
    task: Task = "threshold"

    x_axis = "delta_pump"
    y_axis = "delta_cavity"

    def __post_init__(self):
        if not (self.nx >= 2 and self.ny >= 2):
            raise ValueError(f"need at least 2 points per axis, got {self.nx}×{self.ny}")
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ValueError(
                f"axis ranges must be increasing, got [{self.x_min}, {self.x_max}], "
                f"[{self.y_min}, {self.y_max}]",
            )
        if self.task not in TASKS:
            raise ValueError(f"task must be one of {TASKS}, got {self.task!r}")

    @property
    def x(self) -> numpy.ndarray:
        """Pump detunings, MHz"""
        return numpy.linspace(self.x_min, self.x_max, self.nx)

    @property
    def y(self) -> numpy.ndarray:
        """Cavity detunings, MHz"""
        return numpy.linspace(self.y_min, self.y_max, self.ny)

    def point(self, ix: int, iy: int) -> OperatingPoint:
        """Operating point of a cell"""
        return self.base.but(
            **{self.x_axis: float(self.x[ix]), self.y_axis: float(self.y[iy])},
        )

    def cells(self) -> list[tuple[int, int]]:
        """Row-major cell order, Y outer"""
        return [(ix, iy) for iy in range(self.ny) for ix in range(self.nx)]

    def signature(self) -> str:
        """Stable text identity"""
        return repr(self)


@dataclass(eq=False)
class Map2D:
    """
    One value per grid cell, ``values[ix, iy]``.

    :param x: Pump detunings, MHz.
    :type x: numpy.ndarray
    :param y: Cavity detunings, MHz.
    :type y: numpy.ndarray
    :param values: nx×ny results, NaN where a cell failed or no line was found.
    :type values: numpy.ndarray
    :param task: What the values are.
    :type task: str
    :param metadata: Parameters, provenance, timing and per-cell errors.
    :type metadata: dict
    """

    x: numpy.ndarray
    y: numpy.ndarray
    values: numpy.ndarray
    task: str = "threshold"
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.values.shape != (len(self.x), len(self.y)):
            raise ValueError(
                f"values {self.values.shape} do not match axes ({len(self.x)}, {len(self.y)})",
            )

    @property
    def shape(self) -> tuple[int, int]:
        """(nx, ny)"""
        return self.values.shape

    def cut(self, along: Literal["x", "y"], at: float) -> pandas.Series:
        """
        Values along one axis at the row or column nearest to ``at``

        :param along: 'x' for a cut along the pump axis, 'y' along the cavity axis
        :type along: str
        :param at: position on the other axis, MHz
        :type at: float

        :rtype: pandas.Series
        """
        if along == "x":
            iy = int(numpy.argmin(numpy.abs(self.y - at)))
            return pandas.Series(
                self.values[:, iy],
                index=pandas.Index(self.x, name=GridSpec.x_axis),
                name=f"{self.task}@{GridSpec.y_axis}={self.y[iy]:g}",
            )
        if along == "y":
            ix = int(numpy.argmin(numpy.abs(self.x - at)))
            return pandas.Series(
                self.values[ix, :],
                index=pandas.Index(self.y, name=GridSpec.y_axis),
                name=f"{self.task}@{GridSpec.x_axis}={self.x[ix]:g}",
            )
        raise ValueError(f"along must be 'x' or 'y', got {along!r}")


@dataclass(frozen=True)
class RegionStats:
    """
    Connected cells above a level, four-neighbour connectivity.

    :param n_regions: Number of connected regions.
    :type n_regions: int
    :param area: Cells in the largest region.
    :type area: int
    :param centroid_x: Mean pump detuning over the largest region, MHz.
    :type centroid_x: float
    :param centroid_y: Mean cavity detuning over the largest region, MHz.
    :type centroid_y: float
    :param fraction: Share of all region cells held by the largest region.
    :type fraction: float
    """

    n_regions: int
    area: int
    centroid_x: float
    centroid_y: float
    fraction: float


def region_stats(map2d: Map2D, level: float = 0.5) -> RegionStats:
    """Largest connected region of ``values > level``, NaN cells excluded"""
    mask = numpy.nan_to_num(map2d.values, nan=-numpy.inf) > level
    labels, n_regions = ndimage.label(mask)
    if n_regions == 0:
        return RegionStats(0, 0, numpy.nan, numpy.nan, 0.0)

    sizes = numpy.bincount(labels.ravel())[1:]
    dominant = int(numpy.argmax(sizes)) + 1
    ix, iy = numpy.nonzero(labels == dominant)
    return RegionStats(
        n_regions=int(n_regions),
        area=int(sizes[dominant - 1]),
        centroid_x=float(numpy.mean(map2d.x[ix])),
        centroid_y=float(numpy.mean(map2d.y[iy])),
        fraction=float(sizes[dominant - 1] / sizes.sum()),
    )


def cell_seed(grid: GridSpec, ix: int, iy: int) -> int:
    """Seed of a cell, independent of scheduling"""
    digest = hashlib.sha256(f"{grid.signature()}|{ix}|{iy}".encode()).hexdigest()
    return int(digest[:8], 16)


def evaluate_cell(grid: GridSpec, cfg: SimConfig, ix: int, iy: int) -> float:
    """
    Value of one cell for the grid's task

    - threshold: 1.0 when lasing, else 0.0
    - gain: small-signal gain, MHz
    - frequency: line shift from the empty cavity, MHz; NaN below threshold
    - photons: mean photon number; 0.0 below threshold
    """
    op = grid.point(ix, iy)

    if grid.task == "threshold":
        return 1.0 if is_lasing(op)[0] else 0.0

    if grid.task == "gain":
        return technical(small_signal_gain(op).gain)

    if not is_lasing(op)[0]:
        return numpy.nan if grid.task == "frequency" else 0.0

    cell_cfg = replace(cfg, rng_seed=cell_seed(grid, ix, iy))
    try:
        report = simulate(op, cell_cfg)
    except BelowThresholdError as e:
        report = e.report

    return report.shift if grid.task == "frequency" else report.mean_photons


def _run_cell(job: tuple[GridSpec, SimConfig, int, int]) -> tuple[int, int, float, str | None]:
    grid, cfg, ix, iy = job
    try:
        return ix, iy, evaluate_cell(grid, cfg, ix, iy), None
    except (NumericalError, ValueError) as e:
        return ix, iy, numpy.nan, f"{type(e).__name__}: {e}"


def checkpoint_key(grid: GridSpec, cfg: SimConfig) -> str:
    """Hash of everything a cell value depends on"""
    return hashlib.sha256(f"{grid.signature()}|{cfg!r}".encode()).hexdigest()


def read_checkpoint(
    path: Path,
    key: str,
) -> tuple[dict[tuple[int, int], float], dict[tuple[int, int], str]]:
    """
    Finished cells and errors of a checkpoint

    An unterminated last line is the trace of an interrupted write and is ignored; its cell
    is computed again.

    :raises CheckpointMismatchError: if it was written for another grid or setup, or holds a
        record that does not parse
    """
    done: dict[tuple[int, int], float] = {}
    errors: dict[tuple[int, int], str] = {}

    *lines, torn = path.read_text(encoding="utf-8").split("\n")
    if torn:
        logger.warning(f"⚠  Ignoring the unterminated last line of {path}: {torn!r}")

    header = lines[0].strip() if lines else torn
    if header != f"{CHECKPOINT_TAG} {key}":
        raise CheckpointMismatchError(f"{path} belongs to another run ({header!r})")

    for number, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        try:
            if line.startswith("# error "):
                ix, iy, message = line[len("# error ") :].split(",", 2)
                errors[int(ix), int(iy)] = message
            elif not line.startswith("#"):
                ix, iy, value = line.split(",")
                done[int(ix), int(iy)] = float(value)
        except ValueError as e:
            raise CheckpointMismatchError(f"{path}:{number}: unreadable record {line!r}") from e

    return done, errors


def _drop_torn_tail(path: Path) -> int:
    """Cuts the file back to its last newline, returns the bytes removed"""
    data = path.read_bytes()
    end = data.rfind(b"\n") + 1
    if end < len(data):
        with open(path, "r+b") as f:
            f.truncate(end)
    return len(data) - end


@timer(logger, kind='map', level=logging.INFO)
def run_map(
    grid: GridSpec,
    cfg: SimConfig | None = None,
    workers: int = 1,
    checkpoint_path: str | Path | None = None,
) -> Map2D:
    """
    Fills a map cell by cell

    Cells are scheduled row-major and placed by index, so results do not depend on the
    number of workers. With a checkpoint, finished cells are appended as ``ix,iy,value`` lines
    and skipped on a rerun.

    :param grid: grid and task
    :type grid: GridSpec
    :param cfg: dynamics settings for the frequency and photons tasks
    :type cfg: SimConfig
    :param workers: processes, 1 runs in this process. Defaults to 1.
    :type workers: int
    :param checkpoint_path: append-only progress file
    :type checkpoint_path: str | Path | None

    :rtype: Map2D

    :raises CheckpointMismatchError: if the checkpoint belongs to another grid or setup
    """
    cfg = cfg or SimConfig()
    if workers < 1:
        raise ValueError(f"workers must be at least 1, got {workers}")

    start = time.time()
    key = checkpoint_key(grid, cfg)
    values = numpy.full((grid.nx, grid.ny), numpy.nan)
    errors: dict[tuple[int, int], str] = {}
    done: dict[tuple[int, int], float] = {}

    checkpoint = None
    if checkpoint_path is not None:
        checkpoint_path = Path(checkpoint_path)
        if checkpoint_path.exists() and checkpoint_path.stat().st_size > 0:
            done, errors = read_checkpoint(checkpoint_path, key)
            # appends must start on a fresh line
            _drop_torn_tail(checkpoint_path)
            logger.warning(f"⚠  Resuming from {checkpoint_path}, {len(done)} cells done")
            checkpoint = open(checkpoint_path, "a", encoding="utf-8")
        else:
            checkpoint = open(checkpoint_path, "w", encoding="utf-8")
            checkpoint.write(f"{CHECKPOINT_TAG} {key}\n")
            checkpoint.flush()

    for (ix, iy), value in done.items():
        values[ix, iy] = value

    jobs = [(grid, cfg, ix, iy) for ix, iy in grid.cells() if (ix, iy) not in done]

    try:
        if workers > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=workers) as executor:
                results = executor.map(_run_cell, jobs, chunksize=max(1, len(jobs) // (8 * workers)))
                _collect(results, len(jobs), values, errors, checkpoint, grid.task)
        else:
            _collect(map(_run_cell, jobs), len(jobs), values, errors, checkpoint, grid.task)
    finally:
        if checkpoint is not None:
            checkpoint.close()

    from .. import __version__

    return Map2D(
        x=grid.x,
        y=grid.y,
        values=values,
        task=grid.task,
        metadata={
            "grid": {k: v for k, v in asdict(grid).items() if k != "base"},
            "operating_point": asdict(grid.base),
            "sim_config": asdict(cfg),
            "version": __version__,
            "elapsed_s": time.time() - start,
            "workers": workers,
            "resumed_cells": len(done),
            "errors": [
                {"ix": ix, "iy": iy, "message": message}
                for (ix, iy), message in sorted(errors.items())
            ],
        },
    )


def _collect(results, total, values, errors, checkpoint, task):
    """Places results by index; this process is the only checkpoint writer"""
    for ix, iy, value, error in tqdm(results, total=total, desc=task, disable=None):
        values[ix, iy] = value
        if error is not None:
            errors[ix, iy] = error
            logger.debug(f"✗  Cell ({ix}, {iy}) failed: {error}")
        if checkpoint is not None:
            if error is not None:
                checkpoint.write(f"# error {ix},{iy},{error.replace(chr(10), ' ')}\n")
            checkpoint.write(f"{ix},{iy},{value!r}\n")
            checkpoint.flush()


@timer(logger, kind='panels', level=logging.INFO)
def run_panels(
    grid: GridSpec,
    cfg: SimConfig | None = None,
    delta_mots: Iterable[float] = (-25.0, -30.0, -35.0),
    omega_mots: Iterable[float] = (13.0, 19.0, 26.0),
    workers: int = 1,
    follow_mot: bool = False,
) -> dict[tuple[float, float], Map2D]:
    """
    One map per (Δ_MOT, Ω_MOT) pair

    :param grid: template grid, its base Δ_MOT and Ω_MOT are replaced
    :type grid: GridSpec
    :param cfg: dynamics settings
    :type cfg: SimConfig
    :param delta_mots: MOT detunings of the panel rows, MHz
    :type delta_mots: Iterable[float]
    :param omega_mots: MOT Rabi frequencies of the panel columns, MHz
    :type omega_mots: Iterable[float]
    :param workers: processes per map
    :type workers: int
    :param follow_mot: Shift the cavity axis by the change in Δ_MOT. Defaults to False,
        every panel on the template cavity axis.
    :type follow_mot: bool

    :return: maps keyed by (Δ_MOT, Ω_MOT)
    :rtype: dict[tuple[float, float], Map2D]
    """
    panels = {}
    for delta_mot in delta_mots:
        offset = delta_mot - grid.base.delta_mot if follow_mot else 0.0
        for omega_mot in omega_mots:
            panel = replace(
                grid,
                y_min=grid.y_min + offset,
                y_max=grid.y_max + offset,
                base=grid.base.but(delta_mot=delta_mot, omega_mot=omega_mot),
            )
            panels[delta_mot, omega_mot] = run_map(panel, cfg, workers=workers)
    return panels
