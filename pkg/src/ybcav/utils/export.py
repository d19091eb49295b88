"""Writing maps and tables"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import TYPE_CHECKING

import numpy
import pandas

from .decorators import timer

if TYPE_CHECKING:
    from ..represent.sweep import Map2D

logger = logging.getLogger("ybcav")


def map_frame(map2d: Map2D) -> pandas.DataFrame:
    """Map as a table, Y down the rows and X across the columns"""
    return pandas.DataFrame(
        map2d.values.T,
        index=pandas.Index(map2d.y, name=""),
        columns=pandas.Index(map2d.x),
    )


def metadata_records(map2d: Map2D) -> list[dict]:
    """One record per metadata entry, tagged by ``record``"""
    records = [{"record": "map", "task": map2d.task, "nx": len(map2d.x), "ny": len(map2d.y)}]
    for name, entry in map2d.metadata.items():
        if name == "errors":
            records.extend({"record": "error", **error} for error in entry)
        elif isinstance(entry, dict):
            records.append({"record": name, **entry})
        else:
            records.append({"record": name, "value": entry})
    return records


@timer(logger, kind='export', level=logging.INFO)
def export_map(map2d: Map2D, base_path: str | Path) -> list[Path]:
    """
    Writes ``<base>.csv`` and ``<base>.meta.jsonl``

    The CSV's first row is an empty cell followed by the X values; every other row starts
    with its Y value. NaN is written as an empty field.

    :param map2d: map to write
    :type map2d: Map2D
    :param base_path: path without extension
    :type base_path: str | Path

    :return: paths written
    :rtype: list[Path]
    """
    base_path = Path(base_path)
    csv_path = base_path.with_name(base_path.name + ".csv")
    meta_path = base_path.with_name(base_path.name + ".meta.jsonl")

    map_frame(map2d).to_csv(csv_path, na_rep="", lineterminator="\n")

    with open(meta_path, "w", encoding="utf-8") as f:
        for record in metadata_records(map2d):
            f.write(json.dumps(record, sort_keys=True, default=str) + "\n")

    return [csv_path, meta_path]


def read_map_csv(path: str | Path) -> tuple[numpy.ndarray, numpy.ndarray, numpy.ndarray]:
    """
    Reads a map CSV back

    :return: x values, y values, nx×ny values with NaN for empty fields
    :rtype: tuple[numpy.ndarray, numpy.ndarray, numpy.ndarray]
    """
    frame = pandas.read_csv(path, index_col=0, float_precision="round_trip")
    x = numpy.array([float(c) for c in frame.columns])
    y = frame.index.to_numpy(dtype=float)
    return x, y, frame.to_numpy(dtype=float).T


def export_table(frame: pandas.DataFrame, path: str | Path) -> Path:
    """Writes a scan or curve as CSV without the index"""
    path = Path(path)
    frame.to_csv(path, index=False, lineterminator="\n")
    return path
