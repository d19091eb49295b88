"""Marching-squares contours of a map"""

from __future__ import annotations

from collections import defaultdict
from typing import TYPE_CHECKING

import numpy

if TYPE_CHECKING:
    from .sweep import Map2D

# an edge of the sample lattice: ('h', ix, iy) joins (ix, iy)-(ix+1, iy),
# ('v', ix, iy) joins (ix, iy)-(ix, iy+1)
EdgeKey = tuple[str, int, int]

# corners of the cell (ix, iy) and the two cell edges meeting at each
_CORNERS = ((0, 0), (1, 0), (1, 1), (0, 1))


def _cell_edges(ix: int, iy: int) -> dict[tuple[int, int], tuple[EdgeKey, EdgeKey]]:
    bottom, top = ("h", ix, iy), ("h", ix, iy + 1)
    left, right = ("v", ix, iy), ("v", ix + 1, iy)
    return {
        (0, 0): (bottom, left),
        (1, 0): (bottom, right),
        (1, 1): (right, top),
        (0, 1): (top, left),
    }


def _segments(inside: numpy.ndarray, samples: numpy.ndarray, level: float):
    """Pairs of crossed lattice edges, one or two per cell"""
    nx, ny = inside.shape
    for iy in range(ny - 1):
        for ix in range(nx - 1):
            states = [bool(inside[ix + dx, iy + dy]) for dx, dy in _CORNERS]
            n_inside = sum(states)
            if n_inside in (0, 4):
                continue

            edges = _cell_edges(ix, iy)

            if n_inside in (1, 3):
                # cut off the odd corner
                odd = states.index(n_inside == 1)
                yield edges[_CORNERS[odd]]
                continue

            if states[0] == states[2]:
                # saddle: the corners on the side of the cell mean stay connected
                mean = numpy.mean([samples[ix + dx, iy + dy] for dx, dy in _CORNERS])
                connected = mean >= level
                for corner, state in zip(_CORNERS, states):
                    if state != connected:
                        yield edges[corner]
                continue

            # two adjacent corners inside: the segment runs between the two crossed edges
            crossed = {e for corner, state in zip(_CORNERS, states) for e in edges[corner]}
            crossed = [e for e in crossed if _crossed(e, inside)]
            yield tuple(sorted(crossed))


def _crossed(edge: EdgeKey, inside: numpy.ndarray) -> bool:
    kind, ix, iy = edge
    other = (ix + 1, iy) if kind == "h" else (ix, iy + 1)
    return bool(inside[ix, iy] != inside[other])


def _point(edge: EdgeKey, map2d: Map2D, samples: numpy.ndarray, level: float) -> tuple[float, float]:
    """Linear interpolation of the level along a lattice edge, MHz"""
    kind, ix, iy = edge
    jx, jy = (ix + 1, iy) if kind == "h" else (ix, iy + 1)
    v0, v1 = samples[ix, iy], samples[jx, jy]
    t = 0.5 if v1 == v0 else (level - v0) / (v1 - v0)
    x = map2d.x[ix] + t * (map2d.x[jx] - map2d.x[ix])
    y = map2d.y[iy] + t * (map2d.y[jy] - map2d.y[iy])
    return float(x), float(y)


def extract_contour(map2d: Map2D, level: float = 0.5) -> list[numpy.ndarray]:
    """
    Level lines between cell-centre samples

    Samples at or above ``level`` are inside; NaN samples are outside. Saddle cells connect
    the two corners on the same side as the mean of the four samples. Polylines that close
    repeat their first point at the end; those reaching the border stay open.

    :param map2d: map to contour, usually a threshold map
    :type map2d: Map2D
    :param level: contour level. Defaults to 0.5.
    :type level: float

    :return: k×2 arrays of (Δ_pump, Δ_cavity) points, MHz
    :rtype: list[numpy.ndarray]
    """
    values = numpy.asarray(map2d.values, dtype=float)
    finite = values[numpy.isfinite(values)]
    fill = min(float(finite.min()), level - 1.0) if finite.size else level - 1.0
    samples = numpy.where(numpy.isfinite(values), values, fill)
    inside = samples >= level

    neighbours: dict[EdgeKey, list[EdgeKey]] = defaultdict(list)
    for a, b in _segments(inside, samples, level):
        neighbours[a].append(b)
        neighbours[b].append(a)

    chains = []
    visited: set[frozenset] = set()

    def walk(start: EdgeKey) -> list[EdgeKey]:
        # every lattice edge borders at most two cells, so chains never branch
        chain = [start]
        current = start
        while True:
            step = next(
                (n for n in neighbours[current] if frozenset((current, n)) not in visited),
                None,
            )
            if step is None:
                return chain
            visited.add(frozenset((current, step)))
            chain.append(step)
            current = step
            if current == start:
                return chain

    # open chains start at the border, where an edge has one neighbour
    for edge in sorted(k for k, v in neighbours.items() if len(v) == 1):
        if any(frozenset((edge, n)) not in visited for n in neighbours[edge]):
            chains.append(walk(edge))

    for edge in sorted(neighbours):
        if any(frozenset((edge, n)) not in visited for n in neighbours[edge]):
            chains.append(walk(edge))

    return [
        numpy.array([_point(e, map2d, samples, level) for e in chain], dtype=float)
        for chain in chains
    ]


def is_closed(polyline: numpy.ndarray) -> bool:
    """First point repeated at the end"""
    return len(polyline) > 2 and bool(numpy.all(polyline[0] == polyline[-1]))


def polygon_centroid(polyline: numpy.ndarray) -> tuple[float, float]:
    """Area centroid of a closed polyline, vertex mean for a degenerate one"""
    x, y = polyline[:, 0], polyline[:, 1]
    cross = x[:-1] * y[1:] - x[1:] * y[:-1]
    area = cross.sum() / 2
    if area == 0:
        return float(x.mean()), float(y.mean())
    cx = ((x[:-1] + x[1:]) * cross).sum() / (6 * area)
    cy = ((y[:-1] + y[1:]) * cross).sum() / (6 * area)
    return float(cx), float(cy)
