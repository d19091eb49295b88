"""SVG heatmaps of maps, with optional contour overlay"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable
from xml.sax.saxutils import escape

import numpy
from matplotlib import colors

from .decorators import timer

if TYPE_CHECKING:
    from ..represent.sweep import Map2D

logger = logging.getLogger("ybcav")

# zero to maximum
LOW_COLOR = "darkblue"
HIGH_COLOR = "darkred"
NAN_COLOR = "lightgray"

WIDTH, HEIGHT = 640, 520
MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 80, 20, 20, 60

AXIS_LABELS = {
    "delta_pump": "Δ_pump (MHz)",
    "delta_cavity": "Δ_cavity (MHz)",
}


@dataclass(frozen=True)
class PlotTransform:
    """
    Data (MHz) to SVG pixel coordinates, Y pointing up in data and down on screen.

    :param x_min: Left data edge.
    :type x_min: float
    :param x_max: Right data edge.
    :type x_max: float
    :param y_min: Bottom data edge.
    :type y_min: float
    :param y_max: Top data edge.
    :type y_max: float
    :param left: Left pixel of the plot area.
    :type left: float
    :param top: Top pixel of the plot area.
    :type top: float
    :param width: Plot area width, px.
    :type width: float
    :param height: Plot area height, px.
    :type height: float
    """

    x_min: float
    x_max: float
    y_min: float
    y_max: float
    left: float = MARGIN_LEFT
    top: float = MARGIN_TOP
    width: float = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    height: float = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

    @classmethod
    def for_map(cls, map2d: Map2D) -> PlotTransform:
        """Plot area spanning the cells, half a spacing beyond the outer samples"""
        dx = (map2d.x[-1] - map2d.x[0]) / (len(map2d.x) - 1)
        dy = (map2d.y[-1] - map2d.y[0]) / (len(map2d.y) - 1)
        return cls(
            x_min=float(map2d.x[0] - dx / 2),
            x_max=float(map2d.x[-1] + dx / 2),
            y_min=float(map2d.y[0] - dy / 2),
            y_max=float(map2d.y[-1] + dy / 2),
        )

    def __call__(self, x: float, y: float) -> tuple[float, float]:
        px = self.left + (x - self.x_min) / (self.x_max - self.x_min) * self.width
        py = self.top + (self.y_max - y) / (self.y_max - self.y_min) * self.height
        return px, py


def _fmt(value: float) -> str:
    return f"{value:.3f}"


def cell_colors(
    values: numpy.ndarray,
    low: str = LOW_COLOR,
    high: str = HIGH_COLOR,
    nan: str = NAN_COLOR,
) -> numpy.ndarray:
    """Hex fill per cell, linear between ``low`` at the minimum and ``high`` at the maximum"""
    cmap = colors.LinearSegmentedColormap.from_list("ybcav", [low, high])
    finite = numpy.isfinite(values)
    fills = numpy.full(values.shape, colors.to_hex(nan), dtype=object)
    if not finite.any():
        return fills

    v_min, v_max = values[finite].min(), values[finite].max()
    span = v_max - v_min
    for index in zip(*numpy.nonzero(finite)):
        t = 0.0 if span == 0 else (values[index] - v_min) / span
        fills[index] = colors.to_hex(cmap(float(t)))
    return fills


def contour_path(polyline: numpy.ndarray, transform: PlotTransform) -> str:
    """SVG path data of a polyline"""
    points = [transform(x, y) for x, y in polyline]
    return " ".join(
        f"{'M' if i == 0 else 'L'} {_fmt(px)},{_fmt(py)}" for i, (px, py) in enumerate(points)
    )


@timer(logger, kind='svg', level=logging.DEBUG)
def render_heatmap(
    map2d: Map2D,
    style: tuple[str, str] = (LOW_COLOR, HIGH_COLOR),
    contours: Iterable[numpy.ndarray] | None = None,
    title: str | None = None,
) -> str:
    """
    SVG 1.1 heatmap, one rectangle per cell

    :param map2d: map to draw
    :type map2d: Map2D
    :param style: colors of the minimum and maximum. Defaults to dark blue and dark red.
    :type style: tuple[str, str]
    :param contours: polylines in MHz, drawn over the cells
    :type contours: Iterable[numpy.ndarray] | None
    :param title: caption above the plot area
    :type title: str | None

    :return: the document
    :rtype: str
    """
    transform = PlotTransform.for_map(map2d)
    fills = cell_colors(map2d.values, *style)
    dx = (transform.x_max - transform.x_min) / len(map2d.x)
    dy = (transform.y_max - transform.y_min) / len(map2d.y)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" '
        f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
    ]
    if title:
        out.append(
            f'<text x="{WIDTH / 2:.1f}" y="14" text-anchor="middle" font-size="12">'
            f"{escape(title)}</text>",
        )

    out.append('<g id="cells" shape-rendering="crispEdges">')
    for ix, x in enumerate(map2d.x):
        for iy, y in enumerate(map2d.y):
            px, py = transform(x - dx / 2, y + dy / 2)
            w = transform(x + dx / 2, y)[0] - px
            h = transform(x, y - dy / 2)[1] - py
            out.append(
                f'<rect x="{_fmt(px)}" y="{_fmt(py)}" width="{_fmt(w)}" height="{_fmt(h)}" '
                f'fill="{fills[ix, iy]}"/>',
            )
    out.append("</g>")

    if not numpy.isfinite(map2d.values).any():
        out.append(
            f'<text x="{transform.left + transform.width / 2:.1f}" '
            f'y="{transform.top + transform.height / 2:.1f}" text-anchor="middle" '
            'font-size="20">no data</text>',
        )

    if contours:
        out.append('<g id="contours" fill="none" stroke="white" stroke-width="1.5">')
        for polyline in contours:
            out.append(f'<path d="{contour_path(polyline, transform)}"/>')
        out.append("</g>")

    out.extend(_axes(map2d, transform))
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _axes(map2d: Map2D, transform: PlotTransform) -> list[str]:
    """Frame, ticks at the ends and middle of each axis, axis labels"""
    bottom = transform.top + transform.height
    out = [
        f'<rect x="{_fmt(transform.left)}" y="{_fmt(transform.top)}" '
        f'width="{_fmt(transform.width)}" height="{_fmt(transform.height)}" '
        'fill="none" stroke="black"/>',
    ]

    for x in numpy.linspace(map2d.x[0], map2d.x[-1], 3):
        px, _ = transform(x, 0.0)
        out.append(
            f'<line x1="{_fmt(px)}" y1="{_fmt(bottom)}" x2="{_fmt(px)}" '
            f'y2="{_fmt(bottom + 5)}" stroke="black"/>',
        )
        out.append(
            f'<text x="{_fmt(px)}" y="{_fmt(bottom + 18)}" text-anchor="middle" '
            f'font-size="11">{x:g}</text>',
        )

    for y in numpy.linspace(map2d.y[0], map2d.y[-1], 3):
        _, py = transform(0.0, y)
        out.append(
            f'<line x1="{_fmt(transform.left - 5)}" y1="{_fmt(py)}" x2="{_fmt(transform.left)}" '
            f'y2="{_fmt(py)}" stroke="black"/>',
        )
        out.append(
            f'<text x="{_fmt(transform.left - 8)}" y="{_fmt(py + 4)}" text-anchor="end" '
            f'font-size="11">{y:g}</text>',
        )

    x_label = escape(AXIS_LABELS["delta_pump"])
    y_label = escape(AXIS_LABELS["delta_cavity"])
    out.append(
        f'<text x="{_fmt(transform.left + transform.width / 2)}" y="{_fmt(bottom + 40)}" '
        f'text-anchor="middle" font-size="12">{x_label}</text>',
    )
    middle = transform.top + transform.height / 2
    out.append(
        f'<text x="20" y="{_fmt(middle)}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 20 {_fmt(middle)})">{y_label}</text>',
    )
    return out
