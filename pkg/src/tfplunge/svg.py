"""Dependency-free SVG line charts."""

from __future__ import annotations

from dataclasses import dataclass
from xml.sax.saxutils import escape

import numpy as np

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd")


@dataclass(frozen=True)
class Axes:
    """Linear map from data coordinates onto the plotting rectangle."""

    x0: float
    x1: float
    y0: float
    y1: float
    left: float = 60.0
    top: float = 30.0
    width: float = 560.0
    height: float = 320.0

    def px(self, x):
        return self.left + (np.asarray(x, float) - self.x0) / (self.x1 - self.x0) * self.width

    def py(self, y):
        return self.top + (self.y1 - np.asarray(y, float)) / (self.y1 - self.y0) * self.height

    def data_x(self, px):
        return self.x0 + (np.asarray(px, float) - self.left) / self.width * (self.x1 - self.x0)

    def data_y(self, py):
        return self.y1 - (np.asarray(py, float) - self.top) / self.height * (self.y1 - self.y0)


def polyline_points(axes: Axes, x, y) -> str:
    return " ".join(f"{u:.6f},{v:.6f}" for u, v in zip(axes.px(x), axes.py(y)))


def parse_points(points: str) -> np.ndarray:
    return np.array([[float(c) for c in p.split(",")] for p in points.split()])


def line_chart(
    series: list[tuple[str, np.ndarray, np.ndarray]],
    *,
    title: str = "",
    xlabel: str = "",
    ylabel: str = "",
    band: tuple[float, float] | None = None,
    ylim: tuple[float, float] = (0.0, 1.0),
) -> str:
    """Render ``(label, x, y)`` series as an SVG 1.1 document.

    ``band`` shades the horizontal strip ``ylim``-coordinates ``lo..hi``.
    """
    xs = np.concatenate([np.asarray(x, float) for _, x, _ in series])
    x0, x1 = float(xs.min()), float(xs.max())
    if x1 == x0:
        x1 = x0 + 1.0
    ax = Axes(x0, x1, *ylim)
    W, H = ax.left + ax.width + 20, ax.top + ax.height + 50
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{W:g}" height="{H:g}" '
        f'viewBox="0 0 {W:g} {H:g}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{W:g}" height="{H:g}" fill="white"/>',
    ]
    if band is not None:
        lo, hi = band
        ytop, ybot = float(ax.py(hi)), float(ax.py(lo))
        out.append(
            f'<rect class="plunge-band" x="{ax.left:g}" y="{ytop:.6f}" width="{ax.width:g}" '
            f'height="{ybot - ytop:.6f}" fill="#bbbbbb" fill-opacity="0.4"/>'
        )
    out.append(
        f'<rect x="{ax.left:g}" y="{ax.top:g}" width="{ax.width:g}" height="{ax.height:g}" '
        'fill="none" stroke="black"/>'
    )
    for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
        yv = ax.y0 + frac * (ax.y1 - ax.y0)
        xv = ax.x0 + frac * (ax.x1 - ax.x0)
        out.append(f'<text x="{ax.left - 6:g}" y="{float(ax.py(yv)) + 4:.2f}" text-anchor="end">{yv:g}</text>')
        out.append(
            f'<text x="{float(ax.px(xv)):.2f}" y="{ax.top + ax.height + 16:g}" '
            f'text-anchor="middle">{xv:.0f}</text>'
        )
    for i, (label, x, y) in enumerate(series):
        color = PALETTE[i % len(PALETTE)]
        out.append(
            f'<polyline id="series-{i}" data-label="{escape(label)}" fill="none" stroke="{color}" '
            f'stroke-width="1.5" points="{polyline_points(ax, x, y)}"/>'
        )
        ly = ax.top + 16 + 16 * i
        lx = ax.left + ax.width - 150
        out.append(f'<line x1="{lx:g}" y1="{ly - 4:g}" x2="{lx + 20:g}" y2="{ly - 4:g}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{lx + 26:g}" y="{ly:g}">{escape(label)}</text>')
    if title:
        out.append(f'<text x="{ax.left + ax.width / 2:g}" y="18" text-anchor="middle">{escape(title)}</text>')
    if xlabel:
        out.append(f'<text x="{ax.left + ax.width / 2:g}" y="{H - 10:g}" text-anchor="middle">{escape(xlabel)}</text>')
    if ylabel:
        out.append(
            f'<text x="14" y="{ax.top + ax.height / 2:g}" text-anchor="middle" '
            f'transform="rotate(-90 14 {ax.top + ax.height / 2:g})">{escape(ylabel)}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
