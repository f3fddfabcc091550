"""Minimal SVG figures: scatter points, polylines and polygons in data coordinates."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


def _num(x: float) -> str:
    return format(float(x), ".6g")


@dataclass
class Figure:
    xlim: tuple
    ylim: tuple
    width: int = 640
    height: int = 480
    margin: int = 50
    title: str = ""
    xlabel: str = ""
    ylabel: str = ""
    _items: list = field(default_factory=list)

    def _map(self, x, y):
        x0, x1 = self.xlim
        y0, y1 = self.ylim
        w = self.width - 2 * self.margin
        h = self.height - 2 * self.margin
        px = self.margin + (np.asarray(x, dtype=float) - x0) / (x1 - x0) * w
        py = self.height - self.margin - (np.asarray(y, dtype=float) - y0) / (y1 - y0) * h
        return px, py

    def scatter(self, x, y, r: float = 2.0, color: str = "black"):
        px, py = self._map(x, y)
        for a, b in zip(np.atleast_1d(px), np.atleast_1d(py)):
            self._items.append(f'<circle cx="{_num(a)}" cy="{_num(b)}" r="{_num(r)}" fill="{color}"/>')

    def polyline(self, x, y, color: str = "black", width: float = 1.0, closed: bool = False):
        px, py = self._map(x, y)
        pts = " ".join(f"{_num(a)},{_num(b)}" for a, b in zip(px, py))
        tag = "polygon" if closed else "polyline"
        self._items.append(
            f'<{tag} points="{pts}" fill="none" stroke="{color}" stroke-width="{_num(width)}"/>'
        )

    def text(self, x, y, s: str, size: int = 12):
        px, py = self._map(x, y)
        self._items.append(f'<text x="{_num(px)}" y="{_num(py)}" font-size="{size}">{_escape(s)}</text>')

    def render(self) -> str:
        m, w, h = self.margin, self.width, self.height
        out = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
            f'<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>',
            f'<rect x="{m}" y="{m}" width="{w - 2 * m}" height="{h - 2 * m}" fill="none" stroke="gray"/>',
        ]
        x0, x1 = self.xlim
        y0, y1 = self.ylim
        out.append(f'<text x="{m}" y="{h - m + 16}" font-size="11">{_num(x0)}</text>')
        out.append(f'<text x="{w - m - 20}" y="{h - m + 16}" font-size="11">{_num(x1)}</text>')
        out.append(f'<text x="4" y="{h - m}" font-size="11">{_num(y0)}</text>')
        out.append(f'<text x="4" y="{m + 10}" font-size="11">{_num(y1)}</text>')
        if self.title:
            out.append(f'<text x="{w / 2}" y="{m / 2}" font-size="14" text-anchor="middle">{_escape(self.title)}</text>')
        if self.xlabel:
            out.append(f'<text x="{w / 2}" y="{h - 10}" font-size="12" text-anchor="middle">{_escape(self.xlabel)}</text>')
        if self.ylabel:
            out.append(f'<text x="12" y="{h / 2}" font-size="12" transform="rotate(-90 12 {h / 2})" '
                       f'text-anchor="middle">{_escape(self.ylabel)}</text>')
        out.extend(self._items)
        out.append("</svg>")
        return "\n".join(out) + "\n"


def _escape(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def padded(lo: float, hi: float, frac: float = 0.05):
    span = hi - lo if hi > lo else 1.0
    return lo - frac * span, hi + frac * span
