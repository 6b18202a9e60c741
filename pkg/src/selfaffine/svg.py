"""Tiny dependency-free SVG writer with byte-stable output."""

from __future__ import annotations

import json
from typing import Iterable, Optional, Sequence


def _fmt(v: float) -> str:
    if v == 0.0:
        v = 0.0  # normalize negative zero
    return format(v, ".4f")


class SvgCanvas:
    def __init__(self, width: int, height: int):
        self.width = width
        self.height = height
        self.elements: list[str] = []

    def polyline(self, pts: Iterable[Sequence[float]], stroke: str = "#000000",
                 stroke_width: float = 1.0) -> None:
        coords = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in pts)
        self.elements.append(
            f'<polyline fill="none" stroke="{stroke}" '
            f'stroke-width="{_fmt(stroke_width)}" points="{coords}"/>'
        )

    def path(self, pts: Iterable[Sequence[float]], stroke: str = "#000000",
             stroke_width: float = 1.0) -> None:
        it = iter(pts)
        first = next(it)
        parts = [f"M {_fmt(first[0])} {_fmt(first[1])}"]
        parts.extend(f"L {_fmt(x)} {_fmt(y)}" for x, y in it)
        self.elements.append(
            f'<path fill="none" stroke="{stroke}" '
            f'stroke-width="{_fmt(stroke_width)}" d="{" ".join(parts)}"/>'
        )

    def polygon(self, pts: Iterable[Sequence[float]], stroke: str = "#888888",
                fill: str = "none", stroke_width: float = 1.0) -> None:
        coords = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in pts)
        self.elements.append(
            f'<polygon fill="{fill}" stroke="{stroke}" '
            f'stroke-width="{_fmt(stroke_width)}" points="{coords}"/>'
        )

    def line(self, x1: float, y1: float, x2: float, y2: float,
             stroke: str = "#cccccc", stroke_width: float = 0.5) -> None:
        self.elements.append(
            f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}" '
            f'stroke="{stroke}" stroke-width="{_fmt(stroke_width)}"/>'
        )

    def metadata(self, doc: dict) -> None:
        payload = json.dumps(doc, sort_keys=True)
        self.elements.append(f"<metadata>{payload}</metadata>")

    def tostring(self) -> str:
        head = (
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width}" '
            f'height="{self.height}" viewBox="0 0 {self.width} {self.height}">\n'
        )
        body = "\n".join(self.elements)
        return head + body + "\n</svg>\n"


class DataWindow:
    """Affine data-to-pixel mapping with optional y flip and margin."""

    def __init__(self, xmin: float, xmax: float, ymin: float, ymax: float,
                 width: int, height: int, margin_frac: float = 0.05,
                 flip_y: bool = True):
        dx = (xmax - xmin) or 1.0
        dy = (ymax - ymin) or 1.0
        self.xmin = xmin - margin_frac * dx
        self.ymin = ymin - margin_frac * dy
        self.sx = width / (dx * (1 + 2 * margin_frac))
        self.sy = height / (dy * (1 + 2 * margin_frac))
        self.height = height
        self.flip_y = flip_y

    def to_px(self, x: float, y: float) -> tuple[float, float]:
        px = (x - self.xmin) * self.sx
        py = (y - self.ymin) * self.sy
        if self.flip_y:
            py = self.height - py
        return px, py

    def map_points(self, pts) -> list[tuple[float, float]]:
        return [self.to_px(x, y) for x, y in pts]
