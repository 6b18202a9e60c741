"""Figure rendering: curve plots with optional overlays, CSV serialization."""

from __future__ import annotations

import io
import os
import tempfile
from dataclasses import dataclass, field

import numpy as np

from .curve import Polyline, piece_rectangle, piece_triangle
from .ifs import EigenParams, to_figure_array, validate_params
from .svg import DataWindow, SvgCanvas
from .tangent import derivative_profile

FLOAT_FMT = ".17g"

OVERLAY_CHOICES = ("triangles", "squares", "derivative")


@dataclass(frozen=True)
class RenderSpec:
    coords: str = "figure"          # "base" | "figure"
    depth: int = 12
    width: int = 640
    height: int = 480
    stroke_width: float = 1.0
    overlays: tuple[str, ...] = ()
    overlay_depth: int = 5          # subdivision level for the square overlay

    def __post_init__(self):
        if self.coords not in ("base", "figure"):
            raise ValueError("coords must be 'base' or 'figure'")
        if self.depth < 0 or self.depth > 26:
            raise ValueError("render depth must lie in 0..26")
        if self.width <= 0 or self.height <= 0:
            raise ValueError("image dimensions must be positive")
        for o in self.overlays:
            if o not in OVERLAY_CHOICES:
                raise ValueError(f"unknown overlay {o!r}")


def fnum(v: float) -> str:
    return format(v, FLOAT_FMT)


def polyline_to_csv(poly: Polyline) -> str:
    """CSV in both coordinate systems; 17 significant digits round-trip."""
    fig = poly.figure_points()
    out = io.StringIO()
    out.write("t,w1,w2,x1,x2\n")
    for t, (w1, w2), (x1, x2) in zip(poly.ts, poly.points, fig):
        out.write(f"{fnum(t)},{fnum(w1)},{fnum(w2)},{fnum(x1)},{fnum(x2)}\n")
    return out.getvalue()


def profile_to_csv(profile: np.ndarray) -> str:
    out = io.StringIO()
    out.write("x1,slope_left,slope_right\n")
    for x1, sl, sr in profile:
        out.write(f"{fnum(x1)},{fnum(sl)},{fnum(sr)}\n")
    return out.getvalue()


def level_stats_to_csv(stats) -> str:
    out = io.StringIO()
    out.write("walk_value,count,sum_s,sum_t\n")
    for w, c, s, t in zip(stats.walk_values, stats.counts, stats.sum_s, stats.sum_t):
        out.write(f"{int(w)},{int(c)},{fnum(s)},{fnum(t)}\n")
    return out.getvalue()


def _coords(points: np.ndarray, coords: str) -> np.ndarray:
    return to_figure_array(points) if coords == "figure" else points


def render_svg(p: EigenParams, poly: Polyline, spec: RenderSpec) -> str:
    """Standards-conforming SVG of the curve, with optional overlays.

    Figure coordinates are drawn y-up (graph convention); the derivative
    overlay adds a second panel below the curve.  For parabola-family
    parameters in figure coordinates, the maximal deviation from the closed
    parabola is recorded in the document metadata.
    """
    pts = _coords(poly.points, spec.coords)
    panels = 2 if "derivative" in spec.overlays else 1
    panel_h = spec.height // panels
    canvas = SvgCanvas(spec.width, spec.height)

    xmin, ymin = pts.min(axis=0)
    xmax, ymax = pts.max(axis=0)
    overlay_polys = []
    if "triangles" in spec.overlays:
        for word in ((), (1,), (2,)):
            overlay_polys.append(np.array(piece_triangle(p, word)))
    if "squares" in spec.overlays:
        n = min(spec.overlay_depth, spec.depth)
        for j in range(2 ** n):
            word = tuple(1 if (j >> (n - 1 - k)) & 1 else 2 for k in range(n))
            overlay_polys.append(np.array(piece_rectangle(p, word)))
    for poly_pts in overlay_polys:
        q = _coords(poly_pts, spec.coords)
        xmin = min(xmin, q[:, 0].min())
        xmax = max(xmax, q[:, 0].max())
        ymin = min(ymin, q[:, 1].min())
        ymax = max(ymax, q[:, 1].max())

    win = DataWindow(xmin, xmax, ymin, ymax, spec.width, panel_h)
    for poly_pts in overlay_polys:
        q = _coords(poly_pts, spec.coords)
        canvas.polygon(win.map_points(q), stroke="#999999", stroke_width=0.75)
    canvas.path(win.map_points(pts), stroke="#000000", stroke_width=spec.stroke_width)

    if "derivative" in spec.overlays:
        profile = derivative_profile(p, max(1, min(spec.depth, 10)))
        # Interleave one-sided slopes so disagreeing endpoints show as jumps.
        seq = []
        for x1, sl, sr in profile:
            seq.append((x1, sl))
            if sr != sl:
                seq.append((x1, sr))
        arr = np.array(seq)
        dwin = DataWindow(float(arr[:, 0].min()), float(arr[:, 0].max()),
                          float(arr[:, 1].min()), float(arr[:, 1].max()),
                          spec.width, panel_h)
        shifted = [(x, y + panel_h) for x, y in dwin.map_points(arr)]
        canvas.path(shifted, stroke="#333333", stroke_width=spec.stroke_width)

    meta = {"coords": spec.coords, "depth": poly.depth}
    if spec.coords == "figure" and validate_params(p).is_parabola:
        fig = poly.figure_points()
        dev = np.max(np.abs(fig[:, 1] - (fig[:, 0] ** 2 + 1.0) / 2.0))
        meta["parabola_max_deviation"] = float(dev)
    canvas.metadata(meta)
    return canvas.tostring()


def write_atomic(path: str, data: str) -> None:
    """Write via a temporary file in the target directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".selfaffine-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
