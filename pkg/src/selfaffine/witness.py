"""Chord-angle witness against tangents of plane self-similar sets.

Three attractor points in general position admit a ball inside their convex
hull, which bounds from below the angle some chord from any attractor point
must subtend with any candidate line.  Self-similarity transports the bound
into every scale, so a tangent line can never form.  The scan verifies this
mechanism numerically on seeded sample points.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

DEGENERACY_TOL = 1e-12
_REFINE_NODE_CAP = 3000


@dataclass(frozen=True)
class Similarity:
    """Contracting plane similarity: rotation by angle, scaling, translation."""

    angle: float
    scale: float
    tx: float
    ty: float

    def __post_init__(self):
        if not 0.0 < self.scale < 1.0:
            raise ValueError("similarity scale must lie in (0, 1)")

    def matrix(self) -> np.ndarray:
        c, s = math.cos(self.angle), math.sin(self.angle)
        return self.scale * np.array([[c, -s], [s, c]])

    def apply(self, pt: np.ndarray) -> np.ndarray:
        return self.matrix() @ np.asarray(pt, dtype=float) + np.array([self.tx, self.ty])

    def fixed_point(self) -> np.ndarray:
        m = np.eye(2) - self.matrix()
        return np.linalg.solve(m, np.array([self.tx, self.ty]))


@dataclass(frozen=True)
class SimilarityIFS:
    """A finite family of contracting similarities plus three anchor addresses.

    Anchor addresses are words over the map indices; a word resolves to the
    image of the last map's fixed point under the preceding maps, which is
    always an attractor point.  Default anchors are the fixed points of the
    first three maps.
    """

    maps: tuple[Similarity, ...]
    anchors: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        if len(self.maps) < 2:
            raise ValueError("an IFS needs at least two maps")
        if not self.anchors:
            if len(self.maps) < 3:
                raise ValueError("default anchors need at least three maps")
            object.__setattr__(self, "anchors", ((0,), (1,), (2,)))
        if len(self.anchors) != 3:
            raise ValueError("exactly three anchor addresses are required")
        for addr in self.anchors:
            if not addr or any(not 0 <= d < len(self.maps) for d in addr):
                raise ValueError(f"bad anchor address {addr!r}")

    def point_of(self, address: Sequence[int]) -> np.ndarray:
        pt = self.maps[address[-1]].fixed_point()
        for d in reversed(address[:-1]):
            pt = self.maps[d].apply(pt)
        return pt

    def anchor_points(self) -> np.ndarray:
        pts = np.array([self.point_of(a) for a in self.anchors])
        u, v = pts[1] - pts[0], pts[2] - pts[0]
        area2 = abs(u[0] * v[1] - u[1] * v[0])
        span = max(1.0, float(np.max(np.abs(pts))))
        if area2 <= DEGENERACY_TOL * span * span:
            raise ValueError("anchor points are (nearly) collinear")
        return pts

    @classmethod
    def from_json(cls, doc) -> "SimilarityIFS":
        maps = tuple(Similarity(m["angle"], m["scale"], m["tx"], m["ty"]) for m in doc["maps"])
        anchors = tuple(tuple(a) for a in doc.get("anchors", ()))
        return cls(maps, anchors)


def sierpinski_triangle() -> SimilarityIFS:
    """Three half-scale maps toward the vertices of a unit equilateral triangle."""
    verts = [(0.0, 0.0), (1.0, 0.0), (0.5, math.sqrt(3.0) / 2.0)]
    return SimilarityIFS(tuple(Similarity(0.0, 0.5, vx / 2.0, vy / 2.0) for vx, vy in verts))


def square_carpet() -> SimilarityIFS:
    """Four half-scale corner maps; the attractor is the full unit square."""
    verts = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]
    return SimilarityIFS(tuple(Similarity(0.0, 0.5, vx / 2.0, vy / 2.0) for vx, vy in verts))


def _inradius(pts: np.ndarray) -> float:
    a = float(np.linalg.norm(pts[1] - pts[2]))
    b = float(np.linalg.norm(pts[0] - pts[2]))
    c = float(np.linalg.norm(pts[0] - pts[1]))
    s = (a + b + c) / 2.0
    area = math.sqrt(max(0.0, s * (s - a) * (s - b) * (s - c)))
    return area / s


def diameter_upper_bound(ifs: SimilarityIFS, refine_depth: Optional[int] = None) -> float:
    """Certified upper bound for the attractor diameter.

    An invariant ball around the fixed-point centroid is refined by mapping
    its center through all words of a bounded length; the bound is the
    spread of the word centers plus twice the residual ball radius.
    """
    m = len(ifs.maps)
    centroid = np.mean([f.fixed_point() for f in ifs.maps], axis=0)
    r = max(
        float(np.linalg.norm(f.apply(centroid) - centroid)) / (1.0 - f.scale)
        for f in ifs.maps
    )
    if refine_depth is None:
        refine_depth = 0
        while m ** (refine_depth + 1) <= _REFINE_NODE_CAP:
            refine_depth += 1
    centers = centroid.reshape(1, 2)
    radius = r
    for _ in range(refine_depth):
        centers = np.concatenate([
            centers @ f.matrix().T + np.array([f.tx, f.ty]) for f in ifs.maps
        ])
        radius *= max(f.scale for f in ifs.maps)
    diff = centers[:, None, :] - centers[None, :, :]
    spread = float(np.sqrt(np.max(np.sum(diff * diff, axis=-1))))
    return spread + 2.0 * radius


def angle_floor(ifs: SimilarityIFS, refine_depth: Optional[int] = None) -> float:
    """Certified lower bound for the chord-angle guarantee, in radians."""
    pts = ifs.anchor_points()
    r_in = _inradius(pts)
    diam = diameter_upper_bound(ifs, refine_depth)
    return math.asin(min(1.0, r_in / diam))


@dataclass(frozen=True)
class WitnessReport:
    phi: float
    target: float
    depth: int
    directions: int
    samples: int
    seed: int
    per_scale_min: tuple[float, ...]
    violations: tuple[dict, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> str:
        doc = {
            "phi": self.phi,
            "target": self.target,
            "depth": self.depth,
            "directions": self.directions,
            "samples": self.samples,
            "seed": self.seed,
            "per_scale_min": list(self.per_scale_min),
            "violations": list(self.violations),
            "ok": self.ok,
        }
        return json.dumps(doc, sort_keys=True)


def _chord_angles(chords: np.ndarray, dirs: np.ndarray) -> np.ndarray:
    """Angles in [0, pi/2] between each chord and each unit direction."""
    norms = np.linalg.norm(chords, axis=-1)
    cross = np.abs(
        chords[..., None, 0] * dirs[None, None, :, 1]
        - chords[..., None, 1] * dirs[None, None, :, 0]
    )
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = np.clip(cross / norms[..., None], 0.0, 1.0)
    return np.arcsin(ratio)


def no_tangent_scan(
    ifs: SimilarityIFS,
    depth: int,
    directions: int = 64,
    samples: int = 100,
    seed: int = 0,
) -> WitnessReport:
    """Seeded scan for the no-tangent mechanism.

    For every sampled attractor point and every candidate line through it,
    each scale level must contain an anchor-image chord subtending at least
    half the certified angle with the line.  Violations are reported, never
    raised: a nonempty list would indicate an implementation bug.
    """
    if depth < 1 or directions < 1 or samples < 1:
        raise ValueError("depth, directions and samples must be positive")
    rng = np.random.default_rng(seed)
    phi = angle_floor(ifs)
    target = phi / 2.0
    anchors = ifs.anchor_points()
    m = len(ifs.maps)

    thetas = np.arange(directions) * math.pi / directions
    grid_dirs = np.column_stack((np.cos(thetas), np.sin(thetas)))

    per_scale_min = np.full(depth, np.inf)
    violations: list[dict] = []
    for si in range(samples):
        address = rng.integers(0, m, size=depth + 30)
        x = ifs.point_of(address)
        # Anchor images of every scale prefix.
        endpoints = np.empty((depth, 3, 2))
        imgs = anchors.copy()
        for k in range(depth):
            f = ifs.maps[address[k]]
            # prefix of length k+1 applied to anchors, built map by map
            imgs = anchors.copy()
            for d in address[: k + 1][::-1]:
                imgs = imgs @ ifs.maps[d].matrix().T + np.array(
                    [ifs.maps[d].tx, ifs.maps[d].ty]
                )
            endpoints[k] = imgs
        chords = endpoints - x  # (depth, 3, 2)
        lengths = np.linalg.norm(chords, axis=-1)
        valid = lengths > 1e-13

        # Most tangent-like candidate: principal direction of the finest chords.
        fine = chords[-1][valid[-1]]
        if len(fine):
            _, _, vt = np.linalg.svd(fine - fine.mean(axis=0), full_matrices=False)
            dirs = np.concatenate([grid_dirs, vt[:1]])
        else:
            dirs = grid_dirs

        angles = _chord_angles(chords, dirs)  # (depth, 3, D)
        angles = np.where(valid[:, :, None], angles, -np.inf)
        best_per_line = np.max(angles, axis=1)  # (depth, D)
        scale_min = np.min(best_per_line, axis=1)  # min over candidate lines
        per_scale_min = np.minimum(per_scale_min, scale_min)
        for k in np.nonzero(scale_min < target)[0]:
            violations.append({
                "sample": si,
                "scale": int(k + 1),
                "min_angle": float(scale_min[k]),
            })

    return WitnessReport(
        phi=phi,
        target=target,
        depth=depth,
        directions=directions,
        samples=samples,
        seed=seed,
        per_scale_min=tuple(float(v) for v in per_scale_min),
        violations=tuple(violations),
    )
