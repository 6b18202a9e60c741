"""Length bounds and aspect-ratio statistics of the subdivision pieces.

For the monotone-graph regime the level-n chord sum is a lower bound for
the one-dimensional Hausdorff measure, which is itself at most 2.  When the
generator matrices are diagonal, pieces are axis-aligned rectangles whose
side lengths depend only on the digit counts of the word, so level sums
aggregate exactly over binomial classes indexed by the walk value
(#1-digits - #2-digits).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .curve import depth_cap, sample_curve
from .ifs import ALGEBRA_TOL, EigenParams, build_maps, validate_params

AGGREGATE_DEPTH_CAP = 40


def _require_monotone(p: EigenParams) -> None:
    report = validate_params(p)
    if not report.valid:
        raise ValueError("invalid parameters: " + "; ".join(report.violations))
    if p.alpha > 0.0 or p.beta > 0.0:
        raise ValueError("length analysis requires alpha <= 0 and beta <= 0")


def is_diagonal(p: EigenParams, tol: float = ALGEBRA_TOL) -> bool:
    """Whether both generator matrices are diagonal (within tol)."""
    return abs(p.alpha) <= tol and abs(p.beta) <= tol


@dataclass(frozen=True)
class LevelStats:
    """Per-walk-value aggregates of the level-n piece extents."""

    depth: int
    walk_values: np.ndarray  # sorted, subset of {-n, ..., n}
    counts: np.ndarray       # words per class
    sum_s: np.ndarray        # horizontal piece extents, summed per class
    sum_t: np.ndarray        # vertical piece extents, summed per class
    chord_lower_bound: float
    st_upper_bound: float

    def total_s(self) -> float:
        return float(math.fsum(self.sum_s))

    def total_t(self) -> float:
        return float(math.fsum(self.sum_t))


def _class_sides(p: EigenParams, depth: int):
    """Per-class piece extents for diagonal generators: s, t by #1-digits."""
    ones = np.arange(depth + 1)
    s = p.lambda1 ** ones * p.nu2 ** (depth - ones)
    t = p.nu1 ** ones * p.lambda2 ** (depth - ones)
    counts = np.array([math.comb(depth, int(a)) for a in ones], dtype=float)
    return ones, counts, s, t


def _enumerated_sides(p: EigenParams, depth: int):
    """Piece extents of every level-n word: components of M_word (1, -1)."""
    f1, f2 = build_maps(p)
    m1, m2 = f1.matrix(), f2.matrix()
    vecs = np.array([[1.0, -1.0]])
    ones = np.zeros(1, dtype=np.int64)
    for _ in range(depth):
        vecs = np.concatenate([vecs @ m2.T, vecs @ m1.T])
        ones = np.concatenate([ones, ones + 1])
    return ones, np.abs(vecs[:, 0]), np.abs(vecs[:, 1])


def chord_length_sum(p: EigenParams, depth: int, max_depth: Optional[int] = None) -> float:
    """Sum of level-n chord lengths: a lower bound for the curve length.

    Diagonal generators use the exact binomial-class aggregation (depth up
    to 40); otherwise the polyline is enumerated under the depth cap.
    """
    _require_monotone(p)
    if is_diagonal(p):
        if depth > AGGREGATE_DEPTH_CAP:
            raise ValueError(f"depth {depth} exceeds aggregation cap {AGGREGATE_DEPTH_CAP}")
        if depth == 0:
            return math.sqrt(2.0)
        _, counts, s, t = _class_sides(p, depth)
        return float(math.fsum(counts * np.hypot(s, t)))
    poly = sample_curve(p, depth, max_depth=max_depth)
    seg = np.diff(poly.points, axis=0)
    return float(np.sum(np.hypot(seg[:, 0], seg[:, 1])))


def level_stats(p: EigenParams, depth: int, max_depth: Optional[int] = None) -> LevelStats:
    """Exact per-class aggregation of piece extents at the given level."""
    _require_monotone(p)
    if depth < 1:
        raise ValueError("depth must be positive")
    if is_diagonal(p):
        if depth > AGGREGATE_DEPTH_CAP:
            raise ValueError(f"depth {depth} exceeds aggregation cap {AGGREGATE_DEPTH_CAP}")
        ones, counts, s, t = _class_sides(p, depth)
        walk = 2 * ones - depth
        chord = float(math.fsum(counts * np.hypot(s, t)))
        upper = float(math.fsum(counts * (s + t)))
        return LevelStats(depth, walk, counts, counts * s, counts * t, chord, upper)
    cap = depth_cap() if max_depth is None else max_depth
    if depth > cap:
        raise ValueError(f"depth {depth} exceeds cap {cap}")
    ones, s, t = _enumerated_sides(p, depth)
    walk_all = 2 * ones - depth
    values = np.arange(-depth, depth + 1, 2)
    idx = (walk_all + depth) // 2
    counts = np.bincount(idx, minlength=depth + 1).astype(float)
    sum_s = np.bincount(idx, weights=s, minlength=depth + 1)
    sum_t = np.bincount(idx, weights=t, minlength=depth + 1)
    chord = float(np.sum(np.hypot(s, t)))
    upper = float(np.sum(s + t))
    return LevelStats(depth, values, counts, sum_s, sum_t, chord, upper)


def slim_mass_bound(p: EigenParams, depth: int) -> float:
    """Total horizontal extent of the pieces with nonpositive walk value.

    Only defined for the symmetric diagonal family (equal eigenvalue pairs,
    zero off-diagonals), where the random-walk analysis applies.
    """
    _require_monotone(p)
    if not is_diagonal(p):
        raise ValueError("slim-mass bound requires diagonal generator matrices")
    if abs(p.lambda1 - p.lambda2) > ALGEBRA_TOL or abs(p.nu1 - p.nu2) > ALGEBRA_TOL:
        raise ValueError("slim-mass bound requires symmetric parameters")
    if depth > AGGREGATE_DEPTH_CAP:
        raise ValueError(f"depth {depth} exceeds aggregation cap {AGGREGATE_DEPTH_CAP}")
    ones, counts, s, _ = _class_sides(p, depth)
    keep = 2 * ones - depth <= 0
    return float(math.fsum(counts[keep] * s[keep]))


def walk_zero_hit_fraction(depth: int, samples: int, seed: int) -> float:
    """Fraction of random addresses whose walk value returns to zero.

    Seeded simulation stand-in for the recurrence of the symmetric random
    walk; no measure-theoretic claim is made.
    """
    if depth < 2 or samples < 1:
        raise ValueError("need depth >= 2 and at least one sample")
    rng = np.random.default_rng(seed)
    steps = rng.choice(np.array([-1, 1]), size=(samples, depth))
    walks = np.cumsum(steps, axis=1)
    hits = np.any(walks == 0, axis=1)
    return float(np.mean(hits))
