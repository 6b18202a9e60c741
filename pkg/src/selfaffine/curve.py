"""Address map, point evaluation and polyline sampling of the curve.

Points of the curve are named by words over {1, 2}: digit 1 stands for the
first map, digit 2 for the second.  The binary digits of a parameter
t in [0, 1] give the address (bit 1 -> digit 1, bit 0 -> digit 2), so the
curve runs from e2 at t = 0 to e1 at t = 1.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .ifs import (
    E1,
    E2,
    Affine2,
    EigenParams,
    IDENTITY,
    build_maps,
    compose,
    compose_word,
    to_figure_array,
)

DEPTH_CAP = 26


@dataclass(frozen=True)
class Address:
    """A finite word over {1, 2}, optionally followed by a repeating digit.

    Canonical form: the word never ends in the tail digit (the tail carries
    all repetition), so e.g. word (1,) with tail 1 normalizes to the pure
    tail address ((), 1).
    """

    word: tuple[int, ...]
    tail: Optional[int] = None

    def __post_init__(self):
        for d in self.word:
            if d not in (1, 2):
                raise ValueError(f"address digits must be 1 or 2, got {d!r}")
        if self.tail not in (None, 1, 2):
            raise ValueError(f"tail digit must be 1 or 2, got {self.tail!r}")
        if self.tail is not None:
            word = self.word
            while word and word[-1] == self.tail:
                word = word[:-1]
            object.__setattr__(self, "word", word)

    def digits(self, n: int) -> tuple[int, ...]:
        """The first n digits, extending by the tail when present."""
        if n <= len(self.word):
            return self.word[:n]
        if self.tail is None:
            raise ValueError("address too short and has no repeating tail")
        return self.word + (self.tail,) * (n - len(self.word))


def address_of_t(t: float, depth: int) -> Address:
    """Address digits of the binary expansion of t, to the requested depth.

    Dyadic t gets the terminating expansion (tail digit 2); t = 1 is the
    pure repeating-1 address of the endpoint e1.
    """
    if depth < 1:
        raise ValueError("depth must be positive")
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [0, 1], got {t!r}")
    if t == 1.0:
        return Address((), 1)
    word = []
    x = t
    for _ in range(depth):
        x *= 2.0
        if x >= 1.0:
            word.append(1)
            x -= 1.0
        else:
            word.append(2)
        if x == 0.0:
            return Address(tuple(word), 2)
    return Address(tuple(word), None)


def alternate_address(a: Address) -> Optional[Address]:
    """The second address of a dyadic point, or None when unique.

    A point with terminating address w1 followed by repeating 2 equals the
    point w2 followed by repeating 1; the two endpoints have one address.
    """
    if a.tail is None or not a.word:
        return None
    if a.tail == 2:
        return Address(a.word[:-1] + (2,), 1)
    return Address(a.word[:-1] + (1,), 2)


class PointEstimate(NamedTuple):
    point: tuple[float, float]
    bound: float


def _triangle_diam(f: Affine2) -> float:
    """Diameter of the image of the triangle conv{0, e1, e2}."""
    v0 = (f.t1, f.t2)
    v1 = f.apply(E1)
    v2 = f.apply(E2)
    return max(
        math.hypot(v0[0] - v1[0], v0[1] - v1[1]),
        math.hypot(v0[0] - v2[0], v0[1] - v2[1]),
        math.hypot(v1[0] - v2[0], v1[1] - v2[1]),
    )


def point_at(p: EigenParams, a: Address, eps: float = 1e-9) -> PointEstimate:
    """A curve point for the address, with a guaranteed error bound.

    Tailed addresses resolve exactly: the repeating digit converges to the
    fixed point of its map, so the limit is the word image of e1 or e2.
    A tail-free word only names a piece; the bound is that piece's diameter.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    f = compose_word(p, a.word)
    if a.tail is not None:
        target = E1 if a.tail == 1 else E2
        return PointEstimate(f.apply(target), 0.0)
    return PointEstimate(f.apply(E1), _triangle_diam(f))


@dataclass(frozen=True)
class Polyline:
    """Piece endpoints of the level-n subdivision, in curve order."""

    points: np.ndarray  # (2^n + 1, 2) in working coordinates
    depth: int

    def __post_init__(self):
        if self.points.shape != (2 ** self.depth + 1, 2):
            raise ValueError("polyline must hold 2^depth + 1 points")

    @property
    def ts(self) -> np.ndarray:
        """Dyadic parameter of each vertex."""
        n = self.points.shape[0]
        return np.arange(n) / float(n - 1)

    def figure_points(self) -> np.ndarray:
        return to_figure_array(self.points)


def depth_cap() -> int:
    """Resource guard for full enumeration; overridable by environment."""
    raw = os.environ.get("SELFAFFINE_MAX_DEPTH")
    if raw is not None:
        return int(raw)
    return DEPTH_CAP


def sample_curve(p: EigenParams, depth: int, max_depth: Optional[int] = None) -> Polyline:
    """All level-n piece endpoints, from e2 to e1.

    Built by the doubling recursion P_{k+1} = f2(P_k) ++ f1(P_k), which is
    a depth-first traversal of the words in parameter order.
    """
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    cap = depth_cap() if max_depth is None else max_depth
    if depth > cap:
        raise ValueError(f"depth {depth} exceeds cap {cap}")
    f1, f2 = build_maps(p)
    pts = np.array([E2, E1], dtype=float)
    for _ in range(depth):
        lower = f2.apply_array(pts)
        upper = f1.apply_array(pts)
        pts = np.concatenate([lower, upper[1:]])
    return Polyline(pts, depth)


def piece_triangle(p: EigenParams, word: Sequence[int]) -> list[tuple[float, float]]:
    """Vertices of the word image of the triangle conv{0, e1, e2}."""
    f = compose_word(p, tuple(word))
    return [f.apply(E1), f.apply(E2), (f.t1, f.t2)]


def piece_rectangle(p: EigenParams, word: Sequence[int]) -> list[tuple[float, float]]:
    """Vertices of the word image of the unit square, in boundary order."""
    f = compose_word(p, tuple(word))
    return [(f.t1, f.t2), f.apply(E1), f.apply((1.0, 1.0)), f.apply(E2)]
