"""Tangent cones, one-sided slopes and smoothness classification.

All chords of the curve lie in the double cone W given by the second and
fourth quadrants.  Nesting W under the matrices along an address shrinks it
to the tangent line; the shrinking rate is controlled by the image of W
under the product of the two generator matrices.  Cones are represented by
their two boundary points on the normalization line {w : w2 - w1 = 1}.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import mpmath
import numpy as np

from .curve import Address, address_of_t
from .ifs import (
    E1,
    E2,
    Affine2,
    EigenParams,
    IDENTITY,
    CLASSIFY_TOL,
    ValidationReport,
    build_maps,
    c1_residual,
    compose,
    validate_params,
)

SQRT2 = math.sqrt(2.0)
CONE_EPS_DEFAULT = 1e-9
CONE_MAX_DEPTH_DEFAULT = 400


class ConeError(ValueError):
    """Raised when a matrix image escapes the invariant double cone."""


def _project_to_ell(v: Sequence[float], tol: float = 1e-9) -> tuple[float, float]:
    """Second-quadrant representative of a W direction on the line w2 - w1 = 1."""
    s = v[1] - v[0]
    if s == 0.0:
        raise ConeError("direction lies on the diagonal, outside the cone")
    q = (v[0] / s, v[1] / s)
    if not (-1.0 - tol <= q[0] <= tol):
        raise ConeError(f"direction {tuple(v)} is not inside the double cone")
    return q


@dataclass(frozen=True)
class Cone2:
    """Closed double subcone of W, stored by boundary points on the line ell."""

    a: tuple[float, float]
    b: tuple[float, float]

    def __post_init__(self):
        if self.a[0] > self.b[0]:
            lo, hi = self.b, self.a
            object.__setattr__(self, "a", lo)
            object.__setattr__(self, "b", hi)

    @property
    def width(self) -> float:
        return math.hypot(self.b[0] - self.a[0], self.b[1] - self.a[1])

    def midpoint_direction(self) -> tuple[float, float]:
        return ((self.a[0] + self.b[0]) / 2.0, (self.a[1] + self.b[1]) / 2.0)


CONE_W = Cone2((-1.0, 0.0), (0.0, 1.0))


def _as_matrix(m) -> tuple[tuple[float, float], tuple[float, float]]:
    if isinstance(m, Affine2):
        return ((m.m11, m.m12), (m.m21, m.m22))
    arr = np.asarray(m, dtype=float)
    if arr.shape != (2, 2):
        raise ValueError("expected a 2x2 matrix")
    return ((arr[0, 0], arr[0, 1]), (arr[1, 0], arr[1, 1]))


def cone_image(m, c: Cone2) -> Cone2:
    """Image cone spanned by the images of the boundary directions.

    Raises ConeError when the image is not contained in W (which signals a
    positive off-diagonal entry upstream).
    """
    (m11, m12), (m21, m22) = _as_matrix(m)
    ia = (m11 * c.a[0] + m12 * c.a[1], m21 * c.a[0] + m22 * c.a[1])
    ib = (m11 * c.b[0] + m12 * c.b[1], m21 * c.b[0] + m22 * c.b[1])
    return Cone2(_project_to_ell(ia), _project_to_ell(ib))


def contraction_delta(p: EigenParams) -> float:
    """Cone-shrinking constant of the product of the two generator matrices.

    Positive exactly when both off-diagonal entries are negative; the
    boundary regime reports 0 rather than raising.
    """
    report = validate_params(p)
    if not report.valid:
        raise ValueError("invalid parameters: " + "; ".join(report.violations))
    if p.alpha >= 0.0 or p.beta >= 0.0:
        return 0.0
    f1, f2 = build_maps(p)
    v = cone_image(compose([f1, f2]), CONE_W)
    d_low = math.hypot(v.a[0] + 1.0, v.a[1])
    d_high = math.hypot(v.b[0], v.b[1] - 1.0)
    return max(0.0, min(d_low, d_high) / SQRT2)


class Sidedness(str, enum.Enum):
    LEFT = "left"
    RIGHT = "right"
    TWO_SIDED = "two-sided"


def _canonical_direction(v: Sequence[float]) -> tuple[float, float]:
    """Unit direction, sign-normalized to the upper half plane."""
    n = math.hypot(v[0], v[1])
    if n == 0.0:
        raise ValueError("zero direction")
    d = (v[0] / n, v[1] / n)
    if d[1] < 0.0 or (d[1] == 0.0 and d[0] < 0.0):
        d = (-d[0], -d[1])
    return d


def _base_slope(d: Sequence[float]) -> Optional[float]:
    return None if d[0] == 0.0 else d[1] / d[0]


def _figure_slope(d: Sequence[float]) -> Optional[float]:
    run = d[0] - d[1]
    return None if run == 0.0 else (d[0] + d[1]) / run


@dataclass(frozen=True)
class TangentLine:
    """A tangent direction (up to sign) with sidedness and slope views.

    A slope of None marks a vertical line in the respective coordinates.
    """

    direction: tuple[float, float]
    sidedness: Sidedness
    slope_base: Optional[float]
    slope_figure: Optional[float]
    width: float
    converged: bool
    depth_used: int

    @classmethod
    def from_direction(cls, v, sidedness, width, converged, depth_used) -> "TangentLine":
        d = _canonical_direction(v)
        return cls(d, sidedness, _base_slope(d), _figure_slope(d), width, converged, depth_used)


def tangent_at(
    p: EigenParams,
    a: Address,
    eps: float = CONE_EPS_DEFAULT,
    max_depth: int = CONE_MAX_DEPTH_DEFAULT,
) -> TangentLine:
    """Tangent line at the point named by the address.

    Tail addresses are piece endpoints; their one-sided tangent is the word
    image of the coordinate axis fixed by the repeated map, which is exact.
    Other addresses iterate the cone until its width falls below eps; the
    achieved width is reported honestly when the iteration does not
    converge (possible in the boundary regime alpha = 0 or beta = 0).
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    if p.alpha > 0.0 or p.beta > 0.0:
        raise ValueError("tangent analysis requires alpha <= 0 and beta <= 0")
    f1, f2 = build_maps(p)
    mats = {1: f1, 2: f2}

    if a.tail is not None:
        acc = IDENTITY
        for d in a.word:
            acc = compose([acc, mats[d]])
        axis = E1 if a.tail == 1 else E2
        direction = acc.apply_linear(axis)
        side = Sidedness.LEFT if a.tail == 1 else Sidedness.RIGHT
        return TangentLine.from_direction(direction, side, 0.0, True, len(a.word))

    # The k-th cone is the image of W under the product of the first k
    # matrices (first digit outermost), so accumulate the product.
    b = IDENTITY
    cone = CONE_W
    used = 0
    for d in a.word:
        if used >= max_depth or cone.width < eps:
            break
        b = compose([b, mats[d]])
        cone = cone_image(b, CONE_W)
        used += 1
    width = cone.width
    return TangentLine.from_direction(
        cone.midpoint_direction(), Sidedness.TWO_SIDED, width, width < eps, used
    )


def one_sided_slopes_at_z(p: EigenParams) -> tuple[Optional[float], Optional[float]]:
    """Signed slopes of the one-sided tangents at the junction point.

    Left side comes from the second piece (direction (nu2, beta)), right
    side from the first piece (direction (alpha, nu1)); None marks a
    vertical tangent.  Both slopes are nonpositive for a decreasing graph.
    """
    report = validate_params(p)
    if not report.valid:
        raise ValueError("invalid parameters: " + "; ".join(report.violations))
    left = p.beta / p.nu2
    right = None if p.alpha == 0.0 else p.nu1 / p.alpha
    return left, right


def c1_condition(p: EigenParams, tol: float = CLASSIFY_TOL) -> bool:
    """Whether the one-sided tangents at the junction agree (within tol)."""
    report = validate_params(p, tol)
    if not report.valid:
        raise ValueError("invalid parameters: " + "; ".join(report.violations))
    return abs(c1_residual(p)) <= tol


class CurveClass(str, enum.Enum):
    SEGMENT = "Segment"
    PARABOLA = "Parabola"
    C1_SMOOTH = "C1Smooth"
    AE_DIFFERENTIABLE = "AEDifferentiable"
    UNCLASSIFIED = "Unclassified"


@dataclass(frozen=True)
class Classification:
    kind: CurveClass
    report: ValidationReport

    def __post_init__(self):
        # Implication chain: Parabola => C1 flags => a.e. differentiability flags.
        if self.kind is CurveClass.PARABOLA:
            if not (self.report.satisfies_c1 and self.report.satisfies_thm2i):
                raise AssertionError("parabola classification without C1 flags")
        if self.kind is CurveClass.C1_SMOOTH:
            if not self.report.satisfies_thm2i:
                raise AssertionError("C1 classification without the open-regime flags")

    def as_dict(self) -> dict:
        d = {"kind": self.kind.value}
        d.update(self.report.as_dict())
        return d


def classify(p: EigenParams, tol: float = CLASSIFY_TOL) -> Classification:
    """Smoothness regime of the curve for the given parameters."""
    report = validate_params(p, tol)
    if not report.valid:
        raise ValueError("invalid parameters: " + "; ".join(report.violations))
    if report.is_segment:
        kind = CurveClass.SEGMENT
    elif report.is_parabola:
        kind = CurveClass.PARABOLA
    elif report.satisfies_thm2i and report.satisfies_c1:
        kind = CurveClass.C1_SMOOTH
    elif report.satisfies_thm2i:
        kind = CurveClass.AE_DIFFERENTIABLE
    else:
        kind = CurveClass.UNCLASSIFIED
    return Classification(kind, report)


def derivative_profile(p: EigenParams, depth: int) -> np.ndarray:
    """One-sided slopes at the level-n piece endpoints, in figure coordinates.

    Returns an array with columns (x1, slope_left, slope_right) on a
    monotone x1 grid.  Interior grid points are the junction images; their
    one-sided tangent directions are the word images of the two junction
    directions.  The curve endpoints carry their single one-sided slope in
    both columns.
    """
    if depth < 1:
        raise ValueError("depth must be positive")
    if p.alpha > 0.0 or p.beta > 0.0:
        raise ValueError("derivative profile requires alpha <= 0 and beta <= 0")
    f1, f2 = build_maps(p)
    z = (p.nu2, p.nu1)
    dir_left = (p.nu2, p.beta)
    dir_right = (p.alpha, p.nu1)

    def fig_slope(v: tuple[float, float]) -> float:
        s = _figure_slope(v)
        if s is None:
            raise AssertionError("cone directions never become vertical in figure coords")
        return s

    rows = [(-1.0, -1.0, -1.0), (1.0, 1.0, 1.0)]  # endpoints e2 and e1
    stack = [(IDENTITY, 0)]
    while stack:
        f, level = stack.pop()
        pt = f.apply(z)
        rows.append((
            pt[0] - pt[1],
            fig_slope(f.apply_linear(dir_left)),
            fig_slope(f.apply_linear(dir_right)),
        ))
        if level + 1 < depth:
            stack.append((compose([f, f1]), level + 1))
            stack.append((compose([f, f2]), level + 1))
    arr = np.array(rows, dtype=float)
    return arr[np.argsort(arr[:, 0], kind="stable")]


# --- second-difference probe ------------------------------------------------

_PROBE_DPS = 30


def _mp_maps(p: EigenParams):
    lam1, nu1 = mpmath.mpf(p.lambda1), mpmath.mpf(p.nu1)
    lam2, nu2 = mpmath.mpf(p.lambda2), mpmath.mpf(p.nu2)
    alpha = nu2 + lam1 - 1
    beta = nu1 + lam2 - 1
    m1 = ((lam1, alpha, 1 - lam1), (mpmath.mpf(0), nu1, mpmath.mpf(0)))
    m2 = ((nu2, mpmath.mpf(0), mpmath.mpf(0)), (beta, lam2, 1 - lam2))
    return m1, m2


def _mp_digits(t, limit: int) -> list[int]:
    """Binary address digits of an mpf parameter (exact doubling)."""
    digits = []
    x = t
    for _ in range(limit):
        x *= 2
        if x >= 1:
            digits.append(1)
            x -= 1
        else:
            digits.append(2)
        if x == 0:
            break
    return digits


def _mp_point(t, m1, m2, limit: int):
    """Curve point at parameter t in multi-precision working coordinates."""
    digits = _mp_digits(t, limit)
    w1, w2 = mpmath.mpf(0), mpmath.mpf(1)  # e2, the t = 0 endpoint
    for d in reversed(digits):
        rows = m1 if d == 1 else m2
        w1, w2 = (
            rows[0][0] * w1 + rows[0][1] * w2 + rows[0][2],
            rows[1][0] * w1 + rows[1][1] * w2 + rows[1][2],
        )
    return w1, w2


def second_difference_probe(
    p: EigenParams,
    t: float,
    scales: Sequence[int],
) -> list[float]:
    """Symmetric second differences of the graph function at dyadic scales.

    For each scale k the step h is the x-extent of the level-k piece
    containing t; the estimate is (psi(x+h) - 2 psi(x) + psi(x-h)) / h^2 in
    figure coordinates.  Evaluated in multi-precision arithmetic so the
    cancellation at h ~ 1e-6 stays far below the reported digits.
    """
    kind = classify(p).kind
    if kind not in (CurveClass.PARABOLA, CurveClass.C1_SMOOTH, CurveClass.SEGMENT):
        raise ValueError("probe requires a segment, parabola or C1-regime curve")
    if not 0.0 < t < 1.0:
        raise ValueError("t must lie strictly inside (0, 1)")
    kmax = max(scales)
    a = address_of_t(t, kmax + 8)
    if a.tail is not None:
        raise ValueError("t must not be dyadic at the probed scales")

    with mpmath.workdps(_PROBE_DPS):
        m1, m2 = _mp_maps(p)
        lam_max = max(p.lambda1, p.lambda2)
        limit = int(math.ceil(_PROBE_DPS * math.log(10) / -math.log(lam_max))) + 8

        def x_of(tv):
            w1, w2 = _mp_point(tv, m1, m2, limit)
            return w1 - w2

        def y_of(tv):
            w1, w2 = _mp_point(tv, m1, m2, limit)
            return w1 + w2

        def solve_x(target, lo, hi):
            # x is strictly increasing in t; bisection on the parameter.
            t_tol = mpmath.mpf(10) ** (-(_PROBE_DPS - 5))
            while hi - lo > t_tol:
                mid = (lo + hi) / 2
                if x_of(mid) < target:
                    lo = mid
                else:
                    hi = mid
            return (lo + hi) / 2

        tm = mpmath.mpf(t)
        x0 = x_of(tm)
        y0 = y_of(tm)
        out = []
        for k in scales:
            word = a.digits(k)
            t_lo = mpmath.fsum(mpmath.mpf(2) ** -(i + 1) for i, d in enumerate(word) if d == 1)
            t_hi = t_lo + mpmath.mpf(2) ** -k
            h = x_of(t_hi) - x_of(t_lo)
            if x0 + h > x_of(mpmath.mpf(1)) or x0 - h < x_of(mpmath.mpf(0)):
                raise ValueError(f"probe window at scale {k} leaves the curve domain")
            tp = solve_x(x0 + h, tm, mpmath.mpf(1))
            tn = solve_x(x0 - h, mpmath.mpf(0), tm)
            d2 = (y_of(tp) - 2 * y0 + y_of(tn)) / (h * h)
            out.append(float(d2))
    return out
