"""Two-map affine IFS in the plane: parameters, generator maps, composition.

The curve is defined by four eigenvalues (lambda1, nu1, lambda2, nu2).  The
two generator maps are upper/lower triangular in the working coordinate
system, with fixed points e1 = (1, 0) and e2 = (0, 1).  The off-diagonal
entries alpha and beta are derived quantities, never set independently, so
the junction identity f1(e2) = f2(e1) holds by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

# Tolerance for classifying parameter regimes (equality-flavoured tests).
CLASSIFY_TOL = 1e-9
# Tolerance for algebraic identities in double precision.
ALGEBRA_TOL = 1e-12

E1 = (1.0, 0.0)
E2 = (0.0, 1.0)


@dataclass(frozen=True)
class EigenParams:
    """The four contraction ratios defining a curve."""

    lambda1: float
    nu1: float
    lambda2: float
    nu2: float

    @property
    def alpha(self) -> float:
        return self.nu2 + self.lambda1 - 1.0

    @property
    def beta(self) -> float:
        return self.nu1 + self.lambda2 - 1.0

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.lambda1, self.nu1, self.lambda2, self.nu2)


def params_from_json(doc: dict) -> tuple[EigenParams, float]:
    """Build parameters from a JSON-style dict with optional "tol" key."""
    try:
        p = EigenParams(
            float(doc["lambda1"]),
            float(doc["nu1"]),
            float(doc["lambda2"]),
            float(doc["nu2"]),
        )
    except KeyError as exc:
        raise ValueError(f"missing parameter field: {exc}") from exc
    tol = float(doc.get("tol", CLASSIFY_TOL))
    return p, tol


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    violations: tuple[str, ...]
    is_segment: bool = False
    satisfies_thm2i: bool = False
    satisfies_c1: bool = False
    is_parabola: bool = False

    def as_dict(self) -> dict:
        return {
            "valid": self.valid,
            "violations": list(self.violations),
            "is_segment": self.is_segment,
            "satisfies_thm2i": self.satisfies_thm2i,
            "satisfies_c1": self.satisfies_c1,
            "is_parabola": self.is_parabola,
        }


def c1_residual(p: EigenParams) -> float:
    """Residual of the equal-one-sided-slopes condition at the junction."""
    return p.nu1 * p.nu2 - (1.0 - p.lambda1 - p.nu2) * (1.0 - p.lambda2 - p.nu1)


def validate_params(p: EigenParams, tol: float = CLASSIFY_TOL) -> ValidationReport:
    """Check the admissibility conditions and compute the regime flags.

    Invalid input never raises; every violated condition is listed by name.
    """
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    values = p.as_tuple()
    if not all(math.isfinite(v) for v in values):
        return ValidationReport(False, ("non-finite parameter",))

    violations = []
    for i, (lam, nu) in enumerate(((p.lambda1, p.nu1), (p.lambda2, p.nu2)), start=1):
        if nu <= 0:
            violations.append(f"nu{i} must be positive")
        if nu > lam:
            violations.append(f"nu{i} must not exceed lambda{i}")
        if lam >= 1:
            violations.append(f"lambda{i} must be below 1")

    nu_sum = p.nu1 + p.nu2
    is_segment = abs(nu_sum - 1.0) <= tol
    if nu_sum > 1.0 + tol:
        violations.append("nu1 + nu2 exceeds 1 (double points)")

    satisfies_thm2i = (p.lambda1 + p.nu2 < 1.0 - tol) and (p.lambda2 + p.nu1 < 1.0 - tol)
    satisfies_c1 = abs(c1_residual(p)) <= tol
    is_parabola = (
        abs(p.lambda1 + p.lambda2 - 1.0) <= tol
        and abs(p.nu1 - p.lambda1 ** 2) <= tol
        and abs(p.nu2 - p.lambda2 ** 2) <= tol
        and satisfies_c1
    )
    return ValidationReport(
        valid=not violations,
        violations=tuple(violations),
        is_segment=is_segment,
        satisfies_thm2i=satisfies_thm2i,
        satisfies_c1=satisfies_c1,
        is_parabola=is_parabola,
    )


@dataclass(frozen=True)
class Affine2:
    """A plane affine map x -> M x + t with M = ((m11, m12), (m21, m22))."""

    m11: float
    m12: float
    m21: float
    m22: float
    t1: float = 0.0
    t2: float = 0.0

    def apply(self, pt: Sequence[float]) -> tuple[float, float]:
        x, y = pt
        return (self.m11 * x + self.m12 * y + self.t1,
                self.m21 * x + self.m22 * y + self.t2)

    def apply_linear(self, v: Sequence[float]) -> tuple[float, float]:
        x, y = v
        return (self.m11 * x + self.m12 * y, self.m21 * x + self.m22 * y)

    def apply_array(self, pts: np.ndarray) -> np.ndarray:
        """Apply to an (N, 2) array of points."""
        m = self.matrix()
        return pts @ m.T + np.array([self.t1, self.t2])

    def matrix(self) -> np.ndarray:
        return np.array([[self.m11, self.m12], [self.m21, self.m22]])

    def translation(self) -> tuple[float, float]:
        return (self.t1, self.t2)


IDENTITY = Affine2(1.0, 0.0, 0.0, 1.0)


def build_maps(p: EigenParams, tol: float = CLASSIFY_TOL) -> tuple[Affine2, Affine2]:
    """The two generator maps.  Rejects invalid parameter vectors."""
    report = validate_params(p, tol)
    if not report.valid:
        raise ValueError("invalid parameters: " + "; ".join(report.violations))
    f1 = Affine2(p.lambda1, p.alpha, 0.0, p.nu1, 1.0 - p.lambda1, 0.0)
    f2 = Affine2(p.nu2, 0.0, p.beta, p.lambda2, 0.0, 1.0 - p.lambda2)
    return f1, f2


def compose(maps: Sequence[Affine2]) -> Affine2:
    """Left-to-right functional composition f_{j1} o ... o f_{jk}."""
    if not maps:
        raise ValueError("cannot compose an empty sequence of maps")
    acc = maps[0]
    for g in maps[1:]:
        acc = Affine2(
            acc.m11 * g.m11 + acc.m12 * g.m21,
            acc.m11 * g.m12 + acc.m12 * g.m22,
            acc.m21 * g.m11 + acc.m22 * g.m21,
            acc.m21 * g.m12 + acc.m22 * g.m22,
            acc.m11 * g.t1 + acc.m12 * g.t2 + acc.t1,
            acc.m21 * g.t1 + acc.m22 * g.t2 + acc.t2,
        )
    return acc


def compose_word(p: EigenParams, word: Iterable[int]) -> Affine2:
    """Composition along a digit word over {1, 2}; empty word is the identity."""
    f1, f2 = build_maps(p)
    acc = IDENTITY
    for d in word:
        if d == 1:
            acc = compose([acc, f1])
        elif d == 2:
            acc = compose([acc, f2])
        else:
            raise ValueError(f"digit must be 1 or 2, got {d!r}")
    return acc


def f1_power_closed_form(p: EigenParams, k: int, tol: float = ALGEBRA_TOL) -> Affine2:
    """The k-th iterate of the first map, by closed form.

    The off-diagonal entry is alpha * (lambda1^k - nu1^k) / (lambda1 - nu1)
    for distinct diagonal entries, and k * alpha * lambda1^(k-1) on the
    confluent branch (equality taken within tol).
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    lam, nu, a = p.lambda1, p.nu1, p.alpha
    if abs(lam - nu) <= tol:
        ak = k * a * lam ** (k - 1)
    else:
        ak = a * (lam ** k - nu ** k) / (lam - nu)
    return Affine2(lam ** k, ak, 0.0, nu ** k, 1.0 - lam ** k, 0.0)


def f2_power_closed_form(p: EigenParams, k: int, tol: float = ALGEBRA_TOL) -> Affine2:
    """The k-th iterate of the second map (mirror of the first-map formula)."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    lam, nu, b = p.lambda2, p.nu2, p.beta
    if abs(lam - nu) <= tol:
        bk = k * b * lam ** (k - 1)
    else:
        bk = b * (lam ** k - nu ** k) / (lam - nu)
    return Affine2(nu ** k, 0.0, bk, lam ** k, 0.0, 1.0 - lam ** k)


def to_figure_coords(w: Sequence[float]) -> tuple[float, float]:
    """Rotate to the coordinate system in which the curve is a graph over x1."""
    return (w[0] - w[1], w[0] + w[1])


def from_figure_coords(x: Sequence[float]) -> tuple[float, float]:
    return ((x[0] + x[1]) / 2.0, (x[1] - x[0]) / 2.0)


def to_figure_array(pts: np.ndarray) -> np.ndarray:
    """Vectorized coordinate rotation for an (N, 2) array."""
    return np.column_stack((pts[:, 0] - pts[:, 1], pts[:, 0] + pts[:, 1]))
