"""Acceptance suite: ten pinned criteria, one printed pass/fail line each.

Run with -s (or rely on the terminal summary) to see the lines; each test
is independent and states its tolerance inline.
"""

import math
import os
import subprocess
import sys

import numpy as np
import pytest

from selfaffine import (
    Address,
    EigenParams,
    address_of_t,
    c1_condition,
    chord_length_sum,
    classify,
    contraction_delta,
    no_tangent_scan,
    one_sided_slopes_at_z,
    sample_curve,
    second_difference_probe,
    sierpinski_triangle,
    slim_mass_bound,
    tangent_at,
)
from selfaffine.ifs import build_maps, compose
from selfaffine.tangent import CONE_W, cone_image

from conftest import ASPECT_WALK, C1_POINT, PARABOLA, SEGMENT


def _report(name: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"[{status}] {name}{suffix}")
    assert ok, f"{name}{suffix}"


def test_criterion_1_parabola_identity():
    """10k sampled points satisfy both closed forms of the parabola."""
    poly = sample_curve(PARABOLA, 14)  # 16385 points covers the 10k requirement
    w = poly.points
    dev_sqrt = float(np.max(np.abs(np.sqrt(w[:, 0]) + np.sqrt(w[:, 1]) - 1.0)))
    fig = poly.figure_points()
    dev_graph = float(np.max(np.abs(fig[:, 1] - (fig[:, 0] ** 2 + 1.0) / 2.0)))
    ok = dev_sqrt < 1e-9 and dev_graph < 1e-9
    _report("criterion 1: parabola identity", ok,
            f"max |sqrt(w1)+sqrt(w2)-1| = {dev_sqrt:.2e}, graph dev = {dev_graph:.2e}")


def test_criterion_2_parabola_family():
    """The one-parameter family classifies as Parabola with the C1 identity."""
    worst = 0.0
    ok = True
    for lam1 in np.arange(0.1, 0.95, 0.1):
        lam1 = round(float(lam1), 10)
        lam2 = 1.0 - lam1
        p = EigenParams(lam1, lam1 ** 2, lam2, lam2 ** 2)
        residual = abs(p.nu1 * p.nu2 - p.alpha * p.beta)
        worst = max(worst, residual)
        if classify(p).kind.value != "Parabola" or not c1_condition(p, 1e-12):
            ok = False
    ok = ok and worst <= 1e-12
    _report("criterion 2: parabola family classification", ok,
            f"worst C1 residual {worst:.2e}")


def test_criterion_3_one_sided_slopes():
    """Slope pairs at the junction are exact for the two reference cases."""
    walk = one_sided_slopes_at_z(ASPECT_WALK)
    parab = one_sided_slopes_at_z(PARABOLA)
    ok = walk == (0.0, None) and parab == (-1.0, -1.0)
    _report("criterion 3: one-sided slopes at the junction", ok,
            f"diagonal case {walk}, parabola case {parab}")


def _finite_difference_slope(points: np.ndarray, target_w1: float) -> float:
    """Figure-coordinate chord slope around the polyline point nearest x."""
    i = int(np.argmin(np.abs(points[:, 0] - target_w1)))
    i = min(max(i, 1), len(points) - 2)
    a, b = points[i - 1], points[i + 1]
    return ((b[0] + b[1]) - (a[0] + a[1])) / ((b[0] - b[1]) - (a[0] - a[1]))


def test_criterion_4_c1_tangent_agreement():
    """Cone tangents at 50 random addresses match finite differences."""
    rng = np.random.default_rng(42)
    points = sample_curve(C1_POINT, 22).points
    worst_width = 0.0
    worst_slope = 0.0
    for _ in range(50):
        word = tuple(int(d) for d in rng.integers(1, 3, size=400))
        line = tangent_at(C1_POINT, Address(word, None), eps=1e-9, max_depth=400)
        worst_width = max(worst_width, line.width)
        mats = build_maps(C1_POINT)
        pt = compose([mats[d - 1] for d in word[:22]]).apply((1.0, 0.0))
        fd = _finite_difference_slope(points, pt[0])
        worst_slope = max(worst_slope, abs(line.slope_figure - fd))
    ok = worst_width < 1e-9 and worst_slope < 1e-4
    _report("criterion 4: C1 tangent agreement", ok,
            f"max width {worst_width:.2e}, max slope diff {worst_slope:.2e}")


def test_criterion_5_cone_width_decay():
    """Each 1-2 factor shrinks the cone by at least the certified delta."""
    rng = np.random.default_rng(5)
    violations = 0
    checked = 0
    for _ in range(20):
        while True:
            l1 = rng.uniform(0.2, 0.8)
            l2 = rng.uniform(0.2, 0.8)
            hi2 = min(l2, 1.0 - l1 - 0.02)
            hi1 = min(l1, 1.0 - l2 - 0.02)
            if hi2 <= 0.02 or hi1 <= 0.02:
                continue
            n2 = rng.uniform(0.02, hi2)
            n1 = rng.uniform(0.02, min(hi1, 0.97 - n2))
            p = EigenParams(l1, n1, l2, n2)
            if p.alpha < 0 and p.beta < 0 and p.nu1 + p.nu2 < 1:
                break
        delta = contraction_delta(p)
        digits = list(rng.integers(1, 3, size=30))
        digits[10:12] = [1, 2]  # guarantee at least one 1-2 factor
        f1, f2 = build_maps(p)
        mats = {1: f1, 2: f2}
        b = None
        widths = []
        for d in digits:
            b = mats[d] if b is None else compose([b, mats[d]])
            widths.append(cone_image(b, CONE_W).width)
        # Greedy count of disjoint 1-2 factors among the first k digits.
        m = 0
        k = 1
        while k < len(digits):
            if digits[k - 1] == 1 and digits[k] == 2:
                m += 1
                bound = (1.0 - delta) ** (m - 1) * math.sqrt(2.0)
                checked += 1
                if widths[k - 1] > bound * (1.0 + 1e-12):
                    violations += 1
                k += 2
            else:
                k += 1
    _report("criterion 5: cone width decay", violations == 0,
            f"{checked} factor checks, {violations} violations")


def test_criterion_6_length_bounds():
    """Chord sums are monotone, capped at 2, and hit the pinned values."""
    vals = [chord_length_sum(ASPECT_WALK, d) for d in range(0, 25)]
    monotone = all(a <= b + 1e-12 for a, b in zip(vals, vals[1:]))
    capped = all(v <= 2.0 for v in vals)
    d1 = abs(vals[1] - 2.0 * math.sqrt(5.0) / 3.0)
    deep_ok = vals[24] >= 1.90
    seg_ok = all(
        abs(chord_length_sum(SEGMENT, d) - math.sqrt(2.0)) < 1e-12 for d in (1, 8, 20)
    )
    ok = monotone and capped and d1 < 1e-12 and vals[1] >= 1.49 and deep_ok and seg_ok
    _report("criterion 6: length bounds", ok,
            f"depth-1 {vals[1]:.10f}, depth-24 {vals[24]:.10f}, segment sqrt2 {seg_ok}")


def test_criterion_7_slim_rectangle_bound():
    """Nonpositive-walk mass stays below the (8/9)^(n/2) envelope."""
    violations = []
    for n in range(10, 31, 2):
        bound = (8.0 / 9.0) ** (n // 2)
        value = slim_mass_bound(ASPECT_WALK, n)
        if value > bound:
            violations.append(n)
    _report("criterion 7: slim-rectangle mass bound", not violations,
            f"even depths 10..30, violations {violations}")


def test_criterion_8_second_difference_probe():
    """Curvature probe: flat for the parabola, divergent for the C1 point."""
    scales = range(8, 21)
    parab = second_difference_probe(PARABOLA, 1 / 3, scales)
    dev = max(abs(v - 1.0) for v in parab)
    c1 = second_difference_probe(C1_POINT, 1 / 3, scales)
    spread = (max(c1) - min(c1)) / abs(max(c1))
    ok = dev < 1e-4 and spread > 0.1
    _report("criterion 8: second-difference probe", ok,
            f"parabola dev {dev:.2e}, C1 relative variation {spread:.3f}")


def test_criterion_9_no_tangent_witness():
    """Chord angles on the triangle attractor never drop below the floor."""
    rep = no_tangent_scan(sierpinski_triangle(), depth=10, directions=64,
                          samples=100, seed=0)
    threshold = 0.5 * math.asin(math.sqrt(3.0) / 6.0)
    observed = min(rep.per_scale_min)
    ok = rep.ok and observed >= threshold
    _report("criterion 9: no-tangent chord-angle witness", ok,
            f"min angle {observed:.4f} >= {threshold:.4f}, "
            f"violations {len(rep.violations)}")


def test_criterion_10_determinism(tmp_path):
    """CLI outputs are byte-identical across runs and thread counts."""
    commands = [
        ["validate", "--params", "0.55,0.225,0.55,0.225"],
        ["classify", "--params", "0.5,0.25,0.5,0.25"],
        ["sample", "--params", "0.5,0.25,0.5,0.25", "--depth", "10"],
        ["tangent", "--params", "0.55,0.225,0.55,0.225", "--address", "21" * 100],
        ["slopes", "--params", "0.5,0.25,0.5,0.25"],
        ["length", "--params", "0.6,0.2,0.55,0.25", "--depth", "10"],
        ["aspect", "--params", "0.6,0.2,0.55,0.25", "--depth", "10"],
        ["witness", "--depth", "6", "--samples", "20", "--seed", "3"],
    ]
    mismatches = []
    for cmd in commands:
        outs = []
        for threads in ("1", "4"):
            env = dict(os.environ, OMP_NUM_THREADS=threads)
            r = subprocess.run([sys.executable, "-m", "selfaffine.cli", *cmd],
                               capture_output=True, check=True, env=env)
            outs.append(r.stdout)
        if outs[0] != outs[1]:
            mismatches.append(cmd[0])
    # figures writes files rather than stdout; compare the artifact bytes.
    figure_sets = []
    for sub, threads in (("a", "1"), ("b", "4")):
        outdir = tmp_path / sub
        env = dict(os.environ, OMP_NUM_THREADS=threads)
        subprocess.run([sys.executable, "-m", "selfaffine.cli", "figures",
                        "--params", "0.5,0.25,0.5,0.25", "--depth", "10",
                        "--out", str(outdir)], check=True, env=env)
        figure_sets.append(sorted(outdir.iterdir()))
    for fa, fb in zip(*figure_sets):
        if fa.read_bytes() != fb.read_bytes():
            mismatches.append(f"figures:{fa.name}")
    _report("criterion 10: CLI determinism", not mismatches,
            f"9 commands compared, mismatches {mismatches}")
