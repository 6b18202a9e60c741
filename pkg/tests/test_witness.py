"""Chord-angle witness for self-similar sets without tangents."""

import json
import math

import numpy as np
import pytest

from selfaffine import (
    Similarity,
    SimilarityIFS,
    angle_floor,
    no_tangent_scan,
    sierpinski_triangle,
    square_carpet,
)
from selfaffine.witness import diameter_upper_bound


class TestSimilarity:
    def test_fixed_point(self):
        f = Similarity(0.0, 0.5, 0.25, 0.25)
        assert f.fixed_point() == pytest.approx((0.5, 0.5))

    def test_rotation_matrix(self):
        f = Similarity(math.pi / 2, 0.5, 0.0, 0.0)
        assert f.matrix() == pytest.approx(np.array([[0.0, -0.5], [0.5, 0.0]]), abs=1e-15)

    def test_scale_range_enforced(self):
        with pytest.raises(ValueError):
            Similarity(0.0, 1.0, 0.0, 0.0)
        with pytest.raises(ValueError):
            Similarity(0.0, -0.2, 0.0, 0.0)


class TestSimilarityIFS:
    def test_default_anchors_are_map_fixed_points(self):
        ifs = sierpinski_triangle()
        pts = ifs.anchor_points()
        assert pts == pytest.approx(
            np.array([(0.0, 0.0), (1.0, 0.0), (0.5, math.sqrt(3) / 2)]), abs=1e-12
        )

    def test_point_of_word_address(self):
        ifs = sierpinski_triangle()
        # Map 0 applied to the fixed point of map 1: midpoint of an edge.
        assert ifs.point_of((0, 1)) == pytest.approx((0.5, 0.0))

    def test_collinear_anchors_rejected(self):
        maps = tuple(Similarity(0.0, 0.4, t, 0.0) for t in (0.0, 0.3, 0.6))
        with pytest.raises(ValueError):
            SimilarityIFS(maps).anchor_points()

    def test_from_json_round_trip(self):
        doc = {
            "maps": [
                {"angle": 0.0, "scale": 0.5, "tx": 0.0, "ty": 0.0},
                {"angle": 0.1, "scale": 0.5, "tx": 0.5, "ty": 0.0},
                {"angle": 0.0, "scale": 0.5, "tx": 0.25, "ty": 0.4},
            ],
            "anchors": [[0], [1], [2]],
        }
        ifs = SimilarityIFS.from_json(doc)
        assert len(ifs.maps) == 3
        assert ifs.anchors == ((0,), (1,), (2,))

    def test_anchor_count_enforced(self):
        ifs = sierpinski_triangle()
        with pytest.raises(ValueError):
            SimilarityIFS(ifs.maps, anchors=((0,), (1,)))


class TestCertifiedBounds:
    def test_sierpinski_diameter(self):
        # The attractor contains two vertices at distance 1 and sits inside
        # the unit triangle, so the bound lands just above 1.
        d = diameter_upper_bound(sierpinski_triangle())
        assert 1.0 <= d <= 1.01

    def test_square_diameter(self):
        d = diameter_upper_bound(square_carpet())
        assert math.sqrt(2.0) - 1e-12 <= d <= math.sqrt(2.0) + 0.02

    def test_sierpinski_angle_floor(self):
        # Inradius of the unit equilateral triangle is sqrt(3)/6; with the
        # exact diameter 1 the floor would be asin(sqrt(3)/6).
        phi = angle_floor(sierpinski_triangle())
        assert phi == pytest.approx(math.asin(math.sqrt(3.0) / 6.0), abs=2e-3)
        assert phi <= math.asin(math.sqrt(3.0) / 6.0)

    def test_refine_depth_zero_is_coarser(self):
        ifs = sierpinski_triangle()
        assert diameter_upper_bound(ifs, 0) >= diameter_upper_bound(ifs)


class TestNoTangentScan:
    def test_sierpinski_clean(self):
        rep = no_tangent_scan(sierpinski_triangle(), depth=8, samples=40, seed=3)
        assert rep.ok
        assert rep.target == pytest.approx(rep.phi / 2.0)
        assert len(rep.per_scale_min) == 8
        assert min(rep.per_scale_min) >= rep.target

    def test_square_carpet_clean(self):
        rep = no_tangent_scan(square_carpet(), depth=6, samples=30, seed=5)
        assert rep.ok

    def test_deterministic_for_fixed_seed(self):
        a = no_tangent_scan(sierpinski_triangle(), depth=5, samples=10, seed=7)
        b = no_tangent_scan(sierpinski_triangle(), depth=5, samples=10, seed=7)
        assert a == b
        c = no_tangent_scan(sierpinski_triangle(), depth=5, samples=10, seed=8)
        assert c.per_scale_min != a.per_scale_min

    def test_json_report_shape(self):
        rep = no_tangent_scan(sierpinski_triangle(), depth=3, samples=5, seed=1)
        doc = json.loads(rep.to_json())
        assert doc["ok"] is True
        assert doc["depth"] == 3
        assert len(doc["per_scale_min"]) == 3

    def test_argument_validation(self):
        with pytest.raises(ValueError):
            no_tangent_scan(sierpinski_triangle(), depth=0)
        with pytest.raises(ValueError):
            no_tangent_scan(sierpinski_triangle(), depth=3, samples=0)
