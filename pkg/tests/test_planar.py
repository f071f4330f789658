"""
测试平面精确谓词与模型多边形
"""

import math
from fractions import Fraction

import pytest

from surface_immersions.planar import (
    ModelPolygon,
    SegmentRelation,
    model_polygon,
    on_segment,
    orient,
    segment_relation,
    turn_angle,
)
from tests.conftest import pt


class TestPredicates:
    """测试有理坐标谓词"""

    def test_orient(self):
        assert orient(pt(0, 0), pt(1, 0), pt(0, 1)) == 1
        assert orient(pt(0, 0), pt(1, 0), pt(0, -1)) == -1
        assert orient(pt(0, 0), pt(1, 0), pt(5, 0)) == 0

    def test_on_segment(self):
        assert on_segment(pt("1/2", "1/2"), pt(0, 0), pt(1, 1))
        assert not on_segment(pt(2, 2), pt(0, 0), pt(1, 1))

    def test_proper_crossing_is_exact(self):
        relation, point = segment_relation(pt(0, 0), pt(1, 1), pt(0, 1), pt(1, 0))
        assert relation == SegmentRelation.PROPER
        assert point == (Fraction(1, 2), Fraction(1, 2))

    def test_touch_at_endpoint(self):
        relation, point = segment_relation(pt(0, 0), pt(1, 0), pt("1/2", 0), pt("1/2", 1))
        assert relation == SegmentRelation.TOUCH
        assert point == pt("1/2", 0)

    def test_collinear_overlap_and_disjoint(self):
        relation, _ = segment_relation(pt(0, 0), pt(2, 0), pt(1, 0), pt(3, 0))
        assert relation == SegmentRelation.OVERLAP
        relation, _ = segment_relation(pt(0, 0), pt(1, 0), pt(2, 0), pt(3, 0))
        assert relation == SegmentRelation.DISJOINT

    def test_parallel_segments_disjoint(self):
        relation, point = segment_relation(pt(0, 0), pt(1, 0), pt(0, 1), pt(1, 1))
        assert relation == SegmentRelation.DISJOINT
        assert point is None

    def test_turn_angle(self):
        assert turn_angle((1.0, 0.0), (0.0, 1.0)) == pytest.approx(math.pi / 2)
        assert turn_angle((1.0, 0.0), (0.0, -1.0)) == pytest.approx(-math.pi / 2)


class TestModelPolygon:
    """测试基本多边形模型"""

    def test_square_sides_run_counterclockwise(self):
        square = model_polygon(4)
        assert square.side_point(0, Fraction(1, 4)) == pt("1/4", 0)
        assert square.side_point(1, Fraction(1, 2)) == pt(1, "1/2")
        assert square.side_point(2, Fraction(1, 4)) == pt("3/4", 1)
        assert square.center == pt("1/2", "1/2")

    def test_locate(self):
        square = model_polygon(4)
        assert square.locate(pt("1/2", "1/2")) == 1
        assert square.locate(pt(1, "1/2")) == 0
        assert square.locate(pt(2, "1/2")) == -1

    def test_folded_square_for_two_sides(self):
        folded = ModelPolygon(2)
        assert folded.folded
        assert folded.side_point(0, Fraction(1, 2)) == pt(1, 0)
        assert folded.side_point(1, Fraction(1, 4)) == pt("1/2", 1)
        assert folded.vertices == [pt(0, 0), pt(1, 1)]
        assert folded.forbidden_parameter(Fraction(1, 2))

    def test_forbidden_parameters(self):
        square = model_polygon(4)
        assert square.forbidden_parameter(Fraction(0))
        assert square.forbidden_parameter(Fraction(1))
        assert not square.forbidden_parameter(Fraction(1, 2))

    def test_octagon_is_convex_and_rational(self):
        octagon = model_polygon(8)
        assert len(octagon.corners) == 8
        assert all(isinstance(c, Fraction) for p in octagon.corners for c in p)
        assert octagon.locate(octagon.center) == 1
        corners = octagon.corners
        for k in range(8):
            assert orient(corners[k], corners[(k + 1) % 8], corners[(k + 2) % 8]) == 1

    def test_too_few_sides(self):
        with pytest.raises(ValueError):
            ModelPolygon(1)
