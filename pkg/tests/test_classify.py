"""
测试浸入圆周的完全不变量与正则同伦判定
"""

from fractions import Fraction

import numpy as np
import pytest

from surface_immersions.classify import (
    circle_invariants,
    decide_circle,
    decide_via_difference,
    reported_parity,
)
from surface_immersions.curves import (
    band_type,
    concatenate,
    crossing_count,
    location_point,
    polygon_of,
)
from surface_immersions.errors import (
    PathCrossesCurves,
    PathNotTransverse,
    SchemaMismatch,
)
from surface_immersions.geometry import develop, realize, turning_number_planar
from surface_immersions.models import (
    Answer,
    BandType,
    CurveLocation,
    PLCurve,
    PLPath,
    SidePoint,
    Strand,
    TurningKind,
)
from surface_immersions.moves import add_kink, random_regular_homotopy
from surface_immersions.planar import on_segment, segment_parameter
from tests.conftest import HALF, closed_curve, pt

# 左下角与右下角两个互不相交的小正方形
LEFT = (("1/8", "1/8"), ("3/8", "1/8"), ("3/8", "3/8"), ("1/8", "3/8"))
RIGHT = (("5/8", "1/8"), ("7/8", "1/8"), ("7/8", "3/8"), ("5/8", "3/8"))
RIGHT_CLOCKWISE = (("5/8", "1/8"), ("5/8", "3/8"), ("7/8", "3/8"), ("7/8", "1/8"))


def horizontal_path(start_segment, end_segment):
    """沿 y = 1/4 从左侧正方形走到右侧正方形"""
    return PLPath(
        start=CurveLocation(0, start_segment, HALF),
        strands=(Strand(None, (pt("1/2", "1/4"),), None),),
        end=CurveLocation(0, end_segment, HALF),
    )


class TestReportedParity:
    def test_convention(self):
        assert reported_parity(0) == 1
        assert reported_parity(1) == 0
        assert reported_parity(4) == 1


class TestCircleInvariants:
    """测试完全不变量"""

    def test_square_on_torus(self, torus, square_curve):
        inv = circle_invariants(square_curve, torus)
        assert inv.homotopy_class.trivial
        assert inv.w1nu == 1
        assert inv.s_parity == 1
        assert inv.turning.kind == TurningKind.INTEGER
        assert inv.turning.value == 1

    def test_reference_frame_flips_sign(self, torus, clockwise_square):
        assert circle_invariants(clockwise_square, torus).turning.value == -1
        assert circle_invariants(clockwise_square, torus, frame=-1).turning.value == 1

    def test_bowtie(self, torus, bowtie_curve):
        inv = circle_invariants(bowtie_curve, torus)
        assert inv.s_parity == 0
        assert inv.turning.value == 0

    def test_klein_square_is_absolute(self, klein, clockwise_square):
        inv = circle_invariants(clockwise_square, klein)
        assert inv.turning.kind == TurningKind.ABSOLUTE
        assert inv.turning.value == 1

    def test_meridian(self, torus, torus_meridian):
        inv = circle_invariants(torus_meridian, torus)
        assert inv.homotopy_class.reduced == "A"
        assert inv.turning.kind == TurningKind.INTEGER
        assert inv.turning.value == 0

    def test_moebius_core_compares_parity_only(self, moebius, moebius_core):
        inv = circle_invariants(moebius_core, moebius)
        assert inv.w1nu == -1
        assert inv.turning.kind == TurningKind.UNDEFINED
        assert inv.s_parity == 1

    def test_projective_plane_uses_parity(self, projective_plane, bowtie_curve):
        inv = circle_invariants(bowtie_curve, projective_plane)
        assert inv.turning.kind == TurningKind.MOD2
        assert inv.turning.value == 0

    def test_to_dict(self, torus, square_curve):
        data = circle_invariants(square_curve, torus).to_dict()
        assert data["s"] == 1
        assert data["turning"]["value"] == 1

    def test_unknown_side(self, torus):
        curve = PLCurve(
            strands=(Strand(SidePoint(0, HALF), (pt("1/2", "1/2"),), SidePoint(7, HALF)),)
        )
        with pytest.raises(SchemaMismatch):
            circle_invariants(curve, torus)


class TestDecideCircle:
    """测试正则同伦判定"""

    def test_same_curve(self, torus, square_curve):
        verdict = decide_circle(square_curve, square_curve, torus)
        assert verdict.answer == Answer.YES
        assert verdict.answer.exit_code == 0

    def test_opposite_orientation_on_torus(self, torus, square_curve, clockwise_square):
        verdict = decide_circle(square_curve, clockwise_square, torus)
        assert verdict.answer == Answer.NO
        assert verdict.answer.exit_code == 1

    def test_opposite_orientation_on_klein_bottle(self, klein, square_curve, clockwise_square):
        assert decide_circle(square_curve, clockwise_square, klein).answer == Answer.YES

    def test_different_classes(self, torus, square_curve, torus_meridian):
        verdict = decide_circle(square_curve, torus_meridian, torus)
        assert verdict.answer == Answer.NO
        assert verdict.reason == "not homotopic"

    def test_figure_eight_differs(self, torus, square_curve, bowtie_curve):
        assert decide_circle(square_curve, bowtie_curve, torus).answer == Answer.NO

    def test_projective_plane(self, projective_plane, square_curve, clockwise_square, bowtie_curve):
        assert decide_circle(square_curve, clockwise_square, projective_plane).answer == Answer.YES
        assert decide_circle(square_curve, bowtie_curve, projective_plane).answer == Answer.NO

    def test_translated_squares(self, torus):
        left, right = closed_curve(*LEFT), closed_curve(*RIGHT)
        verdict = decide_circle(left, right, torus)
        assert verdict.answer == Answer.YES
        assert verdict.to_dict()["verdict"] == "yes"

    @pytest.mark.parametrize(
        "surface, f, g",
        [
            ("torus", "square_curve", "clockwise_square"),
            ("klein", "square_curve", "clockwise_square"),
            ("torus", "square_curve", "torus_meridian"),
            ("torus", "bowtie_curve", "square_curve"),
            ("projective_plane", "clockwise_square", "bowtie_curve"),
        ],
    )
    def test_symmetric(self, request, surface, f, g):
        schema = request.getfixturevalue(surface)
        f, g = request.getfixturevalue(f), request.getfixturevalue(g)
        assert decide_circle(f, g, schema).answer == decide_circle(g, f, schema).answer


class TestDifferenceCurve:
    """测试通过差曲线的第二个判定"""

    def test_band_types(self, torus):
        left = closed_curve(*LEFT)
        assert band_type(left, closed_curve(*RIGHT), horizontal_path(1, 3), torus) == (
            BandType.ALTERNATING
        )
        assert band_type(left, closed_curve(*RIGHT_CLOCKWISE), horizontal_path(1, 0), torus) == (
            BandType.CONSTANT
        )

    def test_alternating_sum_has_one_crossing(self, torus):
        left, right = closed_curve(*LEFT), closed_curve(*RIGHT)
        difference = concatenate(left, right, horizontal_path(1, 3), torus)
        assert difference.strands[0].closed
        assert crossing_count(difference, torus) == 1

    def test_both_band_types_on_one_path(self, torus):
        left, right = closed_curve(*LEFT), closed_curve(*RIGHT)
        path = horizontal_path(1, 3)
        hol = realize(torus)
        sums = {
            band: concatenate(left, right, path, torus, band=band)
            for band in (BandType.ALTERNATING, BandType.CONSTANT)
        }
        alternating, constant = sums[BandType.ALTERNATING], sums[BandType.CONSTANT]
        assert crossing_count(alternating, torus) == 1
        assert crossing_count(constant, torus) == 2
        assert turning_number_planar(develop(alternating, torus, hol)) == 0
        assert abs(turning_number_planar(develop(constant, torus, hol))) == 1

    def test_natural_band_is_default(self, torus):
        left, right = closed_curve(*LEFT), closed_curve(*RIGHT)
        path = horizontal_path(1, 3)
        assert concatenate(left, right, path, torus) == concatenate(
            left, right, path, torus, band=BandType.ALTERNATING
        )

    def test_homotopic_squares(self, torus):
        left, right = closed_curve(*LEFT), closed_curve(*RIGHT)
        verdict = decide_via_difference(left, right, horizontal_path(1, 3), torus)
        assert verdict.answer == Answer.YES
        assert verdict.details["band"] == "alternating"

    def test_opposite_squares(self, torus):
        left, right = closed_curve(*LEFT), closed_curve(*RIGHT_CLOCKWISE)
        verdict = decide_via_difference(left, right, horizontal_path(1, 0), torus)
        assert verdict.answer == Answer.NO
        assert verdict.details["path_band"] == "constant"
        assert verdict.details["band"] == "alternating"
        assert verdict.details["difference_T"] == 2

    def test_path_crossing_a_curve(self, torus):
        left, right = closed_curve(*LEFT), closed_curve(*RIGHT)
        with pytest.raises(PathCrossesCurves):
            band_type(left, right, horizontal_path(3, 3), torus)

    def test_tangent_path(self, torus):
        left, right = closed_curve(*LEFT), closed_curve(*RIGHT)
        path = PLPath(
            start=CurveLocation(0, 1, HALF),
            strands=(Strand(None, (pt("3/8", "5/16"),), None),),
            end=CurveLocation(0, 3, HALF),
        )
        with pytest.raises(PathNotTransverse):
            band_type(left, right, path, torus)


def locate(curve, point, schema):
    """单 strand 曲线上经过给定点的位置"""
    poly = polygon_of(schema)
    for i in range(len(curve.strands[0].points) + 1):
        a = location_point(curve, CurveLocation(0, i, Fraction(0)), poly)
        b = location_point(curve, CurveLocation(0, i, Fraction(1)), poly)
        if on_segment(point, a, b):
            return CurveLocation(0, i, segment_parameter(a, b, point))
    raise AssertionError(f"{point} is not on the curve")


def kinked_square(points, attach, rng, schema):
    """在除 attach 以外的边上随机加 0 到 2 个小环"""
    curve = closed_curve(*points)
    others = [k for k in range(4) if k != attach]
    chosen = rng.choice(others, size=int(rng.integers(0, 3)), replace=False)
    for k in sorted(chosen, reverse=True):
        t = Fraction(int(rng.integers(1, 4)), 4)
        curve = add_kink(curve, int(rng.choice([-1, 1])), CurveLocation(0, int(k), t), schema)
    return curve


def planar_turning(curve, schema):
    return turning_number_planar(develop(curve, schema))


class TestNullHomotopicParity:
    """零伦曲线的旋转数奇偶与自交奇偶一致"""

    @pytest.mark.parametrize("surface", ["torus", "klein", "genus_two"])
    @pytest.mark.parametrize("seed", range(34))
    def test_corpus(self, request, surface, seed):
        schema = request.getfixturevalue(surface)
        cx, cy = polygon_of(schema).center
        r = Fraction(1, 5)
        corners = ((cx - r, cy - r), (cx + r, cy - r), (cx + r, cy + r), (cx - r, cy + r))
        square = PLCurve(strands=(Strand(None, corners, None),))
        curve = random_regular_homotopy(square, 4, seed, schema)
        inv = circle_invariants(curve, schema)
        assert inv.homotopy_class.trivial
        assert inv.turning.value % 2 == inv.s_parity


class TestBandSumCorpus:
    """随机加环的一对正方形：带和的自交奇偶、旋转数与两种判定的一致性"""

    @pytest.mark.parametrize("surface", ["torus", "klein", "moebius"])
    def test_pairs(self, request, surface):
        schema = request.getfixturevalue(surface)
        rng = np.random.default_rng(sum(map(ord, surface)))
        for _ in range(50):
            f = kinked_square(LEFT, 1, rng, schema)
            g = kinked_square(RIGHT, 3, rng, schema)
            path = PLPath(
                start=locate(f, pt("3/8", "1/4"), schema),
                strands=(Strand(None, (pt("1/2", "1/4"),), None),),
                end=locate(g, pt("5/8", "1/4"), schema),
            )
            s_f = circle_invariants(f, schema).s_parity
            s_g = circle_invariants(g, schema).s_parity
            alternating = concatenate(f, g, path, schema, band=BandType.ALTERNATING)
            constant = concatenate(f, g, path, schema, band=BandType.CONSTANT)
            assert reported_parity(crossing_count(alternating, schema)) == (s_f + s_g) % 2
            assert reported_parity(crossing_count(constant, schema)) != (s_f + s_g) % 2
            difference = planar_turning(f, schema) - planar_turning(g, schema)
            assert planar_turning(alternating, schema) == difference
            assert abs(planar_turning(constant, schema) - difference) == 1
            assert (
                decide_circle(f, g, schema).answer
                == decide_via_difference(f, g, path, schema).answer
            )


class TestMoebiusBandSums:
    """Möbius 带核心曲线与其带环副本的带和"""

    def setup_method(self):
        # 与核心曲线交叉一次的同伦副本
        self.copy = PLCurve(
            strands=(
                Strand(
                    SidePoint(2, Fraction(1, 4)), (pt("5/8", "1/2"),), SidePoint(0, Fraction(1, 4))
                ),
            )
        )
        self.path = PLPath(
            start=CurveLocation(0, 0, HALF),
            strands=(Strand(None, (pt("19/32", "3/4"),), None),),
            end=CurveLocation(0, 0, HALF),
        )

    def kinked_copy(self, kink_sign, moebius):
        curve = add_kink(self.copy, kink_sign, CurveLocation(0, 1, Fraction(3, 4)), moebius)
        return add_kink(curve, kink_sign, CurveLocation(0, 1, Fraction(1, 4)), moebius)

    def test_sum_with_copy(self, moebius, moebius_core):
        total = concatenate(moebius_core, self.copy, self.path, moebius, band=BandType.ALTERNATING)
        assert abs(planar_turning(total, moebius)) == 1

    def test_kinks_reach_three(self, moebius, moebius_core):
        values = set()
        for kink_sign in (1, -1):
            g = self.kinked_copy(kink_sign, moebius)
            assert decide_circle(moebius_core, g, moebius).answer == Answer.YES
            total = concatenate(moebius_core, g, self.path, moebius, band=BandType.ALTERNATING)
            values.add(abs(planar_turning(total, moebius)))
        assert values == {1, 3}

    def test_sums_are_distinguished(self, moebius, moebius_core):
        plain = concatenate(moebius_core, self.copy, self.path, moebius, band=BandType.ALTERNATING)
        sums = [
            concatenate(
                moebius_core,
                self.kinked_copy(kink_sign, moebius),
                self.path,
                moebius,
                band=BandType.ALTERNATING,
            )
            for kink_sign in (1, -1)
        ]
        answers = {decide_circle(plain, total, moebius).answer for total in sums}
        assert answers == {Answer.YES, Answer.NO}


class TestTransitivity:
    """移动生成的三元组上判定可传递"""

    @pytest.mark.parametrize("surface", ["torus", "klein"])
    @pytest.mark.parametrize("seed", [2, 7, 13])
    def test_triples(self, request, surface, seed, square_curve):
        schema = request.getfixturevalue(surface)
        a = square_curve
        b = random_regular_homotopy(a, 8, seed, schema)
        c = random_regular_homotopy(b, 8, seed + 100, schema)
        assert decide_circle(a, a, schema).answer == Answer.YES
        assert decide_circle(a, b, schema).answer == Answer.YES
        assert decide_circle(b, c, schema).answer == Answer.YES
        assert decide_circle(a, c, schema).answer == Answer.YES
        d = add_kink(c, 1, CurveLocation(0, 0, HALF), schema)
        d = add_kink(d, 1, CurveLocation(0, 0, HALF), schema)
        assert decide_circle(a, d, schema).answer == decide_circle(b, d, schema).answer
