"""
测试 schema 解析与拓扑分类
"""

from fractions import Fraction

import pytest

from surface_immersions.errors import EmptySchema, MalformedWord, UnknownGenerator
from surface_immersions.models import Side, SurfaceKind
from surface_immersions.schema import (
    describe,
    genus,
    orientation_character,
    parse_schema,
    parse_word,
)


class TestParseSchema:
    """测试 schema 解析"""

    @pytest.mark.parametrize(
        "word,kind,chi,orientable",
        [
            ("aA", SurfaceKind.SPHERE, 2, True),
            ("aa", SurfaceKind.PROJECTIVE_PLANE, 1, False),
            ("ab", SurfaceKind.DISK, 1, True),
            ("abcB", SurfaceKind.ANNULUS, 0, True),
            ("abac", SurfaceKind.MOEBIUS, 0, False),
            ("abAB", SurfaceKind.TORUS, 0, True),
            ("abaB", SurfaceKind.KLEIN_BOTTLE, 0, False),
            ("abABcdCD", SurfaceKind.HYPERBOLIC_CLOSED, -2, True),
        ],
    )
    def test_classification(self, word, kind, chi, orientable):
        schema = parse_schema(word)
        assert schema.kind == kind
        assert schema.euler_characteristic == chi
        assert schema.orientable == orientable

    def test_torus_has_one_vertex_and_one_relator(self, torus):
        assert torus.vertex_classes == ((0, 1, 2, 3),)
        assert torus.generators == ("a", "b")
        assert len(torus.relators) == 1
        assert len(torus.relators[0]) == 4

    def test_moebius_free_sides(self, moebius):
        assert moebius.punctures == (1, 3)
        assert moebius.free_sides == (1, 3)
        assert moebius.generators == ("a",)
        assert moebius.relators == ()

    def test_inverse_notations(self):
        assert parse_schema("ab a⁻¹ b^-1").boundary_word == "abAB"
        assert parse_schema("aba'B").kind == SurfaceKind.TORUS

    def test_empty_schema(self):
        with pytest.raises(EmptySchema):
            parse_schema("")

    @pytest.mark.parametrize("word", ["abc", "aaaa", "ab1A", "aéAB"])
    def test_malformed(self, word):
        with pytest.raises(MalformedWord):
            parse_schema(word)

    def test_puncture_on_paired_side(self):
        with pytest.raises(MalformedWord, match="paired"):
            parse_schema("abAB", punctures=[0])

    def test_puncture_out_of_range(self):
        with pytest.raises(MalformedWord, match="out of range"):
            parse_schema("abac", punctures=[7])

    def test_side_validation(self):
        with pytest.raises(ValueError):
            Side("A")
        with pytest.raises(ValueError):
            Side("a", 2)


class TestGluing:
    """测试边的配对与参数传递"""

    def test_exit_letters(self, torus):
        assert torus.exit_letter(0) == "a"
        assert torus.exit_letter(2) == "A"
        assert torus.exit_side("A") == 2
        assert torus.exit_side("b") == 1

    def test_opposite_sign_reverses_parameter(self, torus):
        assert torus.glue_parameter(0, Fraction(1, 4)) == (2, Fraction(3, 4))

    def test_same_sign_keeps_parameter(self, klein):
        assert klein.glue_parameter(0, Fraction(1, 4)) == (2, Fraction(1, 4))
        assert klein.same_sign("a")
        assert not klein.same_sign("b")

    def test_free_side_has_no_partner(self, moebius):
        assert moebius.partner(1) is None
        with pytest.raises(ValueError):
            moebius.exit_letter(1)


class TestOrientationCharacter:
    """测试定向特征"""

    def test_klein(self, klein):
        assert orientation_character(klein, "a") == -1
        assert orientation_character(klein, "A") == -1
        assert orientation_character(klein, "b") == 1
        assert orientation_character(klein, "aa") == 1

    def test_torus_always_positive(self, torus):
        assert orientation_character(torus, "abAAbB") == 1

    def test_unknown_generator(self, torus):
        with pytest.raises(UnknownGenerator):
            orientation_character(torus, "z")


class TestDescribe:
    """测试 schema 摘要"""

    def test_genus(self, torus, klein, genus_two, moebius):
        assert genus(torus) == 1
        assert genus(klein) == 2
        assert genus(genus_two) == 2
        assert genus(moebius) is None

    def test_describe(self, torus):
        info = describe(torus)
        assert info["kind"] == "Torus"
        assert info["sides"] == "abAB"
        assert info["genus"] == 1
        assert info["generators"] == ["a", "b"]

    def test_parse_word(self):
        assert parse_word("a⁻¹b") == "Ab"
        assert parse_word("B'") == "b"
        assert parse_word("1") == ""
