"""
Pytest configuration and shared fixtures.
"""

import json
from fractions import Fraction
from pathlib import Path

import pytest

from surface_immersions.models import (
    EdgeImage,
    GraphImmersion,
    PLCurve,
    SidePoint,
    Strand,
)
from surface_immersions.planar import model_polygon
from surface_immersions.schema import parse_schema


def pt(x, y):
    """有理坐标点，例如 pt("1/4", "3/4")"""
    return (Fraction(x), Fraction(y))


def closed_curve(*points):
    """单个闭合 strand 组成的曲线（多边形内部的零伦曲线）"""
    return PLCurve(strands=(Strand(None, tuple(pt(*p) for p in points), None),))


def side_loop(schema, side, t=Fraction(1, 3)):
    """经过多边形中心、从边 side 离开的单 strand 闭曲线"""
    entry_side, entry_t = schema.glue_parameter(side, t)
    center = model_polygon(schema.side_count).center
    return PLCurve(strands=(Strand(SidePoint(entry_side, entry_t), (center,), SidePoint(side, t)),))


SQUARE = (("1/4", "1/4"), ("3/4", "1/4"), ("3/4", "3/4"), ("1/4", "3/4"))
BOWTIE = (("1/4", "1/4"), ("3/4", "3/4"), ("3/4", "1/4"), ("1/4", "3/4"))
HALF = Fraction(1, 2)


@pytest.fixture
def torus():
    return parse_schema("abAB")


@pytest.fixture
def klein():
    return parse_schema("abaB")


@pytest.fixture
def moebius():
    """a 同号粘合，b 与 c 是自由边"""
    return parse_schema("abac")


@pytest.fixture
def genus_two():
    return parse_schema("abABcdCD")


@pytest.fixture
def projective_plane():
    return parse_schema("aa")


@pytest.fixture
def square_curve():
    """逆时针的小正方形，旋转数 +1，没有二重点"""
    return closed_curve(*SQUARE)


@pytest.fixture
def clockwise_square():
    return closed_curve(*reversed(SQUARE))


@pytest.fixture
def bowtie_curve():
    """八字形，一个二重点，旋转数 0"""
    return closed_curve(*BOWTIE)


@pytest.fixture
def torus_meridian():
    """环面上竖直穿过上边的曲线，边字 A"""
    return PLCurve(
        strands=(
            Strand(SidePoint(0, HALF), (pt("1/2", "1/2"),), SidePoint(2, HALF)),
        )
    )


@pytest.fixture
def moebius_core():
    """Möbius 带的核心曲线，边字 a，法丛不可定向"""
    return PLCurve(
        strands=(
            Strand(SidePoint(2, HALF), (pt("1/2", "1/2"),), SidePoint(0, HALF)),
        )
    )


def _loop_up(vertex):
    x, y = vertex
    return EdgeImage(
        (
            Strand(None, (pt(x, "3/4"),), SidePoint(2, Fraction(1) - Fraction(x))),
            Strand(SidePoint(0, Fraction(x)), (pt(x, "1/4"),), None),
        )
    )


def _loop_right(vertex):
    x, y = vertex
    return EdgeImage(
        (
            Strand(None, (pt("3/4", y),), SidePoint(1, Fraction(y))),
            Strand(SidePoint(3, Fraction(1) - Fraction(y)), (pt("1/4", y),), None),
        )
    )


@pytest.fixture
def torus_bouquet():
    """环面上的两环花束：边 0 向上穿过（类 A），边 1 向右穿过（类 b）"""
    v = ("1/2", "1/2")
    return GraphImmersion(
        vertex_count=1,
        edges=((0, 0), (0, 0)),
        tree=(),
        vertex_images=(pt(*v),),
        edge_images=(_loop_up(v), _loop_right(v)),
    )


@pytest.fixture
def swapped_bouquet():
    """同一个抽象图，两条边的像对调"""
    v = ("1/2", "1/2")
    return GraphImmersion(
        vertex_count=1,
        edges=((0, 0), (0, 0)),
        tree=(),
        vertex_images=(pt(*v),),
        edge_images=(_loop_right(v), _loop_up(v)),
    )


@pytest.fixture
def write_json(tmp_path):
    """把数据写成 JSON 文件并返回路径"""

    def _write(name, data):
        path = Path(tmp_path) / name
        path.write_text(json.dumps(data), encoding="utf-8")
        return str(path)

    return _write
