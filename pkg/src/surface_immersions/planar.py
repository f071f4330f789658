"""
平面精确几何谓词

所有判断都基于 Fraction 坐标，不引入浮点误差。
模型多边形 (ModelPolygon) 也定义在这里，它只依赖于边数。
"""

import math
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

Point = Tuple[Fraction, Fraction]


def as_point(x, y) -> Point:
    return (Fraction(x), Fraction(y))


def sub(p: Point, q: Point) -> Point:
    return (p[0] - q[0], p[1] - q[1])


def add(p: Point, q: Point) -> Point:
    return (p[0] + q[0], p[1] + q[1])


def scale(p: Point, k) -> Point:
    return (p[0] * k, p[1] * k)


def cross(u: Point, v: Point) -> Fraction:
    return u[0] * v[1] - u[1] * v[0]


def dot(u: Point, v: Point) -> Fraction:
    return u[0] * v[0] + u[1] * v[1]


def left_normal(u: Point) -> Point:
    return (-u[1], u[0])


def sign(x) -> int:
    return (x > 0) - (x < 0)


def orient(a: Point, b: Point, c: Point) -> int:
    """c 相对有向直线 ab 的位置：+1 左侧，-1 右侧，0 共线"""
    return sign(cross(sub(b, a), sub(c, a)))


def lerp(a: Point, b: Point, t) -> Point:
    return (a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t)


def to_float(p: Point) -> Tuple[float, float]:
    return (float(p[0]), float(p[1]))


def on_segment(p: Point, a: Point, b: Point) -> bool:
    """p 是否落在闭线段 ab 上"""
    if orient(a, b, p) != 0:
        return False
    return (
        min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
        and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])
    )


def segment_parameter(a: Point, b: Point, p: Point) -> Fraction:
    """共线点 p 在 ab 上的参数"""
    d = sub(b, a)
    return dot(sub(p, a), d) / dot(d, d)


def intersection_point(a: Point, b: Point, c: Point, d: Point) -> Point:
    r = sub(b, a)
    s = sub(d, c)
    t = cross(sub(c, a), s) / cross(r, s)
    return lerp(a, b, t)


class SegmentRelation(str, Enum):
    """两条闭线段的相对位置"""

    DISJOINT = "disjoint"
    PROPER = "proper"
    TOUCH = "touch"
    OVERLAP = "overlap"


def segment_relation(
    a: Point, b: Point, c: Point, d: Point
) -> Tuple[SegmentRelation, Optional[Point]]:
    """
    判断线段 ab 与 cd 的关系

    Returns:
        (关系, 交点)；PROPER 表示两条线段内部横截相交，
        TOUCH 表示在某一端点处接触，OVERLAP 表示共线重叠。
    """
    o1 = orient(a, b, c)
    o2 = orient(a, b, d)
    o3 = orient(c, d, a)
    o4 = orient(c, d, b)

    if o1 * o2 < 0 and o3 * o4 < 0:
        return SegmentRelation.PROPER, intersection_point(a, b, c, d)

    if o1 == 0 and o2 == 0:
        # 共线：比较在 ab 上的投影区间
        lo, hi = sorted((segment_parameter(a, b, c), segment_parameter(a, b, d)))
        start, end = max(lo, Fraction(0)), min(hi, Fraction(1))
        if start > end:
            return SegmentRelation.DISJOINT, None
        if start == end:
            return SegmentRelation.TOUCH, lerp(a, b, start)
        return SegmentRelation.OVERLAP, lerp(a, b, start)

    for p, q, r in ((c, a, b), (d, a, b), (a, c, d), (b, c, d)):
        if on_segment(p, q, r):
            return SegmentRelation.TOUCH, p
    return SegmentRelation.DISJOINT, None


def point_segment_distance(p, a, b) -> float:
    px, py = float(p[0]), float(p[1])
    ax, ay = float(a[0]), float(a[1])
    bx, by = float(b[0]), float(b[1])
    dx, dy = bx - ax, by - ay
    length2 = dx * dx + dy * dy
    if length2 == 0.0:
        return math.hypot(px - ax, py - ay)
    u = max(0.0, min(1.0, ((px - ax) * dx + (py - ay) * dy) / length2))
    return math.hypot(px - ax - u * dx, py - ay - u * dy)


def point_line_distance(p, a, b) -> float:
    ax, ay = float(a[0]), float(a[1])
    dx, dy = float(b[0]) - ax, float(b[1]) - ay
    length = math.hypot(dx, dy)
    if length == 0.0:
        return math.hypot(float(p[0]) - ax, float(p[1]) - ay)
    return abs(dx * (float(p[1]) - ay) - dy * (float(p[0]) - ax)) / length


def segment_distance(a, b, c, d) -> float:
    """两条不相交线段之间的最短距离"""
    return min(
        point_segment_distance(a, c, d),
        point_segment_distance(b, c, d),
        point_segment_distance(c, a, b),
        point_segment_distance(d, a, b),
    )


def _rational_unit_point(angle: float) -> Point:
    """单位圆上接近给定角度的有理点"""
    angle = math.remainder(angle, 2 * math.pi)
    if abs(abs(angle) - math.pi) < 1e-12:
        return (Fraction(-1), Fraction(0))
    t = Fraction(math.tan(angle / 2)).limit_denominator(10**4)
    denom = 1 + t * t
    return ((1 - t * t) / denom, 2 * t / denom)


class ModelPolygon:
    """
    基本多边形的有理坐标模型

    n == 4 时是单位正方形；n == 2 时是一个折边正方形，每条 schema 边占两条
    画图边，参数 t = 1/2 对应折点；其它偶数 n 使用内接于单位圆的有理多边形。
    边 i 从顶点 i 走向顶点 i+1（逆时针）。
    """

    def __init__(self, side_count: int):
        if side_count < 2:
            raise ValueError(f"Polygon needs at least 2 sides, got {side_count}")
        self.side_count = side_count
        if side_count in (2, 4):
            self.corners: List[Point] = [
                as_point(0, 0),
                as_point(1, 0),
                as_point(1, 1),
                as_point(0, 1),
            ]
        else:
            offset = -math.pi / 2 - math.pi / side_count
            self.corners = [
                _rational_unit_point(offset + 2 * math.pi * k / side_count)
                for k in range(side_count)
            ]
        self.center: Point = (
            sum((p[0] for p in self.corners), Fraction(0)) / len(self.corners),
            sum((p[1] for p in self.corners), Fraction(0)) / len(self.corners),
        )

    @property
    def folded(self) -> bool:
        return self.side_count == 2

    @property
    def vertices(self) -> List[Point]:
        """schema 顶点（折边正方形只取两个端点）"""
        if self.folded:
            return [self.corners[0], self.corners[2]]
        return list(self.corners)

    def side_point(self, side: int, t) -> Point:
        t = Fraction(t)
        if self.folded:
            base = 2 * side
            if t <= Fraction(1, 2):
                return lerp(self.corners[base], self.corners[base + 1], 2 * t)
            return lerp(self.corners[base + 1], self.corners[(base + 2) % 4], 2 * t - 1)
        return lerp(self.corners[side], self.corners[(side + 1) % self.side_count], t)

    def forbidden_parameter(self, t: Fraction) -> bool:
        """落在 schema 顶点或折点上的边参数"""
        if t <= 0 or t >= 1:
            return True
        return self.folded and t == Fraction(1, 2)

    def drawing_edges(self) -> List[Tuple[Point, Point]]:
        count = len(self.corners)
        return [(self.corners[k], self.corners[(k + 1) % count]) for k in range(count)]

    def locate(self, p: Point) -> int:
        """+1 严格在内部，0 在边界上，-1 在外部"""
        result = 1
        for a, b in self.drawing_edges():
            o = orient(a, b, p)
            if o < 0:
                return -1
            if o == 0:
                result = 0
        return result

    def boundary_distance(self, p) -> float:
        return min(point_segment_distance(p, a, b) for a, b in self.drawing_edges())


@lru_cache(maxsize=None)
def model_polygon(side_count: int) -> ModelPolygon:
    return ModelPolygon(side_count)


def turn_angle(u: Sequence[float], v: Sequence[float]) -> float:
    """从方向 u 转到方向 v 的有向角，范围 (-pi, pi]"""
    return math.atan2(u[0] * v[1] - u[1] * v[0], u[0] * v[0] + u[1] * v[1])
