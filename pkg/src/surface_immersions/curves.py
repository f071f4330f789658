"""
多边形中的分段线性曲线

曲线由若干 strand 组成，每个 strand 从一条边进入、经过内部点、从另一条边离开。
所有关联判断都是精确的有理数运算。

内部把曲线展开为“行走序列”(walk)：点结点 ("p", point) 与穿边结点
("x", exit, entry)。两个相邻结点之间是一条线段。
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple, Union

from .errors import (
    BoundaryHit,
    GeneralPositionError,
    PathCrossesCurves,
    PathNotTransverse,
    PointOutsidePolygon,
    SideCoincidence,
    StrandMismatch,
    TangentialCrossing,
    TriplePoint,
    VertexHit,
)
from .models import (
    BandType,
    Crossing,
    CurveLocation,
    CyclicWord,
    GeneralPositionReport,
    PLCurve,
    PLPath,
    SidePoint,
    Strand,
    SurfaceSchema,
)
from .planar import (
    ModelPolygon,
    Point,
    SegmentRelation,
    add,
    cross,
    dot,
    left_normal,
    lerp,
    model_polygon,
    orient,
    point_line_distance,
    scale,
    segment_distance,
    segment_relation,
    sign,
    sub,
    to_float,
)

logger = logging.getLogger(__name__)

PointNode = Tuple[str, Point]
CrossNode = Tuple[str, SidePoint, SidePoint]
Node = Union[PointNode, CrossNode]


def polygon_of(schema: SurfaceSchema) -> ModelPolygon:
    return model_polygon(schema.side_count)


def strand_polyline(strand: Strand, poly: ModelPolygon) -> List[Point]:
    """strand 的折线（含两端的边上点；闭合 strand 首尾相接）"""
    if strand.closed:
        return list(strand.points) + [strand.points[0]]
    pts: List[Point] = []
    if strand.entry is not None:
        pts.append(poly.side_point(strand.entry.side, strand.entry.t))
    pts.extend(strand.points)
    if strand.exit is not None:
        pts.append(poly.side_point(strand.exit.side, strand.exit.t))
    return pts


# 行走序列


@dataclass
class Walk:
    """闭合曲线的结点序列；base 是基点结点的下标"""

    nodes: List[Node]
    base: int

    def __len__(self) -> int:
        return len(self.nodes)

    def node(self, i: int) -> Node:
        return self.nodes[i % len(self.nodes)]

    @staticmethod
    def out_point(node: Node, poly: ModelPolygon) -> Point:
        if node[0] == "p":
            return node[1]
        entry = node[2]
        return poly.side_point(entry.side, entry.t)

    @staticmethod
    def in_point(node: Node, poly: ModelPolygon) -> Point:
        if node[0] == "p":
            return node[1]
        exit_ = node[1]
        return poly.side_point(exit_.side, exit_.t)

    def segment(self, i: int, poly: ModelPolygon) -> Tuple[Point, Point]:
        """从结点 i 到结点 i+1 的线段"""
        return self.out_point(self.node(i), poly), self.in_point(self.node(i + 1), poly)

    def crossing_nodes(self) -> List[int]:
        return [i for i, n in enumerate(self.nodes) if n[0] == "x"]

    def rotated(self, start: int) -> "Walk":
        n = len(self.nodes)
        start %= n
        return Walk(self.nodes[start:] + self.nodes[:start], (self.base - start) % n)

    def reversed(self) -> "Walk":
        """反向行走：穿边结点交换出口与入口"""
        nodes: List[Node] = []
        for node in reversed(self.nodes):
            if node[0] == "x":
                nodes.append(("x", node[2], node[1]))
            else:
                nodes.append(node)
        return Walk(nodes, len(self.nodes) - 1 - self.base)


def curve_to_walk(curve: PLCurve) -> Walk:
    nodes: List[Node] = []
    base = 0
    for k, strand in enumerate(curve.strands):
        for v, p in enumerate(strand.points):
            if (k, v) == curve.basepoint:
                base = len(nodes)
            nodes.append(("p", p))
        if not strand.closed:
            nxt = curve.strands[(k + 1) % len(curve.strands)]
            nodes.append(("x", strand.exit, nxt.entry))
    return Walk(nodes, base)


def walk_to_curve(walk: Walk) -> PLCurve:
    crossings = walk.crossing_nodes()
    if walk.node(walk.base)[0] != "p":
        raise ValueError("basepoint must be a point node")
    if not crossings:
        points = tuple(n[1] for n in walk.nodes)
        return PLCurve(strands=(Strand(None, points, None),), basepoint=(0, walk.base))
    rotated = walk.rotated(crossings[-1] + 1)
    strands: List[Strand] = []
    entry = rotated.nodes[-1][2]
    points: List[Point] = []
    basepoint = (0, 0)
    for i, node in enumerate(rotated.nodes):
        if node[0] == "p":
            if i == rotated.base:
                basepoint = (len(strands), len(points))
            points.append(node[1])
        else:
            strands.append(Strand(entry, tuple(points), node[1]))
            entry = node[2]
            points = []
    return PLCurve(strands=tuple(strands), basepoint=basepoint)


def walk_index(curve: PLCurve, location: CurveLocation) -> int:
    """曲线位置所在线段的起始结点在行走序列中的下标"""
    strand = curve.strands[location.strand]
    if strand.closed:
        return location.segment
    offset = sum(len(s.points) + 1 for s in curve.strands[: location.strand])
    total = sum(len(s.points) + 1 for s in curve.strands)
    if location.segment == 0:
        return (offset - 1) % total
    return offset + location.segment - 1


def walk_location(curve: PLCurve, index: int, t: Fraction = Fraction(1, 2)) -> CurveLocation:
    """walk_index 的逆：从结点 index 出发的线段对应的曲线位置"""
    if curve.strands[0].closed:
        return CurveLocation(0, index % len(curve.strands[0].points), t)
    total = sum(len(s.points) + 1 for s in curve.strands)
    index %= total
    offset = 0
    for k, strand in enumerate(curve.strands):
        if index < offset + len(strand.points):
            return CurveLocation(k, index - offset + 1, t)
        if index == offset + len(strand.points):
            return CurveLocation((k + 1) % len(curve.strands), 0, t)
        offset += len(strand.points) + 1
    raise ValueError(f"walk index {index} out of range")


def location_point(curve: PLCurve, location: CurveLocation, poly: ModelPolygon) -> Point:
    pts = strand_polyline(curve.strands[location.strand], poly)
    if not (0 <= location.segment < len(pts) - 1):
        raise ValueError(f"segment {location.segment} out of range for strand {location.strand}")
    return lerp(pts[location.segment], pts[location.segment + 1], location.t)


def location_direction(curve: PLCurve, location: CurveLocation, poly: ModelPolygon) -> Point:
    pts = strand_polyline(curve.strands[location.strand], poly)
    return sub(pts[location.segment + 1], pts[location.segment])


def subdivide(curve: PLCurve, poly: ModelPolygon) -> PLCurve:
    """在每条线段中点插入一个结点"""
    walk = curve_to_walk(curve)
    nodes: List[Node] = []
    base = 0
    for i, node in enumerate(walk.nodes):
        if i == walk.base:
            base = len(nodes)
        nodes.append(node)
        a, b = walk.segment(i, poly)
        nodes.append(("p", lerp(a, b, Fraction(1, 2))))
    return walk_to_curve(Walk(nodes, base))


# 一般位置


@dataclass(frozen=True)
class _Segment:
    strand: int
    index: int
    order: int
    a: Point
    b: Point


def _segments(curve: PLCurve, poly: ModelPolygon) -> List[_Segment]:
    segments: List[_Segment] = []
    for k, strand in enumerate(curve.strands):
        pts = strand_polyline(strand, poly)
        for s in range(len(pts) - 1):
            segments.append(_Segment(k, s, len(segments), pts[s], pts[s + 1]))
    return segments


def _adjacent(x: _Segment, y: _Segment, curve: PLCurve) -> bool:
    if x.strand != y.strand:
        return False
    if abs(x.index - y.index) == 1:
        return True
    strand = curve.strands[x.strand]
    last = len(strand.points) - 1
    return strand.closed and {x.index, y.index} == {0, last}


def _check_strands(curve: PLCurve, schema: SurfaceSchema, poly: ModelPolygon) -> List[Exception]:
    problems: List[Exception] = []
    corners = set(poly.corners)
    side_points: Dict[Tuple[int, Fraction], int] = {}
    n = len(curve.strands)
    for k, strand in enumerate(curve.strands):
        for end in (strand.entry, strand.exit):
            if end is None:
                continue
            if not (0 <= end.side < schema.side_count):
                problems.append(StrandMismatch(f"Side {end.side} does not exist", k))
                continue
            if schema.partner(end.side) is None:
                problems.append(BoundaryHit(f"Curve touches free side {end.side}", k))
            if poly.forbidden_parameter(end.t):
                problems.append(VertexHit(f"Side parameter {end.t} hits a polygon vertex", k))
            key = (end.side, end.t)
            if key in side_points and side_points[key] != k:
                problems.append(
                    SideCoincidence(f"Side point {end.side}@{end.t} used twice", k)
                )
            side_points[key] = k
        for v, p in enumerate(strand.points):
            if p in corners:
                problems.append(VertexHit(f"Point {p} is a polygon vertex", k, v))
            elif poly.locate(p) <= 0:
                problems.append(PointOutsidePolygon(f"Point {p} is not inside the polygon", k, v))
        if not strand.closed and strand.exit is not None:
            nxt = curve.strands[(k + 1) % n]
            if schema.partner(strand.exit.side) is not None and nxt.entry is not None:
                side, t = schema.glue_parameter(strand.exit.side, strand.exit.t)
                if (side, t) != (nxt.entry.side, nxt.entry.t):
                    problems.append(
                        StrandMismatch(
                            f"Exit {strand.exit.side}@{strand.exit.t} glues to {side}@{t}, "
                            f"next strand enters at {nxt.entry.side}@{nxt.entry.t}",
                            k,
                        )
                    )
    return problems


SegmentKey = Tuple[Point, Point]
FloatSegment = Tuple[Tuple[float, float], Tuple[float, float]]


def _key(seg: _Segment) -> SegmentKey:
    return (seg.a, seg.b)


def _segment_problems(seg: _Segment, poly: ModelPolygon) -> List[Exception]:
    if seg.a == seg.b:
        return [TangentialCrossing("Degenerate segment", seg.strand, seg.index)]
    if poly.locate(lerp(seg.a, seg.b, Fraction(1, 2))) <= 0:
        return [PointOutsidePolygon("Segment runs along the boundary", seg.strand, seg.index)]
    return []


def _examine_pair(
    x: _Segment, y: _Segment, fx: FloatSegment, fy: FloatSegment, curve: PLCurve
) -> Tuple[Optional[Exception], Optional[Point], Optional[float]]:
    """
    两条线段的关系

    Returns:
        (违规, 交点, 间距)：相邻线段没有间距；真相交的间距取端点到对方直线的距离
    """
    if _adjacent(x, y, curve):
        first, second = (x, y) if x.b == y.a else (y, x)
        if orient(first.a, first.b, second.b) == 0 and dot(
            sub(first.b, first.a), sub(second.b, second.a)
        ) < 0:
            return TangentialCrossing("Curve backtracks", second.strand, second.index), None, None
        return None, None, None
    if (
        max(x.a[0], x.b[0]) < min(y.a[0], y.b[0])
        or max(y.a[0], y.b[0]) < min(x.a[0], x.b[0])
        or max(x.a[1], x.b[1]) < min(y.a[1], y.b[1])
        or max(y.a[1], y.b[1]) < min(x.a[1], x.b[1])
    ):
        return None, None, segment_distance(fx[0], fx[1], fy[0], fy[1])
    relation, point = segment_relation(x.a, x.b, y.a, y.b)
    if relation == SegmentRelation.PROPER:
        margin = min(
            point_line_distance(fx[0], fy[0], fy[1]),
            point_line_distance(fx[1], fy[0], fy[1]),
            point_line_distance(fy[0], fx[0], fx[1]),
            point_line_distance(fy[1], fx[0], fx[1]),
        )
        return None, point, margin
    if relation != SegmentRelation.DISJOINT:
        problem = TangentialCrossing(
            f"Segments touch at {point} (with strand {y.strand}, segment {y.index})",
            x.strand,
            x.index,
        )
        return problem, None, None
    return None, None, segment_distance(fx[0], fx[1], fy[0], fy[1])


def _end_margins(curve: PLCurve, poly: ModelPolygon) -> List[float]:
    margins: List[float] = []
    for strand in curve.strands:
        for p in strand.points:
            margins.append(poly.boundary_distance(p))
        for end in (strand.entry, strand.exit):
            if end is not None:
                p = poly.side_point(end.side, end.t)
                margins.append(
                    min(abs(float(p[0] - c[0])) + abs(float(p[1] - c[1])) for c in poly.corners)
                )
    return margins


@dataclass
class _Delta:
    """一次检查相对已提交状态的差量"""

    added: Set[SegmentKey]
    removed: Set[SegmentKey]
    margins: List[Tuple[SegmentKey, SegmentKey, float]]
    hits: Dict[FrozenSet[SegmentKey], Point]
    floats: Dict[SegmentKey, FloatSegment]


class GeneralPositionIndex:
    """
    增量一般位置检查

    记住最近一次通过检查的曲线的线段、两两间距与自交点。之后的曲线只需把新增线段与其余
    线段配对检查；两条保留线段之间的关系不变，直接复用。检查失败的曲线不改变状态。
    """

    def __init__(self, schema: SurfaceSchema):
        self.schema = schema
        self.poly = polygon_of(schema)
        self._margins: Dict[SegmentKey, Dict[SegmentKey, float]] = {}
        self._best: Dict[SegmentKey, Tuple[float, Optional[SegmentKey]]] = {}
        self._hits: Dict[FrozenSet[SegmentKey], Point] = {}
        self._floats: Dict[SegmentKey, FloatSegment] = {}

    def __len__(self) -> int:
        return len(self._margins)

    def _float(self, key: SegmentKey, floats: Dict[SegmentKey, FloatSegment]) -> FloatSegment:
        value = self._floats.get(key) or floats.get(key)
        if value is None:
            value = (to_float(key[0]), to_float(key[1]))
            floats[key] = value
        return value

    def _examine(self, curve: PLCurve):
        poly = self.poly
        problems = _check_strands(curve, self.schema, poly)
        segments = _segments(curve, poly)
        by_key: Dict[SegmentKey, _Segment] = {}
        for seg in segments:
            if _key(seg) in by_key:
                problems.append(
                    TangentialCrossing("Segment traversed twice", seg.strand, seg.index)
                )
            by_key[_key(seg)] = seg
        added = [seg for seg in segments if _key(seg) not in self._margins]
        added_keys = {_key(seg) for seg in added}
        delta = _Delta(
            added=added_keys,
            removed={k for k in self._margins if k not in by_key},
            margins=[],
            hits={},
            floats={},
        )

        for seg in added:
            problems.extend(_segment_problems(seg, poly))
        for x in added:
            if x.a == x.b:
                continue
            fx = self._float(_key(x), delta.floats)
            for y in segments:
                if y is x or y.a == y.b or (_key(y) in added_keys and y.order < x.order):
                    continue
                fy = self._float(_key(y), delta.floats)
                problem, point, margin = _examine_pair(x, y, fx, fy, curve)
                if problem is not None:
                    problems.append(problem)
                if point is not None:
                    delta.hits[frozenset((_key(x), _key(y)))] = point
                if margin is not None:
                    delta.margins.append((_key(x), _key(y), margin))

        hits = {
            pair: p for pair, p in self._hits.items() if not (pair & delta.removed)
        }
        hits.update(delta.hits)
        ordered = []
        for pair, p in hits.items():
            x, y = sorted((by_key[k] for k in pair), key=lambda s: s.order)
            ordered.append((x, y, p))
        ordered.sort(key=lambda h: (h[0].order, h[1].order))
        by_point: Dict[Point, int] = {}
        for x, y, point in ordered:
            by_point[point] = by_point.get(point, 0) + 1
        for point, count in by_point.items():
            if count > 1:
                x = next(h[0] for h in ordered if h[2] == point)
                problems.append(
                    TriplePoint(f"Three or more branches meet at {point}", x.strand, x.index)
                )

        clearance = 0.0 if problems else self._clearance(curve, by_key, delta)
        report = GeneralPositionReport(
            crossings=tuple(_order_crossings(curve, segments, ordered)),
            clearance=clearance,
            violations=tuple(str(p) for p in problems),
        )
        return problems, report, delta

    def _clearance(
        self, curve: PLCurve, by_key: Dict[SegmentKey, _Segment], delta: _Delta
    ) -> float:
        margins = _end_margins(curve, self.poly)
        margins.extend(m for _, _, m in delta.margins)
        for key in by_key:
            if key not in self._margins:
                continue
            best, partner = self._best[key]
            if partner in delta.removed:
                best = min(
                    (m for other, m in self._margins[key].items() if other not in delta.removed),
                    default=math.inf,
                )
            margins.append(best)
        margins = [m for m in margins if m != math.inf]
        if not margins:
            return 1.0
        return min(margins) / 2

    def _commit(self, delta: _Delta) -> None:
        stale: Set[SegmentKey] = set()
        for key in delta.removed:
            for other in self._margins.pop(key):
                if other in self._margins:
                    del self._margins[other][key]
                    if self._best[other][1] == key:
                        stale.add(other)
            self._best.pop(key, None)
            self._floats.pop(key, None)
        self._hits = {
            pair: p for pair, p in self._hits.items() if not (pair & delta.removed)
        }
        self._hits.update(delta.hits)
        self._floats.update(delta.floats)
        for x, y, margin in delta.margins:
            for a, b in ((x, y), (y, x)):
                self._margins.setdefault(a, {})[b] = margin
                if margin < self._best.get(a, (math.inf, None))[0]:
                    self._best[a] = (margin, b)
        for key in delta.added:
            self._margins.setdefault(key, {})
            self._best.setdefault(key, (math.inf, None))
        for key in stale - delta.removed:
            row = self._margins[key]
            partner = min(row, key=row.get) if row else None
            self._best[key] = (row[partner], partner) if partner is not None else (math.inf, None)

    def inspect(self, curve: PLCurve) -> GeneralPositionReport:
        """检查但不提交"""
        _, report, _ = self._examine(curve)
        return report

    def validate(self, curve: PLCurve) -> GeneralPositionReport:
        """
        检查并在通过时提交为新的基准状态

        Raises:
            GeneralPositionError: 第一个违规
        """
        problems, report, delta = self._examine(curve)
        if problems:
            logger.debug(f"General position violations: {report.violations}")
            raise problems[0]
        self._commit(delta)
        return report


def check_general_position(curve: PLCurve, schema: SurfaceSchema) -> GeneralPositionReport:
    """
    检查一般位置

    Returns:
        GeneralPositionReport: 自交点、间隙以及所有违规描述
    """
    return GeneralPositionIndex(schema).inspect(curve)


def validate_general_position(
    curve: PLCurve, schema: SurfaceSchema, index: Optional[GeneralPositionIndex] = None
) -> GeneralPositionReport:
    """
    验证曲线处于一般位置

    Args:
        index: 连续检查一串相近曲线时复用的增量索引

    Raises:
        GeneralPositionError: 第一个违规（VertexHit、TangentialCrossing、TriplePoint 等）
    """
    return (index or GeneralPositionIndex(schema)).validate(curve)


def _order_crossings(curve, segments, hits) -> List[Crossing]:
    """按从基点出发的参数顺序排列每个自交点的两个分支"""
    total = len(segments)
    strand, vertex = curve.basepoint
    start = 0
    for seg in segments:
        if seg.strand == strand:
            offset = 0 if curve.strands[strand].entry is None else 1
            start = seg.order + vertex + offset
            break
    result = []
    for x, y, point in hits:
        ux = (x.order - start) % total + _param(x, point)
        uy = (y.order - start) % total + _param(y, point)
        first, second = (x, y) if ux < uy else (y, x)
        result.append(
            Crossing(
                first=CurveLocation(first.strand, first.index, _param(first, point)),
                second=CurveLocation(second.strand, second.index, _param(second, point)),
                point=point,
                sign=sign(cross(sub(first.b, first.a), sub(second.b, second.a))),
            )
        )
    return result


def _param(seg: _Segment, p: Point) -> Fraction:
    d = sub(seg.b, seg.a)
    return dot(sub(p, seg.a), d) / dot(d, d)


def crossings(curve: PLCurve, schema: SurfaceSchema) -> Tuple[Crossing, ...]:
    """
    所有自交点

    sign 为 (第一分支切向, 第二分支切向) 相对图卡定向的符号。
    """
    return validate_general_position(curve, schema).crossings


def self_intersection_parity(curve: PLCurve, schema: SurfaceSchema) -> int:
    """二重点个数模 2（原始计数，不做约定翻转）"""
    return len(crossings(curve, schema)) % 2


def crossing_count(curve: PLCurve, schema: SurfaceSchema) -> int:
    return len(crossings(curve, schema))


def edge_letters(curve: PLCurve, schema: SurfaceSchema) -> str:
    """从基点所在 strand 开始依次记录穿边字母"""
    if curve.strands[0].closed:
        return ""
    k = curve.basepoint[0]
    n = len(curve.strands)
    return "".join(
        schema.exit_letter(curve.strands[(k + i) % n].exit.side) for i in range(n)
    )


def edge_word(curve: PLCurve, schema: SurfaceSchema) -> CyclicWord:
    """曲线的基点边字"""
    from .words import reduce

    return reduce(edge_letters(curve, schema), schema)


# 连通和


def offset_points(points: Sequence[Point], amount: Fraction) -> List[Point]:
    """
    折线内部结点沿左法向的偏移

    points 包含两端点；只返回内部结点的偏移。
    """
    result: List[Point] = []
    for i in range(1, len(points) - 1):
        prev, v, nxt = points[i - 1], points[i], points[i + 1]
        n1 = _unit_left(sub(v, prev))
        n2 = _unit_left(sub(nxt, v))
        mx, my = n1[0] + n2[0], n1[1] + n2[1]
        denom = 1 + n1[0] * n2[0] + n1[1] * n2[1]
        if denom < 1e-6:
            mx, my, denom = n1[0], n1[1], 1.0
        shift = (
            Fraction(mx / denom).limit_denominator(10**6),
            Fraction(my / denom).limit_denominator(10**6),
        )
        result.append(add(v, scale(shift, amount)))
    return result


def _unit_left(d: Point) -> Tuple[float, float]:
    x, y = float(d[0]), float(d[1])
    length = (x * x + y * y) ** 0.5
    return (-y / length, x / length)


def _path_pieces(path: PLPath, f: PLCurve, g: PLCurve, poly: ModelPolygon) -> List[List[Point]]:
    pieces = []
    last = len(path.strands) - 1
    for k, strand in enumerate(path.strands):
        pts: List[Point] = []
        pts.append(
            location_point(f, path.start, poly)
            if k == 0
            else poly.side_point(strand.entry.side, strand.entry.t)
        )
        pts.extend(strand.points)
        pts.append(
            location_point(g, path.end, poly)
            if k == last
            else poly.side_point(strand.exit.side, strand.exit.t)
        )
        pieces.append(pts)
    return pieces


def _validate_path(f: PLCurve, g: PLCurve, path: PLPath, schema: SurfaceSchema) -> None:
    poly = polygon_of(schema)
    for k, strand in enumerate(path.strands[:-1]):
        nxt = path.strands[k + 1]
        if strand.exit is None or nxt.entry is None:
            raise StrandMismatch("Path strands must cross a side between pieces", k)
        if schema.partner(strand.exit.side) is None:
            raise BoundaryHit(f"Path touches free side {strand.exit.side}", k)
        if poly.forbidden_parameter(strand.exit.t):
            raise VertexHit("Path crosses a polygon vertex", k)
        if schema.glue_parameter(strand.exit.side, strand.exit.t) != (nxt.entry.side, nxt.entry.t):
            raise StrandMismatch("Path strands do not match across the gluing", k)
    for k, strand in enumerate(path.strands):
        for v, p in enumerate(strand.points):
            if poly.locate(p) <= 0:
                raise PointOutsidePolygon(f"Path point {p} is not inside the polygon", k, v)

    pieces = _path_pieces(path, f, g, poly)
    p_dir = sub(pieces[0][1], pieces[0][0])
    q_dir = sub(pieces[-1][-1], pieces[-1][-2])
    if cross(p_dir, location_direction(f, path.start, poly)) == 0:
        raise PathNotTransverse("Path is tangent to the first curve at its start")
    if cross(q_dir, location_direction(g, path.end, poly)) == 0:
        raise PathNotTransverse("Path is tangent to the second curve at its end")

    start_point = pieces[0][0]
    end_point = pieces[-1][-1]
    last = len(pieces) - 1
    for curve, endpoint in ((f, start_point), (g, end_point)):
        for seg in _segments(curve, poly):
            for k, pts in enumerate(pieces):
                for s in range(len(pts) - 1):
                    relation, point = segment_relation(pts[s], pts[s + 1], seg.a, seg.b)
                    if relation == SegmentRelation.DISJOINT:
                        continue
                    at_end = (k == 0 and s == 0) or (k == last and s == len(pts) - 2)
                    if relation == SegmentRelation.TOUCH and at_end and point == endpoint:
                        continue
                    raise PathCrossesCurves(
                        f"Path piece {k} segment {s} meets a curve at {point}"
                    )


@dataclass
class _Band:
    """连通和所需的几何数据"""

    f_walk: Walk
    g_walk: Walk
    f_index: int
    g_index: int
    f_minus: Point
    f_plus: Point
    g_minus: Point
    g_plus: Point
    f_minus_left: bool
    g_minus_left: bool
    pieces: List[List[Point]]
    twisted: bool


def _band(f, g, path, schema, cut: Fraction) -> _Band:
    poly = polygon_of(schema)
    pieces = _path_pieces(path, f, g, poly)
    f_dir = location_direction(f, path.start, poly)
    g_dir = location_direction(g, path.end, poly)
    p_dir = sub(pieces[0][1], pieces[0][0])
    q_dir = sub(pieces[-1][-1], pieces[-1][-2])
    sigma_f = sign(cross(p_dir, f_dir))
    sigma_g = sign(cross(q_dir, g_dir))

    fa = location_point(f, CurveLocation(path.start.strand, path.start.segment, 0), poly)
    fb = location_point(f, CurveLocation(path.start.strand, path.start.segment, 1), poly)
    ga = location_point(g, CurveLocation(path.end.strand, path.end.segment, 0), poly)
    gb = location_point(g, CurveLocation(path.end.strand, path.end.segment, 1), poly)
    tf, tg = path.start.t, path.end.t
    df = min(tf, 1 - tf) * cut
    dg = min(tg, 1 - tg) * cut

    # 沿路径追踪从 f_minus 出发的轨道位于哪一侧
    left = sigma_f < 0
    for k, strand in enumerate(path.strands[:-1]):
        if schema.same_sign(schema.sides[strand.exit.side].label):
            left = not left
    g_minus_left = sigma_g < 0
    return _Band(
        f_walk=curve_to_walk(f),
        g_walk=curve_to_walk(g),
        f_index=walk_index(f, path.start),
        g_index=walk_index(g, path.end),
        f_minus=lerp(fa, fb, tf - df),
        f_plus=lerp(fa, fb, tf + df),
        g_minus=lerp(ga, gb, tg - dg),
        g_plus=lerp(ga, gb, tg + dg),
        f_minus_left=sigma_f < 0,
        g_minus_left=g_minus_left,
        pieces=pieces,
        twisted=left != g_minus_left,
    )


def band_type(f: PLCurve, g: PLCurve, path: PLPath, schema: SurfaceSchema) -> BandType:
    """路径几何所决定的带类型：轨道交叉一次为 alternating，否则为 constant"""
    _validate_path(f, g, path, schema)
    band = _band(f, g, path, schema, Fraction(1, 4))
    return BandType.ALTERNATING if band.twisted else BandType.CONSTANT


def _rail(
    band: _Band, path: PLPath, schema: SurfaceSchema, start_left: bool, eps: Fraction
) -> List[Node]:
    """沿路径的一条轨道：从 f 的切点到 g 的切点（不含两端）"""
    nodes: List[Node] = []
    left = start_left
    last = len(band.pieces) - 1
    for k, pts in enumerate(band.pieces):
        sigma = 1 if left else -1
        for p in offset_points(pts, eps * sigma):
            nodes.append(("p", p))
        if k < last:
            exit_ = path.strands[k].exit
            t = exit_.t + sigma * eps
            side, t_in = schema.glue_parameter(exit_.side, t)
            nodes.append(("x", SidePoint(exit_.side, t), SidePoint(side, t_in)))
            path_entry = path.strands[k + 1].entry
            left = t_in < path_entry.t
    return nodes


def _reverse_nodes(nodes: List[Node]) -> List[Node]:
    out: List[Node] = []
    for node in reversed(nodes):
        out.append(("x", node[2], node[1]) if node[0] == "x" else node)
    return out


def _detoured(f, g, path: PLPath, poly: ModelPolygon, cut: Fraction) -> Tuple[PLPath, float]:
    """
    起点绕到 f 另一侧的同伦路径

    先从 f 的另一侧离开，平行于 f 越过 f_plus，再穿过 f 回到原来一侧。
    绕行落在同一块多边形内，因此与原路径同伦（固定端点）。
    返回新路径与绕行的尺度。
    """
    start = path.start
    fa = location_point(f, CurveLocation(start.strand, start.segment, 0), poly)
    fb = location_point(f, CurveLocation(start.strand, start.segment, 1), poly)
    u = sub(fb, fa)
    tf = start.t
    c = lerp(fa, fb, tf)
    side = sign(cross(u, sub(_path_pieces(path, f, g, poly)[0][1], c)))
    k = cut * min(tf, 1 - tf)
    down = scale(left_normal(u), -side * k)
    over = lerp(fa, fb, tf + (1 - tf) / 2)
    detour = (add(c, down), add(over, down), sub(over, down))
    first = path.strands[0]
    strands = (Strand(first.entry, detour + tuple(first.points), first.exit),)
    detoured = PLPath(start=start, strands=strands + tuple(path.strands[1:]), end=path.end)
    return detoured, float(k) * math.hypot(*to_float(u))


def concatenate(
    f: PLCurve,
    g: PLCurve,
    path: PLPath,
    schema: SurfaceSchema,
    band: Optional[BandType] = None,
) -> PLCurve:
    """
    沿路径的连通和 f #_p g*

    路径几何给出的带类型不是所要求的类型时，带先绕到 f 的另一侧再穿过 f，
    结果多出两个轨道与 f 的交叉，带类型翻转。

    Args:
        f, g: 两条曲线
        path: 从 f 上一点到 g 上一点的路径
        band: 要求的带类型；None 表示接受路径几何给出的类型

    Raises:
        PathNotTransverse, PathCrossesCurves: 路径不合法
    """
    _validate_path(f, g, path, schema)
    natural = band_type(f, g, path, schema)
    flip = band is not None and band != natural
    poly = polygon_of(schema)
    cut = Fraction(1, 4)
    eps = Fraction(1, 64)
    last_error: Optional[Exception] = None
    for _ in range(16):
        used, width = path, eps
        if flip:
            used, reach = _detoured(f, g, path, poly, cut)
            width = min(eps, Fraction(reach / 4).limit_denominator(1 << 20))
        b = _band(f, g, used, schema, cut)
        result = _assemble(b, used, schema, width, poly)
        try:
            validate_general_position(result, schema)
            logger.debug(f"Band sum built with {(band or natural).value} band, eps={width}")
            return result
        except GeneralPositionError as e:
            last_error = e
            cut /= 2
            eps /= 2
    raise last_error


def _assemble(b: _Band, path: PLPath, schema: SurfaceSchema, eps: Fraction, poly) -> PLCurve:
    f_walk, g_walk = b.f_walk, b.g_walk
    nodes: List[Node] = []
    # f 从 f_plus 沿正向绕到 f_minus
    nodes.append(("p", b.f_plus))
    n = len(f_walk)
    base = None
    for j in range(1, n + 1):
        idx = (b.f_index + j) % n
        if idx == f_walk.base:
            base = len(nodes)
        nodes.append(f_walk.nodes[idx])
    nodes.append(("p", b.f_minus))
    # 轨道 f_minus -> g_minus
    nodes.extend(_rail(b, path, schema, b.f_minus_left, eps))
    nodes.append(("p", b.g_minus))
    # g 从 g_minus 反向绕到 g_plus
    m = len(g_walk)
    for j in range(m):
        node = g_walk.nodes[(b.g_index - j) % m]
        nodes.append(("x", node[2], node[1]) if node[0] == "x" else node)
    nodes.append(("p", b.g_plus))
    # 轨道 g_plus -> f_plus，按正向构造后反转
    back = _rail(b, path, schema, not b.f_minus_left, eps)
    nodes.extend(_reverse_nodes(back))
    return walk_to_curve(Walk(nodes, base if base is not None else 0))
