"""
正则同伦移动引擎

每个移动都在多边形模型中精确地（有理数）构造，结果再做一般位置验证。
AddKink / RemoveKink 改变正则同伦类（旋转数 ±1，二重点数 ±1）；
其余移动以及成对的反号小环都保持正则同伦类。
"""

import logging
import math
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .curves import (
    GeneralPositionIndex,
    Node,
    Walk,
    curve_to_walk,
    polygon_of,
    strand_polyline,
    validate_general_position,
    walk_index,
    walk_location,
    walk_to_curve,
)
from .errors import (
    ClearanceViolated,
    DegenerateCrossing,
    GeneralPositionError,
    KinkNotFound,
)
from .models import (
    CurveLocation,
    DevelopedPolyline,
    Move,
    MoveKind,
    PLCurve,
    SidePoint,
    Strand,
    SurfaceSchema,
)
from .planar import (
    Point,
    SegmentRelation,
    add,
    cross,
    dot,
    left_normal,
    lerp,
    orient,
    scale,
    segment_relation,
    sign,
    sub,
    to_float,
)

logger = logging.getLogger(__name__)

# 小环在 (d, rot90 d) 坐标下的五个点
KINK_SHAPE = ((-2, 0), (1, 1), (0, 2), (-1, 1), (2, 0))
KINK_RETRIES = 12
REDRAW_LIMIT = 50


class Lcg64:
    """
    64 位线性同余生成器

    参数取自 MMIX：state = a * state + c (mod 2^64)。同一种子在任何实现中给出同样的序列。
    """

    A = 6364136223846793005
    C = 1442695040888963407
    MASK = (1 << 64) - 1

    def __init__(self, seed: int):
        self.state = seed & self.MASK

    def next_u64(self) -> int:
        self.state = (self.A * self.state + self.C) & self.MASK
        return self.state

    def below(self, n: int) -> int:
        """[0, n) 中的整数（取高 32 位）"""
        if n <= 0:
            raise ValueError(f"n must be positive, got {n}")
        return (self.next_u64() >> 32) % n

    def fraction(self, denominator: int = 1024) -> Fraction:
        """[-1, 1] 中分母为 denominator 的有理数"""
        return Fraction(self.below(2 * denominator + 1) - denominator, denominator)


def _clearance(
    curve: PLCurve, schema: SurfaceSchema, index: Optional[GeneralPositionIndex] = None
) -> float:
    return validate_general_position(curve, schema, index).clearance


def _revalidate(
    nodes: List[Node],
    base: int,
    schema: SurfaceSchema,
    index: Optional[GeneralPositionIndex] = None,
) -> PLCurve:
    result = walk_to_curve(Walk(nodes, base))
    validate_general_position(result, schema, index)
    return result


# 小环 (kink)


def _kink_points(p: Point, u: Point, h: Fraction, kink_sign: int) -> List[Point]:
    v = scale(left_normal(u), kink_sign)
    return [add(p, add(scale(u, a * h), scale(v, b * h))) for a, b in KINK_SHAPE]


def _insert_kink(
    curve: PLCurve,
    index: int,
    t: Fraction,
    kink_sign: int,
    schema: SurfaceSchema,
    position_index: Optional[GeneralPositionIndex] = None,
) -> PLCurve:
    poly = polygon_of(schema)
    walk = curve_to_walk(curve)
    a, b = walk.segment(index, poly)
    u = sub(b, a)
    p = lerp(a, b, t)
    length = math.hypot(*to_float(u))
    clearance = _clearance(curve, schema, position_index)

    h = Fraction(1)
    while 3 * length * h > clearance / 4 or 2 * h >= min(t, 1 - t):
        h /= 2

    last_error: Optional[Exception] = None
    for _ in range(KINK_RETRIES):
        nodes = list(walk.nodes)
        position = index % len(nodes) + 1
        nodes[position:position] = [("p", q) for q in _kink_points(p, u, h, kink_sign)]
        base = walk.base + 5 if walk.base >= position else walk.base
        try:
            return _revalidate(nodes, base, schema, position_index)
        except GeneralPositionError as e:
            last_error = e
            h /= 2
    raise ClearanceViolated(f"No room for a kink at walk segment {index}: {last_error}")


def add_kink(
    curve: PLCurve,
    kink_sign: int,
    location: CurveLocation,
    schema: SurfaceSchema,
    position_index: Optional[GeneralPositionIndex] = None,
) -> PLCurve:
    """
    在曲线位置处加一个小环

    kink_sign = +1 时小环相对图卡逆时针，旋转数 +1。

    Raises:
        ClearanceViolated: 在间隙内无法放下小环
    """
    if kink_sign not in (1, -1):
        raise ValueError(f"kink sign must be +1 or -1, got {kink_sign}")
    index = walk_index(curve, location)
    result = _insert_kink(curve, index, location.t, kink_sign, schema, position_index)
    logger.debug(f"Added {'+' if kink_sign > 0 else '-'} kink at walk segment {index}")
    return result


def _match_kink(nodes: Sequence[Node], start: int) -> Optional[int]:
    """从 start 开始的五个点结点是否构成小环；返回符号"""
    n = len(nodes)
    window = [nodes[(start + k) % n] for k in range(5)]
    if n < 6 or any(node[0] != "p" for node in window):
        return None
    a, b, c, d, e = (node[1] for node in window)
    w = scale(sub(e, a), Fraction(1, 4))
    if w == (0, 0):
        return None
    wn = left_normal(w)
    for kink_sign in (1, -1):
        s = scale(wn, kink_sign)
        if (
            b == add(add(a, scale(w, 3)), s)
            and c == add(add(a, scale(w, 2)), scale(s, 2))
            and d == add(add(a, w), s)
        ):
            return kink_sign
    return None


def _kinks_in_walk(walk: Walk) -> List[Tuple[int, int]]:
    found = []
    for i in range(len(walk)):
        kink_sign = _match_kink(walk.nodes, i)
        if kink_sign is not None:
            found.append((i, kink_sign))
    return found


def find_kinks(curve: PLCurve, schema: SurfaceSchema) -> List[Tuple[CurveLocation, int]]:
    """
    曲线上所有可识别的小环

    Returns:
        List[Tuple[CurveLocation, int]]: 小环第一段的位置以及符号（相对图卡）
    """
    walk = curve_to_walk(curve)
    return [(walk_location(curve, i), s) for i, s in _kinks_in_walk(walk)]


def _kink_at(walk: Walk, index: int) -> Tuple[int, int]:
    n = len(walk)
    for start, kink_sign in _kinks_in_walk(walk):
        offset = (index - start) % n
        if offset <= 3 or offset == n - 1:
            return start, kink_sign
    raise KinkNotFound(f"No kink near walk segment {index}")


def _drop_kink(walk: Walk, start: int, poly) -> Tuple[List[Node], int, int]:
    """
    删除从 start 开始的小环

    Returns:
        (nodes, base, before)：新结点序列、基点以及小环之前结点的新下标
    """
    n = len(walk)
    indices = [(start + k) % n for k in range(5)]
    removed = set(indices[1:4])
    prev = walk.node(start - 1)
    nxt = walk.node(start + 5)
    a, e = walk.nodes[indices[0]][1], walk.nodes[indices[4]][1]
    before_point = Walk.out_point(prev, poly)
    after_point = Walk.in_point(nxt, poly)
    if (
        orient(before_point, a, e) == 0
        and orient(a, e, after_point) == 0
        and dot(sub(a, before_point), sub(e, a)) > 0
        and dot(sub(e, a), sub(after_point, e)) > 0
    ):
        removed |= {indices[0], indices[4]}

    base = walk.base
    while base in removed:
        base = (base - 1) % n
    nodes: List[Node] = []
    new_base = 0
    before = 0
    for i, node in enumerate(walk.nodes):
        if i in removed:
            continue
        if i == base:
            new_base = len(nodes)
        if i == (start - 1) % n:
            before = len(nodes)
        nodes.append(node)
    if nodes[new_base][0] != "p":
        new_base = next(i for i, node in enumerate(nodes) if node[0] == "p")
    return nodes, new_base, before


def remove_kink(
    curve: PLCurve,
    location: CurveLocation,
    schema: SurfaceSchema,
    position_index: Optional[GeneralPositionIndex] = None,
) -> PLCurve:
    """
    删除位置附近的小环（AddKink 的逆）

    Raises:
        KinkNotFound: 该位置附近没有小环
    """
    poly = polygon_of(schema)
    walk = curve_to_walk(curve)
    start, kink_sign = _kink_at(walk, walk_index(curve, location))
    nodes, base, _ = _drop_kink(walk, start, poly)
    try:
        result = _revalidate(nodes, base, schema, position_index)
    except GeneralPositionError as e:
        raise ClearanceViolated(f"Removing the kink breaks general position: {e}")
    logger.debug(f"Removed {'+' if kink_sign > 0 else '-'} kink at walk node {start}")
    return result


def push_kink(
    curve: PLCurve,
    steps: int,
    schema: SurfaceSchema,
    location: Optional[CurveLocation] = None,
    position_index: Optional[GeneralPositionIndex] = None,
) -> PLCurve:
    """
    沿曲线向前推动一个小环

    经过翻转定向的粘合边时，小环相对图卡的符号改变。

    Raises:
        KinkNotFound: 曲线上没有小环
    """
    poly = polygon_of(schema)
    walk = curve_to_walk(curve)
    if location is None:
        kinks = _kinks_in_walk(walk)
        if not kinks:
            raise KinkNotFound("Curve has no kink to push")
        start, kink_sign = kinks[0]
    else:
        start, kink_sign = _kink_at(walk, walk_index(curve, location))

    nodes, base, before = _drop_kink(walk, start, poly)
    n = len(nodes)
    for k in range(1, steps + 1):
        node = nodes[(before + k) % n]
        if node[0] == "x" and schema.same_sign(schema.sides[node[1].side].label):
            kink_sign = -kink_sign
    target = (before + steps) % n
    try:
        stripped = _revalidate(nodes, base, schema, position_index)
    except GeneralPositionError as e:
        raise ClearanceViolated(f"Removing the kink breaks general position: {e}")
    logger.debug(f"Pushing kink {steps} segments forward, sign now {kink_sign}")
    return _insert_kink(stripped, target, Fraction(1, 2), kink_sign, schema, position_index)


# strand 变形


def _cusp_free(u0: Point, du: Point, w0: Point, dw: Point) -> bool:
    """
    转角 u(s)=u0+s*du -> w(s)=w0+s*dw 在 s∈[0,1] 上不出现尖点或零长度线段

    叉积关于 s 是线性的（du、dw 至多相差一个符号）。
    """
    c0 = cross(u0, w0)
    c1 = cross(du, w0) + cross(u0, dw)
    c2 = cross(du, dw)

    def dot_at(s: Fraction) -> Fraction:
        return dot(add(u0, scale(du, s)), add(w0, scale(dw, s)))

    if c2 != 0:
        raise ValueError("turn directions must move by the same displacement")
    if c1 == 0:
        if c0 != 0:
            return True
        return dot_at(Fraction(0)) > 0 and dot_at(Fraction(1)) > 0
    s = -c0 / c1
    if 0 <= s <= 1:
        return dot_at(s) > 0
    return True


def perturb_strand(
    curve: PLCurve,
    strand_index: int,
    displacement: Point,
    schema: SurfaceSchema,
    position_index: Optional[GeneralPositionIndex] = None,
) -> PLCurve:
    """
    平移 strand 的内部结点

    直线插值的每一时刻都没有尖点时才接受（凸多边形保证中间时刻仍在内部）。

    Raises:
        ClearanceViolated: 插值中出现尖点，或结果不在一般位置
    """
    poly = polygon_of(schema)
    if not (0 <= strand_index < len(curve.strands)):
        raise ValueError(f"strand {strand_index} out of range")
    strand = curve.strands[strand_index]
    delta = (Fraction(displacement[0]), Fraction(displacement[1]))
    zero = (Fraction(0), Fraction(0))
    moved = tuple(add(p, delta) for p in strand.points)
    if any(poly.locate(p) <= 0 for p in moved):
        raise ClearanceViolated(f"Displacement moves strand {strand_index} out of the polygon")

    if not strand.closed and strand.points:
        pts = strand_polyline(strand, poly)
        last = len(pts) - 1
        for v in range(1, last):
            u0 = sub(pts[v], pts[v - 1])
            w0 = sub(pts[v + 1], pts[v])
            du = delta if v == 1 else zero
            dw = scale(delta, -1) if v == last - 1 else zero
            if not _cusp_free(u0, du, w0, dw):
                raise ClearanceViolated(
                    f"Displacement creates a cusp at strand {strand_index} vertex {v - 1}"
                )

    strands = list(curve.strands)
    strands[strand_index] = Strand(strand.entry, moved, strand.exit)
    result = PLCurve(strands=tuple(strands), basepoint=curve.basepoint)
    try:
        validate_general_position(result, schema, position_index)
    except GeneralPositionError as e:
        raise ClearanceViolated(f"Perturbed curve is not in general position: {e}")
    return result


def _finger_candidates(poly) -> List[Fraction]:
    return [Fraction(k, 16) for k in range(1, 16) if not poly.forbidden_parameter(Fraction(k, 16))]


def slide_across_side(
    curve: PLCurve,
    strand_index: int,
    side: int,
    schema: SurfaceSchema,
    position_index: Optional[GeneralPositionIndex] = None,
) -> PLCurve:
    """
    手指移动：把 strand 的一小段推过边 side 再拉回

    手指两腿位于线段同一侧且互不相交，因此旋转数不变。

    Raises:
        ClearanceViolated: 找不到合法的手指
    """
    poly = polygon_of(schema)
    if not (0 <= side < schema.side_count) or schema.partner(side) is None:
        raise ClearanceViolated(f"Side {side} is not a paired side")
    if not (0 <= strand_index < len(curve.strands)):
        raise ValueError(f"strand {strand_index} out of range")
    walk = curve_to_walk(curve)
    pts = strand_polyline(curve.strands[strand_index], poly)
    partner = schema.partner(side)

    def distance(seg: int) -> float:
        mid = to_float(lerp(pts[seg], pts[seg + 1], Fraction(1, 2)))
        a = to_float(poly.side_point(side, Fraction(1, 2)))
        return math.hypot(mid[0] - a[0], mid[1] - a[1])

    segments = sorted(range(len(pts) - 1), key=distance)
    last_error: Optional[Exception] = None
    for seg in segments[:3]:
        a, b = pts[seg], pts[seg + 1]
        u = sub(b, a)
        index = walk_index(curve, CurveLocation(strand_index, seg))
        mid = lerp(a, b, Fraction(1, 2))
        centers = [
            t
            for t in _finger_candidates(poly)
            if sign(cross(u, sub(poly.side_point(side, t), mid))) != 0
        ]
        centers.sort(key=lambda t: math.hypot(*to_float(sub(poly.side_point(side, t), mid))))
        for center in centers[:4]:
            side_sign = sign(cross(u, sub(poly.side_point(side, center), mid)))
            width = Fraction(1, 32)
            for _ in range(6):
                attempt = _finger(
                    walk, index, a, b, side, partner, center, width, side_sign, schema, poly
                )
                if attempt is None:
                    width /= 2
                    continue
                nodes, base = attempt
                try:
                    result = _revalidate(nodes, base, schema, position_index)
                    logger.debug(f"Finger of strand {strand_index} slid across side {side}")
                    return result
                except GeneralPositionError as e:
                    last_error = e
                    width /= 2
    raise ClearanceViolated(
        f"No finger of strand {strand_index} fits across side {side}: {last_error}"
    )


def _finger(walk, index, a, b, side, partner, center, width, side_sign, schema, poly):
    t1, t2 = center - width, center + width
    if any(poly.forbidden_parameter(t) for t in (t1, t2)) or (
        poly.folded and t1 < Fraction(1, 2) < t2
    ):
        return None
    u = sub(b, a)
    m1 = lerp(a, b, Fraction(1, 2) - width)
    m2 = lerp(a, b, Fraction(1, 2) + width)
    s1, s2 = poly.side_point(side, t1), poly.side_point(side, t2)
    relation, _ = segment_relation(m1, s1, m2, s2)
    if relation != SegmentRelation.DISJOINT:
        t1, t2 = t2, t1
        s1, s2 = s2, s1
        if segment_relation(m1, s1, m2, s2)[0] != SegmentRelation.DISJOINT:
            return None
    if sign(cross(u, sub(s1, m1))) != side_sign or sign(cross(u, sub(s2, m2))) != side_sign:
        return None

    _, u1 = schema.glue_parameter(side, t1)
    _, u2 = schema.glue_parameter(side, t2)
    g1, g2 = poly.side_point(partner, u1), poly.side_point(partner, u2)
    base_mid = lerp(g1, g2, Fraction(1, 2))
    tip = lerp(base_mid, poly.center, width)

    finger: List[Node] = [
        ("p", m1),
        ("x", SidePoint(side, t1), SidePoint(partner, u1)),
        ("p", tip),
        ("x", SidePoint(partner, u2), SidePoint(side, t2)),
        ("p", m2),
    ]
    nodes = list(walk.nodes)
    position = index % len(nodes) + 1
    nodes[position:position] = finger
    base = walk.base + len(finger) if walk.base >= position else walk.base
    return nodes, base


# 分派


def apply(
    curve: PLCurve,
    move: Move,
    schema: SurfaceSchema,
    position_index: Optional[GeneralPositionIndex] = None,
) -> PLCurve:
    """
    应用一个移动

    Args:
        position_index: 连续移动时复用的一般位置增量索引

    Raises:
        ClearanceViolated: 参数超出间隙
        KinkNotFound: RemoveKink / PushKinkAlongCurve 找不到小环
    """
    if move.kind == MoveKind.ADD_KINK:
        return add_kink(curve, move.sign, move.location, schema, position_index)
    if move.kind == MoveKind.REMOVE_KINK:
        return remove_kink(curve, move.location, schema, position_index)
    if move.kind == MoveKind.PERTURB_STRAND:
        return perturb_strand(curve, move.strand, move.displacement, schema, position_index)
    if move.kind == MoveKind.SLIDE_ACROSS_SIDE:
        return slide_across_side(curve, move.strand, move.side, schema, position_index)
    if move.kind == MoveKind.PUSH_KINK:
        return push_kink(curve, move.steps, schema, move.location, position_index)
    raise ValueError(f"Unknown move kind: {move.kind}")


def apply_all(
    curve: PLCurve,
    moves: Sequence[Move],
    schema: SurfaceSchema,
    position_index: Optional[GeneralPositionIndex] = None,
) -> PLCurve:
    position_index = position_index or GeneralPositionIndex(schema)
    for i, move in enumerate(moves):
        curve = apply(curve, move, schema, position_index)
        logger.debug(f"Move {i}: {move.kind.value} applied")
    return curve


def _draw(
    curve: PLCurve, rng: Lcg64, schema: SurfaceSchema, position_index: GeneralPositionIndex
) -> List[Move]:
    """随机抽取一组保持正则同伦类的移动"""
    walk = curve_to_walk(curve)
    kind = rng.below(5)
    if kind == 0:
        candidates = [k for k, s in enumerate(curve.strands) if s.points]
        if not candidates:
            return []
        strand = candidates[rng.below(len(candidates))]
        size = Fraction(_clearance(curve, schema, position_index) / 4).limit_denominator(1 << 20)
        displacement = (rng.fraction() * size, rng.fraction() * size)
        return [Move(MoveKind.PERTURB_STRAND, strand=strand, displacement=displacement)]
    if kind == 1:
        paired = [i for i in range(schema.side_count) if schema.partner(i) is not None]
        if not paired:
            return []
        strand = rng.below(len(curve.strands))
        return [
            Move(MoveKind.SLIDE_ACROSS_SIDE, strand=strand, side=paired[rng.below(len(paired))])
        ]
    if kind == 2:
        index = rng.below(len(walk))
        location = walk_location(curve, index)
        kink_sign = 1 if rng.below(2) else -1
        second = CurveLocation(location.strand, location.segment + 5)
        return [
            Move(MoveKind.ADD_KINK, sign=kink_sign, location=location),
            Move(MoveKind.ADD_KINK, sign=-kink_sign, location=second),
        ]
    kinks = _kinks_in_walk(walk)
    if not kinks:
        return []
    if kind == 3:
        start, _ = kinks[rng.below(len(kinks))]
        return [
            Move(
                MoveKind.PUSH_KINK,
                location=walk_location(curve, start),
                steps=1 + rng.below(len(walk)),
            )
        ]
    starts = {start: s for start, s in kinks}
    for start, kink_sign in kinks:
        follower = (start + 5) % len(walk)
        if starts.get(follower) == -kink_sign:
            return [
                Move(MoveKind.REMOVE_KINK, location=walk_location(curve, follower)),
                Move(MoveKind.REMOVE_KINK, location=walk_location(curve, start)),
            ]
    return []


def random_regular_homotopy(
    curve: PLCurve,
    n: int,
    seed: int,
    schema: SurfaceSchema,
    record: Optional[List[Move]] = None,
) -> PLCurve:
    """
    随机应用 n 组保持正则同伦类的移动

    对同一 (curve, n, seed) 结果确定。失败的抽取会重新抽取，最多 50 次。

    Args:
        record: 若给出，依次追加实际应用的移动（可用 apply_all 重放）
    """
    position_index = GeneralPositionIndex(schema)
    validate_general_position(curve, schema, position_index)
    rng = Lcg64(seed)
    for step in range(n):
        for attempt in range(REDRAW_LIMIT):
            moves = _draw(curve, rng, schema, position_index)
            if not moves:
                continue
            try:
                result = apply_all(curve, moves, schema, position_index)
            except (ClearanceViolated, KinkNotFound, GeneralPositionError) as e:
                logger.debug(f"Step {step}: redrawing after {type(e).__name__}: {e}")
                continue
            curve = result
            if record is not None:
                record.extend(moves)
            break
        else:
            logger.warning(f"Step {step}: no admissible move after {REDRAW_LIMIT} draws")
    return curve


# Whitney 公式


def _proper_hits(points: np.ndarray) -> List[Tuple[int, int, float, float]]:
    n = len(points)
    hits = []
    scale_ = max(1.0, float(np.max(np.abs(points))))
    eps = 1e-12 * scale_
    for i in range(n):
        a, b = points[i], points[(i + 1) % n]
        d1 = b - a
        for j in range(i + 1, n):
            if j == i + 1 or (i == 0 and j == n - 1):
                continue
            c, d = points[j], points[(j + 1) % n]
            if max(a[0], b[0]) < min(c[0], d[0]) - eps or max(c[0], d[0]) < min(a[0], b[0]) - eps:
                continue
            if max(a[1], b[1]) < min(c[1], d[1]) - eps or max(c[1], d[1]) < min(a[1], b[1]) - eps:
                continue
            d2 = d - c
            denom = d1[0] * d2[1] - d1[1] * d2[0]
            r = c - a
            s = (r[0] * d2[1] - r[1] * d2[0]) / denom if denom else None
            t = (r[0] * d1[1] - r[1] * d1[0]) / denom if denom else None
            tol = 1e-9
            if abs(denom) <= eps * (np.linalg.norm(d1) + np.linalg.norm(d2)):
                if abs(r[0] * d1[1] - r[1] * d1[0]) <= eps * np.linalg.norm(d1) * 4:
                    raise DegenerateCrossing(f"Segments {i} and {j} overlap")
                continue
            if -tol < s < 1 + tol and -tol < t < 1 + tol:
                if min(abs(s), abs(1 - s), abs(t), abs(1 - t)) < tol:
                    raise DegenerateCrossing(f"Segments {i} and {j} meet at an endpoint")
                hits.append((i, j, s, t))
    return hits


def whitney_oracle(p: DevelopedPolyline) -> int:
    """
    用带符号交叉点计算平面闭折线的旋转数

    从字典序最大的顶点出发：T = mu + sum eps，mu 为该极点处的走向（逆时针 +1），
    每个交叉点的 eps = -sign(cross(先经过的切向, 后经过的切向))。

    Raises:
        DegenerateCrossing: 交叉点退化（重叠、经过顶点或极点处折返）
    """
    pts = np.asarray(p.points, dtype=float)
    if len(pts) > 1 and np.allclose(pts[0], pts[-1]):
        pts = pts[:-1]
    keep = [0]
    for k in range(1, len(pts)):
        if np.linalg.norm(pts[k] - pts[keep[-1]]) > 1e-14:
            keep.append(k)
    pts = pts[keep]
    n = len(pts)
    if n < 3:
        raise DegenerateCrossing("Polyline has fewer than three distinct vertices")

    start = max(range(n), key=lambda k: (pts[k][0], pts[k][1]))
    prev, here, nxt = pts[start - 1], pts[start], pts[(start + 1) % n]
    turn = (here - prev)[0] * (nxt - here)[1] - (here - prev)[1] * (nxt - here)[0]
    if abs(turn) < 1e-15:
        raise DegenerateCrossing("Extreme vertex is not a strict corner")
    mu = 1 if turn > 0 else -1

    total = mu
    for i, j, s, t in _proper_hits(pts):
        ui = (i - start) % n + s
        uj = (j - start) % n + t
        first, second = (i, j) if ui < uj else (j, i)
        d1 = pts[(first + 1) % n] - pts[first]
        d2 = pts[(second + 1) % n] - pts[second]
        total -= 1 if d1[0] * d2[1] - d1[1] * d2[0] > 0 else -1
    return total
