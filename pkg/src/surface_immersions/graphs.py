"""
图的浸入

生成树、支撑圈、顶点处的循环序，以及两个图浸入的正则同伦判定和完全不变量。
边芽记为 (边序号, +1) 表示边的起点端，(边序号, -1) 表示终点端。
"""

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from typing import Any, Dict, List, Optional, Sequence, Tuple

import networkx as nx

from .classify import framed_turning, reported_parity
from .config_manager import Tolerances
from .curves import (
    Node,
    Walk,
    crossing_count,
    offset_points,
    polygon_of,
    validate_general_position,
    walk_to_curve,
)
from .errors import (
    BoundaryHit,
    CoincidentGerms,
    GeneralPositionError,
    GraphMismatch,
    NotATree,
    PointOutsidePolygon,
    SameCycle,
    SideCoincidence,
    StrandMismatch,
    TangentialCrossing,
    TreeMismatch,
    TriplePoint,
    VertexHit,
)
from .models import (
    Answer,
    Germ,
    GraphImmersion,
    PLCurve,
    RotationData,
    SidePoint,
    SurfaceSchema,
    Verdict,
)
from .planar import Point, SegmentRelation, cross, dot, lerp, segment_relation, sub
from .schema import orientation_character
from .words import (
    GroupKind,
    conjugate_and_witness,
    cyclic_reduce,
    free_reduce,
    inverse,
    reduce,
    surface_group,
    words_equal,
)

logger = logging.getLogger(__name__)

DirectedEdge = Tuple[int, int]
Cycle = Tuple[DirectedEdge, ...]

CORNER_CUT = Fraction(1, 8)
LATERAL_OFFSET = Fraction(1, 64)
COMPOSE_RETRIES = 10


# 边的折线


def edge_nodes(gi: GraphImmersion, edge: int) -> List[Node]:
    """边像的结点序列（正向，两端为顶点像）"""
    u, v = gi.edges[edge]
    image = gi.edge_images[edge]
    nodes: List[Node] = [("p", gi.vertex_images[u])]
    for k, strand in enumerate(image.strands):
        nodes.extend(("p", p) for p in strand.points)
        if strand.exit is not None:
            nodes.append(("x", strand.exit, image.strands[k + 1].entry))
    nodes.append(("p", gi.vertex_images[v]))
    return nodes


def _reversed(nodes: List[Node]) -> List[Node]:
    return Walk(nodes, 0).reversed().nodes


def edge_image_letters(gi: GraphImmersion, edge: int, schema: SurfaceSchema) -> str:
    strands = gi.edge_images[edge].strands
    return "".join(schema.exit_letter(s.exit.side) for s in strands[:-1])


def directed_letters(
    gi: GraphImmersion, walk: Sequence[DirectedEdge], schema: SurfaceSchema
) -> str:
    """沿图中行走读出的边字"""
    word = ""
    for edge, direction in walk:
        letters = edge_image_letters(gi, edge, schema)
        word += letters if direction == 1 else inverse(letters)
    return word


def _edge_segments(gi: GraphImmersion, edge: int, poly) -> List[Tuple[Point, Point]]:
    nodes = edge_nodes(gi, edge)
    return [
        (Walk.out_point(nodes[i], poly), Walk.in_point(nodes[i + 1], poly))
        for i in range(len(nodes) - 1)
    ]


# 验证


def _allowed_touch(point: Point, first, second, vertex_points, adjacent: bool) -> bool:
    if adjacent:
        return True
    return point in vertex_points and point in first and point in second


def validate_graph(gi: GraphImmersion, schema: SurfaceSchema) -> None:
    """
    验证图浸入处于一般位置

    边像只在共同的顶点像处相接，其余交点都是横截的二重点。

    Raises:
        GeneralPositionError: 第一个违规
        CoincidentGerms: 某个顶点处两条边芽方向相同
    """
    poly = polygon_of(schema)
    for v, p in enumerate(gi.vertex_images):
        if poly.locate(p) <= 0:
            raise PointOutsidePolygon(f"Vertex {v} image {p} is not inside the polygon")
    if len(set(gi.vertex_images)) != len(gi.vertex_images):
        raise TangentialCrossing("Two vertices share an image")

    side_points: Dict[Tuple[int, Fraction], int] = {}
    for e, image in enumerate(gi.edge_images):
        for k, strand in enumerate(image.strands):
            for p in strand.points:
                if poly.locate(p) <= 0:
                    raise PointOutsidePolygon(f"Edge {e} point {p} is not inside the polygon", k)
            if strand.exit is None:
                continue
            nxt = image.strands[k + 1].entry
            if schema.partner(strand.exit.side) is None:
                raise BoundaryHit(f"Edge {e} touches free side {strand.exit.side}", k)
            if poly.forbidden_parameter(strand.exit.t):
                raise VertexHit(f"Edge {e} crosses a polygon vertex", k)
            if schema.glue_parameter(strand.exit.side, strand.exit.t) != (nxt.side, nxt.t):
                raise StrandMismatch(f"Edge {e} strands do not match across the gluing", k)
            for key in ((strand.exit.side, strand.exit.t), (nxt.side, nxt.t)):
                if key in side_points:
                    raise SideCoincidence(f"Side point {key[0]}@{key[1]} used twice", k)
                side_points[key] = e

    vertex_points = set(gi.vertex_images)
    segments = []
    for e in range(len(gi.edges)):
        for s, (a, b) in enumerate(_edge_segments(gi, e, poly)):
            if a == b:
                raise TangentialCrossing(f"Edge {e} has a degenerate segment", e, s)
            segments.append((e, s, a, b))

    hits: Dict[Point, int] = {}
    for i, (e1, s1, a, b) in enumerate(segments):
        for e2, s2, c, d in segments[i + 1 :]:
            relation, point = segment_relation(a, b, c, d)
            if relation == SegmentRelation.DISJOINT:
                continue
            if relation == SegmentRelation.PROPER:
                hits[point] = hits.get(point, 0) + 1
                if hits[point] > 1:
                    raise TriplePoint(f"Three branches meet at {point}", e1, s1)
                continue
            adjacent = e1 == e2 and s2 == s1 + 1 and b == c
            if relation == SegmentRelation.TOUCH and _allowed_touch(
                point, (a, b), (c, d), vertex_points, adjacent
            ):
                continue
            raise TangentialCrossing(f"Edge images touch at {point}", e1, s1)
    rotations(gi, schema)


# 生成树与支撑圈


def _tree_graph(gi: GraphImmersion) -> nx.Graph:
    tree = nx.Graph()
    tree.add_nodes_from(range(gi.vertex_count))
    for e in gi.tree:
        if not (0 <= e < len(gi.edges)):
            raise NotATree(f"Tree edge {e} does not exist")
        u, v = gi.edges[e]
        if u == v or tree.has_edge(u, v):
            raise NotATree(f"Tree edges contain a cycle at edge {e}")
        tree.add_edge(u, v, index=e)
    if not nx.is_tree(tree):
        raise NotATree("Tree edges do not form a spanning tree")
    return tree


def tree_path(gi: GraphImmersion, start: int, end: int) -> List[DirectedEdge]:
    """树中从 start 到 end 的有向边序列"""
    tree = _tree_graph(gi)
    vertices = nx.shortest_path(tree, start, end)
    path = []
    for u, v in zip(vertices[:-1], vertices[1:]):
        e = tree[u][v]["index"]
        path.append((e, 1 if gi.edges[e] == (u, v) else -1))
    return path


def support_cycles(gi: GraphImmersion) -> List[Cycle]:
    """
    每条非树边给出的支撑圈，按边序号排列

    圈从非树边 (a, b) 正向开始，再沿树从 b 回到 a。

    Raises:
        NotATree: tree 不是生成树
    """
    _tree_graph(gi)
    tree_edges = set(gi.tree)
    cycles = []
    for e, (a, b) in enumerate(gi.edges):
        if e in tree_edges:
            continue
        cycles.append(((e, 1),) + tuple(tree_path(gi, b, a)))
    return cycles


def cycle_start(gi: GraphImmersion, cycle: Sequence[DirectedEdge]) -> int:
    edge, direction = cycle[0]
    u, v = gi.edges[edge]
    return u if direction == 1 else v


def phi_C(gi: GraphImmersion, C: Cycle, Z: Cycle) -> Cycle:
    """
    图中实现 [C] + [Z] 的闭合行走

    对称差连通时取 Euler 回路；否则沿树路径把两个圈接起来（路径来回各走一次）。

    Raises:
        SameCycle: C 与 Z 是同一个圈
    """
    c_edges = {e for e, _ in C}
    z_edges = {e for e, _ in Z}
    if c_edges == z_edges:
        raise SameCycle("phi_C needs two different cycles")

    graph = nx.MultiGraph()
    for e in sorted(c_edges ^ z_edges):
        u, v = gi.edges[e]
        graph.add_edge(u, v, key=e)
    if nx.is_connected(graph):
        start = cycle_start(gi, C)
        if start not in graph:
            start = min(graph.nodes)
        return tuple(
            (e, 1 if gi.edges[e] == (u, v) else -1)
            for u, v, e in nx.eulerian_circuit(graph, source=start, keys=True)
        )

    path = tree_path(gi, cycle_start(gi, C), cycle_start(gi, Z))
    back = [(e, -d) for e, d in reversed(path)]
    return tuple(C) + tuple(path) + tuple(Z) + tuple(back)


# 组合曲线


def _offset_edge(
    nodes: List[Node], amount: Fraction, schema: SurfaceSchema, poly
) -> List[Node]:
    """边像（两端顶点除外）整体向左平移 amount"""
    out = list(nodes)
    sigma = 1
    piece = [0]
    for i in range(1, len(nodes)):
        node = nodes[i]
        if node[0] == "p" and i < len(nodes) - 1:
            piece.append(i)
            continue
        anchors = (
            [Walk.out_point(out[piece[0]], poly)]
            + [nodes[j][1] for j in piece[1:]]
            + [Walk.in_point(node, poly)]
        )
        for j, p in zip(piece[1:], offset_points(anchors, amount * sigma)):
            out[j] = ("p", p)
        if node[0] == "x":
            exit_ = node[1]
            t = exit_.t + sigma * amount
            side, t_in = schema.glue_parameter(exit_.side, t)
            out[i] = ("x", SidePoint(exit_.side, t), SidePoint(side, t_in))
            # 同号粘合翻转左右
            if schema.same_sign(schema.sides[exit_.side].label):
                sigma = -sigma
        piece = [i]
    return out


def _subdivided_edge(gi: GraphImmersion, edge: int, poly) -> List[Node]:
    nodes = edge_nodes(gi, edge)
    out: List[Node] = []
    for i, node in enumerate(nodes):
        out.append(node)
        if i + 1 < len(nodes):
            a = Walk.out_point(node, poly)
            b = Walk.in_point(nodes[i + 1], poly)
            out.append(("p", lerp(a, b, Fraction(1, 2))))
    return out


def _compose(
    gi: GraphImmersion,
    walk: Sequence[DirectedEdge],
    schema: SurfaceSchema,
    cut: Fraction,
    lateral: Fraction,
) -> PLCurve:
    poly = polygon_of(schema)
    passes: Dict[int, int] = {}
    legs: List[List[Node]] = []
    for edge, direction in walk:
        k = passes.get(edge, 0)
        passes[edge] = k + 1
        nodes = _subdivided_edge(gi, edge, poly)
        if k:
            nodes = _offset_edge(nodes, lateral * k, schema, poly)
        legs.append(nodes if direction == 1 else _reversed(nodes))

    visits: Dict[Point, int] = {}
    result: List[Node] = []
    for i, leg in enumerate(legs):
        result.extend(leg[1:-1])
        following = legs[(i + 1) % len(legs)]
        vertex = leg[-1][1]
        visits[vertex] = visits.get(vertex, 0) + 1
        fraction = cut * visits[vertex]
        result.append(("p", lerp(vertex, Walk.out_point(leg[-2], poly), fraction)))
        result.append(("p", lerp(vertex, Walk.in_point(following[1], poly), fraction)))
    base = next(i for i, node in enumerate(result) if node[0] == "p")
    return walk_to_curve(Walk(result, base))


def compose_walk(
    gi: GraphImmersion, walk: Sequence[DirectedEdge], schema: SurfaceSchema
) -> PLCurve:
    """
    把图中的闭合行走与边像复合成一般位置的闭曲线

    第 k 次经过顶点时在 k·eps 处用弦切掉拐角；同一条边的第 k 次经过向左平移 k·delta。
    曲线不在一般位置时把 eps 和 delta 减半重试。

    Raises:
        GeneralPositionError: 重试次数用完
    """
    visits: Dict[int, int] = {}
    for edge, direction in walk:
        u, v = gi.edges[edge]
        end = v if direction == 1 else u
        visits[end] = visits.get(end, 0) + 1
    cut = CORNER_CUT / (max(visits.values()) + 1)
    lateral = LATERAL_OFFSET
    last_error: Optional[GeneralPositionError] = None
    for attempt in range(COMPOSE_RETRIES):
        curve = _compose(gi, walk, schema, cut, lateral)
        try:
            validate_general_position(curve, schema)
            return curve
        except GeneralPositionError as e:
            logger.debug(f"Composed walk not in general position (attempt {attempt}): {e}")
            last_error = e
            cut /= 2
            lateral /= 2
    raise last_error


def cycle_curve(
    gi: GraphImmersion, cycle: Sequence[DirectedEdge], schema: SurfaceSchema
) -> PLCurve:
    """支撑圈上的限制 f|_C"""
    return compose_walk(gi, cycle, schema)


# 循环序


def _germ_direction(gi: GraphImmersion, germ: Germ, poly) -> Point:
    edge, end = germ
    nodes = edge_nodes(gi, edge)
    if end == 1:
        return sub(Walk.in_point(nodes[1], poly), nodes[0][1])
    return sub(Walk.out_point(nodes[-2], poly), nodes[-1][1])


def _half(p: Point) -> int:
    return 0 if (p[1] > 0 or (p[1] == 0 and p[0] > 0)) else 1


def _angle_compare(a: Tuple[Germ, Point], b: Tuple[Germ, Point]) -> int:
    ha, hb = _half(a[1]), _half(b[1])
    if ha != hb:
        return ha - hb
    c = cross(a[1], b[1])
    return 0 if c == 0 else (-1 if c > 0 else 1)


def vertex_signs(gi: GraphImmersion, schema: SurfaceSchema) -> Tuple[int, ...]:
    """从基点顶点沿树传输的局部定向相对图卡的符号"""
    root = gi.basepoint_vertex
    return tuple(
        orientation_character(schema, directed_letters(gi, tree_path(gi, root, v), schema))
        for v in range(gi.vertex_count)
    )


def rotations(gi: GraphImmersion, schema: SurfaceSchema) -> RotationData:
    """
    每个顶点处边芽的逆时针循环序

    Raises:
        CoincidentGerms: 两条边芽方向相同
    """
    poly = polygon_of(schema)
    germs: Dict[int, List[Tuple[Germ, Point]]] = {v: [] for v in range(gi.vertex_count)}
    for e, (u, v) in enumerate(gi.edges):
        germs[u].append(((e, 1), _germ_direction(gi, (e, 1), poly)))
        germs[v].append(((e, -1), _germ_direction(gi, (e, -1), poly)))
    orders = []
    for v in range(gi.vertex_count):
        ordered = sorted(germs[v], key=cmp_to_key(_angle_compare))
        for (g1, d1), (g2, d2) in zip(ordered, ordered[1:]):
            if cross(d1, d2) == 0 and dot(d1, d2) > 0:
                raise CoincidentGerms(
                    f"Germs {g1} and {g2} leave vertex {v} in the same direction"
                )
        orders.append(tuple(g for g, _ in ordered))
    return RotationData(orders=tuple(orders), signs=vertex_signs(gi, schema))


# 判定


def based_class(gi: GraphImmersion, cycle: Cycle, schema: SurfaceSchema) -> str:
    """支撑圈在基点顶点处的基点类（约化字）"""
    path = tree_path(gi, gi.basepoint_vertex, cycle_start(gi, cycle))
    to_start = directed_letters(gi, path, schema)
    word = to_start + directed_letters(gi, cycle, schema) + inverse(to_start)
    return reduce(word, schema).reduced


def _check_compatible(f: GraphImmersion, g: GraphImmersion) -> None:
    if f.vertex_count != g.vertex_count or f.edges != g.edges:
        raise GraphMismatch("Immersions are of different abstract graphs")
    if sorted(f.tree) != sorted(g.tree):
        raise TreeMismatch("Immersions use different spanning trees")
    if f.basepoint_vertex != g.basepoint_vertex:
        raise GraphMismatch("Immersions use different basepoint vertices")


def _based_root(word: str, schema: SurfaceSchema) -> str:
    group = surface_group(schema)
    if group.kind in (GroupKind.FREE, GroupKind.SURFACE):
        core, prefix = cyclic_reduce(word)
        root, n = group.primitive_root(core)
        if root * n == core:
            return free_reduce(prefix + root + inverse(prefix))
        return word
    root, _ = group.primitive_root(word)
    return root


def flip_realizable(classes: Sequence[str], schema: SurfaceSchema) -> bool:
    """
    是否存在翻转定向的元素与所有基点类交换

    候选：第一个非平凡类的本原根、各个生成元以及单位元。
    """
    nontrivial = [w for w in classes if w]
    if not nontrivial:
        return not schema.orientable
    candidates = [_based_root(nontrivial[0], schema)] + list(schema.generators)
    for c in candidates:
        if orientation_character(schema, c) != -1:
            continue
        if all(words_equal(c + w + inverse(c), w, schema) for w in nontrivial):
            return True
    return False


def _simultaneous_conjugator(
    f_classes: Sequence[str], g_classes: Sequence[str], schema: SurfaceSchema, bound: int
) -> Optional[str]:
    """c 使得 c·g_i·c⁻¹ = f_i 对所有 i 成立"""
    pairs = [(u, v) for u, v in zip(f_classes, g_classes) if u or v]
    if not pairs:
        return ""
    u0, v0 = pairs[0]
    first = conjugate_and_witness(u0, v0, schema)
    if not first.conjugate:
        return None
    group = surface_group(schema)
    centralizers = [""]
    if group.kind == GroupKind.KLEIN:
        # 群元的正规形 y^a x^b，b 取遍奇偶
        glide, fiber = group._glide, group._fiber
        for a in range(-bound, bound + 1):
            for b in range(-bound, bound + 1):
                y = fiber * a if a >= 0 else inverse(fiber) * -a
                x = glide * b if b >= 0 else inverse(glide) * -b
                centralizers.append(y + x)
    elif group.kind not in (GroupKind.TORUS, GroupKind.TRIVIAL, GroupKind.CYCLIC2):
        root = _based_root(u0, schema)
        for k in range(1, bound + 1):
            centralizers.extend([root * k, inverse(root) * k])
    for z in centralizers:
        c = free_reduce(z + first.witness)
        if all(words_equal(c + v + inverse(c), u, schema) for u, v in pairs):
            return c
    return None


@dataclass
class _CycleData:
    cycles: List[Cycle]
    classes: List[str]
    w1nu: List[int]
    z_index: Optional[int]
    signs: Tuple[int, ...]
    rotations: RotationData
    curves: Dict[int, PLCurve] = field(default_factory=dict)
    phi: Dict[int, Tuple[Cycle, PLCurve]] = field(default_factory=dict)


def _cycle_data(gi: GraphImmersion, schema: SurfaceSchema) -> _CycleData:
    validate_graph(gi, schema)
    cycles = support_cycles(gi)
    classes = [based_class(gi, c, schema) for c in cycles]
    w1nu = [orientation_character(schema, directed_letters(gi, c, schema)) for c in cycles]
    z_index = next((i for i, w in enumerate(w1nu) if w == -1), None)
    data = _CycleData(
        cycles=cycles,
        classes=classes,
        w1nu=w1nu,
        z_index=z_index,
        signs=vertex_signs(gi, schema),
        rotations=rotations(gi, schema),
    )
    for i, cycle in enumerate(cycles):
        data.curves[i] = cycle_curve(gi, cycle, schema)
        if w1nu[i] == -1 and i != z_index:
            walk = phi_C(gi, cycle, cycles[z_index])
            data.phi[i] = (walk, compose_walk(gi, walk, schema))
    return data


def _cycle_values(
    gi: GraphImmersion,
    data: _CycleData,
    schema: SurfaceSchema,
    flip: int,
    tolerances: Optional[Tolerances],
) -> Dict[str, Any]:
    """相对传输定向（乘以 flip）的各圈数值"""
    values: Dict[str, Any] = {
        "rotations": [
            [list(germ) for germ in data.rotations.oriented_order(v, flip)]
            for v in range(gi.vertex_count)
        ],
        "T": [],
        "s_Z": None,
    }
    for i, cycle in enumerate(data.cycles):
        if data.w1nu[i] == 1:
            curve = data.curves[i]
            start = cycle_start(gi, cycle)
        elif i == data.z_index:
            values["s_Z"] = reported_parity(crossing_count(data.curves[i], schema))
            values["T"].append(None)
            continue
        else:
            walk, curve = data.phi[i]
            start = cycle_start(gi, walk)
        if schema.kind.spherical:
            values["T"].append(reported_parity(crossing_count(curve, schema)))
        else:
            frame = data.signs[start] * flip
            values["T"].append(framed_turning(curve, schema, frame, tolerances))
    return values


def decide_graph(
    f: GraphImmersion,
    g: GraphImmersion,
    schema: SurfaceSchema,
    conjugator: Optional[str] = None,
    tolerances: Optional[Tolerances] = None,
) -> Verdict:
    """
    判定两个图浸入是否正则同伦

    (0) 找同时共轭所有支撑圈基点类的 c；(1) 比较传输定向后的循环序；
    (2) 法丛可定向的圈比较带标架旋转数；(3) 第一个法丛不可定向的圈 Z 比较自交奇偶，
    其余法丛不可定向的圈比较 phi_C 的带标架旋转数。

    Raises:
        GraphMismatch, TreeMismatch: 两个浸入的抽象图或生成树不同
    """
    _check_compatible(f, g)
    tol = tolerances or Tolerances()
    data_f = _cycle_data(f, schema)
    data_g = _cycle_data(g, schema)
    details: Dict[str, Any] = {"f_classes": data_f.classes, "g_classes": data_g.classes}

    for i, (wf, wg) in enumerate(zip(data_f.w1nu, data_g.w1nu)):
        if wf != wg:
            return Verdict(Answer.NO, f"w1 of cycle {i} differs", details)

    if conjugator is not None:
        c = conjugator
        if not all(
            words_equal(c + v + inverse(c), u, schema)
            for u, v in zip(data_f.classes, data_g.classes)
        ):
            return Verdict(Answer.NO, "conjugator does not match the cycle classes", details)
    else:
        longest = max([len(w) for w in data_f.classes + data_g.classes] + [0])
        relator = max([len(r) for r in schema.relators] + [0])
        bound = tol.conjugator_bound
        if bound is None:
            bound = 2 * longest + relator
        c = _simultaneous_conjugator(data_f.classes, data_g.classes, schema, bound)
        if c is None:
            if surface_group(schema).kind == GroupKind.SURFACE:
                return Verdict(Answer.UNKNOWN, "homotopy search exhausted", details)
            return Verdict(Answer.NO, "cycle classes are not simultaneously conjugate", details)
    details["conjugator"] = c

    chi = orientation_character(schema, c) if c else 1
    flips = [chi]
    if flip_realizable(data_f.classes, schema):
        flips.append(-chi)

    values_f = _cycle_values(f, data_f, schema, 1, tol)
    last_reason = ""
    for flip in flips:
        values_g = _cycle_values(g, data_g, schema, flip, tol)
        if values_f["rotations"] != values_g["rotations"]:
            last_reason = "cyclic orders differ"
            continue
        if values_f["s_Z"] != values_g["s_Z"]:
            last_reason = "s of the non-orientable cycle differs"
            continue
        mismatch = [i for i, (a, b) in enumerate(zip(values_f["T"], values_g["T"])) if a != b]
        if mismatch:
            last_reason = f"framed turning number of cycle {mismatch[0]} differs"
            continue
        details.update({"f": values_f, "g": values_g, "flip": flip})
        return Verdict(Answer.YES, "all cycle conditions hold", details)
    details["f"] = values_f
    return Verdict(Answer.NO, last_reason, details)


def graph_full_invariant(
    f: GraphImmersion, schema: SurfaceSchema, tolerances: Optional[Tolerances] = None
) -> Dict[str, Any]:
    """
    图浸入的完全（非规范）不变量

    记录循环序、支撑圈基点类、每个圈的 w1、Z 的自交奇偶以及带标架旋转数向量。
    若存在与所有基点类交换的翻转定向元素，则对同时翻转（旋转数取反、循环序反向）取商。
    """
    data = _cycle_data(f, schema)
    flip_ok = flip_realizable(data.classes, schema)
    record = _cycle_values(f, data, schema, 1, tolerances)
    if flip_ok:
        flipped = _cycle_values(f, data, schema, -1, tolerances)
        key = json.dumps(record, sort_keys=True)
        if json.dumps(flipped, sort_keys=True) < key:
            record = flipped
    record.update(
        {
            "classes": data.classes,
            "w1nu": data.w1nu,
            "flip_quotient": flip_ok,
        }
    )
    return record
