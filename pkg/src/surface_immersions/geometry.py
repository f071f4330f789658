"""
几何实现与展开

把 schema 实现为欧氏正方形或双曲正多边形（Klein 模型），
用 3x3 射影矩阵表示等距变换：欧氏情形是仿射矩阵，双曲情形是 O(2,1) 中的
Lorentz 矩阵。曲线沿穿边依次复合粘合变换，展开到万有覆叠的平面图卡中。
"""

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .config_manager import Tolerances
from .curves import curve_to_walk, edge_letters, polygon_of, Walk
from .errors import (
    AngleSumNotInteger,
    EllipticHolonomy,
    NonOrientableNormalBundle,
    NotClosed,
    NotNullHomotopic,
    NullHomotopicInput,
    RelatorNotClosing,
    SampleTooCoarse,
    SphericalSchema,
    UnsupportedSchema,
)
from .models import DevelopedPolyline, PLCurve, SurfaceKind, SurfaceSchema
from .planar import to_float, turn_angle
from .schema import orientation_character

logger = logging.getLogger(__name__)

MINKOWSKI = np.diag([1.0, 1.0, -1.0])
EUCLIDEAN = "euclidean"
HYPERBOLIC = "hyperbolic"
ROUND = "round"

# 八字形浸入的法向幅度
EIGHT_AMPLITUDE = 0.05


@dataclass
class Holonomy:
    """
    schema 的几何实现

    side_motions[i] 是曲线从边 i 离开时右乘的等距变换：它把配对边映到边 i，
    并把基本多边形映到边 i 对面的那一块。
    """

    geometry: str
    schema: SurfaceSchema
    side_motions: Dict[int, np.ndarray] = field(default_factory=dict)
    reflections: Dict[str, bool] = field(default_factory=dict)
    model_vertices: Optional[np.ndarray] = None
    chart_vertices: Optional[np.ndarray] = None
    model_center: Tuple[float, float] = (0.0, 0.0)
    relator_residual: float = 0.0

    @property
    def hyperbolic(self) -> bool:
        return self.geometry == HYPERBOLIC

    def generator(self, letter: str) -> np.ndarray:
        return self.side_motions[self.schema.exit_side(letter)]

    def word_motion(self, word: str) -> np.ndarray:
        motion = np.eye(3)
        for letter in word:
            motion = motion @ self.generator(letter)
        return motion

    def to_chart(self, p: Sequence[float]) -> np.ndarray:
        """模型多边形中的点映到图卡（双曲情形按扇形仿射映射）"""
        if self.chart_vertices is None:
            return np.array([p[0], p[1]], dtype=float)
        ox, oy = self.model_center
        q = np.array([p[0] - ox, p[1] - oy])
        model = self.model_vertices - np.array([ox, oy])
        n = len(model)
        for k in range(n):
            a, b = model[k], model[(k + 1) % n]
            if _cross(a, q) >= -1e-15 and _cross(q, b) >= -1e-15:
                lam = np.linalg.solve(np.column_stack([a, b]), q)
                return lam[0] * self.chart_vertices[k] + lam[1] * self.chart_vertices[(k + 1) % n]
        return np.zeros(2)

    def fan_parameters(self, a: Sequence[float], b: Sequence[float]) -> List[float]:
        """线段 ab 与中心射线的交点参数；在这些点处细分后，图卡中的像仍是直线段"""
        if self.chart_vertices is None:
            return []
        ox, oy = self.model_center
        pa = np.array([a[0] - ox, a[1] - oy])
        d = np.array([b[0] - a[0], b[1] - a[1]])
        params = []
        for v in self.model_vertices - np.array([ox, oy]):
            denom = _cross(d, v)
            if abs(denom) < 1e-15:
                continue
            t = _cross(v, pa) / denom
            s = _cross(d, pa) / denom
            if 1e-12 < t < 1 - 1e-12 and s > 0:
                params.append(t)
        return sorted(params)


def _cross(u, v) -> float:
    return float(u[0] * v[1] - u[1] * v[0])


def apply(motion: np.ndarray, point: Sequence[float]) -> np.ndarray:
    x = motion @ np.array([point[0], point[1], 1.0])
    return x[:2] / x[2]


def sl2_to_lorentz(m: Sequence[Sequence[float]]) -> np.ndarray:
    """
    SL(2,R) 矩阵转为 Klein 模型中的 Lorentz 矩阵

    通过 X = [[x3+x1, x2], [x2, x3-x1]] 上的作用 g X g^T。
    """
    g = np.asarray(m, dtype=float)
    basis = [
        np.array([[1.0, 0.0], [0.0, -1.0]]),
        np.array([[0.0, 1.0], [1.0, 0.0]]),
        np.array([[1.0, 0.0], [0.0, 1.0]]),
    ]
    result = np.zeros((3, 3))
    for j, e in enumerate(basis):
        y = g @ e @ g.T
        result[:, j] = [(y[0, 0] - y[1, 1]) / 2, y[0, 1], (y[0, 0] + y[1, 1]) / 2]
    return result


def _rotation(angle: float, center: np.ndarray) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    rot = np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
    return _conjugate_by_translation(rot, center)


def _reflection_through(angle: float, center: np.ndarray) -> np.ndarray:
    c, s = math.cos(2 * angle), math.sin(2 * angle)
    ref = np.array([[c, s, 0.0], [s, -c, 0.0], [0.0, 0.0, 1.0]])
    return _conjugate_by_translation(ref, center)


def _conjugate_by_translation(m: np.ndarray, center: np.ndarray) -> np.ndarray:
    t = np.array([[1.0, 0.0, center[0]], [0.0, 1.0, center[1]], [0.0, 0.0, 1.0]])
    t_inv = np.array([[1.0, 0.0, -center[0]], [0.0, 1.0, -center[1]], [0.0, 0.0, 1.0]])
    return t @ m @ t_inv


def _euclidean_side_reflection(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    d = (b - a) / np.linalg.norm(b - a)
    n = np.array([-d[1], d[0]])
    linear = np.eye(2) - 2 * np.outer(n, n)
    translation = a - linear @ a
    m = np.eye(3)
    m[:2, :2] = linear
    m[:2, 2] = translation
    return m


def _lorentz_side_reflection(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = MINKOWSKI @ np.cross(np.append(a, 1.0), np.append(b, 1.0))
    return np.eye(3) - 2 * np.outer(n, n) @ MINKOWSKI / (n @ MINKOWSKI @ n)


def _regular_klein_radius(n: int, angle: float) -> float:
    cosh_r = 1 / (math.tan(math.pi / n) * math.tan(angle / 2))
    if cosh_r <= 1:
        raise UnsupportedSchema(f"No hyperbolic {n}-gon with vertex angle {angle:.4f}")
    return math.tanh(math.acosh(cosh_r))


def _side_motions(
    schema: SurfaceSchema,
    vertices: np.ndarray,
    center: np.ndarray,
    side_reflection: Callable[[np.ndarray, np.ndarray], np.ndarray],
) -> Dict[int, np.ndarray]:
    n = len(vertices)
    angles = [math.atan2(v[1] - center[1], v[0] - center[0]) for v in vertices]
    motions: Dict[int, np.ndarray] = {}
    for i in range(schema.side_count):
        j = schema.partner(i)
        if j is None:
            continue
        if schema.same_sign(schema.sides[i].label):
            # V_j -> V_i, V_{j+1} -> V_{i+1}
            tau = _rotation(angles[i] - angles[j], center)
        else:
            # V_j -> V_{i+1}, V_{j+1} -> V_i
            tau = _reflection_through((angles[j] + angles[(i + 1) % n]) / 2, center)
        sigma = side_reflection(vertices[i], vertices[(i + 1) % n])
        motions[i] = sigma @ tau
    return motions


@lru_cache(maxsize=32)
def _realize_cached(schema: SurfaceSchema, tolerance: float) -> Holonomy:
    kind = schema.kind
    if kind.spherical:
        return Holonomy(geometry=ROUND, schema=schema)

    poly = polygon_of(schema)
    model = np.array([to_float(p) for p in poly.corners])
    model_center = np.array(to_float(poly.center))
    paired = bool(schema.generators)

    if schema.euler_characteristic >= 0:
        if paired and poly.side_count != 4:
            raise UnsupportedSchema(
                f"Euclidean schemas with gluings must be four-sided, got {schema.boundary_word}"
            )
        motions = _side_motions(schema, model, model_center, _euclidean_side_reflection)
        hol = Holonomy(
            geometry=EUCLIDEAN,
            schema=schema,
            side_motions=motions,
            model_center=tuple(model_center),
        )
    else:
        n = schema.side_count
        if kind == SurfaceKind.HYPERBOLIC_CLOSED:
            if len(schema.vertex_classes) != 1:
                raise UnsupportedSchema(
                    f"Closed hyperbolic schema {schema.boundary_word} must have one vertex class"
                )
            angle = 2 * math.pi / n
        else:
            largest = max(len(c) for c in schema.vertex_classes)
            angle = math.pi / (largest + 1)
        radius = _regular_klein_radius(n, angle)
        offset = -math.pi / 2 - math.pi / n
        chart = np.array(
            [
                [radius * math.cos(offset + 2 * math.pi * k / n),
                 radius * math.sin(offset + 2 * math.pi * k / n)]
                for k in range(n)
            ]
        )
        motions = _side_motions(schema, chart, np.zeros(2), _lorentz_side_reflection)
        hol = Holonomy(
            geometry=HYPERBOLIC,
            schema=schema,
            side_motions=motions,
            model_vertices=model,
            chart_vertices=chart,
            model_center=tuple(model_center),
        )

    hol.reflections = {g: schema.same_sign(g) for g in schema.generators}
    residual = 0.0
    for relator in schema.relators:
        residual = max(residual, float(np.max(np.abs(hol.word_motion(relator) - np.eye(3)))))
    hol.relator_residual = residual
    if residual > tolerance:
        raise RelatorNotClosing(
            f"Relator product of {schema.boundary_word} misses the identity by {residual:.3g}"
        )
    logger.debug(f"Realized {schema.boundary_word} as {hol.geometry}, residual {residual:.2g}")
    return hol


def realize(schema: SurfaceSchema, tolerances: Optional[Tolerances] = None) -> Holonomy:
    """
    几何实现

    Raises:
        RelatorNotClosing: 关系子的复合变换偏离恒等超过容差
        UnsupportedSchema: 无法构造几何实现
    """
    tol = tolerances or Tolerances()
    return _realize_cached(schema, tol.motion_residual)


# 展开


def develop_path(
    curve: PLCurve,
    schema: SurfaceSchema,
    hol: Optional[Holonomy] = None,
    start: Optional[np.ndarray] = None,
    motions: Optional[List[np.ndarray]] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    沿曲线从基点出发展开一圈

    Returns:
        (points, motion)：图卡中的折线（首点为基点，末点为 motion(基点)）以及
        整圈复合后的变换
    """
    if schema.kind.spherical:
        raise SphericalSchema(f"{schema.kind.value} has no planar chart")
    hol = hol or realize(schema)
    poly = polygon_of(schema)
    walk = curve_to_walk(curve).rotated(curve_to_walk(curve).base)
    current = np.eye(3) if start is None else np.asarray(start, dtype=float)
    if motions is not None:
        motions.append(current)

    first = hol.to_chart(to_float(Walk.out_point(walk.node(0), poly)))
    points = [apply(current, first)]
    for i in range(len(walk)):
        a = to_float(Walk.out_point(walk.node(i), poly))
        b = to_float(Walk.in_point(walk.node(i + 1), poly))
        for t in hol.fan_parameters(a, b) + [1.0]:
            p = (a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t)
            points.append(apply(current, hol.to_chart(p)))
        nxt = walk.node(i + 1)
        if nxt[0] == "x":
            current = current @ hol.side_motions[nxt[1].side]
            if motions is not None:
                motions.append(current)
    return np.array(points), current


def develop(
    curve: PLCurve,
    schema: SurfaceSchema,
    hol: Optional[Holonomy] = None,
    start: Optional[np.ndarray] = None,
    sample_density: Optional[float] = None,
    tolerances: Optional[Tolerances] = None,
) -> DevelopedPolyline:
    """
    把零伦曲线展开为图卡中的闭折线

    Raises:
        NotNullHomotopic: 整圈复合变换不是恒等（附残差）
    """
    tol = tolerances or Tolerances()
    hol = hol or realize(schema, tol)
    points, motion = develop_path(curve, schema, hol, start)
    reference = np.eye(3) if start is None else np.asarray(start, dtype=float)
    residual = float(np.max(np.abs(motion - reference)))
    if residual > max(tol.motion_residual, 1e-7):
        raise NotNullHomotopic(
            f"Curve with edge word {edge_letters(curve, schema)!r} does not close up", residual
        )
    points[-1] = points[0]
    if sample_density:
        points = _refine(points, sample_density)
    return DevelopedPolyline(
        points=tuple((float(x), float(y)) for x, y in points),
        closed=True,
        sample_density=sample_density,
    )


def _refine(points: np.ndarray, density: float) -> np.ndarray:
    out = [points[0]]
    for a, b in zip(points[:-1], points[1:]):
        pieces = max(1, int(math.ceil(np.linalg.norm(b - a) / density)))
        for k in range(1, pieces + 1):
            out.append(a + (b - a) * k / pieces)
    return np.array(out)


def turning_number_planar(p: DevelopedPolyline, tolerances: Optional[Tolerances] = None) -> int:
    """
    平面闭折线的切向旋转数

    Raises:
        NotClosed: 首末点不重合
        AngleSumNotInteger: 外角和偏离整数（或出现尖点）
    """
    tol = tolerances or Tolerances()
    pts = np.asarray(p.points, dtype=float)
    if len(pts) < 3:
        raise NotClosed("Polyline needs at least three points")
    span = max(1.0, float(np.max(np.abs(pts))))
    if not p.closed or np.linalg.norm(pts[0] - pts[-1]) > 1e-6 * span:
        raise NotClosed(f"Polyline endpoints differ by {np.linalg.norm(pts[0] - pts[-1]):.3g}")
    cleaned = [pts[0]]
    for q in pts[1:-1]:
        if np.linalg.norm(q - cleaned[-1]) > 1e-13 * span:
            cleaned.append(q)
    while len(cleaned) > 1 and np.linalg.norm(cleaned[-1] - cleaned[0]) <= 1e-13 * span:
        cleaned.pop()
    ring = np.array(cleaned)
    if len(ring) < 2:
        raise NotClosed("Polyline is degenerate")
    directions = np.roll(ring, -1, axis=0) - ring
    total = 0.0
    for k in range(len(directions)):
        angle = turn_angle(directions[k - 1], directions[k])
        if abs(angle) > math.pi - 1e-9:
            raise AngleSumNotInteger(f"Polyline has a cusp at vertex {k}", math.pi)
        total += angle
    turns = total / (2 * math.pi)
    nearest = round(turns)
    residual = abs(turns - nearest)
    if residual > tol.angle_integrality:
        raise AngleSumNotInteger("Exterior angle sum is not a multiple of 2*pi", residual)
    return int(nearest)


# 环形覆叠坐标


def figure_eight(theta: float, r: float) -> np.ndarray:
    """八字形浸入：环面坐标 (theta, r) 到平面"""
    t = 2 * math.pi * theta
    e = np.array([math.sin(2 * t), math.sin(t)])
    de = np.array([2 * math.cos(2 * t), math.cos(t)])
    normal = np.array([-de[1], de[0]]) / np.linalg.norm(de)
    return e + EIGHT_AMPLITUDE * (2 * r - 1) * normal


def _sigmoid(d: float) -> float:
    return 0.5 * (1 + math.tanh(d / 2))


def _minkowski(x: np.ndarray, y: np.ndarray) -> float:
    return float(x @ MINKOWSKI @ y)


def _hyperboloid(p: Sequence[float]) -> np.ndarray:
    x = np.array([p[0], p[1], 1.0])
    return x / math.sqrt(-_minkowski(x, x))


def _future_null(v: np.ndarray) -> np.ndarray:
    v = np.real(v).astype(float)
    return v / v[2] if v[2] != 0 else v


def _annulus_coordinates(
    gamma: np.ndarray, hyperbolic: bool, anchor: Sequence[float]
) -> Callable[[Sequence[float]], Tuple[float, float]]:
    """gamma 作用下 theta 增加 1 的环面坐标 (theta, d)"""
    if not hyperbolic:
        linear = gamma[:2, :2]
        if np.max(np.abs(linear - np.eye(2))) > 1e-7:
            raise EllipticHolonomy("Euclidean holonomy is not a translation")
        v = gamma[:2, 2]
        length2 = float(v @ v)
        perp = np.array([-v[1], v[0]]) / math.sqrt(length2)

        def coords(p):
            q = np.asarray(p, dtype=float)
            return float(q @ v) / length2, float(q @ perp)

        return coords

    trace = float(np.trace(gamma))
    if trace < 3 - 1e-7:
        raise EllipticHolonomy(f"Holonomy trace {trace:.6f} is elliptic")
    if trace > 3 + 1e-7:
        values, vectors = np.linalg.eig(gamma)
        order = np.argsort(np.abs(values))
        lam = float(np.real(values[order[-1]]))
        e_plus = _future_null(vectors[:, order[-1]])
        e_minus = _future_null(vectors[:, order[0]])
        normal = MINKOWSKI @ np.cross(e_plus, e_minus)
        normal = normal / math.sqrt(_minkowski(normal, normal))
        log_lam = math.log(lam)

        def coords(p):
            x = _hyperboloid(p)
            theta = math.log(_minkowski(x, e_minus) / _minkowski(x, e_plus)) / (2 * log_lam)
            return theta, math.asinh(_minkowski(x, normal))

    else:
        values, vectors = np.linalg.eig(gamma)
        e = _future_null(vectors[:, int(np.argmin(np.abs(values - 1)))])
        m = MINKOWSKI @ np.cross(e, np.array([0.0, 0.0, 1.0]))
        if abs(_minkowski(m, m)) < 1e-12:
            m = MINKOWSKI @ np.cross(e, np.array([1.0, 0.0, 1.0]))
        m = m / math.sqrt(_minkowski(m, m))

        def raw(p):
            x = _hyperboloid(p)
            h = -_minkowski(x, e)
            return _minkowski(x, m) / h, -math.log(h)

        x0 = np.asarray(anchor, dtype=float)
        shift = raw(apply(gamma, x0))[0] - raw(x0)[0]

        def coords(p):
            u, d = raw(p)
            return u / shift, d

    return coords


def _oriented(coords, anchor: Sequence[float]):
    """保证 (theta, d) 与图卡定向一致"""
    h = 1e-6
    x, y = float(anchor[0]), float(anchor[1])
    t0, d0 = coords((x, y))
    tx, dx = coords((x + h, y))
    ty, dy = coords((x, y + h))
    det = (tx - t0) * (dy - d0) - (ty - t0) * (dx - d0)
    if det > 0:
        return coords
    return lambda p: (coords(p)[0], -coords(p)[1])


def annular_T(
    curve: PLCurve,
    schema: SurfaceSchema,
    frame: int = 1,
    hol: Optional[Holonomy] = None,
    tolerances: Optional[Tolerances] = None,
) -> int:
    """
    本质曲线在环形覆叠中经八字形浸入后的旋转数

    Args:
        frame: 基点处相对图卡定向的法向标架符号

    Raises:
        NullHomotopicInput: 曲线零伦，应使用 develop
        NonOrientableNormalBundle: 法丛不可定向
        EllipticHolonomy: 完整环绕的和乐不是平移/双曲/抛物型
        SampleTooCoarse: 采样上限内无法把线段内相邻切向转角压到 pi/2 以下
    """
    from .words import is_trivial

    if frame not in (1, -1):
        raise ValueError(f"frame must be +1 or -1, got {frame}")
    tol = tolerances or Tolerances()
    letters = edge_letters(curve, schema)
    if is_trivial(letters, schema):
        raise NullHomotopicInput(f"Edge word {letters!r} is trivial")
    if orientation_character(schema, letters) == -1:
        raise NonOrientableNormalBundle(f"Edge word {letters!r} reverses orientation")
    hol = hol or realize(schema, tol)

    points, gamma = develop_path(curve, schema, hol)
    if frame == -1:
        flip = np.diag([1.0, -1.0, 1.0])
        points = points * np.array([1.0, -1.0])
        gamma = flip @ gamma @ flip
    coords = _oriented(_annulus_coordinates(gamma, hol.hyperbolic, points[0]), points[0])
    phi = _composite(points, coords)
    value = _image_turning(_distinct(points), phi, hol.hyperbolic, tol)
    logger.debug(f"annular_T({letters!r}, frame={frame}) = {value}")
    return value


def _composite(points: np.ndarray, coords) -> Callable[[np.ndarray], np.ndarray]:
    """环面坐标经 sigmoid 与八字形浸入到平面；d 按曲线自身的范围居中缩放"""
    ds = [coords(p)[1] for p in points]
    center = (max(ds) + min(ds)) / 2
    spread = max((max(ds) - min(ds)) / 4, 1e-6)

    def phi(p):
        theta, d = coords(p)
        return figure_eight(theta, _sigmoid((d - center) / spread))

    return phi


def _distinct(points: np.ndarray) -> np.ndarray:
    span = max(1.0, float(np.max(np.abs(points))))
    kept = [points[0]]
    for q in points[1:]:
        if np.linalg.norm(q - kept[-1]) > 1e-13 * span:
            kept.append(q)
    return np.array(kept)


def _image_tangent(phi, p: np.ndarray, u: np.ndarray, hyperbolic: bool) -> np.ndarray:
    """phi 在 p 处沿 u 方向的导数（中心差分）"""
    u = u / np.linalg.norm(u)
    h = 1e-6 * (max(1e-6, 1.0 - float(np.linalg.norm(p))) if hyperbolic else 1.0)
    return (phi(p + h * u) - phi(p - h * u)) / (2 * h)


def _image_turning(points: np.ndarray, phi, hyperbolic: bool, tol: Tolerances) -> int:
    """
    phi 像曲线的切向旋转数

    points 是一圈展开的开折线，末点为和乐作用后的首点。像的切向在每个点处由导数精确给出，
    转角的符号因此与原折线一致；线段内部逐步加密直到相邻切向转角不超过 pi/8。
    """
    if len(points) < 2:
        raise NotClosed("Developed path is degenerate")
    directions = points[1:] - points[:-1]
    total = 0.0
    for k, u in enumerate(directions):
        a = points[k]
        pieces = 4
        while True:
            tangents = [
                _image_tangent(phi, a + u * j / pieces, u, hyperbolic) for j in range(pieces + 1)
            ]
            turns = [turn_angle(v, w) for v, w in zip(tangents[:-1], tangents[1:])]
            worst = max(abs(t) for t in turns)
            if worst <= math.pi / 8:
                break
            if pieces >= tol.sample_cap:
                if worst > math.pi / 2:
                    raise SampleTooCoarse(
                        f"Turn of {worst:.3f} rad remains at {pieces} samples per segment"
                    )
                break
            pieces *= 2
        total += sum(turns)
        nxt = directions[k + 1] if k + 1 < len(directions) else directions[0]
        there = points[k + 1] if k + 1 < len(directions) else points[0]
        total += turn_angle(
            tangents[-1], _image_tangent(phi, there, nxt, hyperbolic)
        )
    turns = total / (2 * math.pi)
    nearest = round(turns)
    residual = abs(turns - nearest)
    if residual > tol.angle_integrality:
        raise AngleSumNotInteger("Image angle sum is not a multiple of 2*pi", residual)
    return int(nearest)
