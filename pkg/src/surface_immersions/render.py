"""
SVG 渲染

图卡坐标放大 256 倍并翻转 y 轴；浮点数只出现在 SVG 输出中。
"""

import logging
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np
from jinja2 import Environment, FileSystemLoader, select_autoescape

from .config_manager import Tolerances
from .curves import polygon_of, strand_polyline
from .geometry import apply, develop_path, realize
from .models import PLCurve, SurfaceSchema
from .planar import to_float

logger = logging.getLogger(__name__)

SCALE = 256.0
MARGIN = 16.0
TEMPLATES_DIR = Path(__file__).parent / "templates"

_environment = Environment(
    loader=FileSystemLoader(str(TEMPLATES_DIR)),
    autoescape=select_autoescape(["svg", "j2"]),
    trim_blocks=True,
)


def _scaled(points: Iterable[Sequence[float]]) -> List[tuple]:
    return [(SCALE * float(p[0]), -SCALE * float(p[1])) for p in points]


def _attribute(points: Sequence[tuple]) -> str:
    return " ".join(f"{x:.3f},{y:.3f}" for x, y in points)


def render_svg(
    polygons: Sequence[Sequence[Sequence[float]]],
    polylines: Sequence[Sequence[Sequence[float]]],
    markers: Sequence[Dict[str, object]] = (),
    title: str = "",
) -> str:
    """
    把图卡中的多边形与折线渲染成 SVG 文本

    Args:
        polygons: 多边形顶点序列（图卡坐标）
        polylines: 折线（图卡坐标）
        markers: {"point": (x, y), "color": str} 形式的标记点
        title: SVG 标题
    """
    scaled_polygons = [_scaled(p) for p in polygons]
    scaled_lines = [_scaled(p) for p in polylines]
    scaled_markers = [
        {"x": SCALE * m["point"][0], "y": -SCALE * m["point"][1], "color": m.get("color", "red")}
        for m in markers
    ]
    everything = [q for group in scaled_polygons + scaled_lines for q in group]
    everything += [(m["x"], m["y"]) for m in scaled_markers]
    if not everything:
        everything = [(0.0, 0.0)]
    xs = [q[0] for q in everything]
    ys = [q[1] for q in everything]
    origin_x, origin_y = min(xs) - MARGIN, min(ys) - MARGIN
    width = max(xs) - min(xs) + 2 * MARGIN
    height = max(ys) - min(ys) + 2 * MARGIN

    template = _environment.get_template("diagram.svg.j2")
    return template.render(
        title=title,
        origin_x=f"{origin_x:.3f}",
        origin_y=f"{origin_y:.3f}",
        width=f"{width:.3f}",
        height=f"{height:.3f}",
        view_box=f"{origin_x:.3f} {origin_y:.3f} {width:.3f} {height:.3f}",
        polygons=[_attribute(p) for p in scaled_polygons],
        polylines=[_attribute(p) for p in scaled_lines],
        markers=scaled_markers,
    )


def render_curve(curve: PLCurve, schema: SurfaceSchema) -> str:
    """基本多边形中的曲线图"""
    poly = polygon_of(schema)
    outline = [to_float(p) for p in poly.corners]
    lines = [[to_float(p) for p in strand_polyline(s, poly)] for s in curve.strands]
    strand, vertex = curve.basepoint
    base = to_float(curve.strands[strand].points[vertex])
    return render_svg(
        [outline], lines, [{"point": base, "color": "#ef4444"}], f"{schema.boundary_word} curve"
    )


def render_developed(
    curve: PLCurve, schema: SurfaceSchema, tolerances: Optional[Tolerances] = None
) -> str:
    """
    曲线展开一圈后的图卡图像，以及沿途经过的多边形副本

    Raises:
        SphericalSchema: 球面型 schema 没有平面图卡
    """
    hol = realize(schema, tolerances)
    motions: List[np.ndarray] = []
    points, _ = develop_path(curve, schema, hol, motions=motions)
    if hol.chart_vertices is not None:
        outline = [tuple(v) for v in hol.chart_vertices]
    else:
        outline = [to_float(p) for p in polygon_of(schema).corners]

    copies = []
    seen = set()
    for motion in motions:
        copy = [tuple(apply(motion, v)) for v in outline]
        key = tuple(round(c, 6) for q in copy for c in q)
        if key not in seen:
            seen.add(key)
            copies.append(copy)
    logger.debug(f"Rendering {len(points)} developed points over {len(copies)} polygon copies")
    markers = [
        {"point": tuple(points[0]), "color": "#ef4444"},
        {"point": tuple(points[-1]), "color": "#22c55e"},
    ]
    return render_svg(copies, [points.tolist()], markers, f"{schema.boundary_word} developed")
