"""
输入输出文件格式

schema / 曲线 / 路径 / 图 / 移动序列使用 JSON，批处理清单使用 YAML。
坐标一律写成整数对（分子, 分母），保证跨实现逐位一致。
"""

import json
import logging
import os
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .errors import FileFormatError
from .models import (
    CurveLocation,
    EdgeImage,
    GraphImmersion,
    Move,
    MoveKind,
    PLCurve,
    PLPath,
    SidePoint,
    Strand,
    SurfaceSchema,
)
from .planar import Point
from .schema import parse_schema

logger = logging.getLogger(__name__)

SideTriple = Tuple[int, int, int]
PointQuad = Tuple[int, int, int, int]


# ==================== Pydantic 模型 ====================


class SchemaFileModel(BaseModel):
    """schema 文件"""

    sides: str = Field(..., min_length=1)
    punctures: List[int] = Field(default_factory=list)


class StrandModel(BaseModel):
    """一条 strand：[side, num, den] 形式的端点与 [x_num, x_den, y_num, y_den] 形式的点"""

    entry: Optional[SideTriple] = None
    points: List[PointQuad] = Field(default_factory=list)
    exit: Optional[SideTriple] = None


class CurveFileModel(BaseModel):
    strands: List[StrandModel] = Field(..., min_length=1)
    basepoint: Tuple[int, int] = (0, 0)


class LocationModel(BaseModel):
    strand: int = Field(ge=0)
    segment: int = Field(ge=0)
    t: Tuple[int, int] = (1, 2)


class PathFileModel(BaseModel):
    start: LocationModel
    strands: List[StrandModel] = Field(..., min_length=1)
    end: LocationModel


class GraphFileModel(BaseModel):
    """图浸入文件，键名沿用 camelCase"""

    model_config = ConfigDict(populate_by_name=True)

    vertices: int = Field(ge=1)
    edges: List[Tuple[int, int]]
    tree: List[int]
    vertex_images: List[PointQuad] = Field(alias="vertexImages")
    edge_images: List[List[StrandModel]] = Field(alias="edgeImages")
    basepoint_vertex: int = Field(default=0, alias="basepointVertex")


class MoveModel(BaseModel):
    kind: MoveKind
    sign: int = 1
    location: Optional[LocationModel] = None
    strand: Optional[int] = None
    displacement: Optional[PointQuad] = None
    side: Optional[int] = None
    steps: int = 1


class MovesFileModel(BaseModel):
    moves: List[MoveModel]


class PairModel(BaseModel):
    f: str
    g: str
    path: Optional[str] = None


class ManifestModel(BaseModel):
    """批处理清单：一个 schema 与若干待判定的曲线对"""

    schema_file: str = Field(alias="schema")
    pairs: List[PairModel] = Field(..., min_length=1)
    jobs: Optional[int] = Field(default=None, ge=1)


# ==================== 转换 ====================


def _fraction(num: int, den: int) -> Fraction:
    if den == 0:
        raise FileFormatError(f"Zero denominator in {num}/{den}")
    return Fraction(num, den)


def _side_point(triple: Optional[SideTriple]) -> Optional[SidePoint]:
    if triple is None:
        return None
    side, num, den = triple
    return SidePoint(side, _fraction(num, den))


def _point(quad: PointQuad) -> Point:
    x_num, x_den, y_num, y_den = quad
    return (_fraction(x_num, x_den), _fraction(y_num, y_den))


def _strand(model: StrandModel) -> Strand:
    return Strand(
        _side_point(model.entry), tuple(_point(q) for q in model.points), _side_point(model.exit)
    )


def _location(model: LocationModel) -> CurveLocation:
    return CurveLocation(model.strand, model.segment, _fraction(*model.t))


def _pair(x: Fraction) -> List[int]:
    return [x.numerator, x.denominator]


def side_point_to_json(sp: Optional[SidePoint]) -> Optional[List[int]]:
    return None if sp is None else [sp.side] + _pair(sp.t)


def point_to_json(p: Point) -> List[int]:
    return _pair(Fraction(p[0])) + _pair(Fraction(p[1]))


def strand_to_json(strand: Strand) -> Dict[str, Any]:
    return {
        "entry": side_point_to_json(strand.entry),
        "points": [point_to_json(p) for p in strand.points],
        "exit": side_point_to_json(strand.exit),
    }


def location_to_json(location: CurveLocation) -> Dict[str, Any]:
    return {"strand": location.strand, "segment": location.segment, "t": _pair(location.t)}


# ==================== 读取 ====================


def _read_text(path: str) -> str:
    if not os.path.exists(path):
        raise FileFormatError(f"File not found: {path}")
    try:
        with open(path, "r", encoding="utf-8") as f:
            return f.read()
    except OSError as e:
        raise FileFormatError(f"Failed to read {path}: {e}")


def _read_json(path: str) -> Any:
    try:
        return json.loads(_read_text(path))
    except json.JSONDecodeError as e:
        raise FileFormatError(f"Invalid JSON in {path}: {e}")


def _validated(model_cls, data: Any, path: str):
    try:
        return model_cls.model_validate(data)
    except ValidationError as e:
        raise FileFormatError(f"Invalid {model_cls.__name__} in {path}: {e}")


def _built(factory, path: str):
    """把 dataclass 的 ValueError 统一转成 FileFormatError"""
    try:
        return factory()
    except ValueError as e:
        raise FileFormatError(f"Invalid content in {path}: {e}")


def load_schema(path: str) -> SurfaceSchema:
    """
    读取 schema 文件

    Raises:
        FileFormatError: 文件不存在或格式错误
        MalformedWord, EmptySchema: 边字本身不合法
    """
    model = _validated(SchemaFileModel, _read_json(path), path)
    schema = parse_schema(model.sides, model.punctures)
    logger.debug(f"Loaded schema {schema.boundary_word} from {path}")
    return schema


def curve_from_json(data: Any, path: str = "<data>") -> PLCurve:
    model = _validated(CurveFileModel, data, path)
    return _built(
        lambda: PLCurve(
            strands=tuple(_strand(s) for s in model.strands), basepoint=tuple(model.basepoint)
        ),
        path,
    )


def load_curve(path: str) -> PLCurve:
    """读取曲线文件"""
    return curve_from_json(_read_json(path), path)


def load_path(path: str) -> PLPath:
    model = _validated(PathFileModel, _read_json(path), path)
    return _built(
        lambda: PLPath(
            start=_location(model.start),
            strands=tuple(_strand(s) for s in model.strands),
            end=_location(model.end),
        ),
        path,
    )


def load_graph(path: str) -> GraphImmersion:
    """读取图浸入文件"""
    model = _validated(GraphFileModel, _read_json(path), path)
    return _built(
        lambda: GraphImmersion(
            vertex_count=model.vertices,
            edges=tuple(tuple(e) for e in model.edges),
            tree=tuple(model.tree),
            vertex_images=tuple(_point(q) for q in model.vertex_images),
            edge_images=tuple(
                EdgeImage(tuple(_strand(s) for s in strands)) for strands in model.edge_images
            ),
            basepoint_vertex=model.basepoint_vertex,
        ),
        path,
    )


def moves_from_json(data: Any, path: str = "<data>") -> List[Move]:
    if isinstance(data, list):
        data = {"moves": data}
    model = _validated(MovesFileModel, data, path)
    return [
        _built(
            lambda m=m: Move(
                kind=m.kind,
                sign=m.sign,
                location=_location(m.location) if m.location else None,
                strand=m.strand,
                displacement=_point(m.displacement) if m.displacement else None,
                side=m.side,
                steps=m.steps,
            ),
            path,
        )
        for m in model.moves
    ]


def load_moves(path: str) -> List[Move]:
    """读取移动序列文件（JSON 列表或 {"moves": [...]}）"""
    return moves_from_json(_read_json(path), path)


def load_manifest(path: str) -> ManifestModel:
    """
    读取批处理清单（YAML）

    清单中的相对路径相对于清单所在目录。
    """
    try:
        data = yaml.safe_load(_read_text(path))
    except yaml.YAMLError as e:
        raise FileFormatError(f"Invalid YAML format in {path}: {e}")
    manifest = _validated(ManifestModel, data, path)
    base = os.path.dirname(os.path.abspath(path))

    def resolve(p: Optional[str]) -> Optional[str]:
        return None if p is None else os.path.join(base, p)

    manifest.schema_file = resolve(manifest.schema_file)
    for pair in manifest.pairs:
        pair.f, pair.g, pair.path = resolve(pair.f), resolve(pair.g), resolve(pair.path)
    return manifest


# ==================== 写出 ====================


def schema_to_json(schema: SurfaceSchema) -> Dict[str, Any]:
    return {"sides": schema.boundary_word, "punctures": list(schema.punctures)}


def curve_to_json(curve: PLCurve) -> Dict[str, Any]:
    return {
        "strands": [strand_to_json(s) for s in curve.strands],
        "basepoint": list(curve.basepoint),
    }


def path_to_json(path: PLPath) -> Dict[str, Any]:
    return {
        "start": location_to_json(path.start),
        "strands": [strand_to_json(s) for s in path.strands],
        "end": location_to_json(path.end),
    }


def graph_to_json(gi: GraphImmersion) -> Dict[str, Any]:
    return {
        "vertices": gi.vertex_count,
        "edges": [list(e) for e in gi.edges],
        "tree": list(gi.tree),
        "vertexImages": [point_to_json(p) for p in gi.vertex_images],
        "edgeImages": [[strand_to_json(s) for s in image.strands] for image in gi.edge_images],
        "basepointVertex": gi.basepoint_vertex,
    }


def move_to_json(move: Move) -> Dict[str, Any]:
    data: Dict[str, Any] = {"kind": move.kind.value, "sign": move.sign, "steps": move.steps}
    if move.location is not None:
        data["location"] = location_to_json(move.location)
    if move.strand is not None:
        data["strand"] = move.strand
    if move.displacement is not None:
        data["displacement"] = point_to_json(move.displacement)
    if move.side is not None:
        data["side"] = move.side
    return data


def save_json(data: Any, path: str) -> None:
    """
    写出 JSON 文件

    Raises:
        IOError: 文件写入失败
    """
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    try:
        with open(path, "w", encoding="utf-8") as f:
            json.dump(data, f, indent=2)
            f.write("\n")
    except OSError as e:
        logger.error(f"Failed to write {path}: {e}")
        raise IOError(f"Failed to write {path}: {e}")
    logger.info(f"Wrote {path}")
