"""
数据模型定义

包含系统中使用的所有不可变数据类和验证逻辑。坐标一律使用 Fraction。
"""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, Optional, Tuple

from .planar import Point


class SurfaceKind(str, Enum):
    """曲面类型"""

    SPHERE = "Sphere"
    PROJECTIVE_PLANE = "ProjectivePlane"
    DISK = "Disk"
    ANNULUS = "Annulus"
    MOEBIUS = "Moebius"
    TORUS = "Torus"
    KLEIN_BOTTLE = "KleinBottle"
    HYPERBOLIC_CLOSED = "HyperbolicClosed"
    HYPERBOLIC_PUNCTURED = "HyperbolicPunctured"

    @property
    def spherical(self) -> bool:
        return self in (SurfaceKind.SPHERE, SurfaceKind.PROJECTIVE_PLANE)


@dataclass(frozen=True)
class Side:
    """多边形的一条有向边"""

    label: str
    exponent: int = 1

    def __post_init__(self):
        if len(self.label) != 1 or not ("a" <= self.label <= "z"):
            raise ValueError(f"side label must be a single letter a-z, got {self.label!r}")
        if self.exponent not in (1, -1):
            raise ValueError(f"exponent must be +1 or -1, got {self.exponent}")

    @property
    def token(self) -> str:
        return self.label if self.exponent == 1 else self.label.upper()


@dataclass(frozen=True)
class SurfaceSchema:
    """
    粘合 schema

    generators 是成对出现的边标签；relators 是内部顶点类的链接字。
    曲线从某标签第一次出现的边离开时记小写字母，从第二次出现的边离开时记大写字母。
    """

    sides: Tuple[Side, ...]
    punctures: Tuple[int, ...]
    kind: SurfaceKind
    euler_characteristic: int
    orientable: bool
    vertex_classes: Tuple[Tuple[int, ...], ...]
    interior_classes: Tuple[bool, ...]
    generators: Tuple[str, ...]
    relators: Tuple[str, ...]
    boundary_word: str

    @property
    def side_count(self) -> int:
        return len(self.sides)

    @property
    def free_sides(self) -> Tuple[int, ...]:
        return tuple(i for i in range(self.side_count) if self.partner(i) is None)

    def occurrences(self, label: str) -> Tuple[int, ...]:
        return tuple(i for i, s in enumerate(self.sides) if s.label == label)

    def partner(self, side: int) -> Optional[int]:
        label = self.sides[side].label
        others = [i for i in self.occurrences(label) if i != side]
        return others[0] if others else None

    def same_sign(self, label: str) -> bool:
        """两次出现的指数相同（粘合翻转局部定向）"""
        first, second = self.occurrences(label)
        return self.sides[first].exponent == self.sides[second].exponent

    def exit_letter(self, side: int) -> str:
        """从该边离开时记录的字母"""
        label = self.sides[side].label
        if self.partner(side) is None:
            raise ValueError(f"side {side} is a free side")
        return label if self.occurrences(label)[0] == side else label.upper()

    def exit_side(self, letter: str) -> int:
        """字母对应的离开边"""
        first, second = self.occurrences(letter.lower())
        return first if letter.islower() else second

    def glue_parameter(self, side: int, t: Fraction) -> Tuple[int, Fraction]:
        """把边 side 上参数 t 的点映到配对边上"""
        other = self.partner(side)
        if other is None:
            raise ValueError(f"side {side} is a free side")
        if self.same_sign(self.sides[side].label):
            return other, t
        return other, 1 - t


@dataclass(frozen=True)
class SidePoint:
    """边上的点：边序号与参数"""

    side: int
    t: Fraction

    def __post_init__(self):
        if not isinstance(self.t, Fraction):
            object.__setattr__(self, "t", Fraction(self.t))


@dataclass(frozen=True)
class Strand:
    """穿过多边形的一条弦"""

    entry: Optional[SidePoint]
    points: Tuple[Point, ...]
    exit: Optional[SidePoint]

    @property
    def closed(self) -> bool:
        return self.entry is None and self.exit is None


@dataclass(frozen=True)
class PLCurve:
    """一般位置中的分段线性浸入圆周"""

    strands: Tuple[Strand, ...]
    basepoint: Tuple[int, int] = (0, 0)

    def __post_init__(self):
        if not self.strands:
            raise ValueError("curve needs at least one strand")
        if any(s.closed for s in self.strands):
            if len(self.strands) != 1:
                raise ValueError("a closed strand must be the only strand of the curve")
            if len(self.strands[0].points) < 3:
                raise ValueError("a closed strand needs at least 3 points")
        elif any(s.entry is None or s.exit is None for s in self.strands):
            raise ValueError("every strand of a crossing curve needs an entry and an exit")
        strand, vertex = self.basepoint
        if not (0 <= strand < len(self.strands)):
            raise ValueError(f"basepoint strand {strand} out of range")
        if not (0 <= vertex < len(self.strands[strand].points)):
            raise ValueError(f"basepoint vertex {vertex} out of range")


@dataclass(frozen=True)
class CurveLocation:
    """曲线上的位置：strand、折线段序号与段内参数"""

    strand: int
    segment: int
    t: Fraction = Fraction(1, 2)


@dataclass(frozen=True)
class PLPath:
    """
    从 f 上一点到 g 上一点的分段线性路径

    第一段 strand 从 start 处出发（entry 为空），最后一段到 end 结束（exit 为空）。
    """

    start: CurveLocation
    strands: Tuple[Strand, ...]
    end: CurveLocation

    def __post_init__(self):
        if not self.strands:
            raise ValueError("path needs at least one strand")
        if self.strands[0].entry is not None or self.strands[-1].exit is not None:
            raise ValueError("path must start and end inside the polygon")


@dataclass(frozen=True)
class Crossing:
    """自交点：两个曲线位置映到同一点"""

    first: CurveLocation
    second: CurveLocation
    point: Point
    sign: Optional[int] = None


@dataclass(frozen=True)
class GeneralPositionReport:
    crossings: Tuple[Crossing, ...]
    clearance: float
    violations: Tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class CyclicWord:
    """生成元上的字；reduced 为约化代表"""

    letters: str
    reduced: str
    basepointed: bool = True

    @property
    def trivial(self) -> bool:
        return self.reduced == ""


@dataclass(frozen=True)
class DevelopedPolyline:
    """万有覆叠图卡中的平面折线"""

    points: Tuple[Tuple[float, float], ...]
    closed: bool
    sample_density: Optional[float] = None


class TurningKind(str, Enum):
    INTEGER = "integer"
    ABSOLUTE = "absolute"
    MOD2 = "mod2"
    UNDEFINED = "undefined"


@dataclass(frozen=True)
class TurningValue:
    kind: TurningKind
    value: Optional[int] = None
    frame: int = 1
    reason: str = ""

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"kind": self.kind.value, "value": self.value}
        if self.kind == TurningKind.INTEGER:
            data["frame"] = self.frame
        if self.reason:
            data["reason"] = self.reason
        return data


@dataclass(frozen=True)
class CircleInvariants:
    homotopy_class: CyclicWord
    w1nu: int
    s_parity: int
    turning: TurningValue

    def to_dict(self) -> Dict[str, Any]:
        return {
            "word": self.homotopy_class.letters,
            "reduced": self.homotopy_class.reduced,
            "w1nu": self.w1nu,
            "s": self.s_parity,
            "turning": self.turning.to_dict(),
        }


class Answer(str, Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"

    @property
    def exit_code(self) -> int:
        return {Answer.YES: 0, Answer.NO: 1, Answer.UNKNOWN: 3}[self]


@dataclass(frozen=True)
class Verdict:
    answer: Answer
    reason: str
    details: Dict[str, Any] = field(default_factory=dict, compare=False)

    def to_dict(self) -> Dict[str, Any]:
        return {"verdict": self.answer.value, "reason": self.reason, "invariants": self.details}


class BandType(str, Enum):
    """连通和的带类型"""

    ALTERNATING = "alternating"
    CONSTANT = "constant"


class MoveKind(str, Enum):
    ADD_KINK = "AddKink"
    REMOVE_KINK = "RemoveKink"
    PERTURB_STRAND = "PerturbStrand"
    SLIDE_ACROSS_SIDE = "SlideAcrossSide"
    PUSH_KINK = "PushKinkAlongCurve"


@dataclass(frozen=True)
class Move:
    """正则同伦的一步"""

    kind: MoveKind
    sign: int = 1
    location: Optional[CurveLocation] = None
    strand: Optional[int] = None
    displacement: Optional[Point] = None
    side: Optional[int] = None
    steps: int = 1

    def __post_init__(self):
        if self.kind == MoveKind.ADD_KINK:
            if self.sign not in (1, -1):
                raise ValueError(f"kink sign must be +1 or -1, got {self.sign}")
            if self.location is None:
                raise ValueError("AddKink needs a location")
        if self.kind == MoveKind.REMOVE_KINK and self.location is None:
            raise ValueError("RemoveKink needs a location")
        if self.kind == MoveKind.PERTURB_STRAND and (
            self.strand is None or self.displacement is None
        ):
            raise ValueError("PerturbStrand needs a strand and a displacement")
        if self.kind == MoveKind.SLIDE_ACROSS_SIDE and (self.strand is None or self.side is None):
            raise ValueError("SlideAcrossSide needs a strand and a side")
        if self.kind == MoveKind.PUSH_KINK and self.steps < 0:
            raise ValueError(f"steps must be non-negative, got {self.steps}")


@dataclass(frozen=True)
class EdgeImage:
    """一条边的像：首段从顶点像出发，末段到顶点像结束"""

    strands: Tuple[Strand, ...]

    def __post_init__(self):
        if not self.strands:
            raise ValueError("edge image needs at least one strand")
        if self.strands[0].entry is not None or self.strands[-1].exit is not None:
            raise ValueError("edge image must start and end at vertex images")


@dataclass(frozen=True)
class GraphImmersion:
    """抽象图、生成树以及顶点和边在多边形中的像"""

    vertex_count: int
    edges: Tuple[Tuple[int, int], ...]
    tree: Tuple[int, ...]
    vertex_images: Tuple[Point, ...]
    edge_images: Tuple[EdgeImage, ...]
    basepoint_vertex: int = 0

    def __post_init__(self):
        if self.vertex_count < 1:
            raise ValueError("graph needs at least one vertex")
        if len(self.vertex_images) != self.vertex_count:
            raise ValueError("one image per vertex is required")
        if len(self.edge_images) != len(self.edges):
            raise ValueError("one image per edge is required")
        for u, v in self.edges:
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise ValueError(f"edge ({u}, {v}) references a missing vertex")
        if not (0 <= self.basepoint_vertex < self.vertex_count):
            raise ValueError("basepoint vertex out of range")


Germ = Tuple[int, int]


@dataclass(frozen=True)
class RotationData:
    """每个顶点处边芽的逆时针循环序（图卡方向）及参考定向符号"""

    orders: Tuple[Tuple[Germ, ...], ...]
    signs: Tuple[int, ...]

    def oriented_order(self, vertex: int, flip: int = 1) -> Tuple[Germ, ...]:
        """在传输后的局部定向下的循环序，规范化为从最小芽开始"""
        order = self.orders[vertex]
        if self.signs[vertex] * flip < 0:
            order = tuple(reversed(order))
        return normalize_cycle(order)


def normalize_cycle(order: Tuple[Any, ...]) -> Tuple[Any, ...]:
    if not order:
        return order
    k = order.index(min(order))
    return order[k:] + order[:k]
