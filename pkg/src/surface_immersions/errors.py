"""
异常定义

所有异常都继承自 SurfaceImmersionError，exit_code 决定 CLI 的退出码。
"""

from typing import Optional


class SurfaceImmersionError(Exception):
    """基础异常"""

    exit_code = 2


class InputError(SurfaceImmersionError):
    """输入数据错误"""

    pass


class ComputationError(SurfaceImmersionError):
    """计算过程中检测到的错误"""

    pass


# schema / words


class MalformedWord(InputError):
    """边字格式错误或字母出现超过两次"""

    pass


class EmptySchema(InputError):
    pass


class UnknownGenerator(InputError):
    pass


class UnsupportedSchema(InputError):
    """该 schema 超出当前算法支持的范围"""

    pass


class TrivialWord(ComputationError):
    pass


# curves


class GeneralPositionError(InputError):
    """曲线不处于一般位置"""

    def __init__(self, message: str, strand: Optional[int] = None, segment: Optional[int] = None):
        location = ""
        if strand is not None:
            location = f" (strand {strand}"
            location += f", segment {segment})" if segment is not None else ")"
        super().__init__(message + location)
        self.strand = strand
        self.segment = segment


class VertexHit(GeneralPositionError):
    pass


class PointOutsidePolygon(GeneralPositionError):
    pass


class TangentialCrossing(GeneralPositionError):
    pass


class TriplePoint(GeneralPositionError):
    pass


class SideCoincidence(GeneralPositionError):
    pass


class BoundaryHit(GeneralPositionError):
    """曲线碰到了自由边"""

    pass


class StrandMismatch(GeneralPositionError):
    """相邻 strand 在粘合边上不匹配"""

    pass


class PathNotTransverse(InputError):
    pass


class PathCrossesCurves(InputError):
    pass


# geometry


class SphericalSchema(ComputationError):
    """球面和射影平面没有平面图卡"""

    pass


class RelatorNotClosing(ComputationError):
    pass


class NotNullHomotopic(ComputationError):
    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual {residual:.3g})")
        self.residual = residual


class SampleTooCoarse(ComputationError):
    pass


class NotClosed(ComputationError):
    pass


class AngleSumNotInteger(ComputationError):
    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual {residual:.3g})")
        self.residual = residual


class NullHomotopicInput(ComputationError):
    pass


class NonOrientableNormalBundle(ComputationError):
    pass


class EllipticHolonomy(ComputationError):
    pass


# classify / graphs


class SchemaMismatch(InputError):
    pass


class PathWordMismatch(InputError):
    pass


class GraphMismatch(InputError):
    pass


class TreeMismatch(InputError):
    pass


class NotATree(InputError):
    pass


class CoincidentGerms(InputError):
    pass


class SameCycle(InputError):
    pass


# moves


class ClearanceViolated(ComputationError):
    pass


class KinkNotFound(ComputationError):
    pass


class DegenerateCrossing(ComputationError):
    pass


# files


class FileFormatError(InputError):
    pass
