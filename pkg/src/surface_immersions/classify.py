"""
浸入圆周的完全不变量与正则同伦判定

分支：
  - 球面 / 射影平面：只比较自交奇偶
  - 法丛不可定向：只比较自交奇偶
  - 法丛可定向且标架有歧义（或不可定向曲面上的零伦曲线）：比较旋转数的绝对值
  - 其它：沿共轭见证传输标架后比较带符号的旋转数

自交奇偶对外报告时取“二重点个数的相反奇偶”，内部比较与约定无关。
"""

import logging
from typing import Any, Dict, Optional

from .config_manager import Tolerances
from .curves import (
    band_type,
    concatenate,
    crossing_count,
    edge_letters,
    validate_general_position,
)
from .errors import PathWordMismatch, SchemaMismatch
from .geometry import annular_T, develop, realize, turning_number_planar
from .models import (
    Answer,
    BandType,
    CircleInvariants,
    PLCurve,
    PLPath,
    SurfaceSchema,
    TurningKind,
    TurningValue,
    Verdict,
)
from .schema import orientation_character
from .words import (
    GroupKind,
    conjugate_and_witness,
    framing_ambiguous,
    inverse,
    reduce,
    surface_group,
    words_equal,
)

logger = logging.getLogger(__name__)


def _check_sides(curve: PLCurve, schema: SurfaceSchema) -> None:
    for k, strand in enumerate(curve.strands):
        for end in (strand.entry, strand.exit):
            if end is not None and not (0 <= end.side < schema.side_count):
                raise SchemaMismatch(
                    f"Strand {k} uses side {end.side}, schema {schema.boundary_word} "
                    f"has {schema.side_count} sides"
                )


def reported_parity(raw_count: int) -> int:
    """二重点个数的相反奇偶"""
    return (raw_count + 1) % 2


def framed_turning(
    curve: PLCurve,
    schema: SurfaceSchema,
    frame: int = 1,
    tolerances: Optional[Tolerances] = None,
) -> int:
    """
    相对基点处标架的旋转数

    零伦曲线展开到万有覆叠后求外角和，本质曲线走环形覆叠。
    frame = -1 时结果取反（零伦情形）或在翻转的图卡中计算（本质情形）。
    """
    letters = edge_letters(curve, schema)
    if reduce(letters, schema).trivial:
        hol = realize(schema, tolerances)
        return frame * turning_number_planar(develop(curve, schema, hol, tolerances=tolerances))
    return annular_T(curve, schema, frame=frame, tolerances=tolerances)


def circle_invariants(
    curve: PLCurve,
    schema: SurfaceSchema,
    frame: int = 1,
    tolerances: Optional[Tolerances] = None,
) -> CircleInvariants:
    """
    计算浸入圆周的完全不变量

    Args:
        curve: 一般位置中的曲线
        schema: 粘合 schema
        frame: 基点处的参考标架（相对图卡定向）

    Raises:
        GeneralPositionError: 曲线不在一般位置
        SchemaMismatch: 曲线引用了不存在的边
    """
    _check_sides(curve, schema)
    validate_general_position(curve, schema)
    letters = edge_letters(curve, schema)
    word = reduce(letters, schema)
    w1nu = orientation_character(schema, letters)
    parity = reported_parity(crossing_count(curve, schema))

    if schema.kind.spherical:
        turning = TurningValue(TurningKind.MOD2, value=parity)
    elif w1nu == -1:
        turning = TurningValue(
            TurningKind.UNDEFINED, reason="non-orientable normal bundle: compare s"
        )
    elif word.trivial:
        value = framed_turning(curve, schema, frame, tolerances)
        if schema.orientable:
            turning = TurningValue(TurningKind.INTEGER, value=value, frame=frame)
        else:
            turning = TurningValue(TurningKind.ABSOLUTE, value=abs(value))
    elif framing_ambiguous(letters, schema):
        turning = TurningValue(
            TurningKind.ABSOLUTE, value=abs(framed_turning(curve, schema, 1, tolerances))
        )
    else:
        turning = TurningValue(
            TurningKind.INTEGER,
            value=framed_turning(curve, schema, frame, tolerances),
            frame=frame,
        )

    result = CircleInvariants(homotopy_class=word, w1nu=w1nu, s_parity=parity, turning=turning)
    logger.debug(f"Invariants of {letters!r}: {result.to_dict()}")
    return result


def _details(inv_f: CircleInvariants, inv_g: CircleInvariants, **extra: Any) -> Dict[str, Any]:
    details: Dict[str, Any] = {"f": inv_f.to_dict(), "g": inv_g.to_dict()}
    details.update(extra)
    return details


def _not_conjugate(schema: SurfaceSchema, u: str, v: str) -> Verdict:
    if surface_group(schema).kind == GroupKind.SURFACE:
        return Verdict(
            Answer.UNKNOWN,
            "conjugacy search exhausted",
            {"f_word": u, "g_word": v},
        )
    return Verdict(Answer.NO, "not homotopic", {"f_word": u, "g_word": v})


def decide_circle(
    f: PLCurve,
    g: PLCurve,
    schema: SurfaceSchema,
    tolerances: Optional[Tolerances] = None,
) -> Verdict:
    """
    判定两条浸入圆周是否正则同伦

    Returns:
        Verdict: yes / no；双曲曲面上共轭搜索失败时为 unknown
    """
    for curve in (f, g):
        _check_sides(curve, schema)
        validate_general_position(curve, schema)
    u, v = edge_letters(f, schema), edge_letters(g, schema)
    conj = conjugate_and_witness(u, v, schema)
    if not conj.conjugate:
        return _not_conjugate(schema, u, v)

    w1nu = orientation_character(schema, u)
    parity_f = reported_parity(crossing_count(f, schema))
    parity_g = reported_parity(crossing_count(g, schema))

    if schema.kind.spherical or w1nu == -1:
        inv_f = circle_invariants(f, schema, tolerances=tolerances)
        inv_g = circle_invariants(g, schema, tolerances=tolerances)
        details = _details(inv_f, inv_g, witness=conj.witness)
        if parity_f == parity_g:
            return Verdict(Answer.YES, "homotopic with equal s", details)
        return Verdict(Answer.NO, "s differs", details)

    trivial = reduce(u, schema).trivial
    ambiguous = (trivial and not schema.orientable) or (
        not trivial and framing_ambiguous(u, schema)
    )
    if ambiguous:
        inv_f = circle_invariants(f, schema, tolerances=tolerances)
        inv_g = circle_invariants(g, schema, tolerances=tolerances)
        details = _details(inv_f, inv_g, witness=conj.witness)
        if inv_f.turning.value == inv_g.turning.value:
            return Verdict(Answer.YES, "homotopic with equal absolute turning number", details)
        return Verdict(Answer.NO, "absolute turning numbers differ", details)

    frame_g = orientation_character(schema, conj.witness)
    inv_f = circle_invariants(f, schema, frame=1, tolerances=tolerances)
    inv_g = circle_invariants(g, schema, frame=frame_g, tolerances=tolerances)
    details = _details(inv_f, inv_g, witness=conj.witness, frame_g=frame_g)
    if inv_f.turning.value == inv_g.turning.value:
        return Verdict(Answer.YES, "homotopic with equal framed turning number", details)
    return Verdict(Answer.NO, "framed turning numbers differ", details)


def _letters_from(curve: PLCurve, schema: SurfaceSchema, strand: int) -> str:
    """从指定 strand 开始读出的边字"""
    if curve.strands[0].closed:
        return ""
    n = len(curve.strands)
    return "".join(
        schema.exit_letter(curve.strands[(strand + i) % n].exit.side) for i in range(n)
    )


def path_letters(path: PLPath, schema: SurfaceSchema) -> str:
    return "".join(schema.exit_letter(s.exit.side) for s in path.strands[:-1])


def decide_via_difference(
    f: PLCurve,
    g: PLCurve,
    path: PLPath,
    schema: SurfaceSchema,
    tolerances: Optional[Tolerances] = None,
) -> Verdict:
    """
    通过差曲线 f #_p g* 判定正则同伦（与 decide_circle 独立的第二个实现）

    Raises:
        PathWordMismatch: 路径不是同伦轨迹（f ≠ p·g·p⁻¹）
        PathNotTransverse, PathCrossesCurves: 路径不合法
    """
    for curve in (f, g):
        _check_sides(curve, schema)
        validate_general_position(curve, schema)
    u = _letters_from(f, schema, path.start.strand)
    v = _letters_from(g, schema, path.end.strand)
    p = path_letters(path, schema)
    if not words_equal(u, p + v + inverse(p), schema):
        raise PathWordMismatch(
            f"Path word {p!r} does not conjugate {v!r} to {u!r}"
        )

    natural = band_type(f, g, path, schema)
    difference = concatenate(f, g, path, schema, band=BandType.ALTERNATING)
    raw = crossing_count(difference, schema)
    w1nu = orientation_character(schema, u)
    details: Dict[str, Any] = {
        "band": BandType.ALTERNATING.value,
        "path_band": natural.value,
        "difference_crossings": raw,
    }

    if schema.kind.spherical or w1nu == -1:
        # alternating 带自身贡献一个轨道交叉
        self_intersection = 1 if w1nu == -1 else 0
        expected = (self_intersection + 1) % 2
        details["difference_s"] = reported_parity(raw)
        if raw % 2 == expected:
            return Verdict(Answer.YES, "difference curve has the expected s", details)
        return Verdict(Answer.NO, "difference curve s does not match", details)

    hol = realize(schema, tolerances)
    t_diff = turning_number_planar(develop(difference, schema, hol, tolerances=tolerances))
    details["difference_T"] = t_diff
    if t_diff == 0:
        return Verdict(Answer.YES, "difference curve has zero turning number", details)

    trivial = reduce(u, schema).trivial
    ambiguous = (trivial and not schema.orientable) or (
        not trivial and framing_ambiguous(u, schema)
    )
    if ambiguous:
        t_f = framed_turning(f, schema, 1, tolerances)
        t_g = t_f - t_diff
        details["f_T"], details["g_T"] = t_f, t_g
        if abs(t_f) == abs(t_g):
            return Verdict(Answer.YES, "turning numbers agree up to framing flip", details)
    return Verdict(Answer.NO, "difference curve has non-zero turning number", details)
