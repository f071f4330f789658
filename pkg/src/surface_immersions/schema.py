"""
多边形粘合 schema 的解析与拓扑不变量

边字由字母 a-z 组成，大写或后缀 ' / ⁻¹ / ^-1 表示逆。
只出现一次的字母是自由边（边界或穿孔）。
"""

import logging
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .errors import EmptySchema, MalformedWord, UnknownGenerator
from .models import CyclicWord, Side, SurfaceKind, SurfaceSchema

logger = logging.getLogger(__name__)

INVERSE_SUFFIXES = ("⁻¹", "^-1", "'")


def parse_tokens(text: str) -> List[Side]:
    """把边字拆成带指数的边"""
    sides: List[Side] = []
    i = 0
    text = "".join(text.split())
    while i < len(text):
        ch = text[i]
        if not ch.isascii() or not ch.isalpha():
            raise MalformedWord(f"Unexpected character {ch!r} at position {i} in {text!r}")
        exponent = -1 if ch.isupper() else 1
        i += 1
        for suffix in INVERSE_SUFFIXES:
            if text.startswith(suffix, i):
                exponent = -exponent
                i += len(suffix)
                break
        sides.append(Side(ch.lower(), exponent))
    return sides


def parse_word(text: str) -> str:
    """把用户输入的字规范化为 ASCII 形式（大写为逆）"""
    if text in ("", "1", "e"):
        return ""
    return "".join(side.token for side in parse_tokens(text))


class _UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x: int, y: int) -> None:
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[max(rx, ry)] = min(rx, ry)


def _ends(index: int, side: Side, n: int) -> Tuple[int, int]:
    """边标签方向下的 (尾, 头) 顶点"""
    start, end = index, (index + 1) % n
    return (start, end) if side.exponent == 1 else (end, start)


def _vertex_classes(sides: Sequence[Side]) -> List[Tuple[int, ...]]:
    n = len(sides)
    uf = _UnionFind(n)
    seen: Dict[str, int] = {}
    for i, side in enumerate(sides):
        if side.label in seen:
            j = seen[side.label]
            tail_i, head_i = _ends(i, side, n)
            tail_j, head_j = _ends(j, sides[j], n)
            uf.union(tail_i, tail_j)
            uf.union(head_i, head_j)
        else:
            seen[side.label] = i
    groups: Dict[int, List[int]] = {}
    for v in range(n):
        groups.setdefault(uf.find(v), []).append(v)
    return sorted(tuple(g) for g in groups.values())


def _classify(chi: int, orientable: bool, bounded: bool) -> SurfaceKind:
    if not bounded:
        if chi == 2:
            return SurfaceKind.SPHERE
        if chi == 1:
            return SurfaceKind.PROJECTIVE_PLANE
        if chi == 0:
            return SurfaceKind.TORUS if orientable else SurfaceKind.KLEIN_BOTTLE
        return SurfaceKind.HYPERBOLIC_CLOSED
    if chi == 1:
        return SurfaceKind.DISK
    if chi == 0:
        return SurfaceKind.ANNULUS if orientable else SurfaceKind.MOEBIUS
    return SurfaceKind.HYPERBOLIC_PUNCTURED


def _link_word(sides: Sequence[Side], corner: int) -> Optional[str]:
    """
    绕顶点 corner 的小圆周所经过的边字

    状态为 (角, 进入的边)；碰到自由边时返回 None。
    """
    n = len(sides)
    labels = [s.label for s in sides]
    occurrences: Dict[str, List[int]] = {}
    for i, label in enumerate(labels):
        occurrences.setdefault(label, []).append(i)

    start = (corner, (corner - 1) % n)
    state = start
    letters: List[str] = []
    for _ in range(2 * n + 2):
        c, entered = state
        exit_side = c if entered != c else (c - 1) % n
        occ = occurrences[labels[exit_side]]
        if len(occ) == 1:
            return None
        letters.append(labels[exit_side] if occ[0] == exit_side else labels[exit_side].upper())
        t = 0 if exit_side == c else 1
        partner = occ[1] if occ[0] == exit_side else occ[0]
        if sides[partner].exponent != sides[exit_side].exponent:
            t = 1 - t
        state = (partner if t == 0 else (partner + 1) % n, partner)
        if state == start:
            return "".join(letters)
    raise MalformedWord("vertex link walk did not close")


def parse_schema(text: str, punctures: Iterable[int] = ()) -> SurfaceSchema:
    """
    解析并验证粘合 schema

    Args:
        text: 边字，例如 "abAB"
        punctures: 标记为自由边的边序号

    Returns:
        SurfaceSchema: 带有类型、欧拉示性数、定向性和群表示的 schema

    Raises:
        EmptySchema: 边字为空
        MalformedWord: 字母出现超过两次、长度为奇数或穿孔标记落在成对的边上
    """
    sides = parse_tokens(text)
    if not sides:
        raise EmptySchema("Schema side word is empty")
    if len(sides) % 2:
        raise MalformedWord(f"Side word must have even length, got {len(sides)} sides")

    counts: Dict[str, int] = {}
    for side in sides:
        counts[side.label] = counts.get(side.label, 0) + 1
    for label, count in counts.items():
        if count > 2:
            raise MalformedWord(f"Letter {label!r} appears {count} times")

    free = tuple(i for i, s in enumerate(sides) if counts[s.label] == 1)
    for index in punctures:
        if not (0 <= index < len(sides)):
            raise MalformedWord(f"Puncture index {index} out of range")
        if index not in free:
            raise MalformedWord(f"Side {index} is paired and cannot be marked as a puncture")

    n = len(sides)
    classes = _vertex_classes(sides)
    free_corners = {i for i in free} | {(i + 1) % n for i in free}
    interior = tuple(not (set(cls) & free_corners) for cls in classes)
    chi = len(classes) - len(counts) + 1
    generators = tuple(sorted(label for label, count in counts.items() if count == 2))
    orientable = not any(
        len({s.exponent for s in sides if s.label == label}) == 1 for label in generators
    )
    kind = _classify(chi, orientable, bool(free))

    relators = []
    for cls, is_interior in zip(classes, interior):
        if is_interior:
            word = _link_word(sides, cls[0])
            if word:
                relators.append(word)

    schema = SurfaceSchema(
        sides=tuple(sides),
        punctures=free,
        kind=kind,
        euler_characteristic=chi,
        orientable=orientable,
        vertex_classes=tuple(classes),
        interior_classes=interior,
        generators=generators,
        relators=tuple(relators),
        boundary_word="".join(s.token for s in sides),
    )
    logger.debug(
        f"Parsed schema {schema.boundary_word}: kind={kind.value}, chi={chi}, "
        f"relators={schema.relators}"
    )
    return schema


def orientation_character(schema: SurfaceSchema, word: Union[str, CyclicWord]) -> int:
    """
    沿字 w 传输局部定向后的符号

    Returns:
        int: +1 表示保持定向，-1 表示翻转

    Raises:
        UnknownGenerator: 字中包含 schema 之外的生成元
    """
    letters = word.letters if isinstance(word, CyclicWord) else word
    sign = 1
    for letter in letters:
        label = letter.lower()
        if label not in schema.generators:
            raise UnknownGenerator(
                f"Letter {letter!r} is not a generator of {schema.boundary_word}"
            )
        if schema.same_sign(label):
            sign = -sign
    return sign


def genus(schema: SurfaceSchema) -> Optional[int]:
    """闭曲面的亏格；带边界时返回 None"""
    if schema.free_sides:
        return None
    if schema.orientable:
        return (2 - schema.euler_characteristic) // 2
    return 2 - schema.euler_characteristic


def describe(schema: SurfaceSchema) -> Dict[str, object]:
    return {
        "sides": schema.boundary_word,
        "punctures": list(schema.punctures),
        "kind": schema.kind.value,
        "euler_characteristic": schema.euler_characteristic,
        "orientable": schema.orientable,
        "genus": genus(schema),
        "generators": list(schema.generators),
        "relators": list(schema.relators),
    }
