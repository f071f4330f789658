"""
曲面群中的字问题、共轭问题和本原根

字使用 ASCII 字符串表示，大写字母为逆元。
按 schema 类型选择算法：自由群、环面和 Klein 瓶的代数正规形、
有限群 (平凡群、Z/2)，以及双曲闭曲面上的 Dehn 算法。
"""

import logging
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from math import gcd
from typing import Dict, Iterable, List, Optional, Tuple, Union

from .errors import TrivialWord, UnknownGenerator, UnsupportedSchema
from .models import CyclicWord, SurfaceKind, SurfaceSchema
from .schema import orientation_character

logger = logging.getLogger(__name__)

Word = Union[str, CyclicWord]

# 双曲情形下半关系子替换的搜索深度
RELATOR_MOVE_DEPTH = 3


class GroupKind(str, Enum):
    TRIVIAL = "trivial"
    CYCLIC2 = "cyclic2"
    FREE = "free"
    TORUS = "torus"
    KLEIN = "klein"
    SURFACE = "surface"


@dataclass(frozen=True)
class ConjugacyResult:
    conjugate: bool
    witness: Optional[str] = None


def inverse(w: str) -> str:
    return w[::-1].swapcase()


def free_reduce(w: str) -> str:
    stack: List[str] = []
    for letter in w:
        if stack and stack[-1] == letter.swapcase():
            stack.pop()
        else:
            stack.append(letter)
    return "".join(stack)


def cyclic_reduce(w: str) -> Tuple[str, str]:
    """
    循环约化

    Returns:
        (core, prefix)，满足 w = prefix · core · prefix⁻¹（自由约化意义下）
    """
    w = free_reduce(w)
    k = 0
    while 2 * k + 1 < len(w) and w[k] == w[len(w) - 1 - k].swapcase():
        k += 1
    return w[k : len(w) - k], w[:k]


def _letters(w: Word) -> str:
    return w.letters if isinstance(w, CyclicWord) else w


def _common_prefix(w: str, start: int, r: str) -> int:
    length = 0
    while (
        length < len(r) and start + length < len(w) and w[start + length] == r[length]
    ):
        length += 1
    return length


def _max_piece(relator: str) -> int:
    """对称化关系子集合中两个不同元素的最长公共前缀"""
    rotations = sorted(
        {relator[k:] + relator[:k] for k in range(len(relator))}
        | {inverse(relator)[k:] + inverse(relator)[:k] for k in range(len(relator))}
    )
    best = 0
    for a, b in zip(rotations, rotations[1:]):
        best = max(best, _common_prefix(a, 0, b))
    return best


class SurfaceGroup:
    """schema 的基本群，给出正规形、共轭判定和本原根"""

    def __init__(self, schema: SurfaceSchema):
        self.schema = schema
        self.generators = schema.generators
        self.reversing = frozenset(g for g in schema.generators if schema.same_sign(g))
        self.kind = self._detect_kind()
        self._rotations: Tuple[str, ...] = ()
        if self.kind == GroupKind.SURFACE:
            relator = schema.relators[0]
            rotations = {relator[k:] + relator[:k] for k in range(len(relator))}
            rotations |= {inverse(r) for r in rotations}
            self._rotations = tuple(sorted(rotations))
        logger.debug(f"Group of {schema.boundary_word}: {self.kind.value}")

    def _detect_kind(self) -> GroupKind:
        schema = self.schema
        kind = schema.kind
        if kind == SurfaceKind.SPHERE:
            return GroupKind.TRIVIAL
        if kind == SurfaceKind.PROJECTIVE_PLANE:
            return GroupKind.CYCLIC2
        if schema.free_sides:
            if any(schema.interior_classes):
                raise UnsupportedSchema(
                    f"Schema {schema.boundary_word} has an interior vertex on a bounded surface"
                )
            return GroupKind.FREE
        if kind in (SurfaceKind.TORUS, SurfaceKind.KLEIN_BOTTLE):
            if schema.side_count != 4 or len(schema.relators) != 1:
                raise UnsupportedSchema(
                    f"Only four-sided {kind.value} schemas are supported, "
                    f"got {schema.boundary_word}"
                )
            if kind == SurfaceKind.TORUS:
                return GroupKind.TORUS
            if len(self.reversing) != 1:
                raise UnsupportedSchema(
                    f"Klein bottle schema {schema.boundary_word} needs exactly one glide pair"
                )
            if self._klein_element(schema.relators[0]) != (0, 0):
                raise UnsupportedSchema(
                    f"Relator {schema.relators[0]} is not a Klein bottle relation"
                )
            return GroupKind.KLEIN
        if len(schema.relators) != 1:
            raise UnsupportedSchema(
                f"Schema {schema.boundary_word} must identify all polygon vertices"
            )
        relator = schema.relators[0]
        if 6 * _max_piece(relator) >= len(relator):
            raise UnsupportedSchema(
                f"Relator {relator} does not satisfy the small-cancellation condition"
            )
        return GroupKind.SURFACE

    # 基本运算

    def check_letters(self, w: str) -> None:
        for letter in w:
            if letter.lower() not in self.generators:
                raise UnknownGenerator(
                    f"Letter {letter!r} is not a generator of {self.schema.boundary_word}"
                )

    def character(self, w: str) -> int:
        return orientation_character(self.schema, w)

    # 环面与 Klein 瓶的坐标

    def _torus_vector(self, w: str) -> Tuple[int, ...]:
        counts = {g: 0 for g in self.generators}
        for letter in w:
            counts[letter.lower()] += 1 if letter.islower() else -1
        return tuple(counts[g] for g in self.generators)

    def _torus_word(self, vector: Iterable[int]) -> str:
        return "".join(
            (g if e > 0 else g.upper()) * abs(e) for g, e in zip(self.generators, vector)
        )

    @property
    def _glide(self) -> str:
        return next(iter(self.reversing))

    @property
    def _fiber(self) -> str:
        return next(g for g in self.generators if g not in self.reversing)

    def _klein_element(self, w: str) -> Tuple[int, int]:
        """y^n x^m 的坐标 (n, m)"""
        n, m = 0, 0
        glide = self._glide
        for letter in w:
            if letter.lower() == glide:
                step = (0, 1 if letter.islower() else -1)
            else:
                step = (1 if letter.islower() else -1, 0)
            n, m = n + (-1) ** (m % 2) * step[0], m + step[1]
        return n, m

    def _klein_word(self, element: Tuple[int, int]) -> str:
        n, m = element
        y, x = self._fiber, self._glide
        return (y if n > 0 else y.upper()) * abs(n) + (x if m > 0 else x.upper()) * abs(m)

    # Dehn 算法

    def _dehn(self, w: str) -> str:
        w = free_reduce(w)
        changed = True
        while changed:
            changed = False
            for start in range(len(w)):
                for r in self._rotations:
                    length = _common_prefix(w, start, r)
                    if 2 * length > len(r):
                        w = free_reduce(w[:start] + inverse(r[length:]) + w[start + length :])
                        changed = True
                        break
                if changed:
                    break
        return w

    def _cyclic_dehn(self, w: str) -> Tuple[str, str]:
        """
        循环 Dehn 约化

        Returns:
            (core, conj)，满足 w = conj · core · conj⁻¹
        """
        core, conj = cyclic_reduce(self._dehn(w))
        changed = True
        while changed and core:
            changed = False
            for k in range(len(core)):
                rotated = core[k:] + core[:k]
                for r in self._rotations:
                    length = _common_prefix(rotated, 0, r)
                    if 2 * length > len(r):
                        conj = free_reduce(conj + core[:k])
                        replaced = self._dehn(inverse(r[length:]) + rotated[length:])
                        core, prefix = cyclic_reduce(replaced)
                        conj = free_reduce(conj + prefix)
                        changed = True
                        break
                if changed:
                    break
        return core, conj

    # 正规形

    def normal_form(self, w: str) -> str:
        """基点意义下的约化代表"""
        if self.kind == GroupKind.TRIVIAL:
            return ""
        if self.kind == GroupKind.CYCLIC2:
            if self.character(w) == 1:
                return ""
            return sorted(self.reversing)[0]
        if self.kind == GroupKind.FREE:
            return free_reduce(w)
        if self.kind == GroupKind.TORUS:
            return self._torus_word(self._torus_vector(w))
        if self.kind == GroupKind.KLEIN:
            return self._klein_word(self._klein_element(w))
        return self._dehn(w)

    def cyclic_normal_form(self, w: str) -> str:
        """共轭类的约化代表"""
        if self.kind == GroupKind.KLEIN:
            n, m = self._klein_element(w)
            if m % 2 == 0:
                return self._klein_word((abs(n), m))
            return self._klein_word((n % 2, m))
        if self.kind == GroupKind.FREE:
            return cyclic_reduce(w)[0]
        if self.kind == GroupKind.SURFACE:
            return self._cyclic_dehn(w)[0]
        return self.normal_form(w)

    def is_trivial(self, w: str) -> bool:
        return self.normal_form(w) == ""

    def equal(self, u: str, v: str) -> bool:
        return self.is_trivial(u + inverse(v))

    # 共轭

    def _rotation_witness(self, u: str, v: str) -> Optional[str]:
        """循环约化形式按旋转匹配；返回 c 使 c·v·c⁻¹ = u"""
        if self.kind == GroupKind.SURFACE:
            cu, xu = self._cyclic_dehn(u)
            cv, xv = self._cyclic_dehn(v)
        else:
            cu, xu = cyclic_reduce(u)
            cv, xv = cyclic_reduce(v)
        if len(cu) != len(cv):
            return None
        if not cu:
            return free_reduce(xu + inverse(xv))
        for k in range(len(cv)):
            if cv[k:] + cv[:k] == cu:
                return free_reduce(xu + inverse(cv[:k]) + inverse(xv))
        return None

    def _relator_search(self, u: str, v: str) -> Optional[str]:
        """在 v 的循环约化形式上做有限深度的半关系子替换搜索"""
        cu, xu = self._cyclic_dehn(u)
        cv, xv = self._cyclic_dehn(v)
        frontier: Dict[str, str] = {cv: free_reduce(xv)}
        seen = {cv}
        for _ in range(RELATOR_MOVE_DEPTH):
            next_frontier: Dict[str, str] = {}
            for core, conj in frontier.items():
                for k in range(len(core)):
                    rotated = core[k:] + core[:k]
                    shift = free_reduce(conj + core[:k])
                    for r in self._rotations:
                        half = len(r) // 2
                        if len(rotated) < half or rotated[:half] != r[:half]:
                            continue
                        candidate = inverse(r[half:]) + rotated[half:]
                        new_core, prefix = self._cyclic_dehn(candidate)
                        new_conj = free_reduce(shift + prefix)
                        if new_core in seen:
                            continue
                        seen.add(new_core)
                        if len(new_core) == len(cu):
                            for j in range(len(new_core)):
                                if new_core[j:] + new_core[:j] == cu:
                                    return free_reduce(
                                        xu + inverse(new_core[:j]) + inverse(new_conj)
                                    )
                        next_frontier[new_core] = new_conj
            frontier = next_frontier
            if not frontier:
                break
        return None

    def _algebraic_witness(self, u: str, v: str) -> Optional[str]:
        if self.kind in (GroupKind.TRIVIAL, GroupKind.TORUS, GroupKind.CYCLIC2):
            return "" if self.equal(u, v) else None
        if self.kind == GroupKind.KLEIN:
            n1, m1 = self._klein_element(u)
            n2, m2 = self._klein_element(v)
            if m1 != m2:
                return None
            if m1 % 2 == 0:
                if n1 == n2:
                    return ""
                if n1 == -n2:
                    return self._glide
                return None
            if (n1 - n2) % 2:
                return None
            k = (n1 - n2) // 2
            y = self._fiber
            return (y if k > 0 else y.upper()) * abs(k)
        if self.kind == GroupKind.SURFACE:
            return self._relator_search(u, v)
        return None

    def conjugate(self, u: str, v: str) -> ConjugacyResult:
        witness = self._rotation_witness(u, v)
        if witness is None or not self._verify(u, v, witness):
            witness = self._algebraic_witness(u, v)
        if witness is None or not self._verify(u, v, witness):
            return ConjugacyResult(False)
        return ConjugacyResult(True, witness)

    def _verify(self, u: str, v: str, c: str) -> bool:
        return self.equal(c + v + inverse(c), u)

    # 本原根

    def primitive_root(self, w: str) -> Tuple[str, int]:
        if self.is_trivial(w):
            raise TrivialWord(f"Word {w!r} is trivial in {self.schema.boundary_word}")
        if self.kind == GroupKind.CYCLIC2:
            return self.normal_form(w), 1
        if self.kind == GroupKind.TORUS:
            vector = self._torus_vector(w)
            g = 0
            for e in vector:
                g = gcd(g, e)
            return self._torus_word(e // g for e in vector), g
        if self.kind == GroupKind.KLEIN:
            return self._klein_root(self._klein_element(w))
        if self.kind == GroupKind.SURFACE:
            core = self._cyclic_dehn(w)[0]
        else:
            core = cyclic_reduce(w)[0]
        length = len(core)
        for d in range(1, length):
            if length % d:
                continue
            candidate = core[:d] * (length // d)
            if candidate == core or self.conjugate(candidate, core).conjugate:
                return core[:d], length // d
        return core, 1

    def _klein_root(self, element: Tuple[int, int]) -> Tuple[str, int]:
        n, m = element
        if m == 0:
            return self._klein_word((1 if n > 0 else -1, 0)), abs(n)
        if m % 2:
            return self._klein_word((n, 1 if m > 0 else -1)), abs(m)
        if n == 0:
            return self._klein_word((0, 1 if m > 0 else -1)), abs(m)
        best = 1
        for k in range(1, gcd(n, m) + 1):
            if n % k == 0 and m % k == 0 and (m // k) % 2 == 0:
                best = k
        return self._klein_word((n // best, m // best)), best


@lru_cache(maxsize=64)
def surface_group(schema: SurfaceSchema) -> SurfaceGroup:
    return SurfaceGroup(schema)


def reduce(w: Word, schema: SurfaceSchema, basepointed: bool = True) -> CyclicWord:
    """
    约化字

    Args:
        w: 字
        schema: 粘合 schema
        basepointed: False 时做循环约化（共轭类代表）

    Raises:
        UnknownGenerator: 字中包含 schema 之外的生成元
    """
    letters = _letters(w)
    group = surface_group(schema)
    group.check_letters(letters)
    if basepointed:
        reduced = group.normal_form(letters)
    else:
        reduced = group.cyclic_normal_form(letters)
    return CyclicWord(letters=letters, reduced=reduced, basepointed=basepointed)


def conjugate_and_witness(u: Word, v: Word, schema: SurfaceSchema) -> ConjugacyResult:
    """判断 u 与 v 是否共轭；共轭时给出 c 使 c·v·c⁻¹ = u"""
    group = surface_group(schema)
    lu, lv = _letters(u), _letters(v)
    group.check_letters(lu)
    group.check_letters(lv)
    result = group.conjugate(lu, lv)
    logger.debug(f"Conjugacy {lu!r} ~ {lv!r}: {result}")
    return result


def primitive_root(w: Word, schema: SurfaceSchema) -> Tuple[CyclicWord, int]:
    """
    本原根

    Returns:
        (root, n)，w 与 root^n 共轭且 n 最大

    Raises:
        TrivialWord: w 是平凡元
    """
    group = surface_group(schema)
    letters = _letters(w)
    group.check_letters(letters)
    root, n = group.primitive_root(letters)
    return reduce(root, schema, basepointed=False), n


def framing_ambiguous(w: Word, schema: SurfaceSchema) -> bool:
    """本原根的定向特征为 -1 时，两个相反的法向标架同伦"""
    root, _ = primitive_root(w, schema)
    return orientation_character(schema, root.letters) == -1


def is_trivial(w: Word, schema: SurfaceSchema) -> bool:
    group = surface_group(schema)
    letters = _letters(w)
    group.check_letters(letters)
    return group.is_trivial(letters)


def words_equal(u: Word, v: Word, schema: SurfaceSchema) -> bool:
    return is_trivial(_letters(u) + inverse(_letters(v)), schema)
