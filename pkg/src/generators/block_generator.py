"""
區塊生成器
建立每個距離三元組 (U, V, W) 的 27×27 線性系統 M·x = b
"""

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import FrozenSet, List, Sequence, Tuple

import numpy as np
import sympy

from src.errors import InadmissibleBlock, NegativeRhs, OutOfRange
from src.models.intersection import IntersectionNumbers

Triple = Tuple[int, int, int]
Vector = Tuple[int, ...]

VARIABLE_COUNT = 27
FAMILY_NAMES = ('i1', 'i2', 'i3')

# S3 的 6 個排列，σ[k] 為第 k 對 (i_k, 距離_k) 的新位置
PERMUTATIONS: Tuple[Tuple[int, int, int], ...] = tuple(itertools.permutations(range(3)))


def var_index(triple: Sequence[int]) -> int:
    """(i1, i2, i3) → 字典序位置 1..27"""
    if len(triple) != 3 or any(not 1 <= int(v) <= 3 for v in triple):
        raise OutOfRange(f"變數三元組必須在 {{1,2,3}}³ 內: {tuple(triple)}")
    i1, i2, i3 = (int(v) for v in triple)
    return 9 * (i1 - 1) + 3 * (i2 - 1) + i3


def var_triple(idx: int) -> Triple:
    """字典序位置 1..27 → (i1, i2, i3)"""
    if not 1 <= int(idx) <= VARIABLE_COUNT:
        raise OutOfRange(f"變數索引必須在 1..27 內: {idx}")
    q = int(idx) - 1
    return (q // 9 + 1, q // 3 % 3 + 1, q % 3 + 1)


ALL_TRIPLES: Tuple[Triple, ...] = tuple(itertools.product((1, 2, 3), repeat=3))


@dataclass(frozen=True, order=True)
class BlockId:
    """區塊 (U, V, W)：U = d(v,w)，V = d(u,w)，W = d(u,v)"""

    U: int
    V: int
    W: int

    def __post_init__(self):
        for value in (self.U, self.V, self.W):
            if not 1 <= int(value) <= 3:
                raise OutOfRange(f"區塊分量必須在 {{1,2,3}} 內: {self.label}")

    @property
    def label(self) -> str:
        return f"{self.U}{self.V}{self.W}"

    def as_tuple(self) -> Triple:
        return (self.U, self.V, self.W)

    @classmethod
    def parse(cls, label: str) -> "BlockId":
        text = str(label).strip()
        if len(text) != 3 or not text.isdigit():
            raise OutOfRange(f"區塊標籤必須是三位數字: {label!r}")
        return cls(*(int(ch) for ch in text))

    def __str__(self) -> str:
        return self.label


def _breaks_triangle(x: int, y: int, z: int) -> bool:
    # 三角不等式失敗或三邊皆為 1（圍長 5 不允許三角形）
    longest = max(x, y, z)
    return longest > x + y + z - longest or (x, y, z) == (1, 1, 1)


def is_block_admissible(block: BlockId) -> bool:
    return not _breaks_triangle(block.U, block.V, block.W)


def admissible_blocks() -> List[BlockId]:
    """全部 23 個可允許的有序區塊"""
    return [BlockId(*t) for t in ALL_TRIPLES if is_block_admissible(BlockId(*t))]


def canonical_of(block: BlockId) -> BlockId:
    return BlockId(*sorted(block.as_tuple(), reverse=True))


def canonical_blocks() -> List[BlockId]:
    """8 個標準區塊 211, 221, 222, 321, 322, 331, 332, 333"""
    return sorted({canonical_of(b) for b in admissible_blocks()})


def permute_triple(sigma: Sequence[int], triple: Sequence[int]) -> Triple:
    out = [0, 0, 0]
    for k in range(3):
        out[sigma[k]] = triple[k]
    return tuple(out)


def orbit(block: BlockId) -> List[BlockId]:
    """區塊在 S3 作用下的所有像"""
    return sorted({BlockId(*permute_triple(s, block.as_tuple())) for s in PERMUTATIONS})


@lru_cache(maxsize=None)
def coefficient_matrix() -> np.ndarray:
    """M = [[1 1 1]⊗I⊗I; I⊗[1 1 1]⊗I; I⊗I⊗[1 1 1]]"""
    ones = np.ones((1, 3), dtype=np.int64)
    eye = np.eye(3, dtype=np.int64)
    M = np.vstack([
        np.kron(np.kron(ones, eye), eye),
        np.kron(np.kron(eye, ones), eye),
        np.kron(np.kron(eye, eye), ones),
    ])
    M.setflags(write=False)
    return M


@lru_cache(maxsize=None)
def matrix_rank() -> int:
    """M 的秩（sympy 精確消去）"""
    return int(sympy.Matrix(coefficient_matrix().tolist()).rank())


def row_label(row: int) -> str:
    """第 row 個方程式（0 起算）的可讀標籤"""
    family, position = divmod(row, 9)
    first, second = divmod(position, 3)
    fixed = [name for k, name in enumerate(FAMILY_NAMES) if k != family]
    return f"family {family + 1} ({fixed[0]}={first + 1}, {fixed[1]}={second + 1})"


def _delta(x: int, y: int) -> int:
    return int(x == y)


def build_rhs(block: BlockId, p: IntersectionNumbers) -> Vector:
    """右手邊：p 減去 z 與 u、v、w 重合時的修正"""
    if not is_block_admissible(block):
        raise InadmissibleBlock(f"區塊 {block} 不可允許")
    U, V, W = block.as_tuple()
    pairs = list(itertools.product((1, 2, 3), repeat=2))

    rhs = []
    # 族 1：固定 (i2, i3)，z = u 時 d(u,v) = W、d(u,w) = V
    rhs += [p(U, j, h) - _delta(j, W) * _delta(h, V) for j, h in pairs]
    # 族 2：固定 (i1, i3)，z = v 時 d(v,u) = W、d(v,w) = U
    rhs += [p(V, i, h) - _delta(i, W) * _delta(h, U) for i, h in pairs]
    # 族 3：固定 (i1, i2)，z = w 時 d(w,u) = V、d(w,v) = U
    rhs += [p(W, i, j) - _delta(i, V) * _delta(j, U) for i, j in pairs]

    negative = [row_label(r) for r, value in enumerate(rhs) if value < 0]
    if negative:
        raise NegativeRhs(f"區塊 {block} 的右手邊出現負值: {', '.join(negative)}")
    return tuple(rhs)


def forced_zero_variables(block: BlockId) -> FrozenSet[int]:
    """違反三角不等式、圍長或四邊形規則而必為 0 的變數"""
    if not is_block_admissible(block):
        raise InadmissibleBlock(f"區塊 {block} 不可允許")
    U, V, W = block.as_tuple()
    forced = set()
    for i1, i2, i3 in ALL_TRIPLES:
        if (
            _breaks_triangle(i2, i3, U)
            or _breaks_triangle(i1, i3, V)
            or _breaks_triangle(i1, i2, W)
            or (i1, i2, U, V) == (1, 1, 1, 1)
            or (i1, i3, U, W) == (1, 1, 1, 1)
            or (i2, i3, V, W) == (1, 1, 1, 1)
        ):
            forced.add(var_index((i1, i2, i3)))
    return frozenset(forced)


@dataclass(frozen=True, eq=False)
class BlockSystem:
    """單一區塊的係數矩陣、右手邊與必為零的變數"""

    block: BlockId
    matrix: np.ndarray
    rhs: Vector
    forced_zero: FrozenSet[int]

    def residual(self, x: Sequence[int]) -> Vector:
        values = self.matrix @ np.asarray(x, dtype=np.int64) - np.asarray(self.rhs, dtype=np.int64)
        return tuple(int(v) for v in values)


def build_system(block: BlockId, p: IntersectionNumbers) -> BlockSystem:
    return BlockSystem(
        block=block,
        matrix=coefficient_matrix(),
        rhs=build_rhs(block, p),
        forced_zero=forced_zero_variables(block),
    )


def apply_symmetry(sigma: Sequence[int], block: BlockId, x: Sequence[int]) -> Tuple[BlockId, Vector]:
    """以 σ 置換三對 ((i1,U), (i2,V), (i3,W))，回傳像區塊與重新排列的解"""
    if sorted(sigma) != [0, 1, 2]:
        raise OutOfRange(f"σ 必須是 {{0,1,2}} 的排列: {tuple(sigma)}")
    image = BlockId(*permute_triple(sigma, block.as_tuple()))
    out = [0] * VARIABLE_COUNT
    for triple in ALL_TRIPLES:
        out[var_index(permute_triple(sigma, triple)) - 1] = int(x[var_index(triple) - 1])
    return image, tuple(out)


def zero_entries(x: Sequence[int]) -> List[int]:
    """值為 0 的變數索引（1 起算）"""
    return [k + 1 for k, value in enumerate(x) if value == 0]
