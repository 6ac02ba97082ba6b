"""
距離正則圖核心
從直徑 3 的交集陣列計算重數 k 與交集數 p^Z_{XY}
"""

import logging
import re
from dataclasses import dataclass
from typing import Any, Dict, List, Sequence, Tuple

import networkx as nx
import numpy as np

from src.errors import ArrayParseError, InfeasibleArray, NonIntegralMultiplicity
from src.models.diagnostic import Diagnostic

logger = logging.getLogger(__name__)

DIAMETER = 3

_ARRAY_PATTERN = re.compile(
    r"^\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*;\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*$"
)


@dataclass(frozen=True)
class IntersectionArray:
    """交集陣列 [b0, b1, b2; c1, c2, c3]"""

    b: Tuple[int, int, int]
    c: Tuple[int, int, int]

    def __post_init__(self):
        b = tuple(int(v) for v in self.b)
        c = tuple(int(v) for v in self.c)
        if len(b) != DIAMETER or len(c) != DIAMETER:
            raise InfeasibleArray(f"直徑 3 的交集陣列需要 3 個 b 與 3 個 c: {b}; {c}")
        object.__setattr__(self, 'b', b)
        object.__setattr__(self, 'c', c)

        if not b[0] >= b[1] >= b[2] >= 1:
            raise InfeasibleArray(f"需要 b0 ≥ b1 ≥ b2 ≥ 1: {self}")
        if not 1 == c[0] <= c[1] <= c[2] <= b[0]:
            raise InfeasibleArray(f"需要 1 = c1 ≤ c2 ≤ c3 ≤ b0: {self}")
        if min(self.a) < 0:
            raise InfeasibleArray(f"a_i 出現負值 {self.a}: {self}")

    @property
    def degree(self) -> int:
        return self.b[0]

    @property
    def a(self) -> Tuple[int, int, int]:
        """a_i = b0 − b_i − c_i，i = 1..3（b3 = 0）"""
        later_b = self.b[1:] + (0,)
        return tuple(self.b[0] - bi - ci for bi, ci in zip(later_b, self.c))

    def __str__(self) -> str:
        return f"{','.join(map(str, self.b))};{','.join(map(str, self.c))}"


@dataclass(frozen=True)
class Multiplicities:
    """與基點距離為 0..3 的頂點數"""

    k: Tuple[int, int, int, int]

    @property
    def total(self) -> int:
        return sum(self.k)


@dataclass(frozen=True, eq=False)
class IntersectionNumbers:
    """交集數表 p[Z, X, Y]，Z, X, Y ∈ {0..3}，索引 0 的邊界明確保存"""

    table: np.ndarray
    k: Tuple[int, int, int, int]

    def __call__(self, z: int, x: int, y: int) -> int:
        return int(self.table[z, x, y])

    def matrix(self, z: int) -> List[List[int]]:
        """p^Z 的 3×3 部分（X, Y ∈ 1..3）"""
        return [[int(v) for v in row[1:]] for row in self.table[z, 1:]]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'k': list(self.k),
            'p': {str(z): self.matrix(z) for z in range(1, DIAMETER + 1)},
        }


def parse_array(text: str) -> IntersectionArray:
    """解析 "b0,b1,b2;c1,c2,c3"（可含空白）"""
    match = _ARRAY_PATTERN.match(text)
    if not match:
        raise ArrayParseError(f"無法解析交集陣列: {text!r}（格式 b0,b1,b2;c1,c2,c3）")
    values = [int(g) for g in match.groups()]
    return IntersectionArray(b=tuple(values[:3]), c=tuple(values[3:]))


def multiplicities(arr: IntersectionArray) -> Multiplicities:
    """k0 = 1，k_{i+1} = k_i·b_i / c_{i+1}"""
    k = [1]
    for i in range(DIAMETER):
        numerator = k[i] * arr.b[i]
        if numerator % arr.c[i]:
            raise NonIntegralMultiplicity(i + 1, numerator, arr.c[i])
        k.append(numerator // arr.c[i])
    return Multiplicities(k=tuple(k))


def _tridiagonal(arr: IntersectionArray) -> np.ndarray:
    # L[h, j] = p^h_{1j}，以 Python 整數保存，大陣列不會溢位
    a = (0,) + arr.a
    b = arr.b + (0,)
    c = (0,) + arr.c
    L = np.zeros((DIAMETER + 1, DIAMETER + 1), dtype=object)
    for j in range(DIAMETER + 1):
        if j > 0:
            L[j - 1, j] = b[j - 1]
        L[j, j] = a[j]
        if j < DIAMETER:
            L[j + 1, j] = c[j + 1]
    return L


def check_invariants(table: np.ndarray, k: Sequence[int]) -> List[str]:
    """列出所有違反的不變量（空列表表示通過）"""
    problems = []
    if np.any(table < 0):
        problems.append("出現負的交集數")
    for z in range(1, DIAMETER + 1):
        block = table[z]
        if not np.array_equal(block, block.T):
            problems.append(f"p^{z} 不對稱")
        for x in range(DIAMETER + 1):
            if int(block[x, 0]) != int(x == z):
                problems.append(f"p({z},{x},0) 邊界值錯誤")
            if int(block[x].sum()) != k[x]:
                problems.append(f"p^{z} 第 {x} 列總和 {int(block[x].sum())} ≠ k_{x} = {k[x]}")
            for y in range(DIAMETER + 1):
                if (abs(x - y) > z or x + y < z) and block[x, y] != 0:
                    problems.append(f"p({z},{x},{y}) 應為 0（三角不等式）")
    return problems


def intersection_numbers(arr: IntersectionArray) -> IntersectionNumbers:
    """由交集陣列遞推出 p^Z_{XY}

    B_X[Z, Y] = p^Z_{XY}，B_1 為三對角矩陣，
    B_{j+1} = (B_1·B_j − b_{j−1}·B_{j−1} − a_j·B_j) / c_{j+1}
    """
    k = multiplicities(arr).k
    a = (0,) + arr.a
    b = arr.b + (0,)
    c = (0,) + arr.c

    L = _tridiagonal(arr)
    identity = np.eye(DIAMETER + 1, dtype=int).astype(object)
    powers = [identity, L]
    for j in range(1, DIAMETER):
        numerator = L @ powers[j] - b[j - 1] * powers[j - 1] - a[j] * powers[j]
        if np.any(numerator % c[j + 1]):
            raise InfeasibleArray(f"B_{j + 1} 不是整數矩陣: {arr}")
        powers.append(numerator // c[j + 1])

    table = np.stack(powers).transpose(1, 0, 2).copy()
    problems = check_invariants(table, k)
    if problems:
        raise InfeasibleArray(f"{arr}: " + "; ".join(problems))

    table.setflags(write=False)
    return IntersectionNumbers(table=table, k=k)


def intersection_numbers_from_graph(graph: nx.Graph) -> IntersectionNumbers:
    """在具體的圖上直接計數 p（暴力法，用於驗證）"""
    if len(graph) == 0:
        raise InfeasibleArray("空圖")
    try:
        dist = dict(nx.all_pairs_shortest_path_length(graph))
        diameter = max(max(row.values()) for row in dist.values())
        nodes = list(graph)
        if any(len(dist[x]) != len(nodes) for x in nodes):
            raise KeyError("disconnected")
    except KeyError as e:
        raise InfeasibleArray("圖不連通") from e
    if diameter != DIAMETER:
        raise InfeasibleArray(f"圖的直徑為 {diameter}，不是 3")

    size = DIAMETER + 1
    table = np.full((size, size, size), -1, dtype=np.int64)
    for x in nodes:
        for y in nodes:
            counts = np.zeros((size, size), dtype=np.int64)
            for z in nodes:
                counts[dist[y][z], dist[x][z]] += 1
            level = dist[x][y]
            if table[level, 0, 0] < 0:
                table[level] = counts
            elif not np.array_equal(table[level], counts):
                raise InfeasibleArray("圖不是距離正則圖")

    k = tuple(int(table[0, x, x]) for x in range(size))
    table.setflags(write=False)
    return IntersectionNumbers(table=table, k=k)


def compare_with_reference(
    p: IntersectionNumbers, reference: Dict[int, List[List[int]]]
) -> List[Diagnostic]:
    """比對計算結果與參考顯示值，每個不一致的項目產生一筆診斷"""
    diagnostics = []
    for z, rows in sorted(reference.items()):
        computed = p.matrix(int(z))
        for x, row in enumerate(rows, start=1):
            for y, printed in enumerate(row, start=1):
                value = computed[x - 1][y - 1]
                if value == printed:
                    continue
                diagnostic = Diagnostic(
                    code='reference-p-mismatch',
                    message=(
                        f"p^{z} 第 ({x},{y}) 項：參考值 {printed}，計算值 {value}"
                        f"（對稱項 ({y},{x}) = {computed[y - 1][x - 1]}）"
                    ),
                    detail={'Z': int(z), 'X': x, 'Y': y, 'reference': printed, 'computed': value},
                )
                logger.warning(diagnostic.message)
                diagnostics.append(diagnostic)
    return diagnostics
