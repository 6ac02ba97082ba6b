"""
網格模型驗證
Γ₃ ≅ K_n □ K_n：兩個頂點距離為 3 當且僅當它們在同一條格線上
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Dict, Iterator, List, Sequence, Tuple

import networkx as nx
import numpy as np

from src.errors import GridError, Unrealizable
from src.generators.block_generator import BlockId

logger = logging.getLogger(__name__)

Vertex = Tuple[int, int]

MIN_GRID_SIZE = 4
# 擺放搜尋只在左上角 4×4 範圍內進行
_WINDOW = 4

LEMMA2_PATTERNS = ('222', '322', '332', '333')


@dataclass(frozen=True)
class GridModel:
    """n×n 車圖：同列或同行的兩個相異頂點互為線伴"""

    n: int

    def __post_init__(self):
        if int(self.n) < MIN_GRID_SIZE:
            raise GridError(f"網格大小至少為 {MIN_GRID_SIZE}: {self.n}")

    def vertices(self) -> Iterator[Vertex]:
        return itertools.product(range(1, self.n + 1), repeat=2)

    def contains(self, vertex: Sequence[int]) -> bool:
        return len(vertex) == 2 and all(1 <= int(v) <= self.n for v in vertex)

    def are_linemates(self, u: Vertex, v: Vertex) -> bool:
        return u != v and (u[0] == v[0] or u[1] == v[1])

    def linemates(self, u: Vertex) -> List[Vertex]:
        return [z for z in self.vertices() if self.are_linemates(u, z)]

    def lines(self) -> List[frozenset]:
        """先列後行，共 2n 條格線"""
        span = range(1, self.n + 1)
        rows = [frozenset((r, c) for c in span) for r in span]
        columns = [frozenset((r, c) for r in span) for c in span]
        return rows + columns

    def graph(self) -> nx.Graph:
        """K_n □ K_n，頂點為 (列, 行)"""
        line = nx.complete_graph(range(1, self.n + 1))
        return nx.cartesian_product(line, line)


def _check_vertices(model: GridModel, *points: Vertex) -> None:
    for point in points:
        if not model.contains(point):
            raise GridError(f"頂點 {point} 不在 {model.n}×{model.n} 網格內")
    if len(set(points)) != len(points):
        raise GridError(f"頂點必須互不相同: {points}")


def place_pattern(n: int, pattern: BlockId) -> Tuple[Vertex, Vertex, Vertex]:
    """找出實現共線模式的 (u, v, w)

    3 表示該對頂點共線，2 表示不共線；U 對應 (v, w)，V 對應 (u, w)，W 對應 (u, v)
    """
    model = GridModel(n)
    if any(value not in (2, 3) for value in pattern.as_tuple()):
        raise Unrealizable(f"模式 {pattern} 的分量必須是 2 或 3")

    wanted = tuple(value == 3 for value in pattern.as_tuple())
    window = [(r, c) for r in range(1, _WINDOW + 1) for c in range(1, _WINDOW + 1)]
    for u, v, w in itertools.permutations(window, 3):
        found = (model.are_linemates(v, w), model.are_linemates(u, w), model.are_linemates(u, v))
        if found == wanted:
            return u, v, w
    raise Unrealizable(f"模式 {pattern} 無法在網格上實現")


def common_linemates(n: int, u: Vertex, v: Vertex, w: Vertex) -> int:
    """同時是 u, v, w 線伴的頂點數（掃描全部 n² 個頂點）"""
    model = GridModel(n)
    _check_vertices(model, u, v, w)
    return sum(
        1
        for z in model.vertices()
        if z not in (u, v, w)
        and model.are_linemates(z, u)
        and model.are_linemates(z, v)
        and model.are_linemates(z, w)
    )


def lemma3b_candidates(n: int, u: Vertex, v: Vertex) -> int:
    """同時是 u 與 v 線伴的頂點數"""
    model = GridModel(n)
    _check_vertices(model, u, v)
    return sum(
        1
        for z in model.vertices()
        if z not in (u, v) and model.are_linemates(z, u) and model.are_linemates(z, v)
    )


def lemma2_expected(pattern: BlockId, n: int) -> int:
    threes = pattern.as_tuple().count(3)
    return {0: 0, 1: 1, 2: 0, 3: n - 3}[threes]


def lemma2_table(n: int) -> Dict[str, Dict[str, int]]:
    """四種共線模式下的 x(3,3,3) 值與預期值"""
    table = {}
    for label in LEMMA2_PATTERNS:
        pattern = BlockId.parse(label)
        u, v, w = place_pattern(n, pattern)
        table[label] = {
            'count': common_linemates(n, u, v, w),
            'expected': lemma2_expected(pattern, n),
        }
    return table


@dataclass(frozen=True)
class GridDecomposition:
    """由極大團還原的格線分解"""

    n: int
    rows: int
    columns: int
    meets_once: bool
    linemate_degree: int

    @property
    def passed(self) -> bool:
        return (
            self.rows == self.n
            and self.columns == self.n
            and self.meets_once
            and self.linemate_degree == 2 * (self.n - 1)
        )


def grid_decomposition(n: int) -> GridDecomposition:
    """用 networkx 的極大團找出全部格線，並檢查每條列線與每條行線恰好交於一點"""
    model = GridModel(n)
    graph = model.graph()
    cliques = [frozenset(c) for c in nx.find_cliques(graph) if len(c) == n]
    rows = [c for c in cliques if len({r for r, _ in c}) == 1]
    columns = [c for c in cliques if len({col for _, col in c}) == 1]
    meets_once = all(len(row & column) == 1 for row in rows for column in columns)
    degrees = {d for _, d in graph.degree()}
    if len(degrees) != 1:
        raise GridError(f"{n}×{n} 車圖不是正則圖: {sorted(degrees)}")
    return GridDecomposition(
        n=n,
        rows=len(rows),
        columns=len(columns),
        meets_once=meets_once,
        linemate_degree=degrees.pop(),
    )


def lemma3a_partial(n: int, trials: int = 100, seed: int = 0) -> Dict[str, int]:
    """部分檢查：兩條平行格線之間的隨機匹配讓 u 在 v, w 所在格線上恰有一個伴

    車圖不帶有 Γ 中的匹配，這裡只檢查「每個匹配至多一個」的組合部分
    """
    model = GridModel(n)
    rng = np.random.default_rng(seed)
    columns = np.arange(1, n + 1)
    consistent = 0
    passed = 0
    for _ in range(trials):
        row_l, row_n = (int(r) for r in rng.choice(columns, size=2, replace=False))
        c_v, c_w, c_u = (int(c) for c in rng.choice(columns, size=3, replace=False))
        u, v, w = (row_n, c_u), (row_l, c_v), (row_l, c_w)

        # L 上第 c 行的頂點配對到 N 上第 matching[c-1] 行的頂點；同行的兩點距離為 3，不能相鄰
        matching = rng.permutation(n) + 1
        while np.any(matching == columns):
            matching = rng.permutation(n) + 1
        partners = [(row_l, c) for c in range(1, n + 1) if matching[c - 1] == c_u]
        if partners[0] in (v, w):
            # u 與 v 或 w 相鄰，和 d(u,v) = d(u,w) = 2 矛盾
            continue
        consistent += 1
        found = [
            z for z in partners
            if model.are_linemates(z, v) and model.are_linemates(z, w)
            and not model.are_linemates(z, u)
        ]
        if len(found) == 1:
            passed += 1

    logger.info("lemma3a 部分檢查 n=%d：%d/%d 個一致樣本通過", n, passed, consistent)
    return {'n': n, 'trials': trials, 'consistent': consistent, 'passed': passed}
