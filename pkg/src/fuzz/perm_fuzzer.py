"""
置換系統隨機測試器
產生隨機的小度數置換系統，比對「合成置換有不動點」與「H 中有短圈」兩種判斷
"""

import itertools
import logging
from typing import Any, Dict, List, Optional

import networkx as nx
import numpy as np

from src.models.perm_system import PermSystem, fixed_point_free, pairs, walk_permutation
from src.search.graphs import build_h, vertex_id

logger = logging.getLogger(__name__)


class PermFuzzer:
    """置換系統隨機測試器"""

    def __init__(self, seed: Optional[int] = 0):
        self.rng = np.random.default_rng(seed)

    def random_system(self, d: int) -> PermSystem:
        """每個索引對獨立抽一個均勻隨機置換"""
        theta = {pair: tuple(int(v) for v in self.rng.permutation(d - 1)) for pair in pairs(d)}
        return PermSystem(d=d, theta=theta)

    def generate_systems(self, d: int, count: int) -> List[PermSystem]:
        return [self.random_system(d) for _ in range(count)]

    @staticmethod
    def triangle_through(h: nx.Graph, d: int, parts: tuple) -> bool:
        """H 中是否有三個頂點分別落在給定的三個部分且兩兩相鄰"""
        i, j, k = parts
        for x in range(d - 1):
            a = vertex_id(d, i, x)
            for b in h[a]:
                if h.nodes[b]['part'] != j:
                    continue
                for c in h[b]:
                    if h.nodes[c]['part'] == k and h.has_edge(c, a):
                        return True
        return False

    @staticmethod
    def square_through(h: nx.Graph, d: int, parts: tuple) -> bool:
        """H 中是否有依序經過給定四個部分的四邊形"""
        i, j, k, l = parts
        for x in range(d - 1):
            a = vertex_id(d, i, x)
            for b in (n for n in h[a] if h.nodes[n]['part'] == j):
                for c in (n for n in h[b] if h.nodes[n]['part'] == k):
                    for e in (n for n in h[c] if h.nodes[n]['part'] == l):
                        if h.has_edge(e, a):
                            return True
        return False

    def check_cycle_equivalence(self, d: int, count: int) -> Dict[str, Any]:
        """比對合成置換的不動點與部分圖上的三角形、四邊形"""
        mismatches = []
        checked = 0
        for system in self.generate_systems(d, count):
            h = build_h(system)
            for triple in itertools.combinations(range(1, d + 1), 3):
                checked += 1
                by_walk = not fixed_point_free(walk_permutation(system, triple))
                if by_walk != self.triangle_through(h, d, triple):
                    mismatches.append({'system': system.to_json(), 'parts': list(triple)})
            for quad in itertools.combinations(range(1, d + 1), 4):
                for rest in itertools.permutations(quad[1:]):
                    walk = (quad[0],) + rest
                    checked += 1
                    by_walk = not fixed_point_free(walk_permutation(system, walk))
                    if by_walk != self.square_through(h, d, walk):
                        mismatches.append({'system': system.to_json(), 'parts': list(walk)})

        logger.info("🎲 度數 %d：%d 個隨機系統，%d 次比對，%d 個不一致", d, count, checked, len(mismatches))
        return {'degree': d, 'systems': count, 'checked': checked, 'mismatches': mismatches}
