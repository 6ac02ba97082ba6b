"""
由置換系統建圖並檢查 Moore 圖性質
H 的頂點編號為 (部分 − 1)·(d − 1) + 元素，部分以 1 起算、元素以 0 起算
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import networkx as nx

from src.errors import InvalidPermSystem
from src.models.perm_system import PermSystem

logger = logging.getLogger(__name__)

H_PROPERTIES = ('parts', 'part_sizes', 'regular', 'one_per_part', 'girth')


def vertex_id(d: int, part: int, element: int) -> int:
    return (part - 1) * (d - 1) + element


def build_h(system: PermSystem) -> nx.Graph:
    """d 個大小為 d−1 的部分；第 i 部分的 x 與第 j 部分的 θ_ij(x) 相鄰"""
    d = system.d
    h = nx.Graph()
    for part in range(1, d + 1):
        for x in range(system.size):
            h.add_node(vertex_id(d, part, x), part=part)
    for (i, j), p in system.theta.items():
        h.add_edges_from((vertex_id(d, i, x), vertex_id(d, j, y)) for x, y in enumerate(p))
    return h


def verify_h(h: nx.Graph, d: int) -> Dict[str, bool]:
    """逐項檢查 H 的五個性質"""
    parts: Dict[int, List[int]] = {}
    for node, part in h.nodes(data='part'):
        parts.setdefault(part, []).append(node)

    one_per_part = True
    for node in h:
        seen = [h.nodes[other]['part'] for other in h[node]]
        own = h.nodes[node]['part']
        if own in seen or len(seen) != len(set(seen)) or len(seen) != d - 1:
            one_per_part = False
            break

    girth = nx.girth(h)
    return {
        'parts': len(parts) == d and None not in parts,
        'part_sizes': all(len(members) == d - 1 for members in parts.values()),
        'regular': all(degree == d - 1 for _, degree in h.degree()),
        'one_per_part': one_per_part,
        'girth': girth >= 5,
    }


def assemble_moore(h: nx.Graph, d: int) -> nx.Graph:
    """加上中心 v 與 d 個鄰居；第 i 個鄰居連到第 i 部分的全部頂點"""
    g = nx.Graph(h)
    base = d * (d - 1)
    center = base + d
    g.add_node(center, role='center')
    for part in range(1, d + 1):
        neighbour = base + part - 1
        g.add_node(neighbour, role='neighbour', part=part)
        g.add_edge(center, neighbour)
        g.add_edges_from(
            (neighbour, node) for node, owner in h.nodes(data='part') if owner == part
        )
    return g


@dataclass(frozen=True)
class MooreCheck:
    """Moore 圖判定結果"""

    passed: bool
    problems: List[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.passed

    def to_dict(self) -> Dict[str, object]:
        return {'passed': self.passed, 'problems': list(self.problems)}


def is_moore(g: nx.Graph, d: int) -> MooreCheck:
    """階數 d²+1、d-正則、圍長 5、直徑 2"""
    problems = []
    order = g.number_of_nodes()
    if order != d * d + 1:
        problems.append(f"頂點數 {order} ≠ {d * d + 1}")
    degrees = sorted({degree for _, degree in g.degree()})
    if degrees != [d]:
        problems.append(f"度數為 {degrees}，不是 {d}-正則")
    if order and nx.is_connected(g):
        girth = nx.girth(g)
        if girth != 5:
            problems.append(f"圍長為 {girth}，不是 5")
        diameter = nx.diameter(g)
        if diameter != 2:
            problems.append(f"直徑為 {diameter}，不是 2")
    else:
        problems.append("圖不連通")
    return MooreCheck(passed=not problems, problems=problems)


def perm_system_from_moore(g: nx.Graph, d: int, root: Optional[object] = None) -> PermSystem:
    """從既有的 Moore 圖取出 θ_id = 單位置換的置換系統"""
    check = is_moore(g, d)
    if not check:
        raise InvalidPermSystem("輸入不是 Moore 圖: " + "; ".join(check.problems))

    root = min(g) if root is None else root
    neighbours = sorted(g[root])
    parts = {
        index: sorted(set(g[n]) - {root})
        for index, n in enumerate(neighbours, start=1)
    }

    # 第 d 部分依排序編號，其餘部分以其在第 d 部分的鄰居編號
    last = {node: x for x, node in enumerate(parts[d])}
    label: Dict[object, int] = dict(last)
    for part in range(1, d):
        for node in parts[part]:
            (mate,) = [other for other in g[node] if other in last]
            label[node] = last[mate]

    by_label = {
        part: {label[node]: node for node in parts[part]} for part in range(1, d + 1)
    }
    member_of = {node: part for part, nodes in parts.items() for node in nodes}
    theta = {}
    for i in range(1, d + 1):
        for j in range(i + 1, d + 1):
            image = []
            for x in range(d - 1):
                (mate,) = [other for other in g[by_label[i][x]] if member_of.get(other) == j]
                image.append(label[mate])
            theta[(i, j)] = tuple(image)
    return PermSystem(d=d, theta=theta)


def edge_list(g: nx.Graph) -> str:
    """每行一條邊 "u v"，頂點以 0 起算並排序"""
    relabeled = nx.convert_node_labels_to_integers(g, ordering='sorted')
    edges = sorted(tuple(sorted(edge)) for edge in relabeled.edges())
    return "".join(f"{u} {v}\n" for u, v in edges)
