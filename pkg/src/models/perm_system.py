"""
置換系統
d 個部分、每部分 d−1 個元素；θ_ij 把第 i 部分的元素送到第 j 部分
"""

import itertools
from dataclasses import dataclass
from typing import Any, Dict, Iterator, List, Mapping, Sequence, Tuple

from src.errors import InvalidPermSystem

# 0 起算的一行記法：p[x] 為 x 的像
Permutation = Tuple[int, ...]
Pair = Tuple[int, int]


def identity(size: int) -> Permutation:
    return tuple(range(size))


def inverse(p: Sequence[int]) -> Permutation:
    out = [0] * len(p)
    for x, y in enumerate(p):
        out[y] = x
    return tuple(out)


def is_permutation(p: Sequence[int], size: int) -> bool:
    return len(p) == size and sorted(p) == list(range(size))


def fixed_point_free(p: Sequence[int]) -> bool:
    """p(x) ≠ x 對所有 x 成立"""
    return all(y != x for x, y in enumerate(p))


def derangements(size: int) -> Iterator[Permutation]:
    """依字典序產生所有無不動點的置換（逐位回溯，不先列出全部置換）"""
    chosen: List[int] = []
    used = [False] * size

    def extend() -> Iterator[Permutation]:
        x = len(chosen)
        if x == size:
            yield tuple(chosen)
            return
        for y in range(size):
            if used[y] or y == x:
                continue
            used[y] = True
            chosen.append(y)
            yield from extend()
            chosen.pop()
            used[y] = False

    return extend()


def pairs(parts: int) -> List[Pair]:
    """1 ≤ i < j ≤ parts 的字典序"""
    return list(itertools.combinations(range(1, parts + 1), 2))


@dataclass(frozen=True)
class PermSystem:
    """度數 d 的置換系統；只保存 i < j，θ_ji = θ_ij⁻¹"""

    d: int
    theta: Mapping[Pair, Permutation]

    def __post_init__(self):
        if int(self.d) < 2:
            raise InvalidPermSystem(f"度數至少為 2: {self.d}")
        expected = set(pairs(self.d))
        if set(self.theta) != expected:
            missing = sorted(expected - set(self.theta))
            extra = sorted(set(self.theta) - expected)
            raise InvalidPermSystem(f"索引對不符：缺少 {missing}，多出 {extra}")
        normalized = {}
        for key, p in self.theta.items():
            p = tuple(int(v) for v in p)
            if not is_permutation(p, self.size):
                raise InvalidPermSystem(f"θ{key} 不是 {{0..{self.size - 1}}} 上的置換: {p}")
            normalized[key] = p
        object.__setattr__(self, 'theta', dict(sorted(normalized.items())))

    @property
    def size(self) -> int:
        return self.d - 1

    def perm(self, i: int, j: int) -> Permutation:
        if i == j:
            raise InvalidPermSystem(f"θ_{i}{j} 未定義")
        if i < j:
            return self.theta[(i, j)]
        return inverse(self.theta[(j, i)])

    def to_json(self) -> Dict[str, Any]:
        return {
            'degree': self.d,
            'theta': {f"{i},{j}": list(p) for (i, j), p in sorted(self.theta.items())},
        }

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "PermSystem":
        try:
            degree = int(data['degree'])
            theta = {
                tuple(int(k) for k in key.split(",")): tuple(int(v) for v in value)
                for key, value in data['theta'].items()
            }
        except (KeyError, AttributeError, ValueError, TypeError) as e:
            raise InvalidPermSystem(f"無法解析置換系統 JSON: {e}") from e
        return cls(d=degree, theta=theta)


def walk_permutation(system: PermSystem, parts: Sequence[int]) -> Permutation:
    """沿封閉的部分序列 (p0, p1, …, p_{m−1}, p0) 由左到右合成 θ"""
    if len(parts) < 2:
        raise InvalidPermSystem(f"走訪至少需要兩個部分: {tuple(parts)}")
    current = list(identity(system.size))
    closed = list(parts) + [parts[0]]
    for i, j in zip(closed, closed[1:]):
        step = system.perm(i, j)
        current = [step[y] for y in current]
    return tuple(current)


def has_short_cycle(system: PermSystem) -> bool:
    """以合成置換判斷 H 是否含三角形或四邊形

    三角形 ⇔ 某個 3 部分走訪有不動點；四邊形必經 4 個相異部分
    """
    for triple in itertools.combinations(range(1, system.d + 1), 3):
        if not fixed_point_free(walk_permutation(system, triple)):
            return True
    for quad in itertools.combinations(range(1, system.d + 1), 4):
        first = quad[0]
        for rest in itertools.permutations(quad[1:]):
            if not fixed_point_free(walk_permutation(system, (first,) + rest)):
                return True
    return False


def cor6_lift(psi: Mapping[Pair, Sequence[int]], d: int) -> PermSystem:
    """由 d−1 個部分上的 ψ_ij 擴充成度數 d 的系統，θ_id 取單位置換"""
    theta: Dict[Pair, Permutation] = {key: tuple(p) for key, p in psi.items()}
    for i in range(1, d):
        theta[(i, d)] = identity(d - 1)
    return PermSystem(d=d, theta=theta)
