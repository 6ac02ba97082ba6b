"""
置換系統存在性搜尋
逐元素回溯指定 θ_ij，每加一條邊就直接在部分圖上排除三角形與四邊形
"""

import itertools
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Set, Union

import numpy as np

from src.errors import InvalidPermSystem
from src.models.perm_system import Pair, PermSystem, identity, pairs
from src.search.graphs import assemble_moore, build_h, is_moore, verify_h

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SearchBudget:
    """節點上限與（可選的）秒數上限；兩者皆為 None 表示不設限"""

    nodes: Optional[int] = None
    seconds: Optional[float] = None


@dataclass(frozen=True)
class Found:
    system: PermSystem
    nodes: int
    kind = 'found'

    def to_dict(self) -> Dict[str, Any]:
        return {'outcome': self.kind, 'nodes': self.nodes, 'system': self.system.to_json()}


@dataclass(frozen=True)
class ExhaustedNoSolution:
    nodes: int
    kind = 'exhausted'

    def to_dict(self) -> Dict[str, Any]:
        return {'outcome': self.kind, 'nodes': self.nodes}


@dataclass(frozen=True)
class BudgetExceeded:
    nodes: int
    kind = 'budget'

    def to_dict(self) -> Dict[str, Any]:
        return {'outcome': self.kind, 'nodes': self.nodes}


SearchOutcome = Union[Found, ExhaustedNoSolution, BudgetExceeded]


class _BudgetSpent(Exception):
    pass


class PermSearcher:
    """單一子樹的回溯搜尋器"""

    def __init__(self,
                 d: int,
                 budget: Optional[SearchBudget] = None,
                 normalize: bool = True,
                 seed: Optional[int] = None):
        if d < 2:
            raise InvalidPermSystem(f"度數至少為 2: {d}")
        self.d = d
        self.size = d - 1
        self.budget = budget or SearchBudget()
        self.normalize = normalize
        self.nodes = 0
        self._deadline: Optional[float] = None

        self.fixed_pairs: List[Pair] = [(i, d) for i in range(1, d)] if normalize else []
        self.free_pairs: List[Pair] = [p for p in pairs(d) if p not in self.fixed_pairs]

        # 每個索引對的目標嘗試順序；給定 seed 時打亂
        rng = np.random.default_rng(seed) if seed is not None else None
        self.order: Dict[Pair, List[int]] = {}
        for pair in self.free_pairs:
            targets = list(range(self.size))
            if rng is not None:
                targets = [int(t) for t in rng.permutation(targets)]
            self.order[pair] = targets

        self.adj: List[Set[int]] = [set() for _ in range(d * self.size)]
        self.images: Dict[Pair, List[int]] = {pair: [] for pair in self.free_pairs}

    def _vertex(self, part: int, element: int) -> int:
        return (part - 1) * self.size + element

    def closes_short_cycle(self, a: int, b: int) -> bool:
        """加入 a–b 是否形成三角形或四邊形"""
        if not self.adj[a].isdisjoint(self.adj[b]):
            return True
        return any(not self.adj[p].isdisjoint(self.adj[b]) for p in self.adj[a])

    def _link(self, a: int, b: int) -> None:
        self.adj[a].add(b)
        self.adj[b].add(a)

    def _unlink(self, a: int, b: int) -> None:
        self.adj[a].discard(b)
        self.adj[b].discard(a)

    def _tick(self) -> None:
        self.nodes += 1
        if self.budget.nodes is not None and self.nodes > self.budget.nodes:
            raise _BudgetSpent()
        if self._deadline is not None and self.nodes % 1024 == 0 and time.monotonic() > self._deadline:
            raise _BudgetSpent()

    def _seed_fixed(self) -> None:
        for i, j in self.fixed_pairs:
            for x in range(self.size):
                a, b = self._vertex(i, x), self._vertex(j, x)
                if self.closes_short_cycle(a, b):
                    raise InvalidPermSystem(f"正規化的單位匹配 θ_{i}{j} 產生短圈")
                self._link(a, b)

    def _system(self) -> PermSystem:
        theta = {pair: identity(self.size) for pair in self.fixed_pairs}
        theta.update({pair: tuple(image) for pair, image in self.images.items()})
        return PermSystem(d=self.d, theta=theta)

    def _extend(self, pair_index: int, element: int, used: Set[int]) -> bool:
        if pair_index == len(self.free_pairs):
            return True
        if element == self.size:
            return self._extend(pair_index + 1, 0, set())

        pair = self.free_pairs[pair_index]
        i, j = pair
        a = self._vertex(i, element)
        for y in self.order[pair]:
            if y in used:
                continue
            self._tick()
            b = self._vertex(j, y)
            if self.closes_short_cycle(a, b):
                continue
            self._link(a, b)
            used.add(y)
            self.images[pair].append(y)
            if self._extend(pair_index, element + 1, used):
                return True
            self.images[pair].pop()
            used.discard(y)
            self._unlink(a, b)
        return False

    def run(self, first_choice: Optional[int] = None) -> SearchOutcome:
        """first_choice 限制第一個自由索引對中元素 0 的像（平行分支用）"""
        if self.budget.seconds is not None:
            self._deadline = time.monotonic() + self.budget.seconds
        self._seed_fixed()
        try:
            if first_choice is not None and self.free_pairs:
                found = self._run_branch(first_choice)
            else:
                found = self._extend(0, 0, set())
        except _BudgetSpent:
            logger.info("度數 %d：預算用盡（%d 個節點）", self.d, self.nodes)
            return BudgetExceeded(nodes=self.nodes)

        if not found:
            return ExhaustedNoSolution(nodes=self.nodes)
        system = self._system()
        _assert_sound(system)
        return Found(system=system, nodes=self.nodes)

    def _run_branch(self, y: int) -> bool:
        pair = self.free_pairs[0]
        i, j = pair
        self._tick()
        a, b = self._vertex(i, 0), self._vertex(j, y)
        if self.closes_short_cycle(a, b):
            return False
        self._link(a, b)
        self.images[pair].append(y)
        return self._extend(0, 1, {y})


def _assert_sound(system: PermSystem) -> None:
    h = build_h(system)
    report = verify_h(h, system.d)
    check = is_moore(assemble_moore(h, system.d), system.d)
    if not all(report.values()) or not check:
        raise AssertionError(f"搜尋結果未通過驗證: {report}, {check.problems}")


def _search_branch(d: int, budget: SearchBudget, normalize: bool,
                   seed: Optional[int], choice: int) -> SearchOutcome:
    return PermSearcher(d, budget, normalize, seed).run(first_choice=choice)


def merge_outcomes(outcomes: Sequence[SearchOutcome]) -> SearchOutcome:
    """分支合併：最小索引的 Found 優先，其次只要有分支預算用盡就是 BudgetExceeded"""
    nodes = sum(o.nodes for o in outcomes)
    for outcome in outcomes:
        if isinstance(outcome, Found):
            return Found(system=outcome.system, nodes=nodes)
    if any(isinstance(o, BudgetExceeded) for o in outcomes):
        return BudgetExceeded(nodes=nodes)
    return ExhaustedNoSolution(nodes=nodes)


def search(d: int,
           budget: Optional[SearchBudget] = None,
           normalize: bool = True,
           seed: Optional[int] = None,
           workers: int = 1) -> SearchOutcome:
    """回溯搜尋度數 d 的置換系統

    workers > 1 時，第一個自由索引對中元素 0 的每個像各自成為一個分支，
    每個分支各自使用完整的預算
    """
    budget = budget or SearchBudget()
    probe = PermSearcher(d, budget, normalize, seed)
    if workers <= 1 or not probe.free_pairs:
        outcome = probe.run()
    else:
        choices = probe.order[probe.free_pairs[0]]
        with ProcessPoolExecutor(max_workers=workers) as executor:
            outcomes = list(executor.map(
                _search_branch,
                [d] * len(choices),
                [budget] * len(choices),
                [normalize] * len(choices),
                [seed] * len(choices),
                choices,
            ))
        outcome = merge_outcomes(outcomes)
    logger.info("度數 %d 搜尋結果: %s（%d 個節點）", d, outcome.kind, outcome.nodes)
    return outcome


def naive_search(d: int, normalize: bool = True) -> SearchOutcome:
    """不剪枝的乘積空間列舉，用於交叉驗證小度數"""
    size = d - 1
    fixed = [(i, d) for i in range(1, d)] if normalize else []
    free = [p for p in pairs(d) if p not in fixed]
    nodes = 0
    for choice in itertools.product(itertools.permutations(range(size)), repeat=len(free)):
        nodes += 1
        theta = {pair: identity(size) for pair in fixed}
        theta.update(zip(free, choice))
        system = PermSystem(d=d, theta=theta)
        if all(verify_h(build_h(system), d).values()):
            _assert_sound(system)
            return Found(system=system, nodes=nodes)
    return ExhaustedNoSolution(nodes=nodes)
