"""
格點求解器
在 x = x₀ + C·n 的 8 維係數空間中求特解、列舉全部受約束的解，並以獨立的方框掃描稽核完整性
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy

from src.constraints.constraint_builder import ConstraintSet, assemble
from src.errors import Infeasible, UnboundedLattice
from src.generators.block_generator import (
    PERMUTATIONS,
    VARIABLE_COUNT,
    BlockId,
    BlockSystem,
    Vector,
    apply_symmetry,
    build_system,
    canonical_blocks,
    row_label,
)
from src.lattice.nullspace import (
    FREE_POSITIONS,
    NullCoefficients,
    coefficient_between,
    expand,
    null_basis_matrix,
)
from src.models.intersection import IntersectionNumbers

logger = logging.getLogger(__name__)

Solution = Vector
# (支撐集合, 下界, 上界)：對 Σ_{i∈支撐} n_i 的區間限制
Row = Tuple[Tuple[int, ...], float, float]
Bounds = Tuple[List[float], List[float]]

DIMENSION = 8
AUDIT_MIN_RADIUS = 6
MAX_PROPAGATION_ROUNDS = 200

# 已發表計數表的欄位順序
SUMMARY_ORDER = ('333', '211', '221', '321', '331', '322', '222', '332')


@lru_cache(maxsize=None)
def _signed_supports() -> Tuple[Tuple[int, Tuple[int, ...]], ...]:
    # C 的每一列只含同號的 ±1
    rows = []
    for row in null_basis_matrix():
        support = tuple(int(i) for i in np.flatnonzero(row))
        rows.append((int(row[support[0]]), support))
    return tuple(rows)


def _shift(base: Sequence[int], n: Sequence[int]) -> Solution:
    return tuple(int(b) + v for b, v in zip(base, expand(n)))


def lattice_anchor(system: BlockSystem) -> Solution:
    """M·x = rhs 在 8 個自由位置為 0 的唯一解（sympy 精確消去）"""
    pivots = [k - 1 for k in range(1, VARIABLE_COUNT + 1) if k not in FREE_POSITIONS]
    A = sympy.Matrix(np.asarray(system.matrix)[:, pivots].tolist())
    b = sympy.Matrix(list(system.rhs))
    try:
        solution, params = A.gauss_jordan_solve(b)
    except ValueError as e:
        raise Infeasible(f"區塊 {system.block} 的方程式不相容") from e
    if params.shape[0]:
        raise Infeasible(f"區塊 {system.block} 的錨點不唯一")

    anchor = [0] * VARIABLE_COUNT
    for column, value in zip(pivots, solution):
        if not value.is_integer:
            raise Infeasible(f"區塊 {system.block} 的錨點在 x({column + 1}) = {value} 不是整數")
        anchor[column] = int(value)
    return tuple(anchor)


def row_windows(base: Sequence[int], cons: ConstraintSet) -> List[Row]:
    """把每個變數的 [lo, hi] 改寫成係數部分和的區間"""
    lo, hi = cons.bounds()
    rows = []
    for k, (sign, support) in enumerate(_signed_supports()):
        low = lo[k] - int(base[k])
        high = math.inf if hi[k] is None else hi[k] - int(base[k])
        if sign < 0:
            low, high = -high, -low
        rows.append((support, low, high))
    return rows


def propagate(rows: Sequence[Row], lower: List[float], upper: List[float]) -> bool:
    """就地收緊係數區間；出現空區間時回傳 False"""
    for _ in range(MAX_PROPAGATION_ROUNDS):
        changed = False
        for support, low, high in rows:
            for i in support:
                rest_lower = sum(lower[j] for j in support if j != i)
                rest_upper = sum(upper[j] for j in support if j != i)
                new_upper = high - rest_lower
                new_lower = low - rest_upper
                if new_upper < upper[i]:
                    upper[i] = new_upper
                    changed = True
                if new_lower > lower[i]:
                    lower[i] = new_lower
                    changed = True
                if lower[i] > upper[i]:
                    return False
        if not changed:
            break
    return True


def coefficient_bounds(rows: Sequence[Row], block: Optional[BlockId] = None) -> Bounds:
    """從 (−∞, ∞) 出發傳播出每個係數的有限區間"""
    lower: List[float] = [-math.inf] * DIMENSION
    upper: List[float] = [math.inf] * DIMENSION
    if not propagate(rows, lower, upper):
        raise Infeasible(f"區塊 {block} 的約束互相矛盾")
    loose = [k for k in range(DIMENSION) if math.isinf(lower[k]) or math.isinf(upper[k])]
    if loose:
        raise UnboundedLattice(f"區塊 {block} 的係數 {loose} 無法界定")
    return [int(v) for v in lower], [int(v) for v in upper]


def _sweep(rows, lower, upper, depth: int, hits: List[Tuple[int, ...]], limit: int = 0) -> None:
    lower = list(lower)
    upper = list(upper)
    if not propagate(rows, lower, upper):
        return
    if depth == DIMENSION:
        hits.append(tuple(int(v) for v in lower))
        return
    for value in range(int(lower[depth]), int(upper[depth]) + 1):
        lower[depth] = upper[depth] = value
        _sweep(rows, lower, upper, depth + 1, hits, limit)
        if limit and len(hits) >= limit:
            return


def _sweep_branch(rows, lower, upper, value: int) -> List[Tuple[int, ...]]:
    """以第一個係數固定為 value 的子樹（行程池的工作單位）"""
    lower = list(lower)
    upper = list(upper)
    lower[0] = upper[0] = value
    hits: List[Tuple[int, ...]] = []
    _sweep(rows, lower, upper, 1, hits)
    return hits


def _collect(rows: Sequence[Row], bounds: Bounds, workers: int = 1) -> List[Tuple[int, ...]]:
    lower, upper = bounds
    first = range(lower[0], upper[0] + 1)
    if workers > 1 and len(first) > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            branches = executor.map(
                _sweep_branch,
                [rows] * len(first),
                [lower] * len(first),
                [upper] * len(first),
                first,
            )
            return [hit for branch in branches for hit in branch]

    hits: List[Tuple[int, ...]] = []
    _sweep(rows, lower, upper, 0, hits)
    return hits


def particular_solution(system: BlockSystem, cons: ConstraintSet) -> Solution:
    """深度優先搜尋的第一個解"""
    anchor = lattice_anchor(system)
    rows = row_windows(anchor, cons)
    lower, upper = coefficient_bounds(rows, system.block)
    hits: List[Tuple[int, ...]] = []
    _sweep(rows, lower, upper, 0, hits, limit=1)
    if not hits:
        raise Infeasible(f"區塊 {system.block} 沒有滿足約束的非負整數解")
    return _shift(anchor, hits[0])


@dataclass(frozen=True)
class EnumerationResult:
    """一個區塊的全部解，係數相對於 base"""

    block: BlockId
    base: Solution
    tuples: Tuple[NullCoefficients, ...]
    solutions: Tuple[Solution, ...]

    @property
    def count(self) -> int:
        return len(self.solutions)

    def rebased(self, base: Sequence[int]) -> "EnumerationResult":
        """改以另一個同區塊的解為基準重新表示係數"""
        base = tuple(int(v) for v in base)
        return EnumerationResult(
            block=self.block,
            base=base,
            tuples=tuple(coefficient_between(x, base) for x in self.solutions),
            solutions=self.solutions,
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            'block': self.block.label,
            'count': self.count,
            'base': list(self.base),
            'tuples': [list(t) for t in self.tuples],
            'solutions': [list(x) for x in self.solutions],
        }


def enumerate_solutions(
    system: BlockSystem,
    cons: ConstraintSet,
    base: Optional[Sequence[int]] = None,
    workers: int = 1,
) -> EnumerationResult:
    """列舉 {x₀ + C·n ≥ 0 : n ∈ Z⁸} 中滿足 cons 的全部解，依 x 字典序排序"""
    anchor = lattice_anchor(system)
    rows = row_windows(anchor, cons)
    bounds = coefficient_bounds(rows, system.block)
    logger.info(
        "區塊 %s 係數區間: %s",
        system.block,
        ", ".join(f"[{lo},{hi}]" for lo, hi in zip(*bounds)),
    )

    hits = _collect(rows, bounds, workers)
    if not hits:
        raise Infeasible(f"區塊 {system.block} 沒有滿足約束的非負整數解")

    solutions = sorted(_shift(anchor, n) for n in hits)
    origin = tuple(int(v) for v in base) if base is not None else _shift(anchor, hits[0])
    result = EnumerationResult(
        block=system.block,
        base=origin,
        tuples=tuple(coefficient_between(x, origin) for x in solutions),
        solutions=tuple(solutions),
    )
    logger.info("區塊 %s: %d 個解", system.block, result.count)
    return result


def verify_solution(system: BlockSystem, cons: ConstraintSet, x: Sequence[int]) -> List[str]:
    """列出所有不滿足的方程式與約束；空列表表示有效"""
    if len(x) != VARIABLE_COUNT:
        return [f"需要 27 個分量，得到 {len(x)} 個"]
    problems = [
        f"{row_label(row)}: 殘差 {value:+d}"
        for row, value in enumerate(system.residual(x))
        if value
    ]
    problems += cons.violations(x)
    return problems


@dataclass(frozen=True)
class AuditReport:
    """方框掃描的結果"""

    block: BlockId
    center: Solution
    radius: int
    nodes: int
    solutions: Tuple[Solution, ...]

    def agrees_with(self, result: EnumerationResult) -> bool:
        return set(self.solutions) == set(result.solutions)


def audit_completeness(
    system: BlockSystem,
    cons: ConstraintSet,
    center: Optional[Sequence[int]] = None,
    radius: Optional[int] = None,
) -> AuditReport:
    """以 center 為中心、半徑 radius 的係數方框逐點掃描

    只用「已固定部分和 ± 未固定個數 × 半徑」剪枝，不做區間傳播；
    預設半徑取 6 與傳播區間相對 center 的最大偏移兩者中較大者
    """
    if center is None:
        center = particular_solution(system, cons)
    center = tuple(int(v) for v in center)
    rows = row_windows(center, cons)

    if radius is None:
        lower, upper = coefficient_bounds(rows, system.block)
        reach = max(max(abs(lo), abs(hi)) for lo, hi in zip(lower, upper))
        radius = max(AUDIT_MIN_RADIUS, reach)

    # 只需檢查含剛指定係數的列
    touching = [[row for row in rows if k in row[0]] for k in range(DIMENSION)]
    values = [0] * DIMENSION
    hits: List[Tuple[int, ...]] = []
    nodes = 0

    def fits(depth: int) -> bool:
        for support, low, high in touching[depth]:
            fixed = sum(values[i] for i in support if i <= depth)
            slack = radius * sum(1 for i in support if i > depth)
            if fixed - slack > high or fixed + slack < low:
                return False
        return True

    def descend(depth: int) -> None:
        nonlocal nodes
        nodes += 1
        if depth == DIMENSION:
            hits.append(tuple(values))
            return
        for value in range(-radius, radius + 1):
            values[depth] = value
            if fits(depth):
                descend(depth + 1)
        values[depth] = 0

    descend(0)
    logger.info("區塊 %s 方框稽核：半徑 %d，%d 個節點", system.block, radius, nodes)
    return AuditReport(
        block=system.block,
        center=center,
        radius=radius,
        nodes=nodes,
        solutions=tuple(sorted(_shift(center, n) for n in hits)),
    )


def enumerate_canonical(p: IntersectionNumbers, workers: int = 1) -> Dict[str, EnumerationResult]:
    """八個標準區塊各自的列舉結果"""
    results = {}
    for block in canonical_blocks():
        system = build_system(block, p)
        results[block.label] = enumerate_solutions(system, assemble(block), workers=workers)
    return results


def summary(
    p: IntersectionNumbers,
    workers: int = 1,
    results: Optional[Dict[str, EnumerationResult]] = None,
) -> Dict[str, int]:
    """計數表，依已發表的欄位順序"""
    if results is None:
        results = enumerate_canonical(p, workers)
    return {label: results[label].count for label in SUMMARY_ORDER}


def case_partition(result: EnumerationResult) -> Dict[Tuple[int, int, int, int], List[NullCoefficients]]:
    """依 (a, b, c, a′) 分組"""
    cases: Dict[Tuple[int, int, int, int], List[NullCoefficients]] = {}
    for t in result.tuples:
        cases.setdefault((t.a, t.b, t.c, t.a_prime), []).append(t)
    # a 由大到小，其餘遞增（與已發表的分案順序一致）
    return dict(sorted(cases.items(), key=lambda item: (-item[0][0], item[0][1:])))


def orbit_counts(
    results: Dict[str, EnumerationResult], p: IntersectionNumbers
) -> Tuple[Dict[str, int], List[str]]:
    """經 S₃ 把標準區塊的解搬到全部 23 個區塊，並逐一驗證"""
    images: Dict[BlockId, set] = {}
    for label, result in results.items():
        block = BlockId.parse(label)
        for sigma in PERMUTATIONS:
            for x in result.solutions:
                image, moved = apply_symmetry(sigma, block, x)
                images.setdefault(image, set()).add(moved)

    problems = []
    for image, solutions in sorted(images.items()):
        system = build_system(image, p)
        cons = assemble(image)
        for x in sorted(solutions):
            for problem in verify_solution(system, cons, x):
                problems.append(f"區塊 {image}: {problem}")
    counts = {image.label: len(solutions) for image, solutions in sorted(images.items())}
    return counts, problems


def discussion_report(result: EnumerationResult) -> Dict[str, Any]:
    """區塊 221 上 x(3,3,1) 與 x(2,2,1) 的交叉檢查"""
    x331 = [x[24] for x in result.solutions]
    pairs = [(x[12], x[24]) for x in result.solutions]
    at_two = [x13 - x25 for x13, x25 in pairs if x25 == 2]
    report = {
        'block': result.block.label,
        'x331_values': sorted(x331, reverse=True),
        'x221_x331_pairs': [list(pair) for pair in pairs],
        'difference_at_two': at_two[0] if len(at_two) == 1 else None,
        'x132_always_zero': all(x[7] == 0 for x in result.solutions),
        'x333_always_zero': all(x[26] == 0 for x in result.solutions),
    }
    report['passed'] = (
        sorted(x331) == [0, 1, 2]
        and at_two == [49]
        and report['x132_always_zero']
        and report['x333_always_zero']
    )
    if not report['passed']:
        logger.warning("區塊 %s 交叉檢查未通過: %s", result.block, report)
    return report
