"""
約束組裝
非負、必為零、x(3,3,3) 的固定值與零星約束
"""

from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from src.errors import ConstraintConflict, OutOfRange
from src.generators.block_generator import (
    VARIABLE_COUNT,
    BlockId,
    forced_zero_variables,
    var_index,
    var_triple,
)

# Γ3 ≅ K56 □ K56 的格線長度
GRID_LINE_SIZE = 56

# 區塊 222 中上界為 2 的六個變數
_LEMMA3B_TRIPLES = ((1, 3, 3), (2, 3, 3), (3, 1, 3), (3, 2, 3), (3, 3, 1), (3, 3, 2))


def _check_index(index: int) -> None:
    if not 1 <= index <= VARIABLE_COUNT:
        raise OutOfRange(f"變數索引必須在 1..27 內: {index}")


@dataclass(frozen=True)
class FixedValue:
    index: int
    value: int
    kind = 'fixed'

    def to_dict(self) -> Dict[str, Any]:
        return {'kind': self.kind, 'index': self.index, 'value': self.value}


@dataclass(frozen=True)
class UpperBound:
    index: int
    bound: int
    kind = 'upper'

    def to_dict(self) -> Dict[str, Any]:
        return {'kind': self.kind, 'index': self.index, 'value': self.bound}


@dataclass(frozen=True)
class NonNegative:
    index: int
    kind = 'nonneg'

    def to_dict(self) -> Dict[str, Any]:
        return {'kind': self.kind, 'index': self.index, 'value': 0}


Constraint = Union[FixedValue, UpperBound, NonNegative]


@dataclass(frozen=True)
class ConstraintSet:
    """一個區塊的完整約束"""

    block: BlockId
    constraints: Tuple[Constraint, ...]

    def __post_init__(self):
        fixed: Dict[int, int] = {}
        for item in self.constraints:
            _check_index(item.index)
            if isinstance(item, FixedValue):
                if item.value < 0:
                    raise ConstraintConflict(f"固定值必須非負: {item}")
                if item.index in fixed:
                    raise ConstraintConflict(f"變數 {item.index} 被固定兩次")
                fixed[item.index] = item.value
            elif isinstance(item, UpperBound) and item.bound < 0:
                raise ConstraintConflict(f"上界必須非負: {item}")

    def fixed(self) -> Dict[int, int]:
        return {c.index: c.value for c in self.constraints if isinstance(c, FixedValue)}

    def bounds(self) -> Tuple[List[int], List[Optional[int]]]:
        """每個變數的 [lo, hi] 區間，hi 為 None 表示無上界"""
        lo: List[int] = [0] * VARIABLE_COUNT
        hi: List[Optional[int]] = [None] * VARIABLE_COUNT
        for item in self.constraints:
            k = item.index - 1
            if isinstance(item, FixedValue):
                lo[k] = max(lo[k], item.value)
                hi[k] = item.value if hi[k] is None else min(hi[k], item.value)
            elif isinstance(item, UpperBound):
                hi[k] = item.bound if hi[k] is None else min(hi[k], item.bound)
        return lo, hi

    def violations(self, x: Sequence[int]) -> List[str]:
        found = []
        for item in self.constraints:
            value = x[item.index - 1]
            where = f"x({item.index}) = x{var_triple(item.index)}"
            if isinstance(item, FixedValue) and value != item.value:
                found.append(f"{where} = {value}，應固定為 {item.value}")
            elif isinstance(item, UpperBound) and value > item.bound:
                found.append(f"{where} = {value}，超過上界 {item.bound}")
            elif isinstance(item, NonNegative) and value < 0:
                found.append(f"{where} = {value}，違反非負")
        return found

    def to_list(self) -> List[Dict[str, Any]]:
        return [c.to_dict() for c in self.constraints]


def lemma2_value(block: BlockId, line_size: int = GRID_LINE_SIZE) -> int:
    """x(3,3,3,U,V,W) 的固定值，只由 U, V, W 中 3 的個數決定"""
    threes = block.as_tuple().count(3)
    return {0: 0, 1: 1, 2: 0, 3: line_size - 3}[threes]


def lemma3_constraints(block: BlockId) -> List[Constraint]:
    """零星約束（只附加在標準區塊 322 與 222 上）"""
    if block == BlockId(3, 2, 2):
        return [FixedValue(var_index((1, 3, 3)), 1)]
    if block == BlockId(2, 2, 2):
        return [UpperBound(var_index(t), 2) for t in _LEMMA3B_TRIPLES]
    return []


def assemble(block: BlockId, line_size: int = GRID_LINE_SIZE) -> ConstraintSet:
    """非負 + 必為零 + x(27) 固定值 + 零星約束"""
    items: List[Constraint] = [NonNegative(k) for k in range(1, VARIABLE_COUNT + 1)]

    fixed: Dict[int, int] = {}

    def fix(index: int, value: int) -> None:
        if fixed.get(index, value) != value:
            raise ConstraintConflict(
                f"區塊 {block} 的變數 {index} 同時被固定為 {fixed[index]} 與 {value}"
            )
        fixed[index] = value

    for index in sorted(forced_zero_variables(block)):
        fix(index, 0)
    fix(VARIABLE_COUNT, lemma2_value(block, line_size))

    sporadic = lemma3_constraints(block)
    for item in sporadic:
        if isinstance(item, FixedValue):
            fix(item.index, item.value)

    items += [FixedValue(index, value) for index, value in sorted(fixed.items())]
    items += [item for item in sporadic if not isinstance(item, FixedValue)]
    return ConstraintSet(block=block, constraints=tuple(items))
