"""
已存結果載入
data/fixtures.yaml（特解）與 data/expectations.yaml（計數、列表、參考值）
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Sequence, Tuple, Union

import yaml

from src.errors import DataFileError
from src.generators.block_generator import VARIABLE_COUNT
from src.lattice.nullspace import COEFFICIENT_NAMES

FIXTURES_FILE = "fixtures.yaml"
EXPECTATIONS_FILE = "expectations.yaml"


def _read_yaml(path: Path) -> Any:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return yaml.safe_load(f)
    except FileNotFoundError as e:
        raise DataFileError(f"找不到資料檔: {path}") from e
    except yaml.YAMLError as e:
        raise DataFileError(f"資料檔格式錯誤 {path}: {e}") from e


def load_fixtures(data_dir: Union[str, Path]) -> Dict[str, Tuple[int, ...]]:
    """區塊標籤 → 27 個整數的特解"""
    path = Path(data_dir) / FIXTURES_FILE
    raw = _read_yaml(path)
    if not isinstance(raw, dict):
        raise DataFileError(f"{path} 應為 區塊 → 向量 的對應表")
    fixtures = {}
    for label, values in raw.items():
        if not isinstance(values, list) or len(values) != VARIABLE_COUNT:
            raise DataFileError(f"{path} 區塊 {label} 需要 27 個整數")
        try:
            fixtures[str(label)] = tuple(int(v) for v in values)
        except (TypeError, ValueError) as e:
            raise DataFileError(f"{path} 區塊 {label} 含非整數: {values}") from e
    return fixtures


def to_standard_order(row: Sequence[int], column_order: Union[str, Sequence[str]]) -> Tuple[int, ...]:
    """把以其他欄位順序列出的係數改成 (a, b, c, d, a′, b′, c′, d′)"""
    if column_order == 'standard':
        return tuple(int(v) for v in row)
    columns = list(column_order)
    if sorted(columns) != sorted(COEFFICIENT_NAMES) or len(row) != len(columns):
        raise DataFileError(f"無法辨識的欄位順序: {column_order}")
    values = dict(zip(columns, row))
    return tuple(int(values[name]) for name in COEFFICIENT_NAMES)


@dataclass(frozen=True)
class Expectations:
    """比對層使用的已發表數值"""

    array: str
    multiplicities: Tuple[int, ...]
    reference_p: Dict[int, List[List[int]]]
    known_mismatches: List[Tuple[int, int, int]]
    counts: Dict[str, int]
    lemma2_values: Dict[str, int]
    listings: Dict[str, List[Tuple[int, ...]]]
    case_sizes: Dict[str, List[int]] = field(default_factory=dict)
    discussion: Dict[str, Any] = field(default_factory=dict)


def load_expectations(data_dir: Union[str, Path]) -> Expectations:
    path = Path(data_dir) / EXPECTATIONS_FILE
    raw = _read_yaml(path)
    try:
        listings = {}
        case_sizes = {}
        for label, listing in raw['listings'].items():
            order = listing.get('column_order', 'standard')
            listings[str(label)] = [to_standard_order(row, order) for row in listing['rows']]
            if 'case_sizes' in listing:
                case_sizes[str(label)] = [int(v) for v in listing['case_sizes']]
        return Expectations(
            array=str(raw['array']),
            multiplicities=tuple(int(v) for v in raw['multiplicities']),
            reference_p={int(z): rows for z, rows in raw['reference_p'].items()},
            known_mismatches=[tuple(int(v) for v in item) for item in raw['known_reference_mismatches']],
            counts={str(k): int(v) for k, v in raw['counts'].items()},
            lemma2_values={str(k): int(v) for k, v in raw['lemma2_values'].items()},
            listings=listings,
            case_sizes=case_sizes,
            discussion=dict(raw.get('discussion', {})),
        )
    except (KeyError, TypeError, AttributeError) as e:
        raise DataFileError(f"{path} 缺少欄位或格式錯誤: {e}") from e
