"""
格式轉換器
將計算結果轉換為 table / json / tsv 文字（固定寬度、無時間戳，輸出逐位元組可重現）
"""

import io
import json
from typing import Any, Dict, List, Mapping, Sequence

from rich.table import Table

from src.console import make_console
from src.lattice.nullspace import COEFFICIENT_NAMES
from src.models.intersection import IntersectionNumbers
from src.solvers.lattice_solver import EnumerationResult

_PRIME_HEADERS = tuple(name.replace("'", "′") for name in COEFFICIENT_NAMES)


class FormatConverter:
    """格式轉換器"""

    def __init__(self):
        self.supported_formats = ['table', 'json', 'tsv']

    def _check(self, fmt: str) -> None:
        if fmt not in self.supported_formats:
            raise ValueError(f"不支援的輸出格式: {fmt}")

    def _render(self, *tables: Table) -> str:
        buffer = io.StringIO()
        console = make_console(buffer)
        for table in tables:
            console.print(table)
        return buffer.getvalue()

    @staticmethod
    def to_json(data: Any) -> str:
        return json.dumps(data, ensure_ascii=False, indent=2) + "\n"

    @staticmethod
    def _tsv(rows: Sequence[Sequence[Any]]) -> str:
        return "".join("\t".join(str(v) for v in row) + "\n" for row in rows)

    def convert_pnums(self, p: IntersectionNumbers, fmt: str = 'table') -> str:
        """重數 k 與 p¹, p², p³"""
        self._check(fmt)
        if fmt == 'json':
            return self.to_json(p.to_dict())
        if fmt == 'tsv':
            rows: List[List[Any]] = [['k'] + list(p.k)]
            for z in (1, 2, 3):
                rows += [[f"p{z}", x] + row for x, row in enumerate(p.matrix(z), start=1)]
            return self._tsv(rows)

        tables = []
        k_table = Table(title="重數 k", show_header=True)
        for index in range(len(p.k)):
            k_table.add_column(f"k{index}", justify='right')
        k_table.add_row(*(str(v) for v in p.k))
        tables.append(k_table)
        for z in (1, 2, 3):
            table = Table(title=f"p^{z}", show_header=True)
            table.add_column("X\\Y", justify='right')
            for y in (1, 2, 3):
                table.add_column(str(y), justify='right')
            for x, row in enumerate(p.matrix(z), start=1):
                table.add_row(str(x), *(str(v) for v in row))
            tables.append(table)
        return self._render(*tables)

    def convert_enumeration(self, result: EnumerationResult, fmt: str = 'table') -> str:
        """係數列表（與手算列表相同的欄位排列）"""
        self._check(fmt)
        if fmt == 'json':
            return self.to_json(result.to_dict())
        if fmt == 'tsv':
            header = list(_PRIME_HEADERS) + [f"x{k}" for k in range(1, 28)]
            return self._tsv([header] + [list(t) + list(x) for t, x in zip(result.tuples, result.solutions)])

        table = Table(title=f"區塊 {result.block}：{result.count} 個解", show_header=True)
        for name in _PRIME_HEADERS:
            table.add_column(name, justify='right')
        table.add_column("x", justify='left')
        for t, x in zip(result.tuples, result.solutions):
            table.add_row(*(str(v) for v in t), " ".join(str(v) for v in x))
        return self._render(table)

    def convert_summary(self, counts: Mapping[str, int], fmt: str = 'table') -> str:
        """計數表：Block 一列、Count 一列"""
        self._check(fmt)
        if fmt == 'json':
            return self.to_json({'counts': dict(counts), 'total': sum(counts.values())})
        if fmt == 'tsv':
            return self._tsv([['Block'] + list(counts), ['Count'] + list(counts.values())])

        table = Table(show_header=True)
        table.add_column("Block")
        for label in counts:
            table.add_column(label, justify='right')
        table.add_row("Count", *(str(v) for v in counts.values()))
        return self._render(table)

    def convert_mapping(self, data: Mapping[str, Any], fmt: str = 'table', title: str = "") -> str:
        """一般的鍵值結果（驗證、網格、搜尋）"""
        self._check(fmt)
        if fmt == 'json':
            return self.to_json(dict(data))
        flat = self._flatten(data)
        if fmt == 'tsv':
            return self._tsv(flat)

        table = Table(title=title or None, show_header=False)
        table.add_column("key")
        table.add_column("value")
        for key, value in flat:
            table.add_row(key, value)
        return self._render(table)

    def _flatten(self, data: Mapping[str, Any], prefix: str = "") -> List[List[str]]:
        rows = []
        for key, value in data.items():
            name = f"{prefix}{key}"
            if isinstance(value, dict):
                rows += self._flatten(value, prefix=f"{name}.")
            elif isinstance(value, (list, tuple)):
                rows.append([name, json.dumps(value, ensure_ascii=False)])
            else:
                rows.append([name, str(value)])
        return rows
