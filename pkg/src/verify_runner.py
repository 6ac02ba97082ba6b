"""
驗證執行器 - 以已存的特解與已發表數值逐項檢查計算層
"""

import logging
from pathlib import Path
from typing import Any, Callable, Dict, List, Tuple, Union

import numpy as np
import sympy

from src.constraints.constraint_builder import assemble, lemma2_value
from src.errors import WorkbenchError
from src.generators.block_generator import (
    BlockId,
    build_system,
    canonical_blocks,
    coefficient_matrix,
    matrix_rank,
)
from src.lattice.nullspace import affine_functionals, null_basis_matrix
from src.models.expectations import Expectations, load_expectations, load_fixtures
from src.models.intersection import (
    compare_with_reference,
    intersection_numbers,
    multiplicities,
    parse_array,
)
from src.oracles.grid_oracle import GridModel, grid_decomposition, lemma2_table, lemma3b_candidates
from src.solvers.lattice_solver import verify_solution

logger = logging.getLogger(__name__)

# 直接在實際大小上檢查一次
FULL_GRID_SIZE = 56
EXPECTED_RANK = 19


class VerifyRunner:
    """驗證執行器"""

    def __init__(self, data_dir: Union[str, Path], grid_range: Tuple[int, int] = (5, 10)):
        self.data_dir = Path(data_dir)
        self.grid_range = grid_range
        self.results: List[Dict[str, Any]] = []

    def _record(self, check_id: str, title: str, problems: List[str]) -> Dict[str, Any]:
        result = {
            'id': check_id,
            'title': title,
            'success': not problems,
            'error': "; ".join(problems) if problems else None,
        }
        self.results.append(result)
        if problems:
            logger.warning("❌ %s: %s", check_id, result['error'])
        else:
            logger.info("✅ %s", check_id)
        return result

    def _run(self, check_id: str, title: str, check: Callable[[], List[str]]) -> Dict[str, Any]:
        try:
            problems = check()
        except WorkbenchError as e:
            problems = [str(e)]
        return self._record(check_id, title, problems)

    def check_fixture(self, label: str, x: Tuple[int, ...], p) -> List[str]:
        """殘差為零、滿足約束、必為零的變數為零"""
        block = BlockId.parse(label)
        system = build_system(block, p)
        problems = verify_solution(system, assemble(block), x)
        problems += [
            f"必為零的 x({k}) = {x[k - 1]}"
            for k in sorted(system.forced_zero)
            if len(x) >= k and x[k - 1] != 0
        ]
        return problems

    def check_null_basis(self) -> List[str]:
        problems = []
        M = coefficient_matrix()
        C = null_basis_matrix()
        if np.any(M @ C):
            bad = [k + 1 for k in range(C.shape[1]) if np.any(M @ C[:, k])]
            problems.append(f"基底向量 {bad} 不在零空間內")
        if sympy.Matrix(C.tolist()).rank() != C.shape[1]:
            problems.append("零空間基底線性相依")
        rank = matrix_rank()
        if rank != EXPECTED_RANK:
            problems.append(f"rank(M) = {rank} ≠ {EXPECTED_RANK}")
        return problems

    def check_entry27(self) -> List[str]:
        """第 27 個仿射條件的係數全為 −1，也就是 −Σn"""
        coeffs = affine_functionals([0] * 27)[26].coeffs
        if any(c != -1 for c in coeffs):
            return [f"第 27 個條件的係數為 {coeffs}"]
        return []

    def check_reference_p(self, p, expectations: Expectations) -> List[str]:
        diagnostics = compare_with_reference(p, expectations.reference_p)
        found = sorted(
            (d.detail['Z'], d.detail['X'], d.detail['Y']) for d in diagnostics
        )
        known = sorted(tuple(item) for item in expectations.known_mismatches)
        if found != known:
            return [f"與參考值不一致的項目為 {found}，已知誤植為 {known}"]
        return []

    def check_multiplicities(self, expectations: Expectations) -> List[str]:
        k = multiplicities(parse_array(expectations.array)).k
        if tuple(k) != tuple(expectations.multiplicities):
            return [f"k = {k}，預期 {expectations.multiplicities}"]
        return []

    def check_lemma2_values(self, expectations: Expectations) -> List[str]:
        return [
            f"區塊 {label}: x(27) = {lemma2_value(BlockId.parse(label))}，預期 {value}"
            for label, value in sorted(expectations.lemma2_values.items())
            if lemma2_value(BlockId.parse(label)) != value
        ]

    def check_grid(self, n: int) -> List[str]:
        problems = [
            f"n={n} 模式 {label}: 計數 {row['count']}，預期 {row['expected']}"
            for label, row in lemma2_table(n).items()
            if row['count'] != row['expected']
        ]
        if n == FULL_GRID_SIZE:
            return problems

        model = GridModel(n)
        u = (1, 1)
        for v in model.vertices():
            if v == u or model.are_linemates(u, v):
                continue
            candidates = lemma3b_candidates(n, u, v)
            if candidates != 2:
                problems.append(f"n={n} {u}, {v}: {candidates} 個共同線伴，預期 2")
        decomposition = grid_decomposition(n)
        if not decomposition.passed:
            problems.append(f"n={n} 格線分解失敗: {decomposition}")
        return problems

    def run_all_checks(self) -> Dict[str, Any]:
        """執行所有驗證項目"""
        self.results = []
        logger.info("🚀 開始執行驗證")

        try:
            expectations = load_expectations(self.data_dir)
            fixtures = load_fixtures(self.data_dir)
        except WorkbenchError as e:
            self._record('data-files', "讀取資料檔", [str(e)])
            return self._summarize()

        p = intersection_numbers(parse_array(expectations.array))

        for block in canonical_blocks():
            label = block.label
            if label not in fixtures:
                self._record(f"fixture-{label}", f"區塊 {label} 的特解", ["資料檔中沒有此區塊"])
                continue
            self._run(
                f"fixture-{label}",
                f"區塊 {label} 的特解",
                lambda label=label: self.check_fixture(label, fixtures[label], p),
            )

        self._run('null-basis', "零空間基底與 rank(M)", self.check_null_basis)
        self._run('entry-27', "第 27 個條件等於 −Σn", self.check_entry27)
        self._run('reference-p', "交集數參考值", lambda: self.check_reference_p(p, expectations))
        self._run('multiplicities', "重數 k", lambda: self.check_multiplicities(expectations))
        self._run('lemma2-values', "x(27) 固定值", lambda: self.check_lemma2_values(expectations))

        low, high = self.grid_range
        for n in sorted(set(range(low, high + 1)) | {FULL_GRID_SIZE}):
            self._run(f"grid-{n}", f"{n}×{n} 網格模型", lambda n=n: self.check_grid(n))

        return self._summarize()

    def _summarize(self) -> Dict[str, Any]:
        total = len(self.results)
        passed = sum(1 for r in self.results if r['success'])
        failed = total - passed
        logger.info("📊 驗證完成: ✅ 通過 %d，❌ 失敗 %d", passed, failed)
        return {
            'success': failed == 0,
            'summary': {
                'total_checks': total,
                'passed_checks': passed,
                'failed_checks': failed,
                'success_rate': (passed / total * 100) if total > 0 else 0,
            },
            'results': list(self.results),
        }

    def failed_checks(self) -> List[Dict[str, Any]]:
        return [r for r in self.results if not r['success']]
