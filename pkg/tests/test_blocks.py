"""
區塊系統測試
"""

import pytest
import sys
import os

import numpy as np

# 添加專案根目錄到 Python 路徑
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.config import DEFAULT_ARRAY, PROJECT_ROOT
from src.errors import InadmissibleBlock, NegativeRhs, OutOfRange
from src.generators.block_generator import (
    PERMUTATIONS,
    BlockId,
    admissible_blocks,
    apply_symmetry,
    build_rhs,
    build_system,
    canonical_blocks,
    canonical_of,
    coefficient_matrix,
    forced_zero_variables,
    matrix_rank,
    orbit,
    var_index,
    var_triple,
    zero_entries,
)
from src.models.expectations import load_fixtures
from src.models.intersection import intersection_numbers, parse_array


@pytest.fixture(scope="module")
def p():
    return intersection_numbers(parse_array(DEFAULT_ARRAY))


@pytest.fixture(scope="module")
def fixtures():
    return load_fixtures(PROJECT_ROOT / "data")


class TestVariableIndex:
    """測試變數編號"""

    def test_lexicographic(self):
        """測試字典序位置"""
        assert var_index((1, 1, 1)) == 1
        assert var_index((1, 3, 3)) == 9
        assert var_index((2, 2, 1)) == 13
        assert var_index((3, 3, 1)) == 25
        assert var_index((3, 3, 3)) == 27

    def test_inverse(self):
        """測試反查"""
        for k in range(1, 28):
            assert var_index(var_triple(k)) == k

    def test_out_of_range(self):
        """測試超出範圍"""
        with pytest.raises(OutOfRange):
            var_index((0, 1, 1))
        with pytest.raises(OutOfRange):
            var_triple(28)


class TestBlocks:
    """測試區塊列舉"""

    def test_admissible_count(self):
        """測試 23 個可允許區塊"""
        assert len(admissible_blocks()) == 23
        assert BlockId(1, 1, 1) not in admissible_blocks()
        assert BlockId(3, 1, 1) not in admissible_blocks()

    def test_canonical(self):
        """測試 8 個標準區塊"""
        labels = [b.label for b in canonical_blocks()]
        assert labels == ['211', '221', '222', '321', '322', '331', '332', '333']

    def test_orbit(self):
        """測試 S3 軌道"""
        assert [b.label for b in orbit(BlockId(2, 1, 1))] == ['112', '121', '211']
        assert [b.label for b in orbit(BlockId(3, 2, 1))] == ['123', '132', '213', '231', '312', '321']
        assert orbit(BlockId(3, 3, 3)) == [BlockId(3, 3, 3)]
        assert sum(len(orbit(b)) for b in canonical_blocks()) == 23

    def test_canonical_of(self):
        """測試標準代表"""
        assert canonical_of(BlockId(1, 3, 2)) == BlockId(3, 2, 1)

    def test_parse(self):
        """測試標籤解析"""
        assert BlockId.parse("322") == BlockId(3, 2, 2)
        with pytest.raises(OutOfRange):
            BlockId.parse("32")
        with pytest.raises(OutOfRange):
            BlockId.parse("402")


class TestCoefficientMatrix:
    """測試係數矩陣"""

    def test_shape_and_rank(self):
        """測試形狀與秩"""
        M = coefficient_matrix()
        assert M.shape == (27, 27)
        assert matrix_rank() == 19

    def test_row_structure(self):
        """測試每列有三個 1"""
        M = coefficient_matrix()
        assert set(np.unique(M)) == {0, 1}
        assert all(int(row.sum()) == 3 for row in M)
        assert all(int(column.sum()) == 3 for column in M.T)


class TestRhs:
    """測試右手邊"""

    def test_inadmissible(self, p):
        """測試不可允許區塊"""
        with pytest.raises(InadmissibleBlock):
            build_rhs(BlockId(1, 1, 1), p)
        with pytest.raises(InadmissibleBlock):
            forced_zero_variables(BlockId(3, 1, 1))

    def test_nonnegative(self, p):
        """測試所有可允許區塊的右手邊非負"""
        for block in admissible_blocks():
            assert min(build_rhs(block, p)) >= 0

    def test_negative_rhs(self):
        """測試 7-圈的參數在區塊 222 出現負的右手邊"""
        small = intersection_numbers(parse_array("2,1,1;1,1,1"))
        with pytest.raises(NegativeRhs):
            build_rhs(BlockId(2, 2, 2), small)


class TestFixtures:
    """測試已存特解"""

    def test_residual_zero(self, p, fixtures):
        """測試特解的殘差為零"""
        for label, x in fixtures.items():
            system = build_system(BlockId.parse(label), p)
            assert system.residual(x) == (0,) * 27, label

    def test_forced_zeros(self, p, fixtures):
        """測試必為零的變數在特解中為零"""
        for label, x in fixtures.items():
            forced = forced_zero_variables(BlockId.parse(label))
            assert forced <= set(zero_entries(x)), label

    def test_symmetry_images(self, p, fixtures):
        """測試 S3 的像仍是像區塊的解"""
        for label, x in fixtures.items():
            for sigma in PERMUTATIONS:
                image, moved = apply_symmetry(sigma, BlockId.parse(label), x)
                assert build_system(image, p).residual(moved) == (0,) * 27

    def test_bad_sigma(self, fixtures):
        """測試不合法的排列"""
        with pytest.raises(OutOfRange):
            apply_symmetry((0, 0, 1), BlockId(2, 1, 1), fixtures['211'])
