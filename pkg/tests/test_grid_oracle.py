"""
網格模型測試
"""

import pytest
import sys
import os

# 添加專案根目錄到 Python 路徑
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.errors import GridError, Unrealizable
from src.generators.block_generator import BlockId
from src.oracles.grid_oracle import (
    GridModel,
    common_linemates,
    grid_decomposition,
    lemma2_expected,
    lemma2_table,
    lemma3a_partial,
    lemma3b_candidates,
    place_pattern,
)


class TestGridModel:
    """測試車圖模型"""

    def test_too_small(self):
        """測試網格太小"""
        with pytest.raises(GridError):
            GridModel(3)

    def test_lines(self):
        """測試 2n 條格線"""
        lines = GridModel(5).lines()
        assert len(lines) == 10
        assert all(len(line) == 5 for line in lines)

    def test_linemates(self):
        """測試線伴"""
        model = GridModel(5)
        assert model.are_linemates((1, 1), (1, 4))
        assert model.are_linemates((2, 3), (5, 3))
        assert not model.are_linemates((1, 1), (2, 2))
        assert not model.are_linemates((1, 1), (1, 1))
        assert len(model.linemates((3, 3))) == 8

    def test_graph(self):
        """測試 K_n □ K_n"""
        graph = GridModel(4).graph()
        assert graph.number_of_nodes() == 16
        assert all(degree == 6 for _, degree in graph.degree())


class TestPlacePattern:
    """測試共線模式擺放"""

    @pytest.mark.parametrize("label", ["222", "322", "332", "333"])
    def test_realizes_pattern(self, label):
        """測試擺放符合模式"""
        model = GridModel(6)
        u, v, w = place_pattern(6, BlockId.parse(label))
        found = (model.are_linemates(v, w), model.are_linemates(u, w), model.are_linemates(u, v))
        assert found == tuple(value == 3 for value in BlockId.parse(label).as_tuple())

    def test_ordered_pattern(self):
        """測試非排序的模式 (2, 3, 2)"""
        model = GridModel(5)
        u, v, w = place_pattern(5, BlockId(2, 3, 2))
        assert model.are_linemates(u, w)
        assert not model.are_linemates(v, w)
        assert not model.are_linemates(u, v)

    def test_unrealizable(self):
        """測試含 1 的模式"""
        with pytest.raises(Unrealizable):
            place_pattern(5, BlockId(1, 2, 2))


class TestLemma2:
    """測試共同線伴計數"""

    @pytest.mark.parametrize("n", range(4, 13))
    def test_table(self, n):
        """測試 0 / 1 / 0 / n−3"""
        table = lemma2_table(n)
        assert {label: row['count'] for label, row in table.items()} == {
            '222': 0, '322': 1, '332': 0, '333': n - 3,
        }
        assert all(row['count'] == row['expected'] for row in table.values())

    def test_full_size(self):
        """測試 n = 56"""
        table = lemma2_table(56)
        assert table['333']['count'] == 53
        assert table['322']['count'] == 1
        assert table['222']['count'] == 0
        assert table['332']['count'] == 0

    def test_expected(self):
        """測試預期值"""
        assert lemma2_expected(BlockId(3, 3, 3), 56) == 53
        assert lemma2_expected(BlockId(2, 3, 2), 56) == 1

    def test_bad_vertices(self):
        """測試重複或超出範圍的頂點"""
        with pytest.raises(GridError):
            common_linemates(5, (1, 1), (1, 1), (2, 2))
        with pytest.raises(GridError):
            common_linemates(5, (1, 1), (6, 1), (2, 2))


class TestLemma3:
    """測試不共線點對的候選數"""

    @pytest.mark.parametrize("n", [5, 7, 10])
    def test_two_candidates(self, n):
        """測試不共線的點對恰有 2 個共同線伴"""
        model = GridModel(n)
        u = (2, 3)
        for v in model.vertices():
            if v != u and not model.are_linemates(u, v):
                assert lemma3b_candidates(n, u, v) == 2

    def test_collinear_pair(self):
        """測試共線的點對"""
        assert lemma3b_candidates(6, (1, 1), (1, 2)) == 4

    def test_partial_matching_check(self):
        """測試平行格線間的隨機匹配"""
        report = lemma3a_partial(8, trials=50, seed=1)
        assert report['consistent'] > 0
        assert report['passed'] == report['consistent']
        assert report == lemma3a_partial(8, trials=50, seed=1)


class TestDecomposition:
    """測試由極大團還原格線"""

    @pytest.mark.parametrize("n", range(4, 13))
    def test_rows_and_columns(self, n):
        """測試 n 列 n 行且兩兩交於一點"""
        decomposition = grid_decomposition(n)
        assert decomposition.rows == n
        assert decomposition.columns == n
        assert decomposition.meets_once
        assert decomposition.linemate_degree == 2 * (n - 1)
        assert decomposition.passed
