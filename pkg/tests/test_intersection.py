"""
交集數測試
"""

import pytest
import sys
import os

import networkx as nx
import numpy as np

# 添加專案根目錄到 Python 路徑
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.config import DEFAULT_ARRAY, PROJECT_ROOT
from src.errors import ArrayParseError, InfeasibleArray, NonIntegralMultiplicity
from src.models.expectations import load_expectations
from src.models.intersection import (
    check_invariants,
    compare_with_reference,
    intersection_numbers,
    intersection_numbers_from_graph,
    multiplicities,
    parse_array,
)


@pytest.fixture(scope="module")
def p():
    return intersection_numbers(parse_array(DEFAULT_ARRAY))


class TestParseArray:
    """測試交集陣列解析"""

    def test_default_array(self):
        """測試預設陣列"""
        arr = parse_array("55,54,2;1,1,54")
        assert arr.b == (55, 54, 2)
        assert arr.c == (1, 1, 54)
        assert arr.degree == 55
        assert arr.a == (0, 52, 1)

    def test_whitespace(self):
        """測試容許空白"""
        assert parse_array(" 2, 1, 1 ; 1, 1, 1 ").b == (2, 1, 1)

    def test_malformed(self):
        """測試格式錯誤"""
        with pytest.raises(ArrayParseError):
            parse_array("55,54;1,1,54")
        with pytest.raises(ArrayParseError):
            parse_array("a,b,c;1,1,1")

    def test_infeasible(self):
        """測試不合法的陣列"""
        with pytest.raises(InfeasibleArray):
            parse_array("2,3,1;1,1,1")
        with pytest.raises(InfeasibleArray):
            parse_array("3,2,1;2,2,2")


class TestMultiplicities:
    """測試重數"""

    def test_default(self):
        """測試預設實例"""
        assert multiplicities(parse_array(DEFAULT_ARRAY)).k == (1, 55, 2970, 110)
        assert multiplicities(parse_array(DEFAULT_ARRAY)).total == 3136

    def test_seven_cycle(self):
        """測試 7-圈"""
        assert multiplicities(parse_array("2,1,1;1,1,1")).k == (1, 2, 2, 2)

    def test_non_integral(self):
        """測試非整數重數"""
        with pytest.raises(NonIntegralMultiplicity) as info:
            multiplicities(parse_array("4,3,1;1,2,4"))
        assert info.value.index == 3


class TestIntersectionNumbers:
    """測試交集數遞推"""

    def test_p1(self, p):
        """測試 p¹"""
        assert p.matrix(1) == [[0, 54, 0], [54, 2808, 108], [0, 108, 2]]

    def test_p2(self, p):
        """測試 p²（(2,1) 項為 52）"""
        assert p.matrix(2) == [[1, 52, 2], [52, 2811, 106], [2, 106, 2]]

    def test_p3(self, p):
        """測試 p³"""
        assert p.matrix(3) == [[0, 54, 1], [54, 2862, 54], [1, 54, 54]]

    def test_symmetry_and_row_sums(self, p):
        """測試對稱與列和"""
        for z in range(4):
            assert np.array_equal(p.table[z], p.table[z].T)
            for x in range(4):
                assert int(p.table[z, x].sum()) == p.k[x]
        assert check_invariants(np.asarray(p.table), p.k) == []

    def test_call(self, p):
        """測試 p(z, x, y) 取值"""
        assert p(1, 2, 2) == 2808
        assert p(2, 0, 2) == 1

    @pytest.mark.parametrize("array, graph", [
        ("2,1,1;1,1,1", nx.cycle_graph(7)),
        ("2,1,1;1,1,2", nx.cycle_graph(6)),
        ("3,2,2;1,1,3", nx.heawood_graph()),
        ("3,2,1;1,2,3", nx.hypercube_graph(3)),
    ])
    def test_against_brute_force(self, array, graph):
        """測試與暴力計數一致"""
        computed = intersection_numbers(parse_array(array))
        counted = intersection_numbers_from_graph(graph)
        assert np.array_equal(computed.table, counted.table)
        assert computed.k == counted.k


class TestLargeArray:
    """測試大數值陣列的精確計算"""

    B = 3000000

    @pytest.fixture
    def big(self):
        return intersection_numbers(parse_array("3000000,2999999,2999998;1,1,1"))

    def test_multiplicities(self, big):
        """測試 k 不溢位"""
        B = self.B
        assert big.k == (1, B, B * (B - 1), B * (B - 1) * (B - 2))
        assert big.k[3] > 2 ** 63

    def test_exact_values(self, big):
        """測試超過 int64 範圍的交集數"""
        B = self.B
        assert big(0, 3, 3) == big.k[3]
        assert big(1, 3, 3) == (B - 1) ** 2 * (B - 2)
        assert big(1, 2, 3) == (B - 1) * (B - 2)
        assert big(2, 2, 3) == B * (B - 2)
        assert big(3, 2, 3) == (B - 1) ** 2 - 2
        assert big(2, 3, 3) == (B - 2) * ((B - 1) ** 2 - 2)

    def test_invariants(self, big):
        """測試對稱與列和以精確整數成立"""
        assert check_invariants(np.asarray(big.table), big.k) == []


class TestBruteForce:
    """測試暴力計數的錯誤路徑"""

    def test_not_distance_regular(self):
        """測試非距離正則圖"""
        with pytest.raises(InfeasibleArray):
            intersection_numbers_from_graph(nx.path_graph(4))

    def test_disconnected(self):
        """測試不連通圖"""
        graph = nx.disjoint_union(nx.cycle_graph(7), nx.cycle_graph(7))
        with pytest.raises(InfeasibleArray):
            intersection_numbers_from_graph(graph)

    def test_wrong_diameter(self):
        """測試直徑不是 3"""
        with pytest.raises(InfeasibleArray):
            intersection_numbers_from_graph(nx.petersen_graph())


class TestReferenceComparison:
    """測試與參考值比對"""

    def test_single_known_mismatch(self, p):
        """測試只有 p² 的 (2,1) 項不一致"""
        expectations = load_expectations(PROJECT_ROOT / "data")
        diagnostics = compare_with_reference(p, expectations.reference_p)
        assert len(diagnostics) == 1
        diagnostic = diagnostics[0]
        assert diagnostic.code == 'reference-p-mismatch'
        assert diagnostic.detail == {'Z': 2, 'X': 2, 'Y': 1, 'reference': 54, 'computed': 52}

    def test_clean_reference(self, p):
        """測試與自身比對沒有診斷"""
        reference = {z: p.matrix(z) for z in (1, 2, 3)}
        assert compare_with_reference(p, reference) == []
