"""
命令列介面測試
"""

import json
import shutil
import pytest
import sys
import os

import yaml
from click.testing import CliRunner

# 添加專案根目錄到 Python 路徑
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from cli import COUNT, EXIT_BUDGET, EXIT_FAILED, EXIT_OK, EXIT_USAGE, cli
from src.config import PROJECT_ROOT

DATA_DIR = PROJECT_ROOT / "data"


@pytest.fixture
def runner():
    return CliRunner(mix_stderr=False)


def _json(result):
    return json.loads(result.stdout)


class TestPnums:
    """測試 pnums"""

    def test_default(self, runner):
        """測試預設實例"""
        result = runner.invoke(cli, ['pnums', '--format', 'json'])
        assert result.exit_code == EXIT_OK
        data = _json(result)
        assert data['k'] == [1, 55, 2970, 110]
        assert data['p']['1'][1] == [54, 2808, 108]
        assert data['p']['2'][1][0] == 52
        assert len(data['diagnostics']) == 1
        assert data['diagnostics'][0]['detail']['reference'] == 54

    def test_seven_cycle(self, runner):
        """測試 7-圈參數"""
        result = runner.invoke(cli, ['pnums', '--array', '2,1,1;1,1,1', '--format', 'json'])
        assert result.exit_code == EXIT_OK
        assert _json(result)['k'] == [1, 2, 2, 2]
        assert _json(result)['diagnostics'] == []

    def test_table(self, runner):
        """測試表格輸出"""
        result = runner.invoke(cli, ['pnums'])
        assert result.exit_code == EXIT_OK
        assert "2808" in result.stdout

    def test_malformed(self, runner):
        """測試格式錯誤的陣列"""
        assert runner.invoke(cli, ['pnums', '--array', '55,54']).exit_code == EXIT_USAGE

    def test_infeasible(self, runner):
        """測試不可行的陣列"""
        assert runner.invoke(cli, ['pnums', '--array', '2,3,1;1,1,1']).exit_code == EXIT_FAILED

    def test_large_array(self, runner):
        """測試超過 int64 範圍的陣列"""
        result = runner.invoke(cli, ['pnums', '--array', '3000000,2999999,2999998;1,1,1', '--format', 'json'])
        assert result.exit_code == EXIT_OK
        assert _json(result)['k'][3] == 3000000 * 2999999 * 2999998

    def test_invalid_format_env(self, runner):
        """測試環境變數指定不支援的格式"""
        result = runner.invoke(cli, ['pnums'], env={'MOORE57_FORMAT': 'xml'})
        assert result.exit_code == EXIT_USAGE

    def test_output_file(self, runner, tmp_path):
        """測試寫入檔案"""
        target = tmp_path / "out" / "p.json"
        result = runner.invoke(cli, ['pnums', '--format', 'json', '--output', str(target)])
        assert result.exit_code == EXIT_OK
        assert result.stdout == ""
        assert json.loads(target.read_text(encoding='utf-8'))['k'][3] == 110


class TestBlocks:
    """測試 blocks"""

    def test_summary_check(self, runner):
        """測試計數表與已存值一致"""
        result = runner.invoke(cli, ['blocks', 'summary', '--check', '--format', 'json'])
        assert result.exit_code == EXIT_OK
        data = _json(result)
        assert list(data['counts'].values()) == [1, 1, 3, 2, 2, 9, 122, 2]
        assert data['total'] == 142

    def test_summary_tsv(self, runner):
        """測試 TSV 計數表"""
        result = runner.invoke(cli, ['blocks', 'summary', '--format', 'tsv'])
        assert result.stdout.splitlines() == [
            "Block\t333\t211\t221\t321\t331\t322\t222\t332",
            "Count\t1\t1\t3\t2\t2\t9\t122\t2",
        ]

    def test_enumerate_221(self, runner):
        """測試區塊 221 的三個解"""
        result = runner.invoke(cli, ['block', 'enumerate', '221', '--format', 'json'])
        assert result.exit_code == EXIT_OK
        data = _json(result)
        assert data['count'] == 3
        assert {tuple(t) for t in data['tuples']} == {
            (0, 0, 0, 0, 0, 0, 0, 0),
            (0, 0, 0, 0, 0, 0, -1, 1),
            (0, 0, 0, 0, 0, 0, -2, 2),
        }

    def test_enumerate_332(self, runner):
        """測試區塊 332 的兩個解"""
        result = runner.invoke(cli, ['block', 'enumerate', '332', '--format', 'json', '--check'])
        assert result.exit_code == EXIT_OK
        assert _json(result)['count'] == 2

    def test_enumerate_all_check(self, runner):
        """測試全部區塊與已存列表比對"""
        result = runner.invoke(cli, ['blocks', 'enumerate', 'all', '--check', '--format', 'json'])
        assert result.exit_code == EXIT_OK
        assert _json(result)['222']['count'] == 122

    def test_deterministic(self, runner):
        """測試相同呼叫輸出相同"""
        args = ['blocks', 'enumerate', '322', '--format', 'json']
        assert runner.invoke(cli, args).stdout == runner.invoke(cli, args).stdout

    def test_unknown_block(self, runner):
        """測試未知的區塊標籤"""
        assert runner.invoke(cli, ['blocks', 'enumerate', '999']).exit_code == EXIT_USAGE
        assert runner.invoke(cli, ['blocks', 'build', '123']).exit_code == EXIT_USAGE

    def test_build(self, runner):
        """測試建構區塊 322"""
        result = runner.invoke(cli, ['blocks', 'build', '322', '--format', 'json'])
        assert result.exit_code == EXIT_OK
        data = _json(result)
        assert {'kind': 'fixed', 'index': 9, 'value': 1} in data['constraints']
        assert len(data['rhs']) == 27
        assert len(data['functionals']) == 27

    def test_list(self, runner):
        """測試列出標準區塊"""
        result = runner.invoke(cli, ['blocks', 'list', '--format', 'json'])
        data = _json(result)
        assert list(data) == ['211', '221', '222', '321', '322', '331', '332', '333']
        assert data['333']['x27'] == 53


class TestVerify:
    """測試 verify"""

    def test_default(self, runner):
        """測試預設資料全部通過"""
        result = runner.invoke(cli, ['verify', '--grid-range', '5:6', '--format', 'json'])
        assert result.exit_code == EXIT_OK
        data = _json(result)
        assert data['success']
        assert data['summary']['failed_checks'] == 0

    def test_corrupted_fixture(self, runner, tmp_path):
        """測試損壞的特解指出失敗的區塊"""
        shutil.copy(DATA_DIR / "expectations.yaml", tmp_path / "expectations.yaml")
        with open(DATA_DIR / "fixtures.yaml", encoding='utf-8') as f:
            fixtures = yaml.safe_load(f)
        fixtures['221'][4] += 1
        with open(tmp_path / "fixtures.yaml", 'w', encoding='utf-8') as f:
            yaml.safe_dump(fixtures, f)

        result = runner.invoke(cli, ['verify', '--grid-range', '5:5', '--data-dir', str(tmp_path)])
        assert result.exit_code == EXIT_FAILED
        assert "fixture-221" in result.stderr

    def test_bad_range(self, runner):
        """測試格式錯誤的範圍"""
        assert runner.invoke(cli, ['verify', '--grid-range', '9:5']).exit_code == EXIT_USAGE


class TestGridOracle:
    """測試 grid-oracle"""

    def test_small_grid(self, runner):
        """測試 6×6 網格"""
        result = runner.invoke(cli, ['grid-oracle', '--n', '6', '--format', 'json'])
        assert result.exit_code == EXIT_OK
        data = _json(result)
        assert data['passed']
        assert data['lemma2']['333']['count'] == 3

    def test_too_small(self, runner):
        """測試網格太小"""
        assert runner.invoke(cli, ['grid-oracle', '--n', '3']).exit_code == EXIT_USAGE


class TestSearch:
    """測試 search"""

    def test_degree_3(self, runner, tmp_path):
        """測試度數 3 找到 Moore 圖並匯出邊列表"""
        edges = tmp_path / "petersen.txt"
        result = runner.invoke(cli, ['search', '--degree', '3', '--format', 'json', '--edges', str(edges)])
        assert result.exit_code == EXIT_OK
        data = _json(result)
        assert data['outcome'] == 'found'
        assert data['moore']['passed']
        assert data['vertices'] == 10
        assert len(edges.read_text(encoding='utf-8').splitlines()) == 15

    def test_degree_4(self, runner):
        """測試度數 4 無解"""
        result = runner.invoke(cli, ['search', '--degree', '4', '--format', 'json'])
        assert result.exit_code == EXIT_OK
        assert _json(result)['outcome'] == 'exhausted'

    def test_budget(self, runner):
        """測試預算用盡"""
        result = runner.invoke(cli, ['search', '--degree', '57', '--budget-nodes', '10^3', '--format', 'json'])
        assert result.exit_code == EXIT_BUDGET
        assert _json(result)['outcome'] == 'budget'

    def test_invalid_degree(self, runner):
        """測試度數太小"""
        assert runner.invoke(cli, ['search', '--degree', '1']).exit_code == EXIT_USAGE

    def test_bad_budget(self, runner):
        """測試無法解析的預算"""
        assert runner.invoke(cli, ['search', '--degree', '3', '--budget-nodes', 'lots']).exit_code == EXIT_USAGE

    def test_count_spellings(self):
        """測試預算的寫法"""
        assert COUNT.convert("10^6", None, None) == 1000000
        assert COUNT.convert("1e6", None, None) == 1000000
        assert COUNT.convert("2500", None, None) == 2500


class TestReport:
    """測試 report"""

    @pytest.mark.slow
    def test_markdown(self, runner):
        """測試 Markdown 報告"""
        result = runner.invoke(cli, ['report'])
        assert result.exit_code == EXIT_OK
        assert "| 222 | 122 | 122 |" in result.stdout
        assert "reference-p-mismatch" in result.stdout

    @pytest.mark.slow
    def test_json(self, runner):
        """測試 JSON 報告"""
        result = runner.invoke(cli, ['report', '--format', 'json'])
        assert result.exit_code == EXIT_OK
        data = _json(result)
        assert data['total'] == 142
        assert data['counts_match']
        assert [s['outcome'] for s in data['searches']] == ['found', 'found', 'exhausted']
