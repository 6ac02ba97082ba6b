#!/usr/bin/env python3
"""
Moore57 命令列介面
pnums / blocks / verify / grid-oracle / search / report

結束碼：0 成功，1 驗證失敗或不可行，2 使用錯誤，3 預算用盡
"""

import logging
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

import click
from jinja2 import Environment, FileSystemLoader

from src.config import OUTPUT_FORMATS, PROJECT_ROOT, RunConfiguration, Settings, parse_range
from src.console import setup_logging
from src.constraints.constraint_builder import assemble, lemma2_value
from src.converters.format_converter import FormatConverter
from src.errors import (
    ArrayParseError,
    DataFileError,
    GridError,
    InadmissibleBlock,
    InvalidPermSystem,
    OutOfRange,
    WorkbenchError,
)
from src.exporters.result_exporter import ResultExporter
from src.generators.block_generator import (
    BlockId,
    build_system,
    canonical_blocks,
    forced_zero_variables,
    orbit,
)
from src.lattice.nullspace import affine_functionals, render_functional
from src.models.expectations import Expectations, load_expectations, load_fixtures
from src.models.intersection import (
    IntersectionArray,
    IntersectionNumbers,
    compare_with_reference,
    intersection_numbers,
    parse_array,
)
from src.oracles.grid_oracle import grid_decomposition, lemma2_table, lemma3a_partial, lemma3b_candidates
from src.search.graphs import assemble_moore, build_h, is_moore, verify_h
from src.search.perm_search import BudgetExceeded, Found, SearchBudget, search
from src.solvers.lattice_solver import (
    EnumerationResult,
    audit_completeness,
    case_partition,
    discussion_report,
    enumerate_canonical,
    enumerate_solutions,
    lattice_anchor,
    orbit_counts,
    particular_solution,
    summary,
)
from src.verify_runner import VerifyRunner

logger = logging.getLogger("moore57")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3

USAGE_ERRORS = (ArrayParseError, InadmissibleBlock, OutOfRange, GridError, InvalidPermSystem)

DEFAULT_GRID_SIZE = 56
REPORT_DEGREES = (2, 3, 4)

converter = FormatConverter()

CommandOutput = Tuple[str, int]


class CountType(click.ParamType):
    """正整數，接受 1000000、1e6、10^6"""

    name = "count"

    def convert(self, value, param, ctx):
        if isinstance(value, int):
            number = value
        else:
            text = str(value).strip().replace("_", "")
            try:
                if "^" in text:
                    base, exponent = text.split("^")
                    number = int(base) ** int(exponent)
                elif any(ch in text.lower() for ch in "e."):
                    real = float(text)
                    if not real.is_integer():
                        self.fail(f"不是整數: {value}", param, ctx)
                    number = int(real)
                else:
                    number = int(text)
            except ValueError:
                self.fail(f"無法解析的數量: {value}（例如 1000000、1e6、10^6）", param, ctx)
        if number < 1:
            self.fail(f"必須是正整數: {value}", param, ctx)
        return number


class BlockLabel(click.ParamType):
    """標準區塊標籤或 "all" """

    name = "block"

    def convert(self, value, param, ctx):
        text = str(value).strip()
        if text == "all":
            return text
        labels = [b.label for b in canonical_blocks()]
        if text not in labels:
            self.fail(f"未知的區塊 {text!r}（可用: {', '.join(labels)}, all）", param, ctx)
        return text


class GridRange(click.ParamType):
    name = "low:high"

    def convert(self, value, param, ctx):
        if isinstance(value, tuple):
            return value
        try:
            return parse_range(str(value))
        except ValueError as e:
            self.fail(str(e), param, ctx)


COUNT = CountType()
BLOCK = BlockLabel()
GRID_RANGE = GridRange()


def output_options(func):
    func = click.option('--output', '-o', type=click.Path(dir_okay=False, path_type=Path),
                        help='寫入檔案（預設為標準輸出）')(func)
    func = click.option('--format', 'output_format', type=click.Choice(OUTPUT_FORMATS),
                        help='輸出格式')(func)
    return func


def array_option(func):
    return click.option('--array', help='交集陣列 "b0,b1,b2;c1,c2,c3"')(func)


# ---- 共用 ----

def _instance(config: RunConfiguration) -> Tuple[IntersectionArray, IntersectionNumbers]:
    arr = parse_array(config.array)
    return arr, intersection_numbers(arr)


def _is_reference_instance(config: RunConfiguration, arr: IntersectionArray) -> Optional[Expectations]:
    """交集陣列與已存資料相同時回傳預期值"""
    try:
        expectations = load_expectations(config.data_dir)
    except DataFileError as e:
        logger.warning("無法讀取預期值: %s", e)
        return None
    if str(parse_array(expectations.array)) != str(arr):
        return None
    return expectations


def _rebase_on_fixture(config: RunConfiguration, result: EnumerationResult) -> EnumerationResult:
    """以已存的特解為基準，讓係數可以直接與手算列表比對"""
    try:
        fixture = load_fixtures(config.data_dir).get(result.block.label)
    except DataFileError as e:
        logger.warning("無法讀取特解: %s", e)
        return result
    if fixture is None:
        return result
    if fixture not in result.solutions:
        logger.warning("區塊 %s 的已存特解不在解集合中，保留原基準", result.block)
        return result
    return result.rebased(fixture)


def _listing_problems(result: EnumerationResult, expectations: Expectations) -> List[str]:
    label = result.block.label
    problems = []
    expected_count = expectations.counts.get(label)
    if expected_count is not None and expected_count != result.count:
        problems.append(f"區塊 {label}: {result.count} 個解，預期 {expected_count}")

    expected = expectations.listings.get(label)
    if expected is not None:
        found = {tuple(t) for t in result.tuples}
        missing = sorted(set(expected) - found)
        extra = sorted(found - set(expected))
        if missing or extra:
            problems.append(f"區塊 {label} 係數列表不一致：缺少 {missing}，多出 {extra}")

    sizes = expectations.case_sizes.get(label)
    if sizes is not None:
        computed = [len(group) for group in case_partition(result).values()]
        if computed != sizes:
            problems.append(f"區塊 {label} 分案大小 {computed}，預期 {sizes}")

    if expectations.discussion.get('block') == label:
        report = discussion_report(result)
        if not report['passed']:
            problems.append(f"區塊 {label} 交叉檢查未通過: x(3,3,1) = {report['x331_values']}")
    return problems


def _emit(config: RunConfiguration, text: str) -> None:
    if config.output is None:
        click.echo(text, nl=False)
        return
    target = Path(config.output)
    exporter = ResultExporter(str(target.parent) if str(target.parent) else '.')
    path = exporter.export_text(text, target.name)
    click.echo(f"💾 已寫入 {path}", err=True)


def _execute(command: Callable[[RunConfiguration], CommandOutput], config: RunConfiguration) -> None:
    ctx = click.get_current_context()
    try:
        text, code = command(config)
    except USAGE_ERRORS as e:
        click.echo(f"❌ {e}", err=True)
        ctx.exit(EXIT_USAGE)
    except WorkbenchError as e:
        click.echo(f"❌ {e}", err=True)
        ctx.exit(EXIT_FAILED)
    _emit(config, text)
    ctx.exit(code)


# ---- 指令實作 ----

def cmd_pnums(config: RunConfiguration) -> CommandOutput:
    """重數與 p¹, p², p³"""
    arr, p = _instance(config)
    expectations = _is_reference_instance(config, arr)
    diagnostics = compare_with_reference(p, expectations.reference_p) if expectations else []

    if config.output_format == 'json':
        data = {'array': str(arr), **p.to_dict(), 'diagnostics': [d.to_dict() for d in diagnostics]}
        return converter.to_json(data), EXIT_OK
    return converter.convert_pnums(p, config.output_format), EXIT_OK


def _blocks_list(config: RunConfiguration, p: IntersectionNumbers) -> CommandOutput:
    data = {
        block.label: {
            'orbit': [b.label for b in orbit(block)],
            'forced_zero': sorted(forced_zero_variables(block)),
            'x27': lemma2_value(block),
        }
        for block in canonical_blocks()
    }
    return converter.convert_mapping(data, config.output_format, title="標準區塊"), EXIT_OK


def _blocks_build(config: RunConfiguration, p: IntersectionNumbers) -> CommandOutput:
    if config.block in (None, 'all'):
        raise OutOfRange("build 需要指定單一區塊")
    block = BlockId.parse(config.block)
    system = build_system(block, p)
    cons = assemble(block)
    particular = particular_solution(system, cons)
    data = {
        'block': block.label,
        'rhs': list(system.rhs),
        'forced_zero': sorted(system.forced_zero),
        'constraints': cons.to_list(),
        'anchor': list(lattice_anchor(system)),
        'particular': list(particular),
        'functionals': [render_functional(f) for f in affine_functionals(particular)],
    }
    return converter.convert_mapping(data, config.output_format, title=f"區塊 {block}"), EXIT_OK


def _blocks_enumerate(config: RunConfiguration, p: IntersectionNumbers) -> CommandOutput:
    labels = [b.label for b in canonical_blocks()] if config.block in (None, 'all') else [config.block]
    arr = parse_array(config.array)
    expectations = _is_reference_instance(config, arr) if config.check else None
    if config.check and expectations is None:
        raise DataFileError("--check 需要與已存資料相同的交集陣列與可讀的預期值")

    results: Dict[str, EnumerationResult] = {}
    problems: List[str] = []
    for label in labels:
        block = BlockId.parse(label)
        system = build_system(block, p)
        cons = assemble(block)
        result = enumerate_solutions(system, cons, workers=config.workers)
        if expectations is not None or _is_reference_instance(config, arr):
            result = _rebase_on_fixture(config, result)
        results[label] = result

        if config.audit:
            report = audit_completeness(system, cons)
            if not report.agrees_with(result):
                problems.append(f"區塊 {label} 方框稽核（半徑 {report.radius}）找到 {len(report.solutions)} 個解")
        if expectations is not None:
            problems += _listing_problems(result, expectations)

    for problem in problems:
        click.echo(f"❌ {problem}", err=True)
    code = EXIT_FAILED if problems else EXIT_OK

    if len(results) == 1:
        return converter.convert_enumeration(results[labels[0]], config.output_format), code
    if config.output_format == 'json':
        return converter.to_json({label: r.to_dict() for label, r in results.items()}), code
    return "".join(converter.convert_enumeration(r, config.output_format) for r in results.values()), code


def _blocks_summary(config: RunConfiguration, p: IntersectionNumbers) -> CommandOutput:
    results = enumerate_canonical(p, workers=config.workers)
    counts = summary(p, results=results)
    problems: List[str] = []
    if config.check:
        expectations = _is_reference_instance(config, parse_array(config.array))
        if expectations is None:
            raise DataFileError("--check 需要與已存資料相同的交集陣列與可讀的預期值")
        problems += [
            f"區塊 {label}: {count} 個解，預期 {expectations.counts.get(label)}"
            for label, count in counts.items()
            if expectations.counts.get(label) != count
        ]
        _, orbit_problems = orbit_counts(results, p)
        problems += orbit_problems

    for problem in problems:
        click.echo(f"❌ {problem}", err=True)
    return converter.convert_summary(counts, config.output_format), EXIT_FAILED if problems else EXIT_OK


BLOCK_ACTIONS = {
    'list': _blocks_list,
    'build': _blocks_build,
    'enumerate': _blocks_enumerate,
    'summary': _blocks_summary,
}


def cmd_blocks(config: RunConfiguration) -> CommandOutput:
    """區塊的列出、建構、列舉與計數"""
    _, p = _instance(config)
    return BLOCK_ACTIONS[config.action](config, p)


def cmd_verify(config: RunConfiguration) -> CommandOutput:
    """特解、零空間與網格模型的驗證"""
    runner = VerifyRunner(config.data_dir, config.grid_range)
    report = runner.run_all_checks()
    code = EXIT_OK if report['success'] else EXIT_FAILED
    for failed in runner.failed_checks():
        click.echo(f"❌ {failed['id']}: {failed['error']}", err=True)

    if config.output_format == 'json':
        return converter.to_json(report), code
    view = {
        'success': report['success'],
        'summary': report['summary'],
        'checks': {r['id']: '通過' if r['success'] else r['error'] for r in report['results']},
    }
    return converter.convert_mapping(view, config.output_format, title="驗證結果"), code


def grid_report(n: int, trials: int = 100, seed: int = 0) -> Dict[str, Any]:
    """單一網格大小上的全部檢查"""
    table = lemma2_table(n)
    pairs = [((1, 1), (2, 2)), ((1, 1), (n, n)), ((2, 3), (n, 1))]
    lemma3b = {f"{u}-{v}": lemma3b_candidates(n, u, v) for u, v in pairs}
    decomposition = grid_decomposition(n)
    lemma3a = lemma3a_partial(n, trials=trials, seed=seed)
    return {
        'n': n,
        'lemma2': table,
        'lemma3b': lemma3b,
        'decomposition': {
            'rows': decomposition.rows,
            'columns': decomposition.columns,
            'meets_once': decomposition.meets_once,
            'linemate_degree': decomposition.linemate_degree,
            'passed': decomposition.passed,
        },
        'lemma3a_partial': lemma3a,
        'passed': (
            all(row['count'] == row['expected'] for row in table.values())
            and all(value == 2 for value in lemma3b.values())
            and decomposition.passed
            and lemma3a['passed'] == lemma3a['consistent']
        ),
    }


def cmd_grid_oracle(config: RunConfiguration) -> CommandOutput:
    """K_n □ K_n 上的共同線伴計數"""
    n = config.grid_size or DEFAULT_GRID_SIZE
    data = grid_report(n, trials=config.trials, seed=config.seed or 0)
    code = EXIT_OK if data['passed'] else EXIT_FAILED
    return converter.convert_mapping(data, config.output_format, title=f"{n}×{n} 網格"), code


def search_report(config: RunConfiguration) -> Tuple[Dict[str, Any], int]:
    if config.degree is None or config.degree < 2:
        raise InvalidPermSystem(f"度數至少為 2: {config.degree}")
    budget = SearchBudget(nodes=config.budget_nodes, seconds=config.budget_seconds)
    outcome = search(
        config.degree,
        budget=budget,
        normalize=config.normalize,
        seed=config.seed,
        workers=config.workers,
    )
    data = {'degree': config.degree, **outcome.to_dict()}
    if isinstance(outcome, Found):
        h = build_h(outcome.system)
        g = assemble_moore(h, config.degree)
        data['h_properties'] = verify_h(h, config.degree)
        data['moore'] = is_moore(g, config.degree).to_dict()
        data['vertices'] = g.number_of_nodes()
        if config.edges is not None:
            target = Path(config.edges)
            exporter = ResultExporter(str(target.parent) if str(target.parent) else '.')
            exporter.export_edge_list(g, target.name)
    return data, EXIT_BUDGET if isinstance(outcome, BudgetExceeded) else EXIT_OK


def cmd_search(config: RunConfiguration) -> CommandOutput:
    """置換系統存在性搜尋"""
    data, code = search_report(config)
    return converter.convert_mapping(data, config.output_format, title=f"度數 {config.degree}"), code


def build_report(config: RunConfiguration) -> Dict[str, Any]:
    """彙整報告內容（交集數、計數表、驗證、網格、小度數搜尋）"""
    arr, p = _instance(config)
    expectations = _is_reference_instance(config, arr)
    diagnostics = compare_with_reference(p, expectations.reference_p) if expectations else []
    results = enumerate_canonical(p, workers=config.workers)
    counts = summary(p, results=results)
    expected_counts = expectations.counts if expectations else {}
    verification = VerifyRunner(config.data_dir, config.grid_range).run_all_checks()

    searches = []
    for d in REPORT_DEGREES:
        data, _ = search_report(RunConfiguration(subcommand='search', degree=d))
        searches.append({'degree': d, 'outcome': data['outcome'], 'nodes': data['nodes']})

    return {
        'array': str(arr),
        'k': list(p.k),
        'p': {z: p.matrix(z) for z in (1, 2, 3)},
        'diagnostics': [d.to_dict() for d in diagnostics],
        'counts': [
            {'block': label, 'count': count, 'expected': expected_counts.get(label)}
            for label, count in counts.items()
        ],
        'total': sum(counts.values()),
        'counts_match': bool(expected_counts) and all(
            expected_counts.get(label) == count for label, count in counts.items()
        ),
        'verification': verification,
        'grid': lemma2_table(DEFAULT_GRID_SIZE),
        'searches': searches,
    }


def cmd_report(config: RunConfiguration) -> CommandOutput:
    """Markdown（jinja2 樣板）或 JSON 報告"""
    data = build_report(config)
    code = EXIT_OK if data['counts_match'] and data['verification']['success'] else EXIT_FAILED
    if config.output_format == 'json':
        return converter.to_json(data), code
    env = Environment(
        loader=FileSystemLoader(str(PROJECT_ROOT / "templates")),
        keep_trailing_newline=True,
        trim_blocks=True,
        lstrip_blocks=True,
    )
    return env.get_template("report.md.j2").render(**data), code


# ---- click ----

@click.group()
@click.option('--log-level', help='日誌等級（預設取自 MOORE57_LOG_LEVEL）')
@click.option('--env-file', type=click.Path(dir_okay=False), help='.env 檔案路徑')
@click.pass_context
def cli(ctx, log_level, env_file):
    """Moore57 - 直徑 2、度數 57 Moore 圖的可行性工作台"""
    try:
        settings = Settings.from_env(env_file)
    except ValueError as e:
        raise click.UsageError(f"環境設定錯誤: {e}")
    setup_logging(log_level or settings.log_level)
    ctx.obj = settings


@cli.command()
@array_option
@output_options
@click.pass_obj
def pnums(settings, array, output_format, output):
    """印出重數 k 與交集數 p¹, p², p³"""
    config = RunConfiguration.from_settings(
        settings, 'pnums', array=array, output_format=output_format, output=output
    )
    _execute(cmd_pnums, config)


@cli.group()
def blocks():
    """區塊系統：list | build | enumerate | summary"""


def _blocks_config(settings, action, **overrides) -> RunConfiguration:
    return RunConfiguration.from_settings(settings, 'blocks', action=action, **overrides)


@blocks.command('list')
@output_options
@click.pass_obj
def blocks_list(settings, output_format, output):
    """列出 8 個標準區塊與其 S₃ 軌道"""
    _execute(cmd_blocks, _blocks_config(settings, 'list', output_format=output_format, output=output))


@blocks.command('build')
@click.argument('block', type=BLOCK)
@array_option
@output_options
@click.pass_obj
def blocks_build(settings, block, array, output_format, output):
    """建構單一區塊的系統、約束與特解"""
    _execute(cmd_blocks, _blocks_config(
        settings, 'build', block=block, array=array, output_format=output_format, output=output
    ))


@blocks.command('enumerate')
@click.argument('block', type=BLOCK, default='all')
@array_option
@output_options
@click.option('--check', is_flag=True, help='與已存的列表比對')
@click.option('--audit', is_flag=True, help='另以方框掃描確認完整性（較慢）')
@click.option('--workers', type=click.IntRange(min=1), help='平行工作數')
@click.pass_obj
def blocks_enumerate(settings, block, array, output_format, output, check, audit, workers):
    """列舉區塊的全部受約束解"""
    _execute(cmd_blocks, _blocks_config(
        settings, 'enumerate', block=block, array=array, output_format=output_format,
        output=output, check=check, audit=audit, workers=workers,
    ))


@blocks.command('summary')
@array_option
@output_options
@click.option('--check', is_flag=True, help='與已存的計數表比對')
@click.option('--workers', type=click.IntRange(min=1), help='平行工作數')
@click.pass_obj
def blocks_summary(settings, array, output_format, output, check, workers):
    """8 個標準區塊的解數"""
    _execute(cmd_blocks, _blocks_config(
        settings, 'summary', array=array, output_format=output_format,
        output=output, check=check, workers=workers,
    ))


cli.add_command(blocks, name='block')


@cli.command()
@output_options
@click.option('--grid-range', type=GRID_RANGE, help='網格大小範圍 low:high')
@click.option('--data-dir', type=click.Path(file_okay=False, path_type=Path), help='資料目錄')
@click.pass_obj
def verify(settings, output_format, output, grid_range, data_dir):
    """以已存特解與網格模型驗證計算層"""
    _execute(cmd_verify, RunConfiguration.from_settings(
        settings, 'verify', output_format=output_format, output=output,
        grid_range=grid_range, data_dir=data_dir,
    ))


@cli.command('grid-oracle')
@output_options
@click.option('--n', 'grid_size', type=int, help=f'網格大小（預設 {DEFAULT_GRID_SIZE}）')
@click.option('--trials', type=click.IntRange(min=1), help='隨機匹配次數')
@click.option('--seed', type=int, help='隨機種子')
@click.pass_obj
def grid_oracle(settings, output_format, output, grid_size, trials, seed):
    """在 K_n □ K_n 上計數共同線伴"""
    _execute(cmd_grid_oracle, RunConfiguration.from_settings(
        settings, 'grid-oracle', output_format=output_format, output=output,
        grid_size=grid_size, trials=trials, seed=seed,
    ))


@cli.command('search')
@click.option('--degree', '-d', type=int, required=True, help='Moore 圖的度數')
@click.option('--budget-nodes', type=COUNT, help='節點上限（接受 10^6、1e6）')
@click.option('--budget-seconds', type=click.FloatRange(min=0, min_open=True), help='秒數上限')
@click.option('--seed', type=int, help='打亂嘗試順序的種子')
@click.option('--workers', type=click.IntRange(min=1), help='平行分支數')
@click.option('--normalize/--no-normalize', default=True, help='固定 θ_id 為單位置換')
@click.option('--edges', type=click.Path(dir_okay=False, path_type=Path), help='找到時匯出邊列表')
@output_options
@click.pass_obj
def search_cmd(settings, degree, budget_nodes, budget_seconds, seed, workers, normalize, edges,
               output_format, output):
    """搜尋度數 d 的置換系統並組裝 Moore 圖"""
    _execute(cmd_search, RunConfiguration.from_settings(
        settings, 'search', degree=degree, budget_nodes=budget_nodes, budget_seconds=budget_seconds,
        seed=seed, workers=workers, normalize=normalize, edges=edges,
        output_format=output_format, output=output,
    ))


@cli.command()
@array_option
@click.option('--format', 'report_format', type=click.Choice(['markdown', 'json']), default='markdown',
              help='報告格式')
@click.option('--output', '-o', type=click.Path(dir_okay=False, path_type=Path), help='寫入檔案')
@click.option('--workers', type=click.IntRange(min=1), help='平行工作數')
@click.pass_obj
def report(settings, array, report_format, output, workers):
    """產生完整報告"""
    _execute(cmd_report, RunConfiguration.from_settings(
        settings, 'report', array=array, output=output, workers=workers,
        output_format='json' if report_format == 'json' else 'table',
    ))


if __name__ == '__main__':
    cli()
