"""双非中心 Beta / F 分布 CDF 命令行模块"""

import logging
import math
from enum import Enum
from typing import Any, Callable, Dict, List, NoReturn, Optional

import typer
from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler
from rich.markup import escape

from . import __version__
from .config import DNCBetaConfig, load_config
from .divide import CdfReport, ErrorControls, beta_cdf, f_cdf, f_to_beta_x
from .exceptions import DNCBetaError, ErrorCode
from .oracle import direct_cdf, error_report
from .output import (
    OutputRecord,
    records_to_csv,
    render_table,
    rows_to_csv,
    status_prefix,
    write_matrix_csv,
)
from .series import DistParams, matrix_slab
from .tables import replicate_table
from .types import Method, OutputFormat

app = typer.Typer(
    help="双非中心 Beta / F 分布 CDF 计算工具（DIV1 / DIV2 分块截断，误差上界可控）",
    no_args_is_help=True,
)


# 状态消息走 stderr，stdout 只输出结果
console = Console(stderr=True)
out_console = Console()


def print_success(message: str) -> None:
    """打印成功消息（绿色）"""
    prefix = escape(status_prefix("success", stream=console.file))
    console.print(f"[green]{prefix}[/green] {message}")


def print_error(message: str) -> None:
    """打印错误消息（红色）"""
    prefix = escape(status_prefix("error", stream=console.file))
    console.print(f"[red]{prefix}[/red] {escape(message)}")


def print_warning(message: str) -> None:
    """打印警告消息（黄色）"""
    prefix = escape(status_prefix("warning", stream=console.file))
    console.print(f"[yellow]{prefix}[/yellow] {message}")


def print_info(message: str) -> None:
    """打印信息消息（蓝色）"""
    prefix = escape(status_prefix("info", stream=console.file))
    console.print(f"[blue]{prefix}[/blue] {message}")


class MethodChoice(str, Enum):
    DIV1 = "div1"
    DIV2 = "div2"
    BOTH = "both"

    def methods(self) -> List[Method]:
        if self is MethodChoice.BOTH:
            return [Method.DIV1, Method.DIV2]
        return [Method.parse(self.value)]


def _finite(value: Optional[float]) -> Optional[float]:
    if value is not None and not math.isfinite(value):
        raise typer.BadParameter(f"必须为有限值: {value!r}")
    return value


def _positive(value: Optional[float]) -> Optional[float]:
    _finite(value)
    if value is not None and value <= 0:
        raise typer.BadParameter(f"必须为正数: {value!r}")
    return value


def _non_negative(value: Optional[float]) -> Optional[float]:
    _finite(value)
    if value is not None and value < 0:
        raise typer.BadParameter(f"不能为负数: {value!r}")
    return value


def _fail(exc: Exception, code: int) -> NoReturn:
    print_error(str(exc))
    raise typer.Exit(code=code)


def _load(config_path: Optional[str], **overrides: Any) -> DNCBetaConfig:
    """加载配置并应用命令行覆盖值（命令行优先）。"""
    try:
        return load_config(config_path, overrides)
    except (ValidationError, ValueError, FileNotFoundError) as exc:
        _fail(exc, ErrorCode.DOMAIN.exit_code)


def _run(action: Callable[[], None]) -> None:
    """执行命令主体，把库异常映射为退出码。"""
    try:
        action()
    except DNCBetaError as exc:
        _fail(exc, exc.code.exit_code)
    except ValidationError as exc:
        _fail(exc, ErrorCode.DOMAIN.exit_code)


def _summary(report: CdfReport) -> Dict[str, Any]:
    data = report.to_dict()
    data.pop("lines")
    return data


def _emit_reports(
    command: str,
    inputs: Dict[str, Any],
    reports: List[CdfReport],
    comparisons: List[Dict[str, Any]],
    output_format: OutputFormat,
) -> None:
    if output_format is OutputFormat.JSON:
        payload: Dict[str, Any] = {"reports": [report.to_dict() for report in reports]}
        if comparisons:
            payload["comparisons"] = comparisons
        typer.echo(OutputRecord(command, inputs, payload).to_json())
        return

    records = []
    for position, report in enumerate(reports):
        record = _summary(report)
        if comparisons:
            comparison = dict(comparisons[position])
            comparison.pop("method", None)
            comparison.pop("p_method", None)
            for key in ("upper_bound", "control_line"):
                comparison.pop(key, None)
            record.update(comparison)
        records.append(record)

    if output_format is OutputFormat.CSV:
        typer.echo(records_to_csv(records), nl=False)
        return

    columns = list(records[0].keys())
    render_table(
        out_console,
        command,
        columns,
        ([record.get(column) for column in columns] for record in records),
    )


def _cdf_command(
    command: str,
    inputs: Dict[str, Any],
    compute: Callable[[Method, ErrorControls, bool], CdfReport],
    oracle_params: Callable[[], DistParams],
    method: MethodChoice,
    config: DNCBetaConfig,
    compare_oracle: bool,
) -> None:
    controls = config.controls()
    reports = [
        compute(chosen, controls, config.use_recurrence) for chosen in method.methods()
    ]

    comparisons: List[Dict[str, Any]] = []
    if compare_oracle:
        p_oracle = direct_cdf(oracle_params(), config.oracle_config())
        for report in reports:
            result = error_report(report, p_oracle)
            if not result.bound_respected:
                print_warning(f"{report.method.value} 误差链未满足: error={result.error:.3e}")
            comparisons.append(result.to_dict())

    inputs = {
        **inputs,
        "method": method.value,
        "eps_line": controls.eps_line,
        "eps_tail": controls.eps_tail,
        "use_recurrence": config.use_recurrence,
    }
    _emit_reports(command, inputs, reports, comparisons, config.output_format)


N1_HELP = "第一自由度 n1（--shape-form 时为 a）"
N2_HELP = "第二自由度 n2（--shape-form 时为 b）"
L1_HELP = "非中心参数 λ1（--shape-form 时为 δ1）"
L2_HELP = "非中心参数 λ2（--shape-form 时为 δ2）"


@app.command(name="cdf-beta")
def cdf_beta(
    n1: float = typer.Option(..., "--n1", help=N1_HELP, callback=_positive),
    n2: float = typer.Option(..., "--n2", help=N2_HELP, callback=_positive),
    lambda1: float = typer.Option(
        0.0, "--lambda1", help=L1_HELP, callback=_non_negative
    ),
    lambda2: float = typer.Option(
        0.0, "--lambda2", help=L2_HELP, callback=_non_negative
    ),
    x: float = typer.Option(
        ..., "--x", help="求值点 x（区间外截断为 0 或 1）", callback=_finite
    ),
    method: MethodChoice = typer.Option(
        MethodChoice.DIV1, "--method", "-m", case_sensitive=False, help="计算方法"
    ),
    eps_line: Optional[float] = typer.Option(
        None, "--eps-line", help="单行/单列余项上限（默认 1e-7）", callback=_positive
    ),
    eps_tail: Optional[float] = typer.Option(
        None, "--eps-tail", help="尾部区域质量上限（默认 1e-5）", callback=_positive
    ),
    output_format: Optional[OutputFormat] = typer.Option(
        None, "--format", case_sensitive=False, help="输出格式 json/csv/plain"
    ),
    compare_oracle: bool = typer.Option(
        False, "--compare-oracle", help="同时输出与直接计算的误差对比"
    ),
    shape_form: bool = typer.Option(
        False, "--shape-form", help="参数按 (a, b, δ1, δ2) 解释"
    ),
    use_recurrence: Optional[bool] = typer.Option(
        None, "--use-recurrence/--no-recurrence", help="逐行求值是否使用递推链"
    ),
    config_path: Optional[str] = typer.Option(
        None, "--config", "-c", help="指定配置文件路径"
    ),
) -> None:
    """计算双非中心 Beta 分布的 CDF"""
    config = _load(
        config_path,
        eps_line=eps_line,
        eps_tail=eps_tail,
        output_format=output_format,
        use_recurrence=use_recurrence,
    )

    def action() -> None:
        if shape_form:
            params = DistParams(n1, n2, lambda1, lambda2, x)
        else:
            params = DistParams.from_degrees(n1, n2, lambda1, lambda2, x)
        _cdf_command(
            "cdf-beta",
            {
                "n1": n1,
                "n2": n2,
                "lambda1": lambda1,
                "lambda2": lambda2,
                "x": x,
                "shape_form": shape_form,
            },
            lambda chosen, controls, recur: beta_cdf(
                params, chosen, controls, use_recurrence=recur
            ),
            lambda: params,
            method,
            config,
            compare_oracle,
        )

    _run(action)


@app.command(name="cdf-f")
def cdf_f(
    n1: float = typer.Option(..., "--n1", help=N1_HELP, callback=_positive),
    n2: float = typer.Option(..., "--n2", help=N2_HELP, callback=_positive),
    lambda1: float = typer.Option(
        0.0, "--lambda1", help=L1_HELP, callback=_non_negative
    ),
    lambda2: float = typer.Option(
        0.0, "--lambda2", help=L2_HELP, callback=_non_negative
    ),
    f: float = typer.Option(
        ..., "--f", help="F 分布的取值 f（f ≤ 0 时 CDF 为 0）", callback=_finite
    ),
    method: MethodChoice = typer.Option(
        MethodChoice.DIV1, "--method", "-m", case_sensitive=False, help="计算方法"
    ),
    eps_line: Optional[float] = typer.Option(
        None, "--eps-line", help="单行/单列余项上限（默认 1e-7）", callback=_positive
    ),
    eps_tail: Optional[float] = typer.Option(
        None, "--eps-tail", help="尾部区域质量上限（默认 1e-5）", callback=_positive
    ),
    output_format: Optional[OutputFormat] = typer.Option(
        None, "--format", case_sensitive=False, help="输出格式 json/csv/plain"
    ),
    compare_oracle: bool = typer.Option(
        False, "--compare-oracle", help="同时输出与直接计算的误差对比"
    ),
    shape_form: bool = typer.Option(
        False, "--shape-form", help="参数按 (a, b, δ1, δ2) 解释"
    ),
    use_recurrence: Optional[bool] = typer.Option(
        None, "--use-recurrence/--no-recurrence", help="逐行求值是否使用递推链"
    ),
    config_path: Optional[str] = typer.Option(
        None, "--config", "-c", help="指定配置文件路径"
    ),
) -> None:
    """计算双非中心 F 分布的 CDF"""
    config = _load(
        config_path,
        eps_line=eps_line,
        eps_tail=eps_tail,
        output_format=output_format,
        use_recurrence=use_recurrence,
    )
    scale = 2.0 if shape_form else 1.0
    d1, d2, l1, l2 = n1 * scale, n2 * scale, lambda1 * scale, lambda2 * scale

    def action() -> None:
        _cdf_command(
            "cdf-f",
            {
                "n1": n1,
                "n2": n2,
                "lambda1": lambda1,
                "lambda2": lambda2,
                "f": f,
                "shape_form": shape_form,
            },
            lambda chosen, controls, recur: f_cdf(
                d1, d2, l1, l2, f, chosen, controls, use_recurrence=recur
            ),
            lambda: DistParams.from_degrees(d1, d2, l1, l2, f_to_beta_x(d1, d2, f)),
            method,
            config,
            compare_oracle,
        )

    _run(action)


@app.command(name="matrix-dump")
def matrix_dump(
    n1: float = typer.Option(..., "--n1", help=N1_HELP, callback=_positive),
    n2: float = typer.Option(..., "--n2", help=N2_HELP, callback=_positive),
    lambda1: float = typer.Option(
        0.0, "--lambda1", help=L1_HELP, callback=_non_negative
    ),
    lambda2: float = typer.Option(
        0.0, "--lambda2", help=L2_HELP, callback=_non_negative
    ),
    x: float = typer.Option(
        ..., "--x", help="求值点 x，须位于 [0, 1]", callback=_finite
    ),
    rows: int = typer.Option(..., "--rows", min=1, help="切片行数 J"),
    cols: int = typer.Option(..., "--cols", min=1, help="切片列数 L"),
    out: str = typer.Option(..., "--out", "-o", help="CSV 输出路径"),
    shape_form: bool = typer.Option(
        False, "--shape-form", help="参数按 (a, b, δ1, δ2) 解释"
    ),
    use_recurrence: Optional[bool] = typer.Option(
        None, "--use-recurrence/--no-recurrence", help="逐行求值是否使用递推链"
    ),
    config_path: Optional[str] = typer.Option(
        None, "--config", "-c", help="指定配置文件路径"
    ),
) -> None:
    """导出 M 矩阵左上角切片为 CSV"""
    config = _load(config_path, use_recurrence=use_recurrence)

    def action() -> None:
        if shape_form:
            params = DistParams(n1, n2, lambda1, lambda2, x)
        else:
            params = DistParams.from_degrees(n1, n2, lambda1, lambda2, x)
        slab = matrix_slab(
            params,
            rows,
            cols,
            use_recurrence=config.use_recurrence,
            cell_budget=config.slab_cell_budget,
        )
        path = write_matrix_csv(slab, out)
        print_success(f"已写入 {rows}×{cols} 切片: {escape(str(path))}")
        record = OutputRecord(
            "matrix-dump",
            {
                "n1": n1,
                "n2": n2,
                "lambda1": lambda1,
                "lambda2": lambda2,
                "x": x,
                "rows": rows,
                "cols": cols,
                "out": out,
                "shape_form": shape_form,
                "use_recurrence": config.use_recurrence,
            },
            slab.to_dict(),
        )
        typer.echo(record.to_json())

    _run(action)


@app.command(name="tables")
def tables_cmd(
    table: int = typer.Option(..., "--table", "-t", min=1, max=6, help="表编号 1-6"),
    bench_reps: Optional[int] = typer.Option(
        None, "--bench-reps", min=1, help="计时重复次数（默认 80）"
    ),
    lambda1: Optional[float] = typer.Option(
        None, "--lambda1", help="替换所有参数行的 λ1", callback=_non_negative
    ),
    lambda2: Optional[float] = typer.Option(
        None, "--lambda2", help="替换所有参数行的 λ2", callback=_non_negative
    ),
    output_format: Optional[OutputFormat] = typer.Option(
        None, "--format", case_sensitive=False, help="输出格式 json/csv/plain"
    ),
    config_path: Optional[str] = typer.Option(
        None, "--config", "-c", help="指定配置文件路径"
    ),
) -> None:
    """重算参考数值表并与发表值并列输出"""
    config = _load(config_path, bench_reps=bench_reps, output_format=output_format)

    def action() -> None:
        override = None
        if lambda1 is not None or lambda2 is not None:
            override = (lambda1, lambda2)
        report = replicate_table(
            table,
            config=config.oracle_config(),
            controls=config.controls(),
            bench_reps=config.bench_reps,
            lambda_override=override,
        )

        if config.output_format is OutputFormat.JSON:
            record = OutputRecord(
                "tables",
                {
                    "table": table,
                    "bench_reps": config.bench_reps,
                    "lambda1": lambda1,
                    "lambda2": lambda2,
                },
                report.to_dict(),
                metadata={"deterministic": report.deterministic},
            )
            typer.echo(record.to_json())
        elif config.output_format is OutputFormat.CSV:
            typer.echo(rows_to_csv(report.columns, report.rows), nl=False)
        else:
            render_table(out_console, report.title, report.columns, report.rows)
            for note in report.notes:
                print_info(note)

    _run(action)


@app.command(name="version")
def version_cmd() -> None:
    """显示版本信息"""
    out_console.print(f"dncbeta [cyan]v{__version__}[/cyan]")


def _version_callback(value: bool) -> None:
    """版本回调函数"""
    if value:
        out_console.print(f"dncbeta [cyan]v{__version__}[/cyan]")
        raise typer.Exit()


def _configure_logging(verbose: bool) -> None:
    package_logger = logging.getLogger("dncbeta")
    if not verbose:
        return
    if not any(isinstance(handler, RichHandler) for handler in package_logger.handlers):
        package_logger.addHandler(
            RichHandler(console=Console(stderr=True), show_path=False)
        )
    package_logger.setLevel(logging.DEBUG)


@app.callback()
def main_callback(
    version: bool = typer.Option(
        False,
        "--version",
        "-v",
        help="显示版本信息",
        is_eager=True,
        callback=_version_callback,
    ),
    verbose: bool = typer.Option(
        False, "--verbose", help="在 stderr 输出调试日志"
    ),
) -> None:
    """双非中心 Beta / F 分布 CDF 计算工具"""
    _configure_logging(verbose)


def main() -> None:
    """CLI 入口函数"""
    app()


if __name__ == "__main__":
    main()
