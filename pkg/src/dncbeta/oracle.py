"""直接截断计算（参考值）。

在两个方向上各取到 Poisson 尾部 < tail_target 的矩形，对 M 矩阵逐项求和，
作为衡量 DIV1 / DIV2 实际误差的基准。不完全 Beta 值默认取自
``scipy.special.betainc``，与被检验算法的连分式相互独立。
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.special import betainc

from .divide import CdfReport, ErrorControls, beta_cdf
from .exceptions import DomainError, ResourceError
from .series import DistParams, PoissonAccumulator, poisson_weight_at, poisson_weights
from .special import reg_inc_beta_array
from .types import Axis, Method

logger = logging.getLogger(__name__)

# 比较时允许的舍入误差
ROUNDOFF_SLACK = 1e-13

KernelName = Literal["scipy", "continued_fraction"]


class OracleConfig(BaseModel):
    """直接计算的截断设置。"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    tail_target: float = Field(
        default=1e-12, gt=0, le=1e-8, description="每个方向留下的 Poisson 尾部质量"
    )
    max_terms_per_axis: int = Field(default=5000, ge=1, description="每个方向的项数上限")
    fixed_terms: Optional[int] = Field(
        default=None, ge=1, description="每个方向至少计算的项数"
    )
    kernel: KernelName = Field(default="scipy", description="不完全 Beta 的求值方式")

    @classmethod
    def fixed_grid(cls, terms: int = 100) -> "OracleConfig":
        """每行、每列至少计算 terms 项的预设，用于速度对比。"""
        return cls(fixed_terms=terms)


def _kernel(config: OracleConfig) -> Callable[..., np.ndarray]:
    if config.kernel == "continued_fraction":
        return reg_inc_beta_array
    return lambda x, a, b: np.asarray(betainc(a, b, x), dtype=float)


def axis_extent(delta: float, config: OracleConfig) -> int:
    """一个方向需要计算的项数：最小的 k ≥ 1 使 Poisson 尾部 < tail_target。"""
    accumulator = PoissonAccumulator(delta)
    accumulator.advance()
    while not accumulator.tail < config.tail_target:
        if accumulator.index >= config.max_terms_per_axis:
            raise ResourceError(
                "直接计算所需项数超出上限",
                resource="oracle_terms",
                requested=accumulator.index + 1,
                limit=config.max_terms_per_axis,
                delta=delta,
            )
        accumulator.advance()

    extent = accumulator.index
    if config.fixed_terms is not None:
        extent = max(extent, config.fixed_terms)
    return extent


def direct_item_count(params: DistParams, config: Optional[OracleConfig] = None) -> int:
    """直接计算求值的项数 J × L。"""
    config = config or OracleConfig()
    return axis_extent(params.delta1, config) * axis_extent(params.delta2, config)


def _row_sums(params: DistParams, config: OracleConfig) -> List[float]:
    J = axis_extent(params.delta1, config)
    L = axis_extent(params.delta2, config)
    w1 = poisson_weights(params.delta1, J)
    w2 = poisson_weights(params.delta2, L)
    values = _kernel(config)(
        params.x,
        params.a + np.arange(J, dtype=float)[:, None],
        params.b + np.arange(L, dtype=float)[None, :],
    )
    items = w1[:, None] * w2[None, :] * values
    logger.debug("直接计算: %d×%d 项, kernel=%s", J, L, config.kernel)
    return [math.fsum(row) for row in items]


def direct_cdf(params: DistParams, config: Optional[OracleConfig] = None) -> float:
    """Σ_{j<J} Σ_{l<L} L_{j,l}，两个方向的 Poisson 尾部都小于 tail_target。"""
    config = config or OracleConfig()
    if params.x <= 0.0:
        return 0.0
    if params.x >= 1.0:
        return 1.0
    return min(1.0, math.fsum(_row_sums(params, config)))


def line_exact(
    params: DistParams,
    index: int,
    axis: Union[Axis, str],
    config: Optional[OracleConfig] = None,
) -> float:
    """第 index 行之和 R_j（axis=row）或第 index 列之和 C_l（axis=column）。"""
    config = config or OracleConfig()
    axis = Axis(axis)
    if int(index) != index or index < 0:
        raise DomainError(
            f"行/列下标必须为非负整数: {index!r}", parameter="index", value=index
        )
    x = min(1.0, max(0.0, params.x))

    if axis is Axis.ROW:
        weight = poisson_weight_at(params.delta1, int(index))
        extent = axis_extent(params.delta2, config)
        inner = poisson_weights(params.delta2, extent)
        a = params.a + index
        b = params.b + np.arange(extent, dtype=float)
    else:
        weight = poisson_weight_at(params.delta2, int(index))
        extent = axis_extent(params.delta1, config)
        inner = poisson_weights(params.delta1, extent)
        a = params.a + np.arange(extent, dtype=float)
        b = params.b + index

    values = np.broadcast_to(_kernel(config)(x, a, b), inner.shape)
    return math.fsum(weight * inner * values)


@dataclass
class ErrorReport:
    """算法结果与直接计算的对比。"""

    p_oracle: float
    p_method: float
    error: float
    upper_bound: float
    control_line: float
    bound_respected: bool
    method: Method

    def to_dict(self) -> Dict[str, Any]:
        return {
            "method": self.method.value,
            "p_oracle": self.p_oracle,
            "p_method": self.p_method,
            "error": self.error,
            "upper_bound": self.upper_bound,
            "control_line": self.control_line,
            "bound_respected": self.bound_respected,
        }


def bound_chain_holds(error: float, upper_bound: float, control_line: float) -> bool:
    """0 ≤ error ≤ upper_bound ≤ control_line（允许舍入误差）。"""
    return (
        -ROUNDOFF_SLACK <= error <= upper_bound + ROUNDOFF_SLACK
        and upper_bound <= control_line
    )


def error_report(report: CdfReport, p_oracle: float) -> ErrorReport:
    error = p_oracle - report.p_hat
    return ErrorReport(
        p_oracle=p_oracle,
        p_method=report.p_hat,
        error=error,
        upper_bound=report.upper_bound,
        control_line=report.control_line,
        bound_respected=bound_chain_holds(
            error, report.upper_bound, report.control_line
        ),
        method=report.method,
    )


def compare(
    params: DistParams,
    controls: Optional[ErrorControls] = None,
    method: Union[Method, str] = Method.DIV1,
    config: Optional[OracleConfig] = None,
) -> ErrorReport:
    """运行指定算法与直接计算并比较。"""
    report = beta_cdf(params, method, controls)
    result = error_report(report, direct_cdf(params, config))
    if not result.bound_respected:
        logger.warning(
            "%s 误差链不成立: error=%.3e, U=%.3e, CL=%.3e",
            result.method.value,
            result.error,
            result.upper_bound,
            result.control_line,
        )
    return result


@dataclass
class LineComparison:
    """单行（列）的截断和与精确和对比。"""

    index: int
    trunc_count: int
    exact: float
    partial_sum: float
    error: float
    residual_bound: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "index": self.index,
            "trunc_count": self.trunc_count,
            "exact": self.exact,
            "partial_sum": self.partial_sum,
            "error": self.error,
            "residual_bound": self.residual_bound,
        }


def compare_lines(
    params: DistParams,
    controls: Optional[ErrorControls] = None,
    method: Union[Method, str] = Method.DIV1,
    config: Optional[OracleConfig] = None,
) -> List[LineComparison]:
    """区域 0 中每一行（DIV1）或每一列（DIV2）的真实余项与余项上界。"""
    report = beta_cdf(params, method, controls)
    axis = Axis.ROW if report.method is Method.DIV1 else Axis.COLUMN
    comparisons = []
    for line in report.lines:
        exact = line_exact(params, line.index, axis, config)
        comparisons.append(
            LineComparison(
                index=line.index,
                trunc_count=line.trunc_count,
                exact=exact,
                partial_sum=line.partial_sum,
                error=exact - line.partial_sum,
                residual_bound=line.residual_bound,
            )
        )
    return comparisons


__all__ = [
    "ROUNDOFF_SLACK",
    "OracleConfig",
    "ErrorReport",
    "LineComparison",
    "axis_extent",
    "direct_item_count",
    "direct_cdf",
    "line_exact",
    "bound_chain_holds",
    "error_report",
    "compare",
    "compare_lines",
]
