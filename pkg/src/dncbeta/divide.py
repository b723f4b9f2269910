"""分块截断算法 DIV1 / DIV2。

两种算法都把 M 矩阵划分为三块：区域 0 逐项求和，区域 1、2 只给出质量上界。

- DIV1 按行分割：找到边界 j1 使行方向 Poisson 尾部 < eps_tail，对 j < j1 的每一行
  自适应截断，使该行余项上界 < eps_line。
- DIV2 按列分割，方向互换。

总误差上界 U = 1 - 区域 0 覆盖的 Poisson 乘积质量，且 U < 控制线。
"""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .exceptions import DomainError, ResourceError
from .series import DistParams, PoissonAccumulator, check_noncentrality
from .special import BetaArgs, inc_beta_chain_a, inc_beta_chain_b, reg_inc_beta_array
from .types import Axis, Method

logger = logging.getLogger(__name__)

MAX_LINE_TERMS = 100_000


class ErrorControls(BaseModel):
    """截断控制参数。

    eps_line 为单行（DIV1）或单列（DIV2）的余项上限，eps_tail 为被整体舍弃区域
    （DIV1 的区域 2、DIV2 的区域 1）的质量上限。
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    eps_line: float = Field(default=1e-7, gt=0, description="单行/单列余项上限")
    eps_tail: float = Field(default=1e-5, gt=0, le=0.1, description="尾部区域质量上限")

    @model_validator(mode="after")
    def _validate_order(self) -> "ErrorControls":
        if self.eps_line > self.eps_tail:
            raise ValueError(
                f"eps_line ({self.eps_line}) 不能大于 eps_tail ({self.eps_tail})"
            )
        return self

    def scaled(self, factor: float) -> "ErrorControls":
        """两个阈值同乘 factor。"""
        return ErrorControls(
            eps_line=self.eps_line * factor, eps_tail=self.eps_tail * factor
        )


@dataclass
class LineDiagnostic:
    """区域 0 中一行（或一列）的截断记录。

    trunc_count 为该行保留的项数；last_index = trunc_count - 1 为保留的最后一项下标。
    """

    index: int
    trunc_count: int
    partial_sum: float
    residual_bound: float
    covered_mass: float
    axis: Axis = Axis.ROW

    @property
    def last_index(self) -> int:
        return self.trunc_count - 1

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["axis"] = self.axis.value
        return data


@dataclass
class CdfReport:
    """一次 DIV1 / DIV2 计算的结果与误差记录。"""

    p_hat: float
    upper_bound: float
    control_line: float
    boundary: int
    item_count: int
    method: Method
    lines: List[LineDiagnostic] = field(default_factory=list)

    @property
    def trunc_counts(self) -> List[int]:
        return [line.trunc_count for line in self.lines]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "method": self.method.value,
            "p_hat": self.p_hat,
            "upper_bound": self.upper_bound,
            "control_line": self.control_line,
            "boundary": self.boundary,
            "item_count": self.item_count,
            "lines": [line.to_dict() for line in self.lines],
        }


def _exact_report(p_hat: float, method: Method) -> CdfReport:
    return CdfReport(
        p_hat=p_hat,
        upper_bound=0.0,
        control_line=0.0,
        boundary=0,
        item_count=0,
        method=method,
    )


def find_boundary(delta: float, eps_tail: float) -> int:
    """使 poisson_tail(delta, k) < eps_tail 成立的最小 k ≥ 1。"""
    if not eps_tail > 0:
        raise DomainError(
            f"eps_tail 必须为正: {eps_tail!r}", parameter="eps_tail", value=eps_tail
        )

    accumulator = PoissonAccumulator(delta)
    accumulator.advance()
    while not accumulator.tail < eps_tail:
        if accumulator.index >= MAX_LINE_TERMS:
            raise ResourceError(
                "边界搜索超出最大项数",
                resource="boundary_terms",
                requested=accumulator.index,
                limit=MAX_LINE_TERMS,
            )
        accumulator.advance()
    return accumulator.index


@dataclass
class _LinePlan:
    index: int
    weight: float
    inner_weights: List[float]
    residual_bound: float
    covered_mass: float


def _plan_line(
    index: int, weight: float, inner_delta: float, eps_line: float
) -> _LinePlan:
    """确定一行的截断项数：最小的 n 使 weight · tail(inner_delta, n) < eps_line。"""
    accumulator = PoissonAccumulator(inner_delta)
    inner_weights: List[float] = []
    while not weight * accumulator.tail < eps_line:
        if accumulator.index >= MAX_LINE_TERMS:
            raise ResourceError(
                f"第 {index} 行截断超出最大项数",
                resource="line_terms",
                requested=accumulator.index,
                limit=MAX_LINE_TERMS,
            )
        inner_weights.append(accumulator.advance())
    return _LinePlan(
        index=index,
        weight=weight,
        inner_weights=inner_weights,
        residual_bound=weight * accumulator.tail,
        covered_mass=weight * accumulator.mass,
    )


def _shape_offsets(axis: Axis, index: int, count: int):
    """返回一行内各项的 (a 偏移, b 偏移)。"""
    inner = np.arange(count, dtype=float)
    if axis is Axis.ROW:
        return np.full(count, float(index)), inner
    return inner, np.full(count, float(index))


def _line_values(
    params: DistParams, axis: Axis, plans: Sequence[_LinePlan], use_recurrence: bool
) -> List[np.ndarray]:
    """区域 0 各行的不完全 Beta 值。"""
    counts = [len(plan.inner_weights) for plan in plans]

    if use_recurrence:
        values = []
        for plan, count in zip(plans, counts):
            if count == 0:
                values.append(np.empty(0))
            elif axis is Axis.ROW:
                start = BetaArgs(params.x, params.a + plan.index, params.b)
                values.append(np.asarray(inc_beta_chain_b(start, count)))
            else:
                start = BetaArgs(params.x, params.a, params.b + plan.index)
                values.append(np.asarray(inc_beta_chain_a(start, count)))
        return values

    total = sum(counts)
    if total == 0:
        return [np.empty(0) for _ in plans]

    offsets = [
        _shape_offsets(axis, plan.index, count) for plan, count in zip(plans, counts)
    ]
    a_offsets = np.concatenate([a_off for a_off, _ in offsets])
    b_offsets = np.concatenate([b_off for _, b_off in offsets])
    flat = reg_inc_beta_array(params.x, params.a + a_offsets, params.b + b_offsets)
    return np.split(flat, np.cumsum(counts)[:-1])


def _segmented_cdf(
    params: DistParams,
    controls: ErrorControls,
    axis: Axis,
    use_recurrence: bool,
) -> CdfReport:
    method = Method.DIV1 if axis is Axis.ROW else Method.DIV2
    if params.x <= 0.0:
        return _exact_report(0.0, method)
    if params.x >= 1.0:
        return _exact_report(1.0, method)

    if axis is Axis.ROW:
        outer_delta, inner_delta = params.delta1, params.delta2
    else:
        outer_delta, inner_delta = params.delta2, params.delta1

    boundary = find_boundary(outer_delta, controls.eps_tail)
    outer = PoissonAccumulator(outer_delta)
    plans = [
        _plan_line(index, outer.advance(), inner_delta, controls.eps_line)
        for index in range(boundary)
    ]

    lines: List[LineDiagnostic] = []
    for plan, values in zip(plans, _line_values(params, axis, plans, use_recurrence)):
        items = plan.weight * np.asarray(plan.inner_weights, dtype=float) * values
        lines.append(
            LineDiagnostic(
                index=plan.index,
                trunc_count=len(plan.inner_weights),
                partial_sum=math.fsum(items),
                residual_bound=plan.residual_bound,
                covered_mass=plan.covered_mass,
                axis=axis,
            )
        )

    p_hat = min(1.0, max(0.0, math.fsum(line.partial_sum for line in lines)))
    upper_bound = max(0.0, 1.0 - math.fsum(line.covered_mass for line in lines))
    control_line = boundary * controls.eps_line + controls.eps_tail
    item_count = sum(line.trunc_count for line in lines)

    logger.debug(
        "%s: 边界 %d, 项数 %d, p_hat=%.10f, U=%.3e, CL=%.3e",
        method.value,
        boundary,
        item_count,
        p_hat,
        upper_bound,
        control_line,
    )
    return CdfReport(
        p_hat=p_hat,
        upper_bound=upper_bound,
        control_line=control_line,
        boundary=boundary,
        item_count=item_count,
        method=method,
        lines=lines,
    )


def line_sum_adaptive(
    params: DistParams,
    fixed_index: int,
    axis: Union[Axis, str],
    eps_line: float,
    *,
    use_recurrence: bool = False,
) -> LineDiagnostic:
    """对第 fixed_index 行（axis=row）或列（axis=column）自适应截断求和。"""
    axis = Axis(axis)
    if int(fixed_index) != fixed_index or fixed_index < 0:
        raise DomainError(
            f"行/列下标必须为非负整数: {fixed_index!r}",
            parameter="fixed_index",
            value=fixed_index,
        )
    if not eps_line > 0:
        raise DomainError(
            f"eps_line 必须为正: {eps_line!r}", parameter="eps_line", value=eps_line
        )
    if not 0.0 <= params.x <= 1.0:
        raise DomainError(
            f"逐行求和要求 x 位于 [0, 1] 内: {params.x!r}", parameter="x", value=params.x
        )

    if axis is Axis.ROW:
        outer_delta, inner_delta = params.delta1, params.delta2
    else:
        outer_delta, inner_delta = params.delta2, params.delta1

    outer = PoissonAccumulator(outer_delta)
    for _ in range(int(fixed_index)):
        outer.advance()
    plan = _plan_line(int(fixed_index), outer.weight, inner_delta, eps_line)
    values = _line_values(params, axis, [plan], use_recurrence)[0]
    items = plan.weight * np.asarray(plan.inner_weights, dtype=float) * values
    return LineDiagnostic(
        index=plan.index,
        trunc_count=len(plan.inner_weights),
        partial_sum=math.fsum(items),
        residual_bound=plan.residual_bound,
        covered_mass=plan.covered_mass,
        axis=axis,
    )


def div1_cdf(
    params: DistParams,
    controls: Optional[ErrorControls] = None,
    *,
    use_recurrence: bool = False,
) -> CdfReport:
    """DIV1：按行分割计算 CDF，误差上界 U1 < j1·eps_line + eps_tail。"""
    return _segmented_cdf(params, controls or ErrorControls(), Axis.ROW, use_recurrence)


def div2_cdf(
    params: DistParams,
    controls: Optional[ErrorControls] = None,
    *,
    use_recurrence: bool = False,
) -> CdfReport:
    """DIV2：按列分割计算 CDF，误差上界 U2 < eps_tail + l1·eps_line。"""
    return _segmented_cdf(
        params, controls or ErrorControls(), Axis.COLUMN, use_recurrence
    )


def beta_cdf(
    params: DistParams,
    method: Union[Method, str] = Method.DIV1,
    controls: Optional[ErrorControls] = None,
    *,
    use_recurrence: bool = False,
) -> CdfReport:
    """按 method 分派到 div1_cdf 或 div2_cdf。"""
    if Method.parse(method) is Method.DIV1:
        return div1_cdf(params, controls, use_recurrence=use_recurrence)
    return div2_cdf(params, controls, use_recurrence=use_recurrence)


def f_to_beta_x(n1: float, n2: float, f: float) -> float:
    """F 分布的取值 f 对应的 Beta 积分上限 x = n1·f / (n1·f + n2)。

    按 1 / (1 + n2/(n1·f)) 计算，n1·f 上溢时得到 1，下溢为 0 时得到 0。
    """
    if f <= 0:
        return 0.0
    scaled = n1 * f
    if scaled == 0.0:
        return 0.0
    return 1.0 / (1.0 + n2 / scaled)


def f_cdf(
    n1: float,
    n2: float,
    lambda1: float,
    lambda2: float,
    f: float,
    method: Union[Method, str] = Method.DIV1,
    controls: Optional[ErrorControls] = None,
    *,
    use_recurrence: bool = False,
) -> CdfReport:
    """双非中心 F 分布的 CDF，经 x = n1·f/(n1·f + n2) 转换为 Beta 形式计算。"""
    for name, value in (("n1", n1), ("n2", n2)):
        if not math.isfinite(value) or value <= 0:
            raise DomainError(
                f"自由度 {name} 必须为正的有限值: {value!r}", parameter=name, value=value
            )
    check_noncentrality(lambda1 / 2.0, "delta1")
    check_noncentrality(lambda2 / 2.0, "delta2")
    if not math.isfinite(f):
        raise DomainError(f"f 必须为有限值: {f!r}", parameter="f", value=f)

    params = DistParams.from_degrees(n1, n2, lambda1, lambda2, f_to_beta_x(n1, n2, f))
    return beta_cdf(params, method, controls, use_recurrence=use_recurrence)


__all__ = [
    "MAX_LINE_TERMS",
    "ErrorControls",
    "LineDiagnostic",
    "CdfReport",
    "find_boundary",
    "line_sum_adaptive",
    "div1_cdf",
    "div2_cdf",
    "beta_cdf",
    "f_to_beta_x",
    "f_cdf",
]
