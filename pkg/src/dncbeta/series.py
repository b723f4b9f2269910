"""双重级数矩阵 M 的表示。

M 的第 (j, l) 项为
    L_{j,l} = e^{-(δ1+δ2)} · δ1^j / j! · δ2^l / l! · I_x(a+j, b+l)，
所有项之和即双非中心 Beta 分布的 CDF。本模块提供 Poisson 权重、尾部质量、
单项与矩形切片的计算；分块截断算法见 :mod:`dncbeta.divide`。
"""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, List, Tuple

import numpy as np

from .exceptions import DomainError, RangeError, ResourceError
from .special import BetaArgs, inc_beta_chain_b, reg_inc_beta_array

logger = logging.getLogger(__name__)

# e^{-δ} 在 δ ≥ 700 附近开始下溢
MAX_NONCENTRALITY = 700.0
DEFAULT_CELL_BUDGET = 10_000_000


def check_noncentrality(delta: float, parameter: str = "delta") -> float:
    """校验非中心参数 δ，返回其浮点值。"""
    if not math.isfinite(delta) or delta < 0:
        raise DomainError(
            f"非中心参数 {parameter} 必须为非负有限值: {delta!r}",
            parameter=parameter,
            value=delta,
        )
    if delta >= MAX_NONCENTRALITY:
        raise RangeError(parameter=parameter, value=delta, limit=MAX_NONCENTRALITY)
    return float(delta)


@dataclass(frozen=True)
class DistParams:
    """双非中心 Beta 分布的参数与求值点。

    a、b 为形状参数（自由度的一半），delta1、delta2 为非中心参数的一半。
    x 只要求有限；区间外的取值由调用方截断为 CDF 0 或 1。
    """

    a: float
    b: float
    delta1: float
    delta2: float
    x: float

    def __post_init__(self) -> None:
        for name in ("a", "b"):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= 0:
                raise DomainError(
                    f"形状参数 {name} 必须为正的有限值: {value!r}",
                    parameter=name,
                    value=value,
                )
        check_noncentrality(self.delta1, "delta1")
        check_noncentrality(self.delta2, "delta2")
        if not math.isfinite(self.x):
            raise DomainError(parameter="x", value=self.x)

    @classmethod
    def from_degrees(
        cls, n1: float, n2: float, lambda1: float, lambda2: float, x: float
    ) -> "DistParams":
        """由自由度 n1、n2 与非中心参数 λ1、λ2 构造（各取一半）。"""
        return cls(n1 / 2.0, n2 / 2.0, lambda1 / 2.0, lambda2 / 2.0, x)

    @property
    def in_open_unit_interval(self) -> bool:
        return 0.0 < self.x < 1.0

    def with_x(self, x: float) -> "DistParams":
        return DistParams(self.a, self.b, self.delta1, self.delta2, x)

    def mirrored(self) -> "DistParams":
        """(b, a, δ2, δ1, 1 - x)，其 CDF 与原参数的 CDF 互补。"""
        return DistParams(self.b, self.a, self.delta2, self.delta1, 1.0 - self.x)

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


class PoissonAccumulator:
    """按乘法递推 w_k = w_{k-1}·δ/k 逐项生成 Poisson 权重并累计已覆盖质量。

    包内所有尾部质量、边界与误差上界都经由本类计算，保证彼此逐位一致。
    """

    __slots__ = ("delta", "index", "weight", "mass")

    def __init__(self, delta: float):
        self.delta = check_noncentrality(delta)
        self.index = 0
        self.weight = math.exp(-self.delta)
        self.mass = 0.0

    @property
    def tail(self) -> float:
        """1 - Σ_{k<index} w_k，截断到 [0, 1]。"""
        return min(1.0, max(0.0, 1.0 - self.mass))

    def advance(self) -> float:
        """累计当前权重并前进一项，返回被累计的权重。"""
        weight = self.weight
        self.mass += weight
        self.index += 1
        self.weight = weight * self.delta / self.index
        return weight

    def __repr__(self) -> str:
        return (
            f"PoissonAccumulator(delta={self.delta!r}, index={self.index}, "
            f"tail={self.tail:.3e})"
        )


def _require_count(count: int, parameter: str, minimum: int) -> int:
    if int(count) != count or count < minimum:
        raise DomainError(
            f"{parameter} 必须为 ≥ {minimum} 的整数: {count!r}",
            parameter=parameter,
            value=count,
        )
    return int(count)


def _weights_and_mass(delta: float, count: int) -> Tuple[np.ndarray, float]:
    accumulator = PoissonAccumulator(delta)
    weights = np.empty(count, dtype=float)
    for k in range(count):
        weights[k] = accumulator.advance()
    return weights, accumulator.mass


def poisson_weights(delta: float, count: int) -> np.ndarray:
    """[e^{-δ} δ^k / k! for k < count]，由乘法递推生成。"""
    count = _require_count(count, "count", 1)
    weights, _ = _weights_and_mass(delta, count)
    return weights


def poisson_tail(delta: float, k: int) -> float:
    """1 - e^{-δ} Σ_{j<k} δ^j / j!，截断到 [0, 1]；k = 0 时为 1。"""
    k = _require_count(k, "k", 0)
    accumulator = PoissonAccumulator(delta)
    for _ in range(k):
        accumulator.advance()
    return accumulator.tail


def poisson_weight_at(delta: float, k: int) -> float:
    """第 k 个 Poisson 权重，与 poisson_weights(delta, k+1)[k] 逐位相同。"""
    k = _require_count(k, "k", 0)
    accumulator = PoissonAccumulator(delta)
    for _ in range(k):
        accumulator.advance()
    return accumulator.weight


def matrix_item(params: DistParams, j: int, l: int) -> float:
    """M 矩阵的单项 L_{j,l}。"""
    j = _require_count(j, "j", 0)
    l = _require_count(l, "l", 0)
    weight = poisson_weight_at(params.delta1, j) * poisson_weight_at(params.delta2, l)
    value = reg_inc_beta_array(params.x, params.a + j, params.b + l)[0]
    return weight * float(value)


@dataclass
class MatrixSlab:
    """M 矩阵左上角 rows × cols 的稠密切片。"""

    rows: int
    cols: int
    items: np.ndarray
    params: DistParams
    covered_mass: float

    def total(self) -> float:
        return math.fsum(self.items.ravel())

    def argmax(self) -> Tuple[int, int]:
        """最大项所在的 (j, l)。"""
        j, l = np.unravel_index(int(np.argmax(self.items)), self.items.shape)
        return int(j), int(l)

    @property
    def residual_bound(self) -> float:
        """切片之外的 Poisson 乘积质量，是切片外所有项之和的上界。"""
        return max(0.0, 1.0 - self.covered_mass)

    def to_dict(self) -> Dict[str, Any]:
        j, l = self.argmax()
        return {
            "rows": self.rows,
            "cols": self.cols,
            "params": self.params.to_dict(),
            "total": self.total(),
            "residual_bound": self.residual_bound,
            "argmax": [j, l],
            "max_item": float(self.items[j, l]),
        }


def matrix_slab(
    params: DistParams,
    J: int,
    L: int,
    *,
    use_recurrence: bool = False,
    cell_budget: int = DEFAULT_CELL_BUDGET,
) -> MatrixSlab:
    """计算 j < J、l < L 的全部 L_{j,l}。

    use_recurrence 为真时每行的不完全 Beta 值由 inc_beta_step_b 递推链给出，
    否则逐项直接计算（与 matrix_item 逐位相同）。
    """
    J = _require_count(J, "J", 1)
    L = _require_count(L, "L", 1)
    if J * L > cell_budget:
        raise ResourceError(
            f"切片规模 {J}×{L} 超出单元上限",
            resource="slab_cells",
            requested=J * L,
            limit=cell_budget,
        )
    if not 0.0 <= params.x <= 1.0:
        raise DomainError(
            f"切片要求 x 位于 [0, 1] 内: {params.x!r}", parameter="x", value=params.x
        )

    row_weights, row_mass = _weights_and_mass(params.delta1, J)
    col_weights, col_mass = _weights_and_mass(params.delta2, L)

    if use_recurrence:
        rows: List[List[float]] = [
            inc_beta_chain_b(BetaArgs(params.x, params.a + j, params.b), L)
            for j in range(J)
        ]
        values = np.asarray(rows, dtype=float)
    else:
        values = reg_inc_beta_array(
            params.x,
            params.a + np.arange(J, dtype=float)[:, None],
            params.b + np.arange(L, dtype=float)[None, :],
        )

    items = row_weights[:, None] * col_weights[None, :] * values
    logger.debug("切片 %dx%d: 覆盖质量 %.6e", J, L, row_mass * col_mass)
    return MatrixSlab(
        rows=J,
        cols=L,
        items=items,
        params=params,
        covered_mass=row_mass * col_mass,
    )


__all__ = [
    "MAX_NONCENTRALITY",
    "DEFAULT_CELL_BUDGET",
    "DistParams",
    "PoissonAccumulator",
    "MatrixSlab",
    "check_noncentrality",
    "poisson_weights",
    "poisson_tail",
    "poisson_weight_at",
    "matrix_item",
    "matrix_slab",
]
