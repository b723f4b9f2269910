"""不完全 Beta 函数模块。

提供正则化不完全 Beta 函数 I_x(a, b) 的通用连分式算法、整数 / 半整数参数下的
闭式表达式，以及沿 a、b 方向逐项推进的递推关系。所有函数均为纯函数，可在多线程中
并发调用。
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterable, List, Union

import numpy as np
from numpy.typing import ArrayLike
from scipy.special import betaln, gammaln

from .exceptions import ConvergenceError, DomainError
from .types import EvenParameter

logger = logging.getLogger(__name__)

CF_MAX_ITERATIONS = 10_000
CF_EPSILON = 1.0e-15
CF_TINY = 1.0e-300

# 线性累乘的中间项越出此范围时改用对数空间
LOG_SPACE_THRESHOLD = 1.0e300
_LINEAR_FLOOR = 1.0e-300
_LOG_LINEAR_FLOOR = math.log(_LINEAR_FLOOR)


@dataclass(frozen=True)
class BetaArgs:
    """I_x(a, b) 的参数：积分上限 x 与两个形状参数 a、b。"""

    x: float
    a: float
    b: float

    def __post_init__(self) -> None:
        for name in ("x", "a", "b"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise DomainError(parameter=name, value=value)
        if not 0.0 <= self.x <= 1.0:
            raise DomainError(
                f"积分上限 x 必须位于 [0, 1] 内: {self.x!r}", parameter="x", value=self.x
            )
        if self.a <= 0:
            raise DomainError(f"形状参数 a 必须为正: {self.a!r}", parameter="a", value=self.a)
        if self.b <= 0:
            raise DomainError(f"形状参数 b 必须为正: {self.b!r}", parameter="b", value=self.b)

    def shifted(self, da: float = 0.0, db: float = 0.0) -> "BetaArgs":
        """返回 (x, a + da, b + db)。"""
        return BetaArgs(self.x, self.a + da, self.b + db)


def log_gamma(z: float) -> float:
    """ln Γ(z)，z > 0。"""
    if not math.isfinite(z) or z <= 0:
        raise DomainError(f"log_gamma 要求 z > 0: {z!r}", parameter="z", value=z)
    return float(gammaln(z))


def _clamp_unit(value: float) -> float:
    return min(1.0, max(0.0, value))


def _log_front_factor(a: float, b: float, log_x: float, log_y: float) -> float:
    """ln[x^a (1-x)^b / (a B(a, b))]，log_y 为 ln(1 - x)。"""
    return a * log_x + b * log_y - math.log(a) - float(betaln(a, b))


def _beta_continued_fraction(x: float, a: float, b: float) -> float:
    """改进 Lentz 法求不完全 Beta 的连分式部分。"""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < CF_TINY:
        d = CF_TINY
    d = 1.0 / d
    h = d

    for m in range(1, CF_MAX_ITERATIONS + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < CF_TINY:
            d = CF_TINY
        c = 1.0 + aa / c
        if abs(c) < CF_TINY:
            c = CF_TINY
        d = 1.0 / d
        h *= d * c

        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < CF_TINY:
            d = CF_TINY
        c = 1.0 + aa / c
        if abs(c) < CF_TINY:
            c = CF_TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) <= CF_EPSILON:
            return h

    raise ConvergenceError(
        f"不完全 Beta 连分式在 {CF_MAX_ITERATIONS} 次迭代内未收敛",
        routine="reg_inc_beta",
        iterations=CF_MAX_ITERATIONS,
        x=x,
        a=a,
        b=b,
    )


def reg_inc_beta(args: BetaArgs) -> float:
    """正则化不完全 Beta 函数 I_x(a, b)。

    x > (a+1)/(a+b+2) 时利用对称关系 I_x(a, b) = 1 - I_{1-x}(b, a)，
    保证连分式总在快速收敛的一侧求值。
    """
    x, a, b = args.x, args.a, args.b
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0

    log_x = math.log(x)
    log_y = math.log1p(-x)
    if x > (a + 1.0) / (a + b + 2.0):
        front = math.exp(_log_front_factor(b, a, log_y, log_x))
        return _clamp_unit(1.0 - front * _beta_continued_fraction(1.0 - x, b, a))

    front = math.exp(_log_front_factor(a, b, log_x, log_y))
    return _clamp_unit(front * _beta_continued_fraction(x, a, b))


def _floor_tiny(values: np.ndarray) -> np.ndarray:
    return np.where(np.abs(values) < CF_TINY, CF_TINY, values)


def _beta_continued_fraction_array(
    x: np.ndarray, a: np.ndarray, b: np.ndarray
) -> np.ndarray:
    """_beta_continued_fraction 的逐元素向量化版本（一维输入）。

    每次迭代只推进尚未收敛的元素；元素收敛后写入结果并移出活动集，
    每个元素的运算序列与标量版本一致。
    """
    result = np.empty_like(x)
    pending = np.arange(x.size)
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = np.ones_like(x)
    d = 1.0 / _floor_tiny(1.0 - qab * x / qap)
    h = d.copy()

    for m in range(1, CF_MAX_ITERATIONS + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 / _floor_tiny(1.0 + aa * d)
        c = _floor_tiny(1.0 + aa / c)
        h = h * (d * c)

        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 / _floor_tiny(1.0 + aa * d)
        c = _floor_tiny(1.0 + aa / c)
        delta = d * c
        h = h * delta

        done = np.abs(delta - 1.0) <= CF_EPSILON
        if done.any():
            result[pending[done]] = h[done]
            keep = ~done
            pending = pending[keep]
            if pending.size == 0:
                return result
            x, a, b = x[keep], a[keep], b[keep]
            qab, qap, qam = qab[keep], qap[keep], qam[keep]
            c, d, h = c[keep], d[keep], h[keep]

    raise ConvergenceError(
        f"不完全 Beta 连分式在 {CF_MAX_ITERATIONS} 次迭代内未收敛",
        routine="reg_inc_beta_array",
        iterations=CF_MAX_ITERATIONS,
        pending=int(pending.size),
    )


def reg_inc_beta_array(x: ArrayLike, a: ArrayLike, b: ArrayLike) -> np.ndarray:
    """reg_inc_beta 的向量化形式，x、a、b 按 numpy 规则广播，返回至少一维的数组。

    与标量版本使用同一连分式与对称切换，供整块区域、切片和直接计算批量求值。
    """
    x, a, b = np.broadcast_arrays(
        np.atleast_1d(np.asarray(x, dtype=float)),
        np.atleast_1d(np.asarray(a, dtype=float)),
        np.atleast_1d(np.asarray(b, dtype=float)),
    )
    for name, values in (("x", x), ("a", a), ("b", b)):
        if not np.all(np.isfinite(values)):
            raise DomainError(f"参数 {name} 含非有限值", parameter=name)
    if np.any((x < 0.0) | (x > 1.0)):
        raise DomainError("积分上限 x 必须位于 [0, 1] 内", parameter="x")
    if np.any(a <= 0.0):
        raise DomainError("形状参数 a 必须为正", parameter="a")
    if np.any(b <= 0.0):
        raise DomainError("形状参数 b 必须为正", parameter="b")

    result = np.where(x >= 1.0, 1.0, 0.0)
    inner = (x > 0.0) & (x < 1.0)
    if not inner.any():
        return result

    xi, ai, bi = x[inner], a[inner], b[inner]
    swap = xi > (ai + 1.0) / (ai + bi + 2.0)
    log_front = (
        ai * np.log(xi)
        + bi * np.log1p(-xi)
        - np.log(np.where(swap, bi, ai))
        - betaln(ai, bi)
    )
    fraction = _beta_continued_fraction_array(
        np.where(swap, 1.0 - xi, xi),
        np.where(swap, bi, ai),
        np.where(swap, ai, bi),
    )
    value = np.exp(log_front) * fraction
    result[inner] = np.clip(np.where(swap, 1.0 - value, value), 0.0, 1.0)
    return result


def _is_positive_integer(value: float) -> bool:
    return value >= 1 and float(value).is_integer()


def _is_half_odd_integer(value: float) -> bool:
    return value >= 0.5 and float(value - 0.5).is_integer()


def _ratio_series(log_first: float, ratios: Iterable[float]) -> float:
    """Σ t_k，其中 t_0 = exp(log_first)，t_k = t_{k-1} · ratio_k。

    中间项越出 [1e-300, 1e300] 后改在对数空间累乘。
    """
    linear = log_first > _LOG_LINEAR_FLOOR
    log_term = log_first
    term = math.exp(log_first)
    total = term

    for ratio in ratios:
        if linear:
            candidate = term * ratio
            if _LINEAR_FLOOR < candidate < LOG_SPACE_THRESHOLD:
                term = candidate
                total += term
                continue
            linear = False
            log_term = math.log(term)
        log_term += math.log(ratio)
        total += math.exp(log_term)

    return total


def reg_inc_beta_even(
    args: BetaArgs, which_even: Union[EvenParameter, str]
) -> float:
    """n1（a 为正整数）或 n2（b 为正整数）为偶数时 I_x(a, b) 的有限和表达式。"""
    which = EvenParameter(which_even)
    x, a, b = args.x, args.a, args.b

    if which is EvenParameter.FIRST and not _is_positive_integer(a):
        raise DomainError(
            f"which_even=first 要求 a 为正整数: {a!r}", parameter="a", value=a
        )
    if which is EvenParameter.SECOND and not _is_positive_integer(b):
        raise DomainError(
            f"which_even=second 要求 b 为正整数: {b!r}", parameter="b", value=b
        )

    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0

    y = 1.0 - x
    if which is EvenParameter.FIRST:
        # 1 - Σ_{j<a} C(b+j-1, j) x^j (1-x)^b
        head = _ratio_series(
            b * math.log1p(-x),
            ((b + j - 1.0) / j * x for j in range(1, int(a))),
        )
        return _clamp_unit(1.0 - head)

    # Σ_{j<b} C(a+j-1, j) (1-x)^j x^a
    mass = _ratio_series(
        a * math.log(x),
        ((a + j - 1.0) / j * y for j in range(1, int(b))),
    )
    return _clamp_unit(mass)


def reg_inc_beta_odd(args: BetaArgs) -> float:
    """a、b 均为半奇数（n1、n2 均为奇数）时 I_x(a, b) 的闭式表达式。

    I = 1/2 - asin(1-2x)/π + (2/π) √(x(1-x)) · (D1·D2 - D3)，
    D2 的第 k 项携带 (1-x)^{k-1}，D1 只作用于 D2。
    """
    x, a, b = args.x, args.a, args.b
    if not _is_half_odd_integer(a):
        raise DomainError(f"a 必须为半奇数: {a!r}", parameter="a", value=a)
    if not _is_half_odd_integer(b):
        raise DomainError(f"b 必须为半奇数: {b!r}", parameter="b", value=b)

    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0

    p = int(a - 0.5)
    q = int(b - 0.5)
    y = 1.0 - x

    # 等价于 1/2 - asin(1-2x)/π
    base = 2.0 / math.pi * math.atan2(math.sqrt(x), math.sqrt(y))

    d1d2 = 0.0
    if q >= 1:
        log_d1 = p * math.log(x) + math.fsum(
            math.log(j / (j - 0.5)) for j in range(1, p + 1)
        )
        d1d2 = _ratio_series(
            log_d1,
            ((a + k - 1.5) / (k - 0.5) * y for k in range(2, q + 1)),
        )

    d3 = 0.0
    if p >= 1:
        d3 = _ratio_series(0.0, ((k - 1.0) / (k - 0.5) * x for k in range(2, p + 1)))

    return _clamp_unit(base + 2.0 / math.pi * math.sqrt(x * y) * (d1d2 - d3))


def _log_increment(args: BetaArgs, scale: float) -> float:
    """ln[x^a (1-x)^b / (scale · B(a, b))]。"""
    return (
        args.a * math.log(args.x)
        + args.b * math.log1p(-args.x)
        - math.log(scale)
        - float(betaln(args.a, args.b))
    )


def inc_beta_step_a(args: BetaArgs, I_ab: float) -> float:
    """由 I_x(a, b) 推出 I_x(a+1, b)。

    I_x(a+1, b) = I_x(a, b) - Γ(a+b)/(Γ(a+1)Γ(b)) · x^a (1-x)^b。
    """
    if args.x == 0.0 or args.x == 1.0:
        return _clamp_unit(I_ab)
    return _clamp_unit(I_ab - math.exp(_log_increment(args, args.a)))


def inc_beta_step_b(args: BetaArgs, I_ab: float) -> float:
    """由 I_x(a, b) 推出 I_x(a, b+1)。

    I_x(a, b+1) = I_x(a, b) + Γ(a+b)/(Γ(a)Γ(b+1)) · x^a (1-x)^b。
    """
    if args.x == 0.0 or args.x == 1.0:
        return _clamp_unit(I_ab)
    return _clamp_unit(I_ab + math.exp(_log_increment(args, args.b)))


def _chain(args: BetaArgs, count: int, *, along_a: bool) -> List[float]:
    if count < 1:
        raise DomainError(f"递推长度必须 ≥ 1: {count!r}", parameter="count", value=count)

    values = [reg_inc_beta(args)]
    current = args
    for _ in range(count - 1):
        if along_a:
            values.append(inc_beta_step_a(current, values[-1]))
            current = current.shifted(da=1.0)
        else:
            values.append(inc_beta_step_b(current, values[-1]))
            current = current.shifted(db=1.0)
    return values


def inc_beta_chain_a(args: BetaArgs, count: int) -> List[float]:
    """[I_x(a+k, b) for k < count]，首项直接计算，其余由 inc_beta_step_a 递推。"""
    return _chain(args, count, along_a=True)


def inc_beta_chain_b(args: BetaArgs, count: int) -> List[float]:
    """[I_x(a, b+k) for k < count]，首项直接计算，其余由 inc_beta_step_b 递推。"""
    return _chain(args, count, along_a=False)


__all__ = [
    "BetaArgs",
    "log_gamma",
    "reg_inc_beta",
    "reg_inc_beta_array",
    "reg_inc_beta_even",
    "reg_inc_beta_odd",
    "inc_beta_step_a",
    "inc_beta_step_b",
    "inc_beta_chain_a",
    "inc_beta_chain_b",
]
