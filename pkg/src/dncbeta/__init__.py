"""
dncbeta - 双非中心 Beta / F 分布的累积分布函数计算

以分块截断算法 DIV1（按行）与 DIV2（按列）对 Poisson 加权的不完全 Beta 双重级数
求和，每次计算都给出可验证的误差上界与事先可控的控制线。

示例:
    from dncbeta import DistParams, div1_cdf

    params = DistParams.from_degrees(n1=2, n2=4, lambda1=0.5, lambda2=0.5, x=0.7)
    report = div1_cdf(params)
    print(report.p_hat, report.upper_bound, report.control_line)
"""

__version__ = "1.0.0"

from .config import DNCBetaConfig, load_config
from .divide import (
    CdfReport,
    ErrorControls,
    LineDiagnostic,
    beta_cdf,
    div1_cdf,
    div2_cdf,
    f_cdf,
    find_boundary,
    line_sum_adaptive,
)
from .exceptions import (
    ConvergenceError,
    DNCBetaError,
    DomainError,
    ErrorCode,
    OutputError,
    RangeError,
    ResourceError,
)
from .oracle import (
    ErrorReport,
    LineComparison,
    OracleConfig,
    compare,
    compare_lines,
    direct_cdf,
    direct_item_count,
    line_exact,
)
from .series import (
    DistParams,
    MatrixSlab,
    PoissonAccumulator,
    matrix_item,
    matrix_slab,
    poisson_tail,
    poisson_weights,
)
from .special import (
    BetaArgs,
    inc_beta_chain_a,
    inc_beta_chain_b,
    inc_beta_step_a,
    inc_beta_step_b,
    log_gamma,
    reg_inc_beta,
    reg_inc_beta_array,
    reg_inc_beta_even,
    reg_inc_beta_odd,
)
from .types import Axis, EvenParameter, Method, OutputFormat

__all__ = [
    "__version__",
    # 配置
    "DNCBetaConfig",
    "load_config",
    # 不完全 Beta
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
    # 级数矩阵
    "DistParams",
    "MatrixSlab",
    "PoissonAccumulator",
    "poisson_weights",
    "poisson_tail",
    "matrix_item",
    "matrix_slab",
    # 分块算法
    "ErrorControls",
    "LineDiagnostic",
    "CdfReport",
    "find_boundary",
    "line_sum_adaptive",
    "div1_cdf",
    "div2_cdf",
    "beta_cdf",
    "f_cdf",
    # 直接计算
    "OracleConfig",
    "ErrorReport",
    "LineComparison",
    "direct_cdf",
    "direct_item_count",
    "line_exact",
    "compare",
    "compare_lines",
    # 类型
    "Axis",
    "EvenParameter",
    "Method",
    "OutputFormat",
    # 异常
    "ErrorCode",
    "DNCBetaError",
    "DomainError",
    "RangeError",
    "ResourceError",
    "ConvergenceError",
    "OutputError",
]
