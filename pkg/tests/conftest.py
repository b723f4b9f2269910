"""
测试配置和共享 fixtures

提供参考参数组、固定种子的随机数发生器和隔离的环境变量 / 工作目录。
"""

import os

import numpy as np
import pytest

from dncbeta import DistParams, ErrorControls, OracleConfig
from dncbeta.tables import BETA_CASES, LINE_CASE, PRECISION_CASE

# =============================================================================
# 参数组
# =============================================================================


@pytest.fixture
def controls() -> ErrorControls:
    """默认截断控制：eps_line = 1e-7，eps_tail = 1e-5。"""
    return ErrorControls()


@pytest.fixture
def oracle_config() -> OracleConfig:
    return OracleConfig()


@pytest.fixture
def line_params() -> DistParams:
    """逐行 / 逐列截断表使用的参数组 (5, 7, 6.25, 0.25, 0.3)。"""
    return DistParams.from_degrees(*LINE_CASE)


@pytest.fixture
def precision_params() -> DistParams:
    """精度随控制参数变化表使用的参数组 (8, 15, 4, 9, 0.6)。"""
    return DistParams.from_degrees(*PRECISION_CASE)


@pytest.fixture(params=range(len(BETA_CASES)), ids=lambda i: f"case{i + 1}")
def beta_case(request):
    """Beta 参考表的 8 组参数，返回 (行号, DistParams)。"""
    index = request.param
    return index, DistParams.from_degrees(*BETA_CASES[index])


@pytest.fixture
def large_params() -> DistParams:
    """大非中心参数组：a=20, b=492, δ1=30.72, δ2=20.48, x=0.1，项值峰值远离原点。"""
    return DistParams(20.0, 492.0, 30.72, 20.48, 0.1)


# =============================================================================
# 随机参数
# =============================================================================


@pytest.fixture
def rng() -> np.random.Generator:
    """固定种子，保证随机参数集可复现。"""
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def random_param_sets():
    """200 组 a、b ∈ [0.5, 50]，δ1、δ2 ∈ [0, 40]，x ∈ [0.01, 0.99] 的随机参数。"""
    generator = np.random.default_rng(7)
    sets = []
    for _ in range(200):
        a, b = generator.uniform(0.5, 50.0, size=2)
        delta1, delta2 = generator.uniform(0.0, 40.0, size=2)
        x = generator.uniform(0.01, 0.99)
        sets.append(
            DistParams(float(a), float(b), float(delta1), float(delta2), float(x))
        )
    return sets


# =============================================================================
# 环境
# =============================================================================


@pytest.fixture
def clean_env(monkeypatch):
    """清除所有 DNCBETA_ 前缀的环境变量。"""
    for key in list(os.environ):
        if key.startswith("DNCBETA_"):
            monkeypatch.delenv(key, raising=False)
    return monkeypatch


@pytest.fixture
def isolated_dir(tmp_path, monkeypatch, clean_env):
    """切换到空的临时目录，避免读取仓库自身的 pyproject.toml。"""
    monkeypatch.chdir(tmp_path)
    return tmp_path
