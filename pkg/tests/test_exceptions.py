"""
异常类测试模块

测试全部异常类的属性、错误码与退出码，以及库函数在非法输入下抛出的异常类型。
"""

import math

import pytest

from dncbeta import DistParams, poisson_weights
from dncbeta.exceptions import (
    ConvergenceError,
    DNCBetaError,
    DomainError,
    ErrorCode,
    OutputError,
    RangeError,
    ResourceError,
)
from dncbeta.types import Method


class TestErrorCode:
    """测试 ErrorCode 枚举"""

    def test_error_code_values(self):
        """测试错误码值正确"""
        assert ErrorCode.DOMAIN.value == "DOMAIN_ERROR"
        assert ErrorCode.RANGE.value == "RANGE_ERROR"
        assert ErrorCode.RESOURCE.value == "RESOURCE_ERROR"
        assert ErrorCode.CONVERGENCE.value == "CONVERGENCE_ERROR"
        assert ErrorCode.OUTPUT.value == "OUTPUT_ERROR"
        assert ErrorCode.UNKNOWN.value == "UNKNOWN_ERROR"

    def test_error_code_descriptions(self):
        """测试错误码描述正确"""
        assert ErrorCode.DOMAIN.description == "参数超出定义域"
        assert ErrorCode.OUTPUT.description == "输出写入失败"
        assert ErrorCode.UNKNOWN.description == "未知错误"

    @pytest.mark.parametrize(
        "code,exit_code",
        [
            (ErrorCode.DOMAIN, 2),
            (ErrorCode.RANGE, 2),
            (ErrorCode.RESOURCE, 2),
            (ErrorCode.CONVERGENCE, 2),
            (ErrorCode.OUTPUT, 3),
        ],
    )
    def test_exit_codes(self, code, exit_code):
        """输出错误退出码为 3，其余为 2"""
        assert code.exit_code == exit_code

    def test_from_string(self):
        """测试从字符串获取枚举值，无效值返回 UNKNOWN"""
        assert ErrorCode.from_string("RANGE_ERROR") == ErrorCode.RANGE
        assert ErrorCode.from_string("INVALID_CODE") == ErrorCode.UNKNOWN
        assert ErrorCode.from_string("") == ErrorCode.UNKNOWN


class TestDNCBetaError:
    """测试 DNCBetaError 基类"""

    def test_basic_initialization(self):
        error = DNCBetaError("测试错误消息")
        assert error.message == "测试错误消息"
        assert error.code == ErrorCode.UNKNOWN
        assert error.context == {}
        assert isinstance(error, Exception)

    def test_str_with_context(self):
        """测试 __str__ 带上下文，值为 None 的键被省略"""
        error = DNCBetaError("测试错误", context={"a": 1.5, "b": None})
        text = str(error)
        assert text.startswith("[UNKNOWN_ERROR] 测试错误")
        assert "a=1.5" in text
        assert "b=" not in text

    def test_to_dict(self):
        error = DNCBetaError("测试错误", code=ErrorCode.RANGE, context={"delta": 800})
        result = error.to_dict()
        assert result["message"] == "测试错误"
        assert result["code"] == "RANGE_ERROR"
        assert result["description"] == "参数超出可表示范围"
        assert result["context"] == {"delta": 800}


class TestDomainError:
    """测试 DomainError"""

    def test_auto_message(self):
        error = DomainError(parameter="x", value=-0.5)
        assert error.code == ErrorCode.DOMAIN
        assert "x" in error.message
        assert error.context == {"parameter": "x", "value": -0.5}

    def test_custom_message_and_context(self):
        error = DomainError("自定义", parameter="a", value=0, extra="yes")
        assert error.message == "自定义"
        assert error.parameter == "a"
        assert error.context["extra"] == "yes"

    def test_inheritance(self):
        assert isinstance(DomainError(), DNCBetaError)


class TestRangeError:
    """测试 RangeError"""

    def test_default_message(self):
        error = RangeError(parameter="delta1", value=800.0, limit=700.0)
        assert error.message == "unsupported non-centrality magnitude"
        assert error.code == ErrorCode.RANGE
        assert error.limit == 700.0
        assert "limit=700.0" in str(error)

    @pytest.mark.parametrize("delta", [700.0, 1e4])
    def test_raised_for_large_noncentrality(self, delta):
        """δ ≥ 700 时 e^{-δ} 下溢，拒绝计算"""
        with pytest.raises(RangeError, match="unsupported non-centrality magnitude"):
            poisson_weights(delta, 3)
        with pytest.raises(RangeError):
            DistParams(1.0, 1.0, 0.0, delta, 0.5)


class TestResourceError:
    def test_attributes(self):
        error = ResourceError("超限", resource="slab_cells", requested=10, limit=5)
        assert error.code == ErrorCode.RESOURCE
        assert error.requested == 10
        assert error.context["resource"] == "slab_cells"


class TestConvergenceError:
    def test_attributes(self):
        error = ConvergenceError("未收敛", routine="reg_inc_beta", iterations=10000)
        assert error.code == ErrorCode.CONVERGENCE
        assert error.iterations == 10000
        assert "routine=reg_inc_beta" in str(error)


class TestOutputError:
    def test_original_error_recorded(self):
        original = PermissionError("denied")
        error = OutputError("无法写入", path="/tmp/x.csv", original=original)
        assert error.code.exit_code == 3
        assert error.original is original
        assert error.context["original_error"] == "denied"


class TestLibraryRaises:
    """库函数对非法输入抛出 DomainError"""

    @pytest.mark.parametrize(
        "args",
        [
            (0.0, 1.0, 0.0, 0.0, 0.5),
            (1.0, -2.0, 0.0, 0.0, 0.5),
            (1.0, 1.0, -0.1, 0.0, 0.5),
            (1.0, 1.0, 0.0, math.nan, 0.5),
            (1.0, 1.0, 0.0, 0.0, math.inf),
        ],
    )
    def test_invalid_dist_params(self, args):
        with pytest.raises(DomainError):
            DistParams(*args)

    def test_unknown_method(self):
        with pytest.raises(DomainError, match="未知的算法"):
            Method.parse("div3")

    def test_method_parse_is_case_insensitive(self):
        assert Method.parse("div2") is Method.DIV2
        assert Method.parse(Method.DIV1) is Method.DIV1
