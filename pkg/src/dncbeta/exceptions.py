"""异常定义。"""

from enum import Enum
from typing import Any, Dict, Optional


class ErrorCode(Enum):
    """错误码枚举。"""

    DOMAIN = "DOMAIN_ERROR"
    RANGE = "RANGE_ERROR"
    RESOURCE = "RESOURCE_ERROR"
    CONVERGENCE = "CONVERGENCE_ERROR"
    OUTPUT = "OUTPUT_ERROR"
    UNKNOWN = "UNKNOWN_ERROR"

    @property
    def description(self) -> str:
        descriptions = {
            ErrorCode.DOMAIN: "参数超出定义域",
            ErrorCode.RANGE: "参数超出可表示范围",
            ErrorCode.RESOURCE: "计算规模超出限制",
            ErrorCode.CONVERGENCE: "数值迭代未收敛",
            ErrorCode.OUTPUT: "输出写入失败",
            ErrorCode.UNKNOWN: "未知错误",
        }
        return descriptions.get(self, "未知错误")

    @property
    def exit_code(self) -> int:
        """命令行退出码：输出错误为 3，其余输入侧错误为 2。"""
        return 3 if self is ErrorCode.OUTPUT else 2

    @classmethod
    def from_string(cls, code_str: str) -> "ErrorCode":
        try:
            return cls(code_str)
        except ValueError:
            return cls.UNKNOWN


class DNCBetaError(Exception):
    """基础异常。"""

    default_code: ErrorCode = ErrorCode.UNKNOWN

    def __init__(
        self,
        message: str,
        *,
        code: Optional[ErrorCode] = None,
        context: Optional[Dict[str, Any]] = None,
    ):
        super().__init__(message)
        self.message = message
        self.code = code or self.default_code
        self.context = context or {}

    def __str__(self) -> str:
        parts = [f"[{self.code.value}] {self.message}"]
        context_str = self._format_context()
        if context_str:
            parts.append(context_str)
        return " | ".join(parts)

    def _format_context(self) -> str:
        if not self.context:
            return ""

        context_parts = [
            f"{key}={value}" for key, value in self.context.items() if value is not None
        ]
        return "; ".join(context_parts)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "message": self.message,
            "code": self.code.value,
            "description": self.code.description,
            "context": self.context,
        }


class DomainError(DNCBetaError):
    """参数不满足定义域约束。"""

    default_code = ErrorCode.DOMAIN

    def __init__(
        self,
        message: Optional[str] = None,
        *,
        parameter: Optional[str] = None,
        value: Any = None,
        **kwargs,
    ):
        if message is None:
            if parameter:
                message = f"参数 '{parameter}' 的取值 {value!r} 超出定义域"
            else:
                message = "参数超出定义域"

        context = kwargs.pop("context", {})
        if parameter:
            context["parameter"] = parameter
        if value is not None:
            context["value"] = value
        context.update(kwargs)

        super().__init__(message, context=context)
        self.parameter = parameter
        self.value = value


class RangeError(DNCBetaError):
    """参数超出线性空间可表示的范围。"""

    default_code = ErrorCode.RANGE

    def __init__(
        self,
        message: Optional[str] = None,
        *,
        parameter: Optional[str] = None,
        value: Any = None,
        limit: Any = None,
        **kwargs,
    ):
        if message is None:
            message = "unsupported non-centrality magnitude"

        context = kwargs.pop("context", {})
        if parameter:
            context["parameter"] = parameter
        if value is not None:
            context["value"] = value
        if limit is not None:
            context["limit"] = limit
        context.update(kwargs)

        super().__init__(message, context=context)
        self.parameter = parameter
        self.value = value
        self.limit = limit


class ResourceError(DNCBetaError):
    """计算规模超出配置的上限。"""

    default_code = ErrorCode.RESOURCE

    def __init__(
        self,
        message: str,
        *,
        resource: Optional[str] = None,
        requested: Any = None,
        limit: Any = None,
        **kwargs,
    ):
        context = kwargs.pop("context", {})
        if resource:
            context["resource"] = resource
        if requested is not None:
            context["requested"] = requested
        if limit is not None:
            context["limit"] = limit
        context.update(kwargs)

        super().__init__(message, context=context)
        self.resource = resource
        self.requested = requested
        self.limit = limit


class ConvergenceError(DNCBetaError):
    """迭代计算未在最大次数内收敛。"""

    default_code = ErrorCode.CONVERGENCE

    def __init__(
        self,
        message: str,
        *,
        routine: Optional[str] = None,
        iterations: Optional[int] = None,
        **kwargs,
    ):
        context = kwargs.pop("context", {})
        if routine:
            context["routine"] = routine
        if iterations is not None:
            context["iterations"] = iterations
        context.update(kwargs)

        super().__init__(message, context=context)
        self.routine = routine
        self.iterations = iterations


class OutputError(DNCBetaError):
    """结果文件写入失败。"""

    default_code = ErrorCode.OUTPUT

    def __init__(
        self,
        message: str,
        *,
        path: Optional[str] = None,
        original: Optional[Exception] = None,
        **kwargs,
    ):
        context = kwargs.pop("context", {})
        if path:
            context["path"] = path
        if original:
            context["original_error"] = str(original)
        context.update(kwargs)

        super().__init__(message, context=context)
        self.path = path
        self.original = original


__all__ = [
    "ErrorCode",
    "DNCBetaError",
    "DomainError",
    "RangeError",
    "ResourceError",
    "ConvergenceError",
    "OutputError",
]
