"""公共类型定义。"""

from enum import Enum
from typing import Union

from .exceptions import DomainError


class Axis(str, Enum):
    """M 矩阵的求和方向。"""

    ROW = "row"
    COLUMN = "column"


class Method(str, Enum):
    """分块算法。DIV1 按行分割，DIV2 按列分割。"""

    DIV1 = "DIV1"
    DIV2 = "DIV2"

    @classmethod
    def parse(cls, value: Union[str, "Method"]) -> "Method":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).upper())
        except ValueError as exc:
            raise DomainError(
                f"未知的算法: {value!r}", parameter="method", value=value
            ) from exc


class EvenParameter(str, Enum):
    """闭式不完全 Beta 中取整数的形状参数。"""

    FIRST = "first"
    SECOND = "second"


class OutputFormat(str, Enum):
    """命令行输出格式。"""

    JSON = "json"
    CSV = "csv"
    PLAIN = "plain"


__all__ = [
    "Axis",
    "Method",
    "EvenParameter",
    "OutputFormat",
]
