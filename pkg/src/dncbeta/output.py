"""结果序列化与终端输出。

JSON 中的浮点数一律以 17 位有效数字写出，解析后逐位还原；CSV 使用最短的
可还原十进制表示。
"""

from __future__ import annotations

import csv
import io
import json
import locale
import math
import sys
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Iterable, List, Literal, Optional, Sequence, TextIO

import numpy as np
from rich.console import Console
from rich.table import Table

from .exceptions import OutputError
from .series import MatrixSlab

SCHEMA_VERSION = "1"

StatusKind = Literal["success", "error", "warning", "info"]

_UNICODE_PREFIXES: dict[StatusKind, str] = {
    "success": "✓",
    "error": "✗",
    "warning": "⚠",
    "info": "ℹ",
}

_ASCII_PREFIXES: dict[StatusKind, str] = {
    "success": "[OK]",
    "error": "[ERR]",
    "warning": "[WARN]",
    "info": "[INFO]",
}


def _normalize_encoding(encoding: Optional[str]) -> str:
    if not encoding:
        return ""
    return encoding.strip().lower()


def supports_unicode_output(stream: Optional[TextIO] = None) -> bool:
    """判断终端编码能否输出状态符号。"""
    target_stream = stream if stream is not None else sys.stdout
    encoding = _normalize_encoding(getattr(target_stream, "encoding", None))

    if not encoding:
        encoding = _normalize_encoding(locale.getpreferredencoding(False))

    return encoding.startswith("utf-") or encoding == "cp65001"


def status_prefix(kind: StatusKind, stream: Optional[TextIO] = None) -> str:
    """按终端编码返回状态前缀。"""
    if kind not in _UNICODE_PREFIXES:
        raise ValueError(f"不支持的状态类型: {kind}")

    mapping = _UNICODE_PREFIXES if supports_unicode_output(stream) else _ASCII_PREFIXES
    return mapping[kind]


def format_json_float(value: float) -> str:
    """17 位有效数字；非有限值写为 null。"""
    value = float(value)
    if not math.isfinite(value):
        return "null"
    text = format(value, ".17g")
    if not any(ch in text for ch in ".eEn"):
        text += ".0"
    return text


def format_csv_float(value: float) -> str:
    """最短的可还原十进制表示。"""
    return repr(float(value))


def _encode(value: Any, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    close = " " * (indent * level)

    if value is None:
        return "null"
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, Enum):
        return _encode(value.value, indent, level)
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format_json_float(value)
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    if isinstance(value, dict):
        if not value:
            return "{}"
        members = [
            f"{pad}{json.dumps(str(key), ensure_ascii=False)}: "
            f"{_encode(item, indent, level + 1)}"
            for key, item in value.items()
        ]
        return "{\n" + ",\n".join(members) + f"\n{close}}}"
    if isinstance(value, (list, tuple, np.ndarray)):
        if len(value) == 0:
            return "[]"
        members = [f"{pad}{_encode(item, indent, level + 1)}" for item in value]
        return "[\n" + ",\n".join(members) + f"\n{close}]"
    raise TypeError(f"无法序列化的类型: {type(value).__name__}")


def dumps(value: Any, indent: int = 2) -> str:
    """序列化为 JSON 文本，浮点数保留 17 位有效数字。"""
    return _encode(value, indent, 0)


@dataclass
class OutputRecord:
    """命令输出：回显全部输入参数并携带结果。"""

    command: str
    inputs: Dict[str, Any]
    payload: Dict[str, Any]
    schema_version: str = SCHEMA_VERSION
    metadata: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "schema_version": self.schema_version,
            "command": self.command,
            "inputs": self.inputs,
            "payload": self.payload,
        }
        if self.metadata:
            data["metadata"] = self.metadata
        return data

    def to_json(self) -> str:
        return dumps(self.to_dict())


def _csv_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format_csv_float(value)
    return str(value)


def rows_to_csv(columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """表头加数据行的 CSV 文本。"""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_csv_cell(value) for value in row])
    return buffer.getvalue()


def records_to_csv(records: Sequence[Dict[str, Any]]) -> str:
    """字典列表的 CSV 文本，列为各字典键的并集（按首次出现顺序）。"""
    columns: List[str] = []
    for record in records:
        for key in record:
            if key not in columns:
                columns.append(key)
    return rows_to_csv(
        columns, ([record.get(key) for key in columns] for record in records)
    )


def matrix_csv(slab: MatrixSlab) -> str:
    """切片的 CSV 文本：表头 ``j\\l,0,1,…,L-1``，每行以 j 开头。"""
    columns = ["j\\l", *[str(l) for l in range(slab.cols)]]
    return rows_to_csv(
        columns, ([j, *slab.items[j].tolist()] for j in range(slab.rows))
    )


def write_text(path: str, content: str) -> Path:
    """写入文本文件，失败时抛出 OutputError。"""
    target = Path(path)
    try:
        target.write_text(content, encoding="utf-8")
    except OSError as exc:
        raise OutputError(f"无法写入文件: {path}", path=str(path), original=exc) from exc
    return target


def write_matrix_csv(slab: MatrixSlab, path: str) -> Path:
    return write_text(path, matrix_csv(slab))


def render_table(
    console: Console,
    title: str,
    columns: Sequence[str],
    rows: Iterable[Sequence[Any]],
) -> None:
    """以 rich 表格输出（plain 格式）。"""
    table = Table(title=title)
    for column in columns:
        table.add_column(str(column), style="cyan" if column == columns[0] else None)
    for row in rows:
        table.add_row(*[_plain_cell(value) for value in row])
    console.print(table)


def _plain_cell(value: Any) -> str:
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if value != 0.0 and (abs(value) < 1e-3 or abs(value) >= 1e6):
            return f"{value:.3e}"
        return f"{value:.7f}"
    return _csv_cell(value)


__all__ = [
    "SCHEMA_VERSION",
    "OutputRecord",
    "supports_unicode_output",
    "status_prefix",
    "format_json_float",
    "format_csv_float",
    "dumps",
    "rows_to_csv",
    "records_to_csv",
    "matrix_csv",
    "write_text",
    "write_matrix_csv",
    "render_table",
]
