"""运行配置。"""

from __future__ import annotations

import os
from pathlib import Path
from typing import Any, Dict, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .divide import ErrorControls
from .oracle import OracleConfig
from .series import DEFAULT_CELL_BUDGET
from .types import OutputFormat

CONFIG_SECTION = "dncbeta"
STANDALONE_CONFIG = ".dncbeta.toml"
ENV_PREFIX = "DNCBETA_"


class DNCBetaConfig(BaseModel):
    """计算与输出配置。"""

    model_config = ConfigDict(extra="forbid")

    eps_line: float = Field(default=1e-7, gt=0, description="单行/单列余项上限")
    eps_tail: float = Field(default=1e-5, gt=0, le=0.1, description="尾部区域质量上限")
    use_recurrence: bool = Field(default=False, description="是否用递推链加速逐行求值")
    slab_cell_budget: int = Field(
        default=DEFAULT_CELL_BUDGET, ge=1, description="矩阵切片单元数上限"
    )
    oracle_tail_target: float = Field(
        default=1e-12, gt=0, le=1e-8, description="直接计算的 Poisson 尾部目标"
    )
    oracle_max_terms: int = Field(default=5000, ge=1, description="直接计算每个方向的项数上限")
    bench_reps: int = Field(default=80, ge=1, description="基准测试重复次数")
    output_format: OutputFormat = Field(default=OutputFormat.JSON, description="输出格式")

    @field_validator("output_format", mode="before")
    @classmethod
    def _normalize_format(cls, value: Any) -> Any:
        if isinstance(value, str):
            return value.strip().lower()
        return value

    @model_validator(mode="after")
    def _validate_controls(self) -> "DNCBetaConfig":
        if self.eps_line > self.eps_tail:
            raise ValueError(
                f"eps_line ({self.eps_line}) 不能大于 eps_tail ({self.eps_tail})"
            )
        return self

    def controls(self) -> ErrorControls:
        return ErrorControls(eps_line=self.eps_line, eps_tail=self.eps_tail)

    def oracle_config(self) -> OracleConfig:
        return OracleConfig(
            tail_target=self.oracle_tail_target,
            max_terms_per_axis=self.oracle_max_terms,
        )


def _default_config_data() -> Dict[str, Any]:
    return DNCBetaConfig().model_dump()


def _load_toml_file(path: str) -> Optional[Dict[str, Any]]:
    file_path = Path(path)
    if not file_path.exists():
        return None

    try:
        import tomllib
    except ModuleNotFoundError:  # Python < 3.11
        import tomli as tomllib

    try:
        with open(file_path, "rb") as handle:
            return tomllib.load(handle)
    except Exception as exc:
        raise ValueError(f"解析配置文件失败: {path}: {exc}") from exc


def _extract_config_data(data: Dict[str, Any]) -> Optional[Dict[str, Any]]:
    config_data = data.get("tool", {}).get(CONFIG_SECTION, {})
    if not config_data:
        config_data = data.get(CONFIG_SECTION, {})
    if not config_data:
        config_data = {
            key: value
            for key, value in data.items()
            if key in DNCBetaConfig.model_fields
        }
    return config_data or None


def _get_config_from_dict(
    data: Dict[str, Any],
    *,
    source: str = "配置",
) -> Optional[DNCBetaConfig]:
    config_data = _extract_config_data(data)
    if not config_data:
        return None

    try:
        return DNCBetaConfig(**config_data)
    except Exception as exc:
        raise ValueError(f"{source}无效: {exc}") from exc


def load_config_from_pyproject() -> Optional[DNCBetaConfig]:
    """从最近的 pyproject.toml 的 [tool.dncbeta] 读取配置。"""

    current_dir = Path.cwd()
    for parent in [current_dir, *current_dir.parents]:
        pyproject_path = parent / "pyproject.toml"
        if not pyproject_path.exists():
            continue

        data = _load_toml_file(str(pyproject_path))
        if data is None:
            continue

        section = data.get("tool", {}).get(CONFIG_SECTION)
        if not section:
            return None
        return _get_config_from_dict(
            {"tool": {CONFIG_SECTION: section}},
            source=f"pyproject.toml({pyproject_path})",
        )

    return None


def load_config_from_file(path: str) -> Optional[DNCBetaConfig]:
    """从指定 TOML 文件读取配置。"""

    file_path = Path(path)
    if not file_path.exists():
        raise FileNotFoundError(f"配置文件不存在: {path}")

    data = _load_toml_file(path)
    if data is None:
        return None

    return _get_config_from_dict(data, source=f"配置文件({path})")


def _load_from_env() -> Dict[str, Any]:
    config: Dict[str, Any] = {}

    mappings = {
        "EPS_TAIL": "eps_tail",
        "EPS_LINE": "eps_line",
        "USE_RECURRENCE": "use_recurrence",
        "SLAB_CELL_BUDGET": "slab_cell_budget",
        "ORACLE_TAIL_TARGET": "oracle_tail_target",
        "ORACLE_MAX_TERMS": "oracle_max_terms",
        "BENCH_REPS": "bench_reps",
        "FORMAT": "output_format",
    }

    bool_fields = {"use_recurrence"}
    int_fields = {"slab_cell_budget", "oracle_max_terms", "bench_reps"}
    float_fields = {"eps_tail", "eps_line", "oracle_tail_target"}

    for env_key, config_key in mappings.items():
        env_value = os.getenv(f"{ENV_PREFIX}{env_key}")
        if env_value is None:
            continue

        if config_key in bool_fields:
            config[config_key] = env_value.lower() in {"true", "1", "yes", "on"}
        elif config_key in int_fields:
            try:
                config[config_key] = int(env_value)
            except ValueError:
                continue
        elif config_key in float_fields:
            try:
                config[config_key] = float(env_value)
            except ValueError:
                continue
        else:
            config[config_key] = env_value

    return config


def load_config(
    config_path: Optional[str] = None,
    overrides: Optional[Dict[str, Any]] = None,
) -> DNCBetaConfig:
    """按默认值、配置文件、环境变量、overrides 的顺序合并配置，后者覆盖前者。

    overrides 中取值为 None 的键视为未指定；合并完成后只校验一次。
    """

    config_dict = _default_config_data()

    if config_path:
        file_config = load_config_from_file(config_path)
    else:
        file_config = load_config_from_pyproject()
        if file_config is None:
            standalone_path = Path(STANDALONE_CONFIG)
            if standalone_path.exists():
                file_config = load_config_from_file(str(standalone_path))

    if file_config is not None:
        config_dict.update(file_config.model_dump(exclude_unset=True))

    config_dict.update(_load_from_env())
    if overrides:
        config_dict.update(
            {key: value for key, value in overrides.items() if value is not None}
        )
    return DNCBetaConfig(**config_dict)


__all__ = [
    "DNCBetaConfig",
    "load_config",
    "load_config_from_file",
    "load_config_from_pyproject",
]
