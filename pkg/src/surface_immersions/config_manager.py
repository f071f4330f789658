"""
配置管理器

负责加载、保存和验证运行配置文件。数值容差通过 pydantic-settings 读取，
环境变量（前缀 SURFACE_IMMERSIONS_）优先于 YAML 文件中的值。
"""

import logging
import os
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import yaml
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

logger = logging.getLogger(__name__)

OUTPUT_FORMATS = ("text", "json", "svg")
LOG_LEVELS = ("DEBUG", "INFO", "WARN", "WARNING", "ERROR")


class Tolerances(BaseSettings):
    """
    浮点几何容差

    只影响双曲/欧氏展开与旋转数的数值部分，有理数谓词不受影响。
    """

    model_config = SettingsConfigDict(env_prefix="SURFACE_IMMERSIONS_", frozen=True)

    motion_residual: float = Field(default=1e-9, gt=0)
    angle_integrality: float = Field(default=0.05, gt=0, lt=0.5)
    sample_cap: int = Field(default=4096, ge=4)
    conjugator_bound: Optional[int] = Field(default=None, ge=0)


@dataclass
class RunConfig:
    """一次命令运行的配置"""

    command: str = ""
    inputs: List[str] = field(default_factory=list)
    output_format: str = "text"
    seed: int = 0
    jobs: int = 1
    log_level: str = "INFO"
    log_file: Optional[str] = None
    tolerances: Tolerances = field(default_factory=Tolerances)


class ConfigManager:
    """配置管理器类"""

    DEFAULT_CONFIG_PATH = "surface-immersions.yaml"

    def __init__(self, config_path: Optional[str] = None):
        """
        初始化配置管理器

        Args:
            config_path: 配置文件路径，默认为当前目录下的 surface-immersions.yaml
        """
        self.config_path = config_path or self.DEFAULT_CONFIG_PATH
        self._current_config: Optional[RunConfig] = None

    @property
    def current(self) -> RunConfig:
        if self._current_config is None:
            raise RuntimeError("No configuration loaded. Call load_config() first.")
        return self._current_config

    def load_config(self) -> RunConfig:
        """
        加载配置文件

        Returns:
            RunConfig: 配置对象

        Raises:
            FileNotFoundError: 配置文件不存在
            ValueError: 配置文件格式错误
        """
        logger.info(f"Loading configuration from: {self.config_path}")

        if not os.path.exists(self.config_path):
            logger.error(f"Configuration file not found: {self.config_path}")
            raise FileNotFoundError(f"Configuration file not found: {self.config_path}")

        try:
            with open(self.config_path, "r", encoding="utf-8") as f:
                data = yaml.safe_load(f)
        except yaml.YAMLError as e:
            logger.error(f"Invalid YAML format: {e}")
            raise ValueError(f"Invalid YAML format: {e}")

        if data is None:
            data = {}
        if not isinstance(data, dict):
            raise ValueError("Configuration file must contain a mapping")

        try:
            config = self._parse_config(data)
        except Exception as e:
            logger.error(f"Failed to load configuration: {e}")
            raise ValueError(f"Failed to load configuration: {e}")

        errors = self.validate_config(config)
        if errors:
            raise ValueError(f"Configuration validation failed: {', '.join(errors)}")

        self._current_config = config
        logger.info(f"Configuration loaded successfully: tolerances={config.tolerances}")
        return config

    def save_config(self, config: RunConfig) -> None:
        """
        保存配置到文件

        Raises:
            ValueError: 配置验证失败
            IOError: 文件写入失败
        """
        errors = self.validate_config(config)
        if errors:
            logger.error(f"Configuration validation failed: {', '.join(errors)}")
            raise ValueError(f"Configuration validation failed: {', '.join(errors)}")

        config_dir = os.path.dirname(self.config_path)
        if config_dir:
            os.makedirs(config_dir, exist_ok=True)

        try:
            with open(self.config_path, "w", encoding="utf-8") as f:
                yaml.safe_dump(self._config_to_dict(config), f, sort_keys=False)
        except Exception as e:
            logger.error(f"Failed to save configuration: {e}")
            raise IOError(f"Failed to save configuration: {e}")

        self._current_config = config
        logger.info(f"Configuration saved to: {self.config_path}")

    def validate_config(self, config: RunConfig) -> List[str]:
        """
        验证配置对象

        Returns:
            List[str]: 错误信息列表，空列表表示验证通过
        """
        errors = []
        if not isinstance(config, RunConfig):
            return ["config must be a RunConfig instance"]
        if config.output_format not in OUTPUT_FORMATS:
            errors.append(
                f"output_format must be one of {', '.join(OUTPUT_FORMATS)}, "
                f"got {config.output_format}"
            )
        if config.jobs < 1:
            errors.append(f"jobs must be positive, got {config.jobs}")
        if config.seed < 0:
            errors.append(f"seed must be non-negative, got {config.seed}")
        if config.log_level.upper() not in LOG_LEVELS:
            errors.append(f"log_level must be DEBUG, INFO, WARN, or ERROR, got {config.log_level}")
        return errors

    def _parse_config(self, data: Dict[str, Any]) -> RunConfig:
        # 环境变量覆盖 YAML：只把环境中没有的字段作为初始化参数传入
        tolerance_data = dict(data.get("tolerances") or {})
        for name in list(tolerance_data):
            if f"SURFACE_IMMERSIONS_{name.upper()}" in os.environ:
                tolerance_data.pop(name)

        return RunConfig(
            command=data.get("command", ""),
            inputs=list(data.get("inputs", [])),
            output_format=data.get("output_format", "text"),
            seed=int(data.get("seed", 0)),
            jobs=int(data.get("jobs", 1)),
            log_level=data.get("log_level", "INFO"),
            log_file=data.get("log_file"),
            tolerances=Tolerances(**tolerance_data),
        )

    def _config_to_dict(self, config: RunConfig) -> Dict[str, Any]:
        return {
            "command": config.command,
            "inputs": list(config.inputs),
            "output_format": config.output_format,
            "seed": config.seed,
            "jobs": config.jobs,
            "log_level": config.log_level,
            "log_file": config.log_file,
            "tolerances": config.tolerances.model_dump(),
        }
