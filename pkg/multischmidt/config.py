"""
配置管理模块
支持环境变量、.env 文件和 YAML 配置文件
"""

import logging
import os
from typing import Any, Dict, List, Optional

import yaml
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

logger = logging.getLogger(__name__)

# ==================== 默认数值容差 ====================

DEFAULT_TOL = 1e-9
ORTHO_TOL = 1e-10
VERIFY_TOL = 1e-9
GAP_TOL = 1e-8
OFFDIAG_TOL = 1e-8
EIGEN_GAP_TOL = 1e-6
PROBE_SEEDS = (1, 2, 3)

SPLIT_MODES = ("subsets", "contiguous")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


class Settings(BaseSettings):
    """运行配置类"""

    # 数值容差
    TOLERANCE: float = Field(DEFAULT_TOL, description="Schmidt 秩的相对零阈值")
    ORTHO_TOLERANCE: float = Field(ORTHO_TOL, description="Gram 矩阵偏差容差")
    VERIFY_TOLERANCE: float = Field(VERIFY_TOL, description="分解重构相对误差容差")
    CLUSTER_GAP: float = Field(GAP_TOL, description="简并奇异值簇的相对间隙")
    OFFDIAG_TOLERANCE: float = Field(OFFDIAG_TOL, description="探针算符非对角残差容差")
    EIGEN_GAP: float = Field(EIGEN_GAP_TOL, description="簇内旋转所需的最小相对本征值间隙")
    PROBE_SEEDS: List[int] = Field(default_factory=lambda: list(PROBE_SEEDS), description="探针随机组合种子")

    # 算法选项
    PARTIAL_SPLIT_MODE: str = Field("subsets", description="部分可分性二分划枚举方式")
    MAX_WORKERS: int = Field(1, description="并行评估线程数")

    # 日志配置
    LOG_LEVEL: str = Field("INFO", description="日志级别")
    LOG_FILE: Optional[str] = Field(None, description="日志文件路径")

    model_config = SettingsConfigDict(
        env_prefix="MULTISCHMIDT_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=True,
        extra="ignore",
    )

    @property
    def contiguous_splits(self) -> bool:
        """是否只枚举前缀二分划"""
        return self.PARTIAL_SPLIT_MODE == "contiguous"


def _read_yaml(config_file: str) -> Dict[str, Any]:
    """读取 YAML 配置文件，键名统一转为大写"""
    with open(config_file, "r", encoding="utf-8") as f:
        data = yaml.safe_load(f) or {}
    if not isinstance(data, dict):
        raise ValueError(f"配置文件顶层必须是映射: {config_file}")
    return {str(k).upper(): v for k, v in data.items()}


def load_settings(config_file: Optional[str] = None) -> Settings:
    """
    加载配置

    Args:
        config_file: 可选的 YAML 配置文件，其中的值优先于环境变量

    Returns:
        校验通过的配置对象
    """
    overrides: Dict[str, Any] = {}
    if config_file:
        if not os.path.exists(config_file):
            raise FileNotFoundError(f"配置文件不存在: {config_file}")
        overrides = _read_yaml(config_file)
        logger.debug(f"已加载配置文件: {config_file}")

    settings = Settings(**overrides)
    validate_config(settings)
    return settings


def validate_config(settings: Settings) -> bool:
    """验证配置的有效性，无效时抛出 ValueError"""
    for name in ("TOLERANCE", "ORTHO_TOLERANCE", "VERIFY_TOLERANCE",
                 "CLUSTER_GAP", "OFFDIAG_TOLERANCE", "EIGEN_GAP"):
        value = getattr(settings, name)
        if not (0.0 < value < 1.0):
            raise ValueError(f"{name} 必须位于 (0, 1): {value}")

    if not settings.PROBE_SEEDS:
        raise ValueError("PROBE_SEEDS 不能为空")

    if settings.PARTIAL_SPLIT_MODE not in SPLIT_MODES:
        raise ValueError(f"二分划模式无效: {settings.PARTIAL_SPLIT_MODE}")

    if settings.MAX_WORKERS < 1:
        raise ValueError(f"线程数无效: {settings.MAX_WORKERS}")

    if settings.LOG_LEVEL.upper() not in LOG_LEVELS:
        raise ValueError(f"日志级别无效: {settings.LOG_LEVEL}")

    return True
