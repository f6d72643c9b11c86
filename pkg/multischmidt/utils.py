#!/usr/bin/env python3
"""
多体 Schmidt 分解通用工具函数
提供日志、子系统标签、相位规范化等通用功能
"""

import logging
import string
import sys
from typing import Iterable, List, Optional, Sequence, Union

import colorlog
import numpy as np

PLAIN_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
COLOR_FORMAT = '%(green)s%(asctime)s%(reset)s - %(blue)s%(name)s%(reset)s - %(log_color)s%(levelname)s%(reset)s - %(message)s'

RandomSource = Union[int, np.random.Generator, None]


def setup_logging(
    level: str = "INFO",
    log_file: Optional[str] = None,
    colored: bool = True,
    stream=None,
) -> logging.Logger:
    """
    设置日志系统

    Args:
        level: 日志级别
        log_file: 日志文件路径
        colored: 是否使用彩色输出
        stream: 控制台输出流，默认 stderr

    Returns:
        配置好的 logger 对象
    """
    numeric_level = getattr(logging, level.upper(), logging.INFO)

    logger = logging.getLogger('multischmidt')
    logger.setLevel(numeric_level)

    # 清除现有处理器
    for handler in logger.handlers:
        handler.close()
    logger.handlers.clear()

    console_handler = logging.StreamHandler(stream or sys.stderr)
    console_handler.setLevel(numeric_level)
    if colored:
        console_handler.setFormatter(colorlog.ColoredFormatter(
            COLOR_FORMAT,
            log_colors={
                'DEBUG': 'cyan',
                'INFO': 'white',
                'WARNING': 'yellow',
                'ERROR': 'red',
                'CRITICAL': 'bold_red',
            },
        ))
    else:
        console_handler.setFormatter(logging.Formatter(PLAIN_FORMAT))
    logger.addHandler(console_handler)

    if log_file:
        file_handler = logging.FileHandler(log_file, encoding='utf-8')
        file_handler.setLevel(numeric_level)
        file_handler.setFormatter(logging.Formatter(PLAIN_FORMAT))
        logger.addHandler(file_handler)

    return logger


# ==================== 子系统标签 ====================

def party_label(index: int) -> str:
    """子系统编号 0,1,2,... 对应标签 A,B,C,...；超过 26 个时追加编号"""
    letters = string.ascii_uppercase
    if index < len(letters):
        return letters[index]
    return f"{letters[index % len(letters)]}{index // len(letters)}"


def format_parties(parties: Iterable[int]) -> str:
    """格式化子系统集合，例如 {A,B}"""
    return "{" + ",".join(party_label(p) for p in parties) + "}"


# ==================== 数值辅助 ====================

def phase_normalize(vector: np.ndarray) -> np.ndarray:
    """
    相位规范化：使模最大的分量为正实数

    模相同时取下标最小者；零向量原样返回
    """
    vector = np.asarray(vector, dtype=complex)
    if vector.size == 0:
        return vector.copy()
    magnitudes = np.abs(vector)
    # 容忍舍入误差的并列最大值
    top = np.flatnonzero(magnitudes >= magnitudes.max() * (1 - 1e-12))[0]
    if magnitudes[top] == 0:
        return vector.copy()
    return vector * (np.conj(vector[top]) / magnitudes[top])


def dominant_index(vector: np.ndarray) -> int:
    """模最大分量的下标（并列取最小）"""
    magnitudes = np.abs(np.asarray(vector))
    return int(np.flatnonzero(magnitudes >= magnitudes.max() * (1 - 1e-12))[0])


def gram_deviation(vectors: np.ndarray) -> float:
    """行向量组 Gram 矩阵与单位阵偏差的最大范数"""
    vectors = np.atleast_2d(np.asarray(vectors, dtype=complex))
    if vectors.shape[0] == 0:
        return 0.0
    gram = vectors.conj() @ vectors.T
    return float(np.max(np.abs(gram - np.eye(vectors.shape[0]))))


def make_rng(seed: RandomSource = None) -> np.random.Generator:
    """由种子构造 Philox 生成器；已有的生成器原样返回"""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.Philox(seed))


def format_complex(value: complex, digits: int = 10) -> str:
    """格式化复数，虚部为零时只输出实部"""
    value = complex(value)
    if abs(value.imag) <= 10 ** (-digits):
        return f"{value.real:.{digits}f}"
    sign = "+" if value.imag >= 0 else "-"
    return f"{value.real:.{digits}f}{sign}{abs(value.imag):.{digits}f}j"


def format_vector(vector: Sequence[complex], digits: int = 6) -> str:
    """格式化向量"""
    return "[" + ", ".join(format_complex(v, digits) for v in vector) + "]"


def parse_int_list(text: str) -> List[int]:
    """解析逗号分隔的整数列表"""
    items = [item.strip() for item in text.split(",") if item.strip()]
    return [int(item) for item in items]


def parse_float_list(text: str) -> List[float]:
    """解析逗号分隔的实数列表"""
    items = [item.strip() for item in text.split(",") if item.strip()]
    return [float(item) for item in items]
