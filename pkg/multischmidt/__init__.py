"""多体 Schmidt 分解工具包

判定有限维多体纯态是否存在 Schmidt 分解，存在时构造分解，
不存在时给出可验证的证据。

主要功能:
- 二体 Schmidt 分解与 Schmidt 数
- 完全可分与部分可分性检测
- 给定基下的充要条件检查
- 构造性多体分解器（含简并簇处理）
- 基约化与否定证书
- 随机化自检与反例重放

使用示例:
    from multischmidt import make_state, decompose, analyse

    x = make_state([2, 2, 2], [1, 0, 0, 0, 0, 0, 0, 1])
    decomposition = decompose(x)

    outcome = analyse(x)
    print(outcome.decomposable, outcome.message)
"""

# 版本信息
__version__ = "1.0.0"
__description__ = "多体纯态 Schmidt 分解的判定与构造"

import logging
from typing import Optional

from .bipartite import Bipartition, BipartiteSchmidt, bipartite_schmidt, schmidt_number
from .config import DEFAULT_TOL, Settings, load_settings
from .exceptions import MultiSchmidtError
from .multipartite import (
    ConditionMode,
    ConditionReport,
    DecompositionOutcome,
    SchmidtDecomposition,
    SeparabilityReport,
    check_condition,
    diagnose_decomposition,
    find_partial_separation,
    is_completely_separable,
    lemma_cs2_reduce,
    multipartite_schmidt_decompose,
    negative_certificate,
)
from .oracle import ghz_state, partial_trace, random_schmidt_state, verify_decomposition, w_state
from .tensor import BasisSet, State, inner_product, make_state, partial_inner_product
from .utils import setup_logging

# 未配置日志时保持静默，命令行入口会调用 setup_logging
logging.getLogger(__name__).addHandler(logging.NullHandler())


def decompose(x: State, tol: float = DEFAULT_TOL) -> Optional[SchmidtDecomposition]:
    """
    构造多体 Schmidt 分解

    Args:
        x: 非零态
        tol: 相对零阈值

    Returns:
        分解，不存在时为 None
    """
    return multipartite_schmidt_decompose(x, tol)


def analyse(x: State, settings: Optional[Settings] = None) -> DecompositionOutcome:
    """
    按配置运行分解器并返回完整结论

    Args:
        x: 非零态
        settings: 运行配置，默认从环境变量加载

    Returns:
        DecompositionOutcome
    """
    settings = settings or load_settings()
    return diagnose_decomposition(
        x,
        settings.TOLERANCE,
        verify_tol=settings.VERIFY_TOLERANCE,
        ortho_tol=settings.ORTHO_TOLERANCE,
        gap=settings.CLUSTER_GAP,
        offdiag_tol=settings.OFFDIAG_TOLERANCE,
        eigen_gap=settings.EIGEN_GAP,
        seeds=tuple(settings.PROBE_SEEDS),
    )


__all__ = [
    "__version__",
    "Bipartition",
    "BipartiteSchmidt",
    "BasisSet",
    "ConditionMode",
    "ConditionReport",
    "DecompositionOutcome",
    "MultiSchmidtError",
    "SchmidtDecomposition",
    "SeparabilityReport",
    "Settings",
    "State",
    "analyse",
    "bipartite_schmidt",
    "check_condition",
    "decompose",
    "diagnose_decomposition",
    "find_partial_separation",
    "ghz_state",
    "inner_product",
    "is_completely_separable",
    "lemma_cs2_reduce",
    "load_settings",
    "make_state",
    "multipartite_schmidt_decompose",
    "negative_certificate",
    "partial_inner_product",
    "partial_trace",
    "random_schmidt_state",
    "schmidt_number",
    "setup_logging",
    "verify_decomposition",
    "w_state",
]
