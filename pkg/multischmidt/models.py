"""
文件与报告数据模型定义
使用 Pydantic 进行数据验证和序列化
"""

import math
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

from .exceptions import DimensionMismatch
from .tensor import BasisSet, State, make_state

ComplexPair = Tuple[float, float]


def to_pairs(values: Sequence[complex]) -> List[ComplexPair]:
    """复数序列转为 [re, im] 对"""
    return [(float(np.real(v)), float(np.imag(v))) for v in values]


def from_pairs(pairs: Sequence[ComplexPair]) -> np.ndarray:
    """[re, im] 对转为复数数组"""
    return np.array([complex(re, im) for re, im in pairs], dtype=complex)


def _check_finite(pairs: Sequence[ComplexPair]) -> None:
    for re, im in pairs:
        if not (math.isfinite(re) and math.isfinite(im)):
            raise ValueError("振幅必须是有限数")


# ==================== 枚举类型 ====================

class Verdict(str, Enum):
    """分解结论"""
    DECOMPOSABLE = "decomposable"
    NOT_DECOMPOSABLE = "not-decomposable"


class CertificateKind(str, Enum):
    """不可分解的证据类型，按尝试顺序排列"""
    PARTIAL_SEPARABILITY = "partial-separability"
    SPECTRAL = "spectral"
    RESIDUAL = "residual"
    NOT_ORTHONORMAL = "not-orthonormal"
    ALGORITHMIC = "algorithmic"


# ==================== 文件模型 ====================

class StateFileModel(BaseModel):
    """状态文件"""
    dims: List[int] = Field(..., description="各子系统维度")
    amps: List[ComplexPair] = Field(..., description="行主序振幅，最后一个子系统下标变化最快")
    name: Optional[str] = Field(None, description="态的名称")

    @field_validator('dims')
    @classmethod
    def validate_dims(cls, v):
        if not v:
            raise ValueError('维度列表不能为空')
        if any(d < 1 for d in v):
            raise ValueError(f'子系统维度必须为正整数: {v}')
        return v

    @model_validator(mode='after')
    def validate_length(self):
        expected = math.prod(self.dims)
        if len(self.amps) != expected:
            raise ValueError(f'振幅个数 {len(self.amps)} 与维度乘积 {expected} 不一致')
        _check_finite(self.amps)
        return self

    def to_state(self) -> State:
        return make_state(self.dims, from_pairs(self.amps))

    @classmethod
    def from_state(cls, state: State, name: Optional[str] = None) -> "StateFileModel":
        return cls(dims=list(state.dims), amps=to_pairs(state.amps), name=name)


class BasisFileModel(BaseModel):
    """基文件：每个子系统一组基向量"""
    bases: List[List[List[ComplexPair]]] = Field(..., description="bases[j][i] 是子系统 j 的第 i 个基向量")

    def to_bases(self, dims: Sequence[int]) -> List[BasisSet]:
        if len(self.bases) != len(dims):
            raise DimensionMismatch(f"基的个数 {len(self.bases)} 与子系统个数 {len(dims)} 不一致")
        return [BasisSet(dim, np.vstack([from_pairs(v) for v in vectors]))
                for vectors, dim in zip(self.bases, dims)]


class TruthFileModel(BaseModel):
    """随机态的真实分解"""
    dims: List[int] = Field(..., description="各子系统维度")
    lambdas: List[float] = Field(..., description="降序系数")
    vectors: List[List[List[ComplexPair]]] = Field(..., description="vectors[j][i] 是第 i 项在子系统 j 上的向量")
    seed: Optional[int] = Field(None, description="生成所用的随机种子")


# ==================== 报告模型 ====================

class Certificate(BaseModel):
    """不可分解的证据"""
    kind: CertificateKind = Field(..., description="证据类型")
    message: str = Field(..., description="人类可读的说明")
    split: Optional[str] = Field(None, description="见证二分划")


class DecomposeReport(BaseModel):
    """decompose 子命令的机器可读报告"""
    verdict: Verdict = Field(..., description="分解结论")
    lambdas: List[float] = Field(default_factory=list, description="Schmidt 系数")
    vectors: Dict[str, List[List[ComplexPair]]] = Field(default_factory=dict, description="各子系统的向量")
    certificate: Optional[Certificate] = Field(None, description="不可分解时的证据")
    m_j: Dict[str, int] = Field(default_factory=dict, description="各子系统的非零部分内积个数")
