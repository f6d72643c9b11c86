"""
张量核心模块
态的稠密表示、多重下标、内积、部分内积与正交化工具

振幅按行主序存放，最后一个子系统的下标变化最快
"""

import logging
from dataclasses import dataclass, field
from functools import reduce
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .config import ORTHO_TOL
from .exceptions import (
    DimensionMismatch,
    EmptyDims,
    IndexOutOfRange,
    NotOrthonormal,
    ZeroState,
)
from .utils import gram_deviation

logger = logging.getLogger(__name__)


# ==================== 数据类型 ====================

@dataclass(frozen=True, eq=False)
class State:
    """n 体有限维希尔伯特空间中的纯态（不要求归一化）"""
    dims: Tuple[int, ...]
    amps: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amps, dtype=complex).reshape(-1)
        amps.setflags(write=False)
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        object.__setattr__(self, "amps", amps)

    @property
    def n_parties(self) -> int:
        return len(self.dims)

    @property
    def tensor(self) -> np.ndarray:
        """按子系统展开的振幅张量（只读视图）"""
        return self.amps.reshape(self.dims)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def is_zero(self) -> bool:
        return not np.any(self.amps)

    def scaled(self, factor: complex) -> "State":
        return State(self.dims, self.amps * factor)

    def normalized(self) -> "State":
        require_nonzero(self)
        return State(self.dims, self.amps / self.norm())

    def __repr__(self) -> str:
        return f"State(dims={self.dims}, norm={self.norm():.6g})"


@dataclass(frozen=True, eq=False)
class BasisSet:
    """单个子系统的完整正交归一基，vectors 的每一行是一个基向量"""
    party_dim: int
    vectors: np.ndarray
    tol_ortho: float = ORTHO_TOL

    def __post_init__(self):
        vectors = np.array(self.vectors, dtype=complex)
        if vectors.ndim != 2 or vectors.shape != (self.party_dim, self.party_dim):
            raise DimensionMismatch(
                f"基需要 {self.party_dim} 个长度为 {self.party_dim} 的向量, 实际形状 {vectors.shape}"
            )
        deviation = gram_deviation(vectors)
        if deviation > self.tol_ortho:
            raise NotOrthonormal(f"基向量 Gram 矩阵偏差 {deviation:.3e} 超过 {self.tol_ortho:.1e}")
        vectors.setflags(write=False)
        object.__setattr__(self, "vectors", vectors)

    @classmethod
    def computational(cls, dim: int) -> "BasisSet":
        """计算基"""
        return cls(dim, np.eye(dim, dtype=complex))

    def __len__(self) -> int:
        return self.party_dim

    def __getitem__(self, index: int) -> np.ndarray:
        return self.vectors[index]


@dataclass
class PartialIPEntry:
    """单个基向量与态的部分内积"""
    basis_index: int
    residual: State
    weight: float
    nonzero: bool
    separable: bool
    factors: Optional[List[np.ndarray]] = None


@dataclass
class PartialIPTable:
    """某个子系统的部分内积表，entries 按基向量下标排列"""
    party_index: int
    entries: List[PartialIPEntry] = field(default_factory=list)

    @property
    def nonzero_entries(self) -> List[PartialIPEntry]:
        return [entry for entry in self.entries if entry.nonzero]

    @property
    def m(self) -> int:
        """非零部分内积的个数"""
        return len(self.nonzero_entries)

    @property
    def all_separable(self) -> bool:
        return all(entry.separable for entry in self.nonzero_entries)


# ==================== 基本操作 ====================

def require_nonzero(x: State) -> None:
    """判定类操作拒绝零态"""
    if x.is_zero():
        raise ZeroState(f"零态不能参与判定: dims={x.dims}")


def make_state(dims: Sequence[int], amps: Sequence[complex]) -> State:
    """
    构造态，振幅按原样保存（不归一化）

    Args:
        dims: 各子系统维度
        amps: 行主序振幅列表，最后一个子系统下标变化最快

    Returns:
        State 对象
    """
    dims = [int(d) for d in dims]
    if len(dims) == 0:
        raise EmptyDims("维度列表不能为空")
    if any(d < 1 for d in dims):
        raise DimensionMismatch(f"子系统维度必须为正整数: {dims}")

    amps = np.asarray(amps, dtype=complex).reshape(-1)
    expected = int(np.prod(dims))
    if amps.size != expected:
        raise DimensionMismatch(f"振幅个数 {amps.size} 与维度乘积 {expected} 不一致")
    if not np.all(np.isfinite(amps)):
        raise DimensionMismatch("振幅必须是有限数")

    return State(tuple(dims), amps)


def basis_state(dims: Sequence[int], indices: Sequence[int]) -> State:
    """计算基态 |i_1 ... i_n>"""
    if len(indices) != len(dims):
        raise DimensionMismatch(f"下标个数 {len(indices)} 与子系统个数 {len(dims)} 不一致")
    amps = np.zeros(int(np.prod(dims)), dtype=complex)
    amps[np.ravel_multi_index(tuple(indices), tuple(dims))] = 1.0
    return make_state(dims, amps)


def inner_product(x: State, y: State) -> complex:
    """内积 <x|y>，对第一个参数共轭线性"""
    if x.dims != y.dims:
        raise DimensionMismatch(f"内积要求相同维度: {x.dims} != {y.dims}")
    return complex(np.vdot(x.amps, y.amps))


def partial_inner_product(v: Sequence[complex], k: int, x: State) -> State:
    """
    部分内积 <v|_k x，得到其余子系统上的态

    Args:
        v: 子系统 k 上的向量
        k: 子系统编号
        x: 多体态

    Returns:
        维度为 x.dims 去掉第 k 项的态
    """
    if x.n_parties < 2:
        raise DimensionMismatch("部分内积至少需要两个子系统")
    if not 0 <= k < x.n_parties:
        raise IndexOutOfRange(f"子系统编号 {k} 超出范围 [0, {x.n_parties})")

    v = np.asarray(v, dtype=complex).reshape(-1)
    if v.size != x.dims[k]:
        raise DimensionMismatch(f"向量长度 {v.size} 与子系统 {k} 的维度 {x.dims[k]} 不一致")

    contracted = np.tensordot(v.conj(), x.tensor, axes=([0], [k]))
    rest = x.dims[:k] + x.dims[k + 1:]
    return State(rest, contracted.reshape(-1))


def gram_schmidt_extend(
    partial: Sequence[Sequence[complex]],
    dim: int,
    tol: float = ORTHO_TOL,
) -> BasisSet:
    """
    把正交归一向量组扩充为完整的基

    候选向量依次取计算基，使用修正 Gram-Schmidt 并做一次再正交化

    Args:
        partial: 已有的正交归一向量
        dim: 子系统维度
        tol: 正交归一性容差

    Returns:
        前若干个向量等于 partial 的 BasisSet
    """
    vectors = [np.asarray(v, dtype=complex).reshape(-1) for v in partial]
    if len(vectors) > dim:
        raise NotOrthonormal(f"向量个数 {len(vectors)} 超过维度 {dim}")
    for v in vectors:
        if v.size != dim:
            raise DimensionMismatch(f"向量长度 {v.size} 与维度 {dim} 不一致")
    if vectors:
        deviation = gram_deviation(np.vstack(vectors))
        if deviation > tol:
            raise NotOrthonormal(f"输入向量 Gram 矩阵偏差 {deviation:.3e} 超过 {tol:.1e}")

    basis = list(vectors)
    for candidate in np.eye(dim, dtype=complex):
        if len(basis) == dim:
            break
        w = candidate.copy()
        # 两次正交化足够
        for _ in range(2):
            for q in basis:
                w = w - np.vdot(q, w) * q
        norm = np.linalg.norm(w)
        if norm > 1e-8:
            basis.append(w / norm)

    logger.debug(f"Gram-Schmidt 扩充: {len(vectors)} -> {dim} 个向量")
    return BasisSet(dim, np.vstack(basis) if basis else np.zeros((0, 0)), tol_ortho=tol)


def tensor_product(factors: Sequence[State]) -> State:
    """单体态的张量积"""
    if len(factors) == 0:
        raise EmptyDims("张量积至少需要一个因子")
    for factor in factors:
        if factor.n_parties != 1:
            raise DimensionMismatch(f"张量积因子必须是单体态: dims={factor.dims}")

    dims = [factor.dims[0] for factor in factors]
    amps = reduce(np.kron, [factor.amps for factor in factors])
    return make_state(dims, amps)


def product_state(vectors: Sequence[Sequence[complex]]) -> State:
    """由各子系统向量直接构造乘积态"""
    return tensor_product([make_state([len(v)], v) for v in vectors])


def apply_local_unitaries(x: State, unitaries: Sequence[Optional[np.ndarray]]) -> State:
    """
    在每个子系统上独立作用局域算符，None 表示恒等

    Args:
        x: 多体态
        unitaries: 每个子系统一个矩阵或 None

    Returns:
        变换后的态
    """
    if len(unitaries) != x.n_parties:
        raise DimensionMismatch(f"局域算符个数 {len(unitaries)} 与子系统个数 {x.n_parties} 不一致")

    tensor = x.tensor
    for k, unitary in enumerate(unitaries):
        if unitary is None:
            continue
        unitary = np.asarray(unitary, dtype=complex)
        if unitary.shape != (x.dims[k], x.dims[k]):
            raise DimensionMismatch(f"子系统 {k} 的算符形状 {unitary.shape} 与维度 {x.dims[k]} 不一致")
        tensor = np.moveaxis(np.tensordot(unitary, tensor, axes=([1], [k])), 0, k)
    return State(x.dims, tensor.reshape(-1))
