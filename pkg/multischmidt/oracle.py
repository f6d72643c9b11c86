"""
独立校验模块
约化密度矩阵、谱必要条件、分解校验与随机态生成器

随机数统一使用 numpy 的 Philox 计数器型生成器，给定种子即可复现
"""

import logging
from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple, Union

import numpy as np

from .config import VERIFY_TOL
from .exceptions import DimensionMismatch, TooManyTerms
from .multipartite import SchmidtDecomposition
from .tensor import State, make_state, product_state, require_nonzero
from .utils import RandomSource, gram_deviation, make_rng

logger = logging.getLogger(__name__)

SPECTRUM_TOL = 1e-8
EIGEN_ZERO = 1e-10


@dataclass
class DensityMatrix:
    """保留子系统上的约化密度矩阵"""
    parties: Tuple[int, ...]
    dims: Tuple[int, ...]
    entries: np.ndarray

    def trace(self) -> float:
        return float(np.real(np.trace(self.entries)))

    def normalized(self) -> "DensityMatrix":
        return DensityMatrix(self.parties, self.dims, self.entries / self.trace())

    def eigenvalues(self) -> np.ndarray:
        """降序排列的本征值"""
        return np.linalg.eigvalsh(self.entries)[::-1]

    def spectrum(self, zero: float = EIGEN_ZERO) -> np.ndarray:
        """归一化后大于 zero 的本征值"""
        values = self.normalized().eigenvalues()
        return values[values > zero]


# ==================== 约化密度矩阵与谱条件 ====================

def partial_trace(x: State, keep: Union[int, Iterable[int]]) -> DensityMatrix:
    """
    对其余子系统求偏迹

    Args:
        x: 非零态
        keep: 保留的子系统编号或编号集合

    Returns:
        DensityMatrix，迹等于 ||x||^2
    """
    require_nonzero(x)
    parties = (int(keep),) if isinstance(keep, (int, np.integer)) else tuple(sorted(set(int(p) for p in keep)))
    if not parties or any(not 0 <= p < x.n_parties for p in parties):
        raise DimensionMismatch(f"保留的子系统 {parties} 无效 (共 {x.n_parties} 个子系统)")

    rest = tuple(p for p in range(x.n_parties) if p not in parties)
    kept_dims = tuple(x.dims[p] for p in parties)
    matrix = x.tensor.transpose(parties + rest).reshape(int(np.prod(kept_dims)), -1)
    rho = matrix @ matrix.conj().T
    return DensityMatrix(parties, kept_dims, (rho + rho.conj().T) / 2)


def spectral_necessary_check(x: State, tol: float = SPECTRUM_TOL) -> bool:
    """
    单体约化密度矩阵的非零谱是否两两相同

    False 足以证明不存在 Schmidt 分解；True 不能说明任何问题
    """
    require_nonzero(x)
    spectra = [partial_trace(x, k).spectrum() for k in range(x.n_parties)]
    reference = spectra[0]
    for k, spectrum in enumerate(spectra[1:], start=1):
        if len(spectrum) != len(reference) or not np.allclose(spectrum, reference, atol=tol, rtol=0):
            logger.debug(f"子系统 0 与 {k} 的约化谱不同: {reference} vs {spectrum}")
            return False
    return True


def verify_decomposition(x: State, decomposition: SchmidtDecomposition, tol: float = VERIFY_TOL) -> bool:
    """各子系统 Gram 矩阵为单位阵且重构误差不超过 tol * ||x||"""
    if tuple(decomposition.dims) != x.dims:
        raise DimensionMismatch(f"分解维度 {decomposition.dims} 与态维度 {x.dims} 不一致")
    for vectors in decomposition.party_vectors:
        if gram_deviation(vectors) > tol:
            return False
    error = np.linalg.norm(decomposition.reconstruct().amps - x.amps)
    return bool(error <= tol * x.norm())


def lambdas_match(found: Sequence[float], expected: Sequence[float], tol: float = VERIFY_TOL) -> bool:
    """排序后逐项比较系数"""
    found = np.sort(np.asarray(found, dtype=float))
    expected = np.sort(np.asarray(expected, dtype=float))
    return found.shape == expected.shape and bool(np.all(np.abs(found - expected) <= tol))


# ==================== 随机生成器 ====================

def random_unitary(dim: int, seed: RandomSource = None) -> np.ndarray:
    """Haar 随机酉矩阵：复高斯矩阵做 QR 分解并修正对角相位"""
    rng = make_rng(seed)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    diagonal = np.diag(r)
    return q * (diagonal / np.abs(diagonal))


def random_state(dims: Sequence[int], seed: RandomSource = None) -> State:
    """复高斯分布的归一化随机态"""
    rng = make_rng(seed)
    size = int(np.prod(dims))
    amps = rng.standard_normal(size) + 1j * rng.standard_normal(size)
    return make_state(dims, amps / np.linalg.norm(amps))


def random_schmidt_state(
    dims: Sequence[int],
    lambdas: Sequence[float],
    seed: RandomSource = None,
) -> Tuple[State, SchmidtDecomposition]:
    """
    生成已知 Schmidt 分解的随机态

    先构造 sum_i lambda_i |i...i>，再在每个子系统上独立作用 Haar 随机酉矩阵

    Args:
        dims: 各子系统维度
        lambdas: 正系数，内部归一化并降序排列
        seed: 随机种子

    Returns:
        (态, 真实分解)
    """
    dims = tuple(int(d) for d in dims)
    coefficients = np.asarray(lambdas, dtype=float).reshape(-1)
    if coefficients.size == 0 or np.any(coefficients <= 0):
        raise DimensionMismatch(f"系数必须为正: {list(coefficients)}")
    if dims and coefficients.size > min(dims):
        raise TooManyTerms(f"项数 {coefficients.size} 超过最小子系统维度 {min(dims)}")

    coefficients = np.sort(coefficients / np.linalg.norm(coefficients))[::-1]
    rng = make_rng(seed)
    party_vectors = [random_unitary(d, rng)[:, :coefficients.size].T.copy() for d in dims]

    amps = np.zeros(int(np.prod(dims)), dtype=complex)
    for i, coefficient in enumerate(coefficients):
        amps = amps + coefficient * product_state([v[i] for v in party_vectors]).amps

    truth = SchmidtDecomposition(coefficients, party_vectors, dims)
    return make_state(dims, amps), truth


def random_biseparable_state(dims: Sequence[int], seed: RandomSource = None) -> Tuple[State, int]:
    """
    部分可分但纠缠的随机态：其余子系统上的随机纠缠态与一个随机单体态的张量积

    Returns:
        (态, 单体因子所在的子系统编号)
    """
    dims = tuple(int(d) for d in dims)
    if len(dims) < 3 or any(d < 2 for d in dims):
        raise DimensionMismatch(f"至少需要三个维度不小于 2 的子系统: {dims}")

    rng = make_rng(seed)
    single = int(rng.integers(len(dims)))
    others = dims[:single] + dims[single + 1:]
    block = random_state(others, rng)
    factor = random_state([dims[single]], rng)

    tensor = np.multiply.outer(block.tensor, factor.amps)
    tensor = np.moveaxis(tensor, -1, single)
    return make_state(dims, tensor.reshape(-1)), single


# ==================== 命名态 ====================

def ghz_state(n_parties: int = 3, dim: int = 2) -> State:
    """sum_i |i...i> / sqrt(dim)"""
    dims = [dim] * n_parties
    amps = np.zeros(dim ** n_parties, dtype=complex)
    for i in range(dim):
        amps[np.ravel_multi_index((i,) * n_parties, dims)] = 1.0
    return make_state(dims, amps / np.sqrt(dim))


def w_state(n_parties: int = 3) -> State:
    """单激发等权叠加"""
    dims = [2] * n_parties
    amps = np.zeros(2 ** n_parties, dtype=complex)
    for k in range(n_parties):
        index = [0] * n_parties
        index[k] = 1
        amps[np.ravel_multi_index(tuple(index), dims)] = 1.0
    return make_state(dims, amps / np.sqrt(n_parties))


def local_unitaries(dims: Sequence[int], seed: RandomSource = None) -> List[np.ndarray]:
    """每个子系统一个独立的 Haar 随机酉矩阵"""
    rng = make_rng(seed)
    return [random_unitary(d, rng) for d in dims]
