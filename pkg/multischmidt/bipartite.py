"""
二体 Schmidt 分解模块
对矩阵化后的态做奇异值分解，给出 Schmidt 系数、向量与 Schmidt 数
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from .config import DEFAULT_TOL, GAP_TOL
from .exceptions import InvalidBipartition, SvdFailure
from .tensor import State, require_nonzero
from .utils import dominant_index, format_parties

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Bipartition:
    """子系统集合的二分划，left 与 right 均按升序排列且非空"""
    left: Tuple[int, ...]
    right: Tuple[int, ...]

    def __post_init__(self):
        left = tuple(sorted(set(int(p) for p in self.left)))
        right = tuple(sorted(set(int(p) for p in self.right)))
        if not left or not right:
            raise InvalidBipartition("二分划两侧都必须非空")
        if set(left) & set(right):
            raise InvalidBipartition(f"二分划两侧有重叠: {left} / {right}")
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)

    @classmethod
    def from_left(cls, left: Iterable[int], n_parties: int) -> "Bipartition":
        """由左侧子系统集合构造，右侧取补集"""
        left = set(int(p) for p in left)
        bad = [p for p in left if not 0 <= p < n_parties]
        if bad:
            raise InvalidBipartition(f"子系统编号越界: {bad} (共 {n_parties} 个子系统)")
        right = [p for p in range(n_parties) if p not in left]
        return cls(tuple(left), tuple(right))

    @classmethod
    def parse(cls, text: str, n_parties: int) -> "Bipartition":
        """
        解析形如 "0|1,2"、"0,1" 或 "0|" 的二分划描述，省略的一侧取补集

        Args:
            text: 二分划描述
            n_parties: 子系统个数

        Returns:
            Bipartition 对象
        """
        try:
            if "|" in text:
                left_text, right_text = text.split("|", 1)
            else:
                left_text, right_text = text, ""
            left = [int(p) for p in left_text.split(",") if p.strip()]
            right = [int(p) for p in right_text.split(",") if p.strip()]
        except ValueError as e:
            raise InvalidBipartition(f"无法解析二分划 '{text}': {e}")

        if not left and right:
            split = cls.from_left([p for p in range(n_parties) if p not in right], n_parties)
        else:
            split = cls.from_left(left, n_parties)
        if right and tuple(sorted(set(right))) != split.right:
            raise InvalidBipartition(f"二分划 '{text}' 两侧不构成子系统全集的划分")
        return split

    @property
    def n_parties(self) -> int:
        return len(self.left) + len(self.right)

    def validate_for(self, dims: Sequence[int]) -> None:
        if sorted(self.left + self.right) != list(range(len(dims))):
            raise InvalidBipartition(
                f"二分划 {self.left}|{self.right} 与 {len(dims)} 个子系统不匹配"
            )

    def __str__(self) -> str:
        return f"{format_parties(self.left)}|{format_parties(self.right)}"


@dataclass
class BipartiteSchmidt:
    """
    二体 Schmidt 分解，只保存非零项

    left_vectors / right_vectors 的第 i 行分别是第 i 项在左右两侧的向量，
    右侧向量按右侧子系统的行主序展平
    """
    coefficients: np.ndarray
    left_vectors: np.ndarray
    right_vectors: np.ndarray
    rank: int
    split: Bipartition
    left_dims: Tuple[int, ...]
    right_dims: Tuple[int, ...]
    clusters: List[Tuple[int, ...]] = field(default_factory=list)

    def reconstruct(self) -> np.ndarray:
        """按矩阵化的形状重构"""
        return (self.left_vectors.T * self.coefficients) @ self.right_vectors


def matricize(x: State, split: Bipartition) -> np.ndarray:
    """
    把态按二分划重排为矩阵

    行下标是左侧子系统（升序，最后一个最快）的多重下标，列下标对应右侧
    """
    split.validate_for(x.dims)
    left_size = int(np.prod([x.dims[p] for p in split.left]))
    right_size = int(np.prod([x.dims[p] for p in split.right]))
    return x.tensor.transpose(split.left + split.right).reshape(left_size, right_size)


def _degenerate_clusters(values: np.ndarray, gap: float) -> List[Tuple[int, ...]]:
    """相对间隙小于 gap 的相邻奇异值归为同一簇，只返回大小大于 1 的簇"""
    clusters: List[Tuple[int, ...]] = []
    current = [0] if len(values) else []
    for i in range(1, len(values)):
        if values[i - 1] - values[i] < gap * values[0]:
            current.append(i)
        else:
            if len(current) > 1:
                clusters.append(tuple(current))
            current = [i]
    if len(current) > 1:
        clusters.append(tuple(current))
    return clusters


def bipartite_schmidt(
    x: State,
    split: Bipartition,
    tol: float = DEFAULT_TOL,
    gap: float = GAP_TOL,
) -> BipartiteSchmidt:
    """
    二体 Schmidt 分解

    Args:
        x: 非零态
        split: 二分划
        tol: 相对零阈值，sigma_i <= tol * sigma_max 的项视为零
        gap: 简并簇的相对间隙

    Returns:
        BipartiteSchmidt，系数为降序非负实数
    """
    require_nonzero(x)
    matrix = matricize(x, split)

    try:
        u, s, vh = np.linalg.svd(matrix, full_matrices=False)
    except np.linalg.LinAlgError as e:
        raise SvdFailure(f"奇异值分解不收敛 ({split}): {e}")

    rank = int(np.count_nonzero(s > tol * s[0]))
    s = s[:rank]
    left = u[:, :rank].T.copy()
    right = vh[:rank, :].copy()

    # 相位吸收进左侧向量：右侧向量模最大的分量为正实数
    for i in range(rank):
        top = dominant_index(right[i])
        phase = right[i, top] / abs(right[i, top])
        right[i] = right[i] * np.conj(phase)
        left[i] = left[i] * phase

    # 相等系数按左侧主导分量下标升序排列
    clusters = _degenerate_clusters(s, gap)
    order = list(range(rank))
    for cluster in clusters:
        ranked = sorted(cluster, key=lambda i: dominant_index(left[i]))
        for position, i in zip(cluster, ranked):
            order[position] = i
    s, left, right = s[order], left[order], right[order]

    left_dims = tuple(x.dims[p] for p in split.left)
    right_dims = tuple(x.dims[p] for p in split.right)
    logger.debug(f"二分划 {split}: Schmidt 数 {rank}, 简并簇 {clusters}")

    return BipartiteSchmidt(
        coefficients=s,
        left_vectors=left,
        right_vectors=right,
        rank=rank,
        split=split,
        left_dims=left_dims,
        right_dims=right_dims,
        clusters=clusters,
    )


def schmidt_number(x: State, split: Bipartition, tol: float = DEFAULT_TOL) -> int:
    """二分划下的 Schmidt 数（非零 Schmidt 系数个数）"""
    return bipartite_schmidt(x, split, tol).rank


def first_party_split(n_parties: int) -> Bipartition:
    """{0}|{1,...,n-1}"""
    return Bipartition.from_left([0], n_parties)


def enumerate_bipartitions(n_parties: int, contiguous: bool = False) -> List[Bipartition]:
    """
    按规范顺序枚举二分划

    contiguous=True 时只给出前缀划分 {0..k-1}|{k..n-1}；
    否则枚举所有包含子系统 0 的左侧真子集（共 2^(n-1)-1 个），先按大小再按字典序
    """
    if n_parties < 2:
        return []
    if contiguous:
        return [Bipartition.from_left(range(k), n_parties) for k in range(1, n_parties)]

    splits = []
    others = list(range(1, n_parties))
    for size in range(0, n_parties - 1):
        for extra in combinations(others, size):
            splits.append(Bipartition.from_left((0,) + extra, n_parties))
    return splits


def ranks_across(x: State, splits: Sequence[Bipartition], tol: float = DEFAULT_TOL,
                 max_workers: int = 1) -> List[int]:
    """对多个二分划计算 Schmidt 数，结果顺序与 splits 一致"""
    if max_workers > 1 and len(splits) > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as executor:
            return list(executor.map(lambda split: schmidt_number(x, split, tol), splits))
    return [schmidt_number(x, split, tol) for split in splits]
