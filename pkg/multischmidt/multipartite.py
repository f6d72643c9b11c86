"""
多体 Schmidt 分解模块
可分性检测、修正后的充要条件、构造性分解器、基约化与否定证书
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .bipartite import (
    Bipartition,
    bipartite_schmidt,
    enumerate_bipartitions,
    first_party_split,
    matricize,
    ranks_across,
)
from .config import (
    DEFAULT_TOL,
    EIGEN_GAP_TOL,
    GAP_TOL,
    OFFDIAG_TOL,
    ORTHO_TOL,
    PROBE_SEEDS,
    VERIFY_TOL,
)
from .exceptions import (
    DimensionMismatch,
    IndexOutOfRange,
    NotProportional,
    NumericalAmbiguity,
    PreconditionViolated,
    ReductionCheckFailed,
)
from .tensor import (
    BasisSet,
    PartialIPEntry,
    PartialIPTable,
    State,
    gram_schmidt_extend,
    partial_inner_product,
    product_state,
    require_nonzero,
)
from .utils import dominant_index, format_parties, gram_deviation, make_rng, phase_normalize

logger = logging.getLogger(__name__)


# ==================== 枚举类型 ====================

class ConditionMode(str, Enum):
    """条件检查模式"""
    ALL_PARTIES = "all"
    SMALLEST_PARTY = "pati"


class FailureKind(str, Enum):
    """分解器给出“不存在”的原因"""
    NONE = "none"
    RESIDUAL = "residual"
    NOT_ORTHONORMAL = "not-orthonormal"
    RECONSTRUCTION = "reconstruction"


# ==================== 数据类型 ====================

@dataclass
class SchmidtDecomposition:
    """
    多体 Schmidt 分解 x = sum_i lambda_i (x)_j u_i^{A_j}

    party_vectors[j] 的第 i 行是 u_i^{A_j}；只保存非零项
    """
    coefficients: np.ndarray
    party_vectors: List[np.ndarray]
    dims: Tuple[int, ...]

    @property
    def n_parties(self) -> int:
        return len(self.party_vectors)

    @property
    def m(self) -> int:
        return len(self.coefficients)

    def reconstruct(self) -> State:
        amps = np.zeros(int(np.prod(self.dims)), dtype=complex)
        for i, coefficient in enumerate(self.coefficients):
            amps = amps + coefficient * product_state([v[i] for v in self.party_vectors]).amps
        return State(self.dims, amps)

    def extended_bases(self, tol: float = ORTHO_TOL) -> List[BasisSet]:
        """把每个子系统的向量组扩充为完整的基"""
        return [gram_schmidt_extend(list(vectors), dim, tol)
                for vectors, dim in zip(self.party_vectors, self.dims)]


@dataclass
class SeparabilityReport:
    """完全可分性判定结果"""
    completely_separable: bool
    factors: Optional[List[np.ndarray]] = None
    scalar: complex = 0j
    partial_split: Optional[Bipartition] = None
    verdict_basis: str = ""
    failing_party: Optional[int] = None


@dataclass
class PartialSeparation:
    """部分可分性的见证：x = left_factor (x) right_factor"""
    split: Bipartition
    left_factor: State
    right_factor: State


@dataclass
class ConditionReport:
    """充要条件检查结果，只包含被检查的子系统"""
    mode: ConditionMode
    bases: Dict[int, BasisSet]
    tables: Dict[int, PartialIPTable]
    m_j: Dict[int, int]
    m: int
    satisfied: bool
    failing_party: Optional[int] = None
    failing_index: Optional[int] = None

    @property
    def failing_residual(self) -> Optional[State]:
        if self.failing_party is None:
            return None
        return self.tables[self.failing_party].entries[self.failing_index].residual


@dataclass
class DecompositionOutcome:
    """分解器的完整结论"""
    decomposition: Optional[SchmidtDecomposition]
    kind: FailureKind = FailureKind.NONE
    failing_term: Optional[int] = None
    message: str = ""
    split: Optional[Bipartition] = None
    unresolved_clusters: List[Tuple[int, ...]] = field(default_factory=list)

    @property
    def decomposable(self) -> bool:
        return self.decomposition is not None


# ==================== 可分性 ====================

def is_completely_separable(x: State, tol: float = DEFAULT_TOL) -> SeparabilityReport:
    """
    完全可分性判定

    依次沿 {第 k 个子系统}|{其余} 切分：秩为 1 时记录左因子并对剩余部分递归

    Args:
        x: 非零态
        tol: 相对零阈值

    Returns:
        SeparabilityReport；可分时 factors 为单位向量，x = scalar * (x) factors
    """
    require_nonzero(x)
    n = x.n_parties
    factors: List[np.ndarray] = []
    current = x

    for party in range(n - 1):
        schmidt = bipartite_schmidt(current, first_party_split(current.n_parties), tol)
        if schmidt.rank != 1:
            cut = f"{format_parties([party])}|{format_parties(range(party + 1, n))}"
            logger.debug(f"非完全可分: 切分 {cut} 的 Schmidt 数为 {schmidt.rank}")
            return SeparabilityReport(
                completely_separable=False,
                verdict_basis=f"Schmidt number {schmidt.rank} across {cut}",
                failing_party=party,
            )
        factor = phase_normalize(schmidt.left_vectors[0])
        factors.append(factor)
        current = partial_inner_product(factor, 0, current)

    factors.append(phase_normalize(current.amps / np.linalg.norm(current.amps)))
    scalar = np.vdot(product_state(factors).amps, x.amps)

    return SeparabilityReport(
        completely_separable=True,
        factors=factors,
        scalar=complex(scalar),
        partial_split=first_party_split(n) if n >= 2 else None,
        verdict_basis="Schmidt number 1 across every cut {k}|{k+1,...}",
    )


def find_partial_separation(
    x: State,
    tol: float = DEFAULT_TOL,
    contiguous: bool = False,
    max_workers: int = 1,
) -> Optional[PartialSeparation]:
    """
    寻找部分可分的二分划

    按规范顺序枚举二分划，返回第一个 Schmidt 数为 1 的划分及两侧因子；
    contiguous=True 时只考虑前缀划分

    Returns:
        PartialSeparation，不存在时为 None
    """
    require_nonzero(x)
    if x.n_parties < 2:
        raise PreconditionViolated("部分可分性至少需要两个子系统")

    splits = enumerate_bipartitions(x.n_parties, contiguous)
    ranks = ranks_across(x, splits, tol, max_workers)

    for split, rank in zip(splits, ranks):
        if rank != 1:
            continue
        schmidt = bipartite_schmidt(x, split, tol)
        left = State(schmidt.left_dims, schmidt.left_vectors[0] * schmidt.coefficients[0])
        right = State(schmidt.right_dims, schmidt.right_vectors[0])
        logger.debug(f"找到部分可分划分: {split}")
        return PartialSeparation(split, left, right)

    return None


# ==================== 部分内积表与条件检查 ====================

def build_partial_ip_table(
    x: State,
    basis: BasisSet,
    party: int,
    tol: float = DEFAULT_TOL,
) -> PartialIPTable:
    """
    计算某个子系统基向量与态的全部部分内积

    权重大于 tol * ||x|| 的残差视为非零，并检查其完全可分性；
    可分时 factors 满足 residual = weight * (x) factors
    """
    if basis.party_dim != x.dims[party]:
        raise DimensionMismatch(
            f"子系统 {party} 的基维度 {basis.party_dim} 与态维度 {x.dims[party]} 不一致"
        )

    threshold = tol * x.norm()
    table = PartialIPTable(party_index=party)

    for i, vector in enumerate(basis.vectors):
        residual = partial_inner_product(vector, party, x)
        weight = residual.norm()
        if weight <= threshold:
            table.entries.append(PartialIPEntry(i, residual, weight, nonzero=False, separable=False))
            continue

        report = is_completely_separable(residual, tol)
        factors = None
        if report.completely_separable:
            factors = [f.copy() for f in report.factors]
            factors[0] = factors[0] * (report.scalar / abs(report.scalar))
        table.entries.append(PartialIPEntry(
            i, residual, weight, nonzero=True,
            separable=report.completely_separable, factors=factors,
        ))

    return table


def check_condition(
    x: State,
    bases: Sequence[BasisSet],
    mode: ConditionMode = ConditionMode.ALL_PARTIES,
    tol: float = DEFAULT_TOL,
    max_workers: int = 1,
) -> ConditionReport:
    """
    检查给定基是否满足充要条件：每个非零部分内积都在其余子系统上完全可分

    smallest-party 模式只检查维度最小的子系统，用于演示该条件的不充分性

    Args:
        x: 非零态
        bases: 每个子系统一个完整的基
        mode: 检查模式
        tol: 相对零阈值
        max_workers: 并行计算各子系统表的线程数

    Returns:
        ConditionReport
    """
    require_nonzero(x)
    mode = ConditionMode(mode)
    n = x.n_parties
    if n < 2:
        raise PreconditionViolated("条件检查至少需要两个子系统")
    if len(bases) != n:
        raise DimensionMismatch(f"基的个数 {len(bases)} 与子系统个数 {n} 不一致")
    for j, basis in enumerate(bases):
        if basis.party_dim != x.dims[j]:
            raise DimensionMismatch(f"子系统 {j} 的基维度 {basis.party_dim} 与态维度 {x.dims[j]} 不一致")

    if mode == ConditionMode.SMALLEST_PARTY:
        parties = [int(np.argmin(x.dims))]
    else:
        parties = list(range(n))

    if max_workers > 1 and len(parties) > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as executor:
            tables = list(executor.map(
                lambda j: build_partial_ip_table(x, bases[j], j, tol), parties))
    else:
        tables = [build_partial_ip_table(x, bases[j], j, tol) for j in parties]

    report = ConditionReport(
        mode=mode,
        bases={j: bases[j] for j in parties},
        tables=dict(zip(parties, tables)),
        m_j={j: table.m for j, table in zip(parties, tables)},
        m=max(table.m for table in tables),
        satisfied=all(table.all_separable for table in tables),
    )

    for j, table in zip(parties, tables):
        bad = [entry for entry in table.nonzero_entries if not entry.separable]
        if bad:
            report.failing_party = j
            report.failing_index = bad[0].basis_index
            break

    logger.debug(f"条件检查 ({mode.value}): m_j={report.m_j}, satisfied={report.satisfied}")
    return report


# ==================== 构造性分解 ====================

def _hermitian_units(dim: int) -> List[np.ndarray]:
    """dim 维厄米矩阵单位构成的基"""
    units = []
    for i in range(dim):
        unit = np.zeros((dim, dim), dtype=complex)
        unit[i, i] = 1.0
        units.append(unit)
    for i in range(dim):
        for j in range(i + 1, dim):
            real = np.zeros((dim, dim), dtype=complex)
            real[i, j] = real[j, i] = 1.0
            imag = np.zeros((dim, dim), dtype=complex)
            imag[i, j], imag[j, i] = -1j, 1j
            units.extend([real, imag])
    return units


def _conditional_operators(right: np.ndarray, right_dims: Tuple[int, ...]) -> List[np.ndarray]:
    """
    簇内条件算符 O(B)_{ab} = <r_a| B (x) I |r_b>

    B 取遍右侧每个子系统上的厄米矩阵单位
    """
    cluster_size = right.shape[0]
    tensor = right.T.reshape(right_dims + (cluster_size,))
    operators = []
    for k, dim in enumerate(right_dims):
        local = np.moveaxis(tensor, k, 0).reshape(dim, -1, cluster_size)
        reduced = np.einsum('ira,jrb->iajb', local.conj(), local)
        for unit in _hermitian_units(dim):
            operators.append(np.einsum('ij,iajb->ab', unit, reduced))
    return operators


def _offdiag(matrix: np.ndarray) -> float:
    return float(np.max(np.abs(matrix - np.diag(np.diag(matrix))))) if matrix.size else 0.0


def _eigen_groups(eigenvalues: np.ndarray, eigen_gap: float) -> List[List[int]]:
    """升序本征值中相对间隙小于 eigen_gap 的相邻值归为一组"""
    scale = max(float(np.max(np.abs(eigenvalues))), 1e-300)
    groups = [[0]]
    for i in range(1, len(eigenvalues)):
        if (eigenvalues[i] - eigenvalues[i - 1]) / scale < eigen_gap:
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


def _block_residual(operators: Sequence[np.ndarray], groups: Sequence[Sequence[int]]) -> float:
    """不同本征值组之间的矩阵元的最大模"""
    labels = np.empty(sum(len(g) for g in groups), dtype=int)
    for label, group in enumerate(groups):
        labels[list(group)] = label
    mask = labels[:, None] != labels[None, :]
    return max(float(np.max(np.abs(op[mask]), initial=0.0)) for op in operators)


def _split_degenerate(
    left: np.ndarray,
    right: np.ndarray,
    operators: Sequence[np.ndarray],
    candidates: Sequence[Tuple[List[List[int]], np.ndarray]],
    right_dims: Tuple[int, ...],
    seeds: Sequence[int],
    offdiag_tol: float,
    eigen_gap: float,
) -> Tuple[np.ndarray, np.ndarray, bool]:
    """
    每个种子的组合都有重复本征值时，按本征值组分块后逐块处理

    组的大小在各种子下一致才视为精确简并，否则认为数值上无法判定
    """
    shapes = {tuple(sorted(len(g) for g in groups)) for groups, _ in candidates}
    if len(shapes) != 1 or len(candidates[0][0]) == 1:
        raise NumericalAmbiguity(f"简并簇在种子 {list(seeds)} 下均无法稳定对角化")

    groups, eigenvectors = candidates[0]
    rotated_left = eigenvectors.conj().T @ left
    rotated_right = eigenvectors.T @ right
    rotated_ops = [eigenvectors.conj().T @ op @ eigenvectors for op in operators]
    residual = _block_residual(rotated_ops, groups)
    if residual > offdiag_tol:
        logger.debug(f"探针在本征值组之间不分块, 残差 {residual:.2e}")
        return rotated_left, rotated_right, False

    logger.debug(f"簇按本征值组 {[len(g) for g in groups]} 分块处理")
    resolved = True
    for group in groups:
        if len(group) == 1:
            continue
        sub_left, sub_right, ok = _resolve_cluster(
            rotated_left[group], rotated_right[group], right_dims, seeds, offdiag_tol, eigen_gap)
        rotated_left[group], rotated_right[group] = sub_left, sub_right
        resolved = resolved and ok
    return rotated_left, rotated_right, resolved


def _resolve_cluster(
    left: np.ndarray,
    right: np.ndarray,
    right_dims: Tuple[int, ...],
    seeds: Sequence[int],
    offdiag_tol: float,
    eigen_gap: float,
) -> Tuple[np.ndarray, np.ndarray, bool]:
    """
    消除简并奇异值簇内的旋转自由度

    对条件算符的随机实线性组合做对角化；可同时对角化时得到乘积基。
    组合本征值在所有种子下都有精确重复时，按本征值组分块递归

    Returns:
        (旋转后的左向量, 旋转后的右向量, 探针是否全部被对角化)
    """
    if right.shape[0] == 1:
        return left, right, True

    operators = _conditional_operators(right, right_dims)
    if all(_offdiag(op) <= offdiag_tol and np.ptp(np.real(np.diag(op))) <= offdiag_tol
           for op in operators):
        # 所有探针在簇上都正比于单位阵，不存在乘积基
        logger.debug("探针无法区分簇内向量")
        return left, right, False

    stable: Optional[Tuple[np.ndarray, np.ndarray, bool]] = None
    candidates: List[Tuple[List[List[int]], np.ndarray]] = []
    for seed in seeds:
        rng = make_rng(seed)
        weights = rng.standard_normal(len(operators))
        combined = sum(w * op for w, op in zip(weights, operators))
        combined = (combined + combined.conj().T) / 2

        try:
            eigenvalues, eigenvectors = np.linalg.eigh(combined)
        except np.linalg.LinAlgError as e:
            raise NumericalAmbiguity(f"簇内对角化失败 (seed={seed}): {e}")

        groups = _eigen_groups(eigenvalues, eigen_gap)
        if len(groups) < len(eigenvalues):
            logger.debug(f"seed={seed}: 本征值组 {[len(g) for g in groups]} 含重复值")
            candidates.append((groups, eigenvectors))
            continue

        residual = max(_offdiag(eigenvectors.conj().T @ op @ eigenvectors) for op in operators)
        rotated_left = eigenvectors.conj().T @ left
        rotated_right = eigenvectors.T @ right
        if residual <= offdiag_tol:
            logger.debug(f"seed={seed}: 簇已分离, 非对角残差 {residual:.2e}")
            return rotated_left, rotated_right, True

        logger.debug(f"seed={seed}: 探针不可同时对角化, 非对角残差 {residual:.2e}")
        stable = (rotated_left, rotated_right, False)

    if stable is not None:
        return stable
    if not candidates:
        raise NumericalAmbiguity(f"简并簇在种子 {list(seeds)} 下均无法稳定对角化")
    return _split_degenerate(left, right, operators, candidates, right_dims, seeds, offdiag_tol, eigen_gap)


def diagnose_decomposition(
    x: State,
    tol: float = DEFAULT_TOL,
    *,
    verify_tol: float = VERIFY_TOL,
    ortho_tol: float = ORTHO_TOL,
    gap: float = GAP_TOL,
    offdiag_tol: float = OFFDIAG_TOL,
    eigen_gap: float = EIGEN_GAP_TOL,
    seeds: Sequence[int] = PROBE_SEEDS,
) -> DecompositionOutcome:
    """
    构造多体 Schmidt 分解并给出完整结论

    步骤：沿 {0}|{其余} 做二体分解；用条件算符消除简并簇内的旋转自由度；
    检查每个右向量在其余子系统上完全可分；拼装各子系统向量并校验正交归一性和重构误差

    Args:
        x: 非零态
        tol: 相对零阈值
        verify_tol: 重构相对误差容差
        ortho_tol: Gram 矩阵偏差容差
        gap: 简并簇的相对间隙
        offdiag_tol: 探针非对角残差容差
        eigen_gap: 簇内旋转所需的最小相对本征值间隙
        seeds: 探针随机组合种子

    Returns:
        DecompositionOutcome；返回的分解总是经过重构校验
    """
    require_nonzero(x)
    n = x.n_parties

    if n == 1:
        norm = x.norm()
        decomposition = SchmidtDecomposition(np.array([norm]), [(x.amps / norm)[None, :]], x.dims)
        return DecompositionOutcome(decomposition)

    split = first_party_split(n)
    schmidt = bipartite_schmidt(x, split, tol, gap)
    coefficients = schmidt.coefficients.copy()
    left = schmidt.left_vectors.copy()
    right = schmidt.right_vectors.copy()
    unresolved: List[Tuple[int, ...]] = []

    if n == 2:
        party_vectors = [left, right]
    else:
        for cluster in schmidt.clusters:
            index = list(cluster)
            left[index], right[index], resolved = _resolve_cluster(
                left[index], right[index], schmidt.right_dims, seeds, offdiag_tol, eigen_gap)
            if not resolved:
                unresolved.append(cluster)

        # 旋转后的项由右向量重新求系数与左向量，簇内系数可以略有不同
        matrix = matricize(x, split)
        for cluster in schmidt.clusters:
            for i in cluster:
                image = matrix @ right[i].conj()
                weight = float(np.linalg.norm(image))
                if weight > 0:
                    coefficients[i] = weight
                    left[i] = image / weight

        per_party: List[List[np.ndarray]] = [[] for _ in range(n - 1)]
        for i in range(schmidt.rank):
            report = is_completely_separable(State(schmidt.right_dims, right[i]), tol)
            if not report.completely_separable:
                message = (f"right Schmidt vector {i} across {split} is not completely separable "
                           f"({report.verdict_basis})")
                logger.info(f"分解不存在: {message}")
                return DecompositionOutcome(None, FailureKind.RESIDUAL, i, message, split, unresolved)
            left[i] = left[i] * (report.scalar / abs(report.scalar))
            for k, factor in enumerate(report.factors):
                per_party[k].append(factor)
        party_vectors = [left] + [np.vstack(vectors) for vectors in per_party]

    # 簇内按系数降序，相等系数按第一个子系统的主导分量下标排序
    order = list(range(len(coefficients)))
    for cluster in schmidt.clusters:
        top = max(coefficients[i] for i in cluster)
        ranked = sorted(cluster, key=lambda i: (-round(coefficients[i] / top, 12), dominant_index(left[i])))
        for position, i in zip(cluster, ranked):
            order[position] = i
    decomposition = SchmidtDecomposition(
        coefficients[order], [vectors[order] for vectors in party_vectors], x.dims)

    for j, vectors in enumerate(decomposition.party_vectors):
        deviation = gram_deviation(vectors)
        if deviation > ortho_tol:
            message = f"party {format_parties([j])} vectors are not orthonormal (Gram deviation {deviation:.2e})"
            logger.info(f"分解不存在: {message}")
            return DecompositionOutcome(None, FailureKind.NOT_ORTHONORMAL, None, message, split, unresolved)

    error = np.linalg.norm(decomposition.reconstruct().amps - x.amps) / x.norm()
    if error > verify_tol:
        message = f"reconstruction error {error:.2e} exceeds {verify_tol:.1e}"
        logger.info(f"分解不存在: {message}")
        return DecompositionOutcome(None, FailureKind.RECONSTRUCTION, None, message, split, unresolved)

    logger.debug(f"分解成功: m={decomposition.m}, 重构误差 {error:.2e}")
    return DecompositionOutcome(decomposition, split=split, unresolved_clusters=unresolved)


def multipartite_schmidt_decompose(x: State, tol: float = DEFAULT_TOL, **options) -> Optional[SchmidtDecomposition]:
    """多体 Schmidt 分解；不存在时返回 None"""
    return diagnose_decomposition(x, tol, **options).decomposition


# ==================== 基约化 ====================

def lemma_cs2_reduce(
    x: State,
    bases: Sequence[BasisSet],
    j: int,
    s: int,
    t: int,
    tol: float = DEFAULT_TOL,
    overlap_tol: float = OFFDIAG_TOL,
) -> BasisSet:
    """
    合并子系统 j 的两个基向量，使非零部分内积的个数减少 1

    要求给定的基满足条件；在子系统 s 的第 t 个基向量上，j 的残差因子至少有两个
    与之不正交。两个残差的因子成比例时，把对应基向量旋转为
    (a u + b u')/|.| 与 (b u - conj(a) u')/|.|

    Args:
        x: 非零态
        bases: 每个子系统一个满足条件的基
        j: 被替换基的子系统
        s: 提供重叠判据的子系统，s != j
        t: 子系统 s 中非零残差对应的基向量下标
        tol: 相对零阈值
        overlap_tol: 判定重叠非零及比例关系的容差

    Returns:
        子系统 j 的新基
    """
    require_nonzero(x)
    n = x.n_parties
    for party in (j, s):
        if not 0 <= party < n:
            raise IndexOutOfRange(f"子系统编号 {party} 超出范围 [0, {n})")
    if s == j:
        raise PreconditionViolated("s 必须不同于 j")

    snapshot = x.amps.copy()
    report = check_condition(x, bases, ConditionMode.ALL_PARTIES, tol)
    if not report.satisfied:
        raise PreconditionViolated(
            f"给定的基不满足条件: 子系统 {format_parties([report.failing_party])} 第 {report.failing_index} 个残差不可分"
        )

    table_j = report.tables[j]
    table_s = report.tables[s]
    if not 0 <= t < len(table_s.entries) or not table_s.entries[t].nonzero:
        raise PreconditionViolated(f"子系统 {format_parties([s])} 的第 {t} 个部分内积为零")

    probe = bases[s].vectors[t]
    position = s if s < j else s - 1
    overlapping = [entry for entry in table_j.nonzero_entries
                   if abs(np.vdot(probe, entry.factors[position])) > overlap_tol]
    if len(overlapping) < 2:
        raise PreconditionViolated(
            f"与 u_{t}^{format_parties([s])} 重叠的残差只有 {len(overlapping)} 个, 至少需要 2 个"
        )

    first, second = overlapping[0], overlapping[1]
    ratio = 1.0 + 0j
    for k, (f1, f2) in enumerate(zip(first.factors, second.factors)):
        ck = np.vdot(f2, f1)
        if np.linalg.norm(f1 - ck * f2) > overlap_tol:
            raise NotProportional(
                f"残差 {first.basis_index} 与 {second.basis_index} 的第 {k} 个因子不成比例"
            )
        ratio *= ck

    a = first.weight * ratio
    b = second.weight
    u1 = bases[j].vectors[first.basis_index]
    u2 = bases[j].vectors[second.basis_index]
    merged = a * u1 + b * u2
    complement = b * u1 - np.conj(a) * u2

    vectors = np.array(bases[j].vectors)
    vectors[first.basis_index] = merged / np.linalg.norm(merged)
    vectors[second.basis_index] = complement / np.linalg.norm(complement)
    new_basis = BasisSet(bases[j].party_dim, vectors)

    new_table = build_partial_ip_table(x, new_basis, j, tol)
    if new_table.m != table_j.m - 1:
        raise ReductionCheckFailed(f"m_j 应从 {table_j.m} 降为 {table_j.m - 1}, 实际为 {new_table.m}")
    if not new_table.all_separable:
        raise ReductionCheckFailed("新基下存在不可分的非零残差")
    if not np.array_equal(x.amps, snapshot):
        raise ReductionCheckFailed("输入态被修改")

    logger.debug(
        f"基约化: 子系统 {format_parties([j])} 合并下标 ({first.basis_index}, {second.basis_index}), "
        f"m_j {table_j.m} -> {new_table.m}"
    )
    return new_basis


# ==================== 否定证书 ====================

def negative_certificate(
    x: State,
    tol: float = DEFAULT_TOL,
    contiguous: bool = False,
) -> Optional[Bipartition]:
    """
    部分可分但非完全可分的见证二分划

    存在时证明 x 没有 Schmidt 分解；None 表示无法给出结论

    Args:
        x: 非零态，至少三个子系统
        tol: 相对零阈值
        contiguous: 是否只考虑前缀划分

    Returns:
        见证二分划或 None
    """
    require_nonzero(x)
    if x.n_parties < 3:
        raise PreconditionViolated("否定证书需要至少三个子系统")

    separation = find_partial_separation(x, tol, contiguous)
    if separation is None:
        return None
    if is_completely_separable(x, tol).completely_separable:
        return None

    logger.debug(f"否定证书: {separation.split}")
    return separation.split
