"""
三体反例重放
逐条验证原始充分条件的证明漏洞与结论反例
"""

import logging
from dataclasses import dataclass
from typing import Callable, List

import numpy as np

from .multipartite import (
    ConditionMode,
    build_partial_ip_table,
    check_condition,
    multipartite_schmidt_decompose,
    negative_certificate,
)
from .tensor import BasisSet, State, inner_product, make_state

logger = logging.getLogger(__name__)

EXACT_TOL = 1e-12


@dataclass
class CheckResult:
    """单条反例断言的结果"""
    key: str
    title: str
    passed: bool
    value: float
    detail: str


def error_one_state() -> State:
    """(|0>+|1>) (x) |0> (x) |0>"""
    amps = np.zeros(8, dtype=complex)
    amps[0b000] = amps[0b100] = 1.0
    return make_state([2, 2, 2], amps)


def error_two_state() -> State:
    """|000> + |110>"""
    amps = np.zeros(8, dtype=complex)
    amps[0b000] = amps[0b110] = 1.0
    return make_state([2, 2, 2], amps)


def computational_bases(x: State) -> List[BasisSet]:
    return [BasisSet.computational(d) for d in x.dims]


def check_residuals_not_orthogonal() -> CheckResult:
    """
    计算基下 A 的两个部分内积都是乘积态，但彼此重叠为 1 而非 0
    """
    x = error_one_state()
    table = build_partial_ip_table(x, BasisSet.computational(2), 0)
    psi_0, psi_1 = table.entries[0].residual, table.entries[1].residual
    overlap = inner_product(psi_0, psi_1)

    passed = table.all_separable and abs(overlap - 1.0) <= EXACT_TOL
    return CheckResult(
        key="E1",
        title="partial inner products of a product basis need not be orthogonal",
        passed=passed,
        value=float(abs(overlap)),
        detail=f"<psi_0|psi_1> = {overlap.real:.12f}, expected 0 by the flawed argument",
    )


def check_trace_equality_fails() -> CheckResult:
    """
    部分内积彼此正交且可分，但 C 上因子的重叠为 1，而 q_0 * delta_01 = 0
    """
    x = error_two_state()
    table = build_partial_ip_table(x, BasisSet.computational(2), 0)
    psi_0, psi_1 = table.entries[0], table.entries[1]
    residual_overlap = inner_product(psi_0.residual, psi_1.residual)
    gamma_overlap = complex(np.vdot(psi_0.factors[-1], psi_1.factors[-1]))
    required = 0.0

    passed = (
        table.all_separable
        and abs(residual_overlap) <= EXACT_TOL
        and abs(gamma_overlap - 1.0) <= EXACT_TOL
        and abs(gamma_overlap - required) > EXACT_TOL
    )
    return CheckResult(
        key="E2",
        title="orthogonal product residuals do not give orthogonal factors",
        passed=passed,
        value=float(abs(gamma_overlap)),
        detail=f"<gamma_0|gamma_1> = {gamma_overlap.real:.12f} != q_0 * delta_01 = {required:.0f}",
    )


def check_pati_condition_insufficient() -> CheckResult:
    """
    |000> + |110> 满足只检查最小子系统的条件，但不存在 Schmidt 分解
    """
    x = error_two_state()
    report = check_condition(x, computational_bases(x), ConditionMode.SMALLEST_PARTY)
    decomposition = multipartite_schmidt_decompose(x)
    split = negative_certificate(x)

    passed = report.satisfied and decomposition is None and split is not None
    return CheckResult(
        key="E3",
        title="smallest-party condition is satisfied yet no decomposition exists",
        passed=passed,
        value=float(report.satisfied),
        detail=(f"pati satisfied={report.satisfied}, decomposition "
                f"{'absent' if decomposition is None else 'found'}, certificate {split}"),
    )


CHECKS: List[Callable[[], CheckResult]] = [
    check_residuals_not_orthogonal,
    check_trace_equality_fails,
    check_pati_condition_insufficient,
]


def run_counterexamples() -> List[CheckResult]:
    """依次运行全部反例断言"""
    results = []
    for check in CHECKS:
        result = check()
        level = logging.INFO if result.passed else logging.ERROR
        logger.log(level, f"{result.key} {'PASS' if result.passed else 'FAIL'}: {result.detail}")
        results.append(result)
    return results
