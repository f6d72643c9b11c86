#!/usr/bin/env python3
"""
随机化自检脚本
用独立构造的随机态验证分解器、条件检查与否定证书的正确性
"""

import logging
import time
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from tqdm import tqdm

from .bipartite import first_party_split, schmidt_number
from .config import DEFAULT_TOL
from .multipartite import (
    ConditionMode,
    check_condition,
    is_completely_separable,
    multipartite_schmidt_decompose,
    negative_certificate,
)
from .oracle import (
    lambdas_match,
    local_unitaries,
    random_biseparable_state,
    random_schmidt_state,
    random_state,
    verify_decomposition,
)
from .tensor import apply_local_unitaries, product_state
from .utils import make_rng

DEFAULT_TRIALS = {
    "bipartite": 200,
    "positive": 200,
    "negative": 200,
    "separability": 500,
    "invariance": 100,
}


class SelfTester:
    """分解器随机化测试类"""

    def __init__(self, trials: Optional[int] = None, seed: int = 2024, tol: float = DEFAULT_TOL,
                 progress: bool = True):
        self.logger = logging.getLogger(__name__)
        self.trials = trials
        self.seed = seed
        self.tol = tol
        self.progress = progress
        self.failures: Dict[str, List[str]] = {}

    def _count(self, suite: str) -> int:
        return self.trials if self.trials is not None else DEFAULT_TRIALS[suite]

    def _trials(self, suite: str, description: str):
        return tqdm(range(self._count(suite)), desc=description, disable=not self.progress, leave=False)

    def _fail(self, suite: str, message: str) -> None:
        self.failures.setdefault(suite, []).append(message)
        self.logger.debug(f"{suite}: {message}")

    def _seeds(self, suite: str) -> np.random.Generator:
        offsets = {name: i for i, name in enumerate(DEFAULT_TRIALS)}
        return make_rng(self.seed + 1000 * offsets[suite])

    def test_bipartite_universality(self) -> bool:
        """任意二体态都有分解且重构误差不超过 1e-10"""
        self.logger.info("=== 二体普适性测试 ===")
        rng = self._seeds("bipartite")
        for trial in self._trials("bipartite", "bipartite"):
            dims = [int(d) for d in rng.integers(1, 7, size=2)]
            x = random_state(dims, rng)
            decomposition = multipartite_schmidt_decompose(x, self.tol)
            if decomposition is None:
                self._fail("bipartite", f"trial {trial}: dims={dims} 无分解")
                continue
            error = np.linalg.norm(decomposition.reconstruct().amps - x.amps)
            if error > 1e-10:
                self._fail("bipartite", f"trial {trial}: 重构误差 {error:.2e}")
        return "bipartite" not in self.failures

    def _random_lambdas(self, rng: np.random.Generator, m: int, trial: int) -> np.ndarray:
        """每四次取一次全简并，每四次取一次部分简并"""
        lambdas = rng.uniform(0.1, 1.0, size=m)
        if trial % 4 == 0:
            lambdas[:] = 1.0
        elif trial % 4 == 1 and m >= 2:
            lambdas[1] = lambdas[0]
        return lambdas

    def test_positive_direction(self) -> bool:
        """已知分解的随机态都能被恢复"""
        self.logger.info("=== 可分解态恢复测试 ===")
        rng = self._seeds("positive")
        for trial in self._trials("positive", "positive"):
            n = int(rng.integers(3, 6))
            dims = [int(d) for d in rng.integers(2, 5, size=n)]
            m = int(rng.integers(1, min(dims) + 1))
            lambdas = self._random_lambdas(rng, m, trial)
            x, truth = random_schmidt_state(dims, lambdas, rng)

            decomposition = multipartite_schmidt_decompose(x, self.tol)
            if decomposition is None:
                self._fail("positive", f"trial {trial}: dims={dims} lambdas={lambdas} 分解失败")
                continue
            if not lambdas_match(decomposition.coefficients, truth.coefficients):
                self._fail("positive", f"trial {trial}: 系数不一致")
            if not verify_decomposition(x, decomposition):
                self._fail("positive", f"trial {trial}: 分解校验失败")
            report = check_condition(x, decomposition.extended_bases(), ConditionMode.ALL_PARTIES, self.tol)
            if not report.satisfied:
                self._fail("positive", f"trial {trial}: 恢复的基不满足条件")
        return "positive" not in self.failures

    def test_negative_direction(self) -> bool:
        """部分可分的纠缠态总有否定证书且分解器返回不存在"""
        self.logger.info("=== 否定证书测试 ===")
        rng = self._seeds("negative")
        for trial in self._trials("negative", "negative"):
            n = int(rng.integers(3, 5))
            dims = [int(d) for d in rng.integers(2, 4, size=n)]
            x, single = random_biseparable_state(dims, rng)
            if negative_certificate(x, self.tol) is None:
                self._fail("negative", f"trial {trial}: dims={dims} 没有否定证书")
            if multipartite_schmidt_decompose(x, self.tol) is not None:
                self._fail("negative", f"trial {trial}: dims={dims} 错误地给出了分解")
        return "negative" not in self.failures

    def test_separability_equivalence(self) -> bool:
        """二体态 Schmidt 数为 1 当且仅当完全可分"""
        self.logger.info("=== 可分性等价测试 ===")
        rng = self._seeds("separability")
        for trial in self._trials("separability", "separability"):
            dims = [int(d) for d in rng.integers(1, 6, size=2)]
            if trial % 2 == 0:
                x = product_state([random_state([d], rng).amps for d in dims])
            else:
                x = random_state(dims, rng)
            rank_one = schmidt_number(x, first_party_split(2), self.tol) == 1
            separable = is_completely_separable(x, self.tol).completely_separable
            if rank_one != separable:
                self._fail("separability", f"trial {trial}: dims={dims} 判定不一致")
        return "separability" not in self.failures

    def test_invariance(self) -> bool:
        """结论与系数在整体缩放和局域酉变换下不变"""
        self.logger.info("=== 不变性测试 ===")
        rng = self._seeds("invariance")
        for trial in self._trials("invariance", "invariance"):
            dims = [int(d) for d in rng.integers(2, 4, size=3)]
            if trial % 2 == 0:
                m = int(rng.integers(1, min(dims) + 1))
                x, _ = random_schmidt_state(dims, rng.uniform(0.1, 1.0, size=m), rng)
            else:
                x = random_state(dims, rng)

            scale = complex(rng.uniform(0.1, 3.0) * np.exp(1j * rng.uniform(0, 2 * np.pi)))
            variants: List[Tuple[str, object, float]] = [
                ("scaling", x.scaled(scale), abs(scale)),
                ("local unitaries", apply_local_unitaries(x, local_unitaries(dims, rng)), 1.0),
            ]
            base = multipartite_schmidt_decompose(x, self.tol)
            for name, variant, factor in variants:
                other = multipartite_schmidt_decompose(variant, self.tol)
                if (base is None) != (other is None):
                    self._fail("invariance", f"trial {trial}: {name} 改变了结论")
                elif base is not None and not lambdas_match(other.coefficients, base.coefficients * factor):
                    self._fail("invariance", f"trial {trial}: {name} 改变了系数")
        return "invariance" not in self.failures

    def run_all_tests(self) -> Dict[str, bool]:
        """运行所有测试"""
        self.logger.info("开始随机化自检...")

        tests: List[Tuple[str, Callable[[], bool]]] = [
            ("二体普适性", self.test_bipartite_universality),
            ("可分解态恢复", self.test_positive_direction),
            ("否定证书", self.test_negative_direction),
            ("可分性等价", self.test_separability_equivalence),
            ("不变性", self.test_invariance),
        ]

        results = {}
        passed = 0
        total = len(tests)

        for test_name, test_func in tests:
            start = time.perf_counter()
            try:
                result = test_func()
            except Exception as e:
                result = False
                self.logger.error(f"❌ {test_name} - 异常: {e}")
            results[test_name] = result
            elapsed = time.perf_counter() - start
            if result:
                passed += 1
                self.logger.info(f"✅ {test_name} - 通过 ({elapsed:.2f}s)")
            else:
                self.logger.error(f"❌ {test_name} - 失败 ({elapsed:.2f}s)")

        self.logger.info("=== 测试总结 ===")
        self.logger.info(f"总测试数: {total}")
        self.logger.info(f"通过测试: {passed}")
        self.logger.info(f"失败测试: {total - passed}")
        self.logger.info(f"成功率: {passed / total * 100:.1f}%")

        return results

    def generate_report(self, results: Dict[str, bool], report_file: str) -> None:
        """生成测试报告"""
        with open(report_file, 'w', encoding='utf-8') as f:
            f.write("多体 Schmidt 分解自检报告\n")
            f.write("=" * 50 + "\n\n")
            f.write(f"测试时间: {time.strftime('%Y-%m-%d %H:%M:%S')}\n")
            f.write(f"随机种子: {self.seed}\n\n")

            f.write("测试结果:\n")
            for test_name, result in results.items():
                status = "✅ 通过" if result else "❌ 失败"
                f.write(f"  {test_name}: {status}\n")

            f.write(f"\n总体结果: {sum(results.values())}/{len(results)} 通过\n")

            for suite, messages in self.failures.items():
                f.write(f"\n{suite} 失败明细:\n")
                for message in messages:
                    f.write(f"  - {message}\n")

        self.logger.info(f"测试报告已保存到: {report_file}")
