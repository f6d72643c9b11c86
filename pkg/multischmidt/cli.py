#!/usr/bin/env python3
"""
多体 Schmidt 分解命令行工具
"""

import argparse
import json
import logging
import sys
from enum import IntEnum
from typing import Dict, List, Optional

from pydantic import ValidationError

from . import __version__
from .bipartite import Bipartition, bipartite_schmidt
from .config import Settings, load_settings
from .counterexamples import run_counterexamples
from .exceptions import MultiSchmidtError, NumericalAmbiguity, SvdFailure
from .fileio import read_basis_file, read_state_file, write_state_file, write_truth_sidecar
from .models import Certificate, CertificateKind, DecomposeReport, Verdict, to_pairs
from .multipartite import (
    ConditionMode,
    DecompositionOutcome,
    FailureKind,
    check_condition,
    diagnose_decomposition,
    negative_certificate,
)
from .oracle import random_schmidt_state, spectral_necessary_check
from .tensor import BasisSet, State
from .tester import SelfTester
from .utils import format_vector, parse_float_list, parse_int_list, party_label, setup_logging

logger = logging.getLogger(__name__)

PATI_WARNING = "Pati condition is NOT sufficient (see paper-examples)"


class ExitCode(IntEnum):
    """退出码约定"""
    OK = 0
    NOT_DECOMPOSABLE = 1
    INPUT_ERROR = 2
    NUMERICAL_AMBIGUITY = 3


# ==================== 输出辅助 ====================

def _emit_json(payload: Dict) -> None:
    print(json.dumps(payload, indent=2))


def _format_lambdas(values) -> str:
    return ", ".join(f"{float(v):.10f}" for v in values)


def _tolerance(args: argparse.Namespace, settings: Settings) -> float:
    return args.tol if args.tol is not None else settings.TOLERANCE


def _decompose_options(settings: Settings) -> Dict:
    return {
        "verify_tol": settings.VERIFY_TOLERANCE,
        "ortho_tol": settings.ORTHO_TOLERANCE,
        "gap": settings.CLUSTER_GAP,
        "offdiag_tol": settings.OFFDIAG_TOLERANCE,
        "eigen_gap": settings.EIGEN_GAP,
        "seeds": tuple(settings.PROBE_SEEDS),
    }


def explain_absence(x: State, outcome: DecompositionOutcome, tol: float, settings: Settings) -> Certificate:
    """
    为不存在的分解挑选最强的证据

    依次尝试部分可分性见证、单体谱不一致、残差不可分、向量不正交，最后归为算法性结论
    """
    if x.n_parties >= 3:
        split = negative_certificate(x, tol, settings.contiguous_splits)
        if split is not None:
            return Certificate(
                kind=CertificateKind.PARTIAL_SEPARABILITY,
                message=f"partially separable {split}, not completely separable",
                split=str(split),
            )
    if not spectral_necessary_check(x):
        return Certificate(kind=CertificateKind.SPECTRAL, message="single-party marginal spectra differ")
    if outcome.kind == FailureKind.RESIDUAL:
        return Certificate(kind=CertificateKind.RESIDUAL, message=outcome.message)
    if outcome.kind == FailureKind.NOT_ORTHONORMAL:
        return Certificate(kind=CertificateKind.NOT_ORTHONORMAL, message=outcome.message)
    return Certificate(kind=CertificateKind.ALGORITHMIC, message=outcome.message or "decomposer found no decomposition")


# ==================== 子命令 ====================

def cmd_decompose(args: argparse.Namespace, settings: Settings) -> ExitCode:
    """构造 Schmidt 分解或给出不存在的证据"""
    x, name = read_state_file(args.path)
    tol = _tolerance(args, settings)
    outcome = diagnose_decomposition(x, tol, **_decompose_options(settings))
    labels = [party_label(j) for j in range(x.n_parties)]

    if outcome.decomposable:
        decomposition = outcome.decomposition
        m_j: Dict[str, int] = {}
        if x.n_parties >= 2:
            report = check_condition(x, decomposition.extended_bases(), ConditionMode.ALL_PARTIES, tol,
                                     settings.MAX_WORKERS)
            m_j = {labels[j]: m for j, m in report.m_j.items()}
        result = DecomposeReport(
            verdict=Verdict.DECOMPOSABLE,
            lambdas=[float(c) for c in decomposition.coefficients],
            vectors={labels[j]: [to_pairs(v) for v in vectors]
                     for j, vectors in enumerate(decomposition.party_vectors)},
            m_j=m_j,
        )
    else:
        result = DecomposeReport(
            verdict=Verdict.NOT_DECOMPOSABLE,
            certificate=explain_absence(x, outcome, tol, settings),
        )
    logger.info(f"{name or args.path}: {result.verdict.value}")

    if args.json:
        _emit_json(result.model_dump(mode="json"))
    else:
        print(f"state: {name or args.path}  dims={list(x.dims)}  norm={x.norm():.10f}")
        if outcome.decomposable:
            decomposition = outcome.decomposition
            print(f"DECOMPOSABLE  m={decomposition.m}")
            print(f"lambda: {_format_lambdas(decomposition.coefficients)}")
            for i, coefficient in enumerate(decomposition.coefficients):
                print(f"  term {i}: lambda={coefficient:.10f}")
                for j, vectors in enumerate(decomposition.party_vectors):
                    print(f"    {labels[j]}: {format_vector(vectors[i])}")
        else:
            print("NOT DECOMPOSABLE")
            print(f"certificate [{result.certificate.kind.value}]: {result.certificate.message}")

    return ExitCode.OK if outcome.decomposable else ExitCode.NOT_DECOMPOSABLE


def cmd_rank(args: argparse.Namespace, settings: Settings) -> ExitCode:
    """二分划下的 Schmidt 数"""
    x, _ = read_state_file(args.path)
    split = Bipartition.parse(args.split, x.n_parties)
    schmidt = bipartite_schmidt(x, split, _tolerance(args, settings), settings.CLUSTER_GAP)

    if args.json:
        _emit_json({
            "split": str(split),
            "rank": schmidt.rank,
            "lambdas": [float(c) for c in schmidt.coefficients],
        })
    else:
        print(f"Schmidt number across {split}: {schmidt.rank}")
        print(f"lambda: {_format_lambdas(schmidt.coefficients)}")
    return ExitCode.OK


def cmd_check(args: argparse.Namespace, settings: Settings) -> ExitCode:
    """检查给定基下的充要条件"""
    x, _ = read_state_file(args.path)
    if args.basis == "computational":
        bases = [BasisSet.computational(d) for d in x.dims]
    else:
        bases = read_basis_file(args.basis, x.dims)

    mode = ConditionMode(args.mode)
    report = check_condition(x, bases, mode, _tolerance(args, settings), settings.MAX_WORKERS)
    warning = PATI_WARNING if mode == ConditionMode.SMALLEST_PARTY else None
    if warning:
        logger.warning(warning)

    failing = None
    if report.failing_party is not None:
        failing = {
            "party": party_label(report.failing_party),
            "index": report.failing_index,
            "residual": to_pairs(report.failing_residual.amps),
        }

    if args.json:
        _emit_json({
            "mode": mode.value,
            "satisfied": report.satisfied,
            "m_j": {party_label(j): m for j, m in report.m_j.items()},
            "failing": failing,
            "warning": warning,
        })
    else:
        print(f"mode: {mode.value}")
        for j, table in report.tables.items():
            states = ", ".join(
                f"{entry.basis_index}:{'zero' if not entry.nonzero else 'product' if entry.separable else 'entangled'}"
                for entry in table.entries
            )
            print(f"  party {party_label(j)}: m_j={table.m}  [{states}]")
        print(f"satisfied: {str(report.satisfied).lower()}")
        if failing:
            residual = report.failing_residual
            print(f"failing party {failing['party']}, basis vector {failing['index']}: "
                  f"residual {format_vector(residual.amps)} is not completely separable")
        if warning:
            print(f"WARNING: {warning}")

    return ExitCode.OK if report.satisfied else ExitCode.NOT_DECOMPOSABLE


def cmd_paper_examples(args: argparse.Namespace, settings: Settings) -> ExitCode:
    """重放三个反例"""
    results = run_counterexamples()
    passed = sum(result.passed for result in results)

    if args.json:
        _emit_json({
            "results": [{"key": r.key, "passed": r.passed, "value": r.value, "detail": r.detail} for r in results],
            "passed": passed,
            "total": len(results),
        })
    else:
        for result in results:
            print(f"{result.key} {'PASS' if result.passed else 'FAIL'}: {result.title} ({result.detail})")
        print(f"{passed}/{len(results)} PASS")

    return ExitCode.OK if passed == len(results) else ExitCode.NOT_DECOMPOSABLE


def cmd_random(args: argparse.Namespace, settings: Settings) -> ExitCode:
    """生成已知分解的随机态文件"""
    dims = parse_int_list(args.dims)
    lambdas = parse_float_list(args.lambdas)

    x, truth = random_schmidt_state(dims, lambdas, args.seed)
    write_state_file(args.out, x, name=f"random-schmidt-seed{args.seed}")
    sidecar = write_truth_sidecar(args.out, truth, args.seed)

    if args.json:
        _emit_json({"state": args.out, "truth": sidecar, "lambdas": [float(c) for c in truth.coefficients]})
    else:
        print(f"state written to {args.out}")
        print(f"ground truth written to {sidecar}")
        print(f"lambda: {_format_lambdas(truth.coefficients)}")
    return ExitCode.OK


def cmd_selftest(args: argparse.Namespace, settings: Settings) -> ExitCode:
    """随机化自检"""
    tester = SelfTester(trials=args.trials, seed=args.seed, tol=_tolerance(args, settings),
                        progress=not args.json)
    results = tester.run_all_tests()
    if args.report:
        tester.generate_report(results, args.report)

    if args.json:
        _emit_json({"results": results, "failures": tester.failures})
    else:
        for test_name, result in results.items():
            print(f"{test_name}: {'PASS' if result else 'FAIL'}")
        print(f"{sum(results.values())}/{len(results)} PASS")
    return ExitCode.OK if all(results.values()) else ExitCode.NOT_DECOMPOSABLE


COMMANDS = {
    "decompose": cmd_decompose,
    "rank": cmd_rank,
    "check": cmd_check,
    "paper-examples": cmd_paper_examples,
    "random": cmd_random,
    "selftest": cmd_selftest,
}


# ==================== 参数解析 ====================

def _common_options(suppress: bool) -> argparse.ArgumentParser:
    """全局选项；子命令上重复声明，未给出时不覆盖全局值"""
    parser = argparse.ArgumentParser(add_help=False)
    default = (lambda value: argparse.SUPPRESS) if suppress else (lambda value: value)
    parser.add_argument("--tol", type=float, default=default(None), help="相对零阈值 (默认 1e-9)")
    parser.add_argument("--json", action="store_true", default=default(False), help="输出 JSON")
    parser.add_argument("--config", default=default(None), help="YAML 配置文件路径")
    parser.add_argument("--log-level", default=default(None), help="日志级别")
    return parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="multischmidt",
        description="多体纯态的 Schmidt 分解判定、构造与否定证书",
        parents=[_common_options(suppress=False)],
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    common = [_common_options(suppress=True)]

    decompose = subparsers.add_parser("decompose", parents=common, help="构造 Schmidt 分解")
    decompose.add_argument("path", help="状态文件")

    rank = subparsers.add_parser("rank", parents=common, help="二分划下的 Schmidt 数")
    rank.add_argument("path", help="状态文件")
    rank.add_argument("--split", default="0", help="二分划，例如 0|1,2 (默认 0)")

    check = subparsers.add_parser("check", parents=common, help="检查给定基下的条件")
    check.add_argument("path", help="状态文件")
    check.add_argument("--mode", choices=[m.value for m in ConditionMode], default="all", help="检查模式")
    check.add_argument("--basis", default="computational", help="computational 或基文件路径")

    subparsers.add_parser("paper-examples", parents=common, help="重放三个反例")

    generate = subparsers.add_parser("random", parents=common, help="生成已知分解的随机态")
    generate.add_argument("--dims", required=True, help="逗号分隔的维度，例如 2,2,2")
    generate.add_argument("--lambdas", required=True, help="逗号分隔的系数，例如 0.8,0.6")
    generate.add_argument("--seed", type=int, default=0, help="随机种子")
    generate.add_argument("--out", required=True, help="输出状态文件路径")

    selftest = subparsers.add_parser("selftest", parents=common, help="随机化自检")
    selftest.add_argument("--trials", type=int, default=None, help="每组测试的次数")
    selftest.add_argument("--seed", type=int, default=2024, help="随机种子")
    selftest.add_argument("--report", default=None, help="测试报告路径")

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """主函数"""
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        settings = load_settings(args.config)
    except (OSError, ValueError, ValidationError) as e:
        setup_logging("ERROR")
        logger.error(f"配置无效: {e}")
        return ExitCode.INPUT_ERROR

    setup_logging(args.log_level or settings.LOG_LEVEL, settings.LOG_FILE, colored=sys.stderr.isatty())

    try:
        return int(COMMANDS[args.command](args, settings))
    except (NumericalAmbiguity, SvdFailure) as e:
        logger.error(f"数值不确定: {e}")
        return ExitCode.NUMERICAL_AMBIGUITY
    except (MultiSchmidtError, ValueError) as e:
        logger.error(f"输入错误: {e}")
        return ExitCode.INPUT_ERROR
    except KeyboardInterrupt:
        logger.error("操作被用户中断")
        return ExitCode.INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
