"""
状态文件读写
JSON 或 YAML 格式，写出时使用 JSON 并保留浮点数的完整精度
"""

import json
import logging
import os
from typing import Any, Dict, List, Optional, Tuple

import yaml
from pydantic import ValidationError

from .exceptions import StateFileError
from .models import BasisFileModel, StateFileModel, TruthFileModel, to_pairs
from .multipartite import SchmidtDecomposition
from .tensor import BasisSet, State

logger = logging.getLogger(__name__)


def _load_document(path: str) -> Dict[str, Any]:
    """读取 JSON/YAML 文档"""
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise StateFileError(f"无法读取文件 {path}: {e}")

    try:
        if path.endswith(".json"):
            data = json.loads(text)
        else:
            data = yaml.safe_load(text)
    except (json.JSONDecodeError, yaml.YAMLError) as e:
        raise StateFileError(f"文件 {path} 解析失败: {e}")

    if not isinstance(data, dict):
        raise StateFileError(f"文件 {path} 顶层必须是映射")
    return data


def _write_json(path: str, payload: Dict[str, Any]) -> None:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(payload, f, indent=2)
        f.write("\n")


def read_state_file(path: str) -> Tuple[State, Optional[str]]:
    """
    读取状态文件

    Returns:
        (态, 名称)
    """
    data = _load_document(path)
    try:
        model = StateFileModel.model_validate(data)
        state = model.to_state()
    except (ValidationError, ValueError) as e:
        raise StateFileError(f"状态文件 {path} 无效: {e}")

    logger.debug(f"已读取状态文件 {path}: dims={state.dims}")
    return state, model.name


def write_state_file(path: str, state: State, name: Optional[str] = None) -> None:
    """写出状态文件，读回后振幅逐位一致"""
    model = StateFileModel.from_state(state, name)
    _write_json(path, model.model_dump(exclude_none=True))
    logger.debug(f"已写出状态文件 {path}")


def read_basis_file(path: str, dims: Tuple[int, ...]) -> List[BasisSet]:
    """
    读取基文件

    正交归一性不满足时抛出 NotOrthonormal，其余格式问题抛出 StateFileError
    """
    data = _load_document(path)
    try:
        model = BasisFileModel.model_validate(data)
    except ValidationError as e:
        raise StateFileError(f"基文件 {path} 无效: {e}")
    return model.to_bases(dims)


def truth_sidecar_path(path: str) -> str:
    return f"{path}.truth.json"


def write_truth_sidecar(path: str, truth: SchmidtDecomposition, seed: Optional[int] = None) -> str:
    """在状态文件旁写出真实分解，返回附属文件路径"""
    model = TruthFileModel(
        dims=list(truth.dims),
        lambdas=[float(c) for c in truth.coefficients],
        vectors=[[to_pairs(v) for v in vectors] for vectors in truth.party_vectors],
        seed=seed,
    )
    sidecar = truth_sidecar_path(path)
    _write_json(sidecar, model.model_dump())
    logger.debug(f"已写出真实分解 {sidecar}")
    return sidecar


def read_truth_sidecar(path: str) -> TruthFileModel:
    data = _load_document(path)
    try:
        return TruthFileModel.model_validate(data)
    except ValidationError as e:
        raise StateFileError(f"真实分解文件 {path} 无效: {e}")
