"""共享测试夹具"""

import numpy as np
import pytest

from multischmidt.oracle import ghz_state, w_state
from multischmidt.tensor import BasisSet, make_state


def amps_with_ones(size, indices):
    amps = np.zeros(size, dtype=complex)
    amps[list(indices)] = 1.0
    return amps


@pytest.fixture
def ghz():
    return ghz_state(3)


@pytest.fixture
def w():
    return w_state(3)


@pytest.fixture
def plus_zero_zero():
    """(|0>+|1>) (x) |0> (x) |0>"""
    return make_state([2, 2, 2], amps_with_ones(8, [0b000, 0b100]))


@pytest.fixture
def biseparable():
    """|000> + |110>"""
    return make_state([2, 2, 2], amps_with_ones(8, [0b000, 0b110]))


@pytest.fixture
def computational():
    def build(x):
        return [BasisSet.computational(d) for d in x.dims]
    return build


@pytest.fixture
def code_space_state():
    """
    |0>c_0 + |1>c_1 + |2>|333>, dims [3, 4, 4, 4]

    c_k = sum_j |j, j+k, j+2k> (mod 3) 与 |333> 模长相同，三项系数全部相等；
    c_0, c_1 在每个单体算符下都无法区分
    """
    tensor = np.zeros((3, 4, 4, 4), dtype=complex)
    for j in range(3):
        tensor[0, j, j, j] = 1.0
        tensor[1, j, (j + 1) % 3, (j + 2) % 3] = 1.0
    tensor[2, 3, 3, 3] = np.sqrt(3)
    return make_state([3, 4, 4, 4], tensor.reshape(-1))
