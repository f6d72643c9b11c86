"""张量核心测试"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis.strategies import integers
from numpy.testing import assert_allclose

from multischmidt.exceptions import DimensionMismatch, EmptyDims, IndexOutOfRange, NotOrthonormal, ZeroState
from multischmidt.oracle import local_unitaries, random_state, random_unitary
from multischmidt.tensor import (
    BasisSet,
    apply_local_unitaries,
    basis_state,
    gram_schmidt_extend,
    inner_product,
    make_state,
    partial_inner_product,
    product_state,
    require_nonzero,
    tensor_product,
)
from multischmidt.utils import make_rng

KET0 = np.array([1, 0], dtype=complex)
KET1 = np.array([0, 1], dtype=complex)


def test_make_state_keeps_amplitudes_unnormalized():
    x = make_state([2, 2, 2], [1, 0, 0, 0, 0, 0, 1, 0])
    assert x.dims == (2, 2, 2)
    assert x.n_parties == 3
    assert x.norm() == pytest.approx(np.sqrt(2))
    assert x.tensor[1, 1, 0] == 1


def test_make_state_rejects_bad_input():
    with pytest.raises(EmptyDims):
        make_state([], [])
    with pytest.raises(DimensionMismatch):
        make_state([2, 2], [1, 0, 0])
    with pytest.raises(DimensionMismatch):
        make_state([0, 2], [])


def test_state_amplitudes_are_read_only():
    x = make_state([2], [1, 0])
    with pytest.raises(ValueError):
        x.amps[0] = 5


def test_basis_state_last_party_fastest():
    x = basis_state([2, 2, 2], [1, 1, 0])
    assert np.flatnonzero(x.amps).tolist() == [6]


def test_inner_product_examples():
    psi_00 = product_state([KET0, KET0])
    psi_10 = product_state([KET1, KET0])
    assert inner_product(psi_00, psi_00) == pytest.approx(1)
    assert inner_product(psi_00, psi_10) == pytest.approx(0)
    with pytest.raises(DimensionMismatch):
        inner_product(psi_00, make_state([4], [1, 0, 0, 0]))


def test_inner_product_is_conjugate_linear_in_first_argument():
    x = make_state([2], [1j, 0])
    y = make_state([2], [1, 0])
    assert inner_product(x, y) == pytest.approx(-1j)


def test_partial_inner_product_examples(plus_zero_zero, biseparable):
    assert_allclose(partial_inner_product(KET0, 0, plus_zero_zero).amps, product_state([KET0, KET0]).amps)
    residual = partial_inner_product(KET1, 0, biseparable)
    assert residual.dims == (2, 2)
    assert_allclose(residual.amps, product_state([KET1, KET0]).amps)


def test_partial_inner_product_on_middle_party(biseparable):
    residual = partial_inner_product(KET0, 2, biseparable)
    assert_allclose(residual.amps, [1, 0, 0, 1])


def test_partial_inner_product_errors(biseparable):
    with pytest.raises(IndexOutOfRange):
        partial_inner_product(KET0, 3, biseparable)
    with pytest.raises(DimensionMismatch):
        partial_inner_product([1, 0, 0], 0, biseparable)
    with pytest.raises(DimensionMismatch):
        partial_inner_product(KET0, 0, make_state([2], [1, 0]))


def test_basis_set_validation():
    BasisSet(2, np.array([[1, 1], [1, -1]]) / np.sqrt(2))
    with pytest.raises(NotOrthonormal):
        BasisSet(2, [[1, 0], [1, 1]])
    with pytest.raises(DimensionMismatch):
        BasisSet(3, np.eye(2))


def test_gram_schmidt_extend_completes_basis():
    plus = np.array([1, 1]) / np.sqrt(2)
    basis = gram_schmidt_extend([plus], 2)
    assert_allclose(basis[0], plus)
    assert abs(np.vdot(basis[0], basis[1])) < 1e-12
    assert len(basis) == 2


def test_gram_schmidt_extend_from_empty():
    basis = gram_schmidt_extend([], 3)
    assert_allclose(basis.vectors, np.eye(3), atol=1e-12)


def test_gram_schmidt_extend_rejects_non_orthonormal():
    with pytest.raises(NotOrthonormal):
        gram_schmidt_extend([[1, 0], [1, 1]], 2)


def test_tensor_product_builds_counterexample_state(plus_zero_zero):
    plus = make_state([2], [1, 1])
    zero = make_state([2], [1, 0])
    assert_allclose(tensor_product([plus, zero, zero]).amps, plus_zero_zero.amps)
    with pytest.raises(EmptyDims):
        tensor_product([])


def test_local_unitaries_preserve_norm_and_inner_products():
    x = random_state([2, 3, 2], 5)
    y = random_state([2, 3, 2], 6)
    unitaries = local_unitaries(x.dims, 9)
    ux, uy = apply_local_unitaries(x, unitaries), apply_local_unitaries(y, unitaries)
    assert ux.norm() == pytest.approx(x.norm())
    assert inner_product(ux, uy) == pytest.approx(inner_product(x, y))


def test_require_nonzero():
    with pytest.raises(ZeroState):
        require_nonzero(make_state([2, 2], [0, 0, 0, 0]))


@settings(max_examples=25, deadline=None)
@given(integers(min_value=0, max_value=10 ** 6), integers(min_value=0, max_value=2))
def test_partial_inner_products_over_a_basis_preserve_norm(seed, k):
    x = random_state([2, 3, 2], seed)
    basis = random_unitary(x.dims[k], seed + 1).T
    total = sum(partial_inner_product(u, k, x).norm() ** 2 for u in basis)
    assert total == pytest.approx(x.norm() ** 2, rel=1e-12)


@settings(max_examples=25, deadline=None)
@given(integers(min_value=0, max_value=10 ** 6))
def test_partial_inner_product_linearity(seed):
    rng = make_rng(seed)
    x, y = random_state([3, 2, 2], rng), random_state([3, 2, 2], rng)
    v, w = random_state([2], rng).amps, random_state([2], rng).amps
    alpha, beta = complex(*rng.standard_normal(2)), complex(*rng.standard_normal(2))

    combined = make_state(x.dims, alpha * x.amps + beta * y.amps)
    expected = alpha * partial_inner_product(v, 1, x).amps + beta * partial_inner_product(v, 1, y).amps
    assert_allclose(partial_inner_product(v, 1, combined).amps, expected, atol=1e-12)

    mixed = alpha * v + beta * w
    expected = (np.conj(alpha) * partial_inner_product(v, 1, x).amps
                + np.conj(beta) * partial_inner_product(w, 1, x).amps)
    assert_allclose(partial_inner_product(mixed, 1, x).amps, expected, atol=1e-12)


@settings(max_examples=25, deadline=None)
@given(integers(min_value=0, max_value=10 ** 6))
def test_inner_product_conjugate_symmetry(seed):
    rng = make_rng(seed)
    x, y = random_state([2, 3], rng), random_state([2, 3], rng)
    assert inner_product(x, y) == pytest.approx(np.conj(inner_product(y, x)), abs=1e-12)
    assert inner_product(x, x).real == pytest.approx(x.norm() ** 2)
    assert abs(inner_product(x, x).imag) <= 1e-12
