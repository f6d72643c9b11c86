"""校验工具与随机生成器测试"""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from multischmidt.bipartite import Bipartition, bipartite_schmidt, enumerate_bipartitions
from multischmidt.exceptions import DimensionMismatch, TooManyTerms, ZeroState
from multischmidt.multipartite import SchmidtDecomposition, find_partial_separation, is_completely_separable
from multischmidt.oracle import (
    lambdas_match,
    partial_trace,
    random_biseparable_state,
    random_schmidt_state,
    random_state,
    random_unitary,
    spectral_necessary_check,
    verify_decomposition,
)
from multischmidt.tensor import make_state, product_state


def test_partial_trace_examples(biseparable, ghz):
    rho = partial_trace(biseparable.normalized(), 0)
    assert_allclose(rho.entries, np.diag([0.5, 0.5]), atol=1e-12)
    assert_allclose(partial_trace(ghz, 1).entries, np.diag([0.5, 0.5]), atol=1e-12)


def test_partial_trace_of_product_state_is_projector():
    factor = np.array([0.6, 0.8j])
    x = product_state([[1, 0], factor, [0, 1, 0]])
    rho = partial_trace(x, 1)
    assert_allclose(rho.entries, np.outer(factor, factor.conj()), atol=1e-12)


def test_partial_trace_keeps_unnormalized_trace(biseparable):
    rho = partial_trace(biseparable, {0, 1})
    assert rho.dims == (2, 2)
    assert rho.trace() == pytest.approx(2)
    assert rho.normalized().trace() == pytest.approx(1)
    assert_allclose(rho.entries, rho.entries.conj().T, atol=1e-12)


def test_partial_trace_errors(ghz):
    with pytest.raises(DimensionMismatch):
        partial_trace(ghz, 5)
    with pytest.raises(ZeroState):
        partial_trace(make_state([2, 2], [0, 0, 0, 0]), 0)


def test_partial_trace_spectrum_matches_schmidt_coefficients():
    x = random_state([2, 3, 2], 8)
    for split in enumerate_bipartitions(3):
        eigenvalues = partial_trace(x, split.left).eigenvalues()
        coefficients = bipartite_schmidt(x, split).coefficients
        assert_allclose(eigenvalues[:len(coefficients)], coefficients ** 2, atol=1e-10)
        assert_allclose(eigenvalues[len(coefficients):], 0, atol=1e-10)


def test_spectral_necessary_check(ghz, w, biseparable):
    assert spectral_necessary_check(ghz)
    assert spectral_necessary_check(w)
    assert not spectral_necessary_check(biseparable)


def test_random_unitary_is_unitary_and_reproducible():
    u = random_unitary(4, 3)
    assert_allclose(u.conj().T @ u, np.eye(4), atol=1e-12)
    assert_allclose(random_unitary(4, 3), u)


def test_random_schmidt_state_ground_truth():
    x, truth = random_schmidt_state([2, 3, 4], [3, 4], seed=5)
    assert_allclose(truth.coefficients, [0.8, 0.6])
    assert x.norm() == pytest.approx(1)
    assert verify_decomposition(x, truth, 1e-12)
    assert spectral_necessary_check(x)


def test_random_schmidt_state_is_deterministic():
    first, _ = random_schmidt_state([2, 2, 2], [0.8, 0.6], seed=7)
    second, _ = random_schmidt_state([2, 2, 2], [0.8, 0.6], seed=7)
    assert np.array_equal(first.amps, second.amps)


def test_random_schmidt_state_single_term_is_product():
    x, _ = random_schmidt_state([3, 2, 2], [1.0], seed=1)
    assert is_completely_separable(x).completely_separable


def test_random_schmidt_state_errors():
    with pytest.raises(TooManyTerms):
        random_schmidt_state([2], [0.8, 0.6, 0.1], seed=0)
    with pytest.raises(DimensionMismatch):
        random_schmidt_state([2, 2], [1.0, -1.0], seed=0)


def test_verify_decomposition(ghz):
    eye = np.eye(2, dtype=complex)
    canonical = SchmidtDecomposition(np.array([1, 1]) / np.sqrt(2), [eye, eye, eye], (2, 2, 2))
    assert verify_decomposition(ghz, canonical)

    wrong = SchmidtDecomposition(np.array([1.0, 0.0]), [eye, eye, eye], (2, 2, 2))
    assert not verify_decomposition(ghz, wrong)

    with pytest.raises(DimensionMismatch):
        verify_decomposition(ghz, SchmidtDecomposition(np.array([1.0]), [eye[:1], eye[:1]], (2, 2)))


def test_random_biseparable_state_is_partially_separable():
    x, single = random_biseparable_state([2, 3, 2], seed=4)
    separation = find_partial_separation(x)
    assert separation is not None
    assert not is_completely_separable(x).completely_separable
    rest = [p for p in range(3) if p != single]
    assert find_partial_separation(x).split in (
        Bipartition.from_left(rest, 3), Bipartition.from_left([single], 3))


def test_lambdas_match_sorts_before_comparing():
    assert lambdas_match([0.6, 0.8], [0.8, 0.6])
    assert not lambdas_match([0.8], [0.8, 0.6])
    assert not lambdas_match([0.8, 0.5], [0.8, 0.6])
