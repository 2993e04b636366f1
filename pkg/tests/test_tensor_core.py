import json
from math import sqrt

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose, assert_array_equal

from sepfaces import gallery as g
from sepfaces.errors import MalformedOperatorError
from sepfaces.tensor_core import (
    BipartiteOperator,
    ProductVector,
    Subspace,
    ToleranceConfig,
    canonical_phase,
    hermitian_rank,
    kernel_of,
    partial_conjugate,
    partial_transpose,
    range_of,
    realify,
    tensor,
)

from conftest import random_hermitian


def _ket(i, d):
    v = np.zeros(d, dtype=complex)
    v[i] = 1
    return v


def _pt_oracle(a, m, n):
    """Entry-by-entry partial transpose on the first factor."""
    out = np.zeros_like(a)
    for i in range(m):
        for j in range(n):
            for k in range(m):
                for l in range(n):
                    out[i * n + j, k * n + l] = a[k * n + j, i * n + l]
    return out


# -- tensor ------------------------------------------------------------------

def test_tensor_basis_vectors():
    assert_array_equal(tensor([1, 0, 0], [1, 0, 0]), _ket(0, 9))
    assert_array_equal(tensor([0, 1], [0, 0, 1]), _ket(5, 6))


def test_tensor_index_convention(rng):
    x = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    y = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    z = tensor(x, y)
    for i in range(3):
        for j in range(4):
            assert abs(z[i * 4 + j] - x[i] * y[j]) < 1e-14


def test_tensor_first_kernel_vector():
    x = np.array([1, sqrt(2), 0]) / sqrt(3)
    y = np.array([1, -1 / sqrt(2), 0]) * sqrt(2 / 3)
    first = g.six_products_b(2.0)[0]
    assert ProductVector(x, y).matches(first)
    assert_allclose(np.abs(tensor(x, y)), np.abs(first.vector), atol=1e-12)


def test_tensor_bilinear(rng):
    x, x2 = rng.standard_normal((2, 3)) + 1j * rng.standard_normal((2, 3))
    y = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    alpha = 0.3 - 1.7j
    assert_allclose(tensor(alpha * x + x2, y), alpha * tensor(x, y) + tensor(x2, y), atol=1e-12)


# -- canonical phase and product vectors -------------------------------------

def test_canonical_phase_first_nonzero_real_positive():
    v = canonical_phase(np.array([0, 1e-9, -2j, 1]))
    assert v[2].imag == 0 and v[2].real > 0
    assert_allclose(np.linalg.norm(v), 1.0)


def test_canonical_phase_rejects_zero():
    with pytest.raises(ValueError):
        canonical_phase(np.zeros(3))


def test_product_vector_equal_up_to_phase(rng):
    x = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    y = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    p = ProductVector(x, y)
    q = ProductVector(np.exp(0.7j) * 2 * x, np.exp(-2.1j) * y / 5)
    assert p == q
    assert p != ProductVector(x, np.roll(y, 1))


def test_partial_conjugate_examples():
    p = ProductVector(np.array([1, 1j]) / sqrt(2), [1, 0])
    q = partial_conjugate(p)
    assert_allclose(q.x, np.array([1, -1j]) / sqrt(2))
    assert_allclose(q.y, [1, 0])
    real = ProductVector([1, 2, 0], [0, 1, -1])
    assert partial_conjugate(real) == real
    for p in g.six_products_b(2.0):
        assert partial_conjugate(p) == p


def test_partial_conjugate_involution(rng):
    for _ in range(20):
        p = ProductVector(rng.standard_normal(3) + 1j * rng.standard_normal(3),
                          rng.standard_normal(2) + 1j * rng.standard_normal(2))
        assert partial_conjugate(partial_conjugate(p)) == p


def test_product_vector_json_roundtrip(rng):
    p = ProductVector(rng.standard_normal(3) + 1j * rng.standard_normal(3), [0, 1j, 2])
    q = ProductVector.from_json(json.loads(json.dumps(p.to_json())))
    assert_allclose(q.x, p.x, rtol=1e-15)
    assert_allclose(q.y, p.y, rtol=1e-15)


# -- operators ---------------------------------------------------------------

def test_operator_rejects_non_hermitian():
    a = np.zeros((4, 4), dtype=complex)
    a[0, 1] = 1
    with pytest.raises(MalformedOperatorError):
        BipartiteOperator(a, 2, 2)


def test_operator_rejects_wrong_shape():
    with pytest.raises(MalformedOperatorError):
        BipartiteOperator(np.eye(5), 2, 2)


def test_operator_json_roundtrip(rng):
    a = BipartiteOperator(random_hermitian(rng, 6), 2, 3)
    b = BipartiteOperator.from_json(json.loads(json.dumps(a.to_json())))
    assert (b.m, b.n) == (2, 3)
    assert_allclose(b.matrix, a.matrix, rtol=1e-15)


def test_partial_transpose_identity():
    eye = BipartiteOperator(np.eye(9), 3, 3)
    assert_array_equal(partial_transpose(eye).matrix, np.eye(9))


def test_partial_transpose_swaps_blocks():
    e1f2, e2f1 = _ket(1, 9), _ket(3, 9)
    e2f2, e1f1 = _ket(4, 9), _ket(0, 9)
    a = np.outer(e1f2, e2f1)
    # not Hermitian on its own; symmetrize and compare the upper part
    op = BipartiteOperator(a + a.T, 3, 3)
    expected = np.outer(e2f2, e1f1)
    assert_array_equal(partial_transpose(op).matrix, expected + expected.T)


def test_partial_transpose_matches_entrywise_oracle(rng):
    for m, n in [(2, 2), (2, 3), (3, 3), (3, 4)]:
        a = random_hermitian(rng, m * n)
        got = partial_transpose(BipartiteOperator(a, m, n)).matrix
        assert_array_equal(got, _pt_oracle(a, m, n))


def test_partial_transpose_of_rho_theta_entry():
    theta = np.pi / 6
    rt = g.rho_theta(2.0, theta)
    got = partial_transpose(rt).matrix
    assert_array_equal(got, _pt_oracle(rt.matrix, 3, 3))
    # the (1,5) entry couples e1f1 with e2f2 and is fixed by the block swap
    assert_allclose(got[0, 4], -np.exp(1j * theta), atol=1e-15)


def test_partial_transpose_involution_exact(rng):
    a = BipartiteOperator(random_hermitian(rng, 12), 3, 4)
    assert_array_equal(partial_transpose(partial_transpose(a)).matrix, a.matrix)


def test_trace_pairing_invariant_under_partial_transpose(rng):
    for _ in range(100):
        a = BipartiteOperator(random_hermitian(rng, 9), 3, 3)
        b = BipartiteOperator(random_hermitian(rng, 9), 3, 3)
        lhs = np.trace(a.matrix @ b.matrix)
        rhs = np.trace(partial_transpose(a).matrix @ partial_transpose(b).matrix)
        assert abs(lhs - rhs) < 1e-10


# -- spectral tools ------------------------------------------------------------

def test_rank_examples():
    assert hermitian_rank(BipartiteOperator(np.eye(9), 3, 3)) == 9
    assert hermitian_rank(BipartiteOperator(np.zeros((9, 9)), 3, 3)) == 0
    assert hermitian_rank(g.rho_b(2.0)) == 4
    assert hermitian_rank(g.rho_sep(2.0, np.pi / 6)) == 5


def test_kernel_and_range_of_identity():
    eye = BipartiteOperator(np.eye(9), 3, 3)
    assert kernel_of(eye).dim == 0
    assert range_of(eye).dim == 9


def test_kernel_of_rho_theta_is_span_w():
    ker = kernel_of(g.rho_theta(2.0, np.pi / 6))
    assert ker.dim == 4
    assert ker.distance(Subspace.span(g.kernel_w(2.0, np.pi / 6), 3, 3)) < 1e-8


def test_kernel_of_rho_b_holds_six_products():
    ker = kernel_of(g.rho_b(2.0))
    assert ker.dim == 5
    for p in g.six_products_b(2.0):
        assert ker.residual(p.vector) < 1e-10


def test_rank_plus_kernel_dimension(rng):
    for rank in range(0, 10):
        a = rng.standard_normal((9, rank)) + 1j * rng.standard_normal((9, rank))
        op = BipartiteOperator(a @ a.conj().T, 3, 3)
        assert hermitian_rank(op) + kernel_of(op).dim == 9
        assert hermitian_rank(op) == rank


def test_orthocomplement_is_orthogonal(rng):
    a = rng.standard_normal((4, 9)) + 1j * rng.standard_normal((4, 9))
    d = Subspace.span(a, 3, 3)
    perp = d.orthocomplement()
    assert perp.dim == 5
    assert np.max(np.abs(perp.basis.conj() @ d.basis.T)) < 1e-12
    assert_allclose(d.projector() + perp.projector(), np.eye(9), atol=1e-12)


def test_subspace_rejects_non_orthonormal():
    with pytest.raises(ValueError):
        Subspace(np.array([[1, 1, 0, 0]]), 2, 2)


def test_subspace_json_roundtrip(rng):
    d = Subspace.span(rng.standard_normal((3, 6)) + 1j * rng.standard_normal((3, 6)), 2, 3)
    assert Subspace.from_json(json.loads(json.dumps(d.to_json()))).distance(d) < 1e-12


def test_tolerance_config_validation():
    with pytest.raises(ValueError):
        ToleranceConfig(rank_rel_tol=0)
    with pytest.raises(ValueError):
        ToleranceConfig(rank_rel_tol=1.5)


# -- realification --------------------------------------------------------------

def test_realify_examples():
    assert_array_equal(realify(np.zeros((9, 9))), np.zeros(81))
    v = realify(np.eye(9))
    assert_array_equal(v[:9], np.ones(9))
    assert_array_equal(v[9:], np.zeros(72))


def test_realify_is_isometric(rng):
    for _ in range(20):
        a, b = random_hermitian(rng, 9), random_hermitian(rng, 9)
        assert abs(realify(a) @ realify(b) - np.trace(a @ b).real) < 1e-10


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-5, 5), min_size=16, max_size=16), st.floats(-3, 3))
def test_realify_linear(entries, c):
    a = np.array(entries[:8] + entries[8:], dtype=float).reshape(4, 4)
    h = a + a.T + 1j * (a - a.T)
    assert_allclose(realify(c * h), c * realify(h), atol=1e-9)
