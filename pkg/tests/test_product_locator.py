import numpy as np
import pytest
from numpy.testing import assert_allclose

from sepfaces import gallery as g
from sepfaces.errors import DegeneratePencilError
from sepfaces.product_locator import (
    LocatorConfig,
    brute_force_conjugate_products,
    brute_force_products,
    companion_roots,
    constraint_matrix,
    find_product_vectors,
    membership,
    sylvester_resultant,
)
from sepfaces.tensor_core import ProductVector, Subspace, kernel_of, partial_transpose, range_of, tensor

from conftest import random_product

THETA = np.pi / 6


def _same_set(found, expected):
    return (len(found) == len(expected)
            and all(any(f.matches(e) for f in found) for e in expected))


# -- constraint matrix -----------------------------------------------------------

def test_constraint_matrix_unit_examples():
    e1f1 = tensor([1, 0, 0], [1, 0, 0])
    assert_allclose(constraint_matrix([e1f1], [1, 0, 0]), [[1, 0, 0]])
    assert_allclose(constraint_matrix([e1f1], [0, 1, 0]), [[0, 0, 0]])


def test_constraint_matrix_annihilates_kernel_partner():
    fam = g.six_products_b(2.0)
    perp = Subspace.span(fam, 3, 3).orthocomplement()
    x1, y1 = fam[0].x, fam[0].y
    assert np.linalg.norm(constraint_matrix(perp.basis, x1) @ y1) < 1e-10


# -- polynomial helpers ----------------------------------------------------

def test_companion_roots_recover_known_roots():
    roots = np.array([1.0, -2.0, 0.5 + 1j])
    coeffs = np.poly(roots)[::-1]
    assert_allclose(np.sort_complex(companion_roots(coeffs)), np.sort_complex(roots), atol=1e-12)


def test_sylvester_resultant_matches_univariate_formula():
    # f = t - s, g = t^2 - 1  ->  Res_t = s^2 - 1 (up to sign)
    f = np.zeros((2, 2), dtype=complex)
    f[0, 1], f[1, 0] = 1, -1
    gq = np.zeros((1, 3), dtype=complex)
    gq[0, 2], gq[0, 0] = 1, -1
    gq = np.vstack([gq, np.zeros((1, 3))])
    res = sylvester_resultant(f, gq)
    res = np.trim_zeros(res, "b")
    assert_allclose(res / res[-1], [-1, 0, 1], atol=1e-14)


# -- exhaustive locator ------------------------------------------------------

def test_kernel_of_rho_b_has_exactly_six():
    res = find_product_vectors(kernel_of(g.rho_b(2.0)))
    assert res.complete
    assert _same_set(res.vectors, g.six_products_b(2.0))
    assert max(res.residuals) < 1e-8


def test_range_of_rho_theta_has_exactly_six():
    res = find_product_vectors(range_of(g.rho_theta(2.0, THETA)))
    assert res.complete
    assert _same_set(res.vectors, g.six_products_theta(2.0, THETA))


def test_kernel_of_rho_theta_has_none():
    res = find_product_vectors(kernel_of(g.rho_theta(2.0, THETA)))
    assert res.complete
    assert len(res) == 0


def test_six_span_of_ten_vertex_family_is_degenerate():
    d = Subspace.span(g.delta9_family(2.0)[:6], 3, 3)
    with pytest.raises(DegeneratePencilError):
        find_product_vectors(d)


def test_rejects_wrong_shape_or_dimension():
    with pytest.raises(ValueError):
        find_product_vectors(Subspace(np.eye(6)[:3], 2, 3))
    with pytest.raises(ValueError):
        find_product_vectors(Subspace(np.eye(9), 3, 3))


def test_boundary_chart_solutions_are_found():
    e = np.eye(3)
    vecs = [tensor(e[0], e[0]), tensor(e[1], e[1]), tensor(e[2], e[2]),
            tensor([1, 1, 1], [1, 1, 1]), tensor([1, 2, 3], [1, -1, 2])]
    res = find_product_vectors(Subspace.span(vecs, 3, 3))
    assert res.complete and len(res) == 6
    for v in vecs[:3]:
        assert any(np.linalg.norm(p.vector - v) < 1e-8 for p in res.vectors)


def test_determinism_and_canonical_order():
    d = kernel_of(g.rho_b(3.0))
    a = find_product_vectors(d, LocatorConfig(rng_seed=5))
    b = find_product_vectors(d, LocatorConfig(rng_seed=5))
    assert [p.sort_key() for p in a.vectors] == [p.sort_key() for p in b.vectors]
    keys = [p.sort_key() for p in a.vectors]
    assert keys == sorted(keys)


def test_seed_does_not_change_answer():
    d = kernel_of(g.rho_b(2.0))
    a = find_product_vectors(d, LocatorConfig(rng_seed=1))
    b = find_product_vectors(d, LocatorConfig(rng_seed=99))
    assert _same_set(a.vectors, b.vectors)


def test_random_spans_of_six_products(rng):
    for _ in range(10):
        fam = [random_product(rng, 3, 3) for _ in range(5)]
        d = Subspace.span(fam, 3, 3)
        res = find_product_vectors(d)
        assert res.complete and len(res) == 6
        for p in fam:
            assert any(p.matches(q, 1e-6) for q in res.vectors)
        for p in res.vectors:
            assert membership(p, d)


# -- oracles -------------------------------------------------------------------

def test_brute_force_agrees_on_rho_b_kernel():
    res = brute_force_products(kernel_of(g.rho_b(2.0)), LocatorConfig(multistart_count=500, rng_seed=7))
    assert not res.complete
    assert _same_set(res.vectors, g.six_products_b(2.0))


def test_brute_force_full_space():
    res = brute_force_products(Subspace(np.eye(9), 3, 3), LocatorConfig(multistart_count=3))
    assert len(res) >= 1 and max(res.residuals) < 1e-10


def test_brute_force_two_diagonal_products():
    e = np.eye(3)
    d = Subspace.span([tensor(e[0], e[0]), tensor(e[1], e[1])], 3, 3)
    res = brute_force_products(d, LocatorConfig(multistart_count=100))
    assert _same_set(res.vectors, [ProductVector(e[0], e[0]), ProductVector(e[1], e[1])])


def test_brute_force_handles_qubit_qudit():
    fam = [ProductVector([1, 0], [1, 0, 0, 0]), ProductVector([0, 1], [0, 1, 0, 0])]
    res = brute_force_products(Subspace.span(fam, 2, 4), LocatorConfig(multistart_count=60))
    assert _same_set(res.vectors, fam)


def test_brute_force_rejects_large_dims():
    with pytest.raises(ValueError):
        brute_force_products(Subspace(np.eye(10)[:2], 2, 5))


def test_conjugate_oracle_finds_separable_decomposition_vectors():
    rs = g.rho_sep(2.0, THETA)
    d, e = range_of(rs), range_of(partial_transpose(rs))
    res = brute_force_conjugate_products(d, e, LocatorConfig(multistart_count=300))
    assert _same_set(res.vectors, g.six_products_theta(2.0, THETA))


def test_membership_examples():
    e = np.eye(3)
    d = Subspace.span([tensor(e[0], e[0])], 3, 3)
    assert membership(ProductVector(e[0], e[0]), d)
    assert not membership(ProductVector(e[0], e[1]), d)
    w2 = g.kernel_w(2.0, THETA)[1]
    ker = kernel_of(g.rho_theta(2.0, THETA))
    assert ker.residual(w2 / np.linalg.norm(w2)) < 1e-8


def test_config_validation():
    with pytest.raises(ValueError):
        LocatorConfig(multistart_count=0)
    with pytest.raises(ValueError):
        LocatorConfig(newton_iters=0)
