"""Gauss-Legendre rule construction and polynomial exactness."""

import numpy as np
import pytest

from patchrad.quadrature import GLRule, gauss_legendre, tensor_quad_2d


def test_low_order_rules_match_known_values():
    r1 = gauss_legendre(1)
    assert np.allclose(r1.nodes, [0.0]) and np.allclose(r1.weights, [2.0])
    r2 = gauss_legendre(2)
    assert np.allclose(np.sort(r2.nodes), [-1 / np.sqrt(3), 1 / np.sqrt(3)],
                       atol=1e-15)
    assert np.allclose(r2.weights, [1.0, 1.0], atol=1e-15)
    r3 = gauss_legendre(3)
    assert np.allclose(np.sort(np.abs(r3.nodes)), [0.0, np.sqrt(0.6), np.sqrt(0.6)],
                       atol=1e-15)


def test_exactness_to_degree_2n_minus_1():
    for n in range(1, 9):
        rule = gauss_legendre(n)
        for p in range(2 * n):
            exact = 0.0 if p % 2 == 1 else 2.0 / (p + 1)
            got = np.sum(rule.weights * rule.nodes ** p)
            assert abs(got - exact) < 1e-12, (n, p)


def test_rule_symmetry_and_weight_sum():
    for n in (2, 5, 8, 16):
        rule = gauss_legendre(n)
        assert abs(np.sum(rule.weights) - 2.0) < 1e-14
        assert np.allclose(np.sort(rule.nodes), -np.sort(rule.nodes)[::-1],
                           atol=1e-15)
        assert np.all(rule.weights > 0.0)
        assert rule.order == n


def test_order_bounds():
    with pytest.raises(ValueError):
        gauss_legendre(0)
    with pytest.raises(ValueError):
        gauss_legendre(33)


def test_rules_are_cached():
    assert gauss_legendre(4) is gauss_legendre(4)


def test_tensor_product_2d_polynomial():
    """Tensor rule area-averages x^a y^b over the square exactly for
    a, b <= 2n - 1 (the rule carries a 1/4 unit-area Jacobian)."""
    rng = np.random.default_rng(11)
    rule = gauss_legendre(3)
    coeffs = rng.uniform(-1, 1, size=(6, 6))

    def poly(x, y):
        return sum(coeffs[a, b] * x ** a * y ** b
                   for a in range(6) for b in range(6))

    got = tensor_quad_2d(poly, rule)
    exact = 0.25 * sum(coeffs[a, b] * (2.0 / (a + 1)) * (2.0 / (b + 1))
                       for a in range(0, 6, 2) for b in range(0, 6, 2))
    assert abs(got - exact) < 1e-12


def test_tensor_product_constant_is_identity():
    rule = gauss_legendre(4)
    assert abs(tensor_quad_2d(lambda x, y: 3.25, rule) - 3.25) < 1e-14


def test_rule_arrays_read_only():
    rule = gauss_legendre(5)
    with pytest.raises(ValueError):
        rule.nodes[0] = 99.0
    assert isinstance(rule, GLRule)
