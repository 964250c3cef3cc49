"""Gauss-Legendre quadrature on [-1, 1] and tensor-product 2D rules.

Nodes are the roots of the Legendre polynomial P_n, found by Newton
iteration from the Chebyshev-like initial guess cos(pi*(4k-1)/(4n+2));
weights follow from w = 2 / ((1 - x^2) P_n'(x)^2).  Rules are exactly
symmetrized about zero, computed once per order, and cached read-only:
the same rule object is reused across all patches and sweep points.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX_ORDER = 32

_NEWTON_TOL = 1e-15


@dataclass(frozen=True)
class GLRule:
    """Gauss-Legendre rule: nodes and positive weights on [-1, 1]."""

    order: int
    nodes: np.ndarray
    weights: np.ndarray


def _legendre_and_derivative(n: int, x: np.ndarray):
    """P_n(x) and P_n'(x) via the three-term recurrence."""
    p_prev = np.ones_like(x)
    p = x.copy()
    for m in range(2, n + 1):
        p_prev, p = p, ((2 * m - 1) * x * p - (m - 1) * p_prev) / m
    dp = n * (x * p - p_prev) / (x * x - 1.0)
    return p, dp


_rule_cache: dict[int, GLRule] = {}


def gauss_legendre(n: int) -> GLRule:
    """Return the cached order-n Gauss-Legendre rule.

    Valid orders are 1..32; higher orders are not needed here (the
    reference operator uses 16, production uses 2).
    """
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
        raise ValueError(f"quadrature order must be an integer, got {n!r}")
    if n < 1 or n > MAX_ORDER:
        raise ValueError(f"quadrature order must be in [1, {MAX_ORDER}], got {n}")
    n = int(n)
    rule = _rule_cache.get(n)
    if rule is not None:
        return rule

    if n == 1:
        nodes = np.array([0.0])
        weights = np.array([2.0])
    else:
        # positive-half roots, descending from the largest
        k = np.arange(1, n // 2 + 1)
        x = np.cos(np.pi * (4 * k - 1) / (4 * n + 2))
        for _ in range(100):
            p, dp = _legendre_and_derivative(n, x)
            dx = p / dp
            x -= dx
            if np.max(np.abs(dx)) < _NEWTON_TOL:
                break
        _, dp = _legendre_and_derivative(n, x)
        w = 2.0 / ((1.0 - x * x) * dp * dp)

        if n % 2 == 1:
            _, dp0 = _legendre_and_derivative(n, np.array([0.0]))
            nodes = np.concatenate([-x, [0.0], x[::-1]])
            weights = np.concatenate([w, 2.0 / (dp0 * dp0), w[::-1]])
        else:
            nodes = np.concatenate([-x, x[::-1]])
            weights = np.concatenate([w, w[::-1]])

    nodes.flags.writeable = False
    weights.flags.writeable = False
    rule = GLRule(order=n, nodes=nodes, weights=weights)
    _rule_cache[n] = rule
    return rule


def tensor_quad_2d(f, rule: GLRule):
    """Tensor-product integral (1/4) * sum w_q1 w_q2 f(xi_q1, eta_q2).

    ``f`` maps a node pair on [-1,1]^2 to a complex matrix (any fixed
    array shape works).  The 1/4 factor is the Jacobian normalizing the
    square [-1,1]^2 to unit area, so a constant integrand is returned
    unchanged.
    """
    acc = None
    for w1, xi in zip(rule.weights, rule.nodes):
        for w2, eta in zip(rule.weights, rule.nodes):
            term = (w1 * w2) * np.asarray(f(xi, eta))
            acc = term if acc is None else acc + term
    return 0.25 * acc
