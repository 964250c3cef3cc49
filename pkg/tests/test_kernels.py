"""Backend equivalence and evaluation accounting for the hot kernels."""

import os
import subprocess
import sys

import numpy as np
import pytest

from patchrad import kernels
from patchrad.quadrature import gauss_legendre


def _random_patch_args(rng, n_patches=17):
    centroids = rng.uniform(-1.0, 1.0, size=(n_patches, 3))
    half_sides = rng.uniform(0.001, 0.01, size=n_patches)
    d1 = rng.normal(size=(n_patches, 3))
    d1 /= np.linalg.norm(d1, axis=1, keepdims=True)
    helper = rng.normal(size=(n_patches, 3))
    d2 = np.cross(d1, helper)
    d2 /= np.linalg.norm(d2, axis=1, keepdims=True)
    r = np.array([3.0, -2.0, 1.5])
    return r, centroids, half_sides, d1, d2


@pytest.mark.skipif(kernels.BACKEND != "numba",
                    reason="numba backend not active")
def test_numba_matches_numpy_point_blocks():
    rng = np.random.default_rng(0)
    r, centroids, _, _, _ = _random_patch_args(rng)
    kappa = 2.0 * np.pi / 0.06
    b_nb, min_nb = kernels.point_blocks_numba(r, centroids, kappa)
    b_np, min_np = kernels.point_blocks_numpy(r, centroids, kappa)
    assert np.allclose(b_nb, b_np, rtol=1e-13, atol=0)
    assert abs(min_nb - min_np) < 1e-14


@pytest.mark.skipif(kernels.BACKEND != "numba",
                    reason="numba backend not active")
def test_numba_matches_numpy_patch_blocks():
    rng = np.random.default_rng(1)
    r, centroids, half_sides, d1, d2 = _random_patch_args(rng)
    rule = gauss_legendre(2)
    kappa = 2.0 * np.pi / 0.06
    b_nb, min_nb = kernels.patch_blocks_numba(
        r, centroids, half_sides, d1, d2, rule.nodes, rule.weights, kappa)
    b_np, min_np = kernels.patch_blocks_numpy(
        r, centroids, half_sides, d1, d2, rule.nodes, rule.weights, kappa)
    assert np.allclose(b_nb, b_np, rtol=1e-12, atol=0)
    assert abs(min_nb - min_np) < 1e-14


@pytest.mark.skipif(kernels.BACKEND != "numba",
                    reason="numba backend not active")
def test_numba_matches_numpy_green_batch():
    rng = np.random.default_rng(2)
    sources = rng.uniform(-1, 1, size=(40, 3))
    r = np.array([0.4, 0.9, -0.3])
    kappa = 2.0 * np.pi
    g_nb = kernels.dyadic_green_batch_numba(r, sources, kappa)
    g_np = kernels.dyadic_green_batch_numpy(r, sources, kappa)
    assert np.allclose(g_nb, g_np, rtol=1e-13, atol=0)


def test_eval_counter_accounting():
    """Counted wrappers add K (point) and K*n_q^2 (patch) per call."""
    rng = np.random.default_rng(3)
    r, centroids, half_sides, d1, d2 = _random_patch_args(rng, n_patches=9)
    rule = gauss_legendre(2)
    kappa = 2.0 * np.pi

    kernels.reset_greens_eval_count()
    kernels.point_blocks(r, centroids, kappa)
    assert kernels.greens_eval_count() == 9
    kernels.patch_blocks(r, centroids, half_sides, d1, d2,
                         rule.nodes, rule.weights, kappa)
    assert kernels.greens_eval_count() == 9 + 9 * 4

    # raw backend functions are not counted
    kernels.reset_greens_eval_count()
    kernels.point_blocks_numpy(r, centroids, kappa)
    kernels.dyadic_green_batch_numpy(r, centroids, kappa)
    assert kernels.greens_eval_count() == 0


def test_patch_blocks_min_distance_tracks_samples():
    # observation point close to one sample corner: min_R must be the
    # sample distance, not the centroid distance
    rule = gauss_legendre(2)
    centroids = np.array([[0.0, 0.0, 0.0]])
    d1 = np.array([[0.0, 0.0, 1.0]])
    d2 = np.array([[0.0, -1.0, 0.0]])
    half = np.array([0.1])
    node = rule.nodes.max()
    # just off the (+z, -y) corner sample
    r = np.array([0.001, -node * 0.1, node * 0.1])
    _, min_r = kernels.patch_blocks_numpy(
        r, centroids, half, d1, d2, rule.nodes, rule.weights, 2.0 * np.pi)
    assert abs(min_r - 0.001) < 1e-12
    _, min_point = kernels.point_blocks_numpy(r, centroids, 2.0 * np.pi)
    assert min_point > 10 * min_r


def test_backend_env_selection_numpy():
    """PATCHRAD_BACKEND=numpy forces the fallback in a fresh process."""
    code = ("import patchrad.kernels as k; "
            "print(k.BACKEND, k.dyadic_green_batch_numba is None)")
    env = dict(os.environ, PATCHRAD_BACKEND="numpy")
    out = subprocess.run([sys.executable, "-c", code], env=env,
                         capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["numpy", "True"]


def test_backend_env_rejects_unknown():
    code = "import patchrad.kernels"
    env = dict(os.environ, PATCHRAD_BACKEND="cuda")
    out = subprocess.run([sys.executable, "-c", code], env=env,
                         capture_output=True, text=True)
    assert out.returncode != 0
    assert "PATCHRAD_BACKEND" in out.stderr
