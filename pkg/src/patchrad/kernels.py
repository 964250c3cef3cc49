"""Hot numeric kernels: batched free-space dyadic Green evaluation.

Two interchangeable backends are provided.  The numba backend compiles
tight per-point loops with ``@njit``; the numpy backend is a vectorized
fallback with identical semantics.  Selection happens once at import
time from the environment variable ``PATCHRAD_BACKEND``:

    auto   -- use numba when importable, else numpy (default)
    numba  -- require numba, fail loudly if missing
    numpy  -- force the pure-numpy path

Both backends are always importable as ``*_numpy`` / ``*_numba`` so the
benchmark suite can time them side by side in one process.

Every public wrapper increments a module-level evaluation counter by the
number of dyadic Green point evaluations performed; operator cost
accounting and the cost benchmark read this counter.
"""

from __future__ import annotations

import os

import numpy as np

FOUR_PI = 4.0 * np.pi

_eval_count = 0


def greens_eval_count() -> int:
    """Number of dyadic Green point evaluations since the last reset."""
    return _eval_count


def reset_greens_eval_count() -> None:
    global _eval_count
    _eval_count = 0


# ---------------------------------------------------------------------------
# numpy backend
# ---------------------------------------------------------------------------

def _green_entries_numpy(dx, dy, dz, kappa):
    """Dyadic Green blocks for displacement components of shape (...,).

    Returns an array of shape (..., 3, 3).  With u = 1/(kappa*R) and
    g = exp(-j*kappa*R)/(4*pi*R):

        G = g * [(1 - j*u - u^2) I  +  (-1 + 3j*u + 3u^2) RhatRhat^T]
    """
    r2 = dx * dx + dy * dy + dz * dz
    r = np.sqrt(r2)
    u = 1.0 / (kappa * r)
    g = np.exp(-1j * kappa * r) / (FOUR_PI * r)
    ca = g * (1.0 - 1j * u - u * u)
    cb = g * (-1.0 + 3j * u + 3.0 * u * u)

    out = np.empty(r.shape + (3, 3), dtype=np.complex128)
    comps = (dx / r, dy / r, dz / r)
    for i in range(3):
        for j in range(3):
            out[..., i, j] = cb * comps[i] * comps[j]
        out[..., i, i] += ca
    return out


def dyadic_green_batch_numpy(r, sources, kappa):
    """Dyadic Green function from each source point to ``r``.

    Parameters
    ----------
    r : (3,) float array, observation point.
    sources : (M, 3) float array, source points.
    kappa : float, free-space wavenumber (rad/m).

    Returns
    -------
    (M, 3, 3) complex array of Green blocks G(r, s_m).
    """
    d = r[np.newaxis, :] - sources
    return _green_entries_numpy(d[:, 0], d[:, 1], d[:, 2], kappa)


def patch_blocks_numpy(r, centroids, half_sides, d1, d2, nodes, weights, kappa):
    """Patch-averaged Green blocks via tensor Gauss-Legendre quadrature.

    Block k averages G(r, .) over the square of side 2*half_sides[k]
    spanned by the tangent directions d1[k], d2[k] around centroids[k]:

        (1/4) * sum_{q1,q2} w_q1 w_q2 G(r, s_k + h_k*(xi_q1 d1 + eta_q2 d2))

    Returns (blocks, min_R): the (K, 3, 3) complex block array and the
    smallest observation-to-sample distance encountered.
    """
    nq = len(nodes)
    # sample points: (K, nq, nq, 3)
    off1 = nodes[:, None] * np.ones(nq)[None, :]          # xi varies over axis 0
    off2 = np.ones(nq)[:, None] * nodes[None, :]          # eta varies over axis 1
    pts = (
        centroids[:, None, None, :]
        + half_sides[:, None, None, None]
        * (off1[None, :, :, None] * d1[:, None, None, :]
           + off2[None, :, :, None] * d2[:, None, None, :])
    )
    d = r[None, None, None, :] - pts
    dist = np.sqrt(np.sum(d * d, axis=-1))
    g = _green_entries_numpy(d[..., 0], d[..., 1], d[..., 2], kappa)
    w2 = weights[:, None] * weights[None, :]
    blocks = 0.25 * np.einsum("qp,kqpij->kij", w2, g)
    return blocks, float(dist.min())


def point_blocks_numpy(r, centroids, kappa):
    """Point-source (centroid) Green blocks and the minimum distance."""
    d = r[np.newaxis, :] - centroids
    dist = np.sqrt(np.sum(d * d, axis=-1))
    blocks = _green_entries_numpy(d[:, 0], d[:, 1], d[:, 2], kappa)
    return blocks, float(dist.min())


# ---------------------------------------------------------------------------
# numba backend
# ---------------------------------------------------------------------------

def _build_numba_kernels():
    from numba import njit

    @njit(cache=False, nogil=True)
    def _green_into(out, k, dx, dy, dz, kappa, scale):
        """Accumulate scale * G for one displacement into out[k]."""
        r2 = dx * dx + dy * dy + dz * dz
        r = np.sqrt(r2)
        u = 1.0 / (kappa * r)
        phase = kappa * r
        g = (np.cos(phase) - 1j * np.sin(phase)) / (FOUR_PI * r)
        ca = g * (1.0 - 1j * u - u * u)
        cb = g * (-1.0 + 3j * u + 3.0 * u * u)
        rx = dx / r
        ry = dy / r
        rz = dz / r
        out[k, 0, 0] += scale * (ca + cb * rx * rx)
        out[k, 0, 1] += scale * (cb * rx * ry)
        out[k, 0, 2] += scale * (cb * rx * rz)
        out[k, 1, 0] += scale * (cb * ry * rx)
        out[k, 1, 1] += scale * (ca + cb * ry * ry)
        out[k, 1, 2] += scale * (cb * ry * rz)
        out[k, 2, 0] += scale * (cb * rz * rx)
        out[k, 2, 1] += scale * (cb * rz * ry)
        out[k, 2, 2] += scale * (ca + cb * rz * rz)
        return r

    @njit(cache=False, nogil=True)
    def dyadic_green_batch(r, sources, kappa):
        m = sources.shape[0]
        out = np.zeros((m, 3, 3), dtype=np.complex128)
        for k in range(m):
            _green_into(out, k,
                        r[0] - sources[k, 0],
                        r[1] - sources[k, 1],
                        r[2] - sources[k, 2],
                        kappa, 1.0)
        return out

    @njit(cache=False, nogil=True)
    def point_blocks(r, centroids, kappa):
        m = centroids.shape[0]
        out = np.zeros((m, 3, 3), dtype=np.complex128)
        min_r = np.inf
        for k in range(m):
            dist = _green_into(out, k,
                               r[0] - centroids[k, 0],
                               r[1] - centroids[k, 1],
                               r[2] - centroids[k, 2],
                               kappa, 1.0)
            if dist < min_r:
                min_r = dist
        return out, min_r

    @njit(cache=False, nogil=True)
    def patch_blocks(r, centroids, half_sides, d1, d2, nodes, weights, kappa):
        kk = centroids.shape[0]
        nq = nodes.shape[0]
        out = np.zeros((kk, 3, 3), dtype=np.complex128)
        min_r = np.inf
        for k in range(kk):
            h = half_sides[k]
            for q1 in range(nq):
                for q2 in range(nq):
                    ox = h * (nodes[q1] * d1[k, 0] + nodes[q2] * d2[k, 0])
                    oy = h * (nodes[q1] * d1[k, 1] + nodes[q2] * d2[k, 1])
                    oz = h * (nodes[q1] * d1[k, 2] + nodes[q2] * d2[k, 2])
                    dist = _green_into(out, k,
                                       r[0] - (centroids[k, 0] + ox),
                                       r[1] - (centroids[k, 1] + oy),
                                       r[2] - (centroids[k, 2] + oz),
                                       kappa, weights[q1] * weights[q2])
                    if dist < min_r:
                        min_r = dist
            for i in range(3):
                for j in range(3):
                    out[k, i, j] *= 0.25
        return out, min_r

    return dyadic_green_batch, point_blocks, patch_blocks


def _select_backend() -> str:
    choice = os.environ.get("PATCHRAD_BACKEND", "auto").lower()
    if choice not in ("auto", "numba", "numpy"):
        raise ValueError(
            f"PATCHRAD_BACKEND must be auto, numba or numpy, got {choice!r}"
        )
    if choice == "numpy":
        return "numpy"
    try:
        import numba  # noqa: F401
    except ImportError:
        if choice == "numba":
            raise
        return "numpy"
    return "numba"


BACKEND = _select_backend()

if BACKEND == "numba":
    (dyadic_green_batch_numba,
     point_blocks_numba,
     patch_blocks_numba) = _build_numba_kernels()
    _dyadic_green_batch = dyadic_green_batch_numba
    _point_blocks = point_blocks_numba
    _patch_blocks = patch_blocks_numba
else:
    dyadic_green_batch_numba = None
    point_blocks_numba = None
    patch_blocks_numba = None
    _dyadic_green_batch = dyadic_green_batch_numpy
    _point_blocks = point_blocks_numpy
    _patch_blocks = patch_blocks_numpy


# ---------------------------------------------------------------------------
# counted public wrappers (backend-dispatching)
# ---------------------------------------------------------------------------

def dyadic_green_batch(r, sources, kappa):
    """Batched dyadic Green evaluation on the active backend (counted)."""
    global _eval_count
    _eval_count += sources.shape[0]
    return _dyadic_green_batch(r, sources, kappa)


def point_blocks(r, centroids, kappa):
    """Centroid-rule Green blocks on the active backend (counted)."""
    global _eval_count
    _eval_count += centroids.shape[0]
    return _point_blocks(r, centroids, kappa)


def patch_blocks(r, centroids, half_sides, d1, d2, nodes, weights, kappa):
    """Patch-averaged Green blocks on the active backend (counted)."""
    global _eval_count
    _eval_count += centroids.shape[0] * len(nodes) ** 2
    return _patch_blocks(r, centroids, half_sides, d1, d2, nodes, weights, kappa)
