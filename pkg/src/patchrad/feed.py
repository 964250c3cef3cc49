"""Continuous feeding model over the transmit surface.

A discrete N-port array drives the surface through port weights; the
continuous limit replaces them with a square-integrable feed density
w(p) on a feed locus and a current kernel j(s, p), the current at
surface point s per unit excitation at feed point p.  This module
provides the named feed functions, kernel constructors, the continuous
steering vector a(r, p), and the uniform-grid Riemann synthesis whose
refinement limit connects the two pictures.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import SurfaceMesh
from .radiation import EmbeddedCurrentMatrix, Polarization, RadiationOperator


@dataclass(frozen=True)
class FeedFunction:
    """Complex feed density over feed points, w(p)."""

    fn: object
    name: str = ""
    square_integrable: bool = True

    def __call__(self, p) -> complex:
        return complex(self.fn(np.asarray(p, dtype=float)))


@dataclass(frozen=True)
class CurrentKernel:
    """Map (surface point, feed point) -> complex 3-vector current."""

    fn: object
    name: str = ""

    def __call__(self, s, p) -> np.ndarray:
        out = np.asarray(self.fn(np.asarray(s, float), np.asarray(p, float)),
                         dtype=complex)
        if out.shape != (3,):
            raise ValueError("current kernel must return a 3-vector")
        return out


def uniform_feed() -> FeedFunction:
    return FeedFunction(fn=lambda p: 1.0 + 0.0j, name="uniform")


def linear_phase_feed(kappa: float, direction) -> FeedFunction:
    """w(p) = exp(j kappa direction . p), a progressive phase ramp."""
    direction = np.asarray(direction, dtype=float)
    if direction.shape != (3,):
        raise ValueError("direction must be a 3-vector")
    return FeedFunction(
        fn=lambda p: np.exp(1j * kappa * float(direction @ p)),
        name="linear-phase")


def gaussian_taper_feed(center, sigma: float) -> FeedFunction:
    """w(p) = exp(-|p - center|^2 / (2 sigma^2)), an amplitude taper."""
    if sigma <= 0.0:
        raise ValueError("sigma must be positive")
    center = np.asarray(center, dtype=float)
    return FeedFunction(
        fn=lambda p: np.exp(-0.5 * float((p - center) @ (p - center)) / sigma ** 2),
        name="gaussian-taper")


def named_feed(name: str, **params) -> FeedFunction:
    """Feed function by config name: uniform | linear-phase | gaussian-taper."""
    if name == "uniform":
        return uniform_feed()
    if name == "linear-phase":
        return linear_phase_feed(params["kappa"], params["direction"])
    if name == "gaussian-taper":
        return gaussian_taper_feed(params["center"], params["sigma"])
    raise ValueError(f"unknown feed function: {name!r}")


def _patch_lookup(mesh: SurfaceMesh):
    def find(s):
        d2 = np.sum((mesh.centroids - s) ** 2, axis=1)
        k = int(np.argmin(d2))
        if d2[k] > (1e-9 * max(mesh.wavelength, 1.0)) ** 2:
            raise ValueError("surface point does not match any patch centroid")
        return k
    return find


def kernel_from_embedded(mesh: SurfaceMesh, matrix: EmbeddedCurrentMatrix,
                         port_positions) -> CurrentKernel:
    """Kernel interpolating the embedded per-port currents.

    At feed point p the kernel blends the port columns with triangular
    hats in the arc-length coordinate along the port line, so at a port
    position it reproduces that port's current density M_(k) e_n / A_k
    exactly.  Surface points must be patch centroids.
    """
    q = np.asarray(port_positions, dtype=float)
    if q.ndim != 2 or q.shape[1] != 3 or q.shape[0] != matrix.n_ports:
        raise ValueError("port_positions must be (N, 3) matching the port count")
    if q.shape[0] > 1:
        axis = q[-1] - q[0]
        axis = axis / np.linalg.norm(axis)
    else:
        axis = np.zeros(3)
    t_ports = q @ axis
    order = np.argsort(t_ports)
    t_sorted = t_ports[order]
    find = _patch_lookup(mesh)
    blocks = matrix.blocks3()

    def fn(s, p):
        k = find(s)
        t = float(p @ axis)
        weights = np.zeros(matrix.n_ports)
        if matrix.n_ports == 1 or t <= t_sorted[0]:
            weights[order[0]] = 1.0
        elif t >= t_sorted[-1]:
            weights[order[-1]] = 1.0
        else:
            i = int(np.searchsorted(t_sorted, t)) - 1
            frac = (t - t_sorted[i]) / (t_sorted[i + 1] - t_sorted[i])
            weights[order[i]] = 1.0 - frac
            weights[order[i + 1]] = frac
        return (blocks[k] @ weights) / mesh.areas[k]

    return CurrentKernel(fn=fn, name="embedded-interpolated")


def gaussian_aperture_kernel(mesh: SurfaceMesh, sigma: float,
                             kappa: float) -> CurrentKernel:
    """Smooth synthetic kernel: axis-directed half-wave profile tapered
    by a Gaussian of scale sigma around the feed point.  Infinitely
    differentiable in p, which makes it the default for grid-refinement
    convergence studies."""
    if sigma <= 0.0:
        raise ValueError("sigma must be positive")

    def fn(s, p):
        d = s - p
        return np.array([0.0, 0.0, np.cos(kappa * s[2])]) * \
            np.exp(-0.5 * float(d @ d) / sigma ** 2)

    return CurrentKernel(fn=fn, name="gaussian-aperture")


def continuous_steering(op: RadiationOperator, p, kernel: CurrentKernel,
                        mesh: SurfaceMesh) -> np.ndarray:
    """a(r, p) = sum_k K_k(r) j(s_k, p) A_k, the field at the operator's
    observation point per unit feed excitation at p."""
    if op.n_patches != mesh.n_patches:
        raise ValueError("operator and mesh patch counts differ")
    p = np.asarray(p, dtype=float)
    currents = np.array([kernel(mesh.centroids[k], p)
                         for k in range(mesh.n_patches)])
    return np.einsum("kij,kj,k->i", op.blocks, currents, mesh.areas)


def scalar_steering(op: RadiationOperator, p, kernel: CurrentKernel,
                    mesh: SurfaceMesh, pol: Polarization) -> complex:
    """u_r^H a(r, p), the received continuous steering value."""
    return complex(np.vdot(pol.u_r, continuous_steering(op, p, kernel, mesh)))


def feed_grid(start, stop, dp: float):
    """Midpoint grid along the segment [start, stop] with spacing dp.

    Returns (points (n, 3), dp_actual); n = round(length / dp), spacing
    adjusted to tile the segment exactly.  Raises on an empty grid.
    """
    if dp <= 0.0:
        raise ValueError("dp must be positive")
    start = np.asarray(start, dtype=float)
    stop = np.asarray(stop, dtype=float)
    length = float(np.linalg.norm(stop - start))
    n = int(round(length / dp))
    if n < 1:
        raise ValueError("feed grid is empty: spacing exceeds the locus length")
    frac = (np.arange(n) + 0.5) / n
    return start + frac[:, None] * (stop - start), length / n


def riemann_field(op: RadiationOperator, w_fn: FeedFunction,
                  kernel: CurrentKernel, mesh: SurfaceMesh,
                  start, stop, dp: float) -> np.ndarray:
    """Uniform-grid Riemann sum e(r) ~ sum_n w(p_n) dp a(r, p_n) over
    the midpoint grid on [start, stop]."""
    points, dp_actual = feed_grid(start, stop, dp)
    total = np.zeros(3, dtype=complex)
    for p in points:
        total += w_fn(p) * continuous_steering(op, p, kernel, mesh)
    return total * dp_actual


def current_subspace_dimension(matrix: EmbeddedCurrentMatrix,
                               tol: float = 1e-8) -> int:
    """Numerical rank of M: singular values above tol x largest."""
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    s = np.linalg.svd(matrix.m, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > tol * s[0]))
