"""Fine-quadrature ground truth for dipole-array radiated fields.

Stands in for a full-wave solver: element currents are closed-form
dipole profiles, and reference fields come from integrating the same
Green kernel over the element surfaces with an independent quadrature
path (numpy's Gauss-Legendre nodes, direct vectorized accumulation; no
code shared with the radiation operators beyond the validated kernel).

Elements are thin rectangular strips: ``length`` along ``axis`` and
``width`` across it.  A mesh-derived array gives each element the width
of its square patches, so the reference integrates exactly the surface
the patch operator discretizes; ``width`` = 0 degenerates to a line
integral along the axis.

Synthesized current matrices hold sampled moments, profile at the patch
centroid times the patch side, mirroring what a segment-based solver
reports.  Model errors against the reference therefore combine current
sampling with Green-kernel quadrature, the same mix a solver-backed
comparison sees.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import OracleConvergenceError, ZeroReferenceError
from .geometry import SurfaceMesh
from .greens import Wavenumber
from .kernels import dyadic_green_batch_numpy
from .radiation import EmbeddedCurrentMatrix

PROFILES = ("sinusoidal", "uniform")

# Fixed transverse quadrature order.  Strip widths are at most a patch
# side (~lambda/100 scale), where 8 Gauss-Legendre points integrate the
# kernel far below the 1e-8 axial convergence gate.
WIDTH_POINTS = 8


@lru_cache(maxsize=64)
def _leggauss(n: int):
    """Cached numpy Gauss-Legendre rules; building one is O(n^2)."""
    nodes, weights = np.polynomial.legendre.leggauss(n)
    nodes.flags.writeable = False
    weights.flags.writeable = False
    return nodes, weights


def _width_direction(axis: np.ndarray) -> np.ndarray:
    """Unit vector across the strip: basis vector least aligned with
    the axis, orthonormalized.  Fields are symmetric in its sign."""
    pick = int(np.argmin(np.abs(axis)))
    e = np.zeros(3)
    e[pick] = 1.0
    w = e - (e @ axis) * axis
    return w / np.linalg.norm(w)


@dataclass(frozen=True)
class DipoleElement:
    """Strip dipole: center, unit axis, length along axis, width across."""

    center: np.ndarray
    axis: np.ndarray
    length: float
    current_profile: str = "sinusoidal"
    width: float = 0.0
    width_direction: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        center = np.ascontiguousarray(self.center, dtype=float)
        axis = np.ascontiguousarray(self.axis, dtype=float)
        if center.shape != (3,) or axis.shape != (3,):
            raise ValueError("center and axis must be 3-vectors")
        if abs(np.linalg.norm(axis) - 1.0) > 1e-12:
            raise ValueError("axis must be a unit vector")
        if self.length <= 0.0:
            raise ValueError("length must be positive")
        if self.width < 0.0:
            raise ValueError("width must be >= 0")
        if self.current_profile not in PROFILES:
            raise ValueError(f"current_profile must be one of {PROFILES}")
        wd = self.width_direction
        wd = _width_direction(axis) if wd is None else np.ascontiguousarray(wd, float)
        if wd.shape != (3,) or abs(np.linalg.norm(wd) - 1.0) > 1e-12 \
                or abs(wd @ axis) > 1e-12:
            raise ValueError("width_direction must be a unit vector orthogonal to axis")
        for arr in (center, axis, wd):
            arr.flags.writeable = False
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "axis", axis)
        object.__setattr__(self, "width_direction", wd)


@dataclass(frozen=True)
class ReferenceField:
    """Converged fine-quadrature field and the resolution that made it."""

    e_sim: np.ndarray
    n_axis: int
    n_width: int

    @property
    def method(self) -> str:
        return f"strip-quadrature(n_axis={self.n_axis}, n_width={self.n_width})"


def _profile(kind: str, z: np.ndarray, kappa: float) -> np.ndarray:
    if kind == "sinusoidal":
        return np.cos(kappa * z)
    return np.ones_like(z)


def sinusoidal_current(z_local: float, element: DipoleElement,
                       k: Wavenumber) -> np.ndarray:
    """Axis-directed current cos(kappa z) at offset z_local from center.

    Zero at the tips of a half-wave element; unit amplitude at center.
    """
    if abs(z_local) > element.length / 2.0:
        raise ValueError(
            f"z_local = {z_local:.6g} m is outside the element "
            f"(half-length {element.length / 2.0:.6g} m)")
    return element.axis * complex(np.cos(k.kappa * z_local))


def dipole_array(mesh: SurfaceMesh) -> list:
    """One strip element per mesh element group.

    The axis comes from the span of the group's patch centroids, the
    width from the patch side, so the strips tile exactly the surface
    the mesh discretizes.  Elements need >= 2 patches to orient.
    """
    elements = []
    for e in range(mesh.n_elements):
        idx = np.flatnonzero(mesh.element_index == e)
        if idx.size == 0:
            raise ValueError(f"element {e} has no patches")
        pts = mesh.centroids[idx]
        if idx.size < 2:
            raise ValueError(
                f"element {e} has a single patch; the axis is ambiguous")
        span = pts[-1] - pts[0]
        axis = span / np.linalg.norm(span)
        side = float(mesh.side_lengths[idx[0]])
        normal = mesh.normals[idx[0]]
        wd = np.cross(axis, normal)
        wd /= np.linalg.norm(wd)
        elements.append(DipoleElement(
            center=pts.mean(axis=0), axis=axis, length=side * idx.size,
            current_profile="sinusoidal", width=side, width_direction=wd))
    return elements


def _element_patch_offsets(mesh: SurfaceMesh, elements) -> list:
    """Per element: (patch indices, axial offsets), validated to
    partition the element length with the mesh's square patches."""
    if mesh.n_elements != len(elements):
        raise ValueError(
            f"mesh has {mesh.n_elements} element groups, got {len(elements)} elements")
    out = []
    for e, el in enumerate(elements):
        idx = np.flatnonzero(mesh.element_index == e)
        pts = mesh.centroids[idx]
        rel = pts - el.center
        t = rel @ el.axis
        tol = 1e-9 * max(el.length, 1.0)
        if np.any(np.linalg.norm(rel - t[:, None] * el.axis, axis=1) > tol):
            raise ValueError(f"element {e}: patch centroids are off the centerline")
        sides = mesh.side_lengths[idx]
        if np.ptp(sides) > tol:
            raise ValueError(f"element {e}: patch sides are not uniform")
        if abs(idx.size * sides[0] - el.length) > tol:
            raise ValueError(
                f"element {e}: {idx.size} patches of side {sides[0]:.6g} m "
                f"do not partition length {el.length:.6g} m")
        if np.any(np.abs(t) > el.length / 2.0):
            raise ValueError(f"element {e}: patch centroid outside the element")
        out.append((idx, t))
    return out


def _patch_moment_amplitudes(el: DipoleElement, t: np.ndarray, side: float,
                             kappa: float) -> np.ndarray:
    """Sampled current moment per patch: profile at the patch centroid
    times the patch side (A*m), the discrete representation a segment
    solver hands over.  The reference field integrates the continuous
    profile instead, so this sampling is part of both models' error."""
    if el.current_profile == "sinusoidal":
        return side * np.cos(kappa * t)
    return np.full_like(t, side)


def coupling_matrix(n_elements: int, coupling: str, seed: int = 0) -> np.ndarray:
    """Port-to-element amplitude map C: column n drives element n at
    unit amplitude plus, for phase-perturbation coupling, deterministic
    pseudo-random spill (magnitude < 0.1) onto index-adjacent elements.
    """
    c = np.eye(n_elements, dtype=complex)
    if coupling == "none":
        return c
    if coupling != "phase-perturbation":
        raise ValueError(f"unknown coupling model: {coupling!r}")
    rng = np.random.default_rng(seed)
    for n in range(n_elements):
        for m in (n - 1, n + 1):
            if 0 <= m < n_elements:
                amp = rng.uniform(0.02, 0.08)
                phase = rng.uniform(0.0, 2.0 * np.pi)
                c[m, n] = amp * np.exp(1j * phase)
    return c


def synth_embedded_current_matrix(mesh: SurfaceMesh, elements,
                                  coupling: str = "none",
                                  seed: int = 0) -> EmbeddedCurrentMatrix:
    """Per-port current moments on the mesh, column n driving element n.

    With coupling "none" the matrix is block-diagonal by element; with
    "phase-perturbation" neighboring elements pick up small
    deterministic complex spill per coupling_matrix(seed).
    """
    kappa = Wavenumber.from_wavelength(mesh.wavelength).kappa
    n_el = len(elements)
    m0 = np.zeros((3 * mesh.n_patches, n_el), dtype=complex)
    for e, (idx, t) in enumerate(_element_patch_offsets(mesh, elements)):
        el = elements[e]
        amps = _patch_moment_amplitudes(el, t, float(mesh.side_lengths[idx[0]]), kappa)
        for j, kpatch in enumerate(idx):
            m0[3 * kpatch:3 * kpatch + 3, e] = amps[j] * el.axis
    return EmbeddedCurrentMatrix(m0 @ coupling_matrix(n_el, coupling, seed))


def element_field(r, element: DipoleElement, k: Wavenumber,
                  n_axis: int, n_width: int = WIDTH_POINTS) -> np.ndarray:
    """Field of one element by direct quadrature of the radiation
    integral: n_axis Gauss-Legendre points along the axis and, for
    strips, n_width across (surface density = profile / width)."""
    if n_axis < 1:
        raise ValueError("n_axis must be >= 1")
    r = np.asarray(r, dtype=float)
    xz, wz = _leggauss(n_axis)
    z = 0.5 * element.length * xz
    cz = 0.5 * element.length * wz * _profile(element.current_profile, z, k.kappa)
    if element.width > 0.0:
        xy, wy = _leggauss(n_width)
        y = 0.5 * element.width * xy
        cy = 0.5 * wy  # width weights / width: density spreads 1/width
        sources = (element.center
                   + z[:, None, None] * element.axis
                   + y[None, :, None] * element.width_direction)
        coeff = (cz[:, None] * cy[None, :]).ravel()
        sources = sources.reshape(-1, 3)
    else:
        sources = element.center + z[:, None] * element.axis
        coeff = cz
    g = dyadic_green_batch_numpy(r, sources, k.kappa)
    return np.einsum("q,qij,j->i", coeff, g, element.axis)


def reference_field(r, elements, k: Wavenumber, refinement: int,
                    amplitudes=None, rtol: float = 1e-8,
                    max_doublings: int = 4) -> ReferenceField:
    """Converged reference field of the array, amplitudes[e] scaling
    element e (default all ones).

    Starts at ``refinement`` axial points per element and doubles until
    two successive levels agree to ``rtol`` relative, raising
    OracleConvergenceError past ``max_doublings`` doublings.  The finer
    of the agreeing pair is returned.
    """
    if refinement < 1:
        raise ValueError("refinement must be >= 1")
    elements = list(elements)
    if not elements:
        raise ValueError("element list is empty")
    if amplitudes is None:
        amplitudes = np.ones(len(elements), dtype=complex)
    else:
        amplitudes = np.asarray(amplitudes, dtype=complex)
        if amplitudes.shape != (len(elements),):
            raise ValueError("amplitudes must have one entry per element")

    def level(n):
        return sum(a * element_field(r, el, k, n)
                   for a, el in zip(amplitudes, elements))

    n = int(refinement)
    prev = level(n)
    for _ in range(max_doublings):
        n *= 2
        cur = level(n)
        scale = np.linalg.norm(cur)
        if scale == 0.0:
            raise ZeroReferenceError("reference field is identically zero")
        if np.linalg.norm(cur - prev) <= rtol * scale:
            return ReferenceField(e_sim=cur, n_axis=n, n_width=WIDTH_POINTS)
        prev = cur
    raise OracleConvergenceError(
        f"reference field did not converge to {rtol:.1e} within "
        f"{max_doublings} refinement doublings (last n_axis = {n})")
