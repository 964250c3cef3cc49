"""Point-source and patch radiation operators and field synthesis.

The operator maps stacked per-patch current moments (3K x N matrix M,
A*m per unit excitation) and port weights w to the radiated field at an
observation point r.  Two constructions are provided:

  point_source_operator : block k = G(r, s_k), the centroid rule
  patch_operator        : block k = tensor-product Gauss-Legendre
                          average of G over patch k in its tangent frame

Both return K dense complex 3x3 blocks; fields follow from
e(r) = sum_k K_k(r) M_(k) w.  Units are 1/m per block (no physical
prefactor); all shipped error metrics are invariant to that scale.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ProximityError
from .geometry import SurfaceMesh, TangentFrame
from .greens import Wavenumber
from .quadrature import GLRule

# Minimum observation distance to any patch sample point, in
# wavelengths.  The kernels are finite there but the quadrature model
# has no validity closer to the surface.
PROXIMITY_WAVELENGTHS = 0.01


@dataclass(frozen=True)
class EmbeddedCurrentMatrix:
    """Stacked per-patch current moments, 3K rows by N ports."""

    m: np.ndarray

    def __post_init__(self):
        m = np.ascontiguousarray(self.m, dtype=complex)
        if m.ndim != 2 or m.shape[0] % 3 != 0 or m.shape[0] == 0:
            raise ValueError("current matrix must have 3K rows, K >= 1")
        if m.shape[1] < 1:
            raise ValueError("current matrix needs at least one port column")
        if not np.all(np.isfinite(m)):
            raise ValueError("current matrix entries must be finite")
        m.flags.writeable = False
        object.__setattr__(self, "m", m)

    @property
    def n_patches(self) -> int:
        return self.m.shape[0] // 3

    @property
    def n_ports(self) -> int:
        return self.m.shape[1]

    def block(self, k: int) -> np.ndarray:
        """Rows 3k..3k+2: the 3 x N moment block of patch k."""
        if not 0 <= k < self.n_patches:
            raise IndexError(f"patch index {k} out of range")
        return self.m[3 * k:3 * k + 3]

    def blocks3(self) -> np.ndarray:
        """(K, 3, N) view of the stacked blocks."""
        return self.m.reshape(self.n_patches, 3, self.n_ports)


def save_current_matrix_csv(matrix: EmbeddedCurrentMatrix, path) -> None:
    """Write M in the interchange format: re/im column pair per port."""
    n = matrix.n_ports
    header = []
    for j in range(1, n + 1):
        header += [f"re_{j}", f"im_{j}"]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in matrix.m:
            out = []
            for v in row:
                out += [f"{v.real:.17g}", f"{v.imag:.17g}"]
            writer.writerow(out)


def load_current_matrix_csv(path) -> EmbeddedCurrentMatrix:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise ValueError(f"{path}: empty file")
        header = [h.strip() for h in header]
        n = len(header) // 2
        expected = []
        for j in range(1, n + 1):
            expected += [f"re_{j}", f"im_{j}"]
        if n < 1 or header != expected:
            raise ValueError(
                f"{path}: expected header re_1,im_1,...,re_N,im_N, got {header}")
        rows = [row for row in reader if row]
    if not rows or len(rows) % 3 != 0:
        raise ValueError(f"{path}: row count {len(rows)} is not a positive multiple of 3")
    data = np.array([[float(v) for v in row] for row in rows])
    if data.shape[1] != 2 * n:
        raise ValueError(f"{path}: ragged rows")
    return EmbeddedCurrentMatrix(data[:, 0::2] + 1j * data[:, 1::2])


@dataclass(frozen=True)
class RadiationOperator:
    """K complex 3x3 field blocks for one observation point."""

    blocks: np.ndarray
    r: np.ndarray
    kind: str

    def __post_init__(self):
        blocks = np.ascontiguousarray(self.blocks, dtype=complex)
        r = np.ascontiguousarray(self.r, dtype=float)
        if blocks.ndim != 3 or blocks.shape[1:] != (3, 3):
            raise ValueError("blocks must have shape (K, 3, 3)")
        if not np.all(np.isfinite(blocks)):
            raise ValueError("operator blocks must be finite")
        if r.shape != (3,):
            raise ValueError("observation point must be a 3-vector")
        blocks.flags.writeable = False
        r.flags.writeable = False
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "r", r)

    @property
    def n_patches(self) -> int:
        return self.blocks.shape[0]


@dataclass(frozen=True)
class PortWeights:
    """Dimensionless complex excitation weights, one per port."""

    w: np.ndarray

    def __post_init__(self):
        w = np.ascontiguousarray(self.w, dtype=complex)
        if w.ndim != 1 or w.shape[0] < 1:
            raise ValueError("weights must be a nonempty vector")
        if not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite")
        w.flags.writeable = False
        object.__setattr__(self, "w", w)


@dataclass(frozen=True)
class Polarization:
    """Real receive polarization direction, unit within 1e-12."""

    u_r: np.ndarray

    def __post_init__(self):
        u = np.ascontiguousarray(self.u_r, dtype=float)
        if u.shape != (3,):
            raise ValueError("polarization must be a real 3-vector")
        if abs(np.linalg.norm(u) - 1.0) > 1e-12:
            raise ValueError("polarization must be a unit vector within 1e-12")
        u.flags.writeable = False
        object.__setattr__(self, "u_r", u)


def _check_proximity(min_dist: float, k: Wavenumber, what: str) -> None:
    guard = PROXIMITY_WAVELENGTHS * k.wavelength
    if min_dist <= guard:
        raise ProximityError(
            f"observation point is {min_dist:.3e} m from the nearest {what}; "
            f"the operator requires > {guard:.3e} m (wavelength/100)")


def point_source_operator(r, mesh: SurfaceMesh, k: Wavenumber) -> RadiationOperator:
    """Centroid-rule operator: block k = G(r, s_k).

    Ignores patch areas and frames by construction; raises
    ProximityError when r is within wavelength/100 of a centroid.
    """
    r = np.asarray(r, dtype=float)
    blocks, min_dist = kernels.point_blocks(r, mesh.centroids, k.kappa)
    _check_proximity(min_dist, k, "patch centroid")
    return RadiationOperator(blocks=blocks, r=r, kind="point_source")


def _frames_to_arrays(frames, n_patches: int):
    if isinstance(frames, tuple) and len(frames) == 2:
        d1, d2 = np.asarray(frames[0], float), np.asarray(frames[1], float)
    else:
        frames = list(frames)
        if frames and not isinstance(frames[0], TangentFrame):
            raise TypeError("frames must be (d1, d2) arrays or a list of TangentFrame")
        d1 = np.array([f.d1 for f in frames], dtype=float)
        d2 = np.array([f.d2 for f in frames], dtype=float)
    if d1.shape != (n_patches, 3) or d2.shape != (n_patches, 3):
        raise ValueError(f"frames must cover all {n_patches} patches")
    return d1, d2


def patch_operator(r, mesh: SurfaceMesh, frames, rule: GLRule,
                   k: Wavenumber) -> RadiationOperator:
    """Gauss-Legendre patch-averaged operator.

    Block k is the average of G over the square patch of side L_k in
    the frame (d1, d2): (1/4) * sum_{q1,q2} w_q1 w_q2
    G(r, s_k + (L_k/2)(xi d1 + eta d2)).  ``frames`` is either a
    (d1, d2) pair of (K, 3) arrays or a list of TangentFrame.
    """
    r = np.asarray(r, dtype=float)
    d1, d2 = _frames_to_arrays(frames, mesh.n_patches)
    blocks, min_dist = kernels.patch_blocks(
        r, mesh.centroids, 0.5 * mesh.side_lengths, d1, d2,
        rule.nodes, rule.weights, k.kappa)
    _check_proximity(min_dist, k, "patch sample point")
    return RadiationOperator(blocks=blocks, r=r, kind=f"patch(N_q={rule.order})")


def radiated_field(op: RadiationOperator, matrix: EmbeddedCurrentMatrix,
                   weights: PortWeights) -> np.ndarray:
    """e(r) = sum_k K_k(r) M_(k) w, a complex 3-vector."""
    if op.n_patches != matrix.n_patches:
        raise ValueError(
            f"operator has {op.n_patches} blocks, current matrix {matrix.n_patches}")
    if weights.w.shape[0] != matrix.n_ports:
        raise ValueError(
            f"{weights.w.shape[0]} weights for {matrix.n_ports} ports")
    moments = matrix.blocks3() @ weights.w
    return np.einsum("kij,kj->i", op.blocks, moments)


def scalar_field(field, pol: Polarization) -> complex:
    """Received scalar u_r^H e(r)."""
    field = np.asarray(field)
    if field.shape != (3,):
        raise ValueError("field must be a 3-vector")
    return complex(np.vdot(pol.u_r, field))


def steering_matrix(op: RadiationOperator,
                    matrix: EmbeddedCurrentMatrix) -> np.ndarray:
    """3 x N matrix whose column n is the field of port n at unit drive."""
    if op.n_patches != matrix.n_patches:
        raise ValueError(
            f"operator has {op.n_patches} blocks, current matrix {matrix.n_patches}")
    return np.einsum("kij,kjn->in", op.blocks, matrix.blocks3())
