"""Transmit-surface meshes of planar patches and local tangent frames.

Arrays, not object soup: a SurfaceMesh stores K patch centroids, areas,
normals and element indices as parallel read-only arrays (plus the
design wavelength), with a Patch accessor for single-patch use.  All
mesh types are immutable after construction and safe for concurrent
reads.

Array elements are modeled as thin flat strips of zero thickness: the
radiation operators only consume centroid, area and local frame, so a
strip subdivided into square patches fully describes the geometry.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateCurrentError

# Relative threshold (scaled by ||Re M||_F) below which the mean
# current is considered to cancel and the SVD fallback is used.
EPS_DIR = 1e-9

# Sub-wavelength element budget: warn when a patch area exceeds
# wavelength^2 / 100, the regime the patch operator is tuned for.
AREA_BUDGET_FACTOR = 100.0


@dataclass(frozen=True)
class Patch:
    """One planar mesh patch: centroid, area, outward normal, side."""

    centroid: np.ndarray
    area: float
    normal: np.ndarray
    side_length: float


@dataclass(frozen=True)
class TangentFrame:
    """Per-patch orthonormal in-plane pair (d1 dominant, d2 = n x d1)."""

    d1: np.ndarray
    d2: np.ndarray


class SurfaceMesh:
    """K planar patches discretizing the transmit surface.

    Parameters
    ----------
    centroids : (K, 3) float array
    areas : (K,) positive float array
    normals : (K, 3) unit float array
    element_index : (K,) int array mapping each patch to its array element
    wavelength : design wavelength in meters
    """

    def __init__(self, centroids, areas, normals, element_index, wavelength):
        centroids = np.ascontiguousarray(centroids, dtype=float)
        areas = np.ascontiguousarray(areas, dtype=float)
        normals = np.ascontiguousarray(normals, dtype=float)
        element_index = np.ascontiguousarray(element_index, dtype=np.int64)
        if centroids.ndim != 2 or centroids.shape[1] != 3 or centroids.shape[0] < 1:
            raise ValueError("centroids must be a (K, 3) array with K >= 1")
        k = centroids.shape[0]
        if areas.shape != (k,) or normals.shape != (k, 3) or element_index.shape != (k,):
            raise ValueError("mesh arrays have inconsistent lengths")
        if wavelength <= 0.0:
            raise ValueError("wavelength must be positive")
        if np.any(areas <= 0.0):
            raise ValueError("all patch areas must be positive")
        norm_err = np.abs(np.linalg.norm(normals, axis=1) - 1.0)
        if np.any(norm_err > 1e-12):
            raise ValueError("patch normals must be unit vectors (within 1e-12)")

        budget = wavelength * wavelength / AREA_BUDGET_FACTOR
        if np.any(areas > budget):
            warnings.warn(
                f"{int(np.sum(areas > budget))} of {k} patch areas exceed the "
                f"sub-wavelength budget wavelength^2/100 = {budget:.3e} m^2; "
                "patch-operator accuracy claims assume smaller elements",
                stacklevel=2,
            )

        self.centroids = centroids
        self.areas = areas
        self.normals = normals
        self.element_index = element_index
        self.wavelength = float(wavelength)
        self.side_lengths = np.sqrt(areas)
        for arr in (self.centroids, self.areas, self.normals,
                    self.element_index, self.side_lengths):
            arr.flags.writeable = False

    @property
    def n_patches(self) -> int:
        return self.centroids.shape[0]

    @property
    def n_elements(self) -> int:
        return int(self.element_index.max()) + 1

    def patch(self, k: int) -> Patch:
        return Patch(
            centroid=self.centroids[k],
            area=float(self.areas[k]),
            normal=self.normals[k],
            side_length=float(self.side_lengths[k]),
        )

    def aperture_diameter(self) -> float:
        """Diagonal of the centroid bounding box (aperture size proxy)."""
        span = self.centroids.max(axis=0) - self.centroids.min(axis=0)
        return float(np.sqrt(span @ span))

    def __eq__(self, other):
        if not isinstance(other, SurfaceMesh):
            return NotImplemented
        return (
            self.wavelength == other.wavelength
            and np.array_equal(self.centroids, other.centroids)
            and np.array_equal(self.areas, other.areas)
            and np.array_equal(self.normals, other.normals)
            and np.array_equal(self.element_index, other.element_index)
        )


def build_planar_array_mesh(rows, cols, spacing, element_length,
                            segments_per_element, wavelength) -> SurfaceMesh:
    """Mesh a rows x cols planar array in the yz-plane, normals along +x.

    Elements are z-directed strips of length ``element_length`` placed
    on a yz grid with pitch ``spacing`` (columns along y, rows along z).
    Element ordering is row-major: element = row * cols + col.  Each
    element is split into ``segments_per_element`` square patches of
    side element_length/segments_per_element, ordered by ascending z.
    Centroids are centered so the array centroid sits at the origin.
    """
    if not (isinstance(rows, (int, np.integer)) and isinstance(cols, (int, np.integer))):
        raise ValueError("rows and cols must be integers")
    if rows < 1 or cols < 1:
        raise ValueError("rows and cols must be >= 1")
    if not isinstance(segments_per_element, (int, np.integer)) or segments_per_element < 1:
        raise ValueError("segments_per_element must be an integer >= 1")
    if spacing <= 0.0 or element_length <= 0.0 or wavelength <= 0.0:
        raise ValueError("spacing, element_length and wavelength must be positive")

    m = int(segments_per_element)
    seg = element_length / m
    centroids = []
    element_index = []
    for r in range(rows):
        z_c = (r - (rows - 1) / 2.0) * spacing
        for c in range(cols):
            y_c = (c - (cols - 1) / 2.0) * spacing
            e = r * cols + c
            for j in range(m):
                z_j = z_c + (j - (m - 1) / 2.0) * seg
                centroids.append((0.0, y_c, z_j))
                element_index.append(e)
    k = len(centroids)
    return SurfaceMesh(
        centroids=np.array(centroids, dtype=float),
        areas=np.full(k, seg * seg),
        normals=np.tile(np.array([1.0, 0.0, 0.0]), (k, 1)),
        element_index=np.array(element_index),
        wavelength=wavelength,
    )


def build_linear_array_mesh(n_elements, spacing, element_length,
                            segments_per_element, wavelength) -> SurfaceMesh:
    """Mesh an n-element linear array along y (single row of strips)."""
    if not isinstance(n_elements, (int, np.integer)) or n_elements < 1:
        raise ValueError("n_elements must be an integer >= 1")
    return build_planar_array_mesh(
        rows=1, cols=int(n_elements), spacing=spacing,
        element_length=element_length,
        segments_per_element=segments_per_element, wavelength=wavelength,
    )


def _fix_svd_sign(v: np.ndarray) -> np.ndarray:
    """Make the largest-magnitude component positive (SVD sign is free)."""
    if v[np.argmax(np.abs(v))] < 0.0:
        return -v
    return v


def compute_tangent_frame(patch: Patch, m_block: np.ndarray) -> TangentFrame:
    """Local frame from a patch's 3 x N embedded-current block.

    d1 is the normalized column sum of Re{m_block} (the mean current
    direction); if that sum cancels below EPS_DIR * ||Re m_block||_F,
    the dominant left singular vector of Re{m_block} is used instead
    with its sign fixed deterministically.  d2 = normalize(n x d1).
    """
    m_block = np.asarray(m_block)
    if m_block.ndim != 2 or m_block.shape[0] != 3:
        raise ValueError("current block must have shape (3, N)")
    real = np.real(m_block).astype(float)
    frob = float(np.linalg.norm(real))
    if frob == 0.0:
        raise DegenerateCurrentError("patch current block has zero real part")

    mean = real.sum(axis=1)
    mean_norm = float(np.linalg.norm(mean))
    if mean_norm > EPS_DIR * frob:
        d1 = mean / mean_norm
    else:
        u, _, _ = np.linalg.svd(real)
        d1 = _fix_svd_sign(u[:, 0])

    c = np.cross(patch.normal, d1)
    c_norm = float(np.linalg.norm(c))
    if c_norm <= 1e-12:
        raise DegenerateCurrentError("current direction is parallel to the patch normal")
    return TangentFrame(d1=d1, d2=c / c_norm)


def compute_tangent_frames(mesh: SurfaceMesh, m: np.ndarray):
    """Frames for every patch from the stacked 3K x N current matrix.

    Returns (d1, d2) as (K, 3) arrays in patch order.  The mean-current
    fast path is vectorized; the rare SVD fallback runs per patch.
    """
    m = np.asarray(m)
    k = mesh.n_patches
    if m.shape[0] != 3 * k:
        raise ValueError(f"current matrix has {m.shape[0]} rows, expected {3 * k}")
    blocks = np.real(m).reshape(k, 3, -1)
    frob = np.linalg.norm(blocks, axis=(1, 2))
    if np.any(frob == 0.0):
        bad = int(np.argmax(frob == 0.0))
        raise DegenerateCurrentError(f"patch {bad} current block has zero real part")
    means = blocks.sum(axis=2)
    mean_norms = np.linalg.norm(means, axis=1)

    d1 = np.empty((k, 3))
    fast = mean_norms > EPS_DIR * frob
    d1[fast] = means[fast] / mean_norms[fast, np.newaxis]
    for idx in np.flatnonzero(~fast):
        u, _, _ = np.linalg.svd(blocks[idx])
        d1[idx] = _fix_svd_sign(u[:, 0])

    c = np.cross(mesh.normals, d1)
    c_norms = np.linalg.norm(c, axis=1)
    if np.any(c_norms <= 1e-12):
        bad = int(np.argmax(c_norms <= 1e-12))
        raise DegenerateCurrentError(
            f"patch {bad} current direction is parallel to its normal")
    return d1, c / c_norms[:, np.newaxis]


def save_mesh_csv(mesh: SurfaceMesh, path) -> None:
    """Write the mesh in the interchange format (17 significant digits)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["sx", "sy", "sz", "area", "nx", "ny", "nz", "element_index"])
        for i in range(mesh.n_patches):
            s = mesh.centroids[i]
            n = mesh.normals[i]
            writer.writerow(
                [f"{v:.17g}" for v in (s[0], s[1], s[2], mesh.areas[i],
                                       n[0], n[1], n[2])]
                + [int(mesh.element_index[i])]
            )


def load_mesh_csv(path, wavelength: float) -> SurfaceMesh:
    """Read a mesh written by save_mesh_csv.

    The interchange format carries no wavelength, so it must be
    supplied; normals are required columns because imported meshes give
    no other way to orient the patches.
    """
    expected = ["sx", "sy", "sz", "area", "nx", "ny", "nz", "element_index"]
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != expected:
            raise ValueError(
                f"{path}: expected header {','.join(expected)}, got {header}")
        rows = [row for row in reader if row]
    if not rows:
        raise ValueError(f"{path}: no patch rows")
    data = np.array([[float(v) for v in row[:7]] for row in rows])
    element_index = np.array([int(row[7]) for row in rows])
    return SurfaceMesh(
        centroids=data[:, 0:3],
        areas=data[:, 3],
        normals=data[:, 4:7],
        element_index=element_index,
        wavelength=wavelength,
    )
