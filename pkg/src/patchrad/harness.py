"""Distance-sweep accuracy studies, cost benchmarks, and CSV export.

A sweep walks log-spaced observation distances along a fixed
(azimuth, elevation) ray from the array centroid, compares the
point-source and patch operator fields against the fine-quadrature
reference at each distance, and records both relative errors.  The
benchmark times both operators and counts their Green evaluations over
a range of port counts.  All outputs are deterministic CSV: fixed
column order, 17 significant digits, metadata as '#'-prefixed header
lines, no timestamps.
"""

from __future__ import annotations

import configparser
import subprocess
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import kernels
from .errors import ZeroReferenceError
from .geometry import (SurfaceMesh, build_linear_array_mesh,
                       build_planar_array_mesh, compute_tangent_frames)
from .greens import Wavenumber
from .oracle import (coupling_matrix, dipole_array, reference_field,
                     synth_embedded_current_matrix)
from .quadrature import gauss_legendre
from .radiation import (EmbeddedCurrentMatrix, PortWeights,
                        patch_operator, point_source_operator, radiated_field)

# 5 GHz free-space wavelength, the scale all shipped configs use.
DEFAULT_WAVELENGTH = 299792458.0 / 5e9

# Default sweep grid, in wavelengths.  The lower bound keeps every
# observation point more than a wavelength clear of the default array
# surfaces; closer in, reactive-zone cancellations make the centroid
# rule's error erratic and model ordering is not meaningful.
DEFAULT_DISTANCE_RANGE = (1.5, 200.0)
DEFAULT_DISTANCE_COUNT = 40


@dataclass(frozen=True)
class SweepConfig:
    """Resolved sweep description; lengths in meters unless suffixed."""

    geometry: str = "linear"
    rows: int = 1
    cols: int = 8
    spacing: float = DEFAULT_WAVELENGTH / 2
    element_length: float = DEFAULT_WAVELENGTH / 2
    segments_per_element: int = 72
    wavelength: float = DEFAULT_WAVELENGTH
    n_q: int = 2
    distances: np.ndarray = field(default_factory=lambda: DEFAULT_WAVELENGTH *
                                  np.geomspace(*DEFAULT_DISTANCE_RANGE,
                                               DEFAULT_DISTANCE_COUNT))
    azimuth_deg: float = 120.0
    elevation_deg: float = 30.0
    polarization: tuple = (0.0, 0.0, 1.0)
    weights: str = "uniform"
    coupling: str = "none"
    seed: int = 0
    oracle_refinement_factor: int = 8
    threads: int = 1

    def __post_init__(self):
        if self.geometry not in ("linear", "planar"):
            raise ValueError("geometry must be linear or planar")
        if self.geometry == "linear" and self.rows != 1:
            raise ValueError("linear geometry requires rows = 1")
        d = np.asarray(self.distances, dtype=float)
        if d.ndim != 1 or d.size < 1 or np.any(d <= 0.0) or np.any(np.diff(d) <= 0.0):
            raise ValueError("distances must be positive and strictly increasing")
        d.flags.writeable = False
        object.__setattr__(self, "distances", d)
        if not 0.0 <= self.azimuth_deg < 360.0:
            raise ValueError("azimuth must be in [0, 360)")
        if not -90.0 <= self.elevation_deg <= 90.0:
            raise ValueError("elevation must be in [-90, 90]")
        if self.oracle_refinement_factor < 8:
            raise ValueError("oracle refinement factor must be >= 8")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")

    @property
    def n_ports(self) -> int:
        return self.rows * self.cols

    def direction(self) -> np.ndarray:
        """Unit observation direction: azimuth from +x toward +y in the
        xy-plane, elevation from the xy-plane toward +z."""
        az = np.deg2rad(self.azimuth_deg)
        el = np.deg2rad(self.elevation_deg)
        return np.array([np.cos(el) * np.cos(az),
                         np.cos(el) * np.sin(az),
                         np.sin(el)])

    def metadata_items(self) -> list:
        items = [
            ("geometry", self.geometry), ("rows", self.rows), ("cols", self.cols),
            ("spacing_m", fmt_float(self.spacing)),
            ("element_length_m", fmt_float(self.element_length)),
            ("segments_per_element", self.segments_per_element),
            ("wavelength_m", fmt_float(self.wavelength)),
            ("n_q", self.n_q),
            ("azimuth_deg", fmt_float(self.azimuth_deg)),
            ("elevation_deg", fmt_float(self.elevation_deg)),
            ("polarization", ",".join(fmt_float(v) for v in self.polarization)),
            ("weights", self.weights), ("coupling", self.coupling),
            ("seed", self.seed),
            ("oracle_refinement_factor", self.oracle_refinement_factor),
        ]
        return items


def fmt_float(v: float) -> str:
    return f"{float(v):.17g}"


def build_mesh(cfg: SweepConfig) -> SurfaceMesh:
    if cfg.geometry == "linear":
        return build_linear_array_mesh(
            cfg.cols, cfg.spacing, cfg.element_length,
            cfg.segments_per_element, cfg.wavelength)
    return build_planar_array_mesh(
        cfg.rows, cfg.cols, cfg.spacing, cfg.element_length,
        cfg.segments_per_element, cfg.wavelength)


def resolve_weights(cfg: SweepConfig) -> PortWeights:
    """Weights string to a vector: 'uniform' or a comma list of
    complex literals, one per port."""
    if cfg.weights == "uniform":
        return PortWeights(np.ones(cfg.n_ports, dtype=complex))
    parts = [p.strip() for p in cfg.weights.split(",") if p.strip()]
    if len(parts) != cfg.n_ports:
        raise ValueError(
            f"expected {cfg.n_ports} weights, got {len(parts)} in {cfg.weights!r}")
    return PortWeights(np.array([complex(p) for p in parts]))


def relative_error(e_sim, e_model) -> float:
    """||e_sim - e_model|| / ||e_sim||, the scale-invariant field error."""
    e_sim = np.asarray(e_sim, dtype=complex)
    e_model = np.asarray(e_model, dtype=complex)
    scale = np.linalg.norm(e_sim)
    if scale == 0.0:
        raise ZeroReferenceError("reference field is zero; relative error undefined")
    return float(np.linalg.norm(e_sim - e_model) / scale)


def rayleigh_distance(aperture: float, wavelength: float) -> float:
    """2 D^2 / wavelength, the conventional far-field boundary."""
    if aperture <= 0.0 or wavelength <= 0.0:
        raise ValueError("aperture and wavelength must be positive")
    return 2.0 * aperture * aperture / wavelength


def git_describe() -> str:
    try:
        out = subprocess.run(
            ["git", "describe", "--always", "--dirty"],
            capture_output=True, text=True, timeout=10)
        if out.returncode == 0 and out.stdout.strip():
            return out.stdout.strip()
    except OSError:
        pass
    from . import __version__
    return f"patchrad-{__version__}"


@dataclass(frozen=True)
class ErrorCurve:
    """Per-distance relative errors of both models plus provenance."""

    distances: np.ndarray
    err_point_source: np.ndarray
    err_patch: np.ndarray
    config: SweepConfig
    rayleigh_distance_m: float
    provenance: str

    def __post_init__(self):
        n = self.distances.shape[0]
        if self.err_point_source.shape != (n,) or self.err_patch.shape != (n,):
            raise ValueError("error arrays must match the distance grid")
        if np.any(self.err_point_source < 0.0) or np.any(self.err_patch < 0.0):
            raise ValueError("relative errors must be >= 0")


def run_distance_sweep(cfg: SweepConfig) -> ErrorCurve:
    """Sweep the configured ray, one (err_ps, err_patch) pair per distance.

    The reference field passes its doubling convergence gate at every
    distance or the sweep fails; proximity guards fire if the closest
    distance reaches within wavelength/100 of the surface.
    """
    mesh = build_mesh(cfg)
    elements = dipole_array(mesh)
    matrix = synth_embedded_current_matrix(mesh, elements, cfg.coupling, cfg.seed)
    frames = compute_tangent_frames(mesh, matrix.m)
    weights = resolve_weights(cfg)
    k = Wavenumber.from_wavelength(cfg.wavelength)
    rule = gauss_legendre(cfg.n_q)
    origin = mesh.centroids.mean(axis=0)
    direction = cfg.direction()
    amplitudes = coupling_matrix(len(elements), cfg.coupling, cfg.seed) @ weights.w
    refinement = cfg.oracle_refinement_factor * cfg.segments_per_element

    def at_distance(d: float):
        r = origin + d * direction
        ref = reference_field(r, elements, k, refinement, amplitudes=amplitudes)
        e_ps = radiated_field(point_source_operator(r, mesh, k), matrix, weights)
        e_patch = radiated_field(
            patch_operator(r, mesh, frames, rule, k), matrix, weights)
        return (relative_error(ref.e_sim, e_ps), relative_error(ref.e_sim, e_patch))

    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            pairs = list(pool.map(at_distance, cfg.distances))
    else:
        pairs = [at_distance(d) for d in cfg.distances]

    err_ps = np.array([p[0] for p in pairs])
    err_patch = np.array([p[1] for p in pairs])
    return ErrorCurve(
        distances=cfg.distances, err_point_source=err_ps, err_patch=err_patch,
        config=cfg,
        rayleigh_distance_m=rayleigh_distance(mesh.aperture_diameter(),
                                              cfg.wavelength),
        provenance=git_describe())


@dataclass(frozen=True)
class CostRow:
    n_ports: int
    n_patches: int
    evals_point_source: int
    evals_patch: int
    eval_ratio: int
    time_point_source_s: float
    time_patch_s: float


@dataclass(frozen=True)
class CostTable:
    rows: tuple
    n_q: int
    segments_per_element: int
    wavelength: float
    backend: str
    repeats: int


def run_cost_benchmark(port_counts=(2, 4, 8, 16, 32), *,
                       segments_per_element: int = 72, n_q: int = 2,
                       wavelength: float = DEFAULT_WAVELENGTH,
                       repeats: int = 11) -> CostTable:
    """Time both operators and count Green evaluations per port count.

    The evaluation counts are exact (instrumented kernels): K for the
    point-source operator and n_q^2 K for the patch operator, so the
    count ratio at n_q = 2 is exactly 4 regardless of the port count.
    Wall times are medians over ``repeats`` runs at one observation
    point 10 wavelengths from the array along the default ray.
    """
    k = Wavenumber.from_wavelength(wavelength)
    rule = gauss_legendre(n_q)
    base = SweepConfig()
    rows = []
    for n in port_counts:
        mesh = build_linear_array_mesh(
            int(n), wavelength / 2, wavelength / 2,
            segments_per_element, wavelength)
        matrix = synth_embedded_current_matrix(mesh, dipole_array(mesh))
        frames = compute_tangent_frames(mesh, matrix.m)
        r = mesh.centroids.mean(axis=0) + 10.0 * wavelength * base.direction()

        kernels.reset_greens_eval_count()
        point_source_operator(r, mesh, k)
        evals_ps = kernels.greens_eval_count()
        kernels.reset_greens_eval_count()
        patch_operator(r, mesh, frames, rule, k)
        evals_patch = kernels.greens_eval_count()
        if evals_patch % evals_ps != 0:
            raise AssertionError("patch eval count is not a multiple of baseline")

        t_ps = _median_time(lambda: point_source_operator(r, mesh, k), repeats)
        t_patch = _median_time(
            lambda: patch_operator(r, mesh, frames, rule, k), repeats)
        rows.append(CostRow(
            n_ports=int(n), n_patches=mesh.n_patches,
            evals_point_source=evals_ps, evals_patch=evals_patch,
            eval_ratio=evals_patch // evals_ps,
            time_point_source_s=t_ps, time_patch_s=t_patch))
    return CostTable(rows=tuple(rows), n_q=n_q,
                     segments_per_element=segments_per_element,
                     wavelength=wavelength, backend=kernels.BACKEND,
                     repeats=repeats)


def _median_time(fn, repeats: int) -> float:
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return float(np.median(times))


def export_results(result, path, format: str = "csv") -> None:
    """Write an ErrorCurve or CostTable as deterministic CSV."""
    if format != "csv":
        raise ValueError(f"unknown export format: {format!r}")
    if isinstance(result, ErrorCurve):
        lines = [f"# {key} = {value}" for key, value in
                 result.config.metadata_items()]
        lines.append(f"# rayleigh_distance_m = {fmt_float(result.rayleigh_distance_m)}")
        lines.append(f"# provenance = {result.provenance}")
        lines.append("distance_m,rel_err_point_source,rel_err_patch")
        for d, e1, e2 in zip(result.distances, result.err_point_source,
                             result.err_patch):
            lines.append(f"{fmt_float(d)},{fmt_float(e1)},{fmt_float(e2)}")
    elif isinstance(result, CostTable):
        lines = [
            f"# n_q = {result.n_q}",
            f"# segments_per_element = {result.segments_per_element}",
            f"# wavelength_m = {fmt_float(result.wavelength)}",
            f"# backend = {result.backend}",
            f"# repeats = {result.repeats}",
            "n_ports,n_patches,green_evals_point_source,green_evals_patch,"
            "eval_ratio,time_point_source_s,time_patch_s",
        ]
        for row in result.rows:
            lines.append(
                f"{row.n_ports},{row.n_patches},{row.evals_point_source},"
                f"{row.evals_patch},{row.eval_ratio},"
                f"{fmt_float(row.time_point_source_s)},"
                f"{fmt_float(row.time_patch_s)}")
    else:
        raise TypeError(f"cannot export {type(result).__name__}")
    try:
        with open(path, "w", newline="") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise OSError(f"{path}: {exc}") from exc


def load_error_curve_csv(path):
    """Read back an exported sweep: (distances, err_ps, err_patch, metadata)."""
    metadata = {}
    rows = []
    header = None
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, _, value = line[1:].partition("=")
                metadata[key.strip()] = value.strip()
            elif header is None:
                header = line
                if header != "distance_m,rel_err_point_source,rel_err_patch":
                    raise ValueError(f"{path}: unexpected header {header!r}")
            else:
                rows.append([float(v) for v in line.split(",")])
    if header is None or not rows:
        raise ValueError(f"{path}: no data rows")
    data = np.array(rows)
    return data[:, 0], data[:, 1], data[:, 2], metadata


def config_from_ini(path, overrides=None) -> SweepConfig:
    """Build a SweepConfig from a key = value config file.

    Sections/keys (lengths in wavelengths unless noted):
      [array]  geometry, rows, cols, spacing, element_length,
               segments_per_element
      [sweep]  wavelength (meters), distance_min, distance_max,
               distance_count, azimuth_deg, elevation_deg, n_q,
               polarization (three comma floats), threads
      [feed]   weights, coupling, seed
      [oracle] refinement_factor
    ``overrides`` maps dotted keys ("sweep.n_q") to replacement strings.
    """
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    read = parser.read(path)
    if not read:
        raise FileNotFoundError(f"config file not found: {path}")
    if overrides:
        for dotted, value in overrides.items():
            section, _, key = dotted.partition(".")
            if not section or not key:
                raise ValueError(f"override {dotted!r} is not section.key")
            if not parser.has_section(section):
                parser.add_section(section)
            parser.set(section, key, value)

    def get(section, key, fallback):
        return parser.get(section, key, fallback=str(fallback))

    wavelength = float(get("sweep", "wavelength", DEFAULT_WAVELENGTH))
    dmin = float(get("sweep", "distance_min", DEFAULT_DISTANCE_RANGE[0]))
    dmax = float(get("sweep", "distance_max", DEFAULT_DISTANCE_RANGE[1]))
    count = int(get("sweep", "distance_count", DEFAULT_DISTANCE_COUNT))
    pol = tuple(float(v) for v in
                get("sweep", "polarization", "0,0,1").split(","))
    return SweepConfig(
        geometry=get("array", "geometry", "linear"),
        rows=int(get("array", "rows", 1)),
        cols=int(get("array", "cols", 8)),
        spacing=float(get("array", "spacing", 0.5)) * wavelength,
        element_length=float(get("array", "element_length", 0.5)) * wavelength,
        segments_per_element=int(get("array", "segments_per_element", 72)),
        wavelength=wavelength,
        n_q=int(get("sweep", "n_q", 2)),
        distances=wavelength * np.geomspace(dmin, dmax, count),
        azimuth_deg=float(get("sweep", "azimuth_deg", 120.0)),
        elevation_deg=float(get("sweep", "elevation_deg", 30.0)),
        polarization=pol,
        weights=get("feed", "weights", "uniform"),
        coupling=get("feed", "coupling", "none"),
        seed=int(get("feed", "seed", 0)),
        oracle_refinement_factor=int(get("oracle", "refinement_factor", 8)),
        threads=int(get("sweep", "threads", 1)),
    )
