"""Time the numba and numpy kernel backends side by side.

Both backend implementations are importable simultaneously, so this
script measures them in one process on identical inputs: centroid-rule
blocks and N_q=2 patch blocks over a range of mesh sizes.  Run with the
default backend selection so the numba variants are compiled:

    python3 benchmarks/compare_backends.py [--repeats 11]
"""

import argparse
import time

import numpy as np

from patchrad import kernels
from patchrad.geometry import build_linear_array_mesh, compute_tangent_frames
from patchrad.harness import DEFAULT_WAVELENGTH as LAM
from patchrad.oracle import dipole_array, synth_embedded_current_matrix
from patchrad.quadrature import gauss_legendre


def median_time(fn, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return float(np.median(times))


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=11)
    parser.add_argument("--ports", default="2,8,32,128",
                        help="comma list of array sizes")
    args = parser.parse_args()

    if kernels.patch_blocks_numba is None:
        raise SystemExit(
            "numba backend unavailable (PATCHRAD_BACKEND=numpy or numba "
            "not installed); nothing to compare")

    rule = gauss_legendre(2)
    kappa = 2.0 * np.pi / LAM
    print(f"active backend: {kernels.BACKEND}; median of {args.repeats} runs")
    print(f"{'ports':>6} {'patches':>8} {'op':>6} {'numpy [s]':>11} "
          f"{'numba [s]':>11} {'speedup':>8}")
    for n in (int(p) for p in args.ports.split(",")):
        mesh = build_linear_array_mesh(n, LAM / 2, LAM / 2, 72, LAM)
        matrix = synth_embedded_current_matrix(mesh, dipole_array(mesh))
        d1, d2 = compute_tangent_frames(mesh, matrix.m)
        r = mesh.centroids.mean(axis=0) + 10.0 * LAM * np.array([0.1, 0.7, 0.7])
        c = np.ascontiguousarray(mesh.centroids)
        half = np.ascontiguousarray(0.5 * mesh.side_lengths)

        cases = {
            "point": (lambda: kernels.point_blocks_numpy(r, c, kappa),
                      lambda: kernels.point_blocks_numba(r, c, kappa)),
            "patch": (lambda: kernels.patch_blocks_numpy(
                          r, c, half, d1, d2, rule.nodes, rule.weights, kappa),
                      lambda: kernels.patch_blocks_numba(
                          r, c, half, d1, d2, rule.nodes, rule.weights, kappa)),
        }
        for op, (f_np, f_nb) in cases.items():
            b_np = f_np()[0]
            b_nb = f_nb()[0]  # also serves as the JIT warmup call
            rel = np.linalg.norm(b_np - b_nb) / np.linalg.norm(b_np)
            assert rel < 1e-12, f"backend mismatch: {rel:.3e}"
            t_np = median_time(f_np, args.repeats)
            t_nb = median_time(f_nb, args.repeats)
            print(f"{n:>6} {mesh.n_patches:>8} {op:>6} {t_np:>11.3e} "
                  f"{t_nb:>11.3e} {t_np / t_nb:>8.2f}")


if __name__ == "__main__":
    main()
