"""Command-line front end.

Verbs: sweep, bench, validate-greens, validate-quadrature, export-mesh,
subspace.  Exit status is 0 on success, 2 for usage problems (bad
arguments, missing config file), 1 for runtime failures (validation
out of tolerance, proximity violations, convergence failures).
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .errors import PatchradError
from .feed import current_subspace_dimension
from .geometry import save_mesh_csv
from .greens import Wavenumber, dyadic_green, dyadic_green_fd_oracle, fd_step
from .harness import (SweepConfig, build_mesh, config_from_ini,
                      export_results, run_cost_benchmark, run_distance_sweep)
from .oracle import dipole_array, synth_embedded_current_matrix
from .quadrature import gauss_legendre


def _add_config_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="sweep config file (INI style)")
    parser.add_argument("--set", action="append", default=[], metavar="SEC.KEY=VAL",
                        help="override a config value, repeatable")
    parser.add_argument("--seed", type=int, default=None,
                        help="override the feed seed")
    parser.add_argument("--threads", type=int, default=None,
                        help="worker threads for the sweep")


def _load_config(args) -> SweepConfig:
    overrides = {}
    for item in args.set:
        dotted, sep, value = item.partition("=")
        if not sep or "." not in dotted:
            raise UsageError(f"--set needs section.key=value, got {item!r}")
        overrides[dotted.strip()] = value.strip()
    if args.seed is not None:
        overrides["feed.seed"] = str(args.seed)
    if args.threads is not None:
        overrides["sweep.threads"] = str(args.threads)
    if args.config is None:
        if overrides:
            raise UsageError("--set/--seed/--threads require --config")
        return SweepConfig()
    try:
        return config_from_ini(args.config, overrides)
    except FileNotFoundError as exc:
        raise UsageError(str(exc)) from exc


class UsageError(Exception):
    pass


def cmd_sweep(args) -> int:
    cfg = _load_config(args)
    curve = run_distance_sweep(cfg)
    if args.output:
        export_results(curve, args.output)
        print(f"wrote {len(curve.distances)} rows to {args.output}")
    else:
        print("distance_m,rel_err_point_source,rel_err_patch")
        for d, e1, e2 in zip(curve.distances, curve.err_point_source,
                             curve.err_patch):
            print(f"{d:.6e},{e1:.6e},{e2:.6e}")
    near = curve.distances < curve.rayleigh_distance_m
    print(f"rayleigh distance: {curve.rayleigh_distance_m:.6e} m "
          f"({int(near.sum())} of {near.size} samples below)")
    return 0


def cmd_bench(args) -> int:
    ports = tuple(int(p) for p in args.ports.split(","))
    table = run_cost_benchmark(ports, segments_per_element=args.segments,
                               n_q=args.n_q, repeats=args.repeats)
    if args.output:
        export_results(table, args.output)
        print(f"wrote {len(table.rows)} rows to {args.output}")
    print(f"backend: {table.backend}")
    print("ports  patches  evals_ps  evals_patch  ratio  t_ps[s]    t_patch[s]")
    for row in table.rows:
        print(f"{row.n_ports:5d}  {row.n_patches:7d}  {row.evals_point_source:8d}"
              f"  {row.evals_patch:11d}  {row.eval_ratio:5d}"
              f"  {row.time_point_source_s:.3e}  {row.time_patch_s:.3e}")
    return 0


def cmd_validate_greens(args) -> int:
    """Compare the analytic kernel to its finite-difference oracle on
    random geometries spanning kappa R in [0.1, 100]."""
    rng = np.random.default_rng(args.seed if args.seed is not None else 0)
    k = Wavenumber.from_wavelength(1.0)
    worst = 0.0
    for _ in range(args.pairs):
        u = rng.normal(size=3)
        u /= np.linalg.norm(u)
        kr = np.exp(rng.uniform(np.log(0.1), np.log(100.0)))
        r = (kr / k.kappa) * u
        g = dyadic_green(r, np.zeros(3), k)
        g_fd = dyadic_green_fd_oracle(r, np.zeros(3), k,
                                      fd_step(float(np.linalg.norm(r)), k))
        dev = np.linalg.norm(g - g_fd) / np.linalg.norm(g)
        worst = max(worst, float(dev))
    status = "ok" if worst < args.tol else "FAIL"
    print(f"greens check: {args.pairs} pairs, worst relative deviation "
          f"{worst:.3e} (tolerance {args.tol:g}) {status}")
    return 0 if worst < args.tol else 1


def cmd_validate_quadrature(args) -> int:
    """Check polynomial exactness of the Gauss-Legendre rules: order n
    must integrate x^p exactly for p <= 2n - 1."""
    worst = 0.0
    for n in range(1, args.max_order + 1):
        rule = gauss_legendre(n)
        for p in range(2 * n):
            exact = 0.0 if p % 2 else 2.0 / (p + 1)
            got = float(np.sum(rule.weights * rule.nodes ** p))
            worst = max(worst, abs(got - exact))
    status = "ok" if worst < args.tol else "FAIL"
    print(f"quadrature check: orders 1..{args.max_order}, worst exactness "
          f"defect {worst:.3e} (tolerance {args.tol:g}) {status}")
    return 0 if worst < args.tol else 1


def cmd_export_mesh(args) -> int:
    cfg = _load_config(args)
    mesh = build_mesh(cfg)
    save_mesh_csv(mesh, args.output)
    print(f"wrote {mesh.n_patches} patches ({mesh.n_elements} elements) "
          f"to {args.output}")
    return 0


def cmd_subspace(args) -> int:
    cfg = _load_config(args)
    mesh = build_mesh(cfg)
    matrix = synth_embedded_current_matrix(mesh, dipole_array(mesh),
                                           cfg.coupling, cfg.seed)
    dim = current_subspace_dimension(matrix, tol=args.tol)
    print(f"current subspace dimension: {dim} ({mesh.n_elements} ports)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="patchrad",
        description="near-field radiation model comparison harness")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="run a distance sweep")
    _add_config_options(p)
    p.add_argument("--output", help="write the error curve CSV here")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("bench", help="time both operators, count evaluations")
    p.add_argument("--ports", default="2,4,8,16,32",
                   help="comma list of port counts")
    p.add_argument("--segments", type=int, default=72,
                   help="patches per element")
    p.add_argument("--n-q", type=int, default=2, help="quadrature order")
    p.add_argument("--repeats", type=int, default=11,
                   help="timing repetitions (median reported)")
    p.add_argument("--output", help="write the cost table CSV here")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("validate-greens",
                       help="kernel vs finite-difference oracle")
    p.add_argument("--pairs", type=int, default=1000)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_validate_greens)

    p = sub.add_parser("validate-quadrature",
                       help="polynomial exactness of the quadrature rules")
    p.add_argument("--max-order", type=int, default=8)
    p.add_argument("--tol", type=float, default=1e-12)
    p.set_defaults(func=cmd_validate_quadrature)

    p = sub.add_parser("export-mesh", help="write the config's mesh as CSV")
    _add_config_options(p)
    p.add_argument("--output", required=True, help="mesh CSV path")
    p.set_defaults(func=cmd_export_mesh)

    p = sub.add_parser("subspace",
                       help="rank of the embedded current matrix")
    _add_config_options(p)
    p.add_argument("--tol", type=float, default=1e-8,
                   help="singular value cutoff relative to the largest")
    p.set_defaults(func=cmd_subspace)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"patchrad: {exc}", file=sys.stderr)
        return 2
    except (PatchradError, ValueError, OSError) as exc:
        print(f"patchrad: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
