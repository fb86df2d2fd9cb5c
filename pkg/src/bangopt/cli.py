"""Command-line interface.

    bangopt solve --problem robot-arm --method bb --mesh-tol 1e-6 \
        --initial-mesh 10x5 --sub-mesh 2x5 --out results/

Exit codes: 0 converged, 2 mesh tolerance not met, 3 solver failure.
"""

from __future__ import annotations

import argparse
import os
import sys

from .benchmarks import (
    BENCHMARK_NAMES,
    BenchmarkSpec,
    export_trajectory,
    report_table,
    run,
    write_metadata,
)
from .refine import SolveFailure

EXIT_OK = 0
EXIT_TOL = 2
EXIT_SOLVER = 3


def _mesh_pair(text: str) -> tuple[int, int]:
    try:
        k, n = text.lower().split("x")
        return int(k), int(n)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(
            f"expected INTERVALSxPOINTS (e.g. 10x5), got {text!r}"
        ) from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bangopt", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    ps = sub.add_parser("solve", help="run one benchmark problem")
    ps.add_argument("--problem", required=True, choices=BENCHMARK_NAMES)
    ps.add_argument("--method", default="bb", choices=("bb", "standard"))
    ps.add_argument("--mesh-tol", type=float, default=1e-6)
    ps.add_argument("--max-mesh-iterations", type=int, default=10)
    ps.add_argument("--initial-mesh", type=_mesh_pair, default=(10, 5), metavar="KxN")
    ps.add_argument("--sub-mesh", type=_mesh_pair, default=None, metavar="KxN")
    ps.add_argument("--nlp-tol", type=float, default=1e-9)
    ps.add_argument("--out", default=None, help="directory for trajectory.csv and meta.txt")
    ps.add_argument("--verbose", action="store_true")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    log = print if args.verbose else None
    sub_k, sub_n = args.sub_mesh if args.sub_mesh else (2, None)
    spec = BenchmarkSpec(
        name=args.problem,
        method=args.method,
        mesh_tol=args.mesh_tol,
        max_mesh_iterations=args.max_mesh_iterations,
        initial_intervals=args.initial_mesh[0],
        initial_points=args.initial_mesh[1],
        sub_intervals=sub_k,
        sub_points=sub_n,
        nlp_tolerance=args.nlp_tol,
        log=log,
    )
    try:
        report = run(spec)
    except SolveFailure as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        for rec in exc.history:
            print(
                f"  mesh {rec.index}: points={rec.n_collocation} error={rec.error:.3e}",
                file=sys.stderr,
            )
        return EXIT_SOLVER
    print(report_table([report]))
    print(f"objective = {report.objective:.12g}")
    if report.switch_times:
        times = ", ".join(f"{sw['time']:.9g}" for sw in report.switch_times)
        print(f"switch times = {times}")
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        export_trajectory(report, os.path.join(args.out, "trajectory.csv"))
        write_metadata(report, os.path.join(args.out, "meta.txt"))
        print(f"wrote {args.out}/trajectory.csv and {args.out}/meta.txt")
    return EXIT_OK if report.converged else EXIT_TOL


if __name__ == "__main__":
    sys.exit(main())
