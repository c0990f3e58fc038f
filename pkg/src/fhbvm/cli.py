"""Command-line front end: solve built-in problems, emit trajectory and
diagnostics CSVs, compute accuracy in mescd, generate doubled-mesh references,
and produce work-precision sweep tables.

Mesh flags use the library's convention: --N is the total step count, --mu the
graded step count, --rho the coarsening integer.  The uniform-phase equivalent
count is M = N - mu + rho with uniform step h = T/M; a run quoted as
"M with mu, rho" in uniform-count convention corresponds to --N M+mu-rho here.
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from .errors import (
    FhbvmError,
    InvalidParameterError,
    StepFailureError,
    UnsupportedProblemError,
)
from .mesh import build_mesh
from .mop_quadrature import build_quadrature, phi_nodes, select_qk
from .problems import PROBLEM_NAMES, registry
from .solver import SolverConfig, Trajectory, advance, dense_eval, mescd

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_SOLVER = 3
EXIT_QUADRATURE = 4


def _fmt(value: float) -> str:
    return repr(float(value))


def _write_trajectory(path: str, traj: Trajectory) -> None:
    m = traj.values.shape[1]
    with open(path, "w") as fh:
        fh.write("t," + ",".join(f"y{i + 1}" for i in range(m)) + "\n")
        for n in range(traj.n_completed + 1):
            row = [traj.mesh.points[n]] + list(traj.values[n])
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _write_diagnostics(path: str, traj: Trajectory) -> None:
    with open(path, "w") as fh:
        fh.write("step,h,iter_kind,iterations,residual_norm\n")
        for d in traj.diagnostics:
            fh.write(
                f"{d.step},{_fmt(d.h)},{d.kind},{d.iterations},{_fmt(d.residual_norm)}\n"
            )


def _accuracy_summary(traj: Trajectory) -> list[str]:
    parts = []
    problem = traj.problem
    endpoint = traj.values[traj.n_completed]
    parts.append("endpoint=" + ";".join(_fmt(v) for v in endpoint))
    if problem.exact is not None and traj.n_completed == traj.mesh.N:
        reference = problem.exact(np.asarray(traj.mesh.points))
        parts.append(f"mescd={mescd(traj.values, reference):.2f}")
    elif problem.reference_endpoint is not None and traj.n_completed == traj.mesh.N:
        parts.append(f"mescd={mescd(endpoint, problem.reference_endpoint):.2f}")
    return parts


def _run_once(problem, args, n_total: int):
    mesh = build_mesh(problem.T, n_total, args.mu, args.rho)
    config = SolverConfig(s=args.s, mode=args.mode)
    quad = build_quadrature(problem.alphas, config.s)
    start = time.perf_counter()
    traj = advance(problem, quad, mesh, config)
    elapsed = time.perf_counter() - start
    return traj, elapsed


def cmd_solve(args) -> int:
    problem = registry(args.problem)
    if args.T is not None:
        problem = _override_T(problem, args.T)
    try:
        traj, elapsed = _run_once(problem, args, args.N)
    except StepFailureError as exc:
        if exc.trajectory is not None and args.out:
            _write_trajectory(args.out, exc.trajectory)
        if exc.trajectory is not None and args.diag:
            _write_diagnostics(args.diag, exc.trajectory)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    if args.out:
        _write_trajectory(args.out, traj)
    if args.diag:
        _write_diagnostics(args.diag, traj)
    parts = [
        f"problem={args.problem}",
        f"N={args.N}",
        f"mu={args.mu}",
        f"rho={args.rho}",
        f"s={args.s}",
        f"mode={args.mode}",
        f"seconds={elapsed:.3f}",
    ] + _accuracy_summary(traj)
    print(" ".join(parts))
    return EXIT_OK


def _override_T(problem, T: float):
    from dataclasses import replace

    if T <= 0:
        raise InvalidParameterError("final time must be positive")
    return replace(problem, T=float(T))


def cmd_reference(args) -> int:
    problem = registry(args.problem)
    if args.T is not None:
        problem = _override_T(problem, args.T)
    m_base = args.N - args.mu + args.rho
    if m_base < 1:
        raise InvalidParameterError("N - mu + rho must be at least 1")
    runs = []
    for level in range(args.doublings + 1):
        n_total = m_base * 2**level + args.mu - args.rho
        traj, elapsed = _run_once(problem, args, n_total)
        runs.append((n_total, traj, elapsed))
        print(f"level={level} N={n_total} seconds={elapsed:.3f}")
    if len(runs) > 1:
        print("level,N,self_mescd,seconds")
        for level in range(len(runs) - 1):
            n_total, traj, elapsed = runs[level]
            finer = runs[level + 1][1]
            ref = np.array([dense_eval(finer, t) for t in traj.mesh.points])
            acc = mescd(traj.values, ref)
            print(f"{level},{n_total},{acc:.2f},{elapsed:.3f}")
    if args.out:
        coarse = runs[0][1]
        finest = runs[-1][1]
        m = finest.values.shape[1]
        with open(args.out, "w") as fh:
            fh.write("t," + ",".join(f"y{i + 1}" for i in range(m)) + "\n")
            for t in coarse.mesh.points:
                row = [t] + list(dense_eval(finest, t))
                fh.write(",".join(_fmt(v) for v in row) + "\n")
    return EXIT_OK


def cmd_sweep(args) -> int:
    problem = registry(args.problem)
    if args.T is not None:
        problem = _override_T(problem, args.T)
    n_list = [int(tok) for tok in args.N.split(",") if tok]
    reference_traj = None
    if problem.exact is None and n_list:
        ref_total = 2 * (max(n_list) - args.mu + args.rho) + args.mu - args.rho
        reference_traj, _ = _run_once(problem, args, ref_total)
    rows = []
    for n_total in n_list:
        config = f"N={n_total};mu={args.mu};rho={args.rho};s={args.s};mode={args.mode}"
        try:
            traj, elapsed = _run_once(problem, args, n_total)
        except FhbvmError:
            rows.append((config, "", "", "failed"))
            continue
        if problem.exact is not None:
            ref = problem.exact(np.asarray(traj.mesh.points))
        else:
            ref = np.array([dense_eval(reference_traj, t) for t in traj.mesh.points])
        rows.append((config, f"{mescd(traj.values, ref):.3f}", f"{elapsed:.4f}", "ok"))
    lines = ["config,mescd,seconds,status"] + [",".join(r) for r in rows]
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_quadrature(args) -> int:
    alphas = [float(tok) for tok in args.alphas.split(",") if tok]
    quad = build_quadrature(alphas, args.s)
    q, k = select_qk(len(alphas), args.s)
    from math import gamma as _gamma

    worst = 0.0
    for i, a in enumerate(quad.alphas):
        for d in range(k + q):
            moment = _gamma(d + 1.0) * _gamma(a + 1.0) / _gamma(d + a + 1.0)
            worst = max(worst, abs(float(quad.weights[i] @ quad.abscissae**d) - moment))
    header = "rho,c_rho," + ",".join(f"b_rho_{i + 1}" for i in range(quad.nu))
    lines = [header]
    for r in range(quad.k):
        vals = [quad.abscissae[r]] + [quad.weights[i][r] for i in range(quad.nu)]
        lines.append(f"{r + 1}," + ",".join(_fmt(v) for v in vals))
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(
        f"q={q} k={k} phi={phi_nodes(len(alphas), args.s)} "
        f"max_moment_residual={worst:.3e} min_weight={quad.min_weight:.3e}",
        file=sys.stderr,
    )
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fhbvm",
        description="Spectrally accurate solver for multi-order Caputo systems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_mesh_flags(p, with_problem=True):
        if with_problem:
            p.add_argument("--problem", required=True, choices=PROBLEM_NAMES)
            p.add_argument("--T", type=float, default=None,
                           help="override the problem's final time")
        p.add_argument("--mu", type=int, default=1,
                       help="graded step count (default 1)")
        p.add_argument("--rho", type=int, default=1,
                       help="coarsening integer (default 1)")
        p.add_argument("--s", type=int, default=22,
                       help="expansion degree count (default 22)")
        p.add_argument("--mode", default="auto",
                       choices=("auto", "fp", "newton", "blended"))
        p.add_argument("--out", default=None, help="output CSV path")

    p_solve = sub.add_parser("solve", help="run one problem and write its trajectory")
    add_mesh_flags(p_solve)
    p_solve.add_argument("--N", type=int, required=True, help="total step count")
    p_solve.add_argument("--diag", default=None, help="diagnostics CSV path")
    p_solve.set_defaults(func=cmd_solve)

    p_ref = sub.add_parser(
        "reference",
        help="run on consecutively doubled uniform-phase meshes and report self-accuracy",
    )
    add_mesh_flags(p_ref)
    p_ref.add_argument("--N", type=int, required=True, help="total step count of the base run")
    p_ref.add_argument("--doublings", type=int, default=0)
    p_ref.set_defaults(func=cmd_reference)

    p_sweep = sub.add_parser("sweep", help="work-precision table over several step counts")
    add_mesh_flags(p_sweep)
    p_sweep.add_argument("--N", required=True,
                         help="comma-separated list of total step counts")
    p_sweep.set_defaults(func=cmd_sweep)

    p_quad = sub.add_parser("quadrature", help="dump shared abscissae and per-order weights")
    p_quad.add_argument("--alphas", required=True,
                        help="comma-separated weight exponents")
    p_quad.add_argument("--s", type=int, default=22)
    p_quad.add_argument("--out", default=None, help="output CSV path")
    p_quad.set_defaults(func=cmd_quadrature)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (InvalidParameterError, UnsupportedProblemError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except StepFailureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except FhbvmError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_QUADRATURE


if __name__ == "__main__":
    sys.exit(main())
