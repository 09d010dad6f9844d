"""Command-line harness: gen / solve / verify / bench.

Exit codes: 0 success (or converged), 2 iteration budget exhausted, 64 usage
error, 1 anything else.  Traces and bench tables are CSV with a header row
and LF line endings; wall-clock columns are informational only.
"""

import argparse
import csv
import math
import os
import sys
import time

import numpy as np

from . import oracle
from .care import CareProblem, SignOptions, care_sda_solve, hamiltonian, newton_care_solve, sign_solve
from .dare import DareProblem, dare_fixed_point_solve, dare_residual, sda_solve, wiener_hopf_check
from .errors import OverflowGuard, RegionCountMismatch, RiccatiError
from .generators import GeneratorSpec, gen_problem
from .io import load_problem, save_problem, to_problem
from .lyapunov import LyapunovProblem, ShiftSequence, adi_solve, cayley_to_stein, lr_adi_solve, lyap_residual
from .nme import NmeProblem, cr_step, cyclic_reduction_solve, nme_fixed_point_solve, nme_residual, spectral_factorize, uqme_residual
from .reporting import SolveOptions
from .stein import SteinProblem, smith_solve, squared_smith_solve, stein_residual

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NOT_CONVERGED = 2
EXIT_USAGE = 64

METHODS = {
    "stein": ("smith", "squared-smith"),
    "lyapunov": ("adi", "lr-adi", "cayley-smith"),
    "dare": ("fixed-point", "sda"),
    "care": ("sda", "sign", "newton"),
    "nme": ("fixed-point", "cr"),
}

# basic vs doubling pairing used by `bench`
BENCH_PAIRS = {
    "stein": ("smith", "squared-smith"),
    "lyapunov": ("adi", "cayley-smith"),
    "dare": ("fixed-point", "sda"),
    "care": ("sign", "sda"),
    "nme": ("fixed-point", "cr"),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _oracle_cap(default: int) -> int:
    raw = os.environ.get("RICCATI_ORACLE_CAP")
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        return default


def _heuristic_tau(a: np.ndarray) -> float:
    return max(1.0, float(np.linalg.norm(a)) / math.sqrt(a.shape[0]))


def _default_shifts(problem) -> ShiftSequence:
    return ShiftSequence(shifts=(_heuristic_tau(problem.A),))


def _write_trace(path, history, elapsed):
    with open(path, "w", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["iter", "residual", "elapsed_ns"])
        for i, (res, ns) in enumerate(zip(history, elapsed)):
            writer.writerow([i, repr(float(res)), int(ns)])


def _solve_dispatch(pf, method: str, opts: SolveOptions, shifts: ShiftSequence | None):
    """Run one (kind, method) cell; returns (report, final_residual)."""
    problem = to_problem(pf)
    if shifts is None and pf.shifts:
        shifts = ShiftSequence(shifts=tuple(pf.shifts))
    if pf.kind == "stein":
        solver = smith_solve if method == "smith" else squared_smith_solve
        report = solver(problem, opts)
        return report, stein_residual(report.X, problem)
    if pf.kind == "lyapunov":
        if shifts is None:
            shifts = _default_shifts(problem)
        if method == "adi":
            report = adi_solve(problem, shifts, opts)
        elif method == "lr-adi":
            k = opts.resolve_max_iter(50)
            factor = lr_adi_solve(problem, shifts, k, opts)
            report = adi_solve(problem, shifts, opts)
            report.X = factor.gramian()
        else:  # cayley-smith
            stein_problem = cayley_to_stein(problem, shifts.at(0))
            report = squared_smith_solve(stein_problem, opts)
        return report, lyap_residual(report.X, problem)
    if pf.kind == "dare":
        solver = sda_solve if method == "sda" else dare_fixed_point_solve
        sol = solver(problem, opts)
        return sol.report, dare_residual(sol.X_plus, problem)
    if pf.kind == "care":
        if method == "sda":
            sol = care_sda_solve(problem, opts=opts)
        elif method == "sign":
            sol = sign_solve(problem, SignOptions(scaling="determinantal", tol=opts.tol))
        else:  # newton
            sol = newton_care_solve(problem, np.zeros((problem.n, problem.n)), opts)
        from .care import care_residual

        return sol.report, care_residual(sol.X_plus, problem)
    # nme
    solver = cyclic_reduction_solve if method == "cr" else nme_fixed_point_solve
    report = solver(problem, opts)
    return report, nme_residual(report.X, problem)


def cmd_gen(args) -> int:
    spec = GeneratorSpec(
        kind=args.kind,
        n=args.n,
        seed=args.seed,
        radius=args.radius,
        interval=tuple(args.interval),
        rank=args.rank,
        critical=args.critical,
    )
    pf = gen_problem(spec)
    save_problem(args.output, pf)
    print(f"wrote {args.kind} instance n={args.n} seed={args.seed} to {args.output}")
    return EXIT_OK


def cmd_solve(args) -> int:
    pf = load_problem(args.input)
    if args.method not in METHODS[pf.kind]:
        print(
            f"unknown method {args.method!r} for kind {pf.kind!r}; "
            f"choose from {', '.join(METHODS[pf.kind])}",
            file=sys.stderr,
        )
        return EXIT_USAGE
    opts = SolveOptions(tol=args.tol, max_iter=args.max_iter)
    shifts = ShiftSequence(shifts=tuple(args.shifts)) if args.shifts else None
    report, final_res = _solve_dispatch(pf, args.method, opts, shifts)
    if args.trace:
        _write_trace(args.trace, report.residual_history, report.elapsed_ns)
    print(f"iterations: {report.iterations}")
    print(f"final residual: {final_res:.6e}")
    print(f"converged: {report.converged}")
    return EXIT_OK if report.converged else EXIT_NOT_CONVERGED


def _check(rows, name: str, value: float, bound: float):
    rows.append((name, value, value <= bound))


def _verify_checks(pf) -> tuple[list, bool]:
    """Returns (rows, skipped); each row is (name, measured, passed)."""
    kron_cap = _oracle_cap(oracle.KRON_CAP)
    eig_cap = _oracle_cap(oracle.EIG_CAP)
    rows: list = []
    opts = SolveOptions(tol=1e-13)
    try:
        problem = to_problem(pf)
    except ValueError:
        if pf.kind != "dare":
            raise
        problem = None  # indefinite data: spectral checks only
    rel = lambda x, y: float(np.linalg.norm(x - y) / max(np.linalg.norm(y), 1e-300))

    if pf.kind == "stein":
        if pf.n > kron_cap:
            return rows, True
        x_oracle = oracle.kron_stein_solve(problem)
        report = squared_smith_solve(problem, opts)
        _check(rows, "kron-vs-squared-smith", rel(report.X, x_oracle), 1e-9)
    elif pf.kind == "lyapunov":
        if pf.n > kron_cap:
            return rows, True
        x_oracle = oracle.kron_lyap_solve(problem)
        shifts = ShiftSequence(tuple(pf.shifts)) if pf.shifts else _default_shifts(problem)
        report = adi_solve(problem, shifts, SolveOptions(tol=1e-12, max_iter=5000))
        _check(rows, "kron-vs-adi", rel(report.X, x_oracle), 1e-7)
    elif pf.kind == "dare":
        if pf.n > eig_cap:
            return rows, True
        # assemble S from the raw matrices so indefinite-Q instances (like
        # the unit-circle example) still get the spectral checks
        a, g, q = (pf.matrices[k] for k in ("A", "G", "Q"))
        n, eye, zero = pf.n, np.eye(pf.n), np.zeros((pf.n, pf.n))
        from .linalg import solve_linear

        s = solve_linear(np.block([[eye, g], [zero, a.conj().T]]), np.block([[a, zero], [-q, eye]]))
        _check(rows, "symplectic-pairing", oracle.symplectic_pairing_defect(s), 1e-6)
        try:
            subspace_x = oracle.invariant_subspace_solve(s, "inside_unit_circle")
        except RegionCountMismatch:
            subspace_x = None
            eigs = oracle.eigenvalues(s)
            defect = float(np.min(np.abs(np.abs(eigs) - 1.0)))
            _check(rows, "region-count-mismatch-unit-circle", defect, 1e-8)
        if problem is not None:
            sol = sda_solve(problem, opts)
            if subspace_x is not None:
                _check(rows, "subspace-vs-sda", rel(sol.X_plus, subspace_x), 1e-8)
                _check(rows, "wiener-hopf", wiener_hopf_check(sol, problem), 1e-8)
            from .dare import DoublingState, sda_step

            for k in range(min(sol.report.iterations, 3), -1, -1):
                state = DoublingState(Ak=problem.A, Gk=problem.G, Qk=problem.Q, k=0)
                for _ in range(k):
                    state = sda_step(state)
                try:
                    value = oracle.sda_factorization_check(state, problem)
                except OverflowGuard:
                    continue  # S^{-2^k} not representable; retry a smaller k
                _check(rows, f"doubling-factorization-k{k}", value, 1e-7)
                break
    elif pf.kind == "care":
        if pf.n > eig_cap:
            return rows, True
        h = hamiltonian(problem)
        _check(rows, "hamiltonian-pairing", oracle.hamiltonian_pairing_defect(h), 1e-6)
        _check(rows, "sign-squaring-relation", oracle.sign_relation_check(problem, 1.0, 2), 1e-8)
        sol = care_sda_solve(problem, opts=opts)
        x_oracle = oracle.invariant_subspace_solve(h, "left_half_plane")
        _check(rows, "subspace-vs-sda", rel(sol.X_plus, x_oracle), 1e-7)
        sol_sign = sign_solve(problem, SignOptions(scaling="determinantal"))
        _check(rows, "sign-vs-sda", rel(sol_sign.X_plus, sol.X_plus), 1e-7)
    else:  # nme
        if pf.n > kron_cap:
            return rows, True
        schur_state = oracle.tridiag_schur_oracle(problem, 4)
        from .nme import CrState

        cr_state = cr_step(CrState(Ak=problem.A, Qk=problem.Q, Uk=problem.Q, k=0))
        defect = max(
            rel(schur_state.Ak, cr_state.Ak),
            rel(schur_state.Qk, cr_state.Qk),
            rel(schur_state.Uk, cr_state.Uk),
        )
        _check(rows, "tridiag-schur-vs-cr", defect, 1e-10)
        fact = spectral_factorize(problem, opts)
        _check(rows, "spectral-factor-uqme", uqme_residual(fact.Y, problem), 1e-8)
    return rows, False


def cmd_verify(args) -> int:
    pf = load_problem(args.input)
    rows, skipped = _verify_checks(pf)
    if skipped:
        print(f"skip: n={pf.n} exceeds the oracle size cap")
        return EXIT_OK
    all_pass = True
    for name, value, ok in rows:
        all_pass &= ok
        print(f"{'PASS' if ok else 'FAIL'}  {name:<36} {value:.3e}")
    return EXIT_OK if all_pass else EXIT_ERROR


def cmd_bench(args) -> int:
    if not args.sizes:
        print("bench: --sizes must be a nonempty list", file=sys.stderr)
        return EXIT_USAGE
    basic, doubling = BENCH_PAIRS[args.kind]
    out = open(args.output, "w", newline="\n") if args.output else sys.stdout
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["kind", "method", "n", "iterations", "final_residual", "wall_ns"])
    opts = SolveOptions(tol=args.tol)
    status = EXIT_OK
    try:
        for n in args.sizes:
            spec = GeneratorSpec(kind=args.kind, n=n, seed=args.seed, radius=args.radius)
            pf = gen_problem(spec)
            for method in (basic, doubling):
                t0 = time.perf_counter_ns()
                try:
                    report, final_res = _solve_dispatch(pf, method, opts, None)
                    wall = time.perf_counter_ns() - t0
                    iters = report.iterations
                    if not report.converged:
                        status = max(status, EXIT_NOT_CONVERGED)
                except RiccatiError:
                    wall = time.perf_counter_ns() - t0
                    iters, final_res = 0, float("nan")
                    status = max(status, EXIT_NOT_CONVERGED)
                writer.writerow([args.kind, method, n, iters, repr(float(final_res)), wall])
    finally:
        if out is not sys.stdout:
            out.close()
    return status


def _build_parser() -> _Parser:
    parser = _Parser(prog="riccati", description="Dense matrix-equation solver harness.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="generate a random problem file")
    p_gen.add_argument("--kind", required=True, choices=sorted(METHODS))
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--radius", type=float, default=0.9)
    p_gen.add_argument("--interval", type=float, nargs=2, default=(0.5, 2.0))
    p_gen.add_argument("--rank", type=int, default=None)
    p_gen.add_argument("--critical", action="store_true")
    p_gen.add_argument("--output", required=True)

    p_solve = sub.add_parser("solve", help="solve a problem file")
    p_solve.add_argument("--input", required=True)
    p_solve.add_argument("--method", required=True)
    p_solve.add_argument("--tol", type=float, default=1e-12)
    p_solve.add_argument("--max-iter", type=int, default=None)
    p_solve.add_argument("--shifts", type=complex, nargs="+", default=None)
    p_solve.add_argument("--trace", default=None)

    p_verify = sub.add_parser("verify", help="run oracle cross-checks on a problem file")
    p_verify.add_argument("--input", required=True)

    p_bench = sub.add_parser("bench", help="compare basic vs doubling methods")
    p_bench.add_argument("--kind", required=True, choices=sorted(METHODS))
    p_bench.add_argument("--sizes", type=int, nargs="*", default=[])
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--tol", type=float, default=1e-12)
    p_bench.add_argument("--radius", type=float, default=0.9)
    p_bench.add_argument("--output", default=None)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handler = {"gen": cmd_gen, "solve": cmd_solve, "verify": cmd_verify, "bench": cmd_bench}[
        args.command
    ]
    try:
        return handler(args)
    except RiccatiError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
