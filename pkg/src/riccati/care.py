"""Continuous-time algebraic Riccati equation Q + A^*X + XA - XGX = 0.

Three routes: Cayley reduction to a DARE followed by SDA, the scaled matrix
sign iteration, and Newton's method with an exact inner Lyapunov solve.
"""

import math
import time
from dataclasses import dataclass

import numpy as np

from .dare import DareProblem, DareSolution, _sda_core, closed_loop_radius
from .errors import (
    InnerSolveFailed,
    RankMismatch,
    SingularAd,
    SingularMatrix,
    SingularShift,
    SingularU1,
    StructureLoss,
)
from .linalg import (
    _lu,
    as_matrix,
    hermitian_part,
    min_pivot,
    psd_check,
    solve_linear,
    solve_right,
    symmetrize,
)
from .reporting import SolveOptions, SolveReport, rate_from_updates

__all__ = [
    "CareProblem",
    "SignOptions",
    "hamiltonian",
    "care_to_dare",
    "default_cayley_tau",
    "care_sda_solve",
    "sign_solve",
    "sign_extract",
    "determinantal_tau",
    "newton_care_solve",
    "care_residual",
]


@dataclass(frozen=True)
class CareProblem:
    """Coefficients (A, G, Q) with G, Q Hermitian PSD."""

    A: np.ndarray
    G: np.ndarray
    Q: np.ndarray

    def __post_init__(self):
        a = as_matrix(self.A)
        g = hermitian_part(self.G)
        q = hermitian_part(self.Q)
        if a.shape[0] != a.shape[1]:
            raise ValueError("A must be square")
        if g.shape != a.shape or q.shape != a.shape:
            raise ValueError("G and Q must match the shape of A")
        if not psd_check(g, 1e-10) or not psd_check(q, 1e-10):
            raise ValueError("G and Q must be positive semidefinite")
        object.__setattr__(self, "A", a)
        object.__setattr__(self, "G", g)
        object.__setattr__(self, "Q", q)

    @property
    def n(self) -> int:
        return self.A.shape[0]


@dataclass(frozen=True)
class SignOptions:
    """Controls for the sign iteration; `scaling` is "none" or "determinantal"."""

    scaling: str = "none"
    tol: float = 1e-12
    max_iter: int = 100

    def __post_init__(self):
        if self.scaling not in ("none", "determinantal"):
            raise ValueError("scaling must be 'none' or 'determinantal'")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if self.tol <= 0:
            raise ValueError("tol must be positive")


def hamiltonian(problem: CareProblem) -> np.ndarray:
    """The Hamiltonian matrix [A -G; -Q -A^*]."""
    a, g, q = problem.A, problem.G, problem.Q
    return np.block([[a, -g], [-q, -a.conj().T]])


def care_residual(x, problem: CareProblem) -> float:
    """Relative residual ||Q + A^*X + XA - XGX|| normalized by
    ||Q|| + 2 ||A|| ||X|| + ||G|| ||X||^2."""
    x = as_matrix(x)
    a, g, q = problem.A, problem.G, problem.Q
    raw = float(np.linalg.norm(q + a.conj().T @ x + x @ a - x @ g @ x))
    if raw == 0.0:
        return 0.0
    nx = float(np.linalg.norm(x))
    den = float(np.linalg.norm(q)) + 2 * float(np.linalg.norm(a)) * nx
    den += float(np.linalg.norm(g)) * nx**2
    return raw / den


def care_to_dare(problem: CareProblem, tau: float) -> DareProblem:
    """Cayley-reduce the CARE to a DARE with the same solution set.

    The discrete coefficients are read off I + 2 tau K^{-1} with
    K = [A - tau I, -G; Q, A^* - tau I].
    """
    if tau <= 0:
        raise ValueError("tau must be positive")
    a, g, q = problem.A, problem.G, problem.Q
    n = problem.n
    eye = np.eye(n)
    k = np.block([[a - tau * eye, -g], [q, a.conj().T - tau * eye]])
    try:
        m = np.eye(2 * n) + 2 * tau * solve_linear(k, np.eye(2 * n))
    except SingularMatrix as exc:
        raise SingularShift(f"tau={tau} is (numerically) an eigenvalue of H") from exc
    a_d = m[:n, :n]
    g_d = symmetrize(m[:n, n:])
    q_d = symmetrize(-m[n:, :n])
    scale = max(1.0, float(np.linalg.norm(m)))
    if min_pivot(a_d) < 1e-14 * scale:
        raise SingularAd(f"discrete A block is singular for tau={tau}")
    if not psd_check(g_d, 1e-8) or not psd_check(q_d, 1e-8):
        raise StructureLoss(f"Cayley reduction with tau={tau} lost definiteness")
    return DareProblem(A=a_d, G=g_d, Q=q_d)


def default_cayley_tau(problem: CareProblem) -> float:
    return max(1.0, float(np.linalg.norm(problem.A)) / math.sqrt(problem.n))


def care_sda_solve(
    problem: CareProblem,
    tau: float | None = None,
    opts: SolveOptions = SolveOptions(),
) -> DareSolution:
    """Cayley-reduce to a DARE and run SDA, tracking CARE residuals.

    With tau=None a heuristic tau = max(1, ||A||_F / sqrt(n)) is used and
    doubled up to twice on a singular reduction.
    """
    if tau is None:
        base = default_cayley_tau(problem)
        last_exc = None
        dare_problem = None
        for factor in (1.0, 2.0, 4.0):
            try:
                dare_problem = care_to_dare(problem, base * factor)
                break
            except (SingularShift, SingularAd) as exc:
                last_exc = exc
        if dare_problem is None:
            raise last_exc
    else:
        dare_problem = care_to_dare(problem, tau)
    state, history, updates, converged, times = _sda_core(
        dare_problem, opts, lambda q: care_residual(q, problem)
    )
    report = SolveReport(
        X=state.Qk,
        converged=converged,
        iterations=state.k,
        residual_history=history,
        rate_estimate=rate_from_updates(updates),
        closed_loop_radius=closed_loop_radius(state.Qk, dare_problem),
    )
    report.elapsed_ns = times
    return DareSolution(X_plus=state.Qk, Y_plus=state.Gk, report=report)


def determinantal_tau(hk) -> float:
    """|det H_k|^(1/size) via the pivots of a row-pivoted factorization.

    Computed as the exponentiated mean of pivot log-moduli, so it never
    overflows; the geometric mean of the eigenvalue moduli.
    """
    hk = as_matrix(hk)
    pivots = np.abs(np.diag(_lu(hk)[0]))
    if float(np.min(pivots)) < 1e-14 * max(1.0, float(np.linalg.norm(hk))):
        raise SingularMatrix("sign iterate is numerically singular")
    return float(np.exp(np.mean(np.log(pivots))))


def sign_solve(problem: CareProblem, opts: SignOptions = SignOptions()) -> DareSolution:
    """Matrix sign iteration H <- ((H/tau) + (H/tau)^{-1}) / 2.

    With determinantal scaling every iterate is renormalized to unit
    determinantal scale, so the limit is the true sign of the Hamiltonian
    (eigenvalues +-1) in both scaling modes and extraction always uses the
    reference shift 1.  `residual_history` records relative step norms.
    """
    h = hamiltonian(problem)
    eye2n = np.eye(2 * problem.n)
    t0 = time.perf_counter_ns()
    history: list[float] = []
    times: list[int] = []
    converged = False
    iterations = 0
    for _ in range(opts.max_iter):
        tau = determinantal_tau(h) if opts.scaling == "determinantal" else 1.0
        hs = h / tau
        hn = (hs + solve_linear(hs, eye2n)) / 2
        step = float(np.linalg.norm(hn - h) / max(np.linalg.norm(h), np.finfo(float).tiny))
        h = hn
        iterations += 1
        history.append(step)
        times.append(time.perf_counter_ns() - t0)
        if step <= opts.tol:
            converged = True
            break
    x = sign_extract(h, 1.0)
    report = SolveReport(
        X=x,
        converged=converged,
        iterations=iterations,
        residual_history=history,
        rate_estimate=rate_from_updates(history),
    )
    report.elapsed_ns = times
    return DareSolution(X_plus=x, Y_plus=None, report=report)


def sign_extract(h_inf, tau_ref: float) -> np.ndarray:
    """Read the stabilizing solution off a converged sign iterate.

    Takes the n smallest singular directions of H_inf + tau_ref I as an
    orthonormal null-space basis [U1; U2] and returns U2 U1^{-1}.
    """
    h_inf = as_matrix(h_inf)
    if tau_ref <= 0:
        raise ValueError("tau_ref must be positive")
    size = h_inf.shape[0]
    if size % 2 != 0:
        raise ValueError("sign iterate must be 2n x 2n")
    n = size // 2
    shifted = h_inf + tau_ref * np.eye(size)
    _, s, vh = np.linalg.svd(shifted)
    rank_tol = 1e-8 * max(float(s[0]) if s.size else 0.0, 1.0)
    rank = int(np.sum(s > rank_tol))
    if rank != n:
        raise RankMismatch(f"null space of H_inf + tau I has dimension {size - rank}, expected {n}")
    basis = vh[rank:, :].conj().T  # orthonormal kernel basis, 2n x n
    u1, u2 = basis[:n, :], basis[n:, :]
    sv = np.linalg.svd(u1, compute_uv=False)
    if sv[-1] == 0.0 or sv[0] / sv[-1] > 1e8:
        raise SingularU1("top block of the null-space basis is ill conditioned")
    return symmetrize(solve_right(u2, u1))


def newton_care_solve(
    problem: CareProblem, x0, opts: SolveOptions = SolveOptions()
) -> DareSolution:
    """Newton iteration: each step solves the Lyapunov equation
    (A - G X_k)^* X_{k+1} + X_{k+1} (A - G X_k) = -Q - X_k G X_k.

    The inner solves use the exact Kronecker oracle (desk scale).  A
    non-stabilizing iterate surfaces as InnerSolveFailed, either from the
    closed-loop spectrum precheck or from inner-solve breakdown.
    """
    from .oracle import kron_lyap_solve, max_real_eigenvalue  # deferred: oracle imports care types
    from .lyapunov import LyapunovProblem

    max_iter = opts.resolve_max_iter(100)
    x = symmetrize(as_matrix(x0))
    a, g, q = problem.A, problem.G, problem.Q
    t0 = time.perf_counter_ns()
    history = [care_residual(x, problem)]
    times = [time.perf_counter_ns() - t0]
    updates: list[float] = []
    converged = history[-1] <= opts.tol
    iterations = 0
    while not converged and iterations < max_iter:
        closed_loop = a - g @ x
        if max_real_eigenvalue(closed_loop) > 1e-10:
            raise InnerSolveFailed("closed loop A - G X_k is not Hurwitz")
        rhs = symmetrize(q + x @ g @ x)
        try:
            xn = kron_lyap_solve(LyapunovProblem(A=closed_loop, Q=rhs))
        except SingularMatrix as exc:
            raise InnerSolveFailed("inner Lyapunov operator is singular") from exc
        updates.append(float(np.linalg.norm(xn - x)))
        x = xn
        iterations += 1
        res = care_residual(x, problem)
        history.append(res)
        times.append(time.perf_counter_ns() - t0)
        if res <= opts.tol:
            converged = True
            break
        if not np.isfinite(res):
            break
        if abs(history[-2] - history[-1]) <= opts.stagnation_tol:
            break
    report = SolveReport(
        X=x,
        converged=converged,
        iterations=iterations,
        residual_history=history,
        rate_estimate=rate_from_updates(updates),
    )
    report.elapsed_ns = times
    return DareSolution(X_plus=x, Y_plus=None, report=report)
