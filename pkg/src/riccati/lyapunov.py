"""Lyapunov equation A^*X + XA + Q = 0: Cayley reduction, ADI, LR-ADI."""

import math
import time
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInterval, SingularMatrix, SingularShift
from .linalg import as_matrix, hermitian_part, psd_check, solve_linear, solve_right, symmetrize
from .reporting import DEFAULT_BASIC_MAX_ITER, SolveOptions, SolveReport, rate_from_updates
from .stein import SteinProblem

__all__ = [
    "LyapunovProblem",
    "ShiftSequence",
    "LowRankFactor",
    "cayley_to_stein",
    "adi_solve",
    "lr_adi_solve",
    "wachspress_single_shift",
    "lyap_residual",
]


@dataclass(frozen=True)
class LyapunovProblem:
    """Coefficients of A^*X + XA + Q = 0, optionally with Q = C^*C."""

    A: np.ndarray
    Q: np.ndarray
    C: np.ndarray | None = None

    def __post_init__(self):
        a = as_matrix(self.A)
        q = hermitian_part(self.Q)
        if a.shape[0] != a.shape[1]:
            raise ValueError("A must be square")
        if q.shape != a.shape:
            raise ValueError("Q must match the shape of A")
        if not psd_check(q, 1e-10):
            raise ValueError("Q must be positive semidefinite")
        object.__setattr__(self, "A", a)
        object.__setattr__(self, "Q", q)
        if self.C is not None:
            c = as_matrix(self.C)
            if c.shape[1] != a.shape[0]:
                raise ValueError("C must have as many columns as A")
            gram = c.conj().T @ c
            if np.linalg.norm(gram - q) > 1e-10 * max(1.0, np.linalg.norm(q)):
                raise ValueError("C^*C does not match Q")
            object.__setattr__(self, "C", c)

    @property
    def n(self) -> int:
        return self.A.shape[0]


@dataclass(frozen=True)
class ShiftSequence:
    """Ordered ADI/Cayley shifts, all with positive real part."""

    shifts: tuple

    def __post_init__(self):
        shifts = tuple(complex(s) for s in self.shifts)
        if not shifts:
            raise ValueError("shift sequence must be nonempty")
        if any(s.real <= 0 for s in shifts):
            raise ValueError("all shifts must have positive real part")
        object.__setattr__(self, "shifts", shifts)

    def at(self, k: int) -> complex:
        """k-th shift, cycling when the list is exhausted."""
        return self.shifts[k % len(self.shifts)]


@dataclass(frozen=True)
class LowRankFactor:
    """Z with X ~ ZZ^*; columns come in blocks of width `block_width`."""

    Z: np.ndarray
    block_width: int

    def __post_init__(self):
        z = as_matrix(self.Z)
        if self.block_width < 1 or z.shape[1] % self.block_width != 0:
            raise ValueError("column count must be a multiple of block_width")
        object.__setattr__(self, "Z", z)

    def gramian(self) -> np.ndarray:
        return self.Z @ self.Z.conj().T


def _shifted(a: np.ndarray, tau: complex) -> np.ndarray:
    return a - np.conj(tau) * np.eye(a.shape[0])


def cayley_to_stein(problem: LyapunovProblem, tau: complex) -> SteinProblem:
    """Reduce the Lyapunov equation to the Stein equation in c(A).

    c(A) = (A - conj(tau) I)^{-1} (A + tau I) and the new right-hand side is
    2 Re(tau) (A^* - tau I)^{-1} Q (A - conj(tau) I)^{-1}; both equations have
    the same solution set.
    """
    tau = complex(tau)
    if tau.real <= 0:
        raise ValueError("tau must lie in the open right half-plane")
    a, q = problem.A, problem.Q
    shifted = _shifted(a, tau)
    try:
        c_of_a = solve_linear(shifted, a + tau * np.eye(problem.n))
        half = solve_linear(shifted.conj().T, q)  # (A^* - tau I)^{-1} Q
        q_tilde = 2 * tau.real * solve_right(half, shifted)
    except SingularMatrix as exc:
        raise SingularShift(f"conj(tau)={np.conj(tau)} is an eigenvalue of A") from exc
    return SteinProblem(A=c_of_a, Q=symmetrize(q_tilde))


def lyap_residual(x, problem: LyapunovProblem) -> float:
    """Relative residual ||A^*X + XA + Q|| / (||Q|| + 2 ||A|| ||X||)."""
    x = as_matrix(x)
    a, q = problem.A, problem.Q
    raw = float(np.linalg.norm(a.conj().T @ x + x @ a + q))
    if raw == 0.0:
        return 0.0
    return raw / float(np.linalg.norm(q) + 2 * np.linalg.norm(a) * np.linalg.norm(x))


def adi_solve(
    problem: LyapunovProblem, shifts: ShiftSequence, opts: SolveOptions = SolveOptions()
) -> SolveReport:
    """ADI iteration: per-shift Cayley reduction plus one Smith step.

    Shifts are reused cyclically when the iteration outlives the list.
    """
    max_iter = opts.resolve_max_iter(DEFAULT_BASIC_MAX_ITER)
    x = np.zeros_like(problem.Q)
    t0 = time.perf_counter_ns()
    history = [lyap_residual(x, problem)]
    times = [time.perf_counter_ns() - t0]
    updates: list[float] = []
    converged = history[-1] <= opts.tol
    iterations = 0
    while not converged and iterations < max_iter:
        tau = shifts.at(iterations)
        step = cayley_to_stein(problem, tau)
        xn = symmetrize(step.Q + step.A.conj().T @ x @ step.A)
        updates.append(float(np.linalg.norm(xn - x)))
        x = xn
        iterations += 1
        res = lyap_residual(x, problem)
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
    return report


def lr_adi_solve(
    problem: LyapunovProblem,
    shifts: ShiftSequence,
    k: int,
    opts: SolveOptions = SolveOptions(),
) -> LowRankFactor:
    """Low-rank ADI: build Z = [V_1 ... V_k] with ZZ^* equal to the k-step
    ADI iterate for the same shift set.

    Shifts are applied in forward order; since the Cayley factors commute,
    only the end-of-sweep Gramian matches ADI, not the intermediate ones.
    Appending stops early when ||V_j|| <= tol * ||Z||.
    """
    if problem.C is None:
        raise ValueError("lr_adi_solve needs a problem with a low-rank factor C")
    if k < 1:
        raise ValueError("k must be >= 1")
    a = problem.A
    c_star = problem.C.conj().T
    tau0 = shifts.at(0)
    try:
        v = math.sqrt(2 * tau0.real) * solve_linear(_shifted(a, tau0).conj().T, c_star)
        blocks = [v]
        for j in range(1, k):
            tau_prev = shifts.at(j - 1)
            tau = shifts.at(j)
            scale = math.sqrt(tau.real / tau_prev.real)
            rhs = (a.conj().T + np.conj(tau_prev) * np.eye(problem.n)) @ v
            v = scale * solve_linear(_shifted(a, tau).conj().T, rhs)
            z_norm = float(np.linalg.norm(np.hstack(blocks)))
            if float(np.linalg.norm(v)) <= opts.tol * z_norm:
                break
            blocks.append(v)
    except SingularMatrix as exc:
        raise SingularShift("an ADI shift coincides with an eigenvalue of A") from exc
    return LowRankFactor(Z=np.hstack(blocks), block_width=problem.C.shape[0])


def wachspress_single_shift(a: float, b: float) -> float:
    """Optimal single repeated shift sqrt(ab) for Hermitian negative definite
    A with the spectrum of -A contained in [a, b]."""
    if a <= 0 or a > b:
        raise InvalidInterval(f"need 0 < a <= b, got [{a}, {b}]")
    return math.sqrt(a * b)
