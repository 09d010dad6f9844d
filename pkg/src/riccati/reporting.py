"""Solve options and convergence reports shared by all iterations."""

from dataclasses import dataclass, field

import numpy as np

__all__ = ["SolveOptions", "SolveReport", "DEFAULT_BASIC_MAX_ITER", "DEFAULT_DOUBLING_MAX_ITER"]

DEFAULT_BASIC_MAX_ITER = 10_000
DEFAULT_DOUBLING_MAX_ITER = 60


@dataclass(frozen=True)
class SolveOptions:
    """Stopping controls.

    `max_iter=None` picks the method default: 10^4 for one-step fixed-point
    iterations, 60 for doubling iterations.
    """

    tol: float = 1e-12
    max_iter: int | None = None
    stagnation_tol: float = 1e-15

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.max_iter is not None and self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if self.stagnation_tol <= 0:
            raise ValueError("stagnation_tol must be positive")

    def resolve_max_iter(self, default: int) -> int:
        return default if self.max_iter is None else self.max_iter


@dataclass
class SolveReport:
    """Outcome of one solver run.

    `residual_history` holds the relative residual of every recorded iterate
    (including the initial one where the solver records it, so its length is
    iterations or iterations + 1).  `rate_estimate` is the geometric mean of
    successive iterate-update-norm ratios over the last five recorded steps;
    update norms rather than residuals make the estimate meaningful also in
    critical cases where the residual shrinks quadratically in the error.
    """

    X: np.ndarray
    converged: bool
    iterations: int
    residual_history: list[float] = field(default_factory=list)
    rate_estimate: float = 0.0
    closed_loop_radius: float | None = None
    elapsed_ns: list[int] = field(default_factory=list)


def rate_from_updates(update_norms) -> float:
    """Geometric mean of successive ratios over the last 5 recorded steps."""
    tail = [u for u in update_norms if u > 0.0][-6:]
    if len(tail) < 2:
        return 0.0
    ratios = [b / a for a, b in zip(tail, tail[1:])]
    return float(np.exp(np.mean(np.log(ratios))))
