"""Problem-file serialization.

JSON on disk, with every matrix entry written as an explicit [re, im] pair so
complex data round-trips without ambiguity.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from .care import CareProblem
from .dare import DareProblem
from .errors import ParseError
from .lyapunov import LyapunovProblem
from .nme import NmeProblem
from .stein import SteinProblem

KINDS = ("stein", "lyapunov", "dare", "care", "nme")

# required matrix names per kind; C is optional for lyapunov
REQUIRED = {
    "stein": ("A", "Q"),
    "lyapunov": ("A", "Q"),
    "dare": ("A", "G", "Q"),
    "care": ("A", "G", "Q"),
    "nme": ("A", "Q"),
}

__all__ = ["ProblemFile", "load_problem", "save_problem", "save_report", "to_problem"]


@dataclass
class ProblemFile:
    """On-disk problem description: kind, size, named matrices, shifts."""

    kind: str
    n: int
    matrices: dict
    shifts: list | None = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ParseError(f"unknown kind {self.kind!r}")
        for name in REQUIRED[self.kind]:
            if name not in self.matrices:
                raise ParseError(f"kind={self.kind} requires matrix {name!r}")
        for name, m in self.matrices.items():
            m = np.asarray(m, dtype=np.complex128)
            if m.ndim != 2:
                raise ParseError(f"matrix {name!r} is not two-dimensional")
            if name != "C" and m.shape != (self.n, self.n):
                raise ParseError(f"matrix {name!r} has shape {m.shape}, expected ({self.n}, {self.n})")
            if name == "C" and m.shape[1] != self.n:
                raise ParseError(f"matrix 'C' must have {self.n} columns")
            self.matrices[name] = m


def _encode_matrix(m: np.ndarray) -> list:
    return [[[float(v.real), float(v.imag)] for v in row] for row in np.asarray(m, dtype=np.complex128)]


def _decode_matrix(name: str, data) -> np.ndarray:
    try:
        arr = np.asarray(data, dtype=float)
        if arr.ndim != 3 or arr.shape[2] != 2:
            raise ValueError
    except (ValueError, TypeError):
        raise ParseError(f"matrix {name!r} is not a nested array of [re, im] pairs") from None
    return arr[:, :, 0] + 1j * arr[:, :, 1]


def save_problem(path, problem: ProblemFile):
    doc = {
        "kind": problem.kind,
        "n": problem.n,
        "matrices": {name: _encode_matrix(m) for name, m in problem.matrices.items()},
    }
    if problem.shifts is not None:
        doc["shifts"] = [[float(complex(s).real), float(complex(s).imag)] for s in problem.shifts]
    if problem.metadata:
        doc["metadata"] = problem.metadata
    with open(path, "w", newline="\n") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_problem(path) -> ProblemFile:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: top level must be an object")
    for key in ("kind", "n", "matrices"):
        if key not in doc:
            raise ParseError(f"{path}: missing field {key!r}")
    matrices = {
        name: _decode_matrix(name, data) for name, data in doc["matrices"].items()
    }
    shifts = None
    if "shifts" in doc:
        shifts = [complex(re, im) for re, im in doc["shifts"]]
    return ProblemFile(
        kind=doc["kind"],
        n=int(doc["n"]),
        matrices=matrices,
        shifts=shifts,
        metadata=doc.get("metadata", {}),
    )


def to_problem(pf: ProblemFile):
    """Instantiate the validated solver-facing problem object."""
    m = pf.matrices
    if pf.kind == "stein":
        return SteinProblem(A=m["A"], Q=m["Q"])
    if pf.kind == "lyapunov":
        return LyapunovProblem(A=m["A"], Q=m["Q"], C=m.get("C"))
    if pf.kind == "dare":
        return DareProblem(A=m["A"], G=m["G"], Q=m["Q"])
    if pf.kind == "care":
        return CareProblem(A=m["A"], G=m["G"], Q=m["Q"])
    if pf.kind == "nme":
        return NmeProblem(A=m["A"], Q=m["Q"])
    raise ParseError(f"unknown kind {pf.kind!r}")


def save_report(path, report):
    """JSON dump of a solve report (solution matrix, residuals, timings)."""
    doc = {
        "converged": bool(report.converged),
        "iterations": int(report.iterations),
        "residual_history": [float(r) for r in report.residual_history],
        "rate_estimate": None if report.rate_estimate is None else float(report.rate_estimate),
        "closed_loop_radius": (
            None if report.closed_loop_radius is None else float(report.closed_loop_radius)
        ),
        "elapsed_ns": [int(t) for t in report.elapsed_ns],
        "X": _encode_matrix(report.X),
    }
    with open(path, "w", newline="\n") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
