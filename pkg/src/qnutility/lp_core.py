"""Sparse linear programs and a deterministic solver interface.

The solver is HiGHS (dual simplex) through :func:`scipy.optimize.linprog`,
run single-threaded so repeated solves are bitwise identical. Solutions are
re-checked by :func:`verify`, which recomputes residuals from the original
rows and does not trust anything the solver reports.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.optimize import linprog


class Status(str, enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    NUMERICAL_FAILURE = "numerical_failure"


LE, EQ, GE = "<=", "==", ">="


@dataclass(frozen=True)
class Tolerances:
    feasibility: float = 1e-9
    optimality: float = 1e-7


@dataclass(frozen=True, eq=False)
class LinearProgram:
    """``maximize c @ x`` subject to ``A x (sense) b`` and ``lb <= x <= ub``."""

    c: np.ndarray
    A: sp.csr_matrix
    sense: np.ndarray
    b: np.ndarray
    lb: np.ndarray
    ub: np.ndarray
    names: Sequence[str] | None = None

    def __post_init__(self):
        n = len(self.c)
        if self.A.shape[1] != n or self.A.shape[0] != len(self.b) or len(self.sense) != len(self.b):
            raise ValueError(f"inconsistent LP shapes: c {n}, A {self.A.shape}, b {len(self.b)}")
        if len(self.lb) != n or len(self.ub) != n:
            raise ValueError("bound vectors must have one entry per variable")
        if not (np.all(np.isfinite(self.c)) and np.all(np.isfinite(self.A.data))
                and np.all(np.isfinite(self.b))):
            raise ValueError("LP coefficients must be finite")
        bad = set(np.unique(self.sense)) - {LE, EQ, GE}
        if bad:
            raise ValueError(f"unknown row senses {bad}")

    @property
    def num_vars(self) -> int:
        return len(self.c)

    @property
    def num_rows(self) -> int:
        return len(self.b)

    @classmethod
    def from_rows(cls, n: int, objective: Mapping[int, float],
                  rows: Sequence[tuple[Mapping[int, float], str, float]],
                  lb: Sequence[float] | None = None, ub: Sequence[float | None] | None = None,
                  names: Sequence[str] | None = None) -> "LinearProgram":
        """Build from sparse dict rows ``({var: coef}, sense, rhs)``."""
        c = np.zeros(n)
        for j, v in objective.items():
            _check_index(j, n)
            c[j] += v
        ri, ci, vals = [], [], []
        for i, (coefs, _, _) in enumerate(rows):
            for j, v in coefs.items():
                _check_index(j, n)
                ri.append(i)
                ci.append(j)
                vals.append(float(v))
        A = sp.csr_matrix((vals, (ri, ci)), shape=(len(rows), n))
        sense = np.array([s for _, s, _ in rows], dtype=object)
        b = np.array([float(r) for _, _, r in rows])
        lo = np.zeros(n) if lb is None else np.asarray(lb, dtype=float)
        hi = np.full(n, np.inf) if ub is None else np.array(
            [np.inf if u is None else u for u in ub], dtype=float)
        return cls(c, A, sense, b, lo, hi, names)


def _check_index(j: int, n: int) -> None:
    if not 0 <= j < n:
        raise ValueError(f"variable index {j} out of range for {n} variables")


@dataclass
class LPSolution:
    status: Status
    objective: float
    x: np.ndarray
    iterations: int = 0
    message: str = ""
    gap: float = np.nan

    @property
    def ok(self) -> bool:
        return self.status is Status.OPTIMAL


@dataclass
class ResidualReport:
    max_row_residual: float
    max_bound_violation: float
    objective: float
    row_residuals: np.ndarray = field(repr=False)

    def within(self, tol: float) -> bool:
        return self.max_row_residual <= tol and self.max_bound_violation <= tol


def verify(lp: LinearProgram, x: np.ndarray) -> ResidualReport:
    """Recompute constraint residuals and the objective for a primal point."""
    x = np.asarray(x, dtype=float)
    if x.shape != (lp.num_vars,):
        raise ValueError(f"solution has shape {x.shape}, LP has {lp.num_vars} variables")
    ax = lp.A @ x
    resid = np.zeros(lp.num_rows)
    le, eq, ge = lp.sense == LE, lp.sense == EQ, lp.sense == GE
    resid[le] = np.maximum(ax[le] - lp.b[le], 0.0)
    resid[ge] = np.maximum(lp.b[ge] - ax[ge], 0.0)
    resid[eq] = np.abs(ax[eq] - lp.b[eq])
    bound = np.maximum(np.maximum(lp.lb - x, 0.0), np.maximum(x - lp.ub, 0.0))
    return ResidualReport(
        max_row_residual=float(resid.max(initial=0.0)),
        max_bound_violation=float(bound.max(initial=0.0)),
        objective=float(lp.c @ x),
        row_residuals=resid,
    )


def _split(lp: LinearProgram):
    le, eq, ge = lp.sense == LE, lp.sense == EQ, lp.sense == GE
    A_ub = sp.vstack([lp.A[le], -lp.A[ge]], format="csr")
    b_ub = np.concatenate([lp.b[le], -lp.b[ge]])
    kw = {}
    if A_ub.shape[0]:
        kw.update(A_ub=A_ub, b_ub=b_ub)
    if eq.any():
        kw.update(A_eq=lp.A[eq], b_eq=lp.b[eq])
    return kw


def _highs(lp: LinearProgram, tol: Tolerances, presolve: bool):
    bounds = np.column_stack([lp.lb, lp.ub])
    return linprog(
        -lp.c, bounds=bounds, method="highs-ds",
        options={
            "presolve": presolve,
            "primal_feasibility_tolerance": min(tol.feasibility, 1e-10),
            "dual_feasibility_tolerance": 1e-10,
        },
        **_split(lp),
    )


def _duality_gap(lp: LinearProgram, res) -> float:
    # HiGHS marginals are sensitivities of the minimized objective -c @ x
    kw = _split(lp)
    dual = 0.0
    if "b_ub" in kw:
        dual += float(kw["b_ub"] @ res.ineqlin.marginals)
    if "b_eq" in kw:
        dual += float(kw["b_eq"] @ res.eqlin.marginals)
    lo, hi = np.isfinite(lp.lb), np.isfinite(lp.ub)
    dual += float(lp.lb[lo] @ res.lower.marginals[lo]) + float(lp.ub[hi] @ res.upper.marginals[hi])
    primal = float(-lp.c @ res.x)
    return abs(primal - dual) / max(1.0, abs(primal))


def solve(lp: LinearProgram, tol: Tolerances = Tolerances()) -> LPSolution:
    """Maximize ``lp``; ``optimal`` implies a verified primal point.

    An optimum whose recomputed residuals exceed ``tol.feasibility``, or whose
    relative primal-dual gap exceeds ``tol.optimality``, is retried without presolve and reported as ``numerical_failure`` if it is
    still off.
    """
    if lp.num_vars == 0:
        return LPSolution(Status.OPTIMAL, 0.0, np.zeros(0), 0, "empty program")

    res = None
    for presolve in (True, False):
        res = _highs(lp, tol, presolve)
        if res.status == 0:
            x = np.clip(res.x, lp.lb, lp.ub)
            report = verify(lp, x)
            gap = _duality_gap(lp, res)
            if report.within(tol.feasibility) and gap <= tol.optimality:
                return LPSolution(Status.OPTIMAL, report.objective, x, int(res.nit), res.message, gap)
            continue
        if res.status == 2:
            return LPSolution(Status.INFEASIBLE, np.nan, np.full(lp.num_vars, np.nan),
                              int(res.nit), res.message)
        if res.status == 3:
            return LPSolution(Status.UNBOUNDED, np.inf, np.full(lp.num_vars, np.nan),
                              int(res.nit), res.message)
        # status 1/4: iteration limit or HiGHS could not decide; retry once plain
    msg = res.message if res is not None else ""
    return LPSolution(Status.NUMERICAL_FAILURE, np.nan, np.full(lp.num_vars, np.nan),
                      int(getattr(res, "nit", 0) or 0), msg)


def to_lp_text(lp: LinearProgram) -> str:
    """Dump in CPLEX LP text format for cross-checking with other solvers."""
    names = list(lp.names) if lp.names is not None else [f"x{j}" for j in range(lp.num_vars)]

    def expr(idx, vals):
        terms = [f"{'-' if v < 0 else '+'} {abs(v):.17g} {names[j]}" for j, v in zip(idx, vals) if v != 0]
        return " ".join(terms) if terms else "0 " + names[0]

    nz = np.flatnonzero(lp.c)
    lines = ["Maximize", " obj: " + expr(nz, lp.c[nz]), "Subject To"]
    op = {LE: "<=", EQ: "=", GE: ">="}
    for i in range(lp.num_rows):
        row = lp.A.getrow(i)
        lines.append(f" c{i}: {expr(row.indices, row.data)} {op[lp.sense[i]]} {lp.b[i]:.17g}")
    lines.append("Bounds")
    for j in range(lp.num_vars):
        hi = "+inf" if np.isinf(lp.ub[j]) else f"{lp.ub[j]:.17g}"
        lines.append(f" {lp.lb[j]:.17g} <= {names[j]} <= {hi}")
    lines.append("End")
    return "\n".join(lines) + "\n"
