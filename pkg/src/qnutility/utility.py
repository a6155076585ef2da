"""Quantum network utility for distributed computing and coalition-size bounds.

The utility LP has three variable blocks, in this order:

* ``p_i``  task completion rates, one per :class:`~qnutility.tasks.TaskSpec`
* ``r_ab`` consumed pair rates, one per unordered node pair
* ``w``    swap flows from :mod:`qnutility.rate_region`

and maximizes ``sum_i volume_i p_i`` subject to the demand equalities
``r_ab = sum_i demand_i p_i [a, b in M_i]`` and the rate-region rows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from .lp_core import EQ, LE, LinearProgram, LPSolution, Status, Tolerances, solve, verify
from .netmodel import NetworkSpec, Pair, pair
from .rate_region import RateConstraintSet, RateVector, build_rate_constraints, noswap_utility, pair_index
from .tasks import TaskSpec, UtilityModel, build_tasks, enumerate_coalitions, prune_bound

ACTIVE_THRESHOLD = 1e-8


class SolverFailure(RuntimeError):
    """The utility LP did not reach a verified optimum."""

    def __init__(self, status: Status, message: str = ""):
        super().__init__(f"utility LP ended with status {status.value}: {message}")
        self.status = status


@dataclass(frozen=True)
class LPLayout:
    num_tasks: int
    num_pairs: int
    num_flows: int

    @property
    def p(self) -> slice:
        return slice(0, self.num_tasks)

    @property
    def r(self) -> slice:
        return slice(self.num_tasks, self.num_tasks + self.num_pairs)

    @property
    def w(self) -> slice:
        return slice(self.num_tasks + self.num_pairs, self.num_tasks + self.num_pairs + self.num_flows)


class EntanglementGraph:
    """Consumed pair rates of an optimal solution, viewed as a weighted graph."""

    def __init__(self, num_nodes: int, rates: RateVector, threshold: float = ACTIVE_THRESHOLD):
        self.num_nodes = num_nodes
        self.rates = {pair(a, b): float(v) for (a, b), v in rates.items()}
        self.threshold = threshold

    def support(self) -> list[Pair]:
        return sorted(k for k, v in self.rates.items() if v > self.threshold)

    @property
    def max_rate(self) -> float:
        return max((v for v in self.rates.values() if v > self.threshold), default=0.0)

    def normalized(self) -> dict[Pair, float]:
        """Support edges scaled by the per-graph maximum, so the largest is 1."""
        top = self.max_rate
        return {k: self.rates[k] / top for k in self.support()} if top > 0 else {}

    def is_connected(self) -> bool:
        """Whether the support edges connect all nodes."""
        parent = list(range(self.num_nodes))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in self.support():
            parent[find(a)] = find(b)
        return len({find(x) for x in range(self.num_nodes)}) == 1

    def is_complete(self) -> bool:
        return len(self.support()) == self.num_nodes * (self.num_nodes - 1) // 2


@dataclass
class UtilityResult:
    U_comp: float
    tasks: list[TaskSpec]
    task_rates: np.ndarray
    entanglement: EntanglementGraph
    flows: dict[tuple[int, int, int], float]
    noswap_baseline: float
    status: Status
    iterations: int = 0
    max_residual: float = 0.0
    solution: LPSolution | None = field(default=None, repr=False)

    @property
    def ratio(self) -> float:
        return self.U_comp / self.noswap_baseline if self.noswap_baseline > 0 else math.nan

    def active_tasks(self, threshold: float = ACTIVE_THRESHOLD) -> list[tuple[TaskSpec, float]]:
        return [(t, float(p)) for t, p in zip(self.tasks, self.task_rates) if p > threshold]

    def to_dict(self) -> dict:
        """Results document with tasks of positive rate and the support edges."""
        U = self.U_comp
        return {
            "U_comp": U,
            "noswap_baseline": self.noswap_baseline,
            "ratio": self.ratio,
            "tasks": [
                {"members": list(t.members), "depth": t.depth, "rate": p,
                 "utility_share": t.volume_coefficient * p / U if U > 0 else 0.0}
                for t, p in self.active_tasks()
            ],
            "entanglement_graph": [
                {"a": a, "b": b, "rate": self.entanglement.rates[(a, b)]}
                for a, b in self.entanglement.support()
            ],
            "solver": {"status": self.status.value, "iterations": self.iterations,
                       "max_residual": self.max_residual},
        }


def assemble(net: NetworkSpec, tasks: Sequence[TaskSpec],
             constraints: RateConstraintSet | None = None) -> tuple[LinearProgram, LPLayout]:
    """Build the utility LP for a fixed task list."""
    cons = constraints or build_rate_constraints(net)
    M = net.num_nodes
    D, P, F = len(tasks), cons.num_rows, cons.num_flows
    lay = LPLayout(D, P, F)
    n = D + P + F

    # demand rows: r_ab - sum_i demand_i p_i = 0
    rows, cols, vals = list(range(P)), [lay.r.start + k for k in range(P)], [1.0] * P
    for i, t in enumerate(tasks):
        mem = t.members
        for x in range(len(mem)):
            for y in range(x + 1, len(mem)):
                rows.append(pair_index(mem[x], mem[y], M))
                cols.append(i)
                vals.append(-t.demand_coefficient)
    demand = sp.csr_matrix((vals, (rows, cols)), shape=(P, n))

    # conservation rows: r_ab - G w <= f_ab
    G = cons.G.tocoo()
    cons_rows = sp.csr_matrix(
        (np.concatenate([np.ones(P), -G.data]),
         (np.concatenate([np.arange(P), G.row]), np.concatenate([lay.r.start + np.arange(P), lay.w.start + G.col]))),
        shape=(P, n))

    c = np.zeros(n)
    c[lay.p] = [t.volume_coefficient for t in tasks]
    A = sp.vstack([demand, cons_rows], format="csr")
    sense = np.array([EQ] * P + [LE] * P, dtype=object)
    b = np.concatenate([np.zeros(P), cons.capacity])
    names = ([f"p{i}" for i in range(D)] + [f"r_{a}_{b_}" for a, b_ in cons.pairs]
             + [f"w_{a}_{b_}_{c_}" for a, b_, c_ in cons.flows])
    return LinearProgram(c, A, sense, b, np.zeros(n), np.full(n, np.inf), names), lay


def compute_utility(net: NetworkSpec, model: UtilityModel = UtilityModel(), mode: str = "connected",
                    prune: bool = True, size_cap: int | None = None, force: bool = False,
                    threshold: float = ACTIVE_THRESHOLD, tol: Tolerances = Tolerances(),
                    tasks: Sequence[TaskSpec] | None = None) -> UtilityResult:
    """Enumerate coalitions, pick depths, solve the utility LP and extract results.

    Raises :class:`SolverFailure` unless the LP reaches a verified optimum.
    """
    if tasks is None:
        coalitions = enumerate_coalitions(net, mode=mode, size_cap=size_cap, prune=prune, force=force)
        tasks = build_tasks(net, coalitions, model)
    tasks = list(tasks)
    cons = build_rate_constraints(net)
    lp, lay = assemble(net, tasks, cons)
    sol = solve(lp, tol)
    if sol.status is not Status.OPTIMAL:
        raise SolverFailure(sol.status, sol.message)
    report = verify(lp, sol.x)

    p = sol.x[lay.p].copy()
    p[p <= threshold] = 0.0
    r = sol.x[lay.r]
    w = sol.x[lay.w]
    return UtilityResult(
        U_comp=sol.objective,
        tasks=tasks,
        task_rates=p,
        entanglement=EntanglementGraph(net.num_nodes, dict(zip(cons.pairs, r.tolist())), threshold),
        flows={f: float(v) for f, v in zip(cons.flows, w) if v > threshold},
        noswap_baseline=noswap_utility(net, model),
        status=sol.status,
        iterations=sol.iterations,
        max_residual=max(report.max_row_residual, report.max_bound_violation),
        solution=sol,
    )


def max_active_coalition_size(result: UtilityResult, threshold: float = ACTIVE_THRESHOLD) -> int:
    return max((t.size for t, _ in result.active_tasks(threshold)), default=0)


def prop2_lower_bound(M: int, q: float, beta: float) -> float:
    """Lower bound on the largest active coalition in an error-free homogeneous chain.

    ``M + log_beta(M**log2(q) / ((1+q) M**3 (M-1)**2 / 4))``; vacuous (below 2)
    unless ``M`` is large.
    """
    if M < 2 or not 0 < q <= 1 or beta <= 1:
        raise ValueError("need M >= 2, 0 < q <= 1 and beta > 1")
    inner = M ** math.log2(q) / ((1 + q) * M**3 * (M - 1) ** 2 / 4)
    return M + math.log(inner, beta)


def prop3_upper_bound(epsilon_eff: float) -> float:
    """``floor(1/sqrt(epsilon_eff))``; ``inf`` when there are no gate errors."""
    if epsilon_eff < 0:
        raise ValueError("epsilon_eff must be >= 0")
    if epsilon_eff == 0:
        return math.inf
    return prune_bound(epsilon_eff)


def prop4_lower_bound(M: int, q: float, beta: float, epsilon_eff: float) -> float:
    """Lower bound on the largest active coalition in a homogeneous chain with errors.

    With ``m = floor(1/sqrt(epsilon_eff))`` this is
    ``m + log_beta(4 m**log2(q) floor(M/m) / ((1+q) m**3 (m-1) (2M-m+1)))``.
    """
    if epsilon_eff <= 0 or not 0 < q <= 1 or beta <= 1:
        raise ValueError("need epsilon_eff > 0, 0 < q <= 1 and beta > 1")
    m = prune_bound(epsilon_eff)
    if m < 2:
        raise ValueError(f"floor(1/sqrt(epsilon_eff)) = {m} < 2: no coalition is feasible")
    if M < m:
        raise ValueError(f"need M >= m = {m}, got M = {M}")
    inner = 4 * m ** math.log2(q) * (M // m) / ((1 + q) * m**3 * (m - 1) * (2 * M - m + 1))
    return m + math.log(inner, beta)
