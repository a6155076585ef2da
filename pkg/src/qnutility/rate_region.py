"""Entanglement-swap rate region as linear constraints.

A swap at node ``c`` consumes one ``(a, c)`` and one ``(c, b)`` pair and
yields an ``(a, b)`` pair with probability ``q_c``. One flow variable
``w[a, b, c] >= 0`` is kept per produced pair and swap node, so both
consumed legs are always used at the same rate. A rate vector ``R`` lies in
the region iff for every pair

    r_ab <= f_ab + sum_c q_c w[a,b,c] - sum_c (w[a,c,b] + w[b,c,a])

for some nonnegative flows.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np
import scipy.sparse as sp

from .lp_core import GE, LE, LinearProgram, Status, solve
from .netmodel import NetworkSpec, Pair, pair
from .tasks import UtilityModel, optimal_depth, volume

RateVector = dict[Pair, float]

FEASIBILITY_TOL = 1e-9


def all_pairs(M: int) -> list[Pair]:
    return [(a, b) for a in range(M) for b in range(a + 1, M)]


def pair_index(a: int, b: int, M: int) -> int:
    """Position of ``(min(a,b), max(a,b))`` in :func:`all_pairs` order."""
    a, b = pair(a, b)
    return a * M - a * (a + 1) // 2 + (b - a - 1)


@dataclass(frozen=True, eq=False)
class RateConstraintSet:
    """Conservation rows ``r - G w <= f`` over all pairs, with ``w >= 0``.

    ``flows[j] = (a, b, c)`` is the swap at ``c`` producing ``(a, b)``.
    ``G`` has ``+q_c`` in the produced pair's row and ``-1`` in each consumed
    pair's row.
    """

    num_nodes: int
    pairs: list[Pair]
    flows: list[tuple[int, int, int]]
    G: sp.csr_matrix
    capacity: np.ndarray

    @property
    def num_rows(self) -> int:
        return len(self.pairs)

    @property
    def num_flows(self) -> int:
        return len(self.flows)

    def slack(self, R: Mapping[Pair, float] | np.ndarray, w: np.ndarray) -> np.ndarray:
        """``f + G w - r`` per pair; feasible means all entries >= 0."""
        r = self.rate_array(R)
        return self.capacity + self.G @ np.asarray(w, dtype=float) - r

    def rate_array(self, R: Mapping[Pair, float] | np.ndarray) -> np.ndarray:
        if isinstance(R, np.ndarray):
            return R.astype(float)
        r = np.zeros(self.num_rows)
        for (a, b), v in R.items():
            r[pair_index(a, b, self.num_nodes)] = v
        return r


def build_rate_constraints(net: NetworkSpec) -> RateConstraintSet:
    M = net.num_nodes
    pairs = all_pairs(M)
    flows = [(a, b, c) for a, b in pairs for c in range(M) if c != a and c != b]
    rows, cols, vals = [], [], []
    for j, (a, b, c) in enumerate(flows):
        rows += [pair_index(a, b, M), pair_index(a, c, M), pair_index(c, b, M)]
        cols += [j, j, j]
        vals += [net.swap_eff[c], -1.0, -1.0]
    G = sp.csr_matrix((vals, (rows, cols)), shape=(len(pairs), len(flows)))
    capacity = np.array([net.rate(a, b) for a, b in pairs])
    return RateConstraintSet(M, pairs, flows, G, capacity)


def noswap_utility(net: NetworkSpec, model: UtilityModel = UtilityModel()) -> float:
    """Utility when each physical link runs the best 2-node task on its own pairs.

    A 2-node task at depth ``d`` consumes ``2d`` pairs per completion, so a
    link of rate ``f`` yields ``f * volume(2, d) / (2d)``.
    """
    d = optimal_depth(2, net.epsilon_eff, model)
    if d is None:
        return 0.0
    per_link = volume(2, d, model) / (2 * d)
    return float(sum(f * per_link for f in net.rates.values()))


@dataclass
class FeasibilityResult:
    feasible: bool
    status: Status
    violation: float
    flows: np.ndarray | None = None

    def __bool__(self) -> bool:
        return self.feasible


def _elastic_lp(cons: RateConstraintSet, r: np.ndarray) -> LinearProgram:
    # maximize -t  s.t.  G w + t >= r - f,  w, t >= 0
    P, F = cons.num_rows, cons.num_flows
    A = sp.hstack([cons.G, sp.csr_matrix(np.ones((P, 1)))], format="csr")
    c = np.zeros(F + 1)
    c[-1] = -1.0
    return LinearProgram(c, A, np.full(P, GE, dtype=object), r - cons.capacity,
                         np.zeros(F + 1), np.full(F + 1, np.inf))


def check_feasible(net: NetworkSpec, R: Mapping[Pair, float], tol: float = FEASIBILITY_TOL,
                   constraints: RateConstraintSet | None = None) -> FeasibilityResult:
    """Whether ``R`` is in the rate region, with witness flows when it is.

    Solves for the smallest uniform relaxation ``t`` of the conservation rows
    that admits nonnegative flows; ``R`` is feasible iff ``t <= tol``.
    """
    cons = constraints or build_rate_constraints(net)
    r = cons.rate_array(R)
    if np.any(r < 0):
        raise ValueError("rate vectors must be nonnegative")
    if cons.num_flows == 0:
        viol = float(np.max(r - cons.capacity, initial=0.0))
        return FeasibilityResult(viol <= tol, Status.OPTIMAL, viol, np.zeros(0))
    sol = solve(_elastic_lp(cons, r))
    if sol.status is not Status.OPTIMAL:
        return FeasibilityResult(False, sol.status, np.nan, None)
    w = sol.x[:-1]
    viol = max(0.0, float(np.max(-cons.slack(r, w), initial=0.0)))
    ok = viol <= tol
    return FeasibilityResult(ok, sol.status, viol, w if ok else None)


def max_scale(net: NetworkSpec, direction: Mapping[Pair, float],
              constraints: RateConstraintSet | None = None) -> float:
    """Largest ``t`` with ``t * direction`` in the rate region (``inf`` if unbounded)."""
    cons = constraints or build_rate_constraints(net)
    d = cons.rate_array(direction)
    if np.any(d < 0):
        raise ValueError("direction must be nonnegative")
    P, F = cons.num_rows, cons.num_flows
    # variables (w, t): maximize t s.t. t d - G w <= f
    A = sp.hstack([-cons.G, sp.csr_matrix(d.reshape(-1, 1))], format="csr")
    c = np.zeros(F + 1)
    c[-1] = 1.0
    lp = LinearProgram(c, A, np.full(P, LE, dtype=object), cons.capacity,
                       np.zeros(F + 1), np.full(F + 1, np.inf))
    sol = solve(lp)
    if sol.status is Status.UNBOUNDED:
        return float("inf")
    if sol.status is not Status.OPTIMAL:
        raise RuntimeError(f"rate-region scaling LP failed: {sol.status.value} ({sol.message})")
    return float(sol.x[-1])


def lemma1_transform(R: Mapping[Pair, float], l: int, k: int, j: int, r: float) -> RateVector:
    """Divert rate ``r`` of the ``(l, j)`` pair into ``(l, k)`` and ``(k, j)``.

    On a chain with ``l < k < j`` the result is feasible whenever ``R`` is:
    node ``k`` can skip the swaps that would have joined the two halves.
    """
    if not l < k < j:
        raise ValueError(f"need l < k < j, got {(l, k, j)}")
    out = {pair(a, b): float(v) for (a, b), v in R.items()}
    r_lj = out.get((l, j), 0.0)
    if r < 0 or r > r_lj:
        raise ValueError(f"diverted rate must lie in [0, r_lj={r_lj}], got {r}")
    if r == 0:
        return out
    out[(l, j)] = r_lj - r
    out[(l, k)] = out.get((l, k), 0.0) + r
    out[(k, j)] = out.get((k, j), 0.0) + r
    return out

