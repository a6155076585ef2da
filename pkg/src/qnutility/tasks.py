"""HOG computing tasks: coalitions, depths, volumes and entanglement demand."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .netmodel import NetworkSpec

Coalition = tuple[int, ...]

# slack for floor() of quantities like 1/(0.01*10) that should be integral
_FLOOR_SLACK = 1e-9

MAX_ALL_MODE_NODES = 20


@dataclass(frozen=True)
class UtilityModel:
    """Value of a HOG task: ``beta**min(m, d)``, optionally tapered.

    With ``taper_v0`` set the volume ``v`` is replaced by ``v / (1 + v/v0)``.
    """

    beta: float = 2.0
    taper_v0: float | None = None

    def __post_init__(self):
        if not self.beta > 1:
            raise ValueError(f"beta must be > 1, got {self.beta}")
        if self.taper_v0 is not None and not self.taper_v0 > 0:
            raise ValueError(f"taper_v0 must be positive, got {self.taper_v0}")


@dataclass(frozen=True)
class TaskSpec:
    members: Coalition
    depth: int
    volume_coefficient: float
    demand_coefficient: float

    @property
    def size(self) -> int:
        return len(self.members)


def volume(m: int, d: int, model: UtilityModel = UtilityModel()) -> float:
    """Utility of one completion of an ``m``-memory, depth-``d`` HOG task."""
    if m < 2 or d < 1:
        raise ValueError(f"need m >= 2 and d >= 1, got m={m}, d={d}")
    v = float(model.beta) ** min(m, d)
    if model.taper_v0 is not None:
        v = v / (1.0 + v / model.taper_v0)
    return v


def demand_coefficient(m: int, d: int) -> float:
    """Pair consumption rate per unit task rate, for every pair in the coalition.

    A layer applies ``floor(m/2)`` SU(4) gates on uniformly matched pairs, and
    each remote gate costs two Bell pairs, so each of the ``m(m-1)/2`` pairs is
    used ``4 d floor(m/2) / (m(m-1))`` times per completion.
    """
    if m < 2 or d < 1:
        raise ValueError(f"need m >= 2 and d >= 1, got m={m}, d={d}")
    return 2.0 * d / (m - 1) if m % 2 == 0 else 2.0 * d / m


def max_depth(m: int, epsilon_eff: float) -> int:
    """Largest depth allowed by ``m * d <= 1/epsilon_eff``, capped at ``m``."""
    if epsilon_eff <= 0:
        return m
    limit = 1.0 / (epsilon_eff * m) + _FLOOR_SLACK
    return m if limit >= m else math.floor(limit)


def optimal_depth(m: int, epsilon_eff: float, model: UtilityModel = UtilityModel()) -> int | None:
    """Depth maximizing utility per unit entanglement, ``volume(m, d) / d``.

    Returns ``None`` when no depth satisfies the error constraint. Ties go to
    the smallest depth.
    """
    if m < 2:
        raise ValueError(f"coalitions have at least 2 members, got {m}")
    d_max = max_depth(m, epsilon_eff)
    best, best_ratio = None, -math.inf
    for d in range(1, d_max + 1):
        ratio = volume(m, d, model) / d
        if ratio > best_ratio:
            best, best_ratio = d, ratio
    return best


def size_cap_for(net: NetworkSpec, prune: bool = True) -> int:
    """Largest coalition size worth enumerating.

    With errors, no optimal solution activates a coalition larger than
    ``floor(1/sqrt(epsilon_eff))``.
    """
    M = net.num_nodes
    if prune and net.epsilon_eff > 0:
        return min(M, prune_bound(net.epsilon_eff))
    return M


def prune_bound(epsilon_eff: float) -> int:
    return math.floor(1.0 / math.sqrt(epsilon_eff) + _FLOOR_SLACK)


def _connected_subsets(adj: dict[int, set[int]], cap: int) -> Iterable[frozenset[int]]:
    # ESU enumeration (Wernicke 2006): every connected subset of size <= cap
    # is reached exactly once, rooted at its smallest member.
    def extend(sub: frozenset[int], border: frozenset[int], ext: set[int], root: int):
        yield sub
        if len(sub) == cap:
            return
        ext = set(ext)
        while ext:
            w = min(ext)
            ext.discard(w)
            exclusive = {u for u in adj[w] if u > root and u not in sub and u not in border}
            yield from extend(sub | {w}, border | adj[w], ext | exclusive, root)

    for v in sorted(adj):
        yield from extend(frozenset([v]), frozenset(adj[v]) | {v}, {u for u in adj[v] if u > v}, v)


def enumerate_coalitions(net: NetworkSpec, mode: str = "connected", size_cap: int | None = None,
                         prune: bool = True, force: bool = False) -> list[Coalition]:
    """Candidate coalitions of at least two nodes, ordered by size then members.

    ``mode="connected"`` keeps subsets inducing a connected physical subgraph;
    ``mode="all"`` keeps every subset and is refused above
    ``MAX_ALL_MODE_NODES`` nodes unless ``force`` is set.
    """
    M = net.num_nodes
    if size_cap is None:
        size_cap = size_cap_for(net, prune)
    elif size_cap < 2:
        raise ValueError(f"size_cap must be >= 2, got {size_cap}")
    size_cap = min(size_cap, M)

    if mode == "all":
        if M > MAX_ALL_MODE_NODES and not force:
            raise ValueError(f"mode 'all' on {M} nodes enumerates ~2^{M} subsets; pass force=True")
        out = [c for m in range(2, size_cap + 1) for c in combinations(range(M), m)]
    elif mode == "connected":
        out = sorted((tuple(sorted(s)) for s in _connected_subsets(net.adjacency(), size_cap)
                      if len(s) >= 2), key=lambda c: (len(c), c))
    else:
        raise ValueError(f"unknown enumeration mode {mode!r}")
    return out


def build_tasks(net: NetworkSpec, coalitions: Sequence[Coalition],
                model: UtilityModel = UtilityModel()) -> list[TaskSpec]:
    """One task per distinct coalition at its optimal depth; infeasible ones dropped."""
    tasks = []
    depth_by_size: dict[int, int | None] = {}
    for c in dict.fromkeys(tuple(sorted(c)) for c in coalitions):
        m = len(c)
        if m not in depth_by_size:
            depth_by_size[m] = optimal_depth(m, net.epsilon_eff, model) if m >= 2 else None
        d = depth_by_size[m]
        if d is None:
            continue
        tasks.append(TaskSpec(c, d, volume(m, d, model), demand_coefficient(m, d)))
    return tasks
