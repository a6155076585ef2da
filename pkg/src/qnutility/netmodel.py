"""Quantum network instances: nodes, no-swap link rates and swap efficiencies.

Rates carry no units in code. By convention they are entangled pairs per
unit time. Links are undirected and stored on unordered node pairs ``(a, b)``
with ``a < b``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from os import PathLike
from typing import Iterable, Mapping

Pair = tuple[int, int]


class NetworkError(ValueError):
    """Raised for malformed or out-of-range network descriptions."""


def pair(a: int, b: int) -> Pair:
    """Return the canonical key ``(min, max)`` for an unordered node pair."""
    if a == b:
        raise NetworkError(f"self-pair ({a}, {b}) is not a channel")
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True, eq=True)
class NetworkSpec:
    """An immutable quantum network.

    Parameters
    ----------
    swap_eff : sequence of float
        Swap efficiency ``q_c`` of every node, indexed by node id ``0..M-1``.
    rates : mapping
        No-swap rate ``f_ab`` for each physical link, keyed on node pairs in
        either order. Absent pairs have rate zero.
    epsilon_eff : float
        Effective error probability per two-qubit gate.
    ebar : float, optional
        Maximum per-pair error. When given, ``epsilon_eff`` is overridden by
        ``2 * ebar``.
    """

    swap_eff: tuple[float, ...]
    rates: Mapping[Pair, float] = field(default_factory=dict)
    epsilon_eff: float = 0.0
    ebar: float | None = None

    def __post_init__(self):
        q = tuple(float(x) for x in self.swap_eff)
        if len(q) < 2:
            raise NetworkError(f"a network needs at least 2 nodes, got {len(q)}")
        for c, qc in enumerate(q):
            if not (0.0 <= qc <= 1.0):
                raise NetworkError(f"swap efficiency of node {c} must lie in [0, 1], got {qc}")

        norm: dict[Pair, float] = {}
        for (a, b), f in dict(self.rates).items():
            a, b = int(a), int(b)
            if not (0 <= a < len(q) and 0 <= b < len(q)):
                raise NetworkError(f"link ({a}, {b}) references an unknown node")
            key = pair(a, b)
            f = float(f)
            if not math.isfinite(f) or f < 0:
                raise NetworkError(f"rate of link {key} must be finite and >= 0, got {f}")
            if key in norm and norm[key] != f:
                raise NetworkError(f"asymmetric rates for link {key}: {norm[key]} vs {f}")
            norm[key] = f
        # zero-rate entries are equivalent to absent ones
        norm = {k: norm[k] for k in sorted(norm) if norm[k] > 0}

        eps = float(self.epsilon_eff)
        if self.ebar is not None:
            ebar = float(self.ebar)
            if not math.isfinite(ebar) or ebar < 0:
                raise NetworkError(f"ebar must be >= 0, got {ebar}")
            object.__setattr__(self, "ebar", ebar)
            eps = 2.0 * ebar
        if not math.isfinite(eps) or eps < 0:
            raise NetworkError(f"epsilon_eff must be >= 0, got {eps}")

        object.__setattr__(self, "swap_eff", q)
        object.__setattr__(self, "rates", norm)
        object.__setattr__(self, "epsilon_eff", eps)

    __hash__ = None  # type: ignore[assignment]

    @property
    def num_nodes(self) -> int:
        return len(self.swap_eff)

    @property
    def nodes(self) -> range:
        return range(self.num_nodes)

    @property
    def links(self) -> list[Pair]:
        """Physical links, i.e. pairs with ``f_ab > 0``, in sorted order."""
        return list(self.rates)

    def rate(self, a: int, b: int) -> float:
        return self.rates.get(pair(a, b), 0.0)

    def adjacency(self) -> dict[int, set[int]]:
        """Undirected adjacency of the physical graph."""
        adj: dict[int, set[int]] = {c: set() for c in self.nodes}
        for a, b in self.rates:
            adj[a].add(b)
            adj[b].add(a)
        return adj

    def scaled(self, factor: float) -> "NetworkSpec":
        """Copy with every no-swap rate multiplied by ``factor``."""
        if factor <= 0:
            raise NetworkError("scale factor must be positive")
        return NetworkSpec(self.swap_eff, {k: f * factor for k, f in self.rates.items()},
                           epsilon_eff=self.epsilon_eff)

    def with_params(self, *, swap_eff: float | Iterable[float] | None = None,
                    epsilon_eff: float | None = None) -> "NetworkSpec":
        """Copy with a new (uniform or per-node) swap efficiency and/or error."""
        q = self.swap_eff
        if swap_eff is not None:
            if isinstance(swap_eff, (int, float)):
                q = (float(swap_eff),) * self.num_nodes
            else:
                q = tuple(swap_eff)
        eps = self.epsilon_eff if epsilon_eff is None else epsilon_eff
        return NetworkSpec(q, self.rates, epsilon_eff=eps)

    def to_dict(self) -> dict:
        doc = {
            "nodes": [{"id": c, "q": qc} for c, qc in enumerate(self.swap_eff)],
            "links": [{"a": a, "b": b, "rate": f} for (a, b), f in self.rates.items()],
        }
        if self.ebar is not None:
            doc["ebar"] = self.ebar
        else:
            doc["epsilon_eff"] = self.epsilon_eff
        return doc

    @classmethod
    def from_dict(cls, doc: Mapping) -> "NetworkSpec":
        try:
            nodes = list(doc["nodes"])
            links = list(doc.get("links", []))
        except (KeyError, TypeError) as exc:
            raise NetworkError(f"malformed network document: {exc}") from None
        ids = [int(n["id"]) for n in nodes]
        if sorted(ids) != list(range(len(ids))):
            raise NetworkError("node ids must be exactly 0..M-1")
        q = [0.0] * len(ids)
        for n in nodes:
            q[int(n["id"])] = float(n["q"])
        rates: dict[Pair, float] = {}
        for link in links:
            a, b, f = int(link["a"]), int(link["b"]), float(link["rate"])
            if a == b:
                raise NetworkError(f"self-link on node {a}")
            key = pair(a, b)
            if key in rates and rates[key] != f:
                raise NetworkError(f"asymmetric rates for link {key}")
            rates[key] = f
        if "ebar" in doc and "epsilon_eff" in doc:
            if float(doc["epsilon_eff"]) != 2.0 * float(doc["ebar"]):
                raise NetworkError("epsilon_eff and ebar are both given and disagree")
        return cls(tuple(q), rates, epsilon_eff=float(doc.get("epsilon_eff", 0.0)),
                   ebar=doc.get("ebar"))


def make_chain(M: int, f: float, q: float, epsilon_eff: float = 0.0) -> NetworkSpec:
    """Homogeneous repeater chain ``0 - 1 - ... - M-1`` with link rate ``f``."""
    if M < 2:
        raise NetworkError(f"a chain needs M >= 2 nodes, got {M}")
    if f <= 0:
        raise NetworkError("link rate must be positive")
    return NetworkSpec((q,) * M, {(i, i + 1): f for i in range(M - 1)}, epsilon_eff=epsilon_eff)


def make_dumbbell(M_side: int, f_spoke: float, f_bar: float, q: float,
                  epsilon_eff: float = 0.0) -> NetworkSpec:
    """Two stars whose hubs (nodes 0 and 1) are joined by the bar link.

    Nodes ``2..M_side+1`` hang off hub 0 and ``M_side+2..2*M_side+1`` off
    hub 1, so ``M = 2*M_side + 2``.
    """
    if M_side < 1:
        raise NetworkError(f"need at least one spoke per side, got {M_side}")
    if f_spoke <= 0 or f_bar <= 0:
        raise NetworkError("spoke and bar rates must be positive")
    rates = {(0, 1): f_bar}
    for i in range(M_side):
        rates[(0, 2 + i)] = f_spoke
        rates[(1, 2 + M_side + i)] = f_spoke
    return NetworkSpec((q,) * (2 * M_side + 2), rates, epsilon_eff=epsilon_eff)


def split_node(net: NetworkSpec, node: int, copies: int, local_rate: float) -> NetworkSpec:
    """Split a multi-memory node into ``copies`` single-memory virtual nodes.

    The first copy keeps the original id and all external links; the others
    are appended as ids ``M, M+1, ...``. Every pair of copies is joined by a
    local link of rate ``local_rate`` and each copy inherits the parent's
    swap efficiency.
    """
    if not 0 <= node < net.num_nodes:
        raise NetworkError(f"unknown node {node}")
    if copies < 2:
        raise NetworkError(f"copies must be >= 2, got {copies}")
    if local_rate <= 0:
        raise NetworkError("local_rate must be positive")
    M = net.num_nodes
    virtual = [node] + list(range(M, M + copies - 1))
    q = list(net.swap_eff) + [net.swap_eff[node]] * (copies - 1)
    rates = dict(net.rates)
    for i, a in enumerate(virtual):
        for b in virtual[i + 1:]:
            rates[pair(a, b)] = local_rate
    return NetworkSpec(tuple(q), rates, epsilon_eff=net.epsilon_eff)


def save_network(net: NetworkSpec, path: str | PathLike) -> None:
    with open(path, "w") as fh:
        # json writes floats with repr, which round-trips exactly
        json.dump(net.to_dict(), fh, indent=2)
        fh.write("\n")


def load_network(path: str | PathLike) -> NetworkSpec:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise NetworkError(f"{path}: not a valid network document ({exc})") from None
    try:
        return NetworkSpec.from_dict(doc)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, NetworkError):
            raise
        raise NetworkError(f"{path}: malformed network document ({exc!r})") from None
