"""Parameter sweeps over chains and dumbbells, and plot-ready exports."""

from __future__ import annotations

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from os import PathLike
from typing import IO, Sequence

import numpy as np

from .netmodel import NetworkSpec, make_chain, make_dumbbell
from .tasks import UtilityModel
from .utility import (ACTIVE_THRESHOLD, SolverFailure, UtilityResult, compute_utility,
                      max_active_coalition_size, prop2_lower_bound, prop3_upper_bound,
                      prop4_lower_bound)

CHAIN_COLUMNS = ["M", "beta", "eps", "U_comp", "noswap", "ratio", "max_coalition", "status",
                 "max_residual"]
DUMBBELL_COLUMNS = ["M_side", "bar_spoke_ratio", "beta", "eps", "U_comp", "noswap", "U_ratio",
                    "max_coalition", "status", "max_residual"]


@dataclass(frozen=True)
class SweepConfig:
    """Grid for a chain or dumbbell sweep.

    Chains sweep ``nodes``; dumbbells sweep ``ratios`` (bar rate over spoke
    rate) for every entry of ``sides``. ``link_rate`` is the chain link rate
    or the dumbbell spoke rate.
    """

    family: str = "chain"
    nodes: Sequence[int] = tuple(range(2, 17))
    sides: Sequence[int] = (3,)
    ratios: Sequence[float] = tuple(np.logspace(-1, 2, 13).tolist())
    link_rate: float = 0.6
    swap_eff: float = 0.9
    betas: Sequence[float] = (1.5, 2.0, 3.0)
    eps: Sequence[float] = (0.0, 0.01)
    taper_v0: float | None = None
    mode: str = "connected"
    prune: bool = True
    threshold: float = ACTIVE_THRESHOLD
    workers: int = field(default=1, compare=False)

    def __post_init__(self):
        if self.family not in ("chain", "dumbbell"):
            raise ValueError(f"unknown family {self.family!r}")
        grid = self.nodes if self.family == "chain" else self.ratios
        if not len(grid) or not len(self.betas) or not len(self.eps):
            raise ValueError("sweep ranges must be non-empty")
        if self.family == "dumbbell" and (not len(self.sides) or any(r <= 0 for r in self.ratios)):
            raise ValueError("dumbbell sweeps need sides and strictly positive ratios")


def _solve_point(net: NetworkSpec, cfg: SweepConfig, beta: float) -> dict:
    model = UtilityModel(beta, cfg.taper_v0)
    try:
        res = compute_utility(net, model, mode=cfg.mode, prune=cfg.prune, threshold=cfg.threshold)
    except SolverFailure as exc:
        return {"U_comp": math.nan, "noswap": math.nan, "ratio": math.nan, "max_coalition": -1,
                "status": exc.status.value, "max_residual": math.nan}
    return {"U_comp": res.U_comp, "noswap": res.noswap_baseline, "ratio": res.ratio,
            "max_coalition": max_active_coalition_size(res, cfg.threshold),
            "status": res.status.value, "max_residual": res.max_residual}


def _chain_job(args):
    cfg, M, beta, eps = args
    row = {"M": M, "beta": beta, "eps": eps}
    row.update(_solve_point(make_chain(M, cfg.link_rate, cfg.swap_eff, eps), cfg, beta))
    return row


def _dumbbell_job(args):
    cfg, side, ratio, beta, eps = args
    net = make_dumbbell(side, cfg.link_rate, cfg.link_rate * ratio, cfg.swap_eff, eps)
    out = _solve_point(net, cfg, beta)
    row = {"M_side": side, "bar_spoke_ratio": ratio, "beta": beta, "eps": eps}
    row.update(out, U_ratio=out.pop("ratio"))
    return row


def _run(fn, jobs, workers):
    if workers <= 1:
        return [fn(j) for j in jobs]
    # map() yields in submission order whatever the completion order
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, jobs))


def run_chain_sweep(cfg: SweepConfig) -> list[dict]:
    """One row per ``(beta, eps, M)``, in that nesting order."""
    jobs = [(cfg, M, b, e) for b in cfg.betas for e in cfg.eps for M in cfg.nodes]
    return _run(_chain_job, jobs, cfg.workers)


def run_dumbbell_sweep(cfg: SweepConfig) -> list[dict]:
    """One row per ``(M_side, beta, eps, ratio)``, in that nesting order."""
    jobs = [(cfg, s, r, b, e) for s in cfg.sides for b in cfg.betas for e in cfg.eps
            for r in cfg.ratios]
    return _run(_dumbbell_job, jobs, cfg.workers)


def run_sweep(cfg: SweepConfig) -> list[dict]:
    return run_chain_sweep(cfg) if cfg.family == "chain" else run_dumbbell_sweep(cfg)


def rows_to_csv(rows: Sequence[dict], fh: IO[str], columns: Sequence[str] | None = None) -> None:
    """Write sweep rows with a fixed column order; floats use ``repr`` so reruns are byte-identical."""
    if columns is None:
        columns = CHAIN_COLUMNS if rows and "M" in rows[0] else DUMBBELL_COLUMNS
    w = csv.DictWriter(fh, fieldnames=list(columns), lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: (repr(float(v)) if isinstance(v, float) else v) for k, v in row.items()})


def write_csv(rows: Sequence[dict], path: str | PathLike, columns: Sequence[str] | None = None) -> None:
    with open(path, "w", newline="") as fh:
        rows_to_csv(rows, fh, columns)


def write_task_csv(result: UtilityResult, path: str | PathLike) -> None:
    doc = result.to_dict()
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["members", "size", "depth", "rate", "utility_share"])
        for t in doc["tasks"]:
            w.writerow([" ".join(map(str, t["members"])), len(t["members"]), t["depth"],
                        repr(t["rate"]), repr(t["utility_share"])])


def entanglement_dot(result: UtilityResult, name: str = "entanglement") -> str:
    """Graphviz text for the entanglement graph.

    Nodes sit on a circle in id order. Edge darkness is the consumed rate
    over the largest consumed rate in this graph.
    """
    g = result.entanglement
    M = g.num_nodes
    lines = [f"graph {name} {{", "  layout=neato;", "  node [shape=circle];"]
    for c in range(M):
        ang = math.pi / 2 - 2 * math.pi * c / M
        lines.append(f'  {c} [pos="{3 * math.cos(ang):.4f},{3 * math.sin(ang):.4f}!"];')
    for (a, b), x in g.normalized().items():
        gray = round(100 * (1 - x))
        lines.append(f'  {a} -- {b} [color="gray{gray}", intensity={x:.6f}, '
                     f'rate={g.rates[(a, b)]!r}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_entanglement_dot(result: UtilityResult, path: str | PathLike, name: str = "entanglement") -> None:
    with open(path, "w") as fh:
        fh.write(entanglement_dot(result, name))


def bounds_report(M: int, q: float, beta: float, epsilon: float) -> dict:
    """Coalition-size bounds for a homogeneous chain; ``None`` where a bound does not apply."""
    if M < 2 or not 0 < q <= 1 or beta <= 1 or epsilon < 0:
        raise ValueError("need M >= 2, 0 < q <= 1, beta > 1 and epsilon >= 0")
    upper = prop3_upper_bound(epsilon)
    lower_err = None
    if epsilon > 0 and 2 <= upper <= M:
        lower_err = prop4_lower_bound(M, q, beta, epsilon)
    return {
        "M": M, "q": q, "beta": beta, "eps": epsilon,
        "prop2_lower": prop2_lower_bound(M, q, beta) if epsilon == 0 else None,
        "prop3_upper": None if math.isinf(upper) else int(upper),
        "prop4_lower": lower_err,
    }


def format_bounds_report(rep: dict) -> str:
    def fmt(v):
        return "n/a" if v is None else (f"{v:.4f}" if isinstance(v, float) else str(v))

    return "\n".join([
        f"homogeneous chain M={rep['M']} q={rep['q']} beta={rep['beta']} eps={rep['eps']}",
        f"  largest coalition >= {fmt(rep['prop2_lower'])}  (error-free lower bound)",
        f"  largest coalition <= {fmt(rep['prop3_upper'])}  (gate-error cap)",
        f"  largest coalition >= {fmt(rep['prop4_lower'])}  (lower bound with errors)",
    ]) + "\n"
