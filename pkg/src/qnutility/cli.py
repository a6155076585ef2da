"""Command-line driver: single solves, sweeps, bounds and entanglement-graph export."""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import experiments as ex
from .netmodel import NetworkError, load_network, make_chain, make_dumbbell
from .tasks import UtilityModel
from .utility import ACTIVE_THRESHOLD, SolverFailure, compute_utility, max_active_coalition_size


def _int_list(text: str) -> list[int]:
    """``"2:16"`` (inclusive) or ``"4,6,8"``."""
    if ":" in text:
        lo, hi = text.split(":", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(x) for x in text.split(",")]


def _ratio_grid(text: str) -> list[float]:
    """``"lo:hi:n"`` log-spaced grid, or comma-separated values."""
    if ":" in text:
        lo, hi, n = text.split(":")
        return np.logspace(math.log10(float(lo)), math.log10(float(hi)), int(n)).tolist()
    return [float(x) for x in text.split(",")]


def _model_flags(p: argparse.ArgumentParser, multi: bool) -> None:
    nargs = "+" if multi else None
    p.add_argument("--swap-eff", type=float, default=0.9, help="swap efficiency q of every node")
    p.add_argument("--beta", type=float, nargs=nargs, default=[1.5, 2.0, 3.0] if multi else 2.0)
    p.add_argument("--eps", type=float, nargs=nargs, default=[0.0, 0.01] if multi else None,
                   help="effective two-qubit gate error")
    p.add_argument("--taper-v0", type=float, default=None)
    p.add_argument("--mode", choices=["connected", "all"], default="connected")
    p.add_argument("--no-prune", action="store_true", help="disable the gate-error size cap")
    p.add_argument("--threshold", type=float, default=ACTIVE_THRESHOLD)
    p.add_argument("--force", action="store_true", help="allow --mode all above 20 nodes")


def _network_source(p: argparse.ArgumentParser) -> None:
    p.add_argument("--network", help="network document (JSON)")
    p.add_argument("--nodes", type=int, help="chain with this many nodes")
    p.add_argument("--side", type=int, help="dumbbell with this many spokes per side")
    p.add_argument("--link-rate", type=float, default=0.6)
    p.add_argument("--spoke-rate", type=float, default=0.6)
    p.add_argument("--bar-rate", type=float, default=0.6)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qnu", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("chain", help="solve one homogeneous repeater chain")
    p.add_argument("--nodes", type=int, required=True)
    p.add_argument("--link-rate", type=float, default=0.6)
    _model_flags(p, multi=False)
    _outputs(p)

    p = sub.add_parser("dumbbell", help="solve one dumbbell network")
    p.add_argument("--side", type=int, required=True)
    p.add_argument("--spoke-rate", type=float, default=0.6)
    p.add_argument("--bar-rate", type=float, default=0.6)
    _model_flags(p, multi=False)
    _outputs(p)

    p = sub.add_parser("solve", help="solve a network read from a file")
    p.add_argument("--network", required=True)
    _model_flags(p, multi=False)
    _outputs(p)

    p = sub.add_parser("sweep", help="chain-length or bar/spoke-ratio sweep to CSV")
    p.add_argument("family", choices=["chain", "dumbbell"])
    p.add_argument("--nodes", type=_int_list, default=list(range(2, 17)), help="e.g. 2:16")
    p.add_argument("--side", type=_int_list, default=[3], help="spokes per side, e.g. 1:5")
    p.add_argument("--ratios", type=_ratio_grid, default=_ratio_grid("0.1:100:13"),
                   help="bar/spoke ratios: lo:hi:n (log-spaced) or a,b,c")
    p.add_argument("--link-rate", "--spoke-rate", dest="link_rate", type=float, default=0.6)
    p.add_argument("--workers", type=int, default=1)
    _model_flags(p, multi=True)
    p.add_argument("--csv", help="output CSV path (stdout if omitted)")

    p = sub.add_parser("bounds", help="coalition-size bounds for a homogeneous chain")
    p.add_argument("--nodes", type=int, required=True)
    p.add_argument("--swap-eff", type=float, default=0.9)
    p.add_argument("--beta", type=float, default=2.0)
    p.add_argument("--eps", type=float, default=0.0)
    p.add_argument("--out", help="write the report as JSON")

    p = sub.add_parser("export-dot", help="solve and write the entanglement graph as DOT")
    _network_source(p)
    _model_flags(p, multi=False)
    p.add_argument("--out", required=True)
    return parser


def _outputs(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="write the results document (JSON) here instead of stdout")
    p.add_argument("--csv", help="write active tasks as CSV")
    p.add_argument("--dot", help="write the entanglement graph as DOT")


def _model(args) -> UtilityModel:
    return UtilityModel(args.beta, args.taper_v0)


def _with_eps(net, args):
    return net if args.eps is None else net.with_params(epsilon_eff=args.eps)


def _network_from(args):
    if args.command == "chain":
        return make_chain(args.nodes, args.link_rate, args.swap_eff, args.eps or 0.0)
    if args.command == "dumbbell":
        return make_dumbbell(args.side, args.spoke_rate, args.bar_rate, args.swap_eff, args.eps or 0.0)
    if getattr(args, "network", None):
        return _with_eps(load_network(args.network), args)
    if getattr(args, "nodes", None):
        return make_chain(args.nodes, args.link_rate, args.swap_eff, args.eps or 0.0)
    if getattr(args, "side", None):
        return make_dumbbell(args.side, args.spoke_rate, args.bar_rate, args.swap_eff, args.eps or 0.0)
    raise NetworkError("give one of --network, --nodes or --side")


def _solve(args):
    net = _network_from(args)
    return compute_utility(net, _model(args), mode=args.mode, prune=not args.no_prune,
                           threshold=args.threshold, force=args.force)


def _cmd_single(args) -> int:
    res = _solve(args)
    doc = res.to_dict()
    doc["max_coalition"] = max_active_coalition_size(res, args.threshold)
    text = json.dumps(doc, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
        print(f"U_comp={res.U_comp!r} noswap={res.noswap_baseline!r} ratio={res.ratio!r} "
              f"max_coalition={doc['max_coalition']}")
    else:
        print(text)
    if args.csv:
        ex.write_task_csv(res, args.csv)
    if args.dot:
        ex.export_entanglement_dot(res, args.dot)
    return 0


def _cmd_sweep(args) -> int:
    cfg = ex.SweepConfig(
        family=args.family, nodes=tuple(args.nodes), sides=tuple(args.side),
        ratios=tuple(args.ratios), link_rate=args.link_rate, swap_eff=args.swap_eff,
        betas=tuple(args.beta), eps=tuple(args.eps), taper_v0=args.taper_v0, mode=args.mode,
        prune=not args.no_prune, threshold=args.threshold, workers=args.workers)
    rows = ex.run_sweep(cfg)
    if args.csv:
        ex.write_csv(rows, args.csv)
    else:
        ex.rows_to_csv(rows, sys.stdout)
    failed = sum(r["status"] != "optimal" for r in rows)
    if failed:
        print(f"{failed} sweep point(s) did not solve", file=sys.stderr)
    return 0


def _cmd_bounds(args) -> int:
    rep = ex.bounds_report(args.nodes, args.swap_eff, args.beta, args.eps)
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(rep, fh, indent=2)
            fh.write("\n")
    print(ex.format_bounds_report(rep), end="")
    return 0


def _cmd_export_dot(args) -> int:
    res = _solve(args)
    ex.export_entanglement_dot(res, args.out)
    print(f"wrote {len(res.entanglement.support())} edges to {args.out}")
    return 0


COMMANDS = {"chain": _cmd_single, "dumbbell": _cmd_single, "solve": _cmd_single,
            "sweep": _cmd_sweep, "bounds": _cmd_bounds, "export-dot": _cmd_export_dot}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except SolverFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NetworkError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
