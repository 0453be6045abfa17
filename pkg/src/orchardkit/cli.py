"""Command-line front end. Thin adapters only; all logic lives in the library.

Exit codes: 0 success, 1 domain failure (invalid network, not orchard, ...),
2 usage or parse errors. The ORCHARDKIT_BUDGET environment variable
overrides enumeration budgets.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional

from . import (canonicalizer, cherry_engine, enewick_io, hgt_labelling,
               network_core, rearrangement, space_explorer)
from .network_core import NetworkError


def _budget(default: int = 100000) -> int:
    raw = os.environ.get("ORCHARDKIT_BUDGET")
    return int(raw) if raw else default


def _read_network(path: str) -> network_core.PhyloNetwork:
    with open(path, "r", encoding="utf-8") as handle:
        return enewick_io.parse(handle.read())


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _network_output(net: network_core.PhyloNetwork, fmt: str) -> str:
    if fmt == "json":
        return json.dumps({"enewick": enewick_io.write(net)})
    return enewick_io.write(net)


def cmd_validate(args) -> int:
    net = _read_network(args.network)
    report = network_core.validate(net)
    if report.ok:
        print("valid")
        return 0
    print(str(report), file=sys.stderr)
    return 1


def cmd_is_orchard(args) -> int:
    net = _read_network(args.network)
    seq = cherry_engine.is_orchard(net)
    if seq is None:
        print("not orchard", file=sys.stderr)
        return 1
    payload = enewick_io.sequence_to_json(seq)
    if args.sequence_out:
        _emit(payload, args.sequence_out)
    if args.format == "json":
        print(payload)
    else:
        print(" ".join(f"({x},{y})" for x, y in seq))
    return 0


def cmd_label(args) -> int:
    net = _read_network(args.network)
    labelling = hgt_labelling.construct(net)
    if labelling is None:
        print("not orchard: no HGT-consistent labelling exists", file=sys.stderr)
        return 1
    _emit(enewick_io.labelling_to_json(net, labelling.values), args.out)
    return 0


def cmd_base_tree(args) -> int:
    net = _read_network(args.network)
    labelling = hgt_labelling.construct(net)
    if labelling is None:
        print("not orchard: no base tree via horizontal arcs", file=sys.stderr)
        return 1
    tree = hgt_labelling.base_tree(net, labelling)
    _emit(_network_output(tree, args.format), args.out)
    return 0


def cmd_reduce(args) -> int:
    net = _read_network(args.network)
    try:
        x, y = args.pair.split(",")
    except ValueError:
        print("--pair expects two comma-separated taxa", file=sys.stderr)
        return 2
    reduced = cherry_engine.reduce_pair(net, x.strip(), y.strip())
    _emit(_network_output(reduced, args.format), args.out)
    return 0


def cmd_reconstruct(args) -> int:
    with open(args.seq, "r", encoding="utf-8") as handle:
        seq = enewick_io.sequence_from_json(handle.read())
    if args.survivor and (not len(seq) or seq.survivor != args.survivor):
        print(f"sequence survivor is "
              f"{seq.survivor if len(seq) else 'undefined'}, "
              f"expected {args.survivor}", file=sys.stderr)
        return 1
    net = cherry_engine.reconstruct(seq)
    _emit(_network_output(net, args.format), args.out)
    return 0


def cmd_neighbors(args) -> int:
    net = _read_network(args.network)
    pairs = rearrangement.rnni_neighbors(net, orchard_only=args.orchard_only)
    if args.format == "json":
        payload = [{"move": enewick_io.move_to_json(net, move),
                    "enewick": enewick_io.write(result)}
                   for move, result in pairs]
        _emit(json.dumps(payload, indent=2), args.out)
    else:
        _emit("\n".join(enewick_io.write(result) for _, result in pairs) or "",
              args.out)
    return 0


def cmd_path(args) -> int:
    net_a = _read_network(args.network_a)
    net_b = _read_network(args.network_b)
    try:
        trace = canonicalizer.orchard_path(net_a, net_b)
    except NetworkError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    _emit(enewick_io.trace_to_json(trace), args.out)
    return 0


def cmd_canonicalize(args) -> int:
    net = _read_network(args.network)
    try:
        trace = canonicalizer.canonicalize(net, args.leaf)
    except NetworkError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    if args.out:
        _emit(enewick_io.trace_to_json(trace), args.out)
    print(_network_output(trace.result, args.format))
    return 0


def cmd_explore(args) -> int:
    try:
        space = space_explorer.build_space(args.leaves, args.retics,
                                           budget=_budget())
    except space_explorer.BudgetExceededError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    connected = space_explorer.is_connected(space)
    info = {"vertices": len(space.vertices),
            "edges": sum(len(v) for v in space.edges.values()) // 2,
            "connected": connected}
    if args.diameter and connected and space.vertices:
        info["diameter"] = space_explorer.diameter(space)
        info["bound"] = space_explorer.diameter_upper_bound(args.leaves,
                                                              args.retics)
    if args.format == "json":
        print(json.dumps(info))
    else:
        print(" ".join(f"{key}={value}" for key, value in info.items()))
    if args.dump:
        _emit(space_explorer.dump_space(space), args.dump)
    return 0 if connected else 1


def cmd_random(args) -> int:
    net = cherry_engine.random_orchard(args.leaves, args.retics, seed=args.seed)
    _emit(_network_output(net, args.format), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orchardkit",
        description="Orchard phylogenetic network toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(func=func)
        p.add_argument("--format", choices=["enewick", "json"],
                       default="enewick")
        p.add_argument("--out", default=None, help="write output to a file")
        return p

    p = add("validate", cmd_validate, help="check network invariants")
    p.add_argument("network")

    p = add("is-orchard", cmd_is_orchard,
            help="recognise orchard networks, printing a cherry-picking sequence")
    p.add_argument("network")
    p.add_argument("--sequence-out", default=None)

    p = add("label", cmd_label, help="construct an HGT-consistent labelling")
    p.add_argument("network")

    p = add("base-tree", cmd_base_tree,
            help="delete horizontal arcs of the constructed labelling")
    p.add_argument("network")

    p = add("reduce", cmd_reduce, help="reduce one leaf pair")
    p.add_argument("network")
    p.add_argument("--pair", required=True, help="x,y")

    p = add("reconstruct", cmd_reconstruct,
            help="rebuild a network from a cherry-picking sequence")
    p.add_argument("--seq", required=True, help="sequence JSON file")
    p.add_argument("--survivor", default=None)

    p = add("neighbors", cmd_neighbors, help="enumerate rNNI neighbours")
    p.add_argument("network")
    p.add_argument("--orchard-only", action="store_true")

    p = add("path", cmd_path, help="build an rNNI path between two networks")
    p.add_argument("network_a")
    p.add_argument("network_b")

    p = add("canonicalize", cmd_canonicalize,
            help="move reticulations to the top and park a leaf below the head")
    p.add_argument("network")
    p.add_argument("--leaf", required=True)

    p = add("explore", cmd_explore, help="enumerate a small orchard space")
    p.add_argument("--leaves", type=int, required=True)
    p.add_argument("--retics", type=int, required=True)
    p.add_argument("--diameter", action="store_true")
    p.add_argument("--dump", default=None, help="write the space dump to a file")

    p = add("random", cmd_random, help="sample a random orchard network")
    p.add_argument("--leaves", type=int, required=True)
    p.add_argument("--retics", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    except enewick_io.ENewickError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    except (NetworkError, rearrangement.MoveError, ValueError) as exc:
        print(str(exc), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
