"""Extended Newick parsing and writing, plus JSON sidecar formats.

A reticulation with indegree d is written as d occurrences of the same
``#H<id>`` tag, exactly one of which carries the node's subtree. The writer
is deterministic: children are ordered by canonical subkeys, so isomorphic
networks serialise to identical strings and ``write`` is idempotent under
re-parsing.

JSON sidecars address nodes by "node paths": dot-separated child indices
from the root under the writer's ordering (the root itself is ``""``, its
unique child ``"0"``). A reticulation is addressed through the parent that
carries its subtree.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Optional

from .network_core import (NetworkError, PhyloNetwork, canonical_order,
                           validate)

TAXON_RE = re.compile(r"[A-Za-z0-9_.\-]+")
HYBRID_RE = re.compile(r"#H(\d+)")


class ENewickError(NetworkError):
    """Syntax or semantic error in an extended Newick document."""

    def __init__(self, message: str, offset: Optional[int] = None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (at byte {offset})"
        super().__init__(message)


# -- parsing -------------------------------------------------------------------

class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.next_id = 0
        self.nodes: list[int] = []
        self.arcs: list[tuple[int, int]] = []
        self.labels: dict[int, str] = {}
        self.hybrids: dict[str, int] = {}
        self.hybrid_subtree_count: dict[str, int] = {}
        self.hybrid_occurrences: dict[str, int] = {}

    def error(self, message: str) -> ENewickError:
        return ENewickError(message, self.pos)

    def fresh(self) -> int:
        node = self.next_id
        self.next_id += 1
        self.nodes.append(node)
        return node

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def parse(self) -> PhyloNetwork:
        self.skip_ws()
        top = self.parse_subtree()
        self.skip_ws()
        if self.peek() != ";":
            raise self.error("expected ';' terminating the statement")
        self.pos += 1
        self.skip_ws()
        if self.pos != len(self.text):
            raise self.error("trailing content after ';'")
        for tag, count in self.hybrid_occurrences.items():
            if count < 2:
                raise self.error(f"hybrid tag #H{tag} used only once")
            if self.hybrid_subtree_count.get(tag, 0) != 1:
                raise self.error(
                    f"hybrid tag #H{tag} must carry a subtree exactly once, "
                    f"found {self.hybrid_subtree_count.get(tag, 0)}")
        root = self.fresh()
        self.arcs.append((root, top))
        try:
            net = PhyloNetwork(self.nodes, self.arcs, self.labels)
        except NetworkError as exc:
            raise ENewickError(str(exc)) from exc
        report = validate(net)
        if not report.ok:
            raise ENewickError(f"document encodes an invalid network: {report}")
        return net

    def parse_subtree(self) -> int:
        self.skip_ws()
        children: list[int] = []
        has_group = False
        if self.peek() == "(":
            has_group = True
            self.pos += 1
            children.append(self.parse_subtree())
            self.skip_ws()
            while self.peek() == ",":
                self.pos += 1
                children.append(self.parse_subtree())
                self.skip_ws()
            if self.peek() != ")":
                raise self.error("expected ')' or ','")
            self.pos += 1
        name, hybrid = self.parse_name()
        self.parse_branch_annotation()

        if hybrid is not None:
            node = self.hybrids.get(hybrid)
            if node is None:
                node = self.fresh()
                self.hybrids[hybrid] = node
            self.hybrid_occurrences[hybrid] = \
                self.hybrid_occurrences.get(hybrid, 0) + 1
            if has_group:
                self.hybrid_subtree_count[hybrid] = \
                    self.hybrid_subtree_count.get(hybrid, 0) + 1
                for child in children:
                    if (node, child) in self.arcs:
                        raise self.error("parallel arc below hybrid node")
                    self.arcs.append((node, child))
            return node

        node = self.fresh()
        if has_group:
            for child in children:
                if (node, child) in self.arcs:
                    raise self.error("parallel arc in document")
                self.arcs.append((node, child))
            # internal names other than hybrid tags are ignored
            return node
        if name is None:
            raise self.error("leaf without a taxon name")
        if name in self.labels.values():
            raise self.error(f"taxon {name!r} appears on two leaves")
        self.labels[node] = name
        return node

    def parse_name(self) -> tuple[Optional[str], Optional[str]]:
        self.skip_ws()
        m = TAXON_RE.match(self.text, self.pos)
        name = None
        if m:
            name = m.group(0)
            self.pos = m.end()
        hybrid = None
        if self.peek() == "#":
            h = HYBRID_RE.match(self.text, self.pos)
            if not h:
                raise self.error("expected hybrid tag of the form #H<digits>")
            hybrid = h.group(1)
            self.pos = h.end()
        return name, hybrid

    def parse_branch_annotation(self) -> None:
        # branch lengths / support values are accepted and discarded
        while self.peek() == ":":
            self.pos += 1
            m = re.match(r"-?\d+(\.\d+)?([eE][+-]?\d+)?", self.text[self.pos:])
            if not m:
                raise self.error("expected a number after ':'")
            self.pos += m.end()


def parse(text: str) -> PhyloNetwork:
    """Parse one rooted extended Newick statement into a valid network."""
    return _Parser(text).parse()


# -- writing -------------------------------------------------------------------

def _writer_state(net: PhyloNetwork):
    """Canonical child order, hybrid numbering, and subtree-carrying parents."""
    order = canonical_order(net)
    pos = {v: i for i, v in enumerate(order)}
    retics = sorted((v for v in net.nodes if net.is_reticulation(v)),
                    key=lambda v: pos[v])
    hybrid_ids = {v: i + 1 for i, v in enumerate(retics)}
    carrier = {v: min(net.parents(v), key=lambda p: pos[p]) for v in retics}
    return pos, hybrid_ids, carrier


def write(net: PhyloNetwork) -> str:
    """Serialise to extended Newick, deterministically.

    Children are ordered by canonical position; each reticulation's subtree
    is written under its canonically-first parent and referenced as a bare
    ``#H<id>`` elsewhere.
    """
    report = validate(net)
    if not report.ok:
        raise ENewickError(f"cannot serialise an invalid network: {report}")
    pos, hybrid_ids, carrier = _writer_state(net)

    def render(v: int, parent: Optional[int]) -> str:
        if net.is_reticulation(v):
            tag = f"#H{hybrid_ids[v]}"
            if parent is not None and carrier[v] != parent:
                return tag
            child, = net.children(v)
            return f"({render(child, v)}){tag}"
        if net.is_leaf(v):
            return net.leaf_labels[v]
        kids = sorted(net.children(v), key=lambda c: pos[c])
        return "(" + ",".join(render(c, v) for c in kids) + ")"

    top, = net.children(net.root)
    return render(top, net.root) + ";"


# -- node paths and JSON sidecars ----------------------------------------------

def node_paths(net: PhyloNetwork) -> dict[int, str]:
    """Stable node addresses: child-index paths under the writer's ordering."""
    pos, _, carrier = _writer_state(net)
    paths: dict[int, str] = {net.root: ""}

    def walk(v: int, path: str) -> None:
        paths[v] = path
        if net.is_reticulation(v):
            kids = list(net.children(v))
        else:
            kids = sorted(net.children(v), key=lambda c: pos[c])
        for i, c in enumerate(kids):
            if net.is_reticulation(c) and carrier[c] != v:
                continue
            walk(c, f"{path}.{i}" if path else str(i))

    top, = net.children(net.root)
    walk(top, "0")
    return paths


def node_for_path(net: PhyloNetwork, path: str) -> int:
    inverse = {p: v for v, p in node_paths(net).items()}
    try:
        return inverse[path]
    except KeyError:
        raise ENewickError(f"no node at path {path!r}") from None


def labelling_to_json(net: PhyloNetwork, values: dict[int, Fraction]) -> str:
    paths = node_paths(net)
    payload = {paths[v]: f"{f.numerator}/{f.denominator}"
               for v, f in sorted(values.items(), key=lambda kv: paths[kv[0]])}
    return json.dumps(payload, indent=2, sort_keys=True)


def labelling_from_json(net: PhyloNetwork, text: str) -> dict[int, Fraction]:
    payload = json.loads(text)
    out: dict[int, Fraction] = {}
    for path, value in payload.items():
        num, _, den = value.partition("/")
        out[node_for_path(net, path)] = Fraction(int(num), int(den or "1"))
    return out


def move_to_json(net: PhyloNetwork, move) -> dict:
    """Encode a move's node roles as node paths relative to the pre-move net."""
    paths = node_paths(net)
    return {
        "p": paths[move.p], "x": paths[move.x], "c": paths[move.c],
        "e": [paths[move.e[0]], paths[move.e[1]]],
        "z": paths[move.z], "w": paths[move.w],
    }


def move_from_json(net: PhyloNetwork, payload: dict):
    from .rearrangement import RnniMove
    resolve = lambda p: node_for_path(net, p)
    return RnniMove(p=resolve(payload["p"]), x=resolve(payload["x"]),
                    c=resolve(payload["c"]),
                    e=(resolve(payload["e"][0]), resolve(payload["e"][1])),
                    z=resolve(payload["z"]), w=resolve(payload["w"]))


def sequence_to_json(seq) -> str:
    return json.dumps([[x, y] for x, y in seq], indent=2)


def sequence_from_json(text: str):
    from .cherry_engine import CherrySequence
    data = json.loads(text)
    return CherrySequence(tuple((str(x), str(y)) for x, y in data))


def trace_to_json(trace) -> str:
    """Serialise a move trace: per step, the move, result, and labelling."""
    steps = []
    prev = trace.start
    for move, net_after, lab_after in zip(trace.moves, trace.networks,
                                          trace.labellings):
        steps.append({
            "move": move_to_json(prev, move),
            "enewick_after": write(net_after),
            "labelling_after": json.loads(labelling_to_json(net_after,
                                                            lab_after.values)),
        })
        prev = net_after
    return json.dumps(steps, indent=2)
