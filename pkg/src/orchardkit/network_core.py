"""Core data model for rooted phylogenetic networks.

A phylogenetic network is a rooted leaf-labelled DAG with four node kinds:

* root: indegree 0, outdegree 1
* tree node: indegree 1, outdegree >= 2
* reticulation: indegree >= 2, outdegree 1
* leaf: indegree 1, outdegree 0, bijectively labelled by taxa

``PhyloNetwork`` values are immutable; every structural operation returns a
new value with stable node identifiers, so move sequences can be replayed.
Parallel arcs are rejected at construction time.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Optional, Sequence


class NetworkError(Exception):
    """Raised for structurally invalid constructions or operations."""


NodeKind = str  # "root" | "tree" | "reticulation" | "leaf" | "other"


def _sorted_arcs(arcs: Iterable[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    return tuple(sorted(arcs))


class PhyloNetwork:
    """Immutable rooted leaf-labelled digraph.

    The constructor accepts arbitrary digraphs (so that :func:`validate` can
    report problems) but rejects parallel arcs and arcs with unknown
    endpoints outright.
    """

    __slots__ = ("_nodes", "_arcs", "_leaf_labels", "_children", "_parents",
                 "_label_to_leaf", "_hash", "_cache")

    def __init__(self, nodes: Iterable[int],
                 arcs: Iterable[tuple[int, int]],
                 leaf_labels: Mapping[int, str]):
        node_set = frozenset(int(v) for v in nodes)
        arc_list = [(int(u), int(v)) for u, v in arcs]
        arc_set = frozenset(arc_list)
        if len(arc_list) != len(arc_set):
            raise NetworkError("parallel arcs are not allowed")
        for u, v in arc_set:
            if u not in node_set or v not in node_set:
                raise NetworkError(f"arc ({u},{v}) references unknown node")
            if u == v:
                raise NetworkError(f"self-loop at node {u}")
        labels = dict(leaf_labels)
        for v in labels:
            if v not in node_set:
                raise NetworkError(f"label on unknown node {v}")
        if len(set(labels.values())) != len(labels):
            raise NetworkError("duplicate taxon names in leaf labels")

        self._nodes = node_set
        self._arcs = arc_set
        self._leaf_labels = labels
        children: dict[int, list[int]] = {v: [] for v in node_set}
        parents: dict[int, list[int]] = {v: [] for v in node_set}
        for u, v in sorted(arc_set):
            children[u].append(v)
            parents[v].append(u)
        self._children = {v: tuple(c) for v, c in children.items()}
        self._parents = {v: tuple(p) for v, p in parents.items()}
        self._label_to_leaf = {lab: v for v, lab in labels.items()}
        self._hash = hash((node_set, arc_set, tuple(sorted(labels.items()))))
        self._cache: dict[str, object] = {}

    # -- basic accessors ---------------------------------------------------

    @property
    def nodes(self) -> frozenset[int]:
        return self._nodes

    @property
    def arcs(self) -> frozenset[tuple[int, int]]:
        return self._arcs

    @property
    def leaf_labels(self) -> dict[int, str]:
        return dict(self._leaf_labels)

    def sorted_nodes(self) -> tuple[int, ...]:
        return tuple(sorted(self._nodes))

    def sorted_arcs(self) -> tuple[tuple[int, int], ...]:
        return _sorted_arcs(self._arcs)

    def children(self, v: int) -> tuple[int, ...]:
        return self._children[v]

    def parents(self, v: int) -> tuple[int, ...]:
        return self._parents[v]

    def indegree(self, v: int) -> int:
        return len(self._parents[v])

    def outdegree(self, v: int) -> int:
        return len(self._children[v])

    def node_kind(self, v: int) -> NodeKind:
        ind, outd = self.indegree(v), self.outdegree(v)
        if ind == 0:
            return "root"
        if ind == 1 and outd == 0:
            return "leaf"
        if ind == 1 and outd >= 2:
            return "tree"
        if ind >= 2 and outd == 1:
            return "reticulation"
        return "other"

    def is_leaf(self, v: int) -> bool:
        return self.indegree(v) == 1 and self.outdegree(v) == 0

    def is_reticulation(self, v: int) -> bool:
        return self.indegree(v) >= 2

    @property
    def root(self) -> int:
        roots = [v for v in self._nodes if self.indegree(v) == 0]
        if len(roots) != 1:
            raise NetworkError(f"expected exactly one root, found {len(roots)}")
        return roots[0]

    def leaves(self) -> tuple[int, ...]:
        return tuple(v for v in self.sorted_nodes() if self.is_leaf(v))

    def reticulations(self) -> tuple[int, ...]:
        return tuple(v for v in self.sorted_nodes() if self.is_reticulation(v))

    def taxa(self) -> frozenset[str]:
        return frozenset(self._leaf_labels.values())

    def taxon_of(self, v: int) -> str:
        return self._leaf_labels[v]

    def leaf_with_taxon(self, taxon: str) -> int:
        try:
            return self._label_to_leaf[taxon]
        except KeyError:
            raise NetworkError(f"unknown taxon {taxon!r}") from None

    def descendants(self, v: int) -> frozenset[int]:
        """All nodes strictly below ``v``."""
        seen: set[int] = set()
        stack = list(self._children[v])
        while stack:
            w = stack.pop()
            if w not in seen:
                seen.add(w)
                stack.extend(self._children[w])
        return frozenset(seen)

    def fresh_node(self) -> int:
        return max(self._nodes, default=-1) + 1

    # -- derived construction ----------------------------------------------

    def replace(self,
                add_nodes: Iterable[int] = (),
                drop_nodes: Iterable[int] = (),
                add_arcs: Iterable[tuple[int, int]] = (),
                drop_arcs: Iterable[tuple[int, int]] = (),
                add_labels: Mapping[int, str] | None = None) -> "PhyloNetwork":
        """Return a copy with the given edits applied, in drop-then-add order."""
        drop_n = set(drop_nodes)
        nodes = (self._nodes - drop_n) | set(add_nodes)
        arcs = {a for a in self._arcs
                if a not in set(drop_arcs)
                and a[0] not in drop_n and a[1] not in drop_n}
        for a in add_arcs:
            if a in arcs:
                raise NetworkError(f"edit would create parallel arc {a}")
            arcs.add(a)
        labels = {v: lab for v, lab in self._leaf_labels.items() if v in nodes}
        if add_labels:
            labels.update(add_labels)
        return PhyloNetwork(nodes, arcs, labels)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PhyloNetwork):
            return NotImplemented
        return (self._nodes == other._nodes and self._arcs == other._arcs
                and self._leaf_labels == other._leaf_labels)

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return (f"PhyloNetwork(|V|={len(self._nodes)}, |A|={len(self._arcs)}, "
                f"taxa={sorted(self.taxa())})")


# -- validation --------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    code: str
    detail: str


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, code: str, detail: str) -> None:
        self.violations.append(Violation(code, detail))

    def __str__(self) -> str:
        if self.ok:
            return "valid"
        return "; ".join(f"{v.code}: {v.detail}" for v in self.violations)


def is_acyclic(net: PhyloNetwork) -> bool:
    indeg = {v: net.indegree(v) for v in net.nodes}
    stack = [v for v, d in indeg.items() if d == 0]
    seen = 0
    while stack:
        u = stack.pop()
        seen += 1
        for w in net.children(u):
            indeg[w] -= 1
            if indeg[w] == 0:
                stack.append(w)
    return seen == len(net.nodes)


def validate(net: PhyloNetwork) -> ValidationReport:
    """Report every violated network invariant; empty report iff valid.

    Checks degree typing, the single-root condition, acyclicity, and the
    leaf-label bijection. Parallel arcs cannot occur because construction
    rejects them.
    """
    report = ValidationReport()
    roots = [v for v in net.sorted_nodes() if net.indegree(v) == 0]
    if len(roots) != 1:
        report.add("root", f"expected exactly one indegree-0 node, found {len(roots)}")
    for v in roots:
        if net.outdegree(v) != 1:
            report.add("root", f"root {v} has outdegree {net.outdegree(v)}, expected 1")
    for v in net.sorted_nodes():
        ind, outd = net.indegree(v), net.outdegree(v)
        if ind == 0:
            continue  # root typing handled above
        if ind == 1 and outd == 0:
            if v not in net.leaf_labels:
                report.add("labels", f"leaf {v} has no taxon label")
        elif ind == 1 and outd >= 2:
            pass  # tree node
        elif ind >= 2 and outd == 1:
            pass  # reticulation
        else:
            report.add("degree", f"node {v} has indegree {ind}, outdegree {outd}")
    for v in net.leaf_labels:
        if not net.is_leaf(v):
            report.add("labels", f"labelled node {v} is not a leaf")
    if not is_acyclic(net):
        report.add("acyclicity", "digraph contains a directed cycle")
    return report


def is_binary(net: PhyloNetwork) -> bool:
    """True iff every tree node and reticulation has total degree exactly 3."""
    for v in net.nodes:
        kind = net.node_kind(v)
        if kind in ("tree", "reticulation"):
            if net.indegree(v) + net.outdegree(v) != 3:
                return False
    return True


def reticulation_number(net: PhyloNetwork) -> int:
    """Total reticulation arcs minus total reticulation nodes."""
    return sum(net.indegree(v) - 1 for v in net.nodes if net.is_reticulation(v))


@dataclass(frozen=True)
class NodeKindSummary:
    n_leaves: int
    n_reticulations: int
    reticulation_number: int
    is_binary: bool


def summarize(net: PhyloNetwork) -> NodeKindSummary:
    return NodeKindSummary(
        n_leaves=len(net.leaves()),
        n_reticulations=len(net.reticulations()),
        reticulation_number=reticulation_number(net),
        is_binary=is_binary(net),
    )


# -- isomorphism (explicit backtracking search) ------------------------------

def _degree_signature(net: PhyloNetwork, v: int) -> tuple[int, int, Optional[str]]:
    return (net.indegree(v), net.outdegree(v), net.leaf_labels.get(v))


def find_isomorphism(a: PhyloNetwork, b: PhyloNetwork) -> Optional[dict[int, int]]:
    """Leaf-label-respecting digraph isomorphism from ``a`` onto ``b``.

    Returns a node mapping, or None. Kept independent of
    :func:`canonical_form` so the two can cross-check each other.
    """
    if len(a.nodes) != len(b.nodes) or len(a.arcs) != len(b.arcs):
        return None
    if a.taxa() != b.taxa():
        return None
    sig_a = sorted(_degree_signature(a, v) for v in a.nodes)
    sig_b = sorted(_degree_signature(b, v) for v in b.nodes)
    if sig_a != sig_b:
        return None

    mapping: dict[int, int] = {}
    used: set[int] = set()
    for tax in a.taxa():
        va, vb = a.leaf_with_taxon(tax), b.leaf_with_taxon(tax)
        mapping[va] = vb
        used.add(vb)

    def consistent(va: int, vb: int) -> bool:
        if _degree_signature(a, va) != _degree_signature(b, vb):
            return False
        for pa in a.parents(va):
            if pa in mapping and (mapping[pa], vb) not in b.arcs:
                return False
        for ca in a.children(va):
            if ca in mapping and (vb, mapping[ca]) not in b.arcs:
                return False
        # reverse direction: mapped b-neighbours must be matched by a-arcs
        inv = {w: v for v, w in mapping.items()}
        for pb in b.parents(vb):
            if pb in inv and (inv[pb], va) not in a.arcs:
                return False
        for cb in b.children(vb):
            if cb in inv and (va, inv[cb]) not in a.arcs:
                return False
        return True

    unmapped = [v for v in a.sorted_nodes() if v not in mapping]

    def pick_next() -> Optional[int]:
        # prefer nodes adjacent to the mapped region to maximise pruning
        for v in unmapped:
            if v in mapping:
                continue
            if any(p in mapping for p in a.parents(v)) or \
               any(c in mapping for c in a.children(v)):
                return v
        for v in unmapped:
            if v not in mapping:
                return v
        return None

    def extend() -> bool:
        va = pick_next()
        if va is None:
            return True
        for vb in b.sorted_nodes():
            if vb in used:
                continue
            if consistent(va, vb):
                mapping[va] = vb
                used.add(vb)
                if extend():
                    return True
                del mapping[va]
                used.remove(vb)
        return False

    if extend():
        return mapping
    return None


def are_isomorphic(a: PhyloNetwork, b: PhyloNetwork) -> bool:
    return find_isomorphism(a, b) is not None


# -- canonical form (colour refinement with individualisation) ---------------

def _refine(net: PhyloNetwork, colors: dict[int, int]) -> dict[int, int]:
    """Iterated directed colour refinement until the partition is stable."""
    while True:
        sigs = {}
        for v in net.nodes:
            sigs[v] = (colors[v],
                       tuple(sorted(colors[w] for w in net.children(v))),
                       tuple(sorted(colors[w] for w in net.parents(v))))
        ranking = {sig: i for i, sig in enumerate(sorted(set(sigs.values())))}
        new_colors = {v: ranking[sigs[v]] for v in net.nodes}
        if len(set(new_colors.values())) == len(set(colors.values())):
            return new_colors
        colors = new_colors


def _initial_colors(net: PhyloNetwork) -> dict[int, int]:
    sigs = {v: (net.indegree(v), net.outdegree(v), net.leaf_labels.get(v, ""))
            for v in net.nodes}
    ranking = {sig: i for i, sig in enumerate(sorted(set(sigs.values())))}
    return {v: ranking[sigs[v]] for v in net.nodes}


def _certificate(net: PhyloNetwork, order: Sequence[int]) -> bytes:
    pos = {v: i for i, v in enumerate(order)}
    arcs = sorted((pos[u], pos[v]) for u, v in net.arcs)
    labels = sorted((pos[v], lab) for v, lab in net.leaf_labels.items())
    return repr((len(order), arcs, labels)).encode()


def canonical_order(net: PhyloNetwork) -> tuple[int, ...]:
    """A node ordering invariant under relabelling of node identifiers.

    Colour refinement seeded by degrees and leaf labels, with backtracking
    individualisation on refinement ties; the minimum certificate over all
    branches is kept, so equal orderings arise exactly for isomorphic inputs.
    """
    cached = net._cache.get("canonical_order")
    if cached is not None:
        return cached  # type: ignore[return-value]

    best: list[tuple[bytes, tuple[int, ...]]] = []

    def search(colors: dict[int, int]) -> None:
        colors = _refine(net, colors)
        cells: dict[int, list[int]] = {}
        for v, c in colors.items():
            cells.setdefault(c, []).append(v)
        non_singleton = [c for c in sorted(cells) if len(cells[c]) > 1]
        if not non_singleton:
            order = tuple(sorted(net.nodes, key=lambda v: colors[v]))
            cert = _certificate(net, order)
            if not best or cert < best[0][0]:
                best[:] = [(cert, order)]
            return
        target = non_singleton[0]
        n_colors = len(set(colors.values()))
        for v in sorted(cells[target]):
            branched = dict(colors)
            branched[v] = n_colors  # individualise v into a fresh colour
            search(branched)

    search(_initial_colors(net))
    net._cache["canonical_order"] = best[0][1]
    return best[0][1]


def canonical_form(net: PhyloNetwork) -> bytes:
    """Deterministic byte-string key: equal keys iff networks are isomorphic."""
    cached = net._cache.get("canonical_form")
    if cached is None:
        cached = _certificate(net, canonical_order(net))
        net._cache["canonical_form"] = cached
    return cached  # type: ignore[return-value]


# -- contraction, suppression, resolution -------------------------------------

def contract_arc(net: PhyloNetwork, arc: tuple[int, int],
                 keep: str = "tail") -> PhyloNetwork:
    """Delete ``arc`` and identify its endpoints.

    ``keep`` selects which endpoint's identifier survives ("tail" or "head").
    """
    if arc not in net.arcs:
        raise NetworkError(f"arc {arc} not in network")
    u, v = arc
    survivor, gone = (u, v) if keep == "tail" else (v, u)
    new_arcs = []
    for (s, t) in net.arcs:
        if (s, t) == arc:
            continue
        s2 = survivor if s == gone else s
        t2 = survivor if t == gone else t
        new_arcs.append((s2, t2))
    if len(new_arcs) != len(set(new_arcs)):
        raise NetworkError(f"contracting {arc} would create parallel arcs")
    labels = {w: lab for w, lab in net.leaf_labels.items() if w != gone}
    if gone in net.leaf_labels:
        labels[survivor] = net.leaf_labels[gone]
    return PhyloNetwork(net.nodes - {gone}, new_arcs, labels)


def suppress_node(net: PhyloNetwork, v: int) -> PhyloNetwork:
    """Remove an indegree-1, outdegree-1 node and join its neighbours."""
    if v not in net.nodes:
        raise NetworkError(f"node {v} not in network")
    if net.indegree(v) != 1 or net.outdegree(v) != 1:
        raise NetworkError(f"node {v} is not suppressible "
                           f"(in={net.indegree(v)}, out={net.outdegree(v)})")
    u, = net.parents(v)
    w, = net.children(v)
    if (u, w) in net.arcs:
        raise NetworkError(f"suppressing {v} would create parallel arc ({u},{w})")
    return net.replace(drop_nodes=[v], add_arcs=[(u, w)])


def _binary_shapes(items: Sequence[int]) -> Iterator[object]:
    """All unordered binary-tree shapes over ``items`` as nested pairs."""
    if len(items) == 1:
        yield items[0]
        return
    first, rest = items[0], items[1:]
    # choose the subset joined with `first` in the left subtree
    for r in range(len(rest) + 1):
        for combo in itertools.combinations(range(len(rest)), r):
            left = [first] + [rest[i] for i in combo]
            right = [rest[i] for i in range(len(rest)) if i not in combo]
            if not right:
                continue
            for ls in _binary_shapes(left):
                for rs in _binary_shapes(right):
                    yield (ls, rs)


@dataclass
class ResolutionSet:
    networks: list[PhyloNetwork]
    truncated: bool


def binary_resolutions(net: PhyloNetwork, limit: int = 10000) -> ResolutionSet:
    """All binary resolutions of ``net`` up to isomorphism.

    Every node of outdegree above 2 (or indegree above 2) is replaced by each
    binary expansion tree of its child set (parent set); the cross product is
    deduplicated by canonical form. If more than ``limit`` raw combinations
    exist the enumeration stops early and the result is flagged truncated.
    """
    report = validate(net)
    if not report.ok:
        raise NetworkError(f"binary_resolutions requires a valid network: {report}")

    tasks: list[tuple[int, str, tuple[int, ...]]] = []
    for v in net.sorted_nodes():
        if net.node_kind(v) == "tree" and net.outdegree(v) > 2:
            tasks.append((v, "out", net.children(v)))
        elif net.node_kind(v) == "reticulation" and net.indegree(v) > 2:
            tasks.append((v, "in", net.parents(v)))

    if not tasks:
        return ResolutionSet([net], False)

    per_node_shapes = [list(_binary_shapes(items)) for (_, _, items) in tasks]

    seen: dict[bytes, PhyloNetwork] = {}
    truncated = False
    count = 0
    for combo in itertools.product(*per_node_shapes):
        count += 1
        if count > limit:
            truncated = True
            break
        resolved = net
        for (v, direction, items), shape in zip(tasks, combo):
            resolved = _expand_node(resolved, v, direction, items, shape)
        key = canonical_form(resolved)
        if key not in seen:
            seen[key] = resolved
    return ResolutionSet([seen[k] for k in sorted(seen)], truncated)


def _expand_node(net: PhyloNetwork, v: int, direction: str,
                 items: tuple[int, ...], shape: object) -> PhyloNetwork:
    """Replace the star at ``v`` by one binary expansion tree ``shape``.

    The outermost pairing of ``shape`` is realised by ``v`` itself, inner
    pairings by fresh nodes, so contracting the fresh arcs restores ``v``.
    """
    new_arcs: list[tuple[int, int]] = []
    next_id = [net.fresh_node()]

    def attach(node: int, s: object) -> None:
        left, right = s
        l_id, r_id = build(left), build(right)
        if direction == "out":
            new_arcs.append((node, l_id))
            new_arcs.append((node, r_id))
        else:
            new_arcs.append((l_id, node))
            new_arcs.append((r_id, node))

    def build(s: object) -> int:
        if not isinstance(s, tuple):
            return int(s)  # original neighbour attaches directly
        node = next_id[0]
        next_id[0] += 1
        attach(node, s)
        return node

    attach(v, shape)
    drop = [(v, c) for c in items] if direction == "out" else [(p, v) for p in items]
    fresh_nodes = range(net.fresh_node(), next_id[0])
    return net.replace(add_nodes=fresh_nodes, drop_arcs=drop,
                       add_arcs=new_arcs)


def resolving_contraction(resolution: PhyloNetwork, original: PhyloNetwork) -> PhyloNetwork:
    """Contract the expansion nodes of a resolution back down.

    Fresh tree nodes are folded into their parent, fresh reticulations into
    their child, which undoes :func:`binary_resolutions` exactly (up to node
    identifiers). Used to verify the resolution round trip.
    """
    net = resolution
    while True:
        fresh = [v for v in net.sorted_nodes() if v not in original.nodes]
        if not fresh:
            return net
        v = fresh[0]
        if net.node_kind(v) == "tree":
            parent, = net.parents(v)
            net = contract_arc(net, (parent, v), keep="tail")
        elif net.node_kind(v) == "reticulation":
            child, = net.children(v)
            net = contract_arc(net, (v, child), keep="head")
        else:
            raise NetworkError(f"unexpected expansion node kind at {v}")
