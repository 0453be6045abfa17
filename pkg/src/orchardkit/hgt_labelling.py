"""HGT-consistent labellings: time values certifying tree-plus-horizontal-arcs.

A labelling t of a bounded-degree digraph is HGT-consistent when

1. every arc (u, v) has t(u) <= t(v), with equality only into an
   indegree-2 node,
2. every node with children has some strictly later child, and
3. every indegree-2 node is contemporaneous with exactly one parent.

Labels are exact rationals throughout; small perturbations are realised as
midpoints between neighbouring existing labels, so ties are never a matter
of floating-point luck.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from .cherry_engine import is_orchard, reduce_pair
from .network_core import (NetworkError, PhyloNetwork, is_binary,
                           suppress_node, validate)


class LabellingError(NetworkError):
    pass


class SearchTooLargeError(NetworkError):
    """Exhaustive order-type search beyond the documented instance cap."""


@dataclass(frozen=True)
class HgtLabelling:
    """Exact-rational time label per node."""

    values: dict[int, Fraction]

    def __getitem__(self, node: int) -> Fraction:
        return self.values[node]

    def updated(self, changes: dict[int, Fraction]) -> "HgtLabelling":
        merged = dict(self.values)
        merged.update(changes)
        return HgtLabelling(merged)

    def restricted_to(self, nodes: Iterable[int]) -> "HgtLabelling":
        keep = set(nodes)
        return HgtLabelling({v: t for v, t in self.values.items() if v in keep})

    def tied_pairs(self) -> list[tuple[int, int]]:
        """Unordered node pairs sharing a label."""
        by_value: dict[Fraction, list[int]] = {}
        for v, t in self.values.items():
            by_value.setdefault(t, []).append(v)
        out = []
        for group in by_value.values():
            for a, b in itertools.combinations(sorted(group), 2):
                out.append((a, b))
        return out


@dataclass
class VerifyReport:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def verify(net: PhyloNetwork, labelling: HgtLabelling) -> VerifyReport:
    """Check the three labelling properties on a bounded-degree digraph.

    Works for any digraph with indegree and outdegree at most 2 and total
    degree at most 3, not only valid networks, so rearrangement results can
    be certified directly.
    """
    t = labelling.values
    missing = [v for v in net.nodes if v not in t]
    if missing:
        raise LabellingError(f"labelling not total, missing nodes {sorted(missing)}")
    for v in net.nodes:
        ind, outd = net.indegree(v), net.outdegree(v)
        if ind > 2 or outd > 2 or (ind + outd) > 3:
            raise LabellingError(
                f"node {v} exceeds the degree bounds (in={ind}, out={outd})")
    report = VerifyReport()
    for (u, v) in net.sorted_arcs():
        if t[u] > t[v]:
            report.violations.append(
                f"property 1: arc ({u},{v}) decreases ({t[u]} > {t[v]})")
        elif t[u] == t[v] and net.indegree(v) != 2:
            report.violations.append(
                f"property 1: tie on arc ({u},{v}) into non-reticulation {v}")
    for u in net.sorted_nodes():
        kids = net.children(u)
        if kids and not any(t[u] < t[c] for c in kids):
            report.violations.append(
                f"property 2: node {u} has no strictly later child")
    for r in net.sorted_nodes():
        if net.indegree(r) == 2:
            u, v = net.parents(r)
            ties = int(t[u] == t[r]) + int(t[v] == t[r])
            if ties != 1:
                report.violations.append(
                    f"property 3: reticulation {r} is contemporaneous with "
                    f"{ties} parents, expected exactly 1")
    return report


def construct(net: PhyloNetwork) -> Optional[HgtLabelling]:
    """Build a labelling from a cherry-picking sequence, or None if not orchard.

    With a sequence of length m: the root gets 0, the j-th leaf (in sorted
    taxon order) gets m + j, and every internal node removed at reduction
    step i gets m + 1 - i. Two nodes share a label only when they are a tree
    parent and its reticulation child, one such pair per reticulation.
    """
    if not is_binary(net):
        raise LabellingError("labelling construction requires a binary network")
    seq = is_orchard(net)
    if seq is None:
        return None
    m = len(seq)
    values: dict[int, Fraction] = {net.root: Fraction(0)}
    for j, taxon in enumerate(sorted(net.taxa()), start=1):
        values[net.leaf_with_taxon(taxon)] = Fraction(m + j)
    cur = net
    for i, (x, y) in enumerate(seq, start=1):
        nxt = reduce_pair(cur, x, y)
        removed_leaf = cur.leaf_with_taxon(x) if x not in nxt.taxa() else None
        for v in cur.nodes - nxt.nodes:
            if v != removed_leaf:
                values[v] = Fraction(m + 1 - i)
        cur = nxt
    return HgtLabelling(values)


def exists_labelling(net: PhyloNetwork) -> bool:
    """Whether a binary network admits an HGT-consistent labelling.

    Coincides with orchard recognition; the independent order-type search
    (:func:`search_consistent_labelling`) serves as a small-instance oracle.
    """
    if not is_binary(net):
        raise LabellingError("exists_labelling is defined for binary networks")
    return is_orchard(net) is not None


def base_tree(net: PhyloNetwork, labelling: HgtLabelling) -> PhyloNetwork:
    """Delete horizontal arcs (equal endpoint labels) and suppress; a tree remains."""
    report = verify(net, labelling)
    if not report.ok:
        raise LabellingError("labelling is not HGT-consistent: "
                             + "; ".join(report.violations))
    t = labelling.values
    horizontal = [(u, v) for (u, v) in net.sorted_arcs() if t[u] == t[v]]
    out = net.replace(drop_arcs=horizontal)
    while True:
        removable = [v for v in out.sorted_nodes()
                     if out.indegree(v) == 1 and out.outdegree(v) == 1]
        if not removable:
            break
        out = suppress_node(out, removable[0])
    result = validate(out)
    if not result.ok or any(out.is_reticulation(v) for v in out.nodes):
        raise LabellingError(f"horizontal-arc deletion did not yield a tree: {result}")
    return out


def find_crown(net: PhyloNetwork) -> Optional[frozenset[int]]:
    """A crown: nodes u_1..u_k, v_1..v_k with arcs (u_i,v_i) and (u_i,v_{i+1}).

    Each v_i then has two tree-node parents u_{i-1}, u_i, so the search runs
    over the multigraph on reticulations whose edges are tree nodes with two
    reticulation children; any simple cycle (including a doubled edge) is a
    crown. Presence certifies that no HGT-consistent labelling exists.
    """
    edges: list[tuple[int, int, int]] = []  # (tree node, retic a, retic b)
    for u in net.sorted_nodes():
        kids = [c for c in net.children(u) if net.is_reticulation(c)]
        for a, b in itertools.combinations(sorted(kids), 2):
            edges.append((u, a, b))

    # doubled edge: two tree nodes sharing the same reticulation pair
    by_pair: dict[tuple[int, int], list[int]] = {}
    for u, a, b in edges:
        by_pair.setdefault((a, b), []).append(u)
    for (a, b), us in sorted(by_pair.items()):
        if len(us) >= 2:
            return frozenset({us[0], us[1], a, b})

    # longer cycles: DFS on the simple graph over reticulations
    adjacency: dict[int, list[tuple[int, int]]] = {}
    for u, a, b in edges:
        adjacency.setdefault(a, []).append((b, u))
        adjacency.setdefault(b, []).append((a, u))

    def cycle_from(start: int) -> Optional[frozenset[int]]:
        stack = [(start, -1, [start], [])]
        while stack:
            node, via, path, links = stack.pop()
            for (nxt, u) in sorted(adjacency.get(node, [])):
                if u == via:
                    continue
                if nxt == start and len(path) >= 3:
                    return frozenset(path) | frozenset(links + [u])
                if nxt not in path:
                    stack.append((nxt, u, path + [nxt], links + [u]))
        return None

    for start in sorted(adjacency):
        found = cycle_from(start)
        if found is not None:
            return found
    return None


# -- exhaustive order-type searches ---------------------------------------------

def _internal_nodes(net: PhyloNetwork) -> list[int]:
    return [v for v in net.sorted_nodes() if not net.is_leaf(v)]


def _ordered_partitions(items: list[int], parents: dict[int, list[int]],
                        tie_ok: dict[int, bool]):
    """Weak orders of ``items`` respecting arc directions.

    Successive blocks share a label; a node may share its block with a
    parent only when ``tie_ok`` allows it (it is a reticulation). Parents
    never land in later blocks than their children.
    """

    def extend(assigned: dict[int, int], remaining: frozenset[int], level: int):
        if not remaining:
            yield dict(assigned)
            return
        eligible = [v for v in remaining
                    if all(p in assigned or (p in remaining and tie_ok[v])
                           for p in parents[v])]
        for r in range(1, len(eligible) + 1):
            for block in itertools.combinations(eligible, r):
                block_set = set(block)
                valid = True
                for v in block:
                    for p in parents[v]:
                        if p in block_set and not tie_ok[v]:
                            valid = False
                        if p in remaining and p not in block_set:
                            valid = False
                    if not valid:
                        break
                if not valid:
                    continue
                for v in block:
                    assigned[v] = level
                yield from extend(assigned, remaining - block_set, level + 1)
                for v in block:
                    del assigned[v]

    yield from extend({}, frozenset(items), 0)


def _search_order_types(net: PhyloNetwork, naive_rule: bool,
                        max_internal: int) -> Optional[HgtLabelling]:
    internal = _internal_nodes(net)
    if len(internal) > max_internal:
        raise SearchTooLargeError(
            f"{len(internal)} internal nodes exceeds the cap of {max_internal} "
            f"for exhaustive order-type search")
    internal_set = set(internal)
    parents = {v: [p for p in net.parents(v)] for v in internal}
    tie_ok = {v: net.is_reticulation(v) for v in internal}

    for assignment in _ordered_partitions(internal, parents, tie_ok):
        ok = True
        for (u, v) in net.arcs:
            if v not in internal_set:
                continue  # leaves sit strictly later than every internal node
            if assignment[u] > assignment[v]:
                ok = False
                break
            if assignment[u] == assignment[v] and not net.is_reticulation(v):
                ok = False
                break
        if not ok:
            continue
        for u in internal:
            kids = net.children(u)
            if not kids:
                ok = False  # an internal node must have children
                break
            if not any((c not in internal_set) or assignment[u] < assignment[c]
                       for c in kids):
                ok = False
                break
        if not ok:
            continue
        for r in internal:
            if not net.is_reticulation(r):
                continue
            ties = sum(1 for p in net.parents(r)
                       if assignment[p] == assignment[r])
            needed = net.indegree(r) - 1 if naive_rule else 1
            if ties != needed:
                ok = False
                break
        if not ok:
            continue
        top = max(assignment.values(), default=0)
        values = {v: Fraction(assignment[v]) for v in internal}
        for j, taxon in enumerate(sorted(net.taxa()), start=1):
            values[net.leaf_with_taxon(taxon)] = Fraction(top + j)
        return HgtLabelling(values)
    return None


def search_consistent_labelling(net: PhyloNetwork,
                                max_internal: int = 10) -> Optional[HgtLabelling]:
    """Independent oracle: exhaustive search for a consistent labelling.

    Enumerates weak orderings of the internal nodes (leaves can always be
    pushed later than everything, so they never constrain the search).
    Instance size is capped because ordered Bell numbers grow fast.
    """
    if not is_binary(net):
        raise LabellingError("the exhaustive oracle expects a binary network")
    return _search_order_types(net, naive_rule=False, max_internal=max_internal)


def check_naive_nonbinary_rule(net: PhyloNetwork, max_internal: int = 10) -> bool:
    """Whether some labelling makes every reticulation contemporaneous with
    all but one parent (plus the monotonicity and strict-child properties).

    For binary networks this coincides with HGT-consistency. It fails to
    characterise non-binary orchard networks, which is exactly what the
    three-parent counterexample demonstrates.
    """
    return _search_order_types(net, naive_rule=True,
                               max_internal=max_internal) is not None


# -- rational gap helpers (shared with the canonicalizer) ------------------------

def fresh_label_between(existing: Iterable[Fraction], lo: Fraction,
                        hi: Fraction, near: str = "high") -> Fraction:
    """A fresh rational strictly inside (lo, hi), unequal to every existing label.

    ``near="high"`` picks the midpoint of the top free gap (a "value minus
    epsilon"); ``near="low"`` the bottom free gap (a "value plus epsilon").
    """
    if not lo < hi:
        raise ValueError(f"empty interval ({lo}, {hi})")
    inside = sorted(v for v in set(existing) if lo < v < hi)
    if near == "high":
        a = inside[-1] if inside else lo
        return (a + hi) / 2
    b = inside[0] if inside else hi
    return (lo + b) / 2
