"""Cherry picking: reducible pairs, orchard recognition, reconstruction.

An ordered leaf pair (x, y) is a cherry when x and y share a parent, and a
reticulated cherry when x's parent is a reticulation that shares a parent
with y. Repeatedly reducing such pairs until a one-leaf tree remains both
recognises orchard networks and certifies them: the recorded sequence
rebuilds the network.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Optional

from .network_core import (NetworkError, PhyloNetwork, is_binary,
                           reticulation_number, suppress_node, validate,
                           binary_resolutions)


@dataclass(frozen=True)
class ReduciblePair:
    x: str
    y: str
    kind: str  # "cherry" | "reticulated_cherry"


@dataclass(frozen=True)
class CherrySequence:
    """Ordered leaf pairs whose successive reductions empty a network."""

    pairs: tuple[tuple[str, str], ...]

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    @property
    def survivor(self) -> str:
        if not self.pairs:
            raise ValueError("empty sequence has no survivor")
        return self.pairs[-1][1]

    def taxa(self) -> frozenset[str]:
        return frozenset(t for pair in self.pairs for t in pair)


class MalformedSequenceError(NetworkError):
    """A pair list that no reverse construction can realise."""


def classify_pair(net: PhyloNetwork, x: str, y: str) -> Optional[str]:
    """Return "cherry", "reticulated_cherry", or None for leaves x, y."""
    vx = net.leaf_with_taxon(x)
    vy = net.leaf_with_taxon(y)
    if vx == vy:
        return None
    px, = net.parents(vx)
    py, = net.parents(vy)
    if px == py:
        return "cherry"
    if net.is_reticulation(px) and py in net.parents(px):
        return "reticulated_cherry"
    return None


def find_reducible_pairs(net: PhyloNetwork) -> list[ReduciblePair]:
    """All reducible pairs, in lexicographic (x, y) order."""
    pairs: set[ReduciblePair] = set()
    taxon_of = net.leaf_labels
    for vx in net.leaves():
        x = taxon_of[vx]
        px, = net.parents(vx)
        for sib in net.children(px):
            if sib != vx and net.is_leaf(sib):
                pairs.add(ReduciblePair(x, taxon_of[sib], "cherry"))
        if net.is_reticulation(px):
            for g in net.parents(px):
                for c in net.children(g):
                    if c != px and net.is_leaf(c):
                        pairs.add(ReduciblePair(x, taxon_of[c], "reticulated_cherry"))
    return sorted(pairs, key=lambda p: (p.x, p.y))


def reduce_pair(net: PhyloNetwork, x: str, y: str) -> PhyloNetwork:
    """Reduce the pair (x, y); returns the input unchanged when not reducible.

    Cherry: delete leaf x, then suppress its parent if that parent dropped to
    indegree 1 and outdegree 1. Reticulated cherry: delete the arc from y's
    parent into x's reticulation parent, then suppress either endpoint that
    dropped to indegree 1 and outdegree 1.
    """
    kind = classify_pair(net, x, y)
    if kind is None:
        return net
    vx = net.leaf_with_taxon(x)
    px, = net.parents(vx)
    if kind == "cherry":
        out = net.replace(drop_nodes=[vx])
        if out.indegree(px) == 1 and out.outdegree(px) == 1:
            out = suppress_node(out, px)
        return out
    vy = net.leaf_with_taxon(y)
    py, = net.parents(vy)
    out = net.replace(drop_arcs=[(py, px)])
    for v in (px, py):
        if out.indegree(v) == 1 and out.outdegree(v) == 1:
            out = suppress_node(out, v)
    return out


def is_one_leaf_tree(net: PhyloNetwork) -> bool:
    return len(net.nodes) == 2 and len(net.leaves()) == 1 and len(net.arcs) == 1


def is_orchard(net: PhyloNetwork) -> Optional[CherrySequence]:
    """Greedily reduce the network; the recorded sequence certifies success.

    Reducible pairs are picked in lexicographic order. Picking any reducible
    pair in an orchard network leaves an orchard network, so the greedy order
    cannot get stuck on an orchard input.
    """
    pairs: list[tuple[str, str]] = []
    cur = net
    while True:
        if is_one_leaf_tree(cur):
            return CherrySequence(tuple(pairs))
        found = find_reducible_pairs(cur)
        if not found:
            return None
        pick = found[0]
        cur = reduce_pair(cur, pick.x, pick.y)
        pairs.append((pick.x, pick.y))


def one_leaf_tree(taxon: str) -> PhyloNetwork:
    return PhyloNetwork([0, 1], [(0, 1)], {1: taxon})


def reconstruct(seq: CherrySequence | Iterable[tuple[str, str]],
                taxa: Optional[frozenset[str]] = None) -> PhyloNetwork:
    """Rebuild the binary orchard network that ``seq`` reduces.

    Starting from the one-leaf tree on the final survivor, pairs are
    reattached in reverse: a pair whose first taxon is absent becomes a new
    cherry; a pair whose first taxon is present becomes a reticulated cherry
    (both incoming arcs subdivided and joined).
    """
    pairs = tuple(seq.pairs if isinstance(seq, CherrySequence) else seq)
    if not pairs:
        raise MalformedSequenceError("cannot reconstruct from an empty sequence")
    for x, y in pairs:
        if x == y:
            raise MalformedSequenceError(f"pair ({x},{y}) repeats a taxon")
    net = one_leaf_tree(pairs[-1][1])
    for x, y in reversed(pairs):
        present = net.taxa()
        if y not in present:
            raise MalformedSequenceError(
                f"pair ({x},{y}) references taxon {y!r} before it exists")
        vy = net.leaf_with_taxon(y)
        uy, = net.parents(vy)
        if x not in present:
            p = net.fresh_node()
            vx = p + 1
            net = net.replace(add_nodes=[p, vx],
                              drop_arcs=[(uy, vy)],
                              add_arcs=[(uy, p), (p, vy), (p, vx)],
                              add_labels={vx: x})
        else:
            vx = net.leaf_with_taxon(x)
            ux, = net.parents(vx)
            py = net.fresh_node()
            px = py + 1
            net = net.replace(add_nodes=[py, px],
                              drop_arcs=[(uy, vy), (ux, vx)],
                              add_arcs=[(uy, py), (py, vy),
                                        (ux, px), (px, vx), (py, px)])
    if taxa is not None and net.taxa() != frozenset(taxa):
        raise MalformedSequenceError(
            f"sequence covers taxa {sorted(net.taxa())}, expected {sorted(taxa)}")
    return net


def is_orchard_nonbinary_via_resolutions(net: PhyloNetwork,
                                         limit: int = 10000) -> bool:
    """Cross-check oracle: orchard iff some binary resolution is orchard."""
    res = binary_resolutions(net, limit=limit)
    for candidate in res.networks:
        if is_orchard(candidate) is not None:
            return True
    if res.truncated:
        raise NetworkError("resolution limit exceeded before finding an "
                           "orchard resolution")
    return False


def random_orchard(n: int, k: int, seed: int | random.Random = 0) -> PhyloNetwork:
    """Random binary orchard network with n leaves and k reticulations.

    Samples a random valid cherry-picking sequence in reverse (a new-leaf
    step or, whenever two leaves exist, a reticulation step) and
    reconstructs. Deterministic for a fixed seed.
    """
    if n < 1 or k < 0:
        raise ValueError("need n >= 1 and k >= 0")
    if n == 1:
        if k != 0:
            raise ValueError("a one-leaf orchard network cannot have reticulations")
        return one_leaf_tree("x1")
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    names = [f"x{i + 1}" for i in range(n)]
    current = [names[0]]
    next_name = 1
    new_left, ret_left = n - 1, k
    reversed_steps: list[tuple[str, str]] = []
    while new_left or ret_left:
        options = []
        if new_left:
            options.append("new")
        if ret_left and len(current) >= 2:
            options.append("ret")
        choice = rng.choice(options)
        if choice == "new":
            y = rng.choice(current)
            x = names[next_name]
            next_name += 1
            current.append(x)
            new_left -= 1
        else:
            x, y = rng.sample(current, 2)
            ret_left -= 1
        reversed_steps.append((x, y))
    net = reconstruct(list(reversed(reversed_steps)))
    assert len(net.leaves()) == n and reticulation_number(net) == k
    assert is_binary(net) and validate(net).ok
    return net
