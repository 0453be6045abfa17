"""Exhaustive enumeration and BFS analysis of small orchard network spaces.

Vertices of the space are binary orchard networks with n leaves and k
reticulations up to isomorphism, generated by exhaustive reverse cherry
picking over all sequences; edges join networks one valid rNNI move apart.
Connectivity is therefore tested, not assumed: reachability by moves from a
seed is compared against the independently enumerated vertex set.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field

from .canonicalizer import orchard_path
from .cherry_engine import one_leaf_tree
from .enewick_io import write
from .network_core import NetworkError, PhyloNetwork, canonical_form
from .rearrangement import rnni_neighbors


class BudgetExceededError(NetworkError):
    pass


@dataclass
class SpaceGraph:
    n: int
    k: int
    vertices: dict[bytes, PhyloNetwork]
    edges: dict[bytes, set[bytes]] = field(default_factory=dict)

    def neighbors(self, key: bytes) -> set[bytes]:
        return self.edges.get(key, set())


def _taxa(n: int) -> list[str]:
    return [f"x{i + 1}" for i in range(n)]


def enumerate_networks(n: int, k: int,
                       budget: int = 100000) -> dict[bytes, PhyloNetwork]:
    """All binary orchard networks on {x1..xn} with k reticulations, up to iso.

    Depth-first search over reverse cherry-picking states: either attach a
    taxon not yet present as a new cherry, or join two present leaves into a
    reticulated cherry. States and results are deduplicated by canonical
    form; exceeding ``budget`` distinct states raises.
    """
    if n < 1 or k < 0:
        raise ValueError("need n >= 1 and k >= 0")
    taxa = _taxa(n)
    if n == 1:
        if k:
            return {}
        net = one_leaf_tree(taxa[0])
        return {canonical_form(net): net}

    results: dict[bytes, PhyloNetwork] = {}
    seen_states: set[tuple[bytes, int]] = set()

    def attach_new(net: PhyloNetwork, x: str, y: str) -> PhyloNetwork:
        vy = net.leaf_with_taxon(y)
        uy, = net.parents(vy)
        p = net.fresh_node()
        vx = p + 1
        return net.replace(add_nodes=[p, vx], drop_arcs=[(uy, vy)],
                           add_arcs=[(uy, p), (p, vy), (p, vx)],
                           add_labels={vx: x})

    def attach_ret(net: PhyloNetwork, x: str, y: str) -> PhyloNetwork:
        vx, vy = net.leaf_with_taxon(x), net.leaf_with_taxon(y)
        ux, = net.parents(vx)
        uy, = net.parents(vy)
        py = net.fresh_node()
        px = py + 1
        return net.replace(add_nodes=[py, px],
                           drop_arcs=[(uy, vy), (ux, vx)],
                           add_arcs=[(uy, py), (py, vy),
                                     (ux, px), (px, vx), (py, px)])

    stack: list[tuple[PhyloNetwork, int]] = []
    for survivor in taxa:
        stack.append((one_leaf_tree(survivor), k))
    while stack:
        net, ret_left = stack.pop()
        present = net.taxa()
        state = (canonical_form(net), ret_left)
        if state in seen_states:
            continue
        seen_states.add(state)
        if len(seen_states) > budget:
            raise BudgetExceededError(
                f"enumeration exceeded the state budget of {budget}")
        if len(present) == n and ret_left == 0:
            results[canonical_form(net)] = net
            continue
        current = sorted(present)
        for x in taxa:
            if x in present:
                continue
            for y in current:
                stack.append((attach_new(net, x, y), ret_left))
        if ret_left > 0 and len(current) >= 2:
            for x in current:
                for y in current:
                    if x != y:
                        stack.append((attach_ret(net, x, y), ret_left - 1))
    return results


def build_space(n: int, k: int, budget: int = 100000) -> SpaceGraph:
    """Vertex set from exhaustive enumeration; edges from rNNI neighbourhoods."""
    vertices = enumerate_networks(n, k, budget=budget)
    space = SpaceGraph(n=n, k=k, vertices=vertices,
                       edges={key: set() for key in vertices})
    for key, net in vertices.items():
        for _, neighbor in rnni_neighbors(net, orchard_only=True):
            nb_key = canonical_form(neighbor)
            if nb_key == key:
                continue
            if nb_key not in vertices:
                raise NetworkError(
                    "rNNI neighbour escaped the enumerated vertex set")
            space.edges[key].add(nb_key)
            space.edges[nb_key].add(key)
    return space


def _bfs_distances(space: SpaceGraph, source: bytes) -> dict[bytes, int]:
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in space.edges[u]:
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def is_connected(space: SpaceGraph) -> bool:
    if not space.vertices:
        return True
    source = next(iter(sorted(space.vertices)))
    return len(_bfs_distances(space, source)) == len(space.vertices)


def diameter(space: SpaceGraph) -> int:
    """Exact diameter via all-pairs BFS; raises if the space is disconnected."""
    best = 0
    for source in space.vertices:
        dist = _bfs_distances(space, source)
        if len(dist) != len(space.vertices):
            raise NetworkError("space is disconnected, diameter undefined")
        best = max(best, max(dist.values()))
    return best


def diameter_upper_bound(n: int, k: int) -> int:
    """Upper bound on the rNNI-space diameter: 4kn + n*ceil(log2 n) + 2k + 6n - 8."""
    log_term = 0 if n <= 1 else (n - 1).bit_length()
    return 4 * k * n + n * log_term + 2 * k + 6 * n - 8


@dataclass
class AuditReport:
    pairs_checked: int
    max_constructed_length: int
    max_bfs_distance: int
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def audit_paths(space: SpaceGraph, trials: int, seed: int = 0) -> AuditReport:
    """Check constructed paths against BFS distances on sampled vertex pairs.

    Each constructed path must be at least as long as the BFS distance and
    stay inside the space (every intermediate's canonical form is a vertex).
    """
    keys = sorted(space.vertices)
    rng = random.Random(seed)
    all_pairs = [(a, b) for i, a in enumerate(keys) for b in keys[i:]]
    if trials >= len(all_pairs):
        sample = all_pairs
    else:
        sample = rng.sample(all_pairs, trials)
    report = AuditReport(pairs_checked=0, max_constructed_length=0,
                         max_bfs_distance=0)
    for a_key, b_key in sample:
        report.pairs_checked += 1
        dist = _bfs_distances(space, a_key).get(b_key)
        if dist is None:
            report.failures.append("pair in different components")
            continue
        trace = orchard_path(space.vertices[a_key], space.vertices[b_key])
        report.max_constructed_length = max(report.max_constructed_length,
                                            len(trace))
        report.max_bfs_distance = max(report.max_bfs_distance, dist)
        if len(trace) < dist:
            report.failures.append(
                f"constructed path shorter than BFS distance ({len(trace)} < {dist})")
        if canonical_form(trace.start) != a_key or \
                canonical_form(trace.result) != b_key:
            report.failures.append("path endpoints do not match the pair")
        for net in trace.networks:
            if canonical_form(net) not in space.vertices:
                report.failures.append("intermediate network left the space")
                break
    return report


def dump_space(space: SpaceGraph) -> str:
    """Edge list plus a vertex manifest mapping keys to eNewick strings."""
    lines = []
    key_names = {key: f"v{i}" for i, key in enumerate(sorted(space.vertices))}
    for key in sorted(space.vertices):
        lines.append(f"vertex {key_names[key]} {write(space.vertices[key])}")
    emitted = set()
    for key in sorted(space.vertices):
        for other in sorted(space.edges[key]):
            pair = tuple(sorted((key_names[key], key_names[other])))
            if pair not in emitted:
                emitted.add(pair)
                lines.append(f"edge {pair[0]} {pair[1]}")
    return "\n".join(lines) + "\n"
