"""Canonical forms for orchard networks and explicit rNNI paths between them.

The pipeline moves every reticulation onto a stack directly below the root's
child (two parallel paths joined by horizontal arcs), orients all horizontal
arcs the same way with a chosen leaf below the head of the lowest arc, and
gathers the remaining leaves into a pendant tree below its tail. Two
networks canonicalised this way differ only in the pendant tree, which a
caterpillar normalisation makes unique, so concatenating one trace with the
reverse of the other yields an all-orchard rNNI path.

Every step stores an HGT-consistent labelling that is re-verified after the
move; perturbed labels are exact rationals placed in free gaps between
existing labels.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .hgt_labelling import (HgtLabelling, construct, fresh_label_between,
                            verify)
from .network_core import (NetworkError, PhyloNetwork, find_isomorphism,
                           is_binary, reticulation_number, validate)
from .rearrangement import RnniMove, apply_rnni, inverse


class CanonicalizationError(NetworkError):
    pass


@dataclass(frozen=True)
class TopStructure:
    """Maximal reticulation stack below the root's child.

    ``a_path`` and ``b_path`` are the two directed paths from ``v_rho``;
    level i carries the horizontal arc ``horizontal_arcs[i-1]`` between
    them. ``neat`` means every horizontal arc points from the a-path to the
    b-path.
    """

    v_rho: int
    a_path: tuple[int, ...]
    b_path: tuple[int, ...]
    horizontal_arcs: tuple[tuple[int, int], ...]
    neat: bool

    @property
    def k(self) -> int:
        return len(self.horizontal_arcs)


def detect_top(net: PhyloNetwork) -> TopStructure:
    """Find the maximal k with k reticulations at the top, with witnesses."""
    root = net.root
    v_rho, = net.children(root)
    empty = TopStructure(v_rho, (), (), (), True)
    if net.outdegree(v_rho) != 2:
        return empty
    c1, c2 = sorted(net.children(v_rho))
    if (c1, c2) in net.arcs:
        first = (c1, c2)
    elif (c2, c1) in net.arcs:
        first = (c2, c1)
    else:
        return empty

    a_path = [first[0]]
    b_path = [first[1]]
    arcs = [first]
    used = {v_rho, first[0], first[1]}

    def path_child(v: int, horiz_partner: int) -> Optional[int]:
        kids = [c for c in net.children(v) if c != horiz_partner]
        return kids[0] if len(kids) == 1 else None

    while True:
        xa, xb = a_path[-1], b_path[-1]
        na = path_child(xa, xb)
        nb = path_child(xb, xa)
        if na is None or nb is None or na == nb or na in used or nb in used:
            break
        if (na, nb) in net.arcs:
            arcs.append((na, nb))
        elif (nb, na) in net.arcs:
            arcs.append((nb, na))
        else:
            break
        a_path.append(na)
        b_path.append(nb)
        used.update((na, nb))

    neat = all(arc == (a, b)
               for arc, a, b in zip(arcs, a_path, b_path))
    return TopStructure(v_rho, tuple(a_path), tuple(b_path), tuple(arcs), neat)


@dataclass
class MoveTrace:
    """A replayable move sequence with one verified labelling per step."""

    start: PhyloNetwork
    start_labelling: Optional[HgtLabelling] = None
    moves: list[RnniMove] = field(default_factory=list)
    networks: list[PhyloNetwork] = field(default_factory=list)
    labellings: list[HgtLabelling] = field(default_factory=list)

    @property
    def result(self) -> PhyloNetwork:
        return self.networks[-1] if self.networks else self.start

    def __len__(self) -> int:
        return len(self.moves)


class _TraceBuilder:
    """Applies moves, maintains the labelling, and re-verifies every step."""

    def __init__(self, net: PhyloNetwork, labelling: HgtLabelling):
        report = verify(net, labelling)
        if not report.ok:
            raise CanonicalizationError(
                "starting labelling is not HGT-consistent: "
                + "; ".join(report.violations))
        self.trace = MoveTrace(start=net, start_labelling=labelling)
        self.net = net
        self.t = labelling

    def apply(self, move: RnniMove,
              relabel: Optional[dict[int, Fraction]] = None,
              full_labelling: Optional[HgtLabelling] = None) -> None:
        new_net = apply_rnni(self.net, move)
        if full_labelling is not None:
            new_t = full_labelling
        else:
            new_t = self.t.updated(relabel or {})
        report = verify(new_net, new_t)
        if not report.ok:
            raise CanonicalizationError(
                f"labelling broken after {move}: " + "; ".join(report.violations))
        self.trace.moves.append(move)
        self.trace.networks.append(new_net)
        self.trace.labellings.append(new_t)
        self.net = new_net
        self.t = new_t

    def fresh(self, lo: Fraction, hi: Fraction, near: str) -> Fraction:
        return fresh_label_between(self.t.values.values(), lo, hi, near)


def _require_labelling(net: PhyloNetwork,
                       labelling: Optional[HgtLabelling]) -> HgtLabelling:
    if labelling is not None:
        return labelling
    built = construct(net)
    if built is None:
        raise CanonicalizationError("network is not orchard")
    return built


# -- reorientation --------------------------------------------------------------

def _reorient_move(net: PhyloNetwork, ts: TopStructure, k_prime: int) -> RnniMove:
    """One rNNI move reorienting the highest ``k_prime`` horizontal arcs.

    Crossing the two path arcs below level ``k_prime`` exchanges which side
    everything lower hangs on, which is isomorphic to reversing the top
    ``k_prime`` horizontal arcs. The existing labelling stays consistent.
    """
    x_i, y_i = ts.horizontal_arcs[k_prime - 1]
    parent_y, = (p for p in net.parents(y_i) if p != x_i)
    child_y, = net.children(y_i)
    child_x, = (c for c in net.children(x_i) if c != y_i)
    return RnniMove(p=x_i, x=y_i, c=child_y, e=(parent_y, y_i),
                    z=x_i, w=child_x)


def reorient_top(net: PhyloNetwork, k_prime: int,
                 labelling: Optional[HgtLabelling] = None) -> MoveTrace:
    """Reorient the highest ``k_prime`` horizontal arcs at the top (one move)."""
    ts = detect_top(net)
    if not 1 <= k_prime <= ts.k:
        raise CanonicalizationError(
            f"k_prime={k_prime} out of range, network has {ts.k} reticulations "
            f"at the top")
    builder = _TraceBuilder(net, _require_labelling(net, labelling))
    builder.apply(_reorient_move(net, ts, k_prime))
    return builder.trace


# -- lifting reticulations to the top --------------------------------------------

def _top_heads(ts: TopStructure) -> frozenset[int]:
    return frozenset(y for (_, y) in ts.horizontal_arcs)


def _top_endpoints(ts: TopStructure) -> frozenset[int]:
    return frozenset(v for arc in ts.horizontal_arcs for v in arc)


def _minimal_non_top_reticulation(net: PhyloNetwork, t: HgtLabelling,
                                  ts: TopStructure) -> Optional[int]:
    heads = _top_heads(ts)
    candidates = [v for v in net.reticulations() if v not in heads]
    if not candidates:
        return None
    return min(candidates, key=lambda v: (t[v], v))


def _tie_parent(net: PhyloNetwork, t: HgtLabelling, r: int) -> tuple[int, int]:
    """The contemporaneous parent of r, and the other parent."""
    ties = [p for p in net.parents(r) if t[p] == t[r]]
    others = [p for p in net.parents(r) if t[p] != t[r]]
    if len(ties) != 1 or len(others) != 1:
        raise CanonicalizationError(
            f"reticulation {r} is not tied with exactly one parent")
    return ties[0], others[0]


def base_nodes_above(net: PhyloNetwork, t: HgtLabelling, v: int) -> int:
    """Internal nodes above ``v`` with no tied parent or child.

    These are the internal nodes surviving into the base tree; lifting makes
    this count strictly decrease until the reticulation reaches the top.
    """
    ancestors = {u for u in net.nodes if v in net.descendants(u)}
    count = 0
    for u in ancestors:
        if net.is_leaf(u):
            continue
        tied = any(t[p] == t[u] for p in net.parents(u)) or \
            any(t[c] == t[u] for c in net.children(u))
        if not tied:
            count += 1
    return count


def _triangle_steps(builder: _TraceBuilder, r: int) -> None:
    """Handle a lowest reticulation inside a triangle (w,p), (w,r), (p,r).

    Either two moves shift the triangle one base node up, or at most four
    moves (an optional reorientation plus three) put r at the top.
    """
    net, t = builder.net, builder.t
    p, w_node = _tie_parent(net, t, r)
    if w_node not in net.parents(p):
        raise CanonicalizationError(f"reticulation {r} is not in a triangle")
    ts = detect_top(net)
    qq, = net.parents(w_node)

    if qq not in _top_endpoints(ts):
        # the triangle's apex hangs below a tree node: shift it up two moves
        if net.is_reticulation(qq):
            raise CanonicalizationError(
                f"unexpected reticulation {qq} above the triangle")
        v6, = (c for c in net.children(qq) if c != w_node)
        c_r, = net.children(r)
        val_w = builder.fresh(t[qq], min(t[w_node], t[v6]), near="high")
        builder.apply(RnniMove(p=qq, x=w_node, c=p, e=(w_node, r), z=qq, w=v6),
                      relabel={w_node: val_w})
        val_pr = builder.fresh(builder.t[qq], val_w, near="high")
        builder.apply(RnniMove(p=qq, x=w_node, c=r, e=(w_node, v6), z=r, w=c_r),
                      relabel={p: val_pr, r: val_pr})
        return

    # the apex hangs off the bottom of the stack: bring r to the top
    if not net.is_reticulation(qq):
        # qq is the tail of the lowest horizontal arc; flip the bottom level
        # so the triangle hangs below the head instead
        builder.apply(_reorient_move(net, ts, ts.k))
        net, t = builder.net, builder.t
        qq, = net.parents(w_node)
    if not net.is_reticulation(qq):
        raise CanonicalizationError("triangle apex parent should now be a "
                                    "reticulation at the top")
    s = next(pp for pp in net.parents(qq) if t[pp] == t[qq])
    v_s, = (c for c in net.children(s) if c != qq)
    c_r, = net.children(r)

    val1 = builder.fresh(t[s], min(t[w_node], t[v_s]), near="high")
    builder.apply(RnniMove(p=qq, x=w_node, c=p, e=(w_node, r), z=s, w=qq),
                  relabel={qq: val1, w_node: val1})
    t = builder.t
    val2 = builder.fresh(t[s], min(t[r], t[v_s]), near="low")
    builder.apply(RnniMove(p=s, x=w_node, c=qq, e=(w_node, r), z=s, w=v_s),
                  relabel={qq: t[s], w_node: val2})
    t = builder.t
    val3 = builder.fresh(t[s], val2, near="high")
    builder.apply(RnniMove(p=s, x=w_node, c=r, e=(w_node, v_s), z=r, w=c_r),
                  relabel={p: val3, r: val3})


def lift_triangle(net: PhyloNetwork, labelling: HgtLabelling,
                  r: int) -> MoveTrace:
    """Move a triangle's reticulation up, or to the top, in at most 4 moves."""
    t = labelling
    if not net.is_reticulation(r):
        raise CanonicalizationError(f"node {r} is not a reticulation")
    builder = _TraceBuilder(net, t)
    _triangle_steps(builder, r)
    return builder.trace


def _lift_block(builder: _TraceBuilder) -> None:
    """One progress block for the lowest-labelled reticulation not at the top."""
    net, t = builder.net, builder.t
    ts = detect_top(net)
    r = _minimal_non_top_reticulation(net, t, ts)
    if r is None:
        raise CanonicalizationError("all reticulations are already at the top")
    p, u = _tie_parent(net, t, r)
    q, = net.parents(p)

    if t[u] > t[q]:
        # move the head of the horizontal arc (p, r) above u
        if net.is_reticulation(u):
            raise CanonicalizationError(
                f"non-top reticulation {u} above the minimal one contradicts "
                f"label minimality")
        s, = net.parents(u)
        v, = (c for c in net.children(u) if c != r)
        c_r, = net.children(r)
        val_u = builder.fresh(t[u], min(t[v], t[c_r]), near="low")
        builder.apply(RnniMove(p=u, x=r, c=c_r, e=(p, r), z=s, w=u),
                      relabel={p: t[u], r: t[u], u: val_u})
    elif t[u] < t[q]:
        # symmetric: move the tail p above q
        if net.is_reticulation(q):
            raise CanonicalizationError(
                f"non-top reticulation {q} above the minimal one contradicts "
                f"label minimality")
        s, = net.parents(q)
        v, = (c for c in net.children(q) if c != p)
        c_p, = (c for c in net.children(p) if c != r)
        val_q = builder.fresh(t[q], min(t[v], t[c_p]), near="low")
        builder.apply(RnniMove(p=q, x=p, c=c_p, e=(p, r), z=s, w=q),
                      relabel={p: t[q], r: t[q], q: val_q})
    else:
        if u != q:
            raise CanonicalizationError(
                f"label tie between unrelated nodes {u} and {q}")
        _triangle_steps(builder, r)


def lift_reticulation(net: PhyloNetwork,
                      labelling: Optional[HgtLabelling] = None) -> MoveTrace:
    """Increase the number of reticulations at the top by one (<= 2n moves)."""
    t = _require_labelling(net, labelling)
    builder = _TraceBuilder(net, t)
    _lift_to_top(builder)
    return builder.trace


def _lift_to_top(builder: _TraceBuilder) -> None:
    k0 = detect_top(builder.net).k
    if k0 >= reticulation_number(builder.net):
        raise CanonicalizationError("all reticulations are already at the top")
    n = len(builder.net.leaves())
    moves_before = len(builder.trace.moves)
    guard_ts = detect_top(builder.net)
    guard_r = _minimal_non_top_reticulation(builder.net, builder.t, guard_ts)
    progress = base_nodes_above(builder.net, builder.t, guard_r)
    while detect_top(builder.net).k <= k0:
        _lift_block(builder)
        if len(builder.trace.moves) - moves_before > 2 * n:
            raise CanonicalizationError(
                f"lift exceeded the 2n move bound ({2 * n})")
        ts_now = detect_top(builder.net)
        if ts_now.k > k0:
            break
        r_now = _minimal_non_top_reticulation(builder.net, builder.t, ts_now)
        progress_now = base_nodes_above(builder.net, builder.t, r_now)
        if progress_now >= progress:
            raise CanonicalizationError(
                "base-node count above the lifted reticulation did not decrease")
        progress = progress_now


# -- pendant relocation -----------------------------------------------------------

def _path_to_leaf(net: PhyloNetwork, start: int, leaf_node: int) -> list[int]:
    """Unique tree path from ``start``'s child down to ``leaf_node``."""
    path = []
    cur, = net.children(start)
    while True:
        path.append(cur)
        if cur == leaf_node:
            return path
        nxt = [c for c in net.children(cur)
               if c == leaf_node or leaf_node in net.descendants(c)]
        if len(nxt) != 1:
            raise CanonicalizationError(
                f"no unique descent from {cur} to leaf {leaf_node}")
        cur = nxt[0]


def _relocate_steps(builder: _TraceBuilder, leaf: str) -> None:
    net, t = builder.net, builder.t
    ts = detect_top(net)
    if ts.k == 0 or ts.k != reticulation_number(net):
        raise CanonicalizationError(
            "pendant relocation expects every reticulation at the top")
    x_k, y_k = ts.horizontal_arcs[-1]
    l_node = net.leaf_with_taxon(leaf)
    if l_node not in net.descendants(y_k):
        raise CanonicalizationError(
            f"leaf {leaf!r} is not below the head of the lowest horizontal arc")
    u = _path_to_leaf(net, y_k, l_node)  # u[0], ..., u[m-1] = l_node
    m = len(u)
    n = len(net.leaves())
    u0, = (c for c in net.children(x_k) if c != y_k)
    prev = u0
    for i in range(m - 1):
        net, t = builder.net, builder.t
        ui, ui_next = u[i], u[i + 1]
        v_i, = (c for c in net.children(ui) if c != ui_next)
        val1 = builder.fresh(t[x_k], min(t[ui_next], t[v_i]), near="low")
        builder.apply(RnniMove(p=y_k, x=ui, c=ui_next, e=(ui, v_i),
                               z=x_k, w=y_k),
                      relabel={ui: val1, y_k: val1})
        t = builder.t
        val2 = builder.fresh(t[x_k], min(t[v_i], t[prev]), near="low")
        builder.apply(RnniMove(p=x_k, x=ui, c=y_k, e=(ui, v_i),
                               z=x_k, w=prev),
                      relabel={y_k: t[x_k], ui: val2})
        prev = ui
    if len(builder.trace.moves) and 2 * (m - 1) > max(0, 2 * n - 4):
        raise CanonicalizationError("relocation exceeded the 2n-4 move bound")


def relocate_pendant(net: PhyloNetwork, leaf: str,
                     labelling: Optional[HgtLabelling] = None) -> MoveTrace:
    """Make ``leaf`` the only leaf below the head of the lowest horizontal arc.

    Each of the at most n-2 intermediate nodes on the path to the leaf is
    parked on the horizontal arc and then reattached on the tail's side, two
    moves apiece.
    """
    builder = _TraceBuilder(net, _require_labelling(net, labelling))
    _relocate_steps(builder, leaf)
    return builder.trace


# -- full canonicalisation ---------------------------------------------------------

def _orientation_flips(net: PhyloNetwork, ts: TopStructure,
                       l_node: int) -> list[int]:
    """Which prefix reorientations make the stack neat with l below the head.

    Flipping the top i arcs toggles exactly the relative orientation of
    levels i and i+1 (for i < k) or which pendant subtree hangs below the
    lowest head (for i = k), so the required flip set reads off directly.
    """
    k = ts.k
    sides = []
    for i in range(k):
        _, y = ts.horizontal_arcs[i]
        sides.append("a" if y == ts.a_path[i] else "b")
    flips = [i + 1 for i in range(k - 1) if sides[i] != sides[i + 1]]
    _, y_k = ts.horizontal_arcs[-1]
    if l_node not in net.descendants(y_k):
        flips.append(k)
    return flips


def canonicalize(net: PhyloNetwork, leaf: str,
                 labelling: Optional[HgtLabelling] = None) -> MoveTrace:
    """Stack all reticulations neatly at the top with ``leaf`` below the lowest head.

    Composes reticulation lifts (<= 2n moves each), at most k prefix
    reorientations, and the pendant relocation (<= 2n - 4 moves), for a
    total of at most 2kn + k + 2n - 4 moves.
    """
    if not is_binary(net) or not validate(net).ok:
        raise CanonicalizationError("canonicalize expects a valid binary network")
    if leaf not in net.taxa():
        raise CanonicalizationError(f"unknown taxon {leaf!r}")
    t = _require_labelling(net, labelling)
    builder = _TraceBuilder(net, t)
    k = reticulation_number(net)
    n = len(net.leaves())

    while detect_top(builder.net).k < k:
        _lift_to_top(builder)

    if k >= 1:
        l_node = builder.net.leaf_with_taxon(leaf)
        flips = _orientation_flips(builder.net, detect_top(builder.net), l_node)
        for k_prime in sorted(flips, reverse=True):
            builder.apply(_reorient_move(builder.net, detect_top(builder.net),
                                         k_prime))
        _relocate_steps(builder, leaf)

        final = detect_top(builder.net)
        l_node = builder.net.leaf_with_taxon(leaf)
        if final.k != k or not final.neat or \
                builder.net.children(final.horizontal_arcs[-1][1]) != (l_node,):
            raise CanonicalizationError("canonical shape checks failed")
        if len(builder.trace.moves) > 2 * k * n + k + 2 * n - 4:
            raise CanonicalizationError("canonicalisation exceeded its move bound")
    return builder.trace


# -- caterpillar normalisation and paths --------------------------------------------

def _normalize_subtree(builder: _TraceBuilder, sub_root: int) -> None:
    """Rearrange the pendant tree under ``sub_root`` into the sorted caterpillar.

    Repeatedly raises the largest remaining leaf to hang directly below the
    current subtree root, then recurses into the sibling subtree. Uses at
    most (m-1)(m-2)/2 moves for m leaves.
    """
    net = builder.net
    current = sub_root
    while True:
        net = builder.net
        if net.is_leaf(current) or net.outdegree(current) == 0:
            return
        kids = net.children(current)
        if all(net.is_leaf(c) for c in kids):
            return
        subtree = {current} | net.descendants(current)
        taxa_here = sorted(net.leaf_labels[v] for v in subtree if net.is_leaf(v))
        target = net.leaf_with_taxon(taxa_here[-1])
        while True:
            net = builder.net
            q, = net.parents(target)
            if q == current:
                break
            g, = net.parents(q)
            uncle, = (c for c in net.children(g) if c != q)
            other, = (c for c in net.children(q) if c != target)
            move = RnniMove(p=g, x=q, c=target, e=(q, other), z=g, w=uncle)
            relabelled = construct(apply_rnni(net, move))
            if relabelled is None:
                raise CanonicalizationError("tree normalisation left the "
                                            "orchard class")
            builder.apply(move, full_labelling=relabelled)
        net = builder.net
        current, = (c for c in net.children(current) if c != target)


def _reverse_onto(builder: _TraceBuilder, other: MoveTrace) -> None:
    """Append the reverse of ``other`` (which ends isomorphic to builder.net)."""
    iso = find_isomorphism(other.result, builder.net)
    if iso is None:
        raise CanonicalizationError("traces do not meet at isomorphic networks")
    nets = [other.start] + list(other.networks)
    labs = [other.start_labelling] + list(other.labellings)
    for i in range(len(other.moves) - 1, -1, -1):
        inv = inverse(other.moves[i], nets[i])
        translated = RnniMove(p=iso[inv.p], x=iso[inv.x], c=iso[inv.c],
                              e=(iso[inv.e[0]], iso[inv.e[1]]),
                              z=iso[inv.z], w=iso[inv.w])
        lab = labs[i]
        if lab is None:
            lab = _require_labelling(nets[i], None)
        moved = HgtLabelling({iso[v]: val for v, val in lab.values.items()})
        builder.apply(translated, full_labelling=moved)


def _canonical_trace(net: PhyloNetwork, leaf: str) -> MoveTrace:
    """Canonicalise and then normalise the pendant tree (unique end network)."""
    t = _require_labelling(net, None)
    builder = _TraceBuilder(net, t)
    k = reticulation_number(net)
    if k == 0:
        v_rho, = net.children(net.root)
        _normalize_subtree(builder, v_rho)
        return builder.trace
    while detect_top(builder.net).k < k:
        _lift_to_top(builder)
    l_node = builder.net.leaf_with_taxon(leaf)
    flips = _orientation_flips(builder.net, detect_top(builder.net), l_node)
    for k_prime in sorted(flips, reverse=True):
        builder.apply(_reorient_move(builder.net, detect_top(builder.net),
                                     k_prime))
    _relocate_steps(builder, leaf)
    ts = detect_top(builder.net)
    x_k, y_k = ts.horizontal_arcs[-1]
    pendant_root, = (c for c in builder.net.children(x_k) if c != y_k)
    _normalize_subtree(builder, pendant_root)
    return builder.trace


def tree_path(t1: PhyloNetwork, t2: PhyloNetwork) -> MoveTrace:
    """An rNNI path between two trees via the sorted caterpillar.

    Both trees are normalised to the caterpillar with leaves sorted from the
    bottom; the second normalisation is reversed and appended, so the path
    length is at most (n-1)(n-2) for n leaves.
    """
    for t in (t1, t2):
        if reticulation_number(t) != 0 or not validate(t).ok:
            raise CanonicalizationError("tree_path expects valid trees")
    if t1.taxa() != t2.taxa():
        raise CanonicalizationError("trees are on different taxa")
    first = _TraceBuilder(t1, _require_labelling(t1, None))
    v_rho, = t1.children(t1.root)
    _normalize_subtree(first, v_rho)
    second = _TraceBuilder(t2, _require_labelling(t2, None))
    v_rho2, = t2.children(t2.root)
    _normalize_subtree(second, v_rho2)
    _reverse_onto(first, second.trace)
    return first.trace


def caterpillar_bound(n: int) -> int:
    """Documented tree-path bound C(n) = (n-1)(n-2)."""
    return max(0, (n - 1) * (n - 2))


def orchard_path(n1: PhyloNetwork, n2: PhyloNetwork) -> MoveTrace:
    """An all-orchard rNNI path between two orchard networks.

    Both are canonicalised toward the lexicographically smallest taxon and
    their pendant trees normalised; the second trace is reversed through the
    meeting isomorphism. Length is at most 2(2kn + k + 2n - 4) + C(n-1).
    """
    if n1.taxa() != n2.taxa():
        raise CanonicalizationError("networks are on different taxa")
    if reticulation_number(n1) != reticulation_number(n2):
        raise CanonicalizationError("networks have different reticulation numbers")
    leaf = sorted(n1.taxa())[0]
    first_trace = _canonical_trace(n1, leaf)
    builder = _TraceBuilder(n1, first_trace.start_labelling)
    builder.trace = first_trace
    builder.net = first_trace.result
    builder.t = (first_trace.labellings[-1] if first_trace.labellings
                 else first_trace.start_labelling)
    second = _canonical_trace(n2, leaf)
    _reverse_onto(builder, second)
    return builder.trace
