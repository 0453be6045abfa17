"""rSPR and rNNI rearrangement moves on binary networks.

A move (p, x, c) -e-> (z, w) detaches the degree-3 node x from its parent p
and child c (keeping its third incident arc e, whose other endpoint is y)
and reinserts it into the arc (z, w): the arcs (p,x), (x,c), (z,w) are
replaced by (p,c), (z,x), (x,w). When {p,c} and {z,w} intersect the move is
local, an rNNI move. Moves never change any node's degree, so validity only
requires the result to stay acyclic and parallel-arc-free.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cherry_engine import is_orchard
from .network_core import (PhyloNetwork, canonical_form, is_acyclic,
                           is_binary, validate)


class MoveError(Exception):
    pass


class MalformedMoveError(MoveError):
    """The move's roles do not match the graph."""


class InvalidMoveError(MoveError):
    """The replacement would not produce a network."""

    def __init__(self, reason: str, message: str):
        self.reason = reason  # "cycle" | "parallel_arc" | "degree"
        super().__init__(f"{reason}: {message}")


@dataclass(frozen=True)
class RnniMove:
    """Role descriptor (p, x, c) -e-> (z, w); ``e`` keeps its stored direction."""

    p: int
    x: int
    c: int
    e: tuple[int, int]
    z: int
    w: int

    @property
    def is_local(self) -> bool:
        return bool({self.p, self.c} & {self.z, self.w})

    def __str__(self) -> str:
        return (f"({self.p},{self.x},{self.c}) -{self.e}-> "
                f"({self.z},{self.w})")


def _check_roles(net: PhyloNetwork, move: RnniMove) -> None:
    a = net.arcs
    for arc, role in (((move.p, move.x), "(p,x)"), ((move.x, move.c), "(x,c)"),
                      ((move.z, move.w), "(z,w)"), (move.e, "e")):
        if arc not in a:
            raise MalformedMoveError(f"arc {role}={arc} is not in the network")
    if move.x not in move.e:
        raise MalformedMoveError(f"e={move.e} is not incident to x={move.x}")
    y = move.e[0] if move.e[1] == move.x else move.e[1]
    if y in (move.p, move.c):
        raise MalformedMoveError("e must be x's third incident arc")
    if net.indegree(move.x) + net.outdegree(move.x) != 3:
        raise MalformedMoveError(f"x={move.x} does not have total degree 3")


def apply_rspr(net: PhyloNetwork, move: RnniMove) -> PhyloNetwork:
    """Apply an rSPR move; raises when the result is not a network."""
    _check_roles(net, move)
    drop = {(move.p, move.x), (move.x, move.c), (move.z, move.w)}
    add = [(move.p, move.c), (move.z, move.x), (move.x, move.w)]
    if len(set(add)) != len(add):
        raise InvalidMoveError("parallel_arc", f"replacement arcs collide: {add}")
    remaining = net.arcs - drop
    for arc in add:
        if arc[0] == arc[1]:
            raise InvalidMoveError("cycle", f"replacement creates self-loop {arc}")
        if arc in remaining:
            raise InvalidMoveError("parallel_arc",
                                   f"replacement duplicates arc {arc}")
        remaining = remaining | {arc}
    result = PhyloNetwork(net.nodes, remaining, net.leaf_labels)
    if not is_acyclic(result):
        raise InvalidMoveError("cycle", "replacement creates a directed cycle")
    report = validate(result)
    if not report.ok:
        raise InvalidMoveError("degree", str(report))
    return result


def apply_rnni(net: PhyloNetwork, move: RnniMove) -> PhyloNetwork:
    """Apply an rNNI move (an rSPR move whose target shares an endpoint)."""
    if not move.is_local:
        raise MalformedMoveError(
            f"{{p,c}} and {{z,w}} are disjoint, not an rNNI move: {move}")
    return apply_rspr(net, move)


def inverse(move: RnniMove, before: PhyloNetwork) -> RnniMove:
    """The move undoing ``move``; applying it to the result restores ``before``.

    In the moved network x sits on the former target arc (z -> x -> w) and
    still carries e, so detaching it back into (p, c) is again an rNNI move.
    """
    apply_rnni(before, move)  # validates that the move applies
    return RnniMove(p=move.z, x=move.x, c=move.w, e=move.e,
                    z=move.p, w=move.c)


def candidate_moves(net: PhyloNetwork) -> list[RnniMove]:
    """Every role assignment satisfying the rNNI locality condition."""
    moves: list[RnniMove] = []
    arcs = net.sorted_arcs()
    for x in net.sorted_nodes():
        ind, outd = net.indegree(x), net.outdegree(x)
        if ind + outd != 3 or ind == 0:
            continue
        if ind == 1:  # tree node: e runs to one of the two children
            p, = net.parents(x)
            c1, c2 = sorted(net.children(x))
            variants = [(p, c1, (x, c2)), (p, c2, (x, c1))]
        else:  # reticulation: e comes from one of the two parents
            p1, p2 = sorted(net.parents(x))
            c, = net.children(x)
            variants = [(p1, c, (p2, x)), (p2, c, (p1, x))]
        for p, c, e in variants:
            used = {(p, x), (x, c), e}
            for (z, w) in arcs:
                if (z, w) in used:
                    continue
                if not {p, c} & {z, w}:
                    continue
                moves.append(RnniMove(p=p, x=x, c=c, e=e, z=z, w=w))
    return moves


def rnni_neighbors(net: PhyloNetwork,
                   orchard_only: bool = False) -> list[tuple[RnniMove, PhyloNetwork]]:
    """All distinct rNNI neighbours, one representative move per isomorphism class.

    Results isomorphic to the input are dropped; with ``orchard_only`` the
    list keeps only orchard results.
    """
    if not is_binary(net):
        raise MoveError("rNNI neighbourhoods are defined for binary networks")
    self_key = canonical_form(net)
    seen: dict[bytes, tuple[RnniMove, PhyloNetwork]] = {}
    for move in candidate_moves(net):
        try:
            result = apply_rnni(net, move)
        except MoveError:
            continue
        key = canonical_form(result)
        if key == self_key or key in seen:
            continue
        if orchard_only and is_orchard(result) is None:
            continue
        seen[key] = (move, result)
    return [seen[k] for k in sorted(seen)]


def resolve_move(net: PhyloNetwork, p: int, x: int, c: int,
                 z: int, w: int) -> RnniMove:
    """Build a move from the six node roles, inferring e from x's arcs."""
    incident = [a for a in net.sorted_arcs() if x in a]
    rest = [a for a in incident if a not in {(p, x), (x, c)}]
    if len(rest) != 1:
        raise MalformedMoveError(
            f"cannot infer e: x={x} has incident arcs {incident}")
    return RnniMove(p=p, x=x, c=c, e=rest[0], z=z, w=w)
