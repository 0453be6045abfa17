"""Shared fixture networks, built by hand from their structural descriptions."""

from __future__ import annotations

from orchardkit.cherry_engine import CherrySequence, reconstruct
from orchardkit.network_core import PhyloNetwork
from orchardkit.rearrangement import RnniMove

# A binary network on 13 gamma-proteobacteria taxa with two horizontal
# transfer events; GAMMA_PROTEO_SEQUENCE is its published reducing sequence,
# and the frozen eNewick below is the reconstruction from that sequence.
GAMMA_PROTEO_SEQUENCE = CherrySequence((
    ("1", "2"), ("3", "4"), ("2", "4"), ("5", "6"), ("4", "6"),
    ("7", "8"), ("9", "8"), ("10", "6"), ("6", "8"), ("8", "9"),
    ("9", "10"), ("11", "12"), ("12", "13"), ("10", "13"),
))

GAMMA_PROTEO_ENEWICK = ("((13,(11,12)),(((((7,8),(9)#H2),(((5,6),((1,2),(3,4))),"
                        "(10)#H1)),#H2),#H1));")


def gamma_proteo_network() -> PhyloNetwork:
    from orchardkit.enewick_io import parse
    return parse(GAMMA_PROTEO_ENEWICK)


def crown_network() -> PhyloNetwork:
    """Tree-based but not orchard: two tree nodes both feeding two reticulations.

    root=0 -> 1; 1 -> u1=2, u2=3; u1,u2 -> v1=4, v2=5; v1 -> a, v2 -> b.
    """
    return PhyloNetwork(
        range(8),
        [(0, 1), (1, 2), (1, 3), (2, 4), (2, 5), (3, 4), (3, 5), (4, 6), (5, 7)],
        {6: "a", 7: "b"})


def three_parent_reticulation() -> PhyloNetwork:
    """Non-binary orchard network whose reticulation has three parents.

    root=0 -> t1=1 -> t2=2 -> t3=3 -> a; t1, t2, t3 -> r=4 -> b. No labelling
    can make r contemporaneous with all but one parent, because the three
    parents lie on a directed path.
    """
    return PhyloNetwork(
        range(7),
        [(0, 1), (1, 2), (2, 3), (3, 5), (1, 4), (2, 4), (3, 4), (4, 6)],
        {5: "a", 6: "b"})


# Stack of four reticulations at the top on taxa {a, b}. Node ids:
# 0 root, 1 v_rho, a-path 2,3,4,5, b-path 6,7,8,9, leaves a=10, b=11.
def _stack(horizontal: list[tuple[int, int]]) -> PhyloNetwork:
    arcs = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 10),
            (1, 6), (6, 7), (7, 8), (8, 9), (9, 11)]
    return PhyloNetwork(range(12), arcs + horizontal, {10: "a", 11: "b"})


def four_retic_stack() -> PhyloNetwork:
    """Levels 1, 2, 4 point left-to-right, level 3 right-to-left: not neat."""
    return _stack([(2, 6), (3, 7), (8, 4), (5, 9)])


def four_retic_stack_flip2() -> PhyloNetwork:
    """The stack after reorienting the highest two horizontal arcs."""
    return PhyloNetwork(
        range(12),
        [(0, 1), (1, 6), (6, 7), (7, 4), (4, 5), (5, 10),
         (1, 2), (2, 3), (3, 8), (8, 9), (9, 11),
         (2, 6), (3, 7), (8, 4), (5, 9)],
        {10: "a", 11: "b"})


def four_retic_stack_neat() -> PhyloNetwork:
    """The stack after also reorienting the highest three arcs: all aligned."""
    return PhyloNetwork(
        range(12),
        [(0, 1), (1, 2), (2, 3), (3, 8), (8, 5), (5, 10),
         (1, 6), (6, 7), (7, 4), (4, 9), (9, 11),
         (2, 6), (3, 7), (8, 4), (5, 9)],
        {10: "a", 11: "b"})


# The two moves carrying four_retic_stack to flip2 and then to neat:
# reorient the top two arcs, then the top three.
STACK_FLIP2_MOVE = RnniMove(p=3, x=7, c=8, e=(6, 7), z=3, w=4)
STACK_FLIP3_MOVE = RnniMove(p=8, x=4, c=5, e=(7, 4), z=8, w=9)


def triangle_below_tree_node() -> PhyloNetwork:
    """A triangle (w,p), (w,r), (p,r) whose apex hangs below a plain tree node.

    root=0 -> q=1; q -> leaf v=6, w=2; w -> p=3, r=4; p -> r, leaf d=7;
    r -> leaf c=5. Shifting the triangle up takes two moves.
    """
    return PhyloNetwork(
        range(8),
        [(0, 1), (1, 6), (1, 2), (2, 3), (2, 4), (3, 4), (3, 7), (4, 5)],
        {5: "c", 6: "v", 7: "d"})


def triangle_below_top_head() -> PhyloNetwork:
    """Triangle apex below the head of the lowest horizontal arc (3 moves).

    root=0 -> vr=1; vr -> s=2, q=3 with horizontal arc (s, q); s -> leaf v=8;
    q -> w=4; w -> p=5, r=6; p -> r, leaf pd=9; r -> leaf c=7.
    """
    return PhyloNetwork(
        range(10),
        [(0, 1), (1, 2), (1, 3), (2, 3), (2, 8), (3, 4),
         (4, 5), (4, 6), (5, 6), (5, 9), (6, 7)],
        {7: "c", 8: "v", 9: "pd"})


def triangle_below_top_tail() -> PhyloNetwork:
    """Triangle apex below the tail of the lowest horizontal arc (4 moves).

    root=0 -> vr=1; vr -> q=2, y=3 with horizontal arc (q, y); y -> leaf e=8;
    q -> w=4; w -> p=5, r=6; p -> r, leaf pd=9; r -> leaf c=7.
    """
    return PhyloNetwork(
        range(10),
        [(0, 1), (1, 2), (1, 3), (2, 3), (3, 8), (2, 4),
         (4, 5), (4, 6), (5, 6), (5, 9), (6, 7)],
        {7: "c", 8: "e", 9: "pd"})


def reticulation_below_tree_node() -> PhyloNetwork:
    """n=3, k=1 with the reticulation one tree node short of the top."""
    from orchardkit.enewick_io import parse
    return parse("((a,((b)#H1,c)),#H1);")


def stack_with_pendant_path() -> PhyloNetwork:
    """One reticulation at the top, two leaves below the head (path length 2).

    root=0 -> vr=1; vr -> x=2, y=3; x -> y, leaf z=4; y -> u1=5;
    u1 -> leaves al=6, bv=7.
    """
    return PhyloNetwork(
        range(8),
        [(0, 1), (1, 2), (1, 3), (2, 3), (2, 4), (3, 5), (5, 6), (5, 7)],
        {4: "z", 6: "al", 7: "bv"})


def reticulated_cherry(orientation: str = "ab") -> PhyloNetwork:
    """Reticulated cherry on {a, b}; orientation picks which leaf sits under
    the reticulation."""
    from orchardkit.enewick_io import parse
    if orientation == "ab":
        return parse("((a)#H1,(#H1,b));")
    return parse("((b)#H1,(#H1,a));")
