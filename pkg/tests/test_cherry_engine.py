import random

import pytest
from hypothesis import given, settings, strategies as st

from orchardkit.cherry_engine import (CherrySequence, MalformedSequenceError,
                                      find_reducible_pairs, is_one_leaf_tree,
                                      is_orchard,
                                      is_orchard_nonbinary_via_resolutions,
                                      one_leaf_tree, random_orchard,
                                      reconstruct, reduce_pair)
from orchardkit.enewick_io import parse
from orchardkit.network_core import (NetworkError, are_isomorphic, is_binary,
                                     reticulation_number, validate)
from orchardkit.space_explorer import enumerate_networks

from tests.fixtures import (GAMMA_PROTEO_SEQUENCE, crown_network,
                            gamma_proteo_network, three_parent_reticulation)


class TestFindReduciblePairs:
    def test_cherry_is_symmetric(self):
        pairs = find_reducible_pairs(parse("(a,b);"))
        assert [(p.x, p.y, p.kind) for p in pairs] == [
            ("a", "b", "cherry"), ("b", "a", "cherry")]

    def test_thirteen_taxon_fixture_contains_first_pair(self):
        pairs = find_reducible_pairs(gamma_proteo_network())
        assert any(p.x == "1" and p.y == "2" and p.kind == "cherry"
                   for p in pairs)

    def test_one_leaf_tree_has_none(self):
        assert find_reducible_pairs(one_leaf_tree("a")) == []

    def test_reticulated_cherry_is_directed(self):
        pairs = find_reducible_pairs(parse("((a)#H1,(#H1,b));"))
        kinds = {(p.x, p.y): p.kind for p in pairs}
        assert kinds == {("a", "b"): "reticulated_cherry"}


class TestReducePair:
    def test_cherry_reduces_to_one_leaf(self):
        out = reduce_pair(parse("(x,y);"), "x", "y")
        assert is_one_leaf_tree(out) and out.taxa() == {"y"}

    def test_published_sequence_reduces_fixture(self):
        cur = gamma_proteo_network()
        for x, y in GAMMA_PROTEO_SEQUENCE:
            nxt = reduce_pair(cur, x, y)
            assert nxt is not cur
            assert validate(nxt).ok
            cur = nxt
        assert is_one_leaf_tree(cur)

    def test_non_reducible_pair_is_identity(self):
        net = parse("((a,b),c);")
        assert reduce_pair(net, "a", "c") is net

    def test_unknown_taxon(self):
        with pytest.raises(NetworkError):
            reduce_pair(parse("(a,b);"), "a", "zz")

    def test_reduction_strictly_decreases_arcs(self):
        net = gamma_proteo_network()
        for pair in find_reducible_pairs(net):
            out = reduce_pair(net, pair.x, pair.y)
            assert len(out.arcs) < len(net.arcs)

    def test_reticulated_cherry_steps_match_manual_suppression(self):
        from orchardkit.cherry_engine import classify_pair
        from orchardkit.network_core import suppress_node
        cur = gamma_proteo_network()
        manual_steps = 0
        for x, y in GAMMA_PROTEO_SEQUENCE:
            if classify_pair(cur, x, y) == "reticulated_cherry":
                vx, vy = cur.leaf_with_taxon(x), cur.leaf_with_taxon(y)
                px, = cur.parents(vx)
                py, = cur.parents(vy)
                manual = cur.replace(drop_arcs=[(py, px)])
                for node in (px, py):
                    if manual.indegree(node) == 1 and \
                            manual.outdegree(node) == 1:
                        manual = suppress_node(manual, node)
                assert manual == reduce_pair(cur, x, y)
                manual_steps += 1
            cur = reduce_pair(cur, x, y)
        assert manual_steps == 2  # one per reticulation


class TestIsOrchard:
    def test_thirteen_taxon_fixture(self):
        seq = is_orchard(gamma_proteo_network())
        assert seq is not None and len(seq) == 14

    def test_crown_is_not_orchard(self):
        assert is_orchard(crown_network()) is None

    def test_non_binary_fixture_is_orchard(self):
        assert is_orchard(three_parent_reticulation()) is not None

    def test_greedy_sequence_re_reduces(self):
        net = gamma_proteo_network()
        seq = is_orchard(net)
        cur = net
        for x, y in seq:
            cur = reduce_pair(cur, x, y)
        assert is_one_leaf_tree(cur)


class TestReconstruct:
    def test_single_pair_gives_cherry(self):
        net = reconstruct(CherrySequence((("x", "y"),)))
        assert net.taxa() == {"x", "y"}
        assert reticulation_number(net) == 0

    def test_published_sequence_rebuilds_fixture(self):
        assert are_isomorphic(reconstruct(GAMMA_PROTEO_SEQUENCE),
                              gamma_proteo_network())

    def test_round_trip_random(self):
        rng = random.Random(31)
        for _ in range(1000):
            net = random_orchard(rng.randint(2, 7), rng.randint(0, 3),
                                 seed=rng.randint(0, 10 ** 9))
            seq = is_orchard(net)
            assert are_isomorphic(reconstruct(seq), net)

    def test_round_trip_exhaustive_small(self):
        for n, k in [(2, 0), (3, 0), (2, 1), (3, 1)]:
            for net in enumerate_networks(n, k).values():
                if len(net.leaves()) == 1:
                    continue
                assert are_isomorphic(reconstruct(is_orchard(net)), net)

    def test_reference_before_existence_rejected(self):
        with pytest.raises(MalformedSequenceError):
            reconstruct(CherrySequence((("a", "b"), ("c", "d"))))

    def test_taxa_check(self):
        with pytest.raises(MalformedSequenceError):
            reconstruct(CherrySequence((("x", "y"),)),
                        taxa=frozenset({"x", "y", "z"}))


class TestViaResolutions:
    def test_binary_orchard_input(self):
        assert is_orchard_nonbinary_via_resolutions(gamma_proteo_network())

    def test_non_binary_fixture(self):
        assert is_orchard_nonbinary_via_resolutions(three_parent_reticulation())

    def test_unresolved_crown_stays_non_orchard(self):
        # crown with the top tree node left unresolved at outdegree 3:
        # every resolution still contains the crown
        from orchardkit.network_core import PhyloNetwork
        net = PhyloNetwork(
            range(9),
            [(0, 1), (1, 2), (1, 3), (1, 8), (2, 4), (2, 5), (3, 4), (3, 5),
             (4, 6), (5, 7)],
            {6: "a", 7: "b", 8: "c"})
        assert validate(net).ok and not is_binary(net)
        assert not is_orchard_nonbinary_via_resolutions(net)
        assert is_orchard(net) is None

    def test_agreement_with_direct_recognition(self):
        for net in (three_parent_reticulation(),):
            assert (is_orchard(net) is not None) == \
                is_orchard_nonbinary_via_resolutions(net)


class TestRandomOrchard:
    def test_one_leaf(self):
        net = random_orchard(1, 0)
        assert is_one_leaf_tree(net)

    def test_trees_have_no_reticulations(self):
        net = random_orchard(6, 0, seed=2)
        assert reticulation_number(net) == 0 and len(net.leaves()) == 6

    def test_requested_shape(self):
        net = random_orchard(5, 3, seed=7)
        assert reticulation_number(net) == 3
        assert len(net.leaves()) == 5
        assert is_orchard(net) is not None

    def test_deterministic(self):
        assert random_orchard(5, 2, seed=4) == random_orchard(5, 2, seed=4)

    def test_one_leaf_with_reticulations_rejected(self):
        with pytest.raises(ValueError):
            random_orchard(1, 1)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(2, 6), st.integers(0, 3))
def test_reduce_then_reconstruct_round_trip(seed, n, k):
    net = random_orchard(n, k, seed=seed)
    seq = is_orchard(net)
    assert seq is not None
    assert are_isomorphic(reconstruct(seq), net)


def test_all_reduction_orders_terminate_small():
    from tests.oracles import exhaustive_reduction_orders
    nets = [three_parent_reticulation()]
    for n, k in [(2, 1), (3, 1), (4, 0)]:
        nets.extend(list(enumerate_networks(n, k).values())[:6])
    nets.append(random_orchard(4, 2, seed=12))
    for net in nets:
        assert exhaustive_reduction_orders(net)
