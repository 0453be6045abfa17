import random

import pytest
from hypothesis import given, settings, strategies as st

from orchardkit.cherry_engine import random_orchard
from orchardkit.enewick_io import (ENewickError, labelling_from_json,
                                   labelling_to_json, node_for_path,
                                   node_paths, parse, sequence_from_json,
                                   sequence_to_json, write)
from orchardkit.hgt_labelling import construct
from orchardkit.network_core import are_isomorphic, reticulation_number
from orchardkit.cherry_engine import is_orchard
from orchardkit.space_explorer import enumerate_networks

from tests.fixtures import GAMMA_PROTEO_ENEWICK, gamma_proteo_network


class TestParse:
    def test_plain_cherry_under_named_root_child(self):
        net = parse("(a,b)r;")
        assert net.taxa() == {"a", "b"}
        assert len(net.nodes) == 4  # implicit root above the named group

    def test_smallest_reticulation(self):
        net = parse("((a)#H1,(#H1,b));")
        assert reticulation_number(net) == 1
        assert net.taxa() == {"a", "b"}

    def test_thirteen_taxon_fixture(self):
        net = gamma_proteo_network()
        assert len(net.leaves()) == 13
        assert reticulation_number(net) == 2
        assert is_orchard(net) is not None

    def test_branch_lengths_discarded(self):
        net = parse("(a:0.5,b:1):2;")
        assert net.taxa() == {"a", "b"}

    def test_syntax_error_carries_offset(self):
        with pytest.raises(ENewickError) as err:
            parse("((a,b)")
        assert err.value.offset is not None

    def test_single_hybrid_occurrence_rejected(self):
        with pytest.raises(ENewickError):
            parse("((a)#H1,b);")

    def test_duplicate_taxon_rejected(self):
        with pytest.raises(ENewickError):
            parse("(a,a);")

    def test_invalid_graph_rejected(self):
        # hybrid carrying two subtrees
        with pytest.raises(ENewickError):
            parse("((a)#H1,(b)#H1);")

    def test_whitespace_tolerated(self):
        net = parse("((a, (b) #H1), #H1);")
        assert net.taxa() == {"a", "b"}

    def test_hybrid_with_subtree_and_stacked_hybrids(self):
        deep = parse("((((c,d))#H1,a),(#H1,b));")
        assert deep.taxa() == {"a", "b", "c", "d"}
        assert reticulation_number(deep) == 1
        stacked = parse("(((a)#H2,(#H2,(b)#H1)),(#H1,c));")
        assert reticulation_number(stacked) == 2
        for net in (deep, stacked):
            assert are_isomorphic(net, parse(write(net)))

    @pytest.mark.parametrize("text", [
        "", ";", "(a,b)", "(a,,b);", "(a,b));", "((a)#H1,(#H1,b)); junk",
        "(a#H,b);", "(a,b;",
    ])
    def test_malformed_documents_rejected(self, text):
        with pytest.raises(ENewickError):
            parse(text)


class TestWrite:
    def test_round_trip_cherry(self):
        net = parse("(a,b);")
        assert are_isomorphic(net, parse(write(net)))

    def test_round_trip_exhaustive_two_one(self):
        for net in enumerate_networks(2, 1).values():
            assert are_isomorphic(net, parse(write(net)))

    def test_idempotent(self):
        for text in ["(a,b);", "((a)#H1,(#H1,b));", GAMMA_PROTEO_ENEWICK]:
            once = write(parse(text))
            assert write(parse(once)) == once

    def test_isomorphic_networks_serialise_identically(self):
        net = random_orchard(5, 2, seed=9)
        shifted = parse(write(net))
        assert write(net) == write(shifted)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 10 ** 6), st.integers(2, 7), st.integers(0, 3))
    def test_round_trip_random(self, seed, n, k):
        net = random_orchard(n, k, seed=seed)
        assert are_isomorphic(net, parse(write(net)))


class TestSidecars:
    def test_node_paths_are_unique_and_resolvable(self):
        net = gamma_proteo_network()
        paths = node_paths(net)
        assert len(paths) == len(net.nodes)
        assert len(set(paths.values())) == len(net.nodes)
        for node, path in paths.items():
            assert node_for_path(net, path) == node

    def test_labelling_round_trip(self):
        net = gamma_proteo_network()
        lab = construct(net)
        payload = labelling_to_json(net, lab.values)
        back = labelling_from_json(net, payload)
        assert back == lab.values

    def test_sequence_round_trip(self):
        seq = is_orchard(parse("((a)#H1,(#H1,b));"))
        back = sequence_from_json(sequence_to_json(seq))
        assert back.pairs == seq.pairs

    def test_move_round_trip(self):
        from orchardkit.enewick_io import move_from_json, move_to_json
        from orchardkit.rearrangement import rnni_neighbors
        net = gamma_proteo_network()
        move, _ = rnni_neighbors(net)[0]
        payload = move_to_json(net, move)
        assert move_from_json(net, payload) == move


def test_round_trip_many_random_networks():
    rng = random.Random(23)
    for _ in range(60):
        net = random_orchard(rng.randint(2, 8), rng.randint(0, 4),
                             seed=rng.randint(0, 10 ** 9))
        assert are_isomorphic(net, parse(write(net)))
