import itertools
import random

import pytest

from orchardkit.network_core import (NetworkError, PhyloNetwork,
                                     are_isomorphic, binary_resolutions,
                                     canonical_form, contract_arc,
                                     find_isomorphism, is_binary,
                                     reticulation_number,
                                     resolving_contraction, summarize,
                                     suppress_node, validate)
from orchardkit.cherry_engine import is_orchard, random_orchard
from orchardkit.space_explorer import enumerate_networks

from tests.fixtures import (crown_network, gamma_proteo_network,
                            reticulated_cherry, three_parent_reticulation)


def relabel_nodes(net: PhyloNetwork, offset: int = 100) -> PhyloNetwork:
    mapping = {v: v + offset for v in net.nodes}
    return PhyloNetwork(
        [mapping[v] for v in net.nodes],
        [(mapping[u], mapping[v]) for u, v in net.arcs],
        {mapping[v]: lab for v, lab in net.leaf_labels.items()})


class TestValidate:
    def test_single_arc_network(self):
        net = PhyloNetwork([0, 1], [(0, 1)], {1: "a"})
        assert validate(net).ok

    def test_crown_is_a_valid_network(self):
        assert validate(crown_network()).ok

    def test_two_cycle_fails_acyclicity(self):
        net = PhyloNetwork([0, 1, 2, 3], [(0, 1), (1, 2), (2, 1), (2, 3)],
                           {3: "a"})
        report = validate(net)
        assert not report.ok
        assert any(v.code == "acyclicity" for v in report.violations)

    def test_missing_label_reported(self):
        net = PhyloNetwork([0, 1], [(0, 1)], {})
        assert any(v.code == "labels" for v in validate(net).violations)

    def test_parallel_arcs_rejected_at_construction(self):
        with pytest.raises(NetworkError):
            PhyloNetwork([0, 1], [(0, 1), (0, 1)], {1: "a"})


class TestKinds:
    def test_is_binary(self):
        assert is_binary(gamma_proteo_network())
        assert not is_binary(three_parent_reticulation())
        assert is_binary(PhyloNetwork([0, 1], [(0, 1)], {1: "a"}))

    def test_reticulation_number(self):
        tree = PhyloNetwork([0, 1, 2, 3], [(0, 1), (1, 2), (1, 3)],
                            {2: "a", 3: "b"})
        assert reticulation_number(tree) == 0
        assert reticulation_number(gamma_proteo_network()) == 2
        assert reticulation_number(three_parent_reticulation()) == 2

    def test_binary_reticulation_number_counts_nodes(self):
        net = random_orchard(5, 3, seed=1)
        assert reticulation_number(net) == len(net.reticulations()) == 3

    def test_summary(self):
        s = summarize(gamma_proteo_network())
        assert (s.n_leaves, s.n_reticulations, s.reticulation_number,
                s.is_binary) == (13, 2, 2, True)


class TestIsomorphism:
    def test_identity_with_permuted_ids(self):
        net = gamma_proteo_network()
        assert are_isomorphic(net, relabel_nodes(net))

    def test_reticulated_cherry_orientations_differ(self):
        assert not are_isomorphic(reticulated_cherry("ab"),
                                  reticulated_cherry("ba"))

    def test_mapping_respects_labels(self):
        net = random_orchard(4, 1, seed=5)
        other = relabel_nodes(net)
        iso = find_isomorphism(net, other)
        assert iso is not None
        for v, lab in net.leaf_labels.items():
            assert other.leaf_labels[iso[v]] == lab

    def test_canonical_form_matches_isomorphism_exhaustively(self):
        nets = []
        for n, k in [(1, 0), (2, 0), (3, 0), (2, 1), (3, 1)]:
            nets.extend(enumerate_networks(n, k).values())
        for a, b in itertools.combinations(nets, 2):
            assert are_isomorphic(a, b) == (canonical_form(a) == canonical_form(b))
        for a in nets:
            assert canonical_form(a) == canonical_form(relabel_nodes(a))

    def test_enumerated_networks_pairwise_distinct(self):
        keys = list(enumerate_networks(2, 1))
        assert len(keys) == len(set(keys)) == 2


class TestContractSuppress:
    def test_suppress_middle_of_path(self):
        net = PhyloNetwork([0, 1, 2], [(0, 1), (1, 2)], {2: "a"})
        out = suppress_node(net, 1)
        assert out.arcs == frozenset({(0, 2)})
        assert net.arcs == frozenset({(0, 1), (1, 2)})  # input untouched

    def test_contract_tree_arc_makes_outdegree_three(self):
        net = PhyloNetwork(range(7),
                           [(0, 1), (1, 2), (1, 3), (2, 4), (2, 5), (3, 6)],
                           {4: "a", 5: "b", 6: "c"})
        out = contract_arc(net, (1, 2))
        assert out.outdegree(1) == 3
        assert not is_binary(out)
        report = validate(out)
        assert not any(v.code == "acyclicity" for v in report.violations)

    def test_suppress_requires_degree_one_one(self):
        net = PhyloNetwork([0, 1, 2], [(0, 1), (0, 2)], {1: "a", 2: "b"})
        with pytest.raises(NetworkError):
            suppress_node(net, 0)

    def test_contract_missing_arc(self):
        net = PhyloNetwork([0, 1], [(0, 1)], {1: "a"})
        with pytest.raises(NetworkError):
            contract_arc(net, (1, 0))


class TestBinaryResolutions:
    def test_binary_input_is_its_own_resolution(self):
        net = gamma_proteo_network()
        res = binary_resolutions(net)
        assert len(res.networks) == 1 and not res.truncated
        assert are_isomorphic(res.networks[0], net)

    def test_outdegree_three_gives_three_resolutions(self):
        star = PhyloNetwork(range(5), [(0, 1), (1, 2), (1, 3), (1, 4)],
                            {2: "a", 3: "b", 4: "c"})
        res = binary_resolutions(star)
        assert len(res.networks) == 3
        assert all(is_binary(r) and validate(r).ok for r in res.networks)

    def test_three_parent_reticulation_has_an_orchard_resolution(self):
        res = binary_resolutions(three_parent_reticulation())
        assert any(is_orchard(r) is not None for r in res.networks)

    def test_resolutions_contract_back(self):
        for net in (three_parent_reticulation(),):
            for res in binary_resolutions(net).networks:
                collapsed = resolving_contraction(res, net)
                assert are_isomorphic(collapsed, net)

    def test_limit_flag(self):
        star = PhyloNetwork(range(8),
                            [(0, 1)] + [(1, i) for i in range(2, 8)],
                            {i: f"t{i}" for i in range(2, 8)})
        res = binary_resolutions(star, limit=3)
        assert res.truncated


def test_contracting_tree_arcs_never_breaks_acyclicity():
    # contracting an arc whose head has indegree 1 cannot close a cycle,
    # because the head admits no other incoming path; reticulation arcs do
    # not carry this guarantee (the tail may be an ancestor of the other
    # parent)
    rng = random.Random(19)
    for _ in range(10):
        net = random_orchard(rng.randint(2, 5), rng.randint(0, 2),
                             seed=rng.randint(0, 10 ** 9))
        for arc in net.sorted_arcs():
            if net.indegree(arc[1]) != 1:
                continue
            try:
                out = contract_arc(net, arc)
            except NetworkError:
                continue  # contraction would create a parallel arc
            assert not any(v.code == "acyclicity"
                           for v in validate(out).violations)


def test_reticulation_number_equals_cycle_rank():
    rng = random.Random(17)
    for _ in range(25):
        net = random_orchard(rng.randint(2, 7), rng.randint(0, 3),
                             seed=rng.randint(0, 10 ** 9))
        assert reticulation_number(net) == len(net.arcs) - len(net.nodes) + 1
