import itertools
import random

import numpy as np
import pytest

from netctl.errors import EmptyDriverSet
from netctl.graphs import DiGraph, transpose
from netctl.structural import (
    CRITICAL,
    INTERMITTENT,
    ORDINARY,
    REDUNDANT,
    classify_links,
    classify_nodes,
    classify_nodes_deletion,
    control_centrality,
    control_profile,
    min_actuators,
    min_driver_set,
    structural_controllability_check,
    switchboard_drivers,
)
from oracles import generic_min_drivers, maximum_matchings


def digraph(n, pairs):
    return DiGraph.from_pairs(n, pairs)


def random_digraph(rng, n, density=0.3, self_loops=True):
    pairs = sorted(
        {
            (i, j)
            for i in range(n)
            for j in range(n)
            if (self_loops or i != j) and rng.random() < density
        }
    )
    return digraph(n, pairs)


PATH3 = digraph(3, [(0, 1), (1, 2)])
STAR = digraph(3, [(0, 1), (0, 2)])
CYCLE3 = digraph(3, [(0, 1), (1, 2), (2, 0)])
FIG3 = digraph(5, [(0, 1), (0, 3), (3, 2), (4, 4)])


class TestMinDriverSet:
    def test_path(self):
        r = min_driver_set(PATH3)
        assert r.n_drivers == 1 and r.drivers == [0]

    def test_star(self):
        r = min_driver_set(STAR)
        assert r.n_drivers == 2 and r.drivers == [0, 2]

    def test_cycle(self):
        r = min_driver_set(CYCLE3)
        assert r.n_drivers == 1 and r.drivers == [0]

    def test_matches_generic_rank_small(self):
        rng_np = np.random.default_rng(42)
        rng = random.Random(42)
        for _ in range(40):
            n = rng.randint(2, 5)
            g = random_digraph(rng, n, 0.35)
            pairs = [(s, d) for s, d, _ in g.edges]
            nd = min_driver_set(g).n_drivers
            assert nd == generic_min_drivers(pairs, n, rng_np)


class TestStructuralCheck:
    def test_star_hub_only_dilation(self):
        ok, witness = structural_controllability_check(STAR, {0})
        assert not ok
        kind, s, t = witness
        assert kind == "dilation"
        assert set(s) == {1, 2} and len(t) < len(s)

    def test_star_hub_plus_leaf(self):
        ok, witness = structural_controllability_check(STAR, {0, 2})
        assert ok and witness is None

    def test_inaccessible(self):
        g = digraph(2, [])
        ok, witness = structural_controllability_check(g, {0})
        assert not ok and witness == ("inaccessible", 1)

    def test_empty_drivers(self):
        with pytest.raises(EmptyDriverSet):
            structural_controllability_check(STAR, set())

    def test_actuator_set_always_passes(self):
        # one input signal may attach to several actuator nodes, so the
        # driver set alone need not pass the dedicated-input test; the
        # actuator set always does
        rng = random.Random(9)
        for _ in range(50):
            g = random_digraph(rng, rng.randint(2, 7))
            r = min_actuators(g)
            ok, _ = structural_controllability_check(g, set(r.actuators))
            assert ok


def oracle_link_tags(g):
    pairs = [(s, d) for s, d, _ in g.edges]
    maxima, _ = maximum_matchings(pairs)
    tags = []
    for e in pairs:
        count = sum(1 for m in maxima if e in m)
        if count == len(maxima):
            tags.append(CRITICAL)
        elif count == 0:
            tags.append(REDUNDANT)
        else:
            tags.append(ORDINARY)
    return tags


def oracle_node_tags(g):
    pairs = [(s, d) for s, d, _ in g.edges]
    maxima, _ = maximum_matchings(pairs)
    tags = []
    for v in range(g.n_nodes):
        matched_count = sum(1 for m in maxima if any(d == v for _, d in m))
        if matched_count == 0:
            tags.append(CRITICAL)
        elif matched_count == len(maxima):
            tags.append(REDUNDANT)
        else:
            tags.append(INTERMITTENT)
    return tags


class TestClassifyLinks:
    def test_path_both_critical(self):
        assert classify_links(PATH3).tags == [CRITICAL, CRITICAL]

    def test_diamond_ordinary(self):
        g = digraph(4, [(0, 1), (0, 2), (1, 3), (2, 3)])
        lc = classify_links(g)
        tags = dict(zip([(s, d) for s, d, _ in g.edges], lc.tags))
        assert tags[(1, 3)] == ORDINARY and tags[(2, 3)] == ORDINARY

    def test_fractions_sum_to_one(self):
        rng = random.Random(17)
        for _ in range(30):
            g = random_digraph(rng, rng.randint(2, 8))
            if not g.edges:
                continue
            f = classify_links(g).fractions
            assert abs(sum(f.values()) - 1.0) < 1e-12

    def test_matches_enumeration(self):
        rng = random.Random(23)
        for _ in range(120):
            g = random_digraph(rng, rng.randint(2, 6), 0.35)
            assert classify_links(g).tags == oracle_link_tags(g)

    def test_critical_removal_shrinks_matching(self):
        rng = random.Random(31)
        for _ in range(40):
            g = random_digraph(rng, rng.randint(2, 6), 0.3)
            if not g.edges:
                continue
            tags = classify_links(g).tags
            base = min_driver_set(g).matching_size
            for (s, d, w), tag in zip(g.edges, tags):
                rest = [e for e in g.edges if e != (s, d, w)]
                size = min_driver_set(DiGraph(g.n_nodes, rest)).matching_size
                if tag == CRITICAL:
                    assert size == base - 1
                else:
                    assert size == base


class TestClassifyNodes:
    def test_star(self):
        assert classify_nodes(STAR).tags == [
            CRITICAL, INTERMITTENT, INTERMITTENT,
        ]

    def test_cycle_all_redundant(self):
        assert classify_nodes(CYCLE3).tags == [REDUNDANT] * 3

    def test_path(self):
        assert classify_nodes(PATH3).tags == [CRITICAL, REDUNDANT, REDUNDANT]

    def test_matches_enumeration(self):
        rng = random.Random(29)
        for _ in range(120):
            g = random_digraph(rng, rng.randint(2, 6), 0.35)
            assert classify_nodes(g).tags == oracle_node_tags(g)

    def test_fractions(self):
        rng = random.Random(37)
        for _ in range(20):
            g = random_digraph(rng, rng.randint(2, 8))
            f = classify_nodes(g).fractions
            assert abs(sum(f.values()) - 1.0) < 1e-12


class TestClassifyNodesDeletion:
    def test_path_middle_critical(self):
        tags = classify_nodes_deletion(PATH3).tags
        assert tags[1] == "deletion-critical"

    def test_star_leaf_redundant_hub_ordinary(self):
        tags = classify_nodes_deletion(STAR).tags
        assert tags[2] == "deletion-redundant"
        assert tags[0] == "deletion-ordinary"


class TestControlProfile:
    def test_path(self):
        p = control_profile(PATH3)
        assert p.eta == (1 / 3, 0.0, 0.0)

    def test_star(self):
        p = control_profile(STAR)
        assert p.eta == (1 / 3, 1 / 3, 0.0)

    def test_cycle(self):
        p = control_profile(CYCLE3)
        assert p.eta == (0.0, 0.0, 1 / 3)

    def test_components_sum_to_nd(self):
        rng = random.Random(41)
        for _ in range(40):
            g = random_digraph(rng, rng.randint(2, 8))
            p = control_profile(g)
            nd = min_driver_set(g).n_drivers
            assert p.n_sources + p.n_external + p.n_internal == nd


class TestControlCentrality:
    def test_stem_plus_cycle(self):
        # x1 feeds a 2-cycle; x4 inaccessible from x1
        g = digraph(4, [(0, 1), (1, 2), (2, 1), (3, 0)])
        assert control_centrality(g, {0}) == 3

    def test_cycle_any_node(self):
        for v in range(3):
            assert control_centrality(CYCLE3, {v}) == 3

    def test_chain_head(self):
        for length in range(1, 6):
            g = digraph(length, [(i, i + 1) for i in range(length - 1)])
            assert control_centrality(g, {0}) == length

    def test_all_nodes_full_dimension(self):
        rng = random.Random(43)
        for _ in range(25):
            g = random_digraph(rng, rng.randint(2, 7))
            assert control_centrality(g, range(g.n_nodes)) == g.n_nodes

    def test_monotone_in_controlled_set(self):
        rng = random.Random(47)
        for _ in range(20):
            g = random_digraph(rng, rng.randint(2, 6))
            nodes = list(range(g.n_nodes))
            rng.shuffle(nodes)
            prev = 0
            chosen = set()
            for v in nodes:
                chosen.add(v)
                cur = control_centrality(g, chosen)
                assert cur >= prev
                prev = cur


def oracle_alpha(g):
    """Maximum number of root SCCs holding an unmatched node, over all
    maximum matchings (exhaustive)."""
    from netctl.graphs import scc_decompose

    scc = scc_decompose(g)
    roots = scc.root_components()
    pairs = [(s, d) for s, d, _ in g.edges]
    maxima, best = maximum_matchings(pairs)
    n = g.n_nodes
    if best == n:
        return 1, len(roots)
    alpha = 0
    for m in maxima:
        heads = {d for _, d in m}
        exposed = set(range(n)) - heads
        hit = {scc.component_of[v] for v in exposed if scc.is_root[scc.component_of[v]]}
        alpha = max(alpha, len(hit))
    return alpha, len(roots)


class TestMinActuators:
    def test_fig3_graph(self):
        r = min_actuators(FIG3)
        assert r.n_drivers == 2 and r.beta == 2 and r.alpha == 1
        assert r.n_actuators == 3
        assert set(r.actuators) in ({0, 1, 4}, {0, 3, 4})

    def test_single_path(self):
        assert min_actuators(PATH3).n_actuators == 1

    def test_two_disjoint_2cycles(self):
        g = digraph(4, [(0, 1), (1, 0), (2, 3), (3, 2)])
        r = min_actuators(g)
        assert (r.n_drivers, r.beta, r.alpha, r.n_actuators) == (1, 2, 1, 2)

    def test_matches_brute_force(self):
        rng = random.Random(53)
        for _ in range(60):
            g = random_digraph(rng, rng.randint(2, 7), 0.3)
            alpha, beta = oracle_alpha(g)
            nd = min_driver_set(g).n_drivers
            r = min_actuators(g)
            assert r.alpha == alpha, (g.edges, r.alpha, alpha)
            assert r.n_actuators == nd + beta - alpha
            assert len(r.actuators) == r.n_actuators

    def test_bounds(self):
        rng = random.Random(59)
        for _ in range(40):
            g = random_digraph(rng, rng.randint(2, 8))
            r = min_actuators(g)
            assert r.n_drivers <= r.n_actuators <= r.n_drivers + r.beta


class TestSwitchboardDrivers:
    def test_out_star(self):
        assert switchboard_drivers(STAR) == [0]

    def test_cycle_one_node(self):
        assert switchboard_drivers(CYCLE3) == [0]

    def test_convergent_tail_excluded(self):
        g = digraph(3, [(0, 2), (1, 2)])
        drv = switchboard_drivers(g)
        assert 2 not in drv
        assert drv == [0, 1]

    def test_self_loop_is_balanced_component(self):
        g = digraph(2, [(0, 0)])
        assert switchboard_drivers(g) == [0]


class TestDuality:
    def test_sensor_count_is_nd_of_transpose(self):
        rng = random.Random(61)
        for _ in range(30):
            g = random_digraph(rng, rng.randint(2, 8))
            nd_t = min_driver_set(transpose(g)).n_drivers
            # |M*| is invariant under transposition, so counts agree
            assert nd_t == max(
                g.n_nodes
                - len(maximum_matchings([(s, d) for s, d, _ in g.edges])[0][0]),
                1,
            )
