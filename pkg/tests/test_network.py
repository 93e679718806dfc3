"""Network-model checks: cuts, components, separability, child construction."""

from __future__ import annotations

import itertools
import random

import pytest

from secnc.fixtures import (
    eq_violating_m2,
    four_dest_demo,
    three_dest_demo,
    two_layer_as_separable,
    two_paths_m2,
    two_relay_broadcast_m3,
)
from secnc.network import (
    CutProfile,
    SeparableNetwork,
    TwoLayerNetwork,
    build_child,
    component_count,
    dag_cut_profile,
    min_cut_dag,
    min_cut_two_layer,
    overlap_with_union,
    pair_overlap,
    two_layer_cut_profile,
    verify_separable,
)
from secnc.subsets import nonempty_subsets
from randnets import random_two_layer


def test_two_layer_validation():
    with pytest.raises(ValueError):
        TwoLayerNetwork(t=3, connections=(frozenset(),))
    with pytest.raises(ValueError):
        TwoLayerNetwork(t=3, connections=(frozenset({4}),))


def test_min_cut_union_examples():
    net = three_dest_demo()
    assert min_cut_two_layer(net, {1, 2, 3}) == 6
    assert min_cut_two_layer(net, {3}) == 2
    assert min_cut_two_layer(four_dest_demo(), {2, 3, 4}) == 6


def test_min_cut_empty_set_needs_budget():
    net = three_dest_demo()
    with pytest.raises(ValueError):
        min_cut_two_layer(net, set())
    assert min_cut_two_layer(net, set(), wiretap_budget=2) == 2
    with pytest.raises(ValueError):
        min_cut_two_layer(net, {7})


def test_overlaps():
    net = three_dest_demo()
    assert pair_overlap(net, 1, 2) == 1
    assert pair_overlap(net, 1, 3) == 1
    assert overlap_with_union(net, 3, {1, 2}) == 2


def test_component_count_examples():
    assert component_count(four_dest_demo(), {2, 3, 4}) == 2
    assert component_count(three_dest_demo(), {2}) == 1
    disjoint = TwoLayerNetwork(t=6, connections=(frozenset({1, 2}), frozenset({3}), frozenset({4, 5})))
    assert component_count(disjoint, {1, 2, 3}) == 3
    with pytest.raises(ValueError):
        component_count(three_dest_demo(), set())


def test_component_count_bounds_random():
    rng = random.Random(7)
    for _ in range(50):
        net = random_two_layer(rng)
        for a in nonempty_subsets(net.m):
            c = component_count(net, a)
            assert 1 <= c <= len(a)


def test_cut_profile_monotone_enforced():
    with pytest.raises(ValueError):
        CutProfile(2, {frozenset({1}): 3, frozenset({2}): 1, frozenset({1, 2}): 2})


def test_min_cut_dag_basic():
    net = SeparableNetwork(
        m=1,
        nodes=("S", "v", "D1"),
        edges=(("S", "v"), ("v", "D1")),
        labels=(frozenset({1}), frozenset({1})),
        declared={frozenset({1}): 1},
    )
    assert min_cut_dag(net, {1}) == 1

    two = SeparableNetwork(
        m=1,
        nodes=("S", "a", "b", "D1"),
        edges=(("S", "a"), ("a", "D1"), ("S", "b"), ("b", "D1")),
        labels=(frozenset({1}),) * 4,
        declared={frozenset({1}): 2},
    )
    assert min_cut_dag(two, {1}) == 2

    unreachable = SeparableNetwork(
        m=2,
        nodes=("S", "v", "D1", "D2"),
        edges=(("S", "v"), ("v", "D1")),
        labels=(frozenset({1}), frozenset({1})),
        declared={frozenset({1}): 1},
    )
    assert min_cut_dag(unreachable, {2}) == 0


def test_cycle_rejected():
    with pytest.raises(ValueError):
        SeparableNetwork(
            m=1,
            nodes=("S", "a", "b", "D1"),
            edges=(("S", "a"), ("a", "b"), ("b", "a"), ("a", "D1")),
            labels=(frozenset({1}),) * 4,
            declared={frozenset({1}): 1},
        )


def _random_dag(rng: random.Random, m: int = 1):
    """Small random DAG on ordered nodes, at most 10 edges."""
    inner = [f"v{i}" for i in range(rng.randint(1, 3))]
    nodes = ["S"] + inner + [f"D{i}" for i in range(1, m + 1)]
    order = {name: i for i, name in enumerate(nodes)}
    candidates = [
        (a, b)
        for a in nodes
        for b in nodes
        if order[a] < order[b] and a not in [f"D{i}" for i in range(1, m + 1)] and b != "S"
    ]
    count = rng.randint(1, 10)
    edges = tuple(rng.choice(candidates) for _ in range(count))  # parallel edges allowed
    labels = (frozenset(range(1, m + 1)),) * len(edges)
    return SeparableNetwork(m=m, nodes=tuple(nodes), edges=edges, labels=labels, declared={})


def _brute_force_min_cut(net: SeparableNetwork, targets: set[str]) -> int:
    """Smallest number of edges whose removal disconnects S from every target."""

    def reachable(kept_indices):
        seen = {"S"}
        changed = True
        while changed:
            changed = False
            for idx in kept_indices:
                tail, head = net.edges[idx]
                if tail in seen and head not in seen:
                    seen.add(head)
                    changed = True
        return seen

    all_idx = list(range(len(net.edges)))
    for size in range(len(net.edges) + 1):
        for removed in itertools.combinations(all_idx, size):
            kept = [i for i in all_idx if i not in removed]
            if not (reachable(kept) & targets):
                return size
    return len(net.edges)


def test_min_cut_matches_brute_force_on_small_dags():
    rng = random.Random(2024)
    for _ in range(40):
        net = _random_dag(rng)
        assert min_cut_dag(net, {1}) == _brute_force_min_cut(net, {"D1"})


def test_verify_separable_single_full_subgraph():
    net = two_relay_broadcast_m3()
    report = verify_separable(net)
    assert report.ok, report.failures
    profile = dag_cut_profile(net)
    for a in nonempty_subsets(3):
        assert profile.of(a) == 2


def test_verify_separable_per_relay_labelling():
    rng = random.Random(5)
    for _ in range(20):
        net = random_two_layer(rng, t_max=5, m_max=3)
        sep = two_layer_as_separable(net)
        report = verify_separable(sep)
        assert report.ok, report.failures


def test_verify_separable_names_violated_subset():
    report = verify_separable(eq_violating_m2())
    assert not report.ok
    assert any("cut composition fails for {1}" in f for f in report.failures)


def test_verify_separable_wrong_declared_value():
    net = two_paths_m2()
    bad = SeparableNetwork(
        m=net.m, nodes=net.nodes, edges=net.edges, labels=net.labels,
        declared={**net.declared, frozenset({1, 2}): 2},
    )
    report = verify_separable(bad)
    assert not report.ok
    assert any("subgraph {1,2}" in f for f in report.failures)


def test_build_child_single_shared_subgraph():
    child = build_child(two_relay_broadcast_m3())
    assert child.network.t == 2
    assert all(c == frozenset({1, 2}) for c in child.network.connections)


def test_build_child_two_singletons():
    net = SeparableNetwork(
        m=2,
        nodes=("S", "a", "b", "D1", "D2"),
        edges=(("S", "a"), ("a", "D1"), ("S", "b"), ("b", "D2")),
        labels=(frozenset({1}), frozenset({1}), frozenset({2}), frozenset({2})),
        declared={frozenset({1}): 1, frozenset({2}): 1},
    )
    child = build_child(net)
    assert child.network.t == 2
    assert child.network.connections == (frozenset({1}), frozenset({2}))


def test_build_child_preserves_cut_profile():
    rng = random.Random(11)
    for _ in range(15):
        net = random_two_layer(rng, t_max=5, m=3)
        sep = two_layer_as_separable(net)
        child = build_child(sep)
        parent_profile = dag_cut_profile(sep)
        child_profile = two_layer_cut_profile(child.network)
        for a in nonempty_subsets(3):
            assert child_profile.of(a) == parent_profile.of(a)


def test_build_child_refuses_non_separable():
    with pytest.raises(ValueError, match="not separable"):
        build_child(eq_violating_m2())
