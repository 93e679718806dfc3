"""Bundled example networks.

``three_dest_demo`` and ``four_dest_demo`` are the two small two-layer
networks used throughout the docs and golden tests; the separable fixtures
exercise the lifting pipeline across subgraph shapes (private paths, shared
relays, butterflies, chains, parallel edges).
"""

from __future__ import annotations

from .network import SeparableNetwork, TwoLayerNetwork


def three_dest_demo() -> TwoLayerNetwork:
    """Six relays, three destinations; the overlap pattern where joint
    key/message coding beats separating them spatially."""
    return TwoLayerNetwork(
        t=6,
        connections=(frozenset({1, 2, 4}), frozenset({3, 4, 5, 6}), frozenset({2, 3})),
    )


def four_dest_demo() -> TwoLayerNetwork:
    """Eight relays, four destinations; destinations 2 and 3 overlap while 1
    and 4 are isolated, giving a two-component overlap graph on {2,3,4}."""
    return TwoLayerNetwork(
        t=8,
        connections=(
            frozenset({1, 2}),
            frozenset({3, 4}),
            frozenset({4, 5, 6}),
            frozenset({7, 8}),
        ),
    )


def two_layer_as_separable(net: TwoLayerNetwork) -> SeparableNetwork:
    """Re-encode a two-layer network as a separable DAG.

    Each relay's edges (source link plus all destination links) form one
    subgraph labelled by the destinations the relay serves, so the canonical
    per-relay labelling always verifies.
    """
    nodes = ["S"] + [f"r{r}" for r in range(1, net.t + 1)] + [f"D{i}" for i in range(1, net.m + 1)]
    edges: list[tuple[str, str]] = []
    labels: list[frozenset[int]] = []
    relay_label = {
        r: frozenset(i for i in range(1, net.m + 1) if r in net.connections[i - 1])
        for r in range(1, net.t + 1)
    }
    for r in range(1, net.t + 1):
        if not relay_label[r]:
            continue  # a relay serving no destination contributes nothing
        edges.append(("S", f"r{r}"))
        labels.append(relay_label[r])
        for i in sorted(relay_label[r]):
            edges.append((f"r{r}", f"D{i}"))
            labels.append(relay_label[r])
    declared: dict[frozenset[int], int] = {}
    for r in range(1, net.t + 1):
        if relay_label[r]:
            declared[relay_label[r]] = declared.get(relay_label[r], 0) + 1
    return SeparableNetwork(m=net.m, nodes=tuple(nodes), edges=tuple(edges), labels=tuple(labels), declared=declared)


def _sep(m, nodes, parts):
    """Build a SeparableNetwork from (label, declared, edge list) parts."""
    edges: list[tuple[str, str]] = []
    labels: list[frozenset[int]] = []
    declared: dict[frozenset[int], int] = {}
    for label, value, part_edges in parts:
        declared[frozenset(label)] = value
        for e in part_edges:
            edges.append(e)
            labels.append(frozenset(label))
    return SeparableNetwork(m=m, nodes=tuple(nodes), edges=tuple(edges), labels=tuple(labels), declared=declared)


def two_paths_m2() -> SeparableNetwork:
    return _sep(
        2,
        ["S", "a", "b", "c", "D1", "D2"],
        [
            ({1}, 1, [("S", "a"), ("a", "D1")]),
            ({2}, 1, [("S", "b"), ("b", "D2")]),
            ({1, 2}, 1, [("S", "c"), ("c", "D1"), ("c", "D2")]),
        ],
    )


def butterfly_m2() -> SeparableNetwork:
    """The classic coding butterfly as a single shared subgraph."""
    return _sep(
        2,
        ["S", "n1", "n2", "n3", "n4", "D1", "D2"],
        [
            (
                {1, 2},
                2,
                [
                    ("S", "n1"),
                    ("S", "n2"),
                    ("n1", "n3"),
                    ("n2", "n3"),
                    ("n3", "n4"),
                    ("n1", "D1"),
                    ("n2", "D2"),
                    ("n4", "D1"),
                    ("n4", "D2"),
                ],
            ),
        ],
    )


def butterfly_with_private_paths() -> SeparableNetwork:
    return _sep(
        2,
        ["S", "n1", "n2", "n3", "n4", "p", "r", "D1", "D2"],
        [
            (
                {1, 2},
                2,
                [
                    ("S", "n1"),
                    ("S", "n2"),
                    ("n1", "n3"),
                    ("n2", "n3"),
                    ("n3", "n4"),
                    ("n1", "D1"),
                    ("n2", "D2"),
                    ("n4", "D1"),
                    ("n4", "D2"),
                ],
            ),
            ({1}, 1, [("S", "p"), ("p", "D1")]),
            ({2}, 1, [("S", "r"), ("r", "D2")]),
        ],
    )


def three_singletons_plus_shared() -> SeparableNetwork:
    return _sep(
        3,
        ["S", "x1", "x2", "x3", "y", "D1", "D2", "D3"],
        [
            ({1}, 1, [("S", "x1"), ("x1", "D1")]),
            ({2}, 1, [("S", "x2"), ("x2", "D2")]),
            ({3}, 1, [("S", "x3"), ("x3", "D3")]),
            ({1, 2, 3}, 1, [("S", "y"), ("y", "D1"), ("y", "D2"), ("y", "D3")]),
        ],
    )


def pairwise_shared_m3() -> SeparableNetwork:
    return _sep(
        3,
        ["S", "u", "v", "w", "D1", "D2", "D3"],
        [
            ({1, 2}, 1, [("S", "u"), ("u", "D1"), ("u", "D2")]),
            ({1, 3}, 1, [("S", "v"), ("v", "D1"), ("v", "D3")]),
            ({2, 3}, 1, [("S", "w"), ("w", "D2"), ("w", "D3")]),
        ],
    )


def deep_chains_m2() -> SeparableNetwork:
    return _sep(
        2,
        ["S", "a", "b", "c", "d", "e", "f", "D1", "D2"],
        [
            ({1, 2}, 1, [("S", "a"), ("a", "b"), ("b", "c"), ("c", "D1"), ("c", "D2")]),
            ({1}, 1, [("S", "d"), ("d", "D1")]),
            ({2}, 1, [("S", "e"), ("e", "f"), ("f", "D2")]),
        ],
    )


def parallel_edges_m2() -> SeparableNetwork:
    return _sep(
        2,
        ["S", "a", "b", "c", "D1", "D2"],
        [
            ({1}, 2, [("S", "a"), ("S", "a"), ("a", "D1"), ("a", "D1")]),
            ({2}, 1, [("S", "b"), ("b", "D2")]),
            ({1, 2}, 1, [("S", "c"), ("c", "D1"), ("c", "D2")]),
        ],
    )


def two_relay_broadcast_m3() -> SeparableNetwork:
    return _sep(
        3,
        ["S", "x", "y", "D1", "D2", "D3"],
        [
            (
                {1, 2, 3},
                2,
                [
                    ("S", "x"),
                    ("S", "y"),
                    ("x", "D1"),
                    ("y", "D1"),
                    ("x", "D2"),
                    ("y", "D2"),
                    ("x", "D3"),
                    ("y", "D3"),
                ],
            ),
        ],
    )


def mixed_m3() -> SeparableNetwork:
    return _sep(
        3,
        ["S", "h", "u", "p", "t1", "D1", "D2", "D3"],
        [
            ({1, 2, 3}, 1, [("S", "h"), ("h", "D1"), ("h", "D2"), ("h", "D3")]),
            ({1, 2}, 1, [("S", "u"), ("u", "D1"), ("u", "D2")]),
            ({3}, 1, [("S", "p"), ("p", "D3")]),
            ({1}, 1, [("S", "t1"), ("t1", "D1")]),
        ],
    )


def shared_core_for_k2_m2() -> SeparableNetwork:
    """Both destinations see the same two shared relays: fit for budget 2."""
    return _sep(
        2,
        ["S", "x", "y", "a", "b", "D1", "D2"],
        [
            (
                {1, 2},
                2,
                [("S", "x"), ("S", "y"), ("x", "D1"), ("x", "D2"), ("y", "D1"), ("y", "D2")],
            ),
            ({1}, 1, [("S", "a"), ("a", "D1")]),
            ({2}, 1, [("S", "b"), ("b", "D2")]),
        ],
    )


def eq_violating_m2() -> SeparableNetwork:
    """Adversarial: every subgraph condition holds (all declared cuts are
    zero) but a cross-subgraph path makes the composition identity fail."""
    return SeparableNetwork(
        m=2,
        nodes=("S", "a", "b", "D1", "D2"),
        edges=(("S", "a"), ("a", "b"), ("b", "D1")),
        labels=(frozenset({1}), frozenset({2}), frozenset({1})),
        declared={},
    )


def lifting_fixtures() -> list[tuple[str, SeparableNetwork, int]]:
    """(name, parent network, wiretap budget) triples for the lift suite."""
    return [
        ("two_paths_m2/k1", two_paths_m2(), 1),
        ("butterfly_m2/k1", butterfly_m2(), 1),
        ("butterfly_private/k1", butterfly_with_private_paths(), 1),
        ("butterfly_private/k2", butterfly_with_private_paths(), 2),
        ("relay_expansion_m2/k1", two_layer_as_separable(TwoLayerNetwork(3, (frozenset({1, 2}), frozenset({2, 3})))), 1),
        ("relay_expansion_m3/k1", two_layer_as_separable(three_dest_demo()), 1),
        ("three_singletons/k1", three_singletons_plus_shared(), 1),
        ("pairwise_shared_m3/k1", pairwise_shared_m3(), 1),
        ("deep_chains_m2/k1", deep_chains_m2(), 1),
        ("parallel_edges_m2/k1", parallel_edges_m2(), 1),
        ("parallel_edges_m2/k2", parallel_edges_m2(), 2),
        ("two_relay_broadcast_m3/k1", two_relay_broadcast_m3(), 1),
        ("mixed_m3/k1", mixed_m3(), 1),
        ("shared_core_m2/k2", shared_core_for_k2_m2(), 2),
    ]
