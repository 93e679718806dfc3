"""Seeded random-network generators shared by the property suites."""

from __future__ import annotations

import random

from secnc.network import TwoLayerNetwork


def random_two_layer(rng: random.Random, t_max: int = 8, m_max: int = 4, m: int | None = None) -> TwoLayerNetwork:
    t = rng.randint(1, t_max)
    m_count = m if m is not None else rng.randint(1, m_max)
    connections = []
    for _ in range(m_count):
        size = rng.randint(1, t)
        connections.append(frozenset(rng.sample(range(1, t + 1), size)))
    return TwoLayerNetwork(t=t, connections=tuple(connections))


def random_overlapping_net(rng: random.Random, m: int, k: int, t_max: int = 8) -> TwoLayerNetwork:
    """A net whose destinations pairwise share at least k relays.

    Half the draws are rejection-sampled unconstrained nets (kept only if the
    overlap condition already holds); the rest seed every connection set with
    a common k-relay core plus random extras, so the accepted population is
    not limited to shared-core instances.
    """
    t = rng.randint(max(k, 2), t_max)
    if rng.random() < 0.5:
        for _ in range(200):
            net = random_two_layer(rng, t_max=t_max, m=m)
            if net.t < k:
                continue
            if all(
                len(net.connections[i] & net.connections[j]) >= k
                for i in range(m)
                for j in range(i + 1, m)
            ):
                return net
    core = frozenset(rng.sample(range(1, t + 1), k))
    connections = []
    for _ in range(m):
        extras = frozenset(r for r in range(1, t + 1) if rng.random() < 0.4)
        connections.append(core | extras)
    return TwoLayerNetwork(t=t, connections=tuple(connections))
