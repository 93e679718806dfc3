"""Network models: two-layer networks and separable unit-capacity DAGs.

A two-layer network hops everything through one layer of relays, so its cut
quantities are plain set unions.  A separable network is a general DAG whose
edges are partitioned into per-subset subgraphs with additive min-cuts; the
partition and its declared cut values are inputs here and are verified, not
discovered.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

import networkx as nx

from .subsets import format_subset, nonempty_subsets, subsets_of

SOURCE = "S"


def destination(i: int) -> str:
    return f"D{i}"


@dataclass(frozen=True)
class TwoLayerNetwork:
    """Source, ``t`` relays, and one relay subset per destination."""

    t: int
    connections: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "connections", tuple(frozenset(c) for c in self.connections))
        if self.t < 1:
            raise ValueError("need at least one relay")
        if not self.connections:
            raise ValueError("need at least one destination")
        for i, conn in enumerate(self.connections, start=1):
            if not conn:
                raise ValueError(f"destination {i} is connected to no relay")
            if not conn <= frozenset(range(1, self.t + 1)):
                raise ValueError(f"destination {i} references relays outside 1..{self.t}")

    @property
    def m(self) -> int:
        return len(self.connections)


def _check_dest_subset(m: int, a: Iterable[int]) -> frozenset[int]:
    s = frozenset(a)
    if not s <= frozenset(range(1, m + 1)):
        raise ValueError(f"destination subset {format_subset(s)} outside 1..{m}")
    return s


def min_cut_two_layer(net: TwoLayerNetwork, a: Iterable[int], wiretap_budget: int | None = None) -> int:
    """Min-cut from the source to destination set ``a``: the size of the
    union of their relay sets.  The empty set is only meaningful when a
    wiretap budget is supplied, in which case that budget is returned."""
    s = _check_dest_subset(net.m, a)
    if not s:
        if wiretap_budget is None:
            raise ValueError("empty destination set needs an explicit wiretap budget")
        return wiretap_budget
    union: frozenset[int] = frozenset()
    for i in s:
        union |= net.connections[i - 1]
    return len(union)


def pair_overlap(net: TwoLayerNetwork, i: int, j: int) -> int:
    """Number of relays shared by destinations ``i`` and ``j``."""
    return len(net.connections[i - 1] & net.connections[j - 1])


def overlap_with_union(net: TwoLayerNetwork, i: int, a: Iterable[int]) -> int:
    """Number of relays destination ``i`` shares with the union over ``a``."""
    union: frozenset[int] = frozenset()
    for j in _check_dest_subset(net.m, a):
        union |= net.connections[j - 1]
    return len(net.connections[i - 1] & union)


def component_count(net: TwoLayerNetwork, a: Iterable[int]) -> int:
    """Connected components of the overlap graph on ``a``.

    Nodes are the destinations in ``a``; two are adjacent when their relay
    sets intersect.
    """
    s = _check_dest_subset(net.m, a)
    if not s:
        raise ValueError("component count of the empty set is undefined")
    g = nx.Graph()
    g.add_nodes_from(s)
    members = sorted(s)
    for x in range(len(members)):
        for y in range(x + 1, len(members)):
            if net.connections[members[x] - 1] & net.connections[members[y] - 1]:
                g.add_edge(members[x], members[y])
    return nx.number_connected_components(g)


@dataclass(frozen=True)
class CutProfile:
    """Min-cut value for every nonempty destination subset."""

    m: int
    values: Mapping[frozenset[int], int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", dict(self.values))
        for a in nonempty_subsets(self.m):
            if a not in self.values:
                raise ValueError(f"missing cut value for {format_subset(a)}")
            if self.values[a] < 0:
                raise ValueError(f"negative cut value for {format_subset(a)}")
        for a in nonempty_subsets(self.m):
            for i in range(1, self.m + 1):
                if i not in a and self.values[a] > self.values[a | {i}]:
                    raise ValueError("cut profile is not monotone")

    def of(self, a: Iterable[int]) -> int:
        return self.values[_check_dest_subset(self.m, a)]


def two_layer_cut_profile(net: TwoLayerNetwork) -> CutProfile:
    return CutProfile(net.m, {a: min_cut_two_layer(net, a) for a in nonempty_subsets(net.m)})


@dataclass(frozen=True)
class SeparableNetwork:
    """Unit-capacity DAG with a per-edge partition label and declared cuts.

    ``labels[e]`` names the subgraph that edge ``e`` belongs to (a nonempty
    subset of destinations) and ``declared`` holds the claimed per-subgraph
    min-cut values; subsets absent from ``declared`` are claimed to be zero.
    Parallel edges are allowed and are distinct entries of ``edges``.
    """

    m: int
    nodes: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]
    labels: tuple[frozenset[int], ...]
    declared: Mapping[frozenset[int], int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "edges", tuple((t, h) for t, h in self.edges))
        object.__setattr__(self, "labels", tuple(frozenset(l) for l in self.labels))
        object.__setattr__(self, "declared", {frozenset(j): v for j, v in self.declared.items()})
        if self.m < 1:
            raise ValueError("need at least one destination")
        if len(set(self.nodes)) != len(self.nodes):
            raise ValueError("duplicate node names")
        required = [SOURCE] + [destination(i) for i in range(1, self.m + 1)]
        for name in required:
            if name not in self.nodes:
                raise ValueError(f"missing node {name}")
        known = set(self.nodes)
        for tail, head in self.edges:
            if tail not in known or head not in known:
                raise ValueError(f"edge ({tail}, {head}) references unknown node")
        if len(self.labels) != len(self.edges):
            raise ValueError("need exactly one partition label per edge")
        full = frozenset(range(1, self.m + 1))
        for lab in self.labels:
            if not lab or not lab <= full:
                raise ValueError(f"label {format_subset(lab)} is not a nonempty subset of 1..{self.m}")
        for j, v in self.declared.items():
            if not j or not frozenset(j) <= full:
                raise ValueError("declared min-cut key is not a nonempty destination subset")
            if v < 0:
                raise ValueError("declared min-cut values must be nonnegative")
        topological_order(self)  # raises on a cycle

    @property
    def edge_count(self) -> int:
        return len(self.edges)


def topological_order(net: SeparableNetwork) -> tuple[str, ...]:
    """Kahn's algorithm with ties broken by node-list position."""
    position = {name: i for i, name in enumerate(net.nodes)}
    indegree = {name: 0 for name in net.nodes}
    for _, head in net.edges:
        indegree[head] += 1
    ready = sorted((n for n in net.nodes if indegree[n] == 0), key=position.get)
    order: list[str] = []
    while ready:
        node = ready.pop(0)
        order.append(node)
        for tail, head in net.edges:
            if tail == node:
                indegree[head] -= 1
                if indegree[head] == 0 and head not in order and head not in ready:
                    ready.append(head)
        ready.sort(key=position.get)
    if len(order) != len(net.nodes):
        raise ValueError("graph contains a cycle")
    return tuple(order)


def subgraph_edge_indices(net: SeparableNetwork, label: Iterable[int]) -> tuple[int, ...]:
    lab = frozenset(label)
    return tuple(i for i, l in enumerate(net.labels) if l == lab)


def _flow_graph(net: SeparableNetwork, edge_indices: Iterable[int]) -> nx.DiGraph:
    g = nx.DiGraph()
    g.add_nodes_from(net.nodes)
    for idx in edge_indices:
        tail, head = net.edges[idx]
        if g.has_edge(tail, head):
            g[tail][head]["capacity"] += 1
        else:
            g.add_edge(tail, head, capacity=1)
    return g


def min_cut_dag(net: SeparableNetwork, a: Iterable[int], edge_indices: Iterable[int] | None = None) -> int:
    """Max-flow from the source to the destination set ``a``.

    A super-sink with uncapacitated edges from each requested destination
    turns the set cut into a single-sink max-flow; unreachable destinations
    simply contribute no flow.
    """
    s = _check_dest_subset(net.m, a)
    if not s:
        raise ValueError("min-cut to the empty destination set is undefined")
    idxs = range(len(net.edges)) if edge_indices is None else edge_indices
    g = _flow_graph(net, idxs)
    sink = "__sink__"
    for i in s:
        g.add_edge(destination(i), sink)  # no capacity attribute: unbounded
    return int(nx.maximum_flow_value(g, SOURCE, sink))


def dag_cut_profile(net: SeparableNetwork) -> CutProfile:
    return CutProfile(net.m, {a: min_cut_dag(net, a) for a in nonempty_subsets(net.m)})


@dataclass(frozen=True)
class SeparabilityReport:
    ok: bool
    failures: tuple[str, ...] = field(default=())


def verify_separable(net: SeparableNetwork) -> SeparabilityReport:
    """Check the declared decomposition.

    For every subset label J the subgraph must reach each nonempty subset of
    J with min-cut exactly the declared value and the remaining destinations
    with min-cut zero; on top of that the whole-graph cuts must equal the sum
    of declared values over the overlapping labels.  Every violated condition
    becomes one report entry.
    """
    failures: list[str] = []
    full = frozenset(range(1, net.m + 1))
    for j in nonempty_subsets(net.m):
        idxs = subgraph_edge_indices(net, j)
        want = net.declared.get(j, 0)
        for b in subsets_of(j):
            got = min_cut_dag(net, b, idxs)
            if got != want:
                failures.append(
                    f"subgraph {format_subset(j)}: min-cut to {format_subset(b)} is {got}, declared {want}"
                )
        outside = full - j
        if outside:
            got = min_cut_dag(net, outside, idxs)
            if got != 0:
                failures.append(
                    f"subgraph {format_subset(j)}: min-cut to outside set {format_subset(outside)} is {got}, expected 0"
                )
    for a in nonempty_subsets(net.m):
        lhs = min_cut_dag(net, a)
        rhs = sum(net.declared.get(j, 0) for j in nonempty_subsets(net.m) if j & a)
        if lhs != rhs:
            failures.append(
                f"cut composition fails for {format_subset(a)}: graph min-cut {lhs}, sum of declared parts {rhs}"
            )
    return SeparabilityReport(ok=not failures, failures=tuple(failures))


@dataclass(frozen=True)
class ChildConstruction:
    """Child two-layer network plus the subgraph label of each relay."""

    network: TwoLayerNetwork
    relay_labels: tuple[frozenset[int], ...]


def build_child(net: SeparableNetwork) -> ChildConstruction:
    """Collapse a separable network to its child two-layer network.

    Each label J contributes ``declared[J]`` relays connected to exactly the
    destinations in J, which reproduces the parent's full cut profile.
    Refuses non-separable inputs.
    """
    report = verify_separable(net)
    if not report.ok:
        raise ValueError(f"network is not separable: {report.failures[0]}")
    relay_labels: list[frozenset[int]] = []
    for j in nonempty_subsets(net.m):
        relay_labels.extend([j] * net.declared.get(j, 0))
    connections = []
    for i in range(1, net.m + 1):
        conn = frozenset(r + 1 for r, j in enumerate(relay_labels) if i in j)
        if not conn:
            raise ValueError(f"destination {i} has min-cut 0; no child network exists")
        connections.append(conn)
    child = TwoLayerNetwork(t=len(relay_labels), connections=tuple(connections))
    return ChildConstruction(network=child, relay_labels=tuple(relay_labels))
