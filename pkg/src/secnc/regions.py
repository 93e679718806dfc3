"""Rate regions: the achieved polytope, cut-set outer bounds, and the
capacity formulas for a single wiretapped edge and for three destinations.

A region is stored as its defining set function g over nonempty destination
subsets; the polytope is {R >= 0 : sum over A of R_i <= g(A) for all A}.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from typing import Mapping

from .gf import FieldMatrix, default_modulus, subspace_sum_dim
from .network import CutProfile, TwoLayerNetwork, component_count, min_cut_two_layer, pair_overlap, two_layer_cut_profile
from .scheme import build_vandermonde, null_spaces
from .subsets import format_subset, mask_of, nonempty_subsets, set_of


@dataclass(frozen=True)
class RateRegion:
    """Set-function description of a rate polytope."""

    m: int
    bounds: Mapping[frozenset[int], int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "bounds", {frozenset(a): int(v) for a, v in self.bounds.items()})
        for a in nonempty_subsets(self.m):
            if a not in self.bounds:
                raise ValueError(f"missing bound for {format_subset(a)}")
            if self.bounds[a] < 0:
                raise ValueError(f"negative bound for {format_subset(a)}")

    def bound(self, a: Iterable[int]) -> int:
        return self.bounds[frozenset(a)]

    def contains(self, rates: Sequence[int]) -> tuple[bool, frozenset[int] | None]:
        """Membership test for an integer rate tuple.

        Violations are searched largest subset first, so the full destination
        set is named before any of its parts.
        """
        if len(rates) != self.m or any(r < 0 for r in rates):
            raise ValueError(f"need {self.m} nonnegative rates")
        order = sorted(nonempty_subsets(self.m), key=lambda a: (-len(a), mask_of(a)))
        for a in order:
            if sum(rates[i - 1] for i in a) > self.bounds[a]:
                return False, a
        return True, None


def achievable_region(net: TwoLayerNetwork, k: int, q: int | None = None) -> RateRegion:
    """Region achieved by the coset-coding scheme: g(A) is the dimension of
    the sum of the decoding-vector spaces over A."""
    if q is None:
        q = default_modulus(net.t, k)
    key_matrix = build_vandermonde(net.t, k, q)
    spaces = null_spaces(net, key_matrix)
    bounds = {a: subspace_sum_dim([spaces[i - 1] for i in sorted(a)]) for a in nonempty_subsets(net.m)}
    return RateRegion(net.m, bounds)


def sum_dimension(spaces: Sequence[FieldMatrix], a: Iterable[int]) -> int:
    """dim of the sum of the selected decoding-vector spaces."""
    return subspace_sum_dim([spaces[i - 1] for i in sorted(a)])


def cut_set_outer_bound(profile: CutProfile, k: int) -> RateRegion:
    """Outer bound g(A) = M_A - k, valid for any secure scheme."""
    for i in range(1, profile.m + 1):
        if profile.of({i}) < k:
            raise ValueError(f"destination {i} has min-cut below the wiretap budget {k}")
    return RateRegion(profile.m, {a: profile.of(a) - k for a in nonempty_subsets(profile.m)})


def capacity_region_k1(net: TwoLayerNetwork) -> RateRegion:
    """Capacity region for a single wiretapped edge: g(A) = M_A - C_A, with
    C_A the component count of the overlap graph on A."""
    bounds = {
        a: min_cut_two_layer(net, a) - component_count(net, a) for a in nonempty_subsets(net.m)
    }
    return RateRegion(net.m, bounds)


def capacity_region_m3(net: TwoLayerNetwork, k: int) -> RateRegion:
    """Capacity region for three destinations and any budget k, in its
    partition-minimum form: g(A) = min over partitions P of A of
    sum over blocks Q of (M_Q - k)."""
    if net.m != 3:
        raise ValueError(f"three destinations required, got {net.m}")
    return canonicalize(cut_set_outer_bound(two_layer_cut_profile(net), k))


def pairwise_overlap_sufficient(net: TwoLayerNetwork, k: int) -> bool:
    """True when every two destinations share at least k relays; the scheme
    then meets the raw cut-set outer bound for any m and k."""
    return all(
        pair_overlap(net, i, j) >= k
        for i in range(1, net.m + 1)
        for j in range(i + 1, net.m + 1)
    )


def canonicalize(region: RateRegion) -> RateRegion:
    """Partition-minimum closure: g*(A) = min over partitions of A of the
    blockwise sum of g.  The closure describes the same polytope and is
    idempotent."""
    m = region.m
    g = {mask_of(a): v for a, v in region.bounds.items()}
    best: dict[int, int] = {0: 0}
    for mask in range(1, 1 << m):
        low = mask & -mask
        value = g[mask]
        # enumerate submasks of mask that contain the lowest element
        sub = (mask - 1) & mask
        while sub:
            if sub & low:
                value = min(value, g[sub] + best[mask ^ sub])
            sub = (sub - 1) & mask
        best[mask] = value
    return RateRegion(m, {set_of(mask): best[mask] for mask in range(1, 1 << m)})


def is_monotone(region: RateRegion) -> bool:
    for a in nonempty_subsets(region.m):
        for i in range(1, region.m + 1):
            if i not in a and region.bounds[a] > region.bounds[a | {i}]:
                return False
    return True


def is_submodular(region: RateRegion) -> bool:
    """g(A u B) + g(A n B) <= g(A) + g(B) for all pairs, with g(empty) = 0."""
    m = region.m
    g = {mask_of(a): v for a, v in region.bounds.items()}
    g[0] = 0
    for a in range(1, 1 << m):
        for b in range(1, 1 << m):
            if g[a | b] + g[a & b] > g[a] + g[b]:
                return False
    return True


def corner_point(region: RateRegion, permutation: Sequence[int]) -> tuple[int, ...]:
    """Corner of a polymatroid region: prefix differences of g along the
    permutation.  Refuses set functions that are not polymatroid rank
    functions, where the formula has no meaning."""
    m = region.m
    if sorted(permutation) != list(range(1, m + 1)):
        raise ValueError(f"{tuple(permutation)} is not a permutation of 1..{m}")
    if not (is_monotone(region) and is_submodular(region)):
        raise ValueError("region bounds are not non-decreasing and submodular")
    rates = [0] * m
    prefix: frozenset[int] = frozenset()
    prev = 0
    for i in permutation:
        prefix = prefix | {i}
        value = region.bounds[prefix]
        rates[i - 1] = value - prev
        prev = value
    return tuple(rates)


def regions_equal(a: RateRegion, b: RateRegion) -> tuple[bool, frozenset[int] | None]:
    """Pointwise comparison of the canonical forms; on inequality returns the
    first witnessing subset in ascending bitmask order."""
    if a.m != b.m:
        raise ValueError(f"destination counts differ: {a.m} vs {b.m}")
    ca, cb = canonicalize(a), canonicalize(b)
    for s in nonempty_subsets(a.m):
        if ca.bounds[s] != cb.bounds[s]:
            return False, s
    return True, None
