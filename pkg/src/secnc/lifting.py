"""Lifting a child two-layer scheme onto its parent separable network.

Each subgraph of the parent multicasts, by random linear coding, the symbols
that its relays would have carried in the child network; every destination
then sees exactly its child observations and decodes unchanged.  Candidate
codes are drawn from seeded randomness and verified (decodability, the rank
secrecy criterion over all parent edges, and the key-matrix MDS property);
failed draws are retried up to a bound, so the accepted scheme is explicit
and deterministic in (parent, child scheme, seed).
"""

from __future__ import annotations

import math
import random
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .gf import FieldMatrix, IncrementalBasis, hstack, right_inverse
from .network import (
    SOURCE,
    ChildConstruction,
    SeparableNetwork,
    build_child,
    destination,
    min_cut_dag,
    subgraph_edge_indices,
    topological_order,
)
from .scheme import WiretapScheme, build_scheme
from .secrecy import EdgeModel, mds_check, rank_condition
from .subsets import format_subset, mask_of, nonempty_subsets


class MulticastFailureError(RuntimeError):
    def __init__(self, message: str, attempts: int) -> None:
        super().__init__(message)
        self.attempts = attempts


class LiftFailureError(RuntimeError):
    def __init__(self, condition: str, attempts: int) -> None:
        super().__init__(f"lift failed after {attempts} attempts; last failing condition: {condition}")
        self.condition = condition
        self.attempts = attempts


@dataclass(frozen=True)
class SubgraphDecoder:
    destination: int
    edge_indices: tuple[int, ...]
    matrix: FieldMatrix  # payload = matrix @ observed symbols


@dataclass(frozen=True)
class SubgraphCode:
    """Linear code on one subgraph: a coefficient vector per edge over the
    subgraph's payload symbols, plus an exact decoder per destination."""

    label: frozenset[int]
    payload_size: int
    edge_indices: tuple[int, ...]
    coefficients: FieldMatrix  # len(edge_indices) x payload_size
    decoders: tuple[SubgraphDecoder, ...]
    attempts: int

    def decoder_for(self, i: int) -> SubgraphDecoder:
        for dec in self.decoders:
            if dec.destination == i:
                return dec
        raise KeyError(f"no decoder for destination {i}")


def multicast_subgraph(
    net: SeparableNetwork,
    label: frozenset[int],
    payload_size: int,
    q: int,
    seed_token: str,
    max_attempts: int = 64,
) -> SubgraphCode:
    """Random linear multicast of ``payload_size`` symbols over one subgraph.

    Source edges carry uniform combinations of the payload; every other edge
    carries a uniform combination of its tail's incoming subgraph edges.
    A draw succeeds when each destination in ``label`` can invert a full-rank
    payload-sized system from its incoming edges; draws are retried with
    fresh coefficients up to ``max_attempts``.
    """
    label = frozenset(label)
    idxs = subgraph_edge_indices(net, label)
    if payload_size == 0:
        coeffs = FieldMatrix.zeros(len(idxs), 0, q)
        decoders = tuple(SubgraphDecoder(i, (), FieldMatrix.zeros(0, 0, q)) for i in sorted(label))
        return SubgraphCode(label, 0, idxs, coeffs, decoders, attempts=0)
    for i in sorted(label):
        cut = min_cut_dag(net, {i}, idxs)
        if cut < payload_size:
            raise ValueError(
                f"subgraph {format_subset(label)}: min-cut {cut} to destination {i} "
                f"cannot carry {payload_size} symbols"
            )
    topo_pos = {node: p for p, node in enumerate(topological_order(net))}
    ordered = sorted(idxs, key=lambda e: (topo_pos[net.edges[e][0]], e))
    incoming: dict[str, list[int]] = {}
    for e in idxs:
        incoming.setdefault(net.edges[e][1], []).append(e)
    for edges in incoming.values():
        edges.sort()
    for attempt in range(max_attempts):
        rng = random.Random(f"{seed_token}|{mask_of(label)}|{attempt}")
        coeff: dict[int, np.ndarray] = {}
        for e in ordered:
            tail = net.edges[e][0]
            if tail == SOURCE:
                vec = np.array([rng.randrange(q) for _ in range(payload_size)], dtype=np.int64)
            else:
                vec = np.zeros(payload_size, dtype=np.int64)
                for f in incoming.get(tail, []):
                    vec = (vec + rng.randrange(q) * coeff[f]) % q
            coeff[e] = vec
        decoders = _solve_decoders(net, label, payload_size, q, coeff, incoming)
        if decoders is not None:
            rows = [coeff[e] for e in idxs]
            coeffs = FieldMatrix.from_rows(rows, q, cols=payload_size)
            return SubgraphCode(label, payload_size, idxs, coeffs, tuple(decoders), attempts=attempt + 1)
    raise MulticastFailureError(
        f"subgraph {format_subset(label)}: no decodable draw in {max_attempts} attempts", max_attempts
    )


def _solve_decoders(net, label, payload_size, q, coeff, incoming):
    decoders = []
    for i in sorted(label):
        arrivals = incoming.get(destination(i), [])
        basis = IncrementalBasis(q, payload_size)
        chosen: list[int] = []
        for e in arrivals:
            if basis.try_add(coeff[e]):
                chosen.append(e)
        if len(chosen) < payload_size:
            return None
        square = FieldMatrix.from_rows([coeff[e] for e in chosen], q, cols=payload_size)
        # square is invertible, so the right inverse is two-sided and
        # inverse @ observed reproduces the payload exactly for all inputs
        decoders.append(SubgraphDecoder(i, tuple(chosen), right_inverse(square)))
    return decoders


@dataclass(frozen=True)
class LiftedScheme:
    """A verified scheme on the parent network.

    ``relay_coefficients`` maps child relay symbols to edge symbols (one row
    per parent edge); ``edge_rows`` composes that with the child encoder, so
    each row is the edge's linear view of (messages, key).
    """

    parent: SeparableNetwork
    scheme: WiretapScheme
    relay_labels: tuple[frozenset[int], ...]
    subgraph_codes: tuple[SubgraphCode, ...]
    relay_coefficients: FieldMatrix
    edge_rows: FieldMatrix
    seed: int
    attempts: int

    def relays_of(self, label: frozenset[int]) -> tuple[int, ...]:
        return tuple(r + 1 for r, j in enumerate(self.relay_labels) if j == label)


def lift_scheme(
    parent: SeparableNetwork,
    child_scheme: WiretapScheme,
    seed: int = 0,
    max_attempts: int = 64,
) -> LiftedScheme:
    """Convert a child two-layer scheme into a scheme on the parent.

    Attempt 0 keeps the child's own key matrix (the deterministic Vandermonde
    choice is already MDS); later attempts redraw a uniform key matrix and
    rebuild the child scheme at the same rates before redrawing multicast
    coefficients.  Each attempt is verified for exact decodability, the rank
    secrecy criterion over all parent edges, and the MDS property; the first
    fully verified draw wins.
    """
    child = build_child(parent)
    if child.network != child_scheme.net:
        raise ValueError("child scheme was not built on build_child(parent)")
    q = child_scheme.q
    k = child_scheme.k
    condition = "no attempt ran"
    for attempt in range(max_attempts):
        scheme = child_scheme
        if attempt > 0:
            rng = random.Random(f"{seed}|key|{attempt}")
            fresh = FieldMatrix.from_rows(
                [[rng.randrange(q) for _ in range(k)] for _ in range(child.network.t)], q, cols=k
            )
            try:
                scheme = _rebuild(child_scheme, fresh)
            except ValueError:
                condition = "rebuild with redrawn key matrix"
                continue
            if scheme.rates != child_scheme.rates:
                condition = "rates drifted under redrawn key matrix"
                continue
        try:
            codes = [
                multicast_subgraph(
                    parent, j, parent.declared.get(j, 0), q, seed_token=f"{seed}|{attempt}"
                )
                for j in nonempty_subsets(parent.m)
                if parent.declared.get(j, 0) > 0 or subgraph_edge_indices(parent, j)
            ]
        except MulticastFailureError:
            condition = "multicast decodability"
            continue
        lifted = _compose(parent, scheme, child, codes, seed, attempt + 1)
        report = mds_check(scheme.key_matrix, k)
        if not report.passed:
            condition = "key matrix MDS"
            continue
        model = lifted_edge_model(lifted)
        report = rank_condition(model.message_part, model.key_part, k, model.labels)
        if not report.passed:
            condition = f"rank secrecy at edges {report.counterexample}"
            continue
        return lifted
    raise LiftFailureError(condition, max_attempts)


def _rebuild(child_scheme: WiretapScheme, key_matrix: FieldMatrix) -> WiretapScheme:
    if child_scheme.permutation is not None:
        return build_scheme(
            child_scheme.net,
            k=child_scheme.k,
            q=child_scheme.q,
            permutation=child_scheme.permutation,
            key_matrix=key_matrix,
        )
    return build_scheme(
        child_scheme.net,
        k=child_scheme.k,
        q=child_scheme.q,
        rates=child_scheme.rates,
        key_matrix=key_matrix,
    )


def _compose(parent, scheme, child: ChildConstruction, codes, seed, attempts) -> LiftedScheme:
    q = scheme.q
    t = child.network.t
    relay_rows = np.zeros((parent.edge_count, t), dtype=np.int64)
    label_relays = {}
    for code in codes:
        label_relays[code.label] = [r + 1 for r, j in enumerate(child.relay_labels) if j == code.label]
    for code in codes:
        relays = label_relays[code.label]
        for pos, e in enumerate(code.edge_indices):
            for slot, relay in enumerate(relays):
                relay_rows[e, relay - 1] = code.coefficients.data[pos, slot]
    relay_coefficients = FieldMatrix(relay_rows, q)
    encoder = hstack([scheme.message_matrix, scheme.key_matrix])
    edge_rows = relay_coefficients @ encoder
    return LiftedScheme(
        parent=parent,
        scheme=scheme,
        relay_labels=child.relay_labels,
        subgraph_codes=tuple(codes),
        relay_coefficients=relay_coefficients,
        edge_rows=edge_rows,
        seed=seed,
        attempts=attempts,
    )


def transmit(lifted: LiftedScheme, messages: Sequence[Sequence[int]], key: Sequence[int]) -> tuple[int, ...]:
    """Symbols carried by every parent edge for one channel use."""
    q = lifted.scheme.q
    for msg, rate in zip(messages, lifted.scheme.rates):
        if len(msg) != rate:
            raise ValueError("message lengths must match the scheme rates")
    if len(key) != lifted.scheme.k:
        raise ValueError(f"key length {len(key)} != {lifted.scheme.k}")
    w = [x % q for msg in messages for x in msg] + [x % q for x in key]
    return lifted.edge_rows.apply(w)


def decode_destination(lifted: LiftedScheme, i: int, edge_symbols: Sequence[int]) -> tuple[int, ...]:
    """Recover destination ``i``'s message from its subgraph arrivals.

    Per subgraph containing ``i``, the stored decoder reproduces the child
    relay symbols exactly; the child decoding rows for ``i`` vanish outside
    those relays, so applying them to the reassembled vector is exact.
    """
    if len(edge_symbols) != lifted.parent.edge_count:
        raise ValueError("need one symbol per parent edge")
    q = lifted.scheme.q
    x = np.zeros(lifted.scheme.net.t, dtype=np.int64)
    for code in lifted.subgraph_codes:
        if i not in code.label or code.payload_size == 0:
            continue
        dec = code.decoder_for(i)
        observed = [edge_symbols[e] for e in dec.edge_indices]
        payload = dec.matrix.apply(observed)
        for slot, relay in enumerate(lifted.relays_of(code.label)):
            x[relay - 1] = payload[slot]
    block = lifted.scheme.decoding_matrix.data[lifted.scheme.message_slice(i)]
    return tuple(int(v) for v in (block @ x) % q)


def lifted_edge_model(lifted: LiftedScheme) -> EdgeModel:
    """One observable row per physical parent edge."""
    total = lifted.scheme.total_rate
    labels = tuple(f"{tail}->{head}#{e}" for e, (tail, head) in enumerate(lifted.parent.edges))
    return EdgeModel(
        labels=labels,
        message_part=FieldMatrix(lifted.edge_rows.data[:, :total], lifted.scheme.q),
        key_part=FieldMatrix(lifted.edge_rows.data[:, total:], lifted.scheme.q),
        physical_edge_count=lifted.parent.edge_count,
    )


# Any rational upper bound on Euler's number keeps the bound valid.
EULER_UPPER = Fraction(271829, 100000)


def random_code_success_bound(edge_count: int, k: int, message_space: int, q: int) -> Fraction:
    """Exact lower bound on the probability that one uniform draw of the key
    matrix and coding coefficients verifies.

    Evaluates 1 - (e|E|/k)^k d - C(M, k) d with d = 1 - (1 - 1/q)^k in exact
    rational arithmetic; a positive value certifies that retries terminate
    with positive probability per draw at this field size.
    """
    if k < 1:
        raise ValueError("bound is defined for budgets k >= 1")
    if q < 2:
        raise ValueError("field size must be at least 2")
    if message_space < k:
        raise ValueError("message space must be at least k")
    deficit = 1 - (1 - Fraction(1, q)) ** k
    union_term = (EULER_UPPER * edge_count / k) ** k
    return 1 - union_term * deficit - math.comb(message_space, k) * deficit


def smallest_modulus_with_positive_bound(
    edge_count: int, k: int, message_space: int, probes: Sequence[int] | None = None
) -> int | None:
    """First prime in ``probes`` making the success bound positive."""
    if probes is None:
        probes = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79,
                  83, 89, 97, 101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173,
                  179, 181, 191, 193, 197, 199, 211, 223, 227, 229, 233, 239, 241, 251, 257, 263, 269, 271)
    for q in probes:
        if random_code_success_bound(edge_count, k, message_space, q) > 0:
            return q
    return None
