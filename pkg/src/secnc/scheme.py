"""Coset-coding scheme construction for two-layer networks.

The source encodes message packets jointly with uniformly random key packets
through [message_matrix | key_matrix]; each relay forwards its symbol, and a
destination decodes by an inner product with vectors that (a) annihilate the
key matrix and (b) vanish on relays it cannot see.  Decoding vectors are
picked greedily per destination, which attains every corner of the achieved
rate polytope.
"""

from __future__ import annotations

import itertools
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .gf import FieldMatrix, IncrementalBasis, default_modulus, right_inverse, right_null_space_basis, vstack
from .network import TwoLayerNetwork


class FieldTooSmallError(ValueError):
    """The field cannot host distinct evaluation points for every relay."""


class SecureCommunicationImpossibleError(ValueError):
    """Some destination's min-cut is below the wiretap budget."""


def build_vandermonde(t: int, k: int, q: int) -> FieldMatrix:
    """The t x k key matrix with row i equal to (1, i, i^2, ..., i^(k-1)).

    Requires q > t so the evaluation points 1..t stay distinct and nonzero,
    which makes every k-row submatrix invertible.  k = 0 yields the empty
    key matrix of a keyless scheme.
    """
    if q <= t:
        raise FieldTooSmallError(f"need a prime q > {t}, got {q}")
    if not 0 <= k <= t:
        raise ValueError(f"key count {k} outside 0..{t}")
    rows = [[pow(i, j, q) for j in range(k)] for i in range(1, t + 1)]
    return FieldMatrix.from_rows(rows, q, cols=k)


def constraint_matrix(key_matrix: FieldMatrix, connected: frozenset[int]) -> FieldMatrix:
    """Stack of the transposed key matrix over one unit row per unseen relay.

    The right null space of this matrix is exactly the set of decoding
    vectors available to a destination connected to ``connected``.
    """
    t = key_matrix.rows
    absent = sorted(set(range(1, t + 1)) - connected)
    units = np.zeros((len(absent), t), dtype=np.int64)
    for row, relay in enumerate(absent):
        units[row, relay - 1] = 1
    return vstack([key_matrix.transpose(), FieldMatrix(units, key_matrix.q)])


def null_space_for(key_matrix: FieldMatrix, connected: frozenset[int]) -> FieldMatrix:
    return right_null_space_basis(constraint_matrix(key_matrix, connected))


def null_spaces(net: TwoLayerNetwork, key_matrix: FieldMatrix) -> tuple[FieldMatrix, ...]:
    """Decoding-vector spaces for all destinations.

    Refuses when some destination sees fewer relays than there are key
    packets: its observations would then be pure noise.
    """
    k = key_matrix.cols
    for i, conn in enumerate(net.connections, start=1):
        if len(conn) < k:
            raise SecureCommunicationImpossibleError(
                f"destination {i} has min-cut {len(conn)} below wiretap budget {k}"
            )
    return tuple(null_space_for(key_matrix, conn) for conn in net.connections)


def select_decoding_vectors(
    nullspaces: Sequence[FieldMatrix], permutation: Sequence[int]
) -> tuple[FieldMatrix, tuple[int, ...]]:
    """Greedy corner selection.

    Walks the destinations in ``permutation`` order and keeps every canonical
    basis vector that is independent of everything kept so far.  After step i
    the kept vectors span the sum of the first i spaces, so destination
    pi(i) contributes exactly the dimension increment of that sum.  Rows of
    the returned matrix are grouped by destination in ascending order.
    """
    m = len(nullspaces)
    if sorted(permutation) != list(range(1, m + 1)):
        raise ValueError(f"{tuple(permutation)} is not a permutation of 1..{m}")
    q = nullspaces[0].q
    t = nullspaces[0].rows
    basis = IncrementalBasis(q, t)
    chosen: list[list[np.ndarray]] = [[] for _ in range(m)]
    for i in permutation:
        space = nullspaces[i - 1]
        for c in range(space.cols):
            vec = space.data[:, c]
            if basis.try_add(vec):
                chosen[i - 1].append(vec)
    rates = tuple(len(block) for block in chosen)
    rows = [vec for block in chosen for vec in block]
    return FieldMatrix.from_rows(rows, q, cols=t), rates


def select_at_rates(nullspaces: Sequence[FieldMatrix], rates: Sequence[int]) -> FieldMatrix:
    """Pick ``rates[i]`` canonical basis vectors per destination, all jointly
    independent, by depth-first search over basis subsets.

    A selection exists for every integer rate tuple inside the achieved
    region, so failure here means the tuple was infeasible.
    """
    m = len(nullspaces)
    if len(rates) != m or any(r < 0 for r in rates):
        raise ValueError(f"need {m} nonnegative rates")
    q = nullspaces[0].q
    t = nullspaces[0].rows
    for i, (space, r) in enumerate(zip(nullspaces, rates), start=1):
        if r > space.cols:
            raise ValueError(f"destination {i}: rate {r} exceeds null-space dimension {space.cols}")

    def search(i: int, basis: IncrementalBasis) -> list[list[np.ndarray]] | None:
        if i == m:
            return []
        space = nullspaces[i]
        for combo in itertools.combinations(range(space.cols), rates[i]):
            trial = basis.copy()
            vecs = [space.data[:, c] for c in combo]
            if all(trial.try_add(v) for v in vecs):
                tail = search(i + 1, trial)
                if tail is not None:
                    return [vecs] + tail
        return None

    blocks = search(0, IncrementalBasis(q, t))
    if blocks is None:
        raise ValueError(f"rate tuple {tuple(rates)} is not achievable by decoding-vector selection")
    rows = [vec for block in blocks for vec in block]
    return FieldMatrix.from_rows(rows, q, cols=t)


def build_message_matrix(decoding_matrix: FieldMatrix) -> FieldMatrix:
    """Right inverse of the decoding matrix, so decode(encode(w)) = w."""
    return right_inverse(decoding_matrix)


@dataclass(frozen=True)
class WiretapScheme:
    """A complete scheme: relay symbols are [message_matrix | key_matrix]
    applied to the stacked messages and the uniform key vector."""

    net: TwoLayerNetwork
    q: int
    k: int
    key_matrix: FieldMatrix
    message_matrix: FieldMatrix
    decoding_matrix: FieldMatrix
    rates: tuple[int, ...]
    permutation: tuple[int, ...] | None

    def __post_init__(self) -> None:
        object.__setattr__(self, "rates", tuple(self.rates))
        if self.permutation is not None:
            object.__setattr__(self, "permutation", tuple(self.permutation))
        total = sum(self.rates)
        t = self.net.t
        if self.key_matrix.shape != (t, self.k):
            raise ValueError("key matrix shape does not match (t, k)")
        if self.message_matrix.shape != (t, total):
            raise ValueError("message matrix shape does not match (t, sum of rates)")
        if self.decoding_matrix.shape != (total, t):
            raise ValueError("decoding matrix shape does not match (sum of rates, t)")
        if len(self.rates) != self.net.m:
            raise ValueError("one rate per destination required")

    @property
    def total_rate(self) -> int:
        return sum(self.rates)

    def message_slice(self, i: int) -> slice:
        start = sum(self.rates[: i - 1])
        return slice(start, start + self.rates[i - 1])


def build_scheme(
    net: TwoLayerNetwork,
    k: int = 1,
    q: int | None = None,
    permutation: Sequence[int] | None = None,
    rates: Sequence[int] | None = None,
    key_matrix: FieldMatrix | None = None,
) -> WiretapScheme:
    """Assemble a scheme at a corner (via ``permutation``) or at an explicit
    feasible integer ``rates`` tuple.

    ``key_matrix`` overrides the default Vandermonde choice; it must still be
    t x k over the same field (used by the lifting retry path, which redraws
    random key matrices).
    """
    if permutation is not None and rates is not None:
        raise ValueError("give a permutation or a rate tuple, not both")
    if q is None:
        q = default_modulus(net.t, k)
    if key_matrix is None:
        key_matrix = build_vandermonde(net.t, k, q)
    elif key_matrix.shape != (net.t, k) or key_matrix.q != q:
        raise ValueError(f"key matrix must be {net.t}x{k} over GF({q})")
    spaces = null_spaces(net, key_matrix)
    if rates is not None:
        decoding = select_at_rates(spaces, rates)
        chosen_rates = tuple(rates)
        perm_used: tuple[int, ...] | None = None
    else:
        perm_used = tuple(permutation) if permutation is not None else tuple(range(1, net.m + 1))
        decoding, chosen_rates = select_decoding_vectors(spaces, perm_used)
    message = build_message_matrix(decoding)
    return WiretapScheme(
        net=net,
        q=q,
        k=k,
        key_matrix=key_matrix,
        message_matrix=message,
        decoding_matrix=decoding,
        rates=chosen_rates,
        permutation=perm_used,
    )


def encode(scheme: WiretapScheme, messages: Sequence[Sequence[int]], key: Sequence[int]) -> tuple[int, ...]:
    """Relay symbols for one channel use."""
    if len(messages) != scheme.net.m:
        raise ValueError(f"need {scheme.net.m} message vectors")
    for i, (msg, rate) in enumerate(zip(messages, scheme.rates), start=1):
        if len(msg) != rate:
            raise ValueError(f"destination {i}: message length {len(msg)} != rate {rate}")
    if len(key) != scheme.k:
        raise ValueError(f"key length {len(key)} != {scheme.k}")
    q = scheme.q
    w = np.array([x % q for msg in messages for x in msg], dtype=np.int64)
    kv = np.array([x % q for x in key], dtype=np.int64)
    symbols = (scheme.message_matrix.data @ w + scheme.key_matrix.data @ kv) % q
    return tuple(int(x) for x in symbols)


def decode(scheme: WiretapScheme, relay_symbols: Sequence[int]) -> tuple[tuple[int, ...], ...]:
    """Per-destination decoded messages.

    Each destination's rows of the decoding matrix vanish outside its relay
    set, so this is realisable from each destination's own observations.
    """
    if len(relay_symbols) != scheme.net.t:
        raise ValueError(f"need {scheme.net.t} relay symbols")
    y = scheme.decoding_matrix.apply(relay_symbols)
    return tuple(tuple(y[scheme.message_slice(i)]) for i in range(1, scheme.net.m + 1))
