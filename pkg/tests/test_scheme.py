"""Scheme construction: key matrices, decoding spaces, selection, codec."""

from __future__ import annotations

import itertools
import random

import numpy as np
import pytest

from secnc.fixtures import four_dest_demo, three_dest_demo
from secnc.gf import FieldMatrix, rank, subspace_sum_dim
from secnc.network import TwoLayerNetwork
from secnc.scheme import (
    FieldTooSmallError,
    SecureCommunicationImpossibleError,
    build_message_matrix,
    build_scheme,
    build_vandermonde,
    constraint_matrix,
    decode,
    encode,
    null_spaces,
    select_at_rates,
    select_decoding_vectors,
)
from randnets import random_two_layer


def test_vandermonde_single_key_is_all_ones():
    v = build_vandermonde(6, 1, 7)
    assert v.to_lists() == [[1]] * 6


def test_vandermonde_square_full_rank():
    assert rank(build_vandermonde(3, 3, 5)) == 3


def test_vandermonde_every_pair_invertible():
    v = build_vandermonde(4, 2, 7)
    for r1, r2 in itertools.combinations(range(4), 2):
        det = (v.data[r1, 0] * v.data[r2, 1] - v.data[r1, 1] * v.data[r2, 0]) % 7
        assert det != 0


def test_vandermonde_field_too_small():
    with pytest.raises(FieldTooSmallError):
        build_vandermonde(7, 1, 7)


def test_constraint_matrix_unit_rows():
    net = three_dest_demo()
    v = build_vandermonde(net.t, 1, 7)
    v1 = constraint_matrix(v, net.connections[0])
    assert v1.to_lists() == [
        [1, 1, 1, 1, 1, 1],
        [0, 0, 1, 0, 0, 0],
        [0, 0, 0, 0, 1, 0],
        [0, 0, 0, 0, 0, 1],
    ]
    v3 = constraint_matrix(v, net.connections[2])
    assert v3.to_lists() == [
        [1, 1, 1, 1, 1, 1],
        [1, 0, 0, 0, 0, 0],
        [0, 0, 0, 1, 0, 0],
        [0, 0, 0, 0, 1, 0],
        [0, 0, 0, 0, 0, 1],
    ]


def test_constraint_matrix_full_connection():
    v = build_vandermonde(4, 2, 7)
    m = constraint_matrix(v, frozenset({1, 2, 3, 4}))
    assert m == v.transpose()


def test_null_space_dimensions_three_dest():
    net = three_dest_demo()
    v = build_vandermonde(net.t, 1, 7)
    dims = tuple(b.cols for b in null_spaces(net, v))
    assert dims == (2, 3, 1)


def test_null_space_dimensions_four_dest():
    net = four_dest_demo()
    v = build_vandermonde(net.t, 1, 11)
    dims = tuple(b.cols for b in null_spaces(net, v))
    assert dims == (1, 1, 2, 1)


def test_null_space_dimension_formula_random():
    rng = random.Random(3)
    for _ in range(40):
        net = random_two_layer(rng)
        k = rng.randint(0, min(len(c) for c in net.connections))
        q = 11 if net.t < 11 else 13
        v = build_vandermonde(net.t, k, q)
        for basis, conn in zip(null_spaces(net, v), net.connections):
            assert basis.cols == len(conn) - k
            # decoding vectors vanish on unseen relays and kill the key matrix
            for col in range(basis.cols):
                vec = basis.data[:, col]
                for r in range(1, net.t + 1):
                    if r not in conn:
                        assert vec[r - 1] == 0
            assert np.all(v.data.T @ basis.data % q == 0)


def test_null_space_boundary_zero_dimension():
    net = TwoLayerNetwork(t=4, connections=(frozenset({1, 2}),))
    v = build_vandermonde(4, 2, 7)
    assert null_spaces(net, v)[0].cols == 0


def test_null_space_refuses_small_cut():
    net = TwoLayerNetwork(t=4, connections=(frozenset({1}),))
    v = build_vandermonde(4, 2, 7)
    with pytest.raises(SecureCommunicationImpossibleError):
        null_spaces(net, v)


def test_selection_reaches_demo_corner():
    net = three_dest_demo()
    scheme = build_scheme(net, k=1, q=7, permutation=(3, 1, 2))
    assert scheme.rates == (2, 2, 1)


def test_selection_single_destination():
    net = TwoLayerNetwork(t=5, connections=(frozenset({1, 3, 5}),))
    scheme = build_scheme(net, k=1, q=7)
    assert scheme.rates == (2,)


def test_selection_disjoint_connections_every_permutation():
    net = TwoLayerNetwork(
        t=6, connections=(frozenset({1, 2}), frozenset({3}), frozenset({4, 5, 6}))
    )
    for perm in itertools.permutations((1, 2, 3)):
        scheme = build_scheme(net, k=1, q=7, permutation=perm)
        assert scheme.rates == (1, 0, 2)


def test_selection_rates_match_prefix_dimensions():
    net = three_dest_demo()
    v = build_vandermonde(net.t, 1, 7)
    spaces = null_spaces(net, v)
    for perm in itertools.permutations((1, 2, 3)):
        decoding, rates = select_decoding_vectors(spaces, perm)
        assert rank(decoding) == sum(rates)
        prev = 0
        for idx, i in enumerate(perm, start=1):
            dim = subspace_sum_dim([spaces[j - 1] for j in perm[:idx]])
            assert rates[i - 1] == dim - prev
            prev = dim


def test_select_at_rates_interior_point():
    net = three_dest_demo()
    v = build_vandermonde(net.t, 1, 7)
    spaces = null_spaces(net, v)
    decoding = select_at_rates(spaces, (1, 1, 1))
    assert rank(decoding) == 3


def test_select_at_rates_rejects_oversized():
    net = three_dest_demo()
    v = build_vandermonde(net.t, 1, 7)
    spaces = null_spaces(net, v)
    with pytest.raises(ValueError):
        select_at_rates(spaces, (3, 3, 1))


def test_message_matrix_zero_rates():
    decoding = FieldMatrix.zeros(0, 6, 7)
    message = build_message_matrix(decoding)
    assert message.shape == (6, 0)


def test_scheme_identities():
    scheme = build_scheme(three_dest_demo(), k=1, q=7, permutation=(3, 1, 2))
    total = scheme.total_rate
    assert (scheme.decoding_matrix @ scheme.message_matrix) == FieldMatrix.identity(total, 7)
    assert (scheme.decoding_matrix @ scheme.key_matrix) == FieldMatrix.zeros(total, 1, 7)


def test_decoding_rows_supported_on_own_relays():
    scheme = build_scheme(three_dest_demo(), k=1, q=7, permutation=(3, 1, 2))
    for i in range(1, 4):
        block = scheme.decoding_matrix.data[scheme.message_slice(i)]
        for r in range(1, scheme.net.t + 1):
            if r not in scheme.net.connections[i - 1]:
                assert np.all(block[:, r - 1] == 0)


def test_encode_zero_inputs():
    scheme = build_scheme(three_dest_demo(), k=1, q=7, permutation=(3, 1, 2))
    assert encode(scheme, [[0, 0], [0, 0], [0]], [0]) == (0,) * 6


def test_encode_key_only_hits_key_matrix():
    scheme = build_scheme(three_dest_demo(), k=1, q=7, permutation=(3, 1, 2))
    symbols = encode(scheme, [[0, 0], [0, 0], [0]], [5])
    assert symbols == scheme.key_matrix.apply([5])


def test_round_trip_random_draws():
    scheme = build_scheme(three_dest_demo(), k=1, q=7, permutation=(3, 1, 2))
    rng = random.Random(0)
    for _ in range(300):
        messages = [[rng.randrange(7) for _ in range(r)] for r in scheme.rates]
        key = [rng.randrange(7)]
        out = decode(scheme, encode(scheme, messages, key))
        assert out == tuple(tuple(m) for m in messages)


def test_decode_ignores_unseen_relays():
    scheme = build_scheme(three_dest_demo(), k=1, q=7, permutation=(3, 1, 2))
    rng = random.Random(1)
    for _ in range(50):
        messages = [[rng.randrange(7) for _ in range(r)] for r in scheme.rates]
        key = [rng.randrange(7)]
        symbols = list(encode(scheme, messages, key))
        full = decode(scheme, symbols)
        for i in range(1, 4):
            masked = [
                x if r in scheme.net.connections[i - 1] else 0
                for r, x in enumerate(symbols, start=1)
            ]
            assert decode(scheme, masked)[i - 1] == full[i - 1]


def test_encode_validates_shapes():
    scheme = build_scheme(three_dest_demo(), k=1, q=7, permutation=(3, 1, 2))
    with pytest.raises(ValueError):
        encode(scheme, [[1], [0, 0], [0]], [0])
    with pytest.raises(ValueError):
        encode(scheme, [[0, 0], [0, 0], [0]], [0, 0])


def test_build_scheme_rejects_conflicting_requests():
    with pytest.raises(ValueError):
        build_scheme(three_dest_demo(), k=1, q=7, permutation=(1, 2, 3), rates=(1, 1, 1))
