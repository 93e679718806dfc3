"""Exact finite-field linear algebra checks, including brute-force oracles."""

from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from secnc.gf import (
    FieldElement,
    FieldMatrix,
    NotFullRowRankError,
    default_modulus,
    hstack,
    intersection_of_row_spaces,
    is_prime,
    rank,
    right_inverse,
    right_null_space_basis,
    smallest_prime_above,
    subspace_intersection_dim,
    subspace_sum_dim,
)
from secnc.scheme import build_scheme, build_vandermonde, constraint_matrix
from secnc.fixtures import three_dest_demo

PRIMES = [2, 3, 5, 7, 11]


@st.composite
def matrices(draw, max_dim=8):
    q = draw(st.sampled_from(PRIMES))
    rows = draw(st.integers(1, max_dim))
    cols = draw(st.integers(1, max_dim))
    entries = draw(st.lists(st.integers(0, q - 1), min_size=rows * cols, max_size=rows * cols))
    return FieldMatrix(np.array(entries, dtype=np.int64).reshape(rows, cols), q)


def enumerate_vectors(n, q):
    """All of GF(q)^n as an array, mixed-radix order."""
    total = q**n
    idx = np.arange(total, dtype=np.int64)
    return (idx[:, None] // (q ** np.arange(n, dtype=np.int64))) % q


def test_primes():
    assert [p for p in range(20) if is_prime(p)] == [2, 3, 5, 7, 11, 13, 17, 19]
    assert smallest_prime_above(7) == 11
    assert default_modulus(6, 1) == 11
    assert default_modulus(4, 1) == 7


def test_field_element_arithmetic():
    a = FieldElement(3, 7)
    b = FieldElement(5, 7)
    assert (a + b).value == 1
    assert (a - b).value == 5
    assert (a * b).value == 1
    assert (-a).value == 4
    assert (a * a.inverse()).value == 1
    with pytest.raises(ZeroDivisionError):
        FieldElement(0, 7).inverse()
    with pytest.raises(ValueError):
        FieldElement(1, 6)
    with pytest.raises(ValueError):
        a + FieldElement(3, 5)


@given(st.sampled_from(PRIMES), st.integers(1, 50))
def test_field_element_inverse_property(q, raw):
    a = FieldElement(raw % q, q)
    if a.value:
        assert (a * a.inverse()).value == 1


def test_rank_identity():
    assert rank(FieldMatrix.identity(3, 5)) == 3


def test_rank_single_row():
    assert rank(FieldMatrix.from_rows([[1, 1, 1]], 3)) == 1


def test_rank_vandermonde_pairs():
    # rows (1, a) for a = 1..4 over GF(7): rank 2, and every 2x2 minor is nonzero
    m = FieldMatrix.from_rows([[1, a] for a in range(1, 5)], 7)
    assert rank(m) == 2
    for r1, r2 in itertools.combinations(range(4), 2):
        det = (m.data[r1, 0] * m.data[r2, 1] - m.data[r1, 1] * m.data[r2, 0]) % 7
        assert det != 0


def test_rank_rejects_empty():
    with pytest.raises(ValueError):
        rank(FieldMatrix.zeros(0, 3, 5))
    with pytest.raises(ValueError):
        rank(FieldMatrix.zeros(3, 0, 5))


def test_null_space_rank_one():
    basis = right_null_space_basis(FieldMatrix.from_rows([[1, 1, 1]], 3))
    assert basis.cols == 2
    assert np.all(FieldMatrix.from_rows([[1, 1, 1]], 3).data @ basis.data % 3 == 0)


def test_null_space_full_rank_square():
    basis = right_null_space_basis(FieldMatrix.identity(4, 5))
    assert basis.cols == 0


def test_null_space_of_first_destination_exhaustive():
    # constraint matrix of the destination seeing relays {1,2,4}: dimension 2,
    # confirmed by counting every annihilated vector of GF(7)^6
    net = three_dest_demo()
    v = build_vandermonde(net.t, 1, 7)
    v1 = constraint_matrix(v, net.connections[0])
    basis = right_null_space_basis(v1)
    assert basis.cols == 2
    vectors = enumerate_vectors(6, 7)
    annihilated = np.all(vectors @ v1.data.T % 7 == 0, axis=1)
    assert int(annihilated.sum()) == 7**2


def test_subspace_sum_single_and_duplicate():
    net = three_dest_demo()
    v = build_vandermonde(net.t, 1, 7)
    n1 = right_null_space_basis(constraint_matrix(v, net.connections[0]))
    assert subspace_sum_dim([n1]) == n1.cols
    assert subspace_sum_dim([n1, n1]) == n1.cols


def test_subspace_sum_three_dest_demo():
    # joint span of all three decoding spaces has dimension 5, matched by
    # exhaustively enumerating the span of the concatenated basis columns
    net = three_dest_demo()
    v = build_vandermonde(net.t, 1, 7)
    bases = [right_null_space_basis(constraint_matrix(v, c)) for c in net.connections]
    assert subspace_sum_dim(bases) == 5
    stacked = np.concatenate([b.data for b in bases], axis=1)
    coeffs = enumerate_vectors(stacked.shape[1], 7)
    span = {tuple(row) for row in coeffs @ stacked.T % 7}
    assert len(span) == 7**5


def test_subspace_sum_rejects_mismatched_ambient():
    a = FieldMatrix.identity(3, 5)
    b = FieldMatrix.identity(4, 5)
    with pytest.raises(ValueError):
        subspace_sum_dim([a, b])


def test_intersection_with_itself():
    net = three_dest_demo()
    v = build_vandermonde(net.t, 1, 7)
    v2 = constraint_matrix(v, net.connections[1])
    n2 = right_null_space_basis(v2)
    assert subspace_intersection_dim(v2, v2) == n2.cols


def test_intersection_disjoint_unit_rows():
    a = FieldMatrix.from_rows([[1, 0, 0, 0], [0, 1, 0, 0]], 5)
    b = FieldMatrix.from_rows([[0, 0, 1, 0], [0, 0, 0, 1]], 5)
    assert subspace_intersection_dim(a, b) == 0


def test_intersection_pair_exhaustive():
    # destinations 1 and 2 share one relay, so with one key packet their
    # decoding spaces only meet at zero; the exhaustive count agrees
    net = three_dest_demo()
    v = build_vandermonde(net.t, 1, 7)
    v1 = constraint_matrix(v, net.connections[0])
    v2 = constraint_matrix(v, net.connections[1])
    assert subspace_intersection_dim(v1, v2) == 0
    vectors = enumerate_vectors(6, 7)
    both = np.all(vectors @ v1.data.T % 7 == 0, axis=1) & np.all(vectors @ v2.data.T % 7 == 0, axis=1)
    assert int(both.sum()) == 1  # only the zero vector


def test_intersection_rejects_mismatched_width():
    with pytest.raises(ValueError):
        subspace_intersection_dim(FieldMatrix.identity(3, 5), FieldMatrix.identity(4, 5))


def test_row_space_intersection_matches_exhaustive_membership():
    # ambient GF(2)^4: row spaces of two overlapping coordinate patterns
    a = FieldMatrix.from_rows([[1, 1, 0, 0], [0, 0, 1, 0]], 2)
    b = FieldMatrix.from_rows([[1, 1, 1, 0], [0, 0, 0, 1]], 2)
    dim = intersection_of_row_spaces([a, b])
    members = 0
    for vec in enumerate_vectors(4, 2):
        in_a = rank(FieldMatrix(np.vstack([a.data, vec[None, :]]), 2)) == rank(a)
        in_b = rank(FieldMatrix(np.vstack([b.data, vec[None, :]]), 2)) == rank(b)
        members += in_a and in_b
    assert members == 2**dim


def test_right_inverse_identity():
    m = FieldMatrix.identity(4, 7)
    assert right_inverse(m) == m


def test_right_inverse_pivot_solution():
    m = FieldMatrix.from_rows([[1, 1]], 3)
    out = right_inverse(m)
    assert out.to_lists() == [[1], [0]]


def test_right_inverse_rejects_dependent_rows():
    with pytest.raises(NotFullRowRankError):
        right_inverse(FieldMatrix.from_rows([[1, 1], [2, 2]], 3))


def test_right_inverse_of_scheme_decoder():
    scheme = build_scheme(three_dest_demo(), k=1, q=7, permutation=(3, 1, 2))
    product = scheme.decoding_matrix @ scheme.message_matrix
    assert product == FieldMatrix.identity(5, 7)


def test_hstack_width_check():
    with pytest.raises(ValueError):
        hstack([FieldMatrix.identity(2, 5), FieldMatrix.identity(3, 5)])


@settings(max_examples=150)
@given(matrices())
def test_rank_nullity(m):
    basis = right_null_space_basis(m)
    assert len(np.nonzero(m.data @ basis.data % m.q)[0]) == 0
    assert rank(m) + basis.cols == m.cols


@settings(max_examples=100)
@given(matrices(max_dim=6), matrices(max_dim=6))
def test_sum_dim_monotone(a, b):
    if a.q != b.q or a.cols != b.cols:
        return
    ba, bb = right_null_space_basis(a), right_null_space_basis(b)
    one = subspace_sum_dim([ba])
    both = subspace_sum_dim([ba, bb])
    assert one <= both <= a.cols


@settings(max_examples=100)
@given(matrices(max_dim=6))
def test_right_inverse_property(m):
    try:
        out = right_inverse(m)
    except NotFullRowRankError:
        reduced_rank = rank(m)
        assert reduced_rank < m.rows
        return
    assert m @ out == FieldMatrix.identity(m.rows, m.q)


def test_determinism_bit_identical():
    m = FieldMatrix.from_rows([[3, 1, 4, 1], [5, 9, 2, 6], [5, 3, 5, 8]], 11)
    b1 = right_null_space_basis(m)
    b2 = right_null_space_basis(m)
    assert b1 == b2
    assert np.array_equal(b1.data, b2.data)
