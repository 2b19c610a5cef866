import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polarpsu.core import (
    CodeParams,
    bhattacharyya_erasure,
    construct_frozen_set,
    encode,
    kronecker_power,
    subset_rule,
)
from polarpsu.errors import ParameterError

from conftest import brute_kron, gf2_product


def test_kronecker_small_cases():
    assert kronecker_power(0).tolist() == [[1]]
    assert kronecker_power(1).tolist() == [[1, 0], [1, 1]]
    assert kronecker_power(2).tolist() == [[1, 0, 0, 0], [1, 1, 0, 0], [1, 0, 1, 0], [1, 1, 1, 1]]


@pytest.mark.parametrize("m", range(0, 7))
def test_kronecker_matches_index_definition(m):
    assert kronecker_power(m).tolist() == brute_kron(m)


@pytest.mark.parametrize("m", [-1, 17, 2.0])
def test_kronecker_guard(m):
    with pytest.raises(ParameterError):
        kronecker_power(m)


@pytest.mark.parametrize("m", range(0, 11))
def test_triangular_unit_diagonal(m):
    G = kronecker_power(m)
    assert not np.triu(G, 1).any()
    assert (np.diag(G) == 1).all()


@pytest.mark.parametrize("n", range(1, 11))
def test_subset_rule_equals_matrix(n):
    G = kronecker_power(n)
    i, j = np.indices(G.shape)
    assert np.array_equal(G, ((i & j) == j).astype(np.uint8))


def test_subset_rule_examples():
    assert subset_rule(3, 1) == 1
    assert subset_rule(2, 1) == 0
    assert all(subset_rule(i, i) == 1 for i in range(64))


def test_encode_examples():
    assert encode([1, 1], CodeParams(1)).tolist() == [0, 1]
    assert encode([0, 0, 0, 1], CodeParams(2)).tolist() == [1, 1, 1, 1]
    assert not encode(np.zeros(64, np.uint8), CodeParams(6)).any()


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_encode_matches_sum_definition(n, rng):
    G = brute_kron(n)
    for _ in range(20):
        u = rng.integers(0, 2, 1 << n).tolist()
        assert encode(u, CodeParams(n)).tolist() == gf2_product(u, G)


@settings(max_examples=60, deadline=None)
@given(n=st.integers(1, 10), data=st.data())
def test_encode_is_involution(n, data):
    N = 1 << n
    u = np.array(data.draw(st.lists(st.integers(0, 1), min_size=N, max_size=N)), dtype=np.uint8)
    params = CodeParams(n)
    assert np.array_equal(encode(encode(u, params), params), u)


def test_encode_batched_matches_rows(rng):
    params = CodeParams(6)
    u = rng.integers(0, 2, (7, 64), dtype=np.uint8)
    assert np.array_equal(encode(u, params), np.stack([encode(r, params) for r in u]))


def test_encode_rejects_bad_input():
    with pytest.raises(ParameterError):
        encode([0, 1, 0], CodeParams(1))
    with pytest.raises(ParameterError):
        encode([0, 2], CodeParams(1))


def test_code_params_validation():
    p = CodeParams(3, {1, 2})
    assert (p.N, p.K) == (8, 6)
    assert p.info_positions.tolist() == [0, 3, 4, 5, 6, 7]
    with pytest.raises(ParameterError):
        CodeParams(0)
    with pytest.raises(ParameterError):
        CodeParams(2, {4})


def test_frozen_set_examples():
    assert construct_frozen_set(2, 1, 0.5) == {0}
    assert construct_frozen_set(16, 16) == frozenset()
    assert construct_frozen_set(16, 0) == frozenset(range(16))


def test_frozen_set_n8_by_hand():
    # level 2: [.9375, .5625, .4375, .0625]; each splits into (2z - z^2, z^2)
    z = bhattacharyya_erasure(8, 0.5)
    assert np.allclose(z, [0.99609375, 0.87890625, 0.80859375, 0.31640625,
                           0.68359375, 0.19140625, 0.12109375, 0.00390625])
    assert construct_frozen_set(8, 4) == {0, 1, 2, 4}
    assert construct_frozen_set(8, 5) == {0, 1, 2}


def test_frozen_set_nested_by_rate():
    prev = frozenset(range(256))
    for K in range(0, 257, 16):
        cur = construct_frozen_set(256, K)
        assert len(cur) == 256 - K
        assert cur <= prev
        prev = cur


@pytest.mark.parametrize("args", [(8, 9, 0.5), (8, -1, 0.5), (8, 4, 0.0), (8, 4, 1.0), (6, 3, 0.5)])
def test_frozen_set_errors(args):
    with pytest.raises(ParameterError):
        construct_frozen_set(*args)


def test_frozen_set_ties_freeze_smaller_index(monkeypatch):
    import polarpsu.core as core

    monkeypatch.setattr(core, "bhattacharyya_erasure", lambda N, z: np.array([0.5, 0.9, 0.5, 0.5]))
    assert construct_frozen_set(4, 2) == {1, 0}
    assert construct_frozen_set(4, 1) == {0, 1, 2}
