import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from TriTensorKit.exact import FieldTag, dense_matrix, matrix_rank, polynomial_ring
from TriTensorKit.scan import (
    batched_rank_mod_p,
    check_scan_prime,
    contract_mod_p,
    count_projective_points,
    evaluate_mod_p,
    inverse_mod_p,
    projective_points,
)


@pytest.mark.parametrize("dimension, p", [(1, 5), (2, 7), (3, 3)])
def test_projective_points_are_canonical_and_complete(dimension, p):
    points = np.concatenate(list(projective_points(dimension, p, chunk_size=7)))
    assert len(points) == count_projective_points(dimension, p)
    assert len({tuple(x) for x in points}) == len(points)
    leads = [x[np.flatnonzero(x)[0]] for x in points]
    assert all(lead == 1 for lead in leads)


def test_count_projective_points():
    assert count_projective_points(2, 101) == 101**2 + 101 + 1
    assert count_projective_points(3, 101) == 1040604


@pytest.mark.parametrize("p", [7, 101, 65537, 2147483647])
def test_inverse_mod_p(p):
    values = np.array([1, 2, 3, p - 1], dtype=np.int64)
    assert np.all(values * inverse_mod_p(values, p) % p == 1)


@given(st.lists(st.integers(0, 12), min_size=12, max_size=12), st.sampled_from([3, 5, 13]))
@settings(max_examples=50, deadline=None)
def test_batched_rank_matches_exact_rank(entries, p):
    matrix = np.array(entries, dtype=np.int64).reshape(3, 4)
    expected = matrix_rank(dense_matrix(matrix.tolist(), FieldTag(p)))
    assert batched_rank_mod_p(matrix[None], p)[0] == expected


def test_batched_rank_stack():
    stack = np.array([np.eye(3, dtype=np.int64), np.zeros((3, 3), dtype=np.int64), [[1, 2, 3], [2, 4, 6], [0, 0, 1]]])
    assert batched_rank_mod_p(stack, 11).tolist() == [3, 0, 2]


def test_contract_mod_p():
    tensor = np.arange(2 * 2 * 3, dtype=np.int64).reshape(2, 2, 3)
    points = np.array([[1, 0], [1, 1]], dtype=np.int64)
    result = contract_mod_p(points, tensor, 7)
    assert result.shape == (2, 2, 3)
    assert np.array_equal(result[0], tensor[0] % 7)
    assert np.array_equal(result[1], (tensor[0] + tensor[1]) % 7)


def test_evaluate_mod_p():
    ring = polynomial_ring(2, FieldTag(5))
    x0, x1 = ring.gens
    f = x0**2 + 3 * x1
    points = np.array([[1, 0], [1, 1], [2, 4]], dtype=np.int64)
    assert evaluate_mod_p(f, points, 5).tolist() == [1, 4, (4 + 12) % 5]


@pytest.mark.parametrize("p", [2, 2**31, -3])
def test_check_scan_prime_rejects(p):
    with pytest.raises(ValueError):
        check_scan_prime(p)


def test_check_scan_prime():
    assert check_scan_prime(101) == FieldTag(101)
