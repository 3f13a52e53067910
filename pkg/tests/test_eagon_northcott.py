from dataclasses import replace

import numpy as np
import pytest

from TriTensorKit.eagon_northcott import (
    EmptyGammaError,
    InconclusiveExactnessError,
    TwistRegimeError,
    cokernel_dimension,
    en_complex,
    exactness_at,
    gamma_points,
    hilbert_function,
    verify_dd_zero,
    verify_generic_exactness,
)
from TriTensorKit.generators import random_tensor
from TriTensorKit.tensor import TriTensor

NATURAL = (0, 1, 2)


def _flip_entry(c):
    """Negate the first nonzero entry of the first differential."""
    first = [list(row) for row in c.differentials[0]]
    col = next(k for k, entry in enumerate(first[0]) if entry)
    first[0][col] = -first[0][col]
    return replace(c, differentials=(tuple(tuple(row) for row in first), *c.differentials[1:]))


@pytest.mark.parametrize("twist, ranks", [(1, [3, 3]), (2, [6, 9, 3]), (3, [10, 18, 9, 1])])
def test_symmetric_shape(cayley6_tensor, twist, ranks):
    c = en_complex(cayley6_tensor, twist)
    assert c.regime == "symmetric"
    assert c.dims == (4, 3, 3)
    assert [term.rank for term in c.terms] == ranks
    assert c.generic_rank == 0
    assert not c.flagged


def test_split_shape_natural_order(cayley6_tensor):
    c = en_complex(cayley6_tensor, 1, NATURAL)
    assert c.regime == "split"
    assert [term.rank for term in c.terms] == [3, 4, 1]
    assert [term.twist for term in c.terms] == [0, 1, 4]
    assert c.terms[-1].divided


@pytest.mark.parametrize("twist", [1, 2, 3])
def test_dd_zero(cayley6_tensor, twist):
    assert verify_dd_zero(en_complex(cayley6_tensor, twist)).ok


def test_dd_zero_split(cayley6_tensor, general_point_tensors):
    for t in [cayley6_tensor, *general_point_tensors]:
        assert verify_dd_zero(en_complex(t, 1, NATURAL)).ok


def test_flipped_sign_breaks_dd_zero(cayley6_tensor):
    result = verify_dd_zero(_flip_entry(en_complex(cayley6_tensor, 2)))
    assert not result.ok
    assert result.first_nonzero[0] == 1


@pytest.mark.parametrize("twist", [1, 2, 3])
def test_generic_exactness(cayley6_tensor, twist):
    result = verify_generic_exactness(en_complex(cayley6_tensor, twist), samples=5)
    assert result.ok
    assert len(result.checked) == 5


def test_generic_exactness_is_seeded(cayley6_tensor):
    c = en_complex(cayley6_tensor, 1)
    first = verify_generic_exactness(c, samples=3, seed=4)
    second = verify_generic_exactness(c, samples=3, seed=4)
    assert [r.point for r in first.checked] == [r.point for r in second.checked]


def test_exactness_fails_on_support(doubleline_tensors):
    c = en_complex(doubleline_tensors["doubleline-1"], 1)
    result = exactness_at(c, [0, 0, 1, 0])
    assert result.on_support
    assert not all(result.exact)


def test_inconclusive_exactness(doubleline_tensors):
    c = en_complex(doubleline_tensors["doubleline-1"], 1)
    with pytest.raises(InconclusiveExactnessError):
        verify_generic_exactness(c, points=[[0, 0, 1, 0], [0, 0, 0, 1], [0, 0, 0, 0]])


def test_hilbert_function_natural_order(cayley6_tensor):
    table = hilbert_function(en_complex(cayley6_tensor, 1, NATURAL), range(6))
    assert list(table.values) == [3, 5, 6, 6, 6, 6]
    assert table[4] == 6
    assert table.to_json()["2"] == 6


@pytest.mark.parametrize("degree", [2, 3])
def test_cokernel_dimension_matches_points(cayley6_tensor, degree):
    assert cokernel_dimension(en_complex(cayley6_tensor, 1, NATURAL), degree) == 6


def test_cokernel_dimension_low_degree(cayley6_tensor):
    c = en_complex(cayley6_tensor, 1, NATURAL)
    assert cokernel_dimension(c, 0) == 3
    assert cokernel_dimension(c, 1) == 5


@pytest.mark.parametrize("twist", [0, -1])
def test_twist_outside_regimes(cayley6_tensor, twist):
    with pytest.raises(TwistRegimeError):
        en_complex(cayley6_tensor, twist)


def test_empty_gamma():
    t = TriTensor(np.ones((2, 2, 4), dtype=int))
    with pytest.raises(EmptyGammaError):
        en_complex(t, 1)


def test_gamma_points_cayley6(cayley6_tensor):
    scan = gamma_points(cayley6_tensor, 101)
    assert scan.prime == 101
    assert not scan.saturated
    assert len(scan.pairs) == 6
    assert all(w is not None for _, w in scan.pairs)


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(10))
def test_random_tensor_complexes(seed):
    t = random_tensor(seed)
    for twist in (1, 2, 3):
        c = en_complex(t, twist)
        assert verify_dd_zero(c).ok
        assert verify_generic_exactness(c, samples=20, seed=seed).ok
    table = hilbert_function(en_complex(t, 1, NATURAL), range(2, 7))
    assert set(table.values) == {6}
