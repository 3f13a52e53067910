"""
Test configuration for `TriTensorKit`
"""

from itertools import combinations, count

import pytest

from TriTensorKit.exact import RATIONALS, FieldTag, dense_matrix, matrix_rank
from TriTensorKit.generators import cayley6, doubleline_1, doubleline_2, random_points, random_tensor
from TriTensorKit.hilbert_burch import PlanePoint, points_to_tensor
from TriTensorKit.tensor import TriTensor


def pytest_sessionstart(session):
    import numpy as np
    import pandas as pd
    import sympy

    print(f"numpy: {np.__version__}")
    print(f"pandas: {pd.__version__}")
    print(f"sympy: {sympy.__version__}")


@pytest.fixture
def field_101():
    return FieldTag(101)


@pytest.fixture(scope="session")
def cayley6_points():
    coords = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1), (1, 2, 3), (1, 4, 9)]
    return [PlanePoint.from_coordinates(c) for c in coords]


@pytest.fixture(scope="session")
def cayley6_tensor():
    return cayley6()


@pytest.fixture(scope="session")
def doubleline_tensors():
    return {"doubleline-1": doubleline_1(), "doubleline-2": doubleline_2()}


@pytest.fixture(scope="session")
def random_tensors():
    """Seeded rational tensors with entries in [-5, 5]."""
    return [random_tensor(seed) for seed in range(5)]


@pytest.fixture(scope="session")
def general_point_tensors():
    return [points_to_tensor(random_points(seed)) for seed in range(3)]


@pytest.fixture
def zero_tensor():
    return TriTensor.zeros(field=RATIONALS)


def in_general_position(points) -> bool:
    """No three of the points are collinear and the six do not lie on a conic."""
    rows = [list(p.coords) for p in points]
    if any(matrix_rank(dense_matrix(triple)) < 3 for triple in combinations(rows, 3)):
        return False
    conics = [[x * x, y * y, z * z, x * y, x * z, y * z] for x, y, z in rows]
    return matrix_rank(dense_matrix(conics)) == 6


@pytest.fixture(scope="session")
def general_position_points():
    """The first ten seeded point sets that are in general position."""
    found = []
    for seed in count():
        points = random_points(seed)
        if in_general_position(points):
            found.append(points)
        if len(found) == 10:
            return found
