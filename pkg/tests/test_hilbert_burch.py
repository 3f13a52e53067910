import pytest

from TriTensorKit.exact import RATIONALS, FieldTag, evaluate, polynomial_ring
from TriTensorKit.generators import random_points
from TriTensorKit.hilbert_burch import (
    PlanePoint,
    ScanFieldError,
    SpecialPositionError,
    SyzygyDimensionError,
    base_points,
    cubic_span,
    cubics_through_points,
    dual_resolution_hilbert_function,
    evaluate_minors,
    hilbert_burch_data,
    linear_syzygies,
    maximal_minors,
    min_slice_rank_scan,
    points_on_line,
    points_to_tensor,
    slice_rank_at,
)
from TriTensorKit.tensor import symbolic_slice


def test_plane_point_normalisation():
    p = PlanePoint.from_coordinates([0, 2, "4/3"])
    assert p.coords == (0, 1, RATIONALS.ratio(2, 3))
    assert str(p) == "(0:1:2/3)"
    assert p.to_json() == ["0/1", "1/1", "2/3"]
    with pytest.raises(ValueError):
        PlanePoint.from_coordinates([0, 0, 0])
    with pytest.raises(ValueError):
        PlanePoint.from_coordinates([1, 2])


def test_cubics_vanish_at_points(cayley6_points):
    cubics = cubics_through_points(cayley6_points)
    assert len(cubics) == 4
    for g in cubics:
        assert all(evaluate(g, p.coords) == 0 for p in cayley6_points)


def test_collinear_points_are_special():
    points = [PlanePoint.from_coordinates([1, a, 0]) for a in range(5)] + [PlanePoint.from_coordinates([0, 1, 0])]
    with pytest.raises(SpecialPositionError) as info:
        cubics_through_points(points)
    assert info.value.dimension == 6


def test_linear_syzygies_are_syzygies(cayley6_points):
    cubics = cubics_through_points(cayley6_points)
    syzygies = linear_syzygies(cubics)
    assert len(syzygies) == 3
    for row in syzygies:
        assert sum((l * g for l, g in zip(row, cubics)), cubics[0].ring.zero) == 0


def test_linear_syzygies_dimension_error():
    ring = polynomial_ring(3)
    z0, z1, z2 = ring.gens
    with pytest.raises(SyzygyDimensionError):
        linear_syzygies([z0**3, z1**3, z2**3, z0 * z1 * z2])


def test_minors_respan_cubic_system(cayley6_points):
    data = hilbert_burch_data(cayley6_points)
    minors = maximal_minors(linear_syzygies(list(data.cubic_basis)))
    assert cubic_span(minors) == cubic_span(list(data.cubic_basis))


def test_points_to_tensor_layout(cayley6_points):
    data = hilbert_burch_data(cayley6_points)
    syzygies = linear_syzygies(list(data.cubic_basis))
    t = data.syzygy_tensor
    assert t.dims == (3, 3, 4)
    # coefficient of z_i in syzygy j against cubic k
    variables = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    for i, j, k in [(0, 0, 0), (1, 2, 3), (2, 1, 2)]:
        assert t[i, j, k] == syzygies[j][k].get(variables[i], RATIONALS.zero)


def test_base_points_roundtrip_cayley6(cayley6_points, cayley6_tensor):
    found = base_points(cayley6_tensor, "U")
    assert found.complete
    assert found.mode == "minors"
    assert set(found.points) == set(cayley6_points)


@pytest.mark.parametrize("seed", range(5))
def test_base_points_roundtrip_random(seed):
    points = random_points(seed)
    t = points_to_tensor(points)
    found = base_points(t, "U")
    assert set(found.points) == set(points)
    minors = maximal_minors(symbolic_slice(t, 0))
    assert cubic_span(minors) == cubic_span(cubics_through_points(points))


def test_minors_vanish_at_base_points(cayley6_points, cayley6_tensor):
    for p in cayley6_points:
        assert set(evaluate_minors(cayley6_tensor, "U", p)) == {0}
        assert slice_rank_at(cayley6_tensor, 0, p.coords) == 2


@pytest.mark.slow
def test_scan_agrees_with_minors(cayley6_points, cayley6_tensor):
    field = FieldTag(101)
    scanned = base_points(cayley6_tensor, "U", "scan", 101)
    expected = {PlanePoint.from_coordinates([RATIONALS.residue(c, 101) for c in p.coords], field) for p in cayley6_points}
    assert scanned.complete
    assert set(scanned.points) == expected


def test_base_points_bad_arguments(cayley6_tensor):
    with pytest.raises(ValueError):
        base_points(cayley6_tensor, "V")
    with pytest.raises(ValueError):
        base_points(cayley6_tensor, "U", "guess")
    with pytest.raises(ScanFieldError):
        base_points(cayley6_tensor, "U", "scan")
    with pytest.raises(ScanFieldError):
        base_points(cayley6_tensor.reduce_mod(101), "U", "scan", 103)


@pytest.mark.parametrize("degree, expected", [(0, 3), (1, 5), (2, 6), (3, 6), (7, 6)])
def test_dual_resolution_hilbert_function(degree, expected):
    assert dual_resolution_hilbert_function(degree) == expected


def test_min_slice_rank_scan(doubleline_tensors):
    result = min_slice_rank_scan(doubleline_tensors["doubleline-1"], 2, 11)
    assert result.min_rank == 1
    assert slice_rank_at(doubleline_tensors["doubleline-1"], 2, result.witness) == 1


@pytest.mark.slow
def test_min_slice_rank_scan_smooth(cayley6_tensor):
    result = min_slice_rank_scan(cayley6_tensor, 2, 101)
    assert result.min_rank == 2
    assert result.points_scanned == 1040604


def test_points_on_line():
    points = points_on_line([(1, 0, 0), (0, 1, 0)], 3)
    assert points == [[0, 1, 0], [1, 0, 0], [1, 1, 0]]
