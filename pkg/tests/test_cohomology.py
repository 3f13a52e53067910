import pytest
from hypothesis import given
from hypothesis import strategies as st

from TriTensorKit.cohomology import (
    COMPUTED,
    DERIVED,
    MINIMAL_ROWS,
    JumpingPointError,
    KernelBundleModel,
    SectionCountError,
    binomial,
    bott_dimension,
    chern_factors,
    chern_polynomial,
    degeneracy_locus_check,
    euler_characteristic,
    expected_moduli_dimension,
    line_bundle_cohomology,
    minimal_cohomology,
    moduli_count,
    riemann_roch,
)
from TriTensorKit.exact import evaluate
from TriTensorKit.generators import degenerate_section_tensor
from TriTensorKit.hilbert_burch import points_to_tensor
from TriTensorKit.tensor import det_cubic, reversing_construction


@pytest.fixture(scope="module")
def cayley6_model(cayley6_tensor):
    return KernelBundleModel(cayley6_tensor)


def test_chern_polynomial():
    assert chern_polynomial() == [1, 3, 6, 4]
    first, second = chern_factors()
    assert first.as_integers() == [1, 9, 36, 84]
    assert second.as_integers() == [1, -6, 24, -80]


@pytest.mark.parametrize("a, k, expected", [(5, 2, 10), (0, 3, 0), (-1, 3, -1), (-2, 3, -4), (2, 3, 0), (7, 0, 1)])
def test_binomial_polynomial(a, k, expected):
    assert binomial(a, k) == expected


@pytest.mark.parametrize("n, chi", [(0, 6), (-1, -3), (-2, -3), (-3, 0), (-4, 0), (-5, -9), (-6, -33), (1, 30)])
def test_euler_characteristic(n, chi):
    assert euler_characteristic(n) == chi


@given(st.integers(-30, 30))
def test_riemann_roch_agrees_with_euler_characteristic(n):
    assert riemann_roch(n) == euler_characteristic(n)


def test_moduli_dimension():
    assert moduli_count() == 19
    assert expected_moduli_dimension() == 19


@pytest.mark.parametrize(
    "N, p, k, q, expected",
    [(3, 1, 0, 1, 1), (3, 1, 2, 0, 6), (3, 1, -3, 3, 4), (3, 0, -4, 3, 1), (3, 0, 2, 0, 10), (3, 1, 1, 0, 0), (3, 2, 0, 1, 0)],
)
def test_bott_dimension(N, p, k, q, expected):
    assert bott_dimension(N, p, k, q) == expected


def test_line_bundle_cohomology():
    assert line_bundle_cohomology(3, 1, 0) == 4
    assert line_bundle_cohomology(3, -5, 3) == 4
    assert line_bundle_cohomology(3, -2, 3) == 0


def test_phi_shape(cayley6_model):
    assert cayley6_model.phi(-1).shape == (15, 12)
    assert cayley6_model.phi(0).shape == (42, 48)
    with pytest.raises(ValueError):
        cayley6_model.phi(-2)


def test_cohomology_table_cayley6(cayley6_model):
    table = cayley6_model.cohomology_table()
    assert minimal_cohomology(table)
    assert table.euler_consistent()
    assert table.row(-5).h[3] == 9
    assert table.row(-6).h[3] == 33
    assert table.row(0).provenance[0] == COMPUTED
    assert table.row(-3).provenance == (DERIVED,) * 4


def test_cohomology_table_general_points(general_point_tensors):
    for t in general_point_tensors:
        table = KernelBundleModel(t).cohomology_table(range(-4, 1))
        assert {r.n: r.h for r in table.rows} == MINIMAL_ROWS


@pytest.mark.slow
def test_cohomology_table_points_in_general_position(general_position_points):
    for points in general_position_points:
        table = KernelBundleModel(points_to_tensor(points)).cohomology_table(range(-4, 5))
        assert minimal_cohomology(table)
        for n in range(-1, 5):
            h = table.row(n).h
            assert h[0] - h[1] == euler_characteristic(n)
            assert h[2] == h[3] == 0


def test_cohomology_frame(cayley6_model):
    frame = cayley6_model.cohomology_table(range(-2, 1)).to_frame()
    assert list(frame.index) == [-2, -1, 0]
    assert frame.loc[0, "h0"] == 6
    assert frame.loc[-1, "h1"] == 3
    assert frame.loc[-2, "h1_source"] == DERIVED


def test_multiplication_check(cayley6_model, general_point_tensors):
    assert cayley6_model.multiplication_check().ok
    for t in general_point_tensors:
        result = KernelBundleModel(t).multiplication_check()
        assert result.ok
        assert result.recovered == t


def test_multiplication_check_zero_tensor(zero_tensor):
    result = KernelBundleModel(zero_tensor).multiplication_check()
    assert not result.ok
    assert "rank 0" in result.diagnostic


def test_section_basis(cayley6_model):
    sections = cayley6_model.section_basis()
    assert len(sections) == 6
    assert all(len(s) == 48 for s in sections)
    assert cayley6_model.section_residues(101).shape == (6, 12, 4)


def test_degenerate_fixture_has_extra_sections():
    model = KernelBundleModel(degenerate_section_tensor(0))
    assert model.h0(0) >= 7
    assert model.h1(0) > 0
    assert not minimal_cohomology(model.cohomology_table(range(-1, 1)))
    with pytest.raises(SectionCountError) as info:
        model.section_basis()
    assert info.value.h0 >= 7


def test_degeneracy_matches_reversed_cubic(cayley6_model, cayley6_tensor):
    cubic = det_cubic(reversing_construction(cayley6_tensor))
    field = cayley6_tensor.field
    for y in [(1, -2, 3, 5), (2, 1, 0, -1), (1, 1, 1, 1), (0, 3, -1, 2)]:
        values = [field.element(v) for v in y]
        try:
            rank = cayley6_model.degeneracy_test(y)
        except JumpingPointError:
            continue
        assert (rank < 6) == (evaluate(cubic, values) == 0)


def test_degeneracy_test_zero_point(cayley6_model):
    with pytest.raises(JumpingPointError):
        cayley6_model.degeneracy_test([0, 0, 0, 0])


@pytest.mark.slow
def test_degeneracy_locus_cayley6(cayley6_model):
    result = degeneracy_locus_check(cayley6_model, 101)
    assert result.ok
    assert result.degenerate_points == result.cubic_points
    assert result.mismatches == ()
