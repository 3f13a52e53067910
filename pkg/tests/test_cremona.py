import pytest
from hypothesis import given
from hypothesis import strategies as st

from TriTensorKit.cremona import (
    HYPERPLANE,
    NN2_DESK_BOUND,
    TERMINALS,
    DivisorClass,
    NN2PreconditionError,
    ReductionStallError,
    cremona,
    dcheck,
    enumerate_nn2,
    exhaustive_check,
    is_nn2,
    pairing,
    reduce,
)

classes = st.builds(DivisorClass, st.integers(-20, 20), st.tuples(*[st.integers(-10, 10)] * 6))
triples = st.permutations(range(1, 7)).map(lambda p: tuple(p[:3]))


def test_parse_and_format():
    c = DivisorClass.parse("10:4,4,4,4,4,4")
    assert c == DivisorClass(10, (4,) * 6)
    assert str(c) == "(10;4,4,4,4,4,4)"
    assert c.to_json() == {"n": 10, "a": [4] * 6}
    with pytest.raises(ValueError):
        DivisorClass(3, (1, 1))


def test_worked_example():
    trace = reduce(DivisorClass(10, (4,) * 6))
    assert [str(s.before) for s in trace.steps] == ["(10;4,4,4,4,4,4)", "(8;4,4,4,2,2,2)", "(4;2,2,2,0,0,0)"]
    assert str(trace.steps[0].after) == "(8;2,2,2,4,4,4)"
    assert all(s.triple == (1, 2, 3) for s in trace.steps)
    assert trace.terminal == TERMINALS[0]
    assert trace.negative_entries == ()


def test_reduce_to_second_terminal():
    trace = reduce(DivisorClass(4, (1, 3, 0, 1, 1, 0)))
    assert len(trace.steps) == 1
    assert trace.steps[0].before == DivisorClass(4, (3, 1, 1, 1, 0, 0))
    assert trace.terminal == TERMINALS[1]


@pytest.mark.parametrize("terminal", TERMINALS)
def test_terminals_are_fixed(terminal):
    assert is_nn2(terminal)
    trace = reduce(terminal)
    assert trace.steps == ()
    assert trace.terminal == terminal


def test_reduce_rejects_non_nn2():
    with pytest.raises(NN2PreconditionError):
        reduce(DivisorClass(5, (1,) * 6))
    with pytest.raises(ValueError):
        reduce(DivisorClass(2, (2, -2, 0, 0, 0, 0)))


@pytest.mark.parametrize("c", ["4:3,1,1,1,0,0", "5:4,1,1,1,1,1"])
def test_reduce_reports_stall_at_low_degree(mocker, c):
    mocker.patch("TriTensorKit.cremona.cremona", side_effect=lambda current, triple: current)
    with pytest.raises(ReductionStallError, match="Degree did not decrease"):
        reduce(DivisorClass.parse(c))


def test_hyperplane_is_fixed():
    assert cremona(HYPERPLANE, (2, 4, 6)) == HYPERPLANE
    assert pairing(HYPERPLANE, HYPERPLANE) == 3


@given(classes, classes, triples)
def test_cremona_is_an_isometry(c1, c2, triple):
    assert pairing(cremona(c1, triple), cremona(c2, triple)) == pairing(c1, c2)


@given(classes, triples)
def test_cremona_is_an_involution(c, triple):
    assert cremona(cremona(c, triple), triple) == c


@pytest.mark.parametrize("triple", [(1, 1, 2), (0, 1, 2), (1, 2, 7)])
def test_cremona_bad_triple(triple):
    with pytest.raises(ValueError):
        cremona(HYPERPLANE, triple)


def test_enumerate_small_degrees():
    found = enumerate_nn2(4)
    assert [str(c) for c in found] == [
        "(2;0,0,0,0,0,0)",
        "(3;2,1,0,0,0,0)",
        "(4;3,1,1,1,0,0)",
        "(4;2,2,2,0,0,0)",
    ]
    assert all(is_nn2(c) for c in found)


def test_enumerate_bound():
    with pytest.raises(ValueError):
        enumerate_nn2(NN2_DESK_BOUND + 1)


def test_dcheck():
    d, dh, dd = dcheck(DivisorClass(10, (4,) * 6))
    assert d == DivisorClass(7, (3,) * 6)
    assert (dh, dd) == (3, -5)
    with pytest.raises(NN2PreconditionError):
        dcheck(HYPERPLANE)


def test_exhaustive_check_small():
    summary = exhaustive_check(20)
    assert summary["ok"]
    assert set(summary["terminals"]) <= {str(t) for t in TERMINALS}
    assert summary["all_equal"] == ["(2;0,0,0,0,0,0)", "(10;4,4,4,4,4,4)"]
    assert summary["stalls"] == []
    assert summary["dcheck_failures"] == []


def test_exhaustive_check_explicit_solutions():
    summary = exhaustive_check(4, [DivisorClass(10, (4,) * 6)])
    assert summary["solutions"] == 1
    assert summary["terminals"] == {"(2;0,0,0,0,0,0)": 1}


@pytest.mark.slow
def test_exhaustive_check_desk_bound():
    summary = exhaustive_check()
    assert summary["ok"]
    assert summary["n_max"] == NN2_DESK_BOUND
    assert sum(summary["terminals"].values()) == summary["solutions"]
