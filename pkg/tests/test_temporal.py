from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import candidate_points, common_point, points_common
from sysactor import (
    ClockMap,
    EventRecord,
    IncomparableError,
    TimeSet,
    comparable,
    concurrent,
    independent,
    map_to_clock,
    parallel,
    reaction_timing_check,
    sequential,
    strictly_parallel,
    strictly_sequential,
)
from sysactor.fixtures import strict_chain_events, triple_events
from sysactor.temporal import (
    check_sync_consistency,
    clock_components,
    clock_transform,
    temporal_law_violations,
)

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=8)
positive = st.fractions(min_value=Fraction(1, 8), max_value=8, max_denominator=8)


def ev(eid, pieces, clock="c", deps=(), kind="action"):
    return EventRecord(eid, "X", "a", TimeSet(clock, tuple(pieces)), frozenset(deps), kind)


@st.composite
def intervals(draw):
    lo = draw(rationals)
    return lo, lo + draw(st.fractions(min_value=0, max_value=10, max_denominator=8))


@st.composite
def unions(draw):
    return draw(st.lists(intervals(), min_size=1, max_size=4))


# -- time sets -----------------------------------------------------------------------

def test_timeset_merges_touching_pieces():
    ts = TimeSet("c", ((3, 4), (0, 1), (1, 2)))
    assert ts.pieces == ((0, 2), (3, 4))


def test_timeset_rejects_inverted_interval():
    with pytest.raises(ValueError):
        TimeSet.interval("c", 2, 1)


@given(unions())
def test_timeset_text_round_trip(pieces):
    ts = TimeSet("c", tuple(pieces))
    assert TimeSet.parse("c", str(ts)) == ts


@given(unions(), unions())
def test_intersection_matches_pointwise_membership(p, q):
    a, b = TimeSet("c", tuple(p)), TimeSet("c", tuple(q))
    meet = a.intersection(b)
    for t in candidate_points([p, q]):
        inside = lambda s: any(lo <= t <= hi for lo, hi in s)  # noqa: E731
        assert inside(meet.pieces) == (inside(p) and inside(q))


# -- clocks -------------------------------------------------------------------------

@given(positive, rationals, rationals)
def test_clock_map_inverse_round_trip(rate, offset, t):
    m = ClockMap("a", "b", rate, offset)
    assert m.inverse().apply(m.apply(t)) == t


@given(positive, rationals, positive, rationals, rationals)
def test_clock_transform_composes_along_path(r1, s1, r2, s2, t):
    sync = [ClockMap("a", "b", r1, s1), ClockMap("b", "c", r2, s2)]
    r, s = clock_transform("a", "c", sync)
    assert r * t + s == sync[1].apply(sync[0].apply(t))
    r, s = clock_transform("c", "a", sync)
    assert r * sync[1].apply(sync[0].apply(t)) + s == t


def test_clock_map_rate_must_be_positive():
    with pytest.raises(ValueError):
        ClockMap("a", "b", 0, 1)


def test_incomparable_clocks_raise():
    with pytest.raises(IncomparableError):
        clock_transform("a", "z", [ClockMap("a", "b")])


def test_components_and_inconsistent_cycle():
    sync = [ClockMap("a", "b", 2, 0), ClockMap("b", "c", 1, 1), ClockMap("a", "c", 2, 1)]
    comp = clock_components(["a", "b", "c", "d"], sync)
    assert comp["a"] == comp["b"] == comp["c"] != comp["d"]
    assert check_sync_consistency(sync) == []
    bad = sync[:2] + [ClockMap("a", "c", 2, 2)]
    assert len(check_sync_consistency(bad)) == 1


@given(unions(), positive, rationals)
def test_map_to_clock_round_trip(pieces, rate, offset):
    sync = [ClockMap("a", "b", rate, offset)]
    ts = TimeSet("a", tuple(pieces))
    assert map_to_clock(map_to_clock(ts, "b", sync), "a", sync) == ts


# -- relations ----------------------------------------------------------------------

@given(st.lists(intervals(), min_size=2, max_size=4))
def test_parallel_single_intervals_matches_oracle(ivs):
    events = [ev(f"e{i}", [iv]) for i, iv in enumerate(ivs)]
    assert parallel(events) == common_point(ivs)


@given(st.lists(unions(), min_size=2, max_size=3))
def test_parallel_multi_intervals_matches_oracle(sets):
    events = [ev(f"e{i}", s) for i, s in enumerate(sets)]
    assert parallel(events) == points_common(sets, candidate_points(sets))


@given(intervals(), intervals(), positive, rationals)
def test_relations_invariant_under_clock_change(i1, i2, rate, offset):
    sync = [ClockMap("a", "b", rate, offset)]
    e1 = ev("x", [i1], "a")
    e2 = ev("y", [i2], "a")
    moved = EventRecord("y", "X", "a", map_to_clock(e2.time, "b", sync), frozenset(), "action")
    for rel in (strictly_parallel, sequential, strictly_sequential):
        assert rel(e1, e2) == rel(e1, moved, sync)
    assert parallel([e1, e2]) == parallel([e1, moved], sync)


def test_sequential_and_strict():
    a, b, c = ev("a", [(0, 2)]), ev("b", [(2, 3)]), ev("c", [(4, 5)])
    assert sequential(a, b) and strictly_sequential(a, b)
    assert sequential(a, c) and not strictly_sequential(a, c)
    assert not sequential(b, a)


def test_strictly_parallel_needs_equal_sets():
    assert strictly_parallel(ev("a", [(0, 2)]), ev("b", [(0, 2)]))
    assert not strictly_parallel(ev("a", [(0, 2)]), ev("b", [(0, 3)]))


def test_independence_follows_dependency_components():
    a = ev("a", [(0, 1)])
    b = ev("b", [(1, 2)], deps={"a"})
    c = ev("c", [(2, 3)], deps={"b"})
    d = ev("d", [(0, 1)])
    events = [a, b, c, d]
    assert not independent(a, c, events)
    assert independent(a, d, events)
    assert concurrent(a, d, [], events)


def test_incomparable_events_are_concurrent():
    a, b = ev("a", [(0, 1)], "p"), ev("b", [(0, 1)], "q", deps={"a"})
    assert not comparable(a, b)
    assert concurrent(a, b, [], [a, b])
    with pytest.raises(IncomparableError):
        parallel([a, b])


@pytest.mark.parametrize("timing,start,ok", [
    ("sharp", 0, True), ("sharp", 1, False),
    ("reserved", 2, True), ("reserved", 3, False),
    ("delayed", 3, True), ("delayed", 2, False),
])
def test_reaction_timing(timing, start, ok):
    trig = ev("t", [(0, 2)])
    reac = ev("r", [(start, start + 1)], deps={"t"}, kind=f"reaction:{timing}")
    assert (reaction_timing_check([trig, reac]) == []) == ok


# -- law evaluation on the stored counterexamples -------------------------------------

def test_overlapping_triple_values():
    e = triple_events()
    assert parallel([e["E1"], e["E2"]]) and parallel([e["E2"], e["E3"]])
    assert not parallel([e["E1"], e["E3"]])


def test_two_piece_triple_breaks_helly():
    e = triple_events()
    trio = [e["E1"], e["E2"], e["F3"]]
    assert all(parallel(p) for p in ([trio[0], trio[1]], [trio[1], trio[2]], [trio[0], trio[2]]))
    assert not parallel(trio)


def test_strict_chain_does_not_compose():
    c = strict_chain_events()
    assert strictly_sequential(c["P3"], c["P2"]) and strictly_sequential(c["P2"], c["P1"])
    assert not strictly_sequential(c["P3"], c["P1"])
    assert all(not v for v in temporal_law_violations(list(c.values())).values())


@settings(max_examples=60)
@given(st.lists(intervals(), min_size=3, max_size=5))
def test_interval_laws_hold_on_random_events(ivs):
    events = [ev(f"e{i}", [iv]) for i, iv in enumerate(ivs)]
    found = temporal_law_violations(events)
    assert all(not v for v in found.values()), found
