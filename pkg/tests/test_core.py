from itertools import product

import pytest

from oracles import connectivity_holds, friends_of
from sysactor import (
    ActorSpec,
    ClockMap,
    Environment,
    RelationItem,
    UnknownActorError,
    can_receive,
    can_send,
    check_connectivity,
    check_domain_embedding,
    check_modeling_axiom,
    extend,
    friends,
    rank_compare,
    validate_environment,
)
from sysactor.fixtures import ca_broken_doc, two_actor_env


def codes(env):
    return {v.code for v in validate_environment(env)}


def test_fixture_environment_is_well_formed():
    assert validate_environment(two_actor_env()).ok


def test_react_outside_components_reported():
    a = ActorSpec("A", act={"x"}, trn={"t"}, react={("t", "y")})
    report = validate_environment(Environment.of([a]))
    assert [v.code for v in report] == ["actors.A.react"]
    assert "(t, y)" in report.violations[0].message


def test_unknown_acquaintance_and_self_component():
    a = ActorSpec("A", facq=("Ghost",), components={"A"})
    assert {"actors.A.facq", "actors.A.components"} <= codes(Environment.of([a]))


def test_component_cycle():
    a, b = ActorSpec("A", components={"B"}), ActorSpec("B", components={"A"})
    assert "components" in codes(Environment.of([a, b]))


def test_send_on_behalf_of_another_actor():
    a = ActorSpec("A", act={"SMes(B,A)"})
    assert "actors.A.act" in codes(Environment.of([a, ActorSpec("B")]))


@pytest.mark.parametrize("kind,endpoints,ok", [
    ("property", ("A",), True),
    ("property", ("B",), False),
    ("inner", ("P",), True),
    ("inner", ("A",), False),
    ("internal", ("A", "P"), True),
    ("outer", ("A", "B"), True),
    ("outer", ("A", "P"), False),
    ("intermediate", ("P", "B"), True),
    ("external", ("A", "B"), True),
])
def test_relation_kinds(kind, endpoints, ok):
    a = ActorSpec("A", rel={RelationItem("r", kind, endpoints)}, components={"P"})
    env = Environment.of([a, ActorSpec("B")])
    assert ("actors.A.rel.r" not in codes(env)) == ok


def test_inconsistent_sync_cycle_reported():
    from sysactor import Clock
    env = Environment.of([ActorSpec("A")], clocks=(Clock("a"), Clock("b")),
                         sync=(ClockMap("a", "b", 1, 0), ClockMap("b", "a", 1, 1)))
    assert "sync.cycle" in codes(env)


def test_unknown_actor_lookup():
    with pytest.raises(UnknownActorError):
        two_actor_env().actor("Nobody")


# -- acquaintances -------------------------------------------------------------------

def _all_acquaintance_envs(n):
    """Every facq/bacq assignment over n actors (self-acquaintance included)."""
    names = [f"N{i}" for i in range(n)]
    pairs = [(a, c) for a in names for c in names]
    for fbits in product((0, 1), repeat=len(pairs)):
        facq = {a: [c for (x, c), b in zip(pairs, fbits) if x == a and b] for a in names}
        for bbits in product((0, 1), repeat=len(pairs)):
            bacq = {a: [c for (x, c), b in zip(pairs, bbits) if x == a and b] for a in names}
            yield names, facq, bacq


@pytest.mark.parametrize("n", [1, 2])
def test_connectivity_and_friendship_exhaustive(n):
    for names, facq, bacq in _all_acquaintance_envs(n):
        env = Environment.of([ActorSpec(a, facq=facq[a], bacq=bacq[a]) for a in names])
        assert (check_connectivity(env) == []) == connectivity_holds(facq, bacq)
        for a in names:
            assert set(friends(env, a)) == friends_of(facq, bacq, a)
            for c in names:
                assert can_send(env, a, c) == (c in facq[a])
                assert can_receive(env, c, a) == (c in bacq[a])


def test_connectivity_three_actors_sampled():
    import random
    rng = random.Random(3)
    names = ["X", "Y", "Z"]
    for _ in range(2000):
        facq = {a: [c for c in names if rng.random() < 0.4] for a in names}
        bacq = {a: [c for c in names if rng.random() < 0.4] for a in names}
        env = Environment.of([ActorSpec(a, facq=facq[a], bacq=bacq[a]) for a in names])
        assert (check_connectivity(env) == []) == connectivity_holds(facq, bacq)


def test_ca_broken_witness():
    (v,) = check_connectivity(ca_broken_doc().env)
    assert v.subjects == ("A", "B")


# -- rank and modeling --------------------------------------------------------------

def test_rank():
    leaf1, leaf2 = ActorSpec("L1"), ActorSpec("L2")
    mid = ActorSpec("M", components={"L1"})
    other = ActorSpec("O", components={"L2"})
    top = ActorSpec("T", components={"M"})
    env = Environment.of([leaf1, leaf2, mid, other, top], name="W")
    assert rank_compare(env, "L1", "M") == "lower"
    assert rank_compare(env, "T", "L1") == "higher"
    assert rank_compare(env, "M", "O") == "equal"
    assert rank_compare(env, "M", "W") == "lower"
    assert rank_compare(env, "T", "O") == "incomparable"


def test_modeling_axiom_and_embedding():
    env = two_actor_env()
    assert check_modeling_axiom(env, {"a", "b"}, {"a": "A", "b": "B"}).holds
    miss = check_modeling_axiom(env, {"a", "c"}, {"a": "A"})
    assert not miss.holds and miss.witnesses[0].subjects == ("c",)
    assert check_domain_embedding(env, env, {"A": "A", "B": "B"}).holds
    assert not check_domain_embedding(env, env, {"A": "A", "B": "A"}).holds


def test_extend_restricts_to_own_components():
    env = two_actor_env()
    ext = extend(env, "B")
    assert ext.vreact >= ext.base.react
    with pytest.raises(ValueError):
        type(ext)(ext.base, "E", frozenset(), frozenset())
