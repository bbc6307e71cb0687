import random

from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_force_iso, is_isomorphism, shuffled_copy
from sysactor import ActorSpec, Environment, RelationItem, classify, dyn_equivalent, dyn_homological, homological, identical
from sysactor.equivalence import check_preservation
from sysactor.fixtures import automata_env, classify_env, one_state_automaton, parity_automaton


def as_maps(iso):
    return {"rel": dict(iso.rel_map), "act": dict(iso.act_map), "trn": dict(iso.trn_map)}


@st.composite
def small_actors(draw, name="A"):
    acts = draw(st.sets(st.sampled_from(["x", "y", "z", "~x", "~w"]), max_size=4))
    trns = draw(st.sets(st.sampled_from(["t", "u", "v"]), max_size=3))
    rels = draw(st.sets(st.sampled_from(["r", "s", "q"]), max_size=3))
    acts, trns, rels = sorted(acts), sorted(trns), sorted(rels)
    react = draw(st.sets(st.tuples(st.sampled_from(trns), st.sampled_from(acts)), max_size=4)) if acts and trns else set()
    proact = draw(st.sets(st.tuples(st.sampled_from(rels), st.sampled_from(acts)), max_size=3)) if acts and rels else set()
    return ActorSpec(name, rel={RelationItem(r, "property", ()) for r in rels}, act=acts, trn=trns,
                     react=react, proact=proact)


@settings(max_examples=150, deadline=None)
@given(small_actors("A"), small_actors("B"))
def test_homology_matches_brute_force(a, b):
    for scope, fn in (("structural", homological), ("dynamic", dyn_homological)):
        found, oracle = fn(a, b), brute_force_iso(a, b, scope)
        assert (found is None) == (oracle is None)
        if found is not None:
            assert is_isomorphism(a, b, as_maps(found), scope)


@settings(max_examples=60, deadline=None)
@given(small_actors("A"), st.randoms(use_true_random=False))
def test_renamed_copy_is_homological(a, rng):
    b = shuffled_copy(a, rng)
    iso = homological(a, b)
    assert iso is not None and is_isomorphism(a, b, as_maps(iso))


def test_identity_and_dynamic_equivalence():
    a = ActorSpec("A", act={"x", "~y"}, trn={"t"}, react={("t", "x"), ("t", "~y")})
    b = ActorSpec("B", act={"x"}, trn={"t"}, react={("t", "x")})
    assert identical(a, a) and not identical(a, b)
    assert dyn_equivalent(a, b)
    assert homological(a, b) is None and dyn_homological(a, b) is not None


def test_parity_automata_are_homological():
    env = automata_env()
    iso = homological(env.actor("P01"), env.actor("Pab"))
    assert iso is not None
    assert iso.trn_map == {"0": "a", "1": "b"}
    assert homological(env.actor("P01"), env.actor("Mono")) is None


def test_classification_of_reference_actors():
    env = classify_env()
    rec, gen = classify("Receptor", env), classify("Generator", env)
    assert "inactive" in rec.communication and "receptive" in rec.communication
    assert "non_receptive" in gen.communication and "active" in gen.communication
    mono = classify("Mono", env)
    assert mono.behavioral == "primitive"
    assert {"closed", "inactive", "non_receptive", "undemanding"} <= mono.communication
    auto = classify("P01", automata_env())
    assert auto.behavioral == "automatic"


def test_structural_classes():
    env = Environment.of([ActorSpec("W", components={"P", "part"}), ActorSpec("P"),
                          ActorSpec("V", components={"part"})])
    assert classify("W", env).structural == {"composite", "compound"}
    assert classify("V", env).structural == {"composite", "primitive"}
    assert classify("P", env).structural == {"prime", "primitive"}
    assert not classify("P", env).primary


def test_requesting_sender_is_demanding():
    env = Environment.of([ActorSpec("A", act={"Req(A,B)"}, facq=("B",)), ActorSpec("B", bacq=("A",))])
    assert "undemanding" not in classify("A", env).communication


def test_preservation_on_automata():
    a, b = parity_automaton("P"), parity_automaton("Q", ("a", "b"), ("s", "t"))
    assert check_preservation([(a, b, "homological"), (a, one_state_automaton(), "homological")]) == []


def test_generated_reports_satisfy_lattice():
    from sysactor.generate import generate
    for seed in range(50):
        env = generate(random.Random(seed)).env
        for name in env.actors:
            assert classify(name, env).lattice_violations(name) == []
