import random

import pytest

from sysactor import LAW_IDS, LawCheckResult, UnknownLawError, run_law_suite
from sysactor.fixtures import (
    automata_env,
    ca_broken_doc,
    cam_universe_env,
    classify_env,
    ea_off_env,
    three_actor_env,
    triple_doc,
    two_actor_env,
)
from sysactor.generate import MUTATIONS, generate, mutate
from sysactor.laws import failures, law_note


def status(results):
    return {r.law: r.status for r in results}


def test_registry_covers_every_named_law():
    expected = (["WF", "SM", "RM", "CA", "EA", "MA"] + [f"Prop3.{i}" for i in range(1, 35)]
                + [f"Lemma3.{i}" for i in range(1, 16)] + [f"Cor3.{i}" for i in range(1, 4)])
    assert list(LAW_IDS) == expected


def test_constructional_laws_are_labeled():
    assert law_note("Prop3.9") == "holds by construction"


def test_unknown_law_rejected():
    with pytest.raises(UnknownLawError):
        run_law_suite(two_actor_env(), {"CA", "Prop9.9"})


def test_failing_result_needs_witness():
    with pytest.raises(ValueError):
        LawCheckResult("CA", "fail")


def test_ca_selection():
    assert status(run_law_suite(two_actor_env(), {"CA"})) == {"CA": "pass"}
    (r,) = run_law_suite(ca_broken_doc().env, "CA")
    assert r.status == "fail" and r.witnesses[0].subjects == ("A", "B")


def test_ea_witness_is_the_composed_action():
    (r,) = run_law_suite(ea_off_env(), "EA")
    assert r.status == "fail"
    assert any("stand" in w.message and "proper" in w.message for w in r.witnesses)


def test_conditional_propositions_not_applicable():
    s = status(run_law_suite(ca_broken_doc().env))
    assert s["CA"] == "fail" and s["Prop3.3"] == "not_applicable"
    assert s["Prop3.33"] == "not_applicable"
    assert status(run_law_suite(two_actor_env(), "Prop3.11"))["Prop3.11"] == "not_applicable"


@pytest.mark.parametrize("env", [two_actor_env(), three_actor_env(), automata_env(), classify_env()],
                         ids=["two-actor", "three-actor", "automata", "classify"])
def test_fixtures_satisfy_registry(env):
    assert failures(run_law_suite(env)) == []


def test_temporal_fixture_satisfies_registry():
    doc = triple_doc()
    res = run_law_suite(doc.env, "all", doc.events)
    assert failures(res) == []
    assert status(res)["Prop3.11"] == "pass"


def test_modeling_universe():
    env, objects, model = cam_universe_env()
    assert failures(run_law_suite(env, "all", domain_objects=objects, model_map=model)) == []
    res = run_law_suite(env, "MA", domain_objects=objects | {"stranger"}, model_map=model)
    assert res[0].status == "fail"


def test_generated_environments_pass():
    for seed in range(40):
        case = generate(random.Random(seed))
        bad = failures(run_law_suite(case.env, "all", case.events, case.sim))
        assert bad == [], (seed, bad)


@pytest.mark.parametrize("kind", MUTATIONS)
def test_each_mutation_detected(kind):
    rng = random.Random(kind)
    for seed in range(3):
        broken, law = mutate(generate(random.Random(500 + seed)), rng, kind)
        res = {r.law: r for r in run_law_suite(broken.env, "all", broken.events, broken.sim)}
        assert res[law].status == "fail" and res[law].witnesses
