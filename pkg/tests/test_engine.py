import random
from dataclasses import replace

import pytest

from sysactor import (
    ActorSpec,
    DivergenceError,
    Environment,
    EventRecord,
    RunError,
    SimConfig,
    TimeSet,
    Timing,
    check_trace,
    enumerate_all,
    replay,
    run,
    run_branch,
    run_sampled,
)
from sysactor.fixtures import three_actor_env, two_actor_env
from sysactor.generate import generate
from sysactor.spec_io import format_traces, parse_traces


def rows(trace):
    return [(e.id, e.actor, e.action, e.clock, str(e.time), e.kind, ",".join(sorted(e.depends_on)) or "-")
            for e in trace.events]


def test_two_actor_run():
    t = run_sampled(two_actor_env(), SimConfig(seed=7))
    assert [(e.actor, e.action, e.kind) for e in t.events] == [
        ("A", "SMes(A,B)", "proaction:reserved"),
        ("B", "RMes(A,B)", "receive"),
        ("B", "ack", "reaction:reserved"),
    ]
    assert t.messages == (("e1", "e2"),)
    assert check_trace(t, two_actor_env()) == []


def test_same_seed_same_bytes():
    env = three_actor_env()
    texts = {format_traces(run_sampled(env, SimConfig(seed=s))) for s in (11, 11, 11)}
    assert len(texts) == 1


def test_seeds_reach_different_branches():
    env = three_actor_env()
    seen = {tuple(rows(run_sampled(env, SimConfig(seed=s)))) for s in range(40)}
    assert len(seen) == 3


def test_enumerate_all_branch_set():
    branches = enumerate_all(three_actor_env(), SimConfig())
    assert [b.branch_id for b in branches] == ["0.0", "0.1", "1"]
    assert rows(branches[0])[-1] == ("e5", "C", "log", "cC", "2/1:3/1", "reaction:reserved", "e4")
    assert rows(branches[1])[-1][2] == "~log"
    assert rows(branches[2])[-1] == ("e3", "B", "rest", "cB", "1/1:2/1", "reaction:reserved", "e2")


def test_run_branch_and_replay():
    env, cfg = three_actor_env(), SimConfig(mode="enumerate_all")
    for b in enumerate_all(env, cfg):
        assert run_branch(env, cfg, b.branch_id).events == b.events
        assert replay(env, cfg, b)
    t = run_sampled(env, SimConfig(seed=5))
    assert replay(env, SimConfig(seed=5), t)


def test_replay_detects_divergence():
    env, cfg = two_actor_env(), SimConfig(seed=1)
    t = run_sampled(env, cfg)
    bad = replace(t, events=t.events[:-1] + (replace(t.events[-1], action="nap"),))
    with pytest.raises(DivergenceError) as exc:
        replay(env, cfg, bad)
    assert exc.value.index == len(t.events) - 1


def test_trace_file_round_trip_replays():
    env, cfg = three_actor_env(), SimConfig(seed=3)
    t = run_sampled(env, cfg)
    (back,) = parse_traces(format_traces(t))
    assert back == t
    assert replay(env, cfg, back)


def _relay():
    return Environment.of([ActorSpec("A", act={"go", "move"}, trn={"go"}, react={("go", "move")})])


def _go():
    return EventRecord("g", "A", "go", TimeSet.interval("E", 0, 1), kind="initial")


def test_timing_classes_shift_reactions():
    # a regular trigger [0,1] separates the three timing classes
    for kind, delay, start in (("sharp", 0, 0), ("reserved", 0, 1), ("delayed", 2, 3)):
        cfg = SimConfig(reaction_timing={("A", "go"): Timing(kind, delay)})
        t = run_sampled(_relay(), cfg, [_go()])
        assert t.events[1].time.start == start
        assert check_trace(t, _relay()) == []


def test_illegal_message_dropped_or_raised():
    env = two_actor_env(receiver_listens=False)
    t = run_sampled(env, SimConfig())
    assert t.dropped and len(t.events) == 1
    with pytest.raises(RunError):
        run_sampled(env, SimConfig(violation_policy="error"))


def test_max_steps_truncates():
    looper = ActorSpec("L", act={"SMes(L,L)"}, trn={"RMes(L,L)"}, react={("RMes(L,L)", "SMes(L,L)")},
                       rel={"on"}, proact={("on", "SMes(L,L)")}, facq=("L",), bacq=("L",))
    t = run_sampled(Environment.of([looper]), SimConfig(max_steps=10))
    assert t.truncated and len(t.events) == 10


def test_initial_events_kept():
    env = two_actor_env()
    init = EventRecord("go", "B", "ack", TimeSet.interval("cB", 5, 6), kind="initial")
    t = run(env, SimConfig(), [init])
    assert "go" in {e.id for e in t.events}
    with pytest.raises(ValueError):
        run(env, SimConfig(), [init, init])


def test_engine_traces_check_clean_on_generated_environments():
    for seed in range(60):
        case = generate(random.Random(seed))
        trace = run_sampled(case.env, case.sim, case.events)
        assert check_trace(trace, case.env) == [], seed


def test_config_validation():
    with pytest.raises(ValueError):
        SimConfig(mode="exhaustive")
    with pytest.raises(ValueError):
        SimConfig(seed=-1)
    with pytest.raises(ValueError):
        Timing("delayed", 0)
