"""Discrete-event execution of an environment over unsynchronized local clocks.

Events are ordered by mapped time inside each synchronization component;
components are interleaved round-robin from a seeded starting point.  Only
causal order and per-component order carry meaning in the resulting trace.
"""

from __future__ import annotations

import heapq
import logging
import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .actions import receive
from .core import Environment, can_receive, can_send, validate_environment
from .errors import DivergenceError, IncomparableError, RunError, ValidationError, Violation
from .temporal import (
    EventRecord,
    TimeSet,
    clock_components,
    clock_transform,
    comparable,
    map_to_clock,
    rational,
    reaction_timing_check,
    sequential,
)

log = logging.getLogger(__name__)

MODES = ("sampled", "enumerate_all")


@dataclass(frozen=True)
class Timing:
    """Timing class of a reaction or proaction: sharp, reserved or delayed(d > 0)."""

    kind: str = "reserved"
    delay: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "delay", rational(self.delay))
        if self.kind not in ("sharp", "reserved", "delayed"):
            raise ValueError(f"unknown timing class {self.kind!r}")
        if self.kind == "delayed" and self.delay <= 0:
            raise ValueError("a delayed reaction needs a positive delay")
        if self.kind != "delayed" and self.delay != 0:
            raise ValueError(f"{self.kind} reactions take no delay")

    def start_after(self, trigger: TimeSet) -> Fraction:
        if self.kind == "sharp":
            return trigger.start
        return trigger.end + self.delay


@dataclass(frozen=True)
class SimConfig:
    seed: int = 0
    mode: str = "sampled"
    max_steps: int = 1000
    delivery_delay: Mapping[tuple[str, str], Fraction] = field(default_factory=dict)
    violation_policy: str = "drop"  # drop | error
    reaction_timing: Mapping[tuple[str, str], Timing] = field(default_factory=dict)
    default_timing: Timing = Timing("reserved")
    durations: Mapping[str, Fraction] = field(default_factory=dict)
    default_duration: Fraction = Fraction(1)
    max_branches: int = 4096

    def __post_init__(self):
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.max_steps < 1:
            raise ValueError("max_steps must be positive")
        if self.violation_policy not in ("drop", "error"):
            raise ValueError(f"unknown violation policy {self.violation_policy!r}")
        for k, d in self.delivery_delay.items():
            if rational(d) < 0:
                raise ValueError(f"negative delivery delay for {k}")
        for k, d in self.durations.items():
            if rational(d) <= 0:
                raise ValueError(f"regular action {k} needs a positive duration")

    def timing(self, actor: str, trigger: str) -> Timing:
        return self.reaction_timing.get((actor, trigger), self.default_timing)

    def delay(self, sender: str, receiver: str) -> Fraction:
        return rational(self.delivery_delay.get((sender, receiver), 0))


@dataclass(frozen=True)
class Trace:
    events: tuple[EventRecord, ...] = ()
    branch_id: str = ""
    truncated: bool = False
    dropped: tuple[tuple[str, str], ...] = ()  # (send event id, intended receiver)

    @property
    def messages(self) -> tuple[tuple[str, str], ...]:
        return tuple((e.trigger, e.id) for e in self.events if e.kind == "receive")

    def event(self, eid: str) -> EventRecord:
        for e in self.events:
            if e.id == eid:
                return e
        raise KeyError(eid)


@dataclass(order=True)
class _Pending:
    start: Fraction
    seq: int
    actor: str = field(compare=False)
    action: str = field(compare=False)
    time: TimeSet = field(compare=False)
    depends_on: frozenset = field(compare=False)
    kind: str = field(compare=False)
    preset_id: str | None = field(compare=False, default=None)


class _Run:
    def __init__(self, env: Environment, config: SimConfig, initial: Sequence[EventRecord],
                 choose: Callable[[int], int], rng: random.Random):
        self.env = env
        self.config = config
        self.choose = choose
        self.sync = env.sync
        clocks = {env.clock_of(a) for a in env.actors} | {e.clock for e in initial}
        self.component = clock_components(clocks, env.sync)
        self.roots = sorted(set(self.component.values()))
        self.queues: dict[str, list[_Pending]] = {r: [] for r in self.roots}
        self.cursor: dict[str, Fraction] = {}
        self.events: list[EventRecord] = []
        self.ids: set[str] = {e.id for e in initial}
        self.dropped: list[tuple[str, str]] = []
        self.seq = 0
        self.counter = 0
        self.rr = rng.randrange(len(self.roots)) if len(self.roots) > 1 else 0
        for e in initial:
            self._push(e.actor, e.action, e.time, e.depends_on, "initial", e.id)
        self._fire_proactions()

    def _root_time(self, ts: TimeSet) -> Fraction:
        root = self.component[ts.clock]
        return map_to_clock(ts, root, self.sync).start

    def _push(self, actor, action, time, depends_on, kind, preset_id=None):
        self.seq += 1
        p = _Pending(self._root_time(time), self.seq, actor, action, time, frozenset(depends_on), kind, preset_id)
        heapq.heappush(self.queues[self.component[time.clock]], p)

    def _timeset(self, actor: str, action: str, start: Fraction) -> TimeSet:
        clock = self.env.clock_of(actor)
        if self.env.action(action).duration_kind == "singular":
            return TimeSet.moment(clock, start)
        dur = rational(self.config.durations.get(action, self.config.default_duration))
        return TimeSet.interval(clock, start, start + dur)

    def _pick(self, alternatives: list[str]) -> str:
        if len(alternatives) == 1:
            return alternatives[0]
        return alternatives[self.choose(len(alternatives))]

    def _fire_proactions(self):
        for name in sorted(self.env.actors):
            actor = self.env.actors[name]
            for r in sorted(actor.rel_ids):
                if not actor.actualized(r):
                    continue
                alts = actor.proact_of(r)
                if not alts:
                    continue
                action = self._pick(alts)
                timing = self.config.timing(name, r)
                # the relation becomes overt at the local origin
                start = timing.start_after(TimeSet.moment(self.env.clock_of(name), 0))
                self._push(name, action, self._timeset(name, action, start), (), f"proaction:{timing.kind}")

    def _fresh_id(self) -> str:
        while True:
            self.counter += 1
            eid = f"e{self.counter}"
            if eid not in self.ids:
                self.ids.add(eid)
                return eid

    def _next(self) -> _Pending | None:
        n = len(self.roots)
        for k in range(n):
            root = self.roots[(self.rr + k) % n]
            if self.queues[root]:
                self.rr = (self.rr + k + 1) % n
                return heapq.heappop(self.queues[root])
        return None

    def execute(self) -> Trace:
        truncated = False
        while True:
            p = self._next()
            if p is None:
                break
            if len(self.events) >= self.config.max_steps:
                truncated = True
                break
            self._commit(p)
        return Trace(tuple(self.events), truncated=truncated, dropped=tuple(self.dropped))

    def _commit(self, p: _Pending):
        eid = p.preset_id or self._fresh_id()
        ev = EventRecord(eid, p.actor, p.action, p.time, p.depends_on, p.kind)
        self.events.append(ev)
        self.cursor[self.component[p.time.clock]] = p.start
        action = self.env.action(p.action)
        if action.message == "send" and action.peers[0] == p.actor:
            self._deliver(ev, action.peers[1])
        actor = self.env.actors.get(p.actor)
        if actor is not None and p.action in actor.trn:
            self._react(ev, actor)

    def _deliver(self, send_ev: EventRecord, receiver: str):
        sender = send_ev.actor
        legal = (receiver in self.env.actors and can_send(self.env, sender, receiver)
                 and can_receive(self.env, sender, receiver))
        if not legal:
            witness = Violation("SM/RM", f"{sender} cannot deliver to {receiver}", (send_ev.id, sender, receiver))
            if self.config.violation_policy == "error":
                raise RunError(f"illegal message edge {sender} -> {receiver}", witness)
            log.debug("dropping messenger %s -> %s", sender, receiver)
            self.dropped.append((send_ev.id, receiver))
            return
        clock = self.env.clock_of(receiver)
        delay = self.config.delay(sender, receiver)
        try:
            base = map_to_clock(send_ev.time, clock, self.sync).end
        except IncomparableError:
            # incomparable clocks: the receiver's own notion of now
            root = self.component[clock]
            now = self.cursor.get(root, Fraction(0))
            r, s = clock_transform(root, clock, self.sync)
            base = r * now + s
        ref = receive(sender, receiver).id
        self._push(receiver, ref, TimeSet.moment(clock, base + delay), {send_ev.id}, "receive")

    def _react(self, ev: EventRecord, actor):
        alts = set(actor.react_of(ev.action))
        alts |= {a for t, r, a in actor.combact if t == ev.action and actor.actualized(r)}
        if not alts:
            return
        action = self._pick(sorted(alts))
        timing = self.config.timing(actor.name, ev.action)
        start = timing.start_after(ev.time)
        self._push(actor.name, action, self._timeset(actor.name, action, start), {ev.id},
                   f"reaction:{timing.kind}")


class _Script:
    """Chooser that replays a fixed prefix and then takes alternative 0,
    recording the arity of every choice point."""

    def __init__(self, prefix: Sequence[int]):
        self.prefix = list(prefix)
        self.made: list[int] = []
        self.arities: list[int] = []

    def __call__(self, n: int) -> int:
        k = self.prefix[len(self.made)] if len(self.made) < len(self.prefix) else 0
        if k >= n:
            raise RunError(f"branch choice {k} out of range for {n} alternatives")
        self.made.append(k)
        self.arities.append(n)
        return k


def _branch_id(choices: Sequence[int]) -> str:
    return ".".join(map(str, choices)) if choices else "root"


def _parse_branch(branch_id: str) -> list[int]:
    return [] if branch_id in ("", "root") else [int(x) for x in branch_id.split(".")]


def _check_initial(env: Environment, initial: Sequence[EventRecord]):
    ids = [e.id for e in initial]
    if len(ids) != len(set(ids)):
        raise ValueError("duplicate initial event ids")
    for e in initial:
        env.actor(e.actor)
        if e.time.is_empty:
            raise ValueError(f"initial event {e.id} has an empty time set")


def _prepare(env, initial):
    report = validate_environment(env)
    if not report.ok:
        raise ValidationError(report)
    initial = list(initial)
    _check_initial(env, initial)
    return initial


def _run_one(env, config, initial, choose) -> Trace:
    return _Run(env, config, initial, choose, random.Random(config.seed)).execute()


def run_sampled(env: Environment, config: SimConfig, initial: Iterable[EventRecord] = ()) -> Trace:
    initial = _prepare(env, initial)
    rng = random.Random(config.seed)
    # one generator drives both the interleaving offset and the choices
    return _Run(env, config, initial, lambda n: rng.randrange(n), rng).execute()


def run_branch(env: Environment, config: SimConfig, branch_id: str,
               initial: Iterable[EventRecord] = ()) -> Trace:
    initial = _prepare(env, initial)
    script = _Script(_parse_branch(branch_id))
    trace = _run_one(env, config, initial, script)
    return replace(trace, branch_id=_branch_id(script.made))


def enumerate_all(env: Environment, config: SimConfig, initial: Iterable[EventRecord] = ()) -> list[Trace]:
    """Every trace reachable by resolving each multivalued choice every possible way."""
    initial = _prepare(env, initial)
    out = []
    stack: list[list[int]] = [[]]
    while stack:
        prefix = stack.pop()
        script = _Script(prefix)
        trace = _run_one(env, config, initial, script)
        out.append(replace(trace, branch_id=_branch_id(script.made)))
        if len(out) > config.max_branches:
            raise RunError(f"more than {config.max_branches} branches")
        for depth in range(len(prefix), len(script.made)):
            for k in range(1, script.arities[depth]):
                stack.append(script.made[:depth] + [k])
    out.sort(key=lambda t: _parse_branch(t.branch_id))
    return out


def run(env: Environment, config: SimConfig, initial: Iterable[EventRecord] = ()) -> Trace | list[Trace]:
    """A single trace in sampled mode, the list of all branches in enumerate_all mode."""
    if config.mode == "enumerate_all":
        return enumerate_all(env, config, initial)
    return run_sampled(env, config, initial)


def first_divergence(a: Sequence[EventRecord], b: Sequence[EventRecord]) -> int | None:
    for i, (x, y) in enumerate(zip(a, b)):
        if x != y:
            return i
    if len(a) != len(b):
        return min(len(a), len(b))
    return None


def replay(env: Environment, config: SimConfig, trace: Trace) -> bool:
    """Re-run and require an identical trace; raises DivergenceError otherwise."""
    initial = [e for e in trace.events if e.kind == "initial"]
    if config.mode == "enumerate_all" or trace.branch_id:
        again = run_branch(env, config, trace.branch_id, initial)
    else:
        again = run_sampled(env, config, initial)
    i = first_divergence(trace.events, again.events)
    if i is not None:
        exp = trace.events[i] if i < len(trace.events) else None
        got = again.events[i] if i < len(again.events) else None
        raise DivergenceError(i, exp, got)
    return True


def check_trace(trace: Trace, env: Environment, sync=None) -> list[Violation]:
    """Independent verification of a trace against the environment's laws."""
    sync = list(env.sync if sync is None else sync)
    out: list[Violation] = []
    by_id: dict[str, EventRecord] = {}
    order: dict[str, int] = {}
    for i, e in enumerate(trace.events):
        if e.id in by_id:
            out.append(Violation("trace.ids", f"duplicate event id {e.id}", (e.id,)))
        by_id[e.id] = e
        order[e.id] = i
    for e in trace.events:
        if e.actor not in env.actors:
            out.append(Violation("trace.actor", f"{e.id}: unknown actor {e.actor}", (e.id,)))
            continue
        for d in sorted(e.depends_on):
            if d not in by_id or order[d] >= order[e.id]:
                out.append(Violation("trace.causality", f"{e.id} depends on {d}, which is not an earlier event",
                                     (e.id, d)))
        try:
            action = env.action(e.action)
        except ValueError as exc:
            out.append(Violation("trace.action", f"{e.id}: {exc}", (e.id,)))
            continue
        if e.time.is_empty:
            out.append(Violation("trace.time", f"{e.id} has an empty time set", (e.id,)))
            continue
        if action.duration_kind == "singular" and not e.time.is_momentary:
            out.append(Violation("trace.duration", f"singular action {e.action} in {e.id} is not momentary", (e.id,)))
        if action.duration_kind == "regular" and e.time.span == 0:
            out.append(Violation("trace.duration", f"regular action {e.action} in {e.id} is momentary", (e.id,)))
        actor = env.actors[e.actor]
        if e.kind in ("receive",) or e.kind.startswith("reaction"):
            if e.trigger is None:
                out.append(Violation("trace.trigger", f"{e.id} must depend on exactly one trigger", (e.id,)))
                continue
        if e.kind == "receive":
            out.extend(_check_receive(e, by_id, env, sync))
        elif e.kind.startswith("reaction"):
            trig = by_id.get(e.trigger)
            if trig is None:
                continue
            allowed = set(actor.react_of(trig.action))
            allowed |= {a for t, r, a in actor.combact if t == trig.action}
            if trig.actor != e.actor or e.action not in allowed:
                out.append(Violation("trace.reaction", f"{e.id}: {e.action} is not a reaction of {e.actor} to {trig.action}",
                                     (trig.id, e.id)))
        elif e.kind.startswith("proaction"):
            if not any(a == e.action for _, a in actor.proact):
                out.append(Violation("trace.proaction", f"{e.id}: {e.action} is not a proaction of {e.actor}", (e.id,)))
        elif e.kind not in ("initial", "action"):
            out.append(Violation("trace.kind", f"{e.id}: unknown kind {e.kind!r}", (e.id,)))
    checkable = [e for e in by_id.values()
                 if not e.kind.startswith("reaction") or e.trigger in by_id]
    for v in reaction_timing_check(checkable, sync):
        out.append(Violation("trace.timing", v.message, v.subjects))
    return out


def _check_receive(e: EventRecord, by_id, env: Environment, sync) -> list[Violation]:
    out = []
    send_ev = by_id.get(e.trigger)
    if send_ev is None:
        return out
    send_action = env.action(send_ev.action)
    if send_action.message != "send" or send_action.peers[0] != send_ev.actor:
        return [Violation("trace.message", f"{e.id} is triggered by {send_ev.id}, which is not a send",
                          (send_ev.id, e.id))]
    sender, receiver = send_action.peers
    if e.actor != receiver or e.action != receive(sender, receiver).id:
        out.append(Violation("trace.message", f"{e.id} does not match send {send_ev.id}", (send_ev.id, e.id)))
    if receiver not in env.actors or not can_send(env, sender, receiver):
        out.append(Violation("SM", f"{sender} may not send to {receiver}", (send_ev.id, e.id)))
    elif not can_receive(env, sender, receiver):
        out.append(Violation("RM", f"{receiver} may not receive from {sender}", (send_ev.id, e.id)))
    if comparable(send_ev, e, sync) and not sequential(send_ev, e, sync):
        out.append(Violation("trace.causality", f"receive {e.id} starts before send {send_ev.id} ends",
                             (send_ev.id, e.id)))
    return out
