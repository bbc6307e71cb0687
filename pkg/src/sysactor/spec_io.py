"""Reading and writing ``.sam`` environment documents and ``.trace`` files.

A ``.sam`` document is JSON with ``"version": 1``.  Rationals are written as
``"p/q"`` strings.  A trace file holds one tab-separated record per event::

    event-id  actor  action  clock  time-set  kind  depends-on

preceded by a ``#sam-trace`` header line per branch.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .actions import (
    Action,
    CompositionOp,
    ModalityAssertion,
    atomic,
)
from .core import (
    ActorSpec,
    Environment,
    ExtendedActorSpec,
    LawConfig,
    RelationItem,
    validate_environment,
)
from .engine import SimConfig, Timing, Trace
from .errors import SpecError
from .temporal import Clock, ClockMap, EventRecord, TimeSet, format_rational, rational

FORMAT_VERSION = 1


@dataclass
class SpecDocument:
    env: Environment
    sim: SimConfig = field(default_factory=SimConfig)
    events: list[EventRecord] = field(default_factory=list)
    domain_objects: frozenset[str] = frozenset()
    model_map: dict[str, str] = field(default_factory=dict)


class _Reader:
    """Field access with path-tracking diagnostics."""

    def __init__(self, data, path="$"):
        self.data = data
        self.path = path

    def fail(self, msg, sub=None):
        raise SpecError(f"{self.path}{sub or ''}", msg)

    def get(self, key, kind=None, default=...):
        if not isinstance(self.data, dict):
            self.fail("expected an object")
        if key not in self.data:
            if default is ...:
                self.fail(f"missing field {key!r}")
            return default
        value = self.data[key]
        if kind is not None and not isinstance(value, kind):
            self.fail(f"expected {getattr(kind, '__name__', kind)}", f".{key}")
        return value

    def sub(self, key, default=...):
        return _Reader(self.get(key, default=default), f"{self.path}.{key}")

    def items(self):
        if not isinstance(self.data, list):
            self.fail("expected a list")
        return [_Reader(x, f"{self.path}[{i}]") for i, x in enumerate(self.data)]

    def strings(self):
        if not isinstance(self.data, list) or not all(isinstance(x, str) for x in self.data):
            self.fail("expected a list of strings")
        return list(self.data)

    def tuples(self, n):
        out = []
        for r in self.items():
            if not isinstance(r.data, list) or len(r.data) != n or not all(isinstance(x, str) for x in r.data):
                r.fail(f"expected a list of {n} strings")
            out.append(tuple(r.data))
        return out

    def rational(self, key, default=...):
        value = self.get(key, default=default)
        try:
            return rational(value)
        except (TypeError, ValueError, ZeroDivisionError):
            self.fail(f"not an exact rational: {value!r}", f".{key}")


def _timeset(r: _Reader, clock: str) -> TimeSet:
    pieces = []
    for p in r.items():
        if not isinstance(p.data, list) or len(p.data) != 2:
            p.fail("expected [lo, hi]")
        try:
            pieces.append((rational(p.data[0]), rational(p.data[1])))
        except (TypeError, ValueError, ZeroDivisionError):
            p.fail(f"not an exact rational pair: {p.data!r}")
    try:
        return TimeSet(clock, tuple(pieces))
    except ValueError as exc:
        r.fail(str(exc))


def _actor(r: _Reader) -> ActorSpec:
    rels = []
    for item in r.sub("rel", default=[]).items():
        if isinstance(item.data, str):
            rels.append(RelationItem(item.data))
            continue
        try:
            rels.append(RelationItem(item.get("id", str), item.get("kind", str, "property"),
                                     tuple(item.sub("endpoints", default=[]).strings())))
        except ValueError as exc:
            item.fail(str(exc))
    name = r.get("name", str)
    if not name:
        r.fail("actor name is empty", ".name")
    return ActorSpec(
        name=name,
        rel=frozenset(rels),
        act=frozenset(r.sub("act", default=[]).strings()),
        trn=frozenset(r.sub("trn", default=[]).strings()),
        react=frozenset(r.sub("react", default=[]).tuples(2)),
        proact=frozenset(r.sub("proact", default=[]).tuples(2)),
        combact=frozenset(r.sub("combact", default=[]).tuples(3)),
        facq=tuple(r.sub("facq", default=[]).strings()),
        bacq=tuple(r.sub("bacq", default=[]).strings()),
        components=frozenset(r.sub("components", default=[]).strings()),
        tentative=frozenset(r.sub("tentative", default=[]).strings()),
        implicit=frozenset(r.sub("implicit", default=[]).strings()),
    )


def _sim(r: _Reader) -> SimConfig:
    def timing(t: _Reader) -> Timing:
        try:
            return Timing(t.get("kind", str), t.rational("delay", "0"))
        except ValueError as exc:
            t.fail(str(exc))

    timings = {}
    for t in r.sub("reaction_timing", default=[]).items():
        timings[t.get("actor", str), t.get("trigger", str)] = timing(t)
    delays = {}
    for d in r.sub("delivery_delay", default=[]).items():
        delays[d.get("from", str), d.get("to", str)] = d.rational("delay")
    durations = {}
    dr = r.sub("durations", default={})
    if not isinstance(dr.data, dict):
        dr.fail("expected an object")
    for k in dr.data:
        durations[k] = dr.rational(k)
    kw = {}
    if "default_timing" in r.data:
        kw["default_timing"] = timing(r.sub("default_timing"))
    try:
        return SimConfig(
            seed=r.get("seed", int, 0),
            mode=r.get("mode", str, "sampled").replace("-", "_"),
            max_steps=r.get("max_steps", int, 1000),
            delivery_delay=delays,
            violation_policy=r.get("violation_policy", str, "drop"),
            reaction_timing=timings,
            durations=durations,
            default_duration=r.rational("default_duration", "1"),
            **kw,
        )
    except ValueError as exc:
        r.fail(str(exc))


def load_document(data: dict, validate: bool = True) -> SpecDocument:
    """Build objects from an already-decoded document."""
    r = _Reader(data)
    if r.get("version", int) != FORMAT_VERSION:
        r.fail(f"unsupported version {data.get('version')!r}", ".version")

    operators = {}
    for o in r.sub("operators", default=[]).items():
        try:
            op = CompositionOp(o.get("name", str), o.get("arity", int, 2), o.get("ea_compliant", bool, True),
                               tuple((tuple(x.sub("parts").strings()), x.get("result", str))
                                     for x in o.sub("rules", default=[]).items()))
        except ValueError as exc:
            o.fail(str(exc))
        operators[op.name] = op

    catalog: dict[str, Action] = {}
    for a in r.sub("actions", default=[]).items():
        try:
            act = atomic(a.get("id", str), a.get("direction", str, "internal"),
                         a.get("duration", str, "regular"), a.get("organization", str, "direct"))
        except ValueError as exc:
            a.fail(str(exc))
        catalog[act.id] = act

    actors = {}
    for ar in r.sub("actors", default=[]).items():
        actor = _actor(ar)
        if actor.name in actors:
            ar.fail(f"duplicate actor name {actor.name!r}", ".name")
        actors[actor.name] = actor

    clocks = tuple(Clock(c.get("id", str), c.get("owner", str, None)) for c in r.sub("clocks", default=[]).items())
    sync = []
    for m in r.sub("sync", default=[]).items():
        try:
            sync.append(ClockMap(m.get("from", str), m.get("to", str), m.rational("rate", "1"), m.rational("offset", "0")))
        except ValueError as exc:
            m.fail(str(exc))

    u = r.sub("universes", default={})
    derive = lambda key, fn: (frozenset(u.sub(key).strings()) if isinstance(u.data, dict) and key in u.data  # noqa: E731
                              else frozenset().union(*(fn(a) for a in actors.values())))
    law = r.sub("laws", default={})
    try:
        laws = LawConfig(**{k: law.get(k, bool, dflt) for k, dflt in
                            (("SM", True), ("RM", True), ("CA", True), ("EA", True), ("MA", False))},
                         policy=law.get("policy", str, "reject"))
    except ValueError as exc:
        law.fail(str(exc))

    modalities = []
    for m in r.sub("modalities", default=[]).tuples(2):
        try:
            modalities.append(ModalityAssertion(*m))
        except ValueError as exc:
            r.fail(str(exc), ".modalities")

    env = Environment(
        name=r.get("name", str, "E"),
        actors=actors,
        relp=derive("relp", lambda a: a.rel_ids),
        actp=derive("actp", lambda a: a.act),
        trn=derive("trn", lambda a: a.trn),
        ereact=frozenset(r.sub("ereact", default=[]).tuples(2)),
        eproact=frozenset(r.sub("eproact", default=[]).tuples(2)),
        clocks=clocks,
        sync=tuple(sync),
        catalog=catalog,
        operators=operators,
        modalities=frozenset(modalities),
        laws=laws,
    )
    extended = {}
    for x in r.sub("extended", default=[]).items():
        name = x.get("actor", str)
        if name not in actors:
            x.fail(f"unknown actor {name!r}", ".actor")
        try:
            extended[name] = ExtendedActorSpec(actors[name], env.name, frozenset(x.sub("vreact", default=[]).tuples(2)),
                                               frozenset(x.sub("vproact", default=[]).tuples(2)))
        except ValueError as exc:
            x.fail(str(exc))
    if extended:
        env = Environment(**{**env.__dict__, "extended": extended})

    events = []
    for e in r.sub("events", default=[]).items():
        actor = e.get("actor", str)
        clock = e.get("clock", str, None) or env.clock_of(actor)
        events.append(EventRecord(e.get("id", str), actor, e.get("action", str), _timeset(e.sub("time"), clock),
                                  frozenset(e.sub("depends_on", default=[]).strings()), e.get("kind", str, "action")))
    dom = r.sub("domain", default={})
    doc = SpecDocument(env, _sim(r.sub("sim", default={})), events,
                       frozenset(dom.sub("objects", default=[]).strings()),
                       dict(dom.get("model", dict, {})))
    if validate:
        report = validate_environment(env)
        if not report.ok:
            v = report.violations[0]
            raise SpecError(v.code, f"{v.message} ({len(report)} violation(s))")
        ids = set()
        for i, e in enumerate(events):
            if e.id in ids:
                raise SpecError(f"$.events[{i}].id", f"duplicate event id {e.id!r}")
            ids.add(e.id)
            if e.actor not in actors:
                raise SpecError(f"$.events[{i}].actor", f"unknown actor {e.actor!r}")
    return doc


def parse_spec(text: str, validate: bool = True) -> SpecDocument:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"line {exc.lineno}, column {exc.colno}", exc.msg) from None
    if not isinstance(data, dict):
        raise SpecError("$", "document must be an object")
    return load_document(data, validate)


def read_spec(path: str | Path, validate: bool = True) -> SpecDocument:
    return parse_spec(Path(path).read_text(encoding="utf-8"), validate)


# -- serialization ------------------------------------------------------------------

def _r(x) -> str:
    return format_rational(rational(x))


def _timing(t: Timing) -> dict:
    out: dict[str, Any] = {"kind": t.kind}
    if t.kind == "delayed":
        out["delay"] = _r(t.delay)
    return out


def dump_document(doc: SpecDocument) -> dict:
    env, sim = doc.env, doc.sim
    out: dict[str, Any] = {"version": FORMAT_VERSION, "name": env.name}
    out["clocks"] = [{"id": c.id, **({"owner": c.owner} if c.owner is not None else {})} for c in env.clocks]
    out["sync"] = [{"from": m.source, "to": m.target, "rate": _r(m.rate), "offset": _r(m.offset)} for m in env.sync]
    out["operators"] = [{"name": o.name, "arity": o.arity, "ea_compliant": o.ea_compliant,
                         "rules": [{"parts": list(k), "result": v} for k, v in o.rules]}
                        for o in sorted(env.operators.values(), key=lambda o: o.name)]
    out["actions"] = [{"id": a.id, "direction": a.direction, "duration": a.duration_kind,
                       "organization": a.organization}
                      for _, a in sorted(env.catalog.items())]
    actors = []
    for name in env.actors:
        a = env.actors[name]
        actors.append({
            "name": a.name,
            "rel": [{"id": x.id, "kind": x.kind, "endpoints": list(x.endpoints)}
                    for x in sorted(a.rel, key=lambda x: x.id)],
            "act": sorted(a.act), "trn": sorted(a.trn),
            "react": [list(p) for p in sorted(a.react)],
            "proact": [list(p) for p in sorted(a.proact)],
            "combact": [list(p) for p in sorted(a.combact)],
            "facq": list(a.facq), "bacq": list(a.bacq),
            "components": sorted(a.components),
            "tentative": sorted(a.tentative), "implicit": sorted(a.implicit),
        })
    out["actors"] = actors
    out["universes"] = {"relp": sorted(env.relp), "actp": sorted(env.actp), "trn": sorted(env.trn)}
    out["ereact"] = [list(p) for p in sorted(env.ereact)]
    out["eproact"] = [list(p) for p in sorted(env.eproact)]
    out["laws"] = {**{k: getattr(env.laws, k) for k in ("SM", "RM", "CA", "EA", "MA")}, "policy": env.laws.policy}
    out["modalities"] = [[m.action, m.modality] for m in sorted(env.modalities)]
    out["extended"] = [{"actor": n, "vreact": [list(p) for p in sorted(x.vreact)],
                        "vproact": [list(p) for p in sorted(x.vproact)]} for n, x in sorted(env.extended.items())]
    out["sim"] = {
        "seed": sim.seed, "mode": sim.mode, "max_steps": sim.max_steps,
        "violation_policy": sim.violation_policy,
        "delivery_delay": [{"from": a, "to": b, "delay": _r(d)} for (a, b), d in sorted(sim.delivery_delay.items())],
        "reaction_timing": [{"actor": a, "trigger": t, **_timing(x)}
                            for (a, t), x in sorted(sim.reaction_timing.items())],
        "default_timing": _timing(sim.default_timing),
        "durations": {k: _r(v) for k, v in sorted(sim.durations.items())},
        "default_duration": _r(sim.default_duration),
    }
    out["events"] = [{"id": e.id, "actor": e.actor, "action": e.action, "clock": e.clock,
                      "time": [[_r(lo), _r(hi)] for lo, hi in e.time.pieces],
                      "depends_on": sorted(e.depends_on), "kind": e.kind} for e in doc.events]
    if doc.domain_objects or doc.model_map:
        out["domain"] = {"objects": sorted(doc.domain_objects), "model": dict(sorted(doc.model_map.items()))}
    return out


def serialize_spec(doc: SpecDocument) -> str:
    return json.dumps(dump_document(doc), indent=2, ensure_ascii=False) + "\n"


# -- traces -------------------------------------------------------------------------

_FORBIDDEN = set("\t\n\r")


def _field(x: str) -> str:
    if _FORBIDDEN & set(x):
        raise ValueError(f"field {x!r} contains a tab or newline")
    return x


def format_trace(trace: Trace) -> str:
    lines = [f"#sam-trace\tv{FORMAT_VERSION}\tbranch={trace.branch_id or '-'}\ttruncated={int(trace.truncated)}"]
    for e in trace.events:
        lines.append("\t".join([
            _field(e.id), _field(e.actor), _field(e.action), _field(e.clock), str(e.time), _field(e.kind),
            ",".join(sorted(e.depends_on)) or "-",
        ]))
    return "\n".join(lines) + "\n"


def format_traces(traces) -> str:
    if isinstance(traces, Trace):
        traces = [traces]
    return "".join(format_trace(t) for t in traces)


def parse_traces(text: str) -> list[Trace]:
    traces: list[Trace] = []
    header = None
    events: list[EventRecord] = []

    def flush():
        if header is not None:
            traces.append(Trace(tuple(events), header.get("branch", ""), header.get("truncated") == "1"))

    for n, line in enumerate(text.split("\n"), 1):
        if not line:
            continue
        if line.startswith("#sam-trace"):
            flush()
            parts = line.split("\t")
            if len(parts) < 2 or parts[1] != f"v{FORMAT_VERSION}":
                raise SpecError(f"line {n}", "unsupported trace header")
            header = dict(p.split("=", 1) for p in parts[2:] if "=" in p)
            if header.get("branch") == "-":
                header["branch"] = ""
            events = []
            continue
        if header is None:
            raise SpecError(f"line {n}", "record before #sam-trace header")
        cols = line.split("\t")
        if len(cols) != 7:
            raise SpecError(f"line {n}", f"expected 7 tab-separated fields, got {len(cols)}")
        eid, actor, action, clock, ts, kind, deps = cols
        try:
            time = TimeSet.parse(clock, ts)
        except (ValueError, ZeroDivisionError) as exc:
            raise SpecError(f"line {n}", f"bad time set {ts!r}: {exc}") from None
        events.append(EventRecord(eid, actor, action, time,
                                  frozenset() if deps == "-" else frozenset(deps.split(",")), kind))
    flush()
    return traces
