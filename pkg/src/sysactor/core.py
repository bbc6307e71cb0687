"""Actors, environments, acquaintances and rank."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping

from .actions import (
    Action,
    CompositionOp,
    ModalityAssertion,
    is_void_ref,
    parse_ref,
)
from .errors import UnknownActorError, Verdict, Violation
from .temporal import Clock, ClockMap, check_sync_consistency

RELATION_KINDS = ("inner", "internal", "outer", "intermediate", "external", "property")
LAW_NAMES = ("SM", "RM", "CA", "EA", "MA")


@dataclass(frozen=True)
class RelationItem:
    id: str
    kind: str = "property"
    endpoints: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "endpoints", tuple(self.endpoints))
        if self.kind not in RELATION_KINDS:
            raise ValueError(f"relation {self.id!r}: unknown kind {self.kind!r}")


def _pairs(items, n=2) -> frozenset:
    out = frozenset(tuple(p) for p in items)
    for p in out:
        if len(p) != n:
            raise ValueError(f"expected {n}-tuples, got {p!r}")
    return out


@dataclass(frozen=True)
class ActorSpec:
    """The five-component actor (rel, act, trn; react, proact).

    ``combact`` holds joint (transaction, relation, action) entries for
    actions that depend on both an input and a relation.  ``tentative`` and
    ``implicit`` list element ids that are not actualized / not acknowledged;
    everything else is actualized and acknowledged.
    """

    name: str
    rel: frozenset[RelationItem] = frozenset()
    act: frozenset[str] = frozenset()
    trn: frozenset[str] = frozenset()
    react: frozenset[tuple[str, str]] = frozenset()
    proact: frozenset[tuple[str, str]] = frozenset()
    combact: frozenset[tuple[str, str, str]] = frozenset()
    facq: tuple[str, ...] = ()
    bacq: tuple[str, ...] = ()
    components: frozenset[str] = frozenset()
    tentative: frozenset[str] = frozenset()
    implicit: frozenset[str] = frozenset()

    def __post_init__(self):
        rel = frozenset(r if isinstance(r, RelationItem) else RelationItem(r) for r in self.rel)
        object.__setattr__(self, "rel", rel)
        for name in ("act", "trn", "components", "tentative", "implicit"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        object.__setattr__(self, "react", _pairs(self.react))
        object.__setattr__(self, "proact", _pairs(self.proact))
        object.__setattr__(self, "combact", _pairs(self.combact, 3))
        object.__setattr__(self, "facq", tuple(self.facq))
        object.__setattr__(self, "bacq", tuple(self.bacq))

    @property
    def rel_ids(self) -> frozenset[str]:
        return frozenset(r.id for r in self.rel)

    def relation(self, rid: str) -> RelationItem:
        for r in self.rel:
            if r.id == rid:
                return r
        raise KeyError(rid)

    def actualized(self, element: str) -> bool:
        return element not in self.tentative

    def react_of(self, t: str) -> list[str]:
        return sorted(a for x, a in self.react if x == t)

    def proact_of(self, r: str) -> list[str]:
        return sorted(a for x, a in self.proact if x == r)

    def proper_actions(self) -> frozenset[str]:
        return frozenset(a for a in self.act if not is_void_ref(a))


@dataclass(frozen=True)
class ExtendedActorSpec:
    """An actor together with its virtual reactions to every possible action of its
    environment and virtual proactions for every possible relation."""

    base: ActorSpec
    env_name: str
    vreact: frozenset[tuple[str, str]] = frozenset()
    vproact: frozenset[tuple[str, str]] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "vreact", _pairs(self.vreact))
        object.__setattr__(self, "vproact", _pairs(self.vproact))
        if restrict(self.vreact, self.base.trn) != self.base.react:
            raise ValueError(f"{self.base.name}: react is not the restriction of vreact to trn")
        if restrict(self.vproact, self.base.rel_ids) != self.base.proact:
            raise ValueError(f"{self.base.name}: proact is not the restriction of vproact to rel")


def restrict(relation: Iterable[tuple[str, str]], domain: Iterable[str]) -> frozenset:
    domain = set(domain)
    return frozenset(p for p in relation if p[0] in domain)


@dataclass(frozen=True)
class LawConfig:
    SM: bool = True
    RM: bool = True
    CA: bool = True
    EA: bool = True
    MA: bool = False
    policy: str = "reject"  # reject | warn

    def __post_init__(self):
        if self.policy not in ("reject", "warn"):
            raise ValueError(f"unknown violation policy {self.policy!r}")

    def asserted(self) -> tuple[str, ...]:
        return tuple(n for n in LAW_NAMES if getattr(self, n))


@dataclass(frozen=True)
class Environment:
    """The top-rank system: actor registry plus universes of relations and actions.

    ``catalog`` fixes attributes of atomic actions by name, ``operators``
    names the composition operators that may appear in action references.
    """

    name: str = "E"
    actors: Mapping[str, ActorSpec] = field(default_factory=dict)
    relp: frozenset[str] = frozenset()
    actp: frozenset[str] = frozenset()
    trn: frozenset[str] = frozenset()
    ereact: frozenset[tuple[str, str]] = frozenset()
    eproact: frozenset[tuple[str, str]] = frozenset()
    clocks: tuple[Clock, ...] = ()
    sync: tuple[ClockMap, ...] = ()
    catalog: Mapping[str, Action] = field(default_factory=dict)
    operators: Mapping[str, CompositionOp] = field(default_factory=dict)
    modalities: frozenset[ModalityAssertion] = frozenset()
    extended: Mapping[str, ExtendedActorSpec] = field(default_factory=dict)
    laws: LawConfig = field(default_factory=LawConfig)

    def __post_init__(self):
        if not isinstance(self.actors, Mapping):
            object.__setattr__(self, "actors", {a.name: a for a in self.actors})
        for name in ("relp", "actp", "trn", "modalities"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        object.__setattr__(self, "ereact", _pairs(self.ereact))
        object.__setattr__(self, "eproact", _pairs(self.eproact))
        object.__setattr__(self, "clocks", tuple(self.clocks))
        object.__setattr__(self, "sync", tuple(self.sync))

    @classmethod
    def of(cls, actors: Iterable[ActorSpec], name: str = "E", **kw) -> "Environment":
        """Build an environment whose universes are the unions over its actors."""
        actors = list(actors)
        kw.setdefault("relp", set().union(*(a.rel_ids for a in actors)))
        kw.setdefault("actp", set().union(*(a.act for a in actors)))
        kw.setdefault("trn", set().union(*(a.trn for a in actors)))
        return cls(name=name, actors={a.name: a for a in actors}, **kw)

    def actor(self, name: str) -> ActorSpec:
        try:
            return self.actors[name]
        except KeyError:
            raise UnknownActorError(f"unknown actor {name!r} in environment {self.name!r}") from None

    def action(self, ref: str) -> Action:
        return parse_ref(ref, self.operators, self.catalog)

    def clock_of(self, actor: str) -> str:
        """The actor's own clock, else the environment clock."""
        for c in self.clocks:
            if c.owner == actor:
                return c.id
        for c in self.clocks:
            if c.owner in (None, self.name):
                return c.id
        return self.name

    def with_actor(self, actor: ActorSpec) -> "Environment":
        return replace(self, actors={**self.actors, actor.name: actor})


# -- messaging ---------------------------------------------------------------------

def can_send(env: Environment, a: str, c: str) -> bool:
    env.actor(c)
    return c in env.actor(a).facq


def can_receive(env: Environment, c: str, a: str) -> bool:
    """Whether ``a`` can receive messengers from ``c``."""
    env.actor(c)
    return c in env.actor(a).bacq


def friends(env: Environment, a: str) -> frozenset[str]:
    actor = env.actor(a)
    return frozenset(actor.facq) & frozenset(actor.bacq)


def check_connectivity(env: Environment) -> list[Violation]:
    """Ordered pairs (A, C) where exactly one of C in facq(A), A in bacq(C) holds."""
    names = list(env.actors)
    out = []
    for a in names:
        for c in names:
            fwd = c in env.actors[a].facq
            bwd = a in env.actors[c].bacq
            if fwd != bwd:
                msg = (f"{c} in facq({a}) but {a} not in bacq({c})" if fwd
                       else f"{a} in bacq({c}) but {c} not in facq({a})")
                out.append(Violation("CA", msg, (a, c)))
    return out


# -- parts and rank -------------------------------------------------------------------

def descendants(env: Environment, name: str) -> set[str]:
    """All parts reachable through the component graph (registered or not)."""
    out: set[str] = set()
    stack = list(env.actor(name).components)
    while stack:
        x = stack.pop()
        if x in out:
            continue
        out.add(x)
        if x in env.actors:
            stack.extend(env.actors[x].components)
    return out


def _component_cycles(env: Environment) -> list[list[str]]:
    state: dict[str, int] = {}
    cycles = []

    def visit(n, path):
        state[n] = 1
        for m in sorted(env.actors[n].components):
            if m not in env.actors:
                continue
            if state.get(m) == 1:
                cycles.append(path[path.index(m):] + [m])
            elif m not in state:
                visit(m, path + [m])
        state[n] = 2

    for n in env.actors:
        if n not in state:
            visit(n, [n])
    return cycles


def rank_height(env: Environment, name: str, _seen=()) -> int | None:
    """Rank level: 0 for leaves; one above the common level of the components;
    None when components sit at mixed levels."""
    if name == env.name:
        return None
    if name not in env.actors:
        return 0  # a bare part
    if name in _seen:
        raise ValueError(f"component cycle through {name!r}")
    comps = env.actors[name].components
    if not comps:
        return 0
    levels = {rank_height(env, c, _seen + (name,)) for c in comps}
    if None in levels or len(levels) != 1:
        return None
    return levels.pop() + 1


def rank_compare(env: Environment, a: str, b: str) -> str:
    """One of lower, equal, higher, incomparable."""
    for n in (a, b):
        if n != env.name:
            env.actor(n)
    if a == b:
        return "equal"
    if b == env.name:
        return "lower"
    if a == env.name:
        return "higher"
    if a in descendants(env, b):
        return "lower"
    if b in descendants(env, a):
        return "higher"
    ha, hb = rank_height(env, a), rank_height(env, b)
    if ha is not None and ha == hb:
        return "equal"
    return "incomparable"


def is_primary(env: Environment, name: str) -> bool:
    return not any(name in other.components for n, other in env.actors.items() if n != name)


# -- modeled domains --------------------------------------------------------------------

def check_domain_embedding(env_e: Environment, env_d: Environment,
                           mapping: Mapping[str, str]) -> Verdict:
    out = []
    for name in env_d.actors:
        if name not in mapping:
            out.append(Violation("Prop3.32", f"actor {name} of {env_d.name} is not mapped", (name,)))
        elif mapping[name] not in env_e.actors:
            out.append(Violation("Prop3.32", f"{name} maps to {mapping[name]}, not an actor of {env_e.name}",
                                 (name, mapping[name])))
    seen: dict[str, str] = {}
    for name in sorted(mapping):
        target = mapping[name]
        if target in seen:
            out.append(Violation("Prop3.32", f"{seen[target]} and {name} both map to {target}",
                                 (seen[target], name, target)))
        else:
            seen[target] = name
    return Verdict(not out, out)


def check_modeling_axiom(env: Environment, domain_objects: Iterable[str],
                         model_map: Mapping[str, str]) -> Verdict:
    out = []
    for obj in sorted(domain_objects):
        target = model_map.get(obj)
        if target is None or target not in env.actors:
            out.append(Violation("MA", f"domain object {obj!r} is not modeled by an actor", (obj,)))
    return Verdict(not out, out)


# -- validation ---------------------------------------------------------------------

@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __iter__(self):
        return iter(self.violations)

    def __len__(self):
        return len(self.violations)

    def add(self, path: str, message: str, *subjects):
        self.violations.append(Violation(path, message, tuple(subjects)))


def _check_relation_kind(env: Environment, owner: str, item: RelationItem, report: ValidationReport):
    path = f"actors.{owner}.rel.{item.id}"
    parts = descendants(env, owner)
    ends = set(item.endpoints)
    outside = ends - parts - {owner}
    has_owner = owner in ends
    inside = ends & parts
    ok = {
        "property": ends <= {owner},
        "inner": bool(ends) and ends <= parts,
        "internal": has_owner and bool(inside) and not outside,
        "outer": has_owner and bool(outside) and not inside,
        "intermediate": not has_owner and bool(inside) and bool(outside),
        "external": has_owner and bool(outside),
    }[item.kind]
    if not ok:
        report.add(path, f"endpoints {list(item.endpoints)} do not fit a {item.kind} relation of {owner}",
                   owner, item.id)


def validate_environment(env: Environment) -> ValidationReport:
    """Report every broken structural invariant; an empty report means well-formed."""
    report = ValidationReport()
    if env.name in env.actors:
        report.add("name", f"environment name {env.name!r} clashes with an actor", env.name)
    for key, actor in env.actors.items():
        p = f"actors.{key}"
        if not actor.name:
            report.add(p, "actor name is empty", key)
        if key != actor.name:
            report.add(p, f"registered under {key!r} but named {actor.name!r}", key)
        rel_ids = actor.rel_ids
        if len(rel_ids) != len(actor.rel):
            report.add(f"{p}.rel", "duplicate relation ids", key)
        for t, a in sorted(actor.react):
            if t not in actor.trn or a not in actor.act:
                report.add(f"{p}.react", f"pair ({t}, {a}) leaves trn x act", key, t, a)
        for r, a in sorted(actor.proact):
            if r not in rel_ids or a not in actor.act:
                report.add(f"{p}.proact", f"pair ({r}, {a}) leaves rel x act", key, r, a)
        for t, r, a in sorted(actor.combact):
            if t not in actor.trn or r not in rel_ids or a not in actor.act:
                report.add(f"{p}.combact", f"entry ({t}, {r}, {a}) leaves trn x rel x act", key, t, r, a)
        for x in sorted(actor.tentative | actor.implicit):
            if x not in rel_ids | actor.act | actor.trn:
                report.add(f"{p}.marks", f"mark on unknown element {x!r}", key, x)
        if key in actor.components:
            report.add(f"{p}.components", "actor lists itself as a component", key)
        for lst in ("facq", "bacq"):
            for other in getattr(actor, lst):
                if other not in env.actors:
                    report.add(f"{p}.{lst}", f"unknown acquaintance {other!r}", key, other)
        for ref in sorted(actor.act | actor.trn):
            try:
                action = env.action(ref)
            except ValueError as exc:
                report.add(f"{p}.actions", str(exc), key, ref)
                continue
            if action.id != ref:
                report.add(f"{p}.actions", f"{ref!r} is not in normal form ({action.id!r})", key, ref)
            if action.message == "send" and ref in actor.act and action.peers[0] != key:
                report.add(f"{p}.act", f"{ref} sends on behalf of {action.peers[0]}", key, ref)
            if action.message == "receive" and ref in actor.trn and action.peers[1] != key:
                report.add(f"{p}.trn", f"{ref} is aimed at {action.peers[1]}", key, ref)
        for a in sorted(actor.act - env.actp):
            report.add(f"{p}.act", f"{a!r} is not in the environment's possible actions", key, a)
        for r in sorted(rel_ids - env.relp):
            report.add(f"{p}.rel", f"{r!r} is not in the environment's possible relations", key, r)
        for item in sorted(actor.rel, key=lambda r: r.id):
            _check_relation_kind(env, key, item, report)
    for cyc in _component_cycles(env):
        report.add("components", f"component cycle {' > '.join(cyc)}", *cyc)
    for t, a in sorted(env.ereact):
        if t not in env.trn or a not in env.actp:
            report.add("ereact", f"pair ({t}, {a}) leaves trn x actp", t, a)
    for r, a in sorted(env.eproact):
        if r not in env.relp or a not in env.actp:
            report.add("eproact", f"pair ({r}, {a}) leaves relp x actp", r, a)
    ids = [c.id for c in env.clocks]
    if len(ids) != len(set(ids)):
        report.add("clocks", "duplicate clock ids")
    for c in env.clocks:
        if c.owner not in (None, env.name) and c.owner not in env.actors:
            report.add(f"clocks.{c.id}", f"owner {c.owner!r} is not registered", c.id)
    known = set(ids) | {env.name}
    for m in env.sync:
        for cid in (m.source, m.target):
            if cid not in known:
                report.add("sync", f"map references unknown clock {cid!r}", cid)
    for v in check_sync_consistency(env.sync):
        report.add(v.code, v.message, *v.subjects)
    for name, ext in env.extended.items():
        if name not in env.actors or ext.base != env.actors[name]:
            report.add(f"extended.{name}", "extended representation does not match the registered actor", name)
        for x, a in sorted(ext.vreact):
            if x not in env.actp | env.trn or a not in ext.base.act:
                report.add(f"extended.{name}.vreact", f"pair ({x}, {a}) leaves (actp + trn) x act", name, x, a)
        for r, a in sorted(ext.vproact):
            if r not in env.relp or a not in ext.base.act:
                report.add(f"extended.{name}.vproact", f"pair ({r}, {a}) leaves relp x act", name, r, a)
    return report


def extend(env: Environment, name: str) -> ExtendedActorSpec:
    """Canonical extended representation: the actor's own reactions plus the
    environment's reactions to foreign actions that land in the actor's act."""
    actor = env.actor(name)
    vreact = set(actor.react) | {(x, a) for x, a in env.ereact if x not in actor.trn and a in actor.act}
    vproact = set(actor.proact) | {(r, a) for r, a in env.eproact if r not in actor.rel_ids and a in actor.act}
    return ExtendedActorSpec(actor, env.name, frozenset(vreact), frozenset(vproact))
