"""Random law-abiding environments and targeted mutations of them.

``generate(rng)`` builds a well-formed environment in which SM, RM, CA, EA and
MA hold, together with simulation settings and a handful of initial events.
``mutate(case, rng)`` breaks exactly one law and reports which one.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .actions import (
    TOTAL_INACTION,
    Action,
    CompositionOp,
    MODALITIES,
    ModalityAssertion,
    atomic,
    complement_operator,
    compose,
    modality_closure,
    negate,
    receive,
    send,
)
from .core import ActorSpec, Environment, LawConfig, RelationItem, descendants, extend
from .engine import SimConfig, Timing
from .temporal import Clock, ClockMap, EventRecord, TimeSet

OPERATORS = {
    "seq": CompositionOp("seq", 2),
    "par": CompositionOp("par", 2),
    "rep": CompositionOp("rep", 1),
}
ATOMS = tuple(f"a{i}" for i in range(8))
_ATOM_RE = re.compile(r"(?<![A-Za-z0-9])a(\d)")
MUTATIONS = ("CA", "SM", "RM", "EA", "Prop3.15", "Cor3.2", "WF.react", "WF.kind", "WF.sync", "Prop3.22")


@dataclass
class Case:
    env: Environment
    sim: SimConfig = field(default_factory=SimConfig)
    events: list[EventRecord] = field(default_factory=list)


def _catalog(rng: random.Random) -> dict[str, Action]:
    return {n: atomic(n, rng.choice(("internal", "external")), rng.choice(("singular", "regular", "regular")))
            for n in ATOMS}


def _term(rng: random.Random, catalog, depth: int = 0) -> Action:
    roll = rng.random()
    if depth >= 2 or roll < 0.45:
        return catalog[rng.choice(ATOMS)]
    if roll < 0.65:
        inner = _term(rng, catalog, depth + 1)
        return inner if inner.kind == "total_inaction" else negate(inner)
    if roll < 0.68:
        return TOTAL_INACTION
    op = OPERATORS[rng.choice(sorted(OPERATORS))]
    return compose(op, [_term(rng, catalog, depth + 1) for _ in range(op.arity)], catalog)


def _components(rng, names) -> dict[str, set[str]]:
    """A random forest: each actor picks its parent among earlier actors, or none."""
    parts: dict[str, set[str]] = {n: set() for n in names}
    for i, n in enumerate(names):
        if i and rng.random() < 0.35:
            parts[rng.choice(names[:i])].add(n)
    return parts


def _relations(rng, owner, names, parts_of, k) -> set[RelationItem]:
    desc = sorted(parts_of(owner))
    outside = sorted(set(names) - set(desc) - {owner})
    out = set()
    for i in range(k):
        kinds = ["property"]
        if desc:
            kinds += ["inner", "internal"]
        if outside:
            kinds += ["outer", "external"]
        if desc and outside:
            kinds.append("intermediate")
        kind = rng.choice(kinds)
        ends = {
            "property": (owner,) if rng.random() < 0.5 else (),
            "inner": tuple(rng.sample(desc, min(len(desc), rng.randint(1, 2)))) if desc else (),
            "internal": (owner, rng.choice(desc)) if desc else (),
            "outer": (owner, rng.choice(outside)) if outside else (),
            "external": (owner, rng.choice(outside)) if outside else (),
            "intermediate": (rng.choice(desc), rng.choice(outside)) if desc and outside else (),
        }[kind]
        out.add(RelationItem(f"{owner.lower()}r{i}", kind, ends))
    return out


def _modalities(rng, refs) -> set[ModalityAssertion]:
    out: set[ModalityAssertion] = set()
    for ref in rng.sample(sorted(refs), min(len(refs), rng.randint(0, 3))):
        for m in rng.sample(MODALITIES, rng.randint(1, 3)):
            trial = out | {ModalityAssertion(ref, m)}
            if not modality_closure(trial).contradictions:
                out = trial
    return out


def _clocks(rng, names) -> tuple[tuple[Clock, ...], tuple[ClockMap, ...]]:
    clocks = [Clock("E")]
    owned = [n for n in names if rng.random() < 0.6]
    clocks += [Clock(f"c{n}", n) for n in owned]
    ids = [c.id for c in clocks]
    sync = []
    affine = {"E": (Fraction(1), Fraction(0))}  # clock -> map into E, where synchronized
    for cid in ids[1:]:
        if rng.random() < 0.8:
            other = rng.choice([c for c in ids if c in affine])
            r, s = Fraction(rng.randint(1, 3), rng.randint(1, 2)), Fraction(rng.randint(-2, 4), rng.randint(1, 2))
            sync.append(ClockMap(cid, other, r, s))
            ro, so = affine[other]
            affine[cid] = (ro * r, ro * s + so)
    synced = [c for c in ids if c in affine]
    if len(synced) >= 3 and rng.random() < 0.3:
        x, y = rng.sample(synced[1:], 2)  # a redundant edge consistent with the tree
        (rx, sx), (ry, sy) = affine[x], affine[y]
        sync.append(ClockMap(x, y, rx / ry, (sx - sy) / ry))
    return tuple(clocks), tuple(sync)


def generate(rng: random.Random, max_actors: int = 6, max_items: int = 5) -> Case:
    catalog = _catalog(rng)
    n = rng.randint(1, max_actors)
    names = [f"A{i}" for i in range(n)]
    parts = _components(rng, names)

    def parts_of(a):
        out, stack = set(), list(parts[a])
        while stack:
            x = stack.pop()
            if x not in out:
                out.add(x)
                stack.extend(parts[x])
        return out

    facq: dict[str, list[str]] = {a: [] for a in names}
    for a in names:
        for c in names:
            if rng.random() < 0.3:
                facq[a].append(c)
    bacq = {a: [c for c in names if a in facq[c]] for a in names}
    for a in names:
        rng.shuffle(bacq[a])

    actors = []
    for a in names:
        k = lambda: rng.randint(0, max_items)  # noqa: E731
        rel = _relations(rng, a, names, parts_of, k())
        act = {_term(rng, catalog).id for _ in range(k())}
        for c in facq[a]:
            if rng.random() < 0.5:
                act.add(send(a, c, request=rng.random() < 0.3).id)
        trn = {_term(rng, catalog).id for _ in range(rng.randint(0, 2))}
        for c in bacq[a]:
            if rng.random() < 0.6:
                trn.add(receive(c, a).id)
        act, trn = set(sorted(act)[:max_items]), set(sorted(trn)[:max_items])
        rel_ids = sorted(r.id for r in rel)
        acts, trns = sorted(act), sorted(trn)
        react = {(rng.choice(trns), rng.choice(acts)) for _ in range(rng.randint(0, 3))} if acts and trns else set()
        proact = {(rng.choice(rel_ids), rng.choice(acts)) for _ in range(rng.randint(0, 2))} if acts and rel_ids else set()
        combact = ({(rng.choice(trns), rng.choice(rel_ids), rng.choice(acts)) for _ in range(rng.randint(0, 2))}
                   if acts and trns and rel_ids else set())
        elements = rel_ids + acts + trns
        tentative = {x for x in elements if rng.random() < 0.15}
        implicit = {x for x in elements if rng.random() < 0.1}
        actors.append(ActorSpec(a, rel=rel, act=act, trn=trn, react=react, proact=proact, combact=combact,
                                facq=facq[a], bacq=bacq[a], components=parts[a],
                                tentative=tentative, implicit=implicit))

    # renamed or exact copies of message-free actors give related pairs
    for src in list(actors):
        if len(actors) >= max_actors or rng.random() > 0.3:
            continue
        if any(x.startswith(("SMes(", "Req(", "RMes(")) for x in src.act | src.trn) or src.components:
            continue
        if rng.random() < 0.5:
            copy = ActorSpec(src.name + "c", rel={RelationItem(r.id, r.kind, ()) for r in src.rel if r.kind == "property"},
                             act=src.act, trn=src.trn, react=src.react,
                             proact={(r, x) for r, x in src.proact if src.relation(r).kind == "property"},
                             combact={(t, r, x) for t, r, x in src.combact if src.relation(r).kind == "property"},
                             tentative=src.tentative & (src.act | src.trn))
        else:
            copy = _renamed(src, src.name + "h")
        if all(r.kind == "property" for r in src.rel):
            actors.append(copy)

    clocks, sync = _clocks(rng, [a.name for a in actors])
    env = Environment.of(actors, name="E", clocks=clocks, sync=sync, catalog=catalog, operators=dict(OPERATORS),
                         laws=LawConfig(MA=True))
    trn_u = sorted(env.trn)
    actp_u = sorted(env.actp)
    relp_u = sorted(env.relp)
    ereact = {(rng.choice(trn_u), rng.choice(actp_u)) for _ in range(rng.randint(0, 3))} if trn_u and actp_u else set()
    eproact = {(rng.choice(relp_u), rng.choice(actp_u)) for _ in range(rng.randint(0, 2))} if relp_u and actp_u else set()
    env = replace(env, ereact=frozenset(ereact), eproact=frozenset(eproact),
                  modalities=frozenset(_modalities(rng, env.actp)))
    ext = {a: extend(env, a) for a in env.actors if rng.random() < 0.4}
    env = replace(env, extended=ext)
    return Case(env, _sim(rng, env), _events(rng, env))


def _renamed(src: ActorSpec, name: str) -> ActorSpec:
    """Same shape with every atomic action a<k> renamed h<k> and every relation
    id suffixed; void-ness is kept."""
    rn = lambda ref: _ATOM_RE.sub(r"h\1", ref)  # noqa: E731
    rr = {r.id: r.id + "h" for r in src.rel}
    return ActorSpec(
        name,
        rel={RelationItem(rr[r.id], "property", ()) for r in src.rel},
        act={rn(x) for x in src.act}, trn={rn(x) for x in src.trn},
        react={(rn(t), rn(x)) for t, x in src.react},
        proact={(rr[r], rn(x)) for r, x in src.proact},
        combact={(rn(t), rr[r], rn(x)) for t, r, x in src.combact},
        tentative={rr.get(x) or rn(x) for x in src.tentative},
        implicit={rr.get(x) or rn(x) for x in src.implicit},
    )


def _sim(rng, env: Environment) -> SimConfig:
    timings = {}
    for a in env.actors.values():
        for t in sorted(a.trn | a.rel_ids):
            if rng.random() < 0.4:
                kind = rng.choice(("sharp", "reserved", "delayed"))
                timings[a.name, t] = Timing(kind, Fraction(rng.randint(1, 4), 2) if kind == "delayed" else 0)
    delays = {(a.name, c): Fraction(rng.randint(0, 3), rng.randint(1, 2))
              for a in env.actors.values() for c in a.facq if rng.random() < 0.5}
    durations = {x: Fraction(rng.randint(1, 6), rng.randint(1, 3)) for x in sorted(env.actp) if rng.random() < 0.3}
    return SimConfig(seed=rng.randrange(2 ** 32), max_steps=200, delivery_delay=delays,
                     reaction_timing=timings, durations=durations)


def _events(rng, env: Environment) -> list[EventRecord]:
    out: list[EventRecord] = []
    names = sorted(env.actors)
    for i in range(rng.randint(0, 5)):
        actor = rng.choice(names)
        acts = sorted(env.actors[actor].act) or ["T_IA"]
        action = rng.choice(acts)
        lo = Fraction(rng.randint(0, 12), rng.choice((1, 2)))
        if env.action(action).duration_kind == "singular":
            time = TimeSet.moment(env.clock_of(actor), lo)
        else:
            pieces = [(lo, lo + rng.randint(1, 4))]
            if rng.random() < 0.2:
                hi = pieces[0][1]
                pieces.append((hi + 1, hi + 1 + rng.randint(0, 3)))
            time = TimeSet(env.clock_of(actor), tuple(pieces))
        # a dependency must be committed first: same clock, no later start
        earlier = [e for e in out if e.clock == time.clock and e.time.start <= time.start]
        deps = {rng.choice(earlier).id} if earlier and rng.random() < 0.5 else set()
        out.append(EventRecord(f"i{i}", actor, action, time, frozenset(deps), "initial"))
    return out


# -- mutations ------------------------------------------------------------------------

def _swap(env: Environment, actor: ActorSpec, **universes) -> Environment:
    env = env.with_actor(actor)
    ext = {k: v for k, v in env.extended.items() if k != actor.name}
    return replace(env, extended=ext, **{k: frozenset(v) for k, v in universes.items()})


def mutate(case: Case, rng: random.Random, kind: str | None = None) -> tuple[Case, str]:
    """Break one law; returns the mutated case and the id of the law that must fail."""
    kinds = [kind] if kind else rng.sample(MUTATIONS, len(MUTATIONS))
    for k in kinds:
        env = _MUTATORS[k](case.env, rng)
        if env is not None:
            law = "WF" if k.startswith("WF.") else k
            return Case(env, case.sim, case.events), law
    raise ValueError(f"mutation {kind!r} not applicable to this environment")


def _m_ca(env, rng):
    names = sorted(env.actors)
    a, c = rng.choice(names), rng.choice(names)
    A, C = env.actors[a], env.actors[c]
    if c in A.facq:
        return _swap(env, replace(C, bacq=tuple(x for x in C.bacq if x != a)))
    return _swap(env, replace(A, facq=A.facq + (c,)))


def _m_sm(env, rng):
    pairs = [(a, c) for a in sorted(env.actors) for c in sorted(env.actors) if c not in env.actors[a].facq]
    if not pairs:
        return None
    a, c = rng.choice(pairs)
    ref = send(a, c).id
    A = env.actors[a]
    return _swap(env, replace(A, act=A.act | {ref}), actp=env.actp | {ref})


def _m_rm(env, rng):
    pairs = [(c, a) for a in sorted(env.actors) for c in sorted(env.actors) if c not in env.actors[a].bacq]
    if not pairs:
        return None
    c, a = rng.choice(pairs)
    ref = receive(c, a).id
    A = env.actors[a]
    return _swap(env, replace(A, trn=A.trn | {ref}), trn=env.trn | {ref})


def _m_ea(env, rng):
    universe = rng.sample(ATOMS, 3)
    return replace(env, operators={**env.operators, "L": complement_operator("L", universe)})


def _m_modal(env, rng):
    ref = rng.choice(sorted(env.actp | set(ATOMS)))
    extra = {ModalityAssertion(ref, m) for m in ("unknown", "possible", "permitted", "performed")}
    return replace(env, modalities=env.modalities | extra)


def _m_ma(env, rng):
    a = env.actors[rng.choice(sorted(env.actors))]
    return replace(_swap(env, replace(a, components=a.components | {"ghost"})), laws=replace(env.laws, MA=True))


def _m_react(env, rng):
    a = env.actors[rng.choice(sorted(env.actors))]
    return _swap(env, replace(a, react=a.react | {("nowhere", "nothing")}))


def _m_kind(env, rng):
    a = env.actors[rng.choice(sorted(env.actors))]
    others = sorted(set(env.actors) - descendants(env, a.name) - {a.name})
    ends = (others[0],) if others else ("stranger",)
    return _swap(env, replace(a, rel=a.rel | {RelationItem("broken", "inner", ends)}), relp=env.relp | {"broken"})


def _m_sync(env, rng):
    clocks = env.clocks + (Clock("k1"), Clock("k2"))
    sync = env.sync + (ClockMap("k1", "k2", 1, 1), ClockMap("k2", "k1", 1, 1))
    return replace(env, clocks=clocks, sync=sync)


def _m_mediated(env, rng):
    x, y, z = rng.sample(ATOMS, 3)
    catalog = dict(env.catalog)
    catalog[z] = atomic(z, catalog[z].direction if z in catalog else "internal")
    op = CompositionOp("fuse", 2, rules=(((x, y), z),))
    return replace(env, operators={**env.operators, "fuse": op}, catalog=catalog)


_MUTATORS = {
    "CA": _m_ca, "SM": _m_sm, "RM": _m_rm, "EA": _m_ea, "Prop3.15": _m_modal, "Cor3.2": _m_ma,
    "WF.react": _m_react, "WF.kind": _m_kind, "WF.sync": _m_sync, "Prop3.22": _m_mediated,
}
