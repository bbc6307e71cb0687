"""Registry of executable law checks.

Every axiom, proposition, lemma and corollary has a named check that
evaluates it on one environment (plus optional events and simulation
settings) and returns a :class:`LawCheckResult` carrying witnesses on
failure.  Results report whether the law *holds* in the given environment;
which laws are asserted is recorded in the environment's :class:`LawConfig`.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from itertools import islice, permutations, product
from typing import Callable, Iterable, Mapping, Sequence

from .actions import (
    TOTAL_INACTION,
    Action,
    classify_dependency,
    compose,
    includes,
    is_automatic_class,
    modality_closure,
    negate,
    subterms,
)
from .core import (
    ActorSpec,
    Environment,
    can_receive,
    can_send,
    check_connectivity,
    check_domain_embedding,
    check_modeling_axiom,
    descendants,
    extend,
    friends,
    rank_compare,
    restrict,
    validate_environment,
)
from .engine import SimConfig, Timing
from .equivalence import (
    RELATIONS,
    check_modeling_consequences,
    check_preservation,
    classify,
    dyn_equivalent,
    dyn_homological,
    homological,
    identical,
)
from .errors import SamError, UnknownLawError, Violation
from .temporal import (
    EventRecord,
    TimeSet,
    parallel,
    sequential,
    strictly_sequential,
    temporal_law_violations,
)

STATUSES = ("pass", "fail", "not_applicable")


@dataclass(frozen=True)
class LawCheckResult:
    law: str
    status: str
    witnesses: tuple[Violation, ...] = ()
    note: str = ""

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")
        if self.status == "fail" and not self.witnesses:
            raise ValueError(f"{self.law}: a failing check needs a witness")


@dataclass
class LawContext:
    env: Environment
    events: Sequence[EventRecord] = ()
    sim: SimConfig = field(default_factory=SimConfig)
    domain_objects: frozenset[str] | None = None
    model_map: Mapping[str, str] = field(default_factory=dict)
    _terms: list[Action] | None = None

    def terms(self) -> list[Action]:
        """Every parseable action term of the environment, with its sub-terms."""
        if self._terms is None:
            refs = set(self.env.actp) | set(self.env.trn)
            for a in self.env.actors.values():
                refs |= a.act | a.trn
            out: dict[str, Action] = {}
            for ref in sorted(refs):
                try:
                    t = self.env.action(ref)
                except (ValueError, SamError):
                    continue
                for s in subterms(t) | ({t.parts[0]} if t.kind == "negation" else set()):
                    out.setdefault(s.id, s)
            self._terms = [out[k] for k in sorted(out)]
        return self._terms


Outcome = tuple[str, list[Violation], str]  # status, witnesses, note
_REGISTRY: dict[str, tuple[Callable[[LawContext], Outcome], str]] = {}


def _law(*ids: str, by_construction: bool = False):
    def deco(fn):
        for i in ids:
            _REGISTRY[i] = (fn if len(ids) == 1 else (lambda ctx, _i=i: fn(ctx, _i)),
                            "holds by construction" if by_construction else "")
        return fn
    return deco


def _verdict(witnesses: list[Violation], note: str = "") -> Outcome:
    return ("fail" if witnesses else "pass", witnesses, note)


NA = lambda why: ("not_applicable", [], why)  # noqa: E731


# -- axioms -------------------------------------------------------------------------

@_law("WF")
def _wf(ctx):
    return _verdict(list(validate_environment(ctx.env)))


def _message_terms(ctx, actor: ActorSpec, field_: str):
    for ref in sorted(getattr(actor, field_)):
        try:
            a = ctx.env.action(ref)
        except (ValueError, SamError):
            continue
        if a.message:
            yield ref, a


@_law("SM")
def _sm(ctx):
    out = []
    for name, actor in ctx.env.actors.items():
        for ref, a in _message_terms(ctx, actor, "act"):
            if a.message == "send" and a.peers[0] == name and a.peers[1] not in actor.facq:
                out.append(Violation("SM", f"{name} can perform {ref} but {a.peers[1]} is not a forward acquaintance",
                                     (name, a.peers[1], ref)))
    return _verdict(out)


@_law("RM")
def _rm(ctx):
    out = []
    for name, actor in ctx.env.actors.items():
        for ref, a in _message_terms(ctx, actor, "trn"):
            if a.message == "receive" and a.peers[1] == name and a.peers[0] not in actor.bacq:
                out.append(Violation("RM", f"{name} can receive {ref} but {a.peers[0]} is not a backward acquaintance",
                                     (a.peers[0], name, ref)))
    return _verdict(out)


@_law("CA")
def _ca(ctx):
    return _verdict(check_connectivity(ctx.env))


def _void_tuples(ctx, op, limit=64):
    voids = [t for t in ctx.terms() if t.kind == "negation"]
    if not voids:
        voids = [negate(t) for t in ctx.terms() if not t.is_void][:3]
    if not voids:
        from .actions import atomic
        voids = [negate(atomic("x0")), negate(atomic("x1"))]
    keys = [tuple(ctx.env.action(p) for p in k) for k, _ in op.rules if all(p.startswith("~") for p in k)]
    return keys + list(islice(product(voids, repeat=op.arity), limit))


@_law("EA")
def _ea(ctx):
    out = []
    for name in sorted(ctx.env.operators):
        op = ctx.env.operators[name]
        for parts in _void_tuples(ctx, op):
            got = compose(op, parts, ctx.env.catalog)
            try:
                want = negate(compose(op, [p.parts[0] for p in parts], ctx.env.catalog))
            except ValueError:
                want = None
            if got != want:
                out.append(Violation("EA", f"{got.id} = {name}({','.join(p.id for p in parts)}) is "
                                           f"{'a proper action' if not got.is_void else 'not ' + (want.id if want else '?')}",
                                     (name, got.id)))
                break
    return _verdict(out)


@_law("MA")
def _ma(ctx):
    env = ctx.env
    out = []
    if ctx.domain_objects is not None:
        out += check_modeling_axiom(env, ctx.domain_objects, ctx.model_map).witnesses
    elif not env.laws.MA:
        return NA("no modeled domain given and MA not asserted")
    for name in env.actors:
        for part in sorted(descendants(env, name) - set(env.actors)):
            out.append(Violation("MA", f"part {part!r} of {name} is not modeled by an actor", (name, part)))
    return _verdict(out)


# -- messaging propositions --------------------------------------------------------

@_law("Prop3.1")
def _p31(ctx):
    env = ctx.env
    if not _sm(ctx)[0] == "pass":
        return NA("Axiom SM does not hold")
    out = []
    for a, c in product(env.actors, repeat=2):
        if (c in env.actors[a].facq) != can_send(env, a, c):
            out.append(Violation("Prop3.1", f"facq({a}) and sending capability disagree on {c}", (a, c)))
    return _verdict(out)


@_law("Prop3.2")
def _p32(ctx):
    env = ctx.env
    if not _rm(ctx)[0] == "pass":
        return NA("Axiom RM does not hold")
    out = []
    for a, c in product(env.actors, repeat=2):
        if (c in env.actors[a].bacq) != can_receive(env, c, a):
            out.append(Violation("Prop3.2", f"bacq({a}) and receiving capability disagree on {c}", (c, a)))
    return _verdict(out)


@_law("Prop3.3")
def _p33(ctx):
    env = ctx.env
    if check_connectivity(env):
        return NA("Axiom CA does not hold")
    out = []
    for a in env.actors:
        for b in sorted(friends(env, a)):
            if b in env.actors and a not in friends(env, b):
                out.append(Violation("Prop3.3", f"{b} is a friend of {a} but not conversely", (a, b)))
    return _verdict(out)


@_law("Prop3.4")
def _p34(ctx):
    env = ctx.env
    names = list(env.actors)
    all_friends = all(set(env.actors[a].facq) == set(env.actors[a].bacq) for a in names)
    symmetric = all(a in friends(env, b) for a in names for b in friends(env, a) if b in env.actors)
    if not (all_friends and symmetric):
        return NA("not every acquaintance is a mutual friend")
    return _verdict([replace(v, code="Prop3.4") for v in check_connectivity(env)])


# -- timing of reactions ---------------------------------------------------------------

def _timing_probes(ctx) -> list[tuple[str, Timing, TimeSet]]:
    """(who, timing, trigger time) triples: the three classes on a generic
    trigger plus every configured reaction timing on that actor's trigger."""
    probes = [("probe", Timing("sharp"), TimeSet.interval("c", 0, 2)),
              ("probe", Timing("reserved"), TimeSet.interval("c", 0, 2)),
              ("probe", Timing("delayed", 1), TimeSet.interval("c", 0, 2))]
    for (actor, trig), t in sorted(ctx.sim.reaction_timing.items()):
        dur = ctx.sim.durations.get(trig, ctx.sim.default_duration)
        probes.append((f"{actor}/{trig}", t, TimeSet.interval("c", 0, dur)))
    return probes


def _reaction_probe(timing: Timing, trig: TimeSet) -> tuple[EventRecord, EventRecord]:
    start = timing.start_after(trig)
    a = EventRecord("a", "A", "a", trig)
    r = EventRecord("r", "A", "r", TimeSet.interval(trig.clock, start, start + 1), {"a"}, f"reaction:{timing.kind}")
    return a, r


def _timing_law(kind: str, law: str, check):
    def fn(ctx):
        out = []
        events = {e.id: e for e in ctx.events}
        pairs = [(who, *_reaction_probe(t, ts)) for who, t, ts in _timing_probes(ctx) if t.kind == kind]
        pairs += [(e.id, events[e.trigger], e) for e in ctx.events
                  if e.timing == kind and e.kind.startswith("reaction") and e.trigger in events]
        checked = 0
        for who, a, r in pairs:
            if kind == "sharp" and a.time.is_momentary:
                continue
            checked += 1
            try:
                ok = check(a, r, ctx.env.sync)
            except SamError:
                continue
            if not ok:
                out.append(Violation(law, f"{kind} reaction {r.id} to {a.id} ({who}) breaks the timing law",
                                     (who, a.id, r.id)))
        return _verdict(out) if checked else NA("no non-momentary trigger")
    return fn


_REGISTRY["Prop3.5"] = (_timing_law("sharp", "Prop3.5", lambda a, r, s: parallel([a, r], s)), "")
_REGISTRY["Prop3.6"] = (_timing_law("reserved", "Prop3.6", strictly_sequential), "")
_REGISTRY["Prop3.7"] = (_timing_law("delayed", "Prop3.7", sequential), "")


# -- temporal relations over events ------------------------------------------------------

def _temporal(ctx, law):
    if len(ctx.events) < 3:
        return NA("fewer than three events")
    key = id(ctx.events)
    cache = ctx.__dict__.setdefault("_temporal_cache", {})
    if key not in cache:
        cache[key] = temporal_law_violations(ctx.events, ctx.env.sync)
    return _verdict(cache[key][law])


for _i in range(8, 15):
    _REGISTRY[f"Prop3.{_i}"] = ((lambda ctx, _l=f"Prop3.{_i}": _temporal(ctx, _l)),
                                "holds by construction" if _i in (8, 9) else "")


# -- actions ------------------------------------------------------------------------

@_law("Prop3.15")
def _p315(ctx):
    closure = modality_closure(ctx.env.modalities)
    return _verdict([Violation("Prop3.15", f"{a} is both {p} and {n} after closure", (a, p, n))
                     for a, p, n in closure.contradictions])


@_law("Prop3.16")
def _p316(ctx):
    terms = ctx.terms()
    inc = {a.id: {b.id for b in terms if includes(a, b)} for a in terms}
    out = []
    for a in terms:
        for b in inc[a.id]:
            for c in inc.get(b, ()):
                if c not in inc[a.id]:
                    out.append(Violation("Prop3.16", f"{a.id} includes {b} includes {c} but not {a.id} includes {c}",
                                         (a.id, b, c)))
    return _verdict(out)


@_law("Prop3.17")
def _p317(ctx):
    out = []
    for name in sorted(ctx.env.operators):
        op = ctx.env.operators[name]
        for key, result in op.rules:
            try:
                parts = [ctx.env.action(p) for p in key]
            except (ValueError, SamError):
                continue
            dirs = {p.direction for p in parts}
            got = compose(op, parts, ctx.env.catalog)
            if len(dirs) == 1 and got.direction not in dirs:
                out.append(Violation("Prop3.17", f"{name}({','.join(key)}) = {result} is {got.direction}, "
                                                 f"parts are {dirs.pop()}", (name, result)))
    for t in ctx.terms():
        if t.kind == "composed":
            dirs = {p.direction for p in t.parts}
            if len(dirs) == 1 and t.direction not in dirs:
                out.append(Violation("Prop3.17", f"{t.id} changes direction", (t.id,)))
    return _verdict(out)


@_law("Prop3.18", by_construction=True)
def _p318(ctx):
    return _verdict([Violation("Prop3.18", f"double negation of {t.id} is not {t.id}", (t.id,))
                     for t in ctx.terms() if t.kind != "total_inaction" and negate(negate(t)) != t])


@_law("Prop3.19")
def _p319(ctx):
    out = []
    for name in sorted(ctx.env.operators):
        op = ctx.env.operators[name]
        if not op.ea_compliant:
            continue
        for parts in _void_tuples(ctx, op):
            got = compose(op, parts, ctx.env.catalog)
            if not got.is_void:
                out.append(Violation("Prop3.19", f"{got.id} composes inactions into a proper action", (name, got.id)))
    return _verdict(out, "" if any(o.ea_compliant for o in ctx.env.operators.values())
                    else "no EA-compliant operators")


@_law("Prop3.20")
def _p320(ctx):
    terms = [t for t in ctx.terms() if t.kind != "total_inaction"]
    out = []
    for a, b in product(terms, repeat=2):
        if includes(b, a) and not includes(negate(a), negate(b)):
            out.append(Violation("Prop3.20", f"{a.id} is in {b.id} but ~{b.id} is not in ~{a.id}", (a.id, b.id)))
    return _verdict(out)


@_law("Prop3.21")
def _p321(ctx):
    # ranges over proper actions: for a void a the negation is proper again
    return _verdict([Violation("Prop3.21", f"{negate(t).id} is not included in the total inaction", (t.id,))
                     for t in ctx.terms() if not t.is_void
                     and not includes(TOTAL_INACTION, negate(t))])


@_law("Prop3.22")
def _p322(ctx):
    out = []
    for name in sorted(ctx.env.operators):
        op = ctx.env.operators[name]
        for key, result in op.rules:
            if any(p.startswith("~") or p == "T_IA" for p in key):
                continue
            try:
                got = compose(op, [ctx.env.action(p) for p in key], ctx.env.catalog)
            except (ValueError, SamError):
                continue
            if got.organization != "mediated":
                out.append(Violation("Prop3.22", f"{name}({','.join(key)}) = {result} is {got.organization}",
                                     (name, result)))
    for t in ctx.terms():
        if t.kind == "composed" and not any(p.is_void for p in t.parts) and t.organization != "mediated":
            out.append(Violation("Prop3.22", f"{t.id} is not mediated", (t.id,)))
    return _verdict(out)


def _owned_class_pairs(actor: ActorSpec):
    for a in sorted(actor.proper_actions()):
        yield a, classify_dependency(actor, a), classify_dependency(actor, "~" + a)


@_law("Prop3.23", by_construction=True)
def _p323(ctx):
    return _verdict([Violation("Prop3.23", f"{n}: {a} is {c} but ~{a} is {cn}", (n, a))
                     for n, actor in ctx.env.actors.items()
                     for a, c, cn in _owned_class_pairs(actor) if c != cn])


@_law("Prop3.24", by_construction=True)
def _p324(ctx):
    return _verdict([Violation("Prop3.24", f"{n}: primitive action {a} is not automatic", (n, a))
                     for n, actor in ctx.env.actors.items() for a, c, _ in _owned_class_pairs(actor)
                     if c == "primitive" and not is_automatic_class(c)])


# -- actor relations -------------------------------------------------------------------

def _relation_table(ctx) -> dict[str, dict[tuple[str, str], bool]]:
    cache = ctx.__dict__.get("_rel_table")
    if cache is None:
        actors = ctx.env.actors
        fns = {"identical": identical, "dyn_equivalent": dyn_equivalent,
               "homological": lambda a, b: homological(a, b) is not None,
               "dyn_homological": lambda a, b: dyn_homological(a, b) is not None}
        cache = {r: {(x, y): fns[r](actors[x], actors[y]) for x in actors for y in actors} for r in RELATIONS}
        ctx.__dict__["_rel_table"] = cache
    return cache


def _equivalence_law(rel: str, law: str):
    def fn(ctx):
        t = _relation_table(ctx)[rel]
        names = list(ctx.env.actors)
        out = [Violation(law, f"{rel} is not reflexive at {a}", (a,)) for a in names if not t[a, a]]
        out += [Violation(law, f"{rel} is not symmetric on {a},{b}", (a, b))
                for a, b in permutations(names, 2) if t[a, b] and not t[b, a]]
        out += [Violation(law, f"{rel} is not transitive on {a},{b},{c}", (a, b, c))
                for a, b, c in permutations(names, 3) if t[a, b] and t[b, c] and not t[a, c]]
        return _verdict(out)
    return fn


def _implication_law(stronger: str, weaker: str, law: str):
    def fn(ctx):
        t = _relation_table(ctx)
        return _verdict([Violation(law, f"{a},{b} are {stronger} but not {weaker}", (a, b))
                         for (a, b), v in t[stronger].items() if v and not t[weaker][a, b]])
    return fn


for _rel, _law_id in (("identical", "Lemma3.1"), ("dyn_equivalent", "Lemma3.2"),
                      ("homological", "Lemma3.4"), ("dyn_homological", "Lemma3.6")):
    _REGISTRY[_law_id] = (_equivalence_law(_rel, _law_id), "")
_REGISTRY["Lemma3.3"] = (_implication_law("identical", "dyn_equivalent", "Lemma3.3"), "")
_REGISTRY["Lemma3.5"] = (_implication_law("identical", "homological", "Lemma3.5"), "")
_REGISTRY["Lemma3.7"] = (_implication_law("dyn_equivalent", "dyn_homological", "Lemma3.7"), "")


@_law("Prop3.25")
def _p325(ctx):
    out = []
    for name, a in ctx.env.actors.items():
        bare = ActorSpec(name, trn=a.trn)
        voided = ActorSpec(name, trn=a.trn, act={"~" + x for x in a.proper_actions()},
                           react={(t, "~" + x) for t, x in a.react if not x.startswith("~") and x != "T_IA"})
        if not dyn_equivalent(bare, voided):
            out.append(Violation("Prop3.25", f"void-only variant of {name} is not dynamically equivalent "
                                             "to its action-free variant", (name,)))
    return _verdict(out)


def _preservation(ctx, law):
    rel = {"Prop3.26": "dyn_equivalent", "Prop3.27": "dyn_equivalent", "Prop3.28": "homological",
           "Prop3.29": "homological", "Prop3.30": "dyn_homological", "Prop3.31": "dyn_homological"}[law]
    actors = list(ctx.env.actors.values())
    pairs = [(a, b, rel) for a, b in permutations(actors, 2)]
    return _verdict([v for v in check_preservation(pairs) if v.code == law])


for _i in range(26, 32):
    _REGISTRY[f"Prop3.{_i}"] = ((lambda ctx, _l=f"Prop3.{_i}": _preservation(ctx, _l)), "")


@_law("Prop3.32")
def _p332(ctx):
    env = ctx.env
    out = list(check_domain_embedding(env, env, {n: n for n in env.actors}).witnesses)
    for drop in env.actors:
        sub = Environment.of([a for n, a in env.actors.items() if n != drop], name=env.name + "-sub")
        out += check_domain_embedding(env, sub, {n: n for n in sub.actors}).witnesses
    return _verdict(out)


def _ma_consequence(ctx, law):
    if not ctx.env.laws.MA:
        return NA("Modeling Axiom not asserted")
    return _verdict([v for v in check_modeling_consequences(ctx.env) if v.code.startswith(law)])


_REGISTRY["Prop3.33"] = ((lambda ctx: _ma_consequence(ctx, "Prop3.33")), "")
_REGISTRY["Cor3.2"] = ((lambda ctx: _ma_consequence(ctx, "Cor3.2")), "")


@_law("Prop3.34")
def _p334(ctx):
    env = ctx.env
    out = []
    for name in env.actors:
        for d in sorted(descendants(env, name)):
            if d in env.actors and rank_compare(env, d, name) != "lower":
                out.append(Violation("Prop3.34", f"component {d} does not rank below {name}", (d, name)))
    return _verdict(out)


# -- classes ------------------------------------------------------------------------

def _lattice(ctx, law):
    out = []
    for name in ctx.env.actors:
        out += [v for v in classify(name, ctx.env).lattice_violations(name) if v.code == law]
    return _verdict(out)


for _l in ["Lemma3.8", "Lemma3.9", "Lemma3.10", "Lemma3.11", "Lemma3.12", "Lemma3.13", "Cor3.1", "Cor3.3"]:
    _REGISTRY[_l] = ((lambda ctx, _x=_l: _lattice(ctx, _x)), "")


def _extended(ctx, which):
    out = []
    for name, actor in ctx.env.actors.items():
        try:
            ext = ctx.env.extended.get(name) or extend(ctx.env, name)
        except ValueError as exc:
            out.append(Violation(which, str(exc), (name,)))
            continue
        if which == "Lemma3.14" and restrict(ext.vreact, ext.base.trn) != actor.react:
            out.append(Violation(which, f"react of {name} is not the restriction of vreact", (name,)))
        if which == "Lemma3.15" and restrict(ext.vproact, ext.base.rel_ids) != actor.proact:
            out.append(Violation(which, f"proact of {name} is not the restriction of vproact", (name,)))
    return _verdict(out)


_REGISTRY["Lemma3.14"] = ((lambda ctx: _extended(ctx, "Lemma3.14")), "holds by construction")
_REGISTRY["Lemma3.15"] = ((lambda ctx: _extended(ctx, "Lemma3.15")), "holds by construction")


# -- running --------------------------------------------------------------------------

def _order(law: str) -> tuple:
    head = law.rstrip("0123456789.")
    rank = {"WF": 0, "SM": 1, "RM": 2, "CA": 3, "EA": 4, "MA": 5, "Prop": 6, "Lemma": 7, "Cor": 8}[head]
    nums = tuple(int(x) for x in law[len(head):].split(".") if x)
    return rank, nums


LAW_IDS: tuple[str, ...] = tuple(sorted(_REGISTRY, key=_order))


def law_note(law: str) -> str:
    return _REGISTRY[law][1]


def run_law_suite(env: Environment, selection: Iterable[str] | str = "all", events: Sequence[EventRecord] = (),
                  sim: SimConfig | None = None, domain_objects: Iterable[str] | None = None,
                  model_map: Mapping[str, str] | None = None) -> list[LawCheckResult]:
    """Run the selected checks (``"all"`` for the whole registry) in registry order."""
    if isinstance(selection, str):
        selection = LAW_IDS if selection == "all" else [selection]
    selection = list(selection)
    if "all" in selection:
        selection = list(LAW_IDS)
    unknown = [s for s in selection if s not in _REGISTRY]
    if unknown:
        raise UnknownLawError(f"unknown law id(s): {', '.join(unknown)}")
    ctx = LawContext(env, list(events), sim or SimConfig(),
                     frozenset(domain_objects) if domain_objects is not None else None, dict(model_map or {}))
    out = []
    for law in sorted(set(selection), key=_order):
        fn, note = _REGISTRY[law]
        try:
            status, witnesses, extra = fn(ctx)
        except (SamError, ValueError, KeyError) as exc:
            status, witnesses, extra = "fail", [Violation(law, f"check could not complete: {exc}")], ""
        out.append(LawCheckResult(law, status, tuple(witnesses), extra or note))
    return out


def failures(results: Iterable[LawCheckResult]) -> list[LawCheckResult]:
    return [r for r in results if r.status == "fail"]
