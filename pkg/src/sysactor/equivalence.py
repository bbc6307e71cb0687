"""Relations between actors (identity, dynamic equivalence, homology) and actor classes."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .actions import classify_dependency, is_automatic_class, is_void_ref
from .core import ActorSpec, Environment, descendants, is_primary
from .errors import ConfigurationError, Violation

RELATIONS = ("identical", "dyn_equivalent", "homological", "dyn_homological")


def structural_components(a: ActorSpec) -> tuple:
    return (a.rel, a.act, a.trn, a.react, a.proact, a.combact)


def action_components(a: ActorSpec) -> tuple:
    """(act, trn, react, proact, combact) with void actions stripped from act and
    from every relation's range."""
    keep = lambda ref: not is_void_ref(ref)  # noqa: E731
    return (
        frozenset(filter(keep, a.act)),
        a.trn,
        frozenset(p for p in a.react if keep(p[1])),
        frozenset(p for p in a.proact if keep(p[1])),
        frozenset(p for p in a.combact if keep(p[2])),
    )


def identical(a: ActorSpec, b: ActorSpec) -> bool:
    return structural_components(a) == structural_components(b)


def dyn_equivalent(a: ActorSpec, b: ActorSpec) -> bool:
    return action_components(a) == action_components(b)


# -- isomorphism ---------------------------------------------------------------------

@dataclass(frozen=True)
class ComponentIsomorphism:
    """Bijections between corresponding component sets of two actors."""

    rel_map: Mapping[str, str] = field(default_factory=dict)
    act_map: Mapping[str, str] = field(default_factory=dict)
    trn_map: Mapping[str, str] = field(default_factory=dict)
    scope: str = "structural"  # structural | dynamic

    def key(self) -> tuple:
        return tuple(tuple(sorted(m.items())) for m in (self.rel_map, self.act_map, self.trn_map))


@dataclass
class Structure:
    """A three-sorted structure (rel, act, trn) with labels and the react, proact
    and combact relations; what the isomorphism search works on."""

    sorts: dict[str, list[str]]
    labels: dict[tuple[str, str], tuple]
    relations: dict[str, tuple[tuple[str, ...], frozenset]]


def actor_structure(a: ActorSpec, scope: str = "structural", preserve_classes: bool = False) -> Structure:
    if scope == "structural":
        act, trn, react, proact, combact = a.act, a.trn, a.react, a.proact, a.combact
        rel = sorted(a.rel_ids)
        kinds = {r.id: r.kind for r in a.rel}
    elif scope == "dynamic":
        act, trn, react, proact, combact = action_components(a)
        rel = sorted({r for r, _ in proact} | {r for _, r, _ in combact})
        kinds = {}
    else:
        raise ValueError(f"unknown scope {scope!r}")
    labels: dict[tuple[str, str], tuple] = {}
    for r in rel:
        labels["rel", r] = (kinds.get(r),)
    for x in act:
        cls = classify_dependency(a, x) if preserve_classes else None
        labels["act", x] = (is_void_ref(x), cls)
    for t in trn:
        labels["trn", t] = (is_void_ref(t),)
    return Structure(
        sorts={"rel": rel, "act": sorted(act), "trn": sorted(trn)},
        labels=labels,
        relations={
            "react": (("trn", "act"), frozenset(react)),
            "proact": (("rel", "act"), frozenset(proact)),
            "combact": (("trn", "rel", "act"), frozenset(combact)),
        },
    )


def _signature(s: Structure, sort: str, x: str) -> tuple:
    degs = []
    for name in sorted(s.relations):
        sorts, tuples = s.relations[name]
        for pos, srt in enumerate(sorts):
            if srt == sort:
                degs.append(sum(1 for t in tuples if t[pos] == x))
    return (s.labels[sort, x], tuple(degs))


def find_isomorphism(sa: Structure, sb: Structure) -> dict[str, dict[str, str]] | None:
    """Backtracking search with degree/label pruning; returns maps per sort or None."""
    for sort in sa.sorts:
        if len(sa.sorts[sort]) != len(sb.sorts[sort]):
            return None
    for name, (_, ta) in sa.relations.items():
        if len(ta) != len(sb.relations[name][1]):
            return None
    sig_b: dict[tuple, list[str]] = {}
    for sort, xs in sb.sorts.items():
        for y in xs:
            sig_b.setdefault((sort, _signature(sb, sort, y)), []).append(y)
    variables = []
    for sort, xs in sa.sorts.items():
        for x in xs:
            sig = _signature(sa, sort, x)
            cands = sig_b.get((sort, sig))
            if not cands or len(cands) != sum(
                    1 for z in xs if _signature(sa, sort, z) == sig):
                return None
            variables.append((sort, x, cands))
    # most constrained first, then by involvement
    variables.sort(key=lambda v: (len(v[2]), -sum(v[0] in s for s, _ in sa.relations.values()), v[0], v[1]))

    # tuples of A indexed by each element they mention
    touching: dict[tuple[str, str], list[tuple[str, tuple]]] = {}
    for name, (sorts, tuples) in sa.relations.items():
        for t in tuples:
            for srt, x in zip(sorts, t):
                touching.setdefault((srt, x), []).append((name, t))

    maps: dict[str, dict[str, str]] = {s: {} for s in sa.sorts}
    used: dict[str, set[str]] = {s: set() for s in sa.sorts}

    def consistent(sort, x) -> bool:
        for name, t in touching.get((sort, x), ()):
            sorts, _ = sa.relations[name]
            image = []
            for srt, e in zip(sorts, t):
                if e not in maps[srt]:
                    break
                image.append(maps[srt][e])
            else:
                if tuple(image) not in sb.relations[name][1]:
                    return False
        return True

    def search(i: int) -> bool:
        if i == len(variables):
            return True
        sort, x, cands = variables[i]
        for y in cands:
            if y in used[sort]:
                continue
            maps[sort][x] = y
            used[sort].add(y)
            if consistent(sort, x) and search(i + 1):
                return True
            del maps[sort][x]
            used[sort].discard(y)
        return False

    return {s: dict(m) for s, m in maps.items()} if search(0) else None


def _iso(a: ActorSpec, b: ActorSpec, scope: str, preserve_classes: bool) -> ComponentIsomorphism | None:
    found = find_isomorphism(actor_structure(a, scope, preserve_classes),
                             actor_structure(b, scope, preserve_classes))
    if found is None:
        return None
    return ComponentIsomorphism(found["rel"], found["act"], found["trn"], scope)


def homological(a: ActorSpec, b: ActorSpec, preserve_classes: bool = False) -> ComponentIsomorphism | None:
    """A structural isomorphism between the actors, or None."""
    return _iso(a, b, "structural", preserve_classes)


def dyn_homological(a: ActorSpec, b: ActorSpec, preserve_classes: bool = False) -> ComponentIsomorphism | None:
    """An isomorphism of the (void-normalized) action components, or None."""
    return _iso(a, b, "dynamic", preserve_classes)


def related(a: ActorSpec, b: ActorSpec, relation: str, preserve_classes: bool = False) -> bool:
    if relation == "identical":
        return identical(a, b)
    if relation == "dyn_equivalent":
        return dyn_equivalent(a, b)
    if relation == "homological":
        return homological(a, b, preserve_classes) is not None
    if relation == "dyn_homological":
        return dyn_homological(a, b, preserve_classes) is not None
    raise ValueError(f"unknown relation {relation!r}")


# -- classification ------------------------------------------------------------------

COMMUNICATION_CLASSES = ("closed", "inactive", "non_receptive", "open", "undemanding", "active", "receptive")


@dataclass(frozen=True)
class ClassificationReport:
    behavioral: str  # primitive | automatic | general
    structural: frozenset[str]  # subset of prime, primitive, composite, compound
    communication: frozenset[str]
    primary: bool

    def lattice_violations(self, who: str = "") -> list[Violation]:
        c = self.communication
        rules = [
            ("Lemma3.8", {"closed"}, "inactive"),
            ("Lemma3.9", {"closed"}, "non_receptive"),
            ("Lemma3.10", {"non_receptive", "inactive"}, "closed"),
            ("Lemma3.11", {"open"}, "active"),
            ("Lemma3.12", {"receptive", "active"}, "open"),
            ("Lemma3.13", {"inactive"}, "undemanding"),
            ("Cor3.3", {"closed"}, "undemanding"),
        ]
        out = [Violation(law, f"{who}: {sorted(pre)} without {post}", (who,))
               for law, pre, post in rules if pre <= c and post not in c]
        if self.behavioral == "primitive" and not is_behaviorally_automatic(self.behavioral):
            out.append(Violation("Cor3.1", f"{who}: primitive actor not automatic", (who,)))
        return out


def behavioral_class(actor: ActorSpec) -> str:
    """primitive if every proper action is primitive, automatic if every proper
    action is primitive or automatic, general otherwise."""
    classes = {classify_dependency(actor, x) for x in actor.proper_actions()}
    if classes <= {"primitive"}:
        return "primitive"
    if all(is_automatic_class(c) for c in classes):
        return "automatic"
    return "general"


def is_behaviorally_automatic(cls: str) -> bool:
    return cls in ("primitive", "automatic")


def structural_classes(env: Environment, name: str) -> frozenset[str]:
    parts = env.actor(name).components
    actor_parts = {p for p in parts if p in env.actors}
    out = set()
    if not parts:
        out.add("prime")
    else:
        out.add("composite")
    if actor_parts:
        out.add("compound")
    else:
        out.add("primitive")
    return frozenset(out)


def communication_classes(env: Environment, name: str) -> frozenset[str]:
    actor = env.actor(name)
    sends = [env.action(x) for x in actor.act if not is_void_ref(x)]
    sends = [x for x in sends if x.message == "send"]
    receives = [t for t in actor.trn if not is_void_ref(t) and env.action(t).message == "receive"]
    active, receptive = bool(sends), bool(receives)
    out = {"active" if active else "inactive", "receptive" if receptive else "non_receptive"}
    if not active and not receptive:
        out.add("closed")
    if active and receptive:
        out.add("open")
    if not any(x.request for x in sends):
        out.add("undemanding")
    return frozenset(out)


def classify(actor: ActorSpec | str, env: Environment) -> ClassificationReport:
    name = actor if isinstance(actor, str) else actor.name
    spec = env.actor(name)
    return ClassificationReport(
        behavioral=behavioral_class(spec),
        structural=structural_classes(env, name),
        communication=communication_classes(env, name),
        primary=is_primary(env, name),
    )


def check_preservation(pairs: Iterable[tuple[ActorSpec, ActorSpec, str]]) -> list[Violation]:
    """For each related pair, behavioral primitiveness and automaticity must agree.

    Homology variants are evaluated with class-preserving witnesses.
    """
    law = {"dyn_equivalent": ("Prop3.26", "Prop3.27"), "homological": ("Prop3.28", "Prop3.29"),
           "dyn_homological": ("Prop3.30", "Prop3.31"), "identical": ("Lemma3.1", "Lemma3.1")}
    out = []
    for a, b, rel in pairs:
        if not related(a, b, rel, preserve_classes=True):
            continue
        ca, cb = behavioral_class(a), behavioral_class(b)
        prim_law, auto_law = law[rel]
        if (ca == "primitive") != (cb == "primitive"):
            out.append(Violation(prim_law, f"{rel} pair {a.name}/{b.name}: {ca} vs {cb}", (a.name, b.name)))
        if is_behaviorally_automatic(ca) != is_behaviorally_automatic(cb):
            out.append(Violation(auto_law, f"{rel} pair {a.name}/{b.name}: {ca} vs {cb}", (a.name, b.name)))
    return out


def check_modeling_consequences(env: Environment) -> list[Violation]:
    if not env.laws.MA:
        raise ConfigurationError("the Modeling Axiom is not asserted for this environment")
    out = []
    for name in env.actors:
        for part in sorted(descendants(env, name) - set(env.actors)):
            out.append(Violation("Cor3.2", f"part {part!r} of {name} is not modeled by an actor", (name, part)))
        s = structural_classes(env, name)
        if "primitive" in s and "prime" not in s:
            out.append(Violation("Prop3.33a", f"{name} is structurally primitive but not prime", (name,)))
        if "composite" in s and "compound" not in s:
            out.append(Violation("Prop3.33b", f"{name} is structurally composite but not compound", (name,)))
    return out
