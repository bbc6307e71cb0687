"""Action terms: composition, inclusion, void actions and modalities.

Actions are immutable terms.  Their ``id`` is a canonical string
(``walk``, ``~walk``, ``seq(a,~b)``, ``SMes(A,B)``, ``T_IA``) which actors
use as an action reference; :func:`parse_ref` turns a reference back into a
term.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterable, Mapping, NamedTuple, Sequence

from .errors import ArityError, OwnershipError

if TYPE_CHECKING:
    from .core import ActorSpec

DIRECTIONS = ("internal", "external", "combined")
DURATIONS = ("singular", "regular")
ORGANIZATIONS = ("direct", "mediated", "void")
DEPENDENCIES = ("primitive", "automatic", "mediated_dep", "unclassified")

TOTAL_INACTION_ID = "T_IA"
VOID = "<void>"

_MESSAGE_RE = re.compile(r"^(SMes|Req|RMes)\(([^(),~\s]+),([^(),~\s]+)\)$")
_NAME_RE = re.compile(r"[^(),~\s]+")


@dataclass(frozen=True)
class CompositionOp:
    """An n-ary operation on actions.

    ``rules`` maps tuples of part ids to the id of the atomic action the
    composition reduces to, e.g. ``(("~run", "~walk"), "stand")``.
    An ``ea_compliant`` operator turns an all-negation composition into the
    negation of the composition of the positives.
    """

    name: str
    arity: int = 2
    ea_compliant: bool = True
    rules: tuple[tuple[tuple[str, ...], str], ...] = ()

    def __post_init__(self):
        if self.arity < 1:
            raise ValueError(f"operator {self.name}: arity must be >= 1")
        rules = tuple((tuple(k), r) for k, r in self.rules)
        object.__setattr__(self, "rules", rules)
        for key, _ in rules:
            if len(key) != self.arity:
                raise ArityError(f"operator {self.name}: rule {key} has wrong arity")
            if self.ea_compliant and all(is_void_ref(k) for k in key):
                raise ValueError(f"operator {self.name}: an EA-compliant operator cannot reduce {key}")

    def rule_for(self, part_ids: tuple[str, ...]) -> str | None:
        for key, result in self.rules:
            if key == part_ids:
                return result
        return None


def complement_operator(name: str, universe: Sequence[str]) -> CompositionOp:
    """Binary operator that, given two inactions, infers the one remaining action.

    Over ``("run", "walk", "stand")`` it maps ``(~run, ~walk)`` to ``stand``.
    Not EA-compliant by construction.
    """
    universe = list(universe)
    rules = []
    for x in universe:
        for y in universe:
            rest = [u for u in universe if u not in (x, y)]
            if x != y and len(rest) == 1:
                rules.append(((f"~{x}", f"~{y}"), rest[0]))
    return CompositionOp(name, 2, ea_compliant=False, rules=tuple(rules))


@dataclass(frozen=True)
class Action:
    kind: str  # atomic | composed | negation | total_inaction
    name: str = ""
    op: CompositionOp | None = None
    parts: tuple["Action", ...] = ()
    direction: str = "internal"
    duration_kind: str = "regular"
    organization: str = "direct"
    message: str | None = None  # "send" | "receive"
    peers: tuple[str, ...] = ()  # (sender, receiver) for messaging actions
    request: bool = False
    dependency: str = field(default="unclassified", compare=False)

    def __post_init__(self):
        if self.kind not in ("atomic", "composed", "negation", "total_inaction"):
            raise ValueError(f"unknown action term kind {self.kind!r}")
        if self.direction not in DIRECTIONS:
            raise ValueError(f"unknown direction {self.direction!r}")
        if self.duration_kind not in DURATIONS:
            raise ValueError(f"unknown duration kind {self.duration_kind!r}")
        if self.organization not in ORGANIZATIONS:
            raise ValueError(f"unknown organization {self.organization!r}")
        if self.kind in ("negation", "total_inaction") and self.organization != "void":
            raise ValueError("inactions must have void organization")
        if self.kind == "composed" and not self.parts:
            raise ValueError("a composed action needs at least one part")

    @property
    def id(self) -> str:
        if self.kind == "atomic":
            return self.name
        if self.kind == "negation":
            return "~" + self.parts[0].id
        if self.kind == "total_inaction":
            return TOTAL_INACTION_ID
        return f"{self.op.name}({','.join(p.id for p in self.parts)})"

    @property
    def is_void(self) -> bool:
        return self.organization == "void"

    @property
    def positive(self) -> "Action":
        """The action whose inaction this is (itself for non-negations)."""
        return self.parts[0] if self.kind == "negation" else self

    def __str__(self) -> str:
        return self.id


TOTAL_INACTION = Action("total_inaction", organization="void", duration_kind="regular")


def atomic(name: str, direction: str = "internal", duration: str = "regular",
           organization: str = "direct") -> Action:
    if not _NAME_RE.fullmatch(name) or name == TOTAL_INACTION_ID:
        raise ValueError(f"invalid atomic action name {name!r}")
    return Action("atomic", name, direction=direction, duration_kind=duration, organization=organization)


def send(sender: str, receiver: str, request: bool = False) -> Action:
    """SMes(sender, receiver); a ``Req`` action when ``request`` is set."""
    head = "Req" if request else "SMes"
    return Action("atomic", f"{head}({sender},{receiver})", direction="external",
                  duration_kind="singular", message="send", peers=(sender, receiver), request=request)


def receive(sender: str, receiver: str) -> Action:
    """RMes(sender, receiver): the transaction of ``receiver`` getting a messenger."""
    return Action("atomic", f"RMes({sender},{receiver})", direction="internal",
                  duration_kind="singular", message="receive", peers=(sender, receiver))


def is_void_ref(ref: str) -> bool:
    """Void-ness of a canonical action id."""
    return ref.startswith("~") or ref == TOTAL_INACTION_ID


def negate(a: Action) -> Action:
    """Inaction of ``a``; double negation cancels."""
    a = normalize(a)
    if a.kind == "total_inaction":
        raise ValueError("the total inaction has no negation")
    if a.kind == "negation":
        return a.parts[0]
    return Action("negation", parts=(a,), direction=a.direction,
                  duration_kind=a.duration_kind, organization="void")


def _combined_direction(parts: Iterable[Action]) -> str:
    dirs = {p.direction for p in parts}
    return dirs.pop() if len(dirs) == 1 else "combined"


def compose(op: CompositionOp, parts: Sequence[Action],
            catalog: Mapping[str, Action] | None = None) -> Action:
    """Apply ``op`` to ``parts`` and normalize.

    Reduction rules of the operator are tried first.  With an EA-compliant
    operator an all-negation composition becomes the negation of the
    composition of the positives; mixing in the total inaction gives the total
    inaction.
    """
    parts = tuple(normalize(p) for p in parts)
    if len(parts) != op.arity:
        raise ArityError(f"operator {op.name} takes {op.arity} parts, got {len(parts)}")
    reduced = op.rule_for(tuple(p.id for p in parts))
    if reduced is not None:
        if catalog and reduced in catalog:
            return catalog[reduced]
        return atomic(reduced, direction=_combined_direction(parts))
    if op.ea_compliant and all(p.is_void for p in parts):
        if any(p.kind == "total_inaction" for p in parts):
            return TOTAL_INACTION
        return negate(compose(op, [p.parts[0] for p in parts], catalog))
    duration = "singular" if all(p.duration_kind == "singular" for p in parts) else "regular"
    return Action("composed", op=op, parts=parts, direction=_combined_direction(parts),
                  duration_kind=duration, organization="mediated")


def normalize(a: Action) -> Action:
    """Bring a hand-built term into normal form (idempotent)."""
    if a.kind == "negation":
        inner = normalize(a.parts[0])
        if inner.kind == "negation":
            return inner.parts[0]
        if inner is a.parts[0]:
            return a
        return negate(inner)
    if a.kind == "composed":
        parts = tuple(normalize(p) for p in a.parts)
        if parts == a.parts and not (a.op.ea_compliant and all(p.is_void for p in parts)) \
                and a.op.rule_for(tuple(p.id for p in parts)) is None:
            return a
        return compose(a.op, parts)
    return a


def parse_ref(ref: str, operators: Mapping[str, CompositionOp] | None = None,
              catalog: Mapping[str, Action] | None = None) -> Action:
    """Turn a canonical id back into a term.

    Atomic names take their attributes from ``catalog`` when present and
    default to an internal regular direct action.
    """
    operators = operators or {}
    catalog = catalog or {}
    pos = 0

    def term() -> Action:
        nonlocal pos
        if ref.startswith("~", pos):
            pos += 1
            return negate(term())
        m = _NAME_RE.match(ref, pos)
        if not m:
            raise ValueError(f"bad action reference {ref!r} at offset {pos}")
        name = m.group(0)
        pos = m.end()
        if not ref.startswith("(", pos):
            if name == TOTAL_INACTION_ID:
                return TOTAL_INACTION
            return catalog.get(name) or atomic(name)
        pos += 1
        args = [term()]
        while ref.startswith(",", pos):
            pos += 1
            args.append(term())
        if not ref.startswith(")", pos):
            raise ValueError(f"unclosed '(' in action reference {ref!r}")
        pos += 1
        if name in ("SMes", "Req", "RMes") and len(args) == 2 and all(x.kind == "atomic" for x in args):
            full = f"{name}({args[0].id},{args[1].id})"
            if full in catalog:
                return catalog[full]
            if name == "RMes":
                return receive(args[0].id, args[1].id)
            return send(args[0].id, args[1].id, request=name == "Req")
        if name not in operators:
            raise ValueError(f"unknown operator {name!r} in {ref!r}")
        return compose(operators[name], args, catalog)

    out = term()
    if pos != len(ref):
        raise ValueError(f"trailing text in action reference {ref!r}")
    return out


def subterms(a: Action) -> set[Action]:
    """All terms reachable through composition, stopping at negations."""
    out = {a}
    if a.kind == "composed":
        for p in a.parts:
            out |= subterms(p)
    return out


def includes(a: Action, b: Action) -> bool:
    """Whether performing ``a`` includes performing ``b`` (``b`` is a part of ``a``).

    Reflexive.  Inactions follow the antitone law (``~x`` includes ``~y``
    when ``y`` includes ``x``) and the total inaction includes every
    inaction.  A non-negated ``a`` includes ``~y`` when some part of ``y``
    includes ``~a``: doing ``a`` rules out any composition that requires not
    doing ``a``.  Sub-term search does not descend into negations.
    """
    if a == b:
        return True
    if a.kind == "total_inaction":
        return b.is_void and b.kind in ("negation", "total_inaction")
    if b.kind == "total_inaction":
        return a.kind == "composed" and any(includes(p, b) for p in a.parts)
    if a.kind == "negation":
        return b.kind == "negation" and includes(b.parts[0], a.parts[0])
    if a.kind == "composed" and any(includes(p, b) for p in a.parts):
        return True
    if b.kind == "negation" and b.parts[0].kind == "composed":
        na = negate(a)
        return any(includes(q, na) for q in b.parts[0].parts)
    return False


# -- modalities ----------------------------------------------------------------------

POSITIVE_MODALITIES = ("possible", "tolerable", "permitted", "performed")
NEGATIVE_MODALITIES = ("impossible", "intolerable", "prohibited", "not_performed")
NEUTRAL_MODALITIES = ("unknown", "unidentified", "unspecified", "indefinite")
MODALITIES = POSITIVE_MODALITIES + NEGATIVE_MODALITIES + NEUTRAL_MODALITIES
CONTRARIES = dict(zip(POSITIVE_MODALITIES, NEGATIVE_MODALITIES))


@dataclass(frozen=True, order=True)
class ModalityAssertion:
    action: str
    modality: str

    def __post_init__(self):
        if self.modality not in MODALITIES:
            raise ValueError(f"unknown modality {self.modality!r}")


class Closure(NamedTuple):
    assertions: frozenset[ModalityAssertion]
    contradictions: list[tuple[str, str, str]]  # (action, positive, negative)


def modality_closure(assertions: Iterable[ModalityAssertion]) -> Closure:
    by_action: dict[str, set[str]] = {}
    for m in assertions:
        by_action.setdefault(m.action, set()).add(m.modality)
    for mods in by_action.values():
        changed = True
        while changed:
            before = len(mods)
            if "unknown" in mods:
                mods.add("unidentified")
            if "unidentified" in mods:
                mods.add("unspecified")
            if "performed" in mods:
                mods.add("possible")
            if {"unknown", "possible", "permitted"} <= mods:
                mods.add("not_performed")
            changed = len(mods) != before
    closed = frozenset(ModalityAssertion(a, m) for a, ms in by_action.items() for m in ms)
    contradictions = sorted(
        (a, pos, neg) for a, ms in by_action.items() for pos, neg in CONTRARIES.items()
        if pos in ms and neg in ms
    )
    return Closure(closed, contradictions)


# -- combined reaction/proaction ---------------------------------------------------

def build_combact(actor: "ActorSpec") -> frozenset[tuple[tuple[str, str], str]]:
    """Unify reactions and proactions into one relation over (transaction, relation) pairs.

    Reactions sit on the void relation axis, proactions on the void
    transaction axis; joint entries of the actor fill both axes.
    """
    out = {((t, VOID), a) for t, a in actor.react}
    out |= {((VOID, r), a) for r, a in actor.proact}
    out |= {((t, r), a) for t, r, a in actor.combact}
    return frozenset(out)


def classify_dependency(actor: "ActorSpec", a: Action | str) -> str:
    """primitive, automatic or unclassified; an inaction shares its action's class."""
    ref = a.id if isinstance(a, Action) else a
    base = ref[1:] if ref.startswith("~") else ref
    if ref not in actor.act and base not in actor.act:
        raise OwnershipError(f"action {ref!r} is not owned by actor {actor.name!r}")
    if ref != base:
        return classify_dependency(actor, base) if base in actor.act else _axes_class(actor, ref)
    return _axes_class(actor, base)


def _axes_class(actor: "ActorSpec", ref: str) -> str:
    on_trn = any(x == ref for _, x in actor.react)
    on_rel = any(x == ref for _, x in actor.proact)
    joint = any(x == ref for _, _, x in actor.combact)
    if joint or (on_trn and on_rel):
        return "automatic"
    if on_trn or on_rel:
        return "primitive"
    return "unclassified"


def is_automatic_class(cls: str) -> bool:
    """Primitive actions embed into the combined relation and so count as automatic."""
    return cls in ("primitive", "automatic")
