"""Local clocks, multi-interval time sets and the temporal relations between events.

All endpoints are exact rationals (:class:`fractions.Fraction`).  Two events
can only be compared when their clocks are connected in the synchronization
graph; otherwise :class:`~sysactor.errors.IncomparableError` is raised.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from typing import Iterable, Sequence

from .errors import DanglingReferenceError, IncomparableError, Violation

Number = int | Fraction | str


def rational(x: Number) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings. Floats are refused."""
    if isinstance(x, float):
        raise TypeError(f"float {x!r} is not an exact time value; use 'p/q'")
    return Fraction(x)


def format_rational(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Clock:
    id: str
    owner: str | None = None


@dataclass(frozen=True)
class ClockMap:
    """Affine synchronization ``t_target = rate * t_source + offset``."""

    source: str
    target: str
    rate: Fraction = Fraction(1)
    offset: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "rate", rational(self.rate))
        object.__setattr__(self, "offset", rational(self.offset))
        if self.rate <= 0:
            raise ValueError(f"clock map {self.source}->{self.target}: rate must be positive")

    def apply(self, t: Fraction) -> Fraction:
        return self.rate * t + self.offset

    def inverse(self) -> "ClockMap":
        return ClockMap(self.target, self.source, 1 / self.rate, -self.offset / self.rate)


# an affine transform as (rate, offset)
Affine = tuple[Fraction, Fraction]
IDENTITY: Affine = (Fraction(1), Fraction(0))


def _then(first: Affine, second: Affine) -> Affine:
    return (second[0] * first[0], second[0] * first[1] + second[1])


def _adjacency(sync: Iterable[ClockMap]) -> dict[str, list[ClockMap]]:
    adj: dict[str, list[ClockMap]] = {}
    for m in sync:
        adj.setdefault(m.source, []).append(m)
        adj.setdefault(m.target, []).append(m.inverse())
    return adj


def clock_transform(source: str, target: str, sync: Iterable[ClockMap] = ()) -> Affine:
    """Compose the maps along a synchronization path from ``source`` to ``target``."""
    if source == target:
        return IDENTITY
    adj = _adjacency(sync)
    seen = {source: IDENTITY}
    queue = deque([source])
    while queue:
        c = queue.popleft()
        for m in adj.get(c, ()):
            if m.target not in seen:
                seen[m.target] = _then(seen[c], (m.rate, m.offset))
                if m.target == target:
                    return seen[target]
                queue.append(m.target)
    raise IncomparableError(f"no synchronization path from clock {source!r} to {target!r}")


def clock_components(clocks: Iterable[str], sync: Iterable[ClockMap] = ()) -> dict[str, str]:
    """Map each clock id to a representative (the least id) of its component."""
    sync = list(sync)
    adj = _adjacency(sync)
    nodes = sorted(set(clocks) | set(adj))
    rep: dict[str, str] = {}
    for start in nodes:
        if start in rep:
            continue
        comp, queue = [start], deque([start])
        rep[start] = start
        while queue:
            c = queue.popleft()
            for m in adj.get(c, ()):
                if m.target not in rep:
                    rep[m.target] = start
                    comp.append(m.target)
                    queue.append(m.target)
    return rep


def check_sync_consistency(sync: Iterable[ClockMap]) -> list[Violation]:
    """Every cycle of the synchronization graph must compose to the identity."""
    sync = list(sync)
    adj = _adjacency(sync)
    placed: dict[str, Affine] = {}
    out = []
    for root in sorted(adj):
        if root in placed:
            continue
        placed[root] = IDENTITY
        queue = deque([root])
        while queue:
            c = queue.popleft()
            for m in adj[c]:
                via = _then(placed[c], (m.rate, m.offset))
                if m.target not in placed:
                    placed[m.target] = via
                    queue.append(m.target)
                elif placed[m.target] != via:
                    out.append(Violation(
                        "sync.cycle",
                        f"maps around {c!r}->{m.target!r} do not compose to identity",
                        (c, m.target),
                    ))
    # each inconsistent edge is met from both ends
    uniq = {frozenset(v.subjects): v for v in out}
    return [uniq[k] for k in sorted(uniq, key=sorted)]


@dataclass(frozen=True)
class TimeSet:
    """A finite union of closed rational intervals on one clock, kept normalized."""

    clock: str
    pieces: tuple[tuple[Fraction, Fraction], ...] = ()

    def __post_init__(self):
        spans = sorted((rational(lo), rational(hi)) for lo, hi in self.pieces)
        merged: list[list[Fraction]] = []
        for lo, hi in spans:
            if lo > hi:
                raise ValueError(f"interval [{lo}, {hi}] has lo > hi")
            if merged and lo <= merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], hi)
            else:
                merged.append([lo, hi])
        object.__setattr__(self, "pieces", tuple((lo, hi) for lo, hi in merged))

    @classmethod
    def interval(cls, clock: str, lo: Number, hi: Number) -> "TimeSet":
        return cls(clock, ((lo, hi),))

    @classmethod
    def moment(cls, clock: str, t: Number) -> "TimeSet":
        return cls(clock, ((t, t),))

    @property
    def is_empty(self) -> bool:
        return not self.pieces

    @property
    def start(self) -> Fraction:
        return self.pieces[0][0]

    @property
    def end(self) -> Fraction:
        return self.pieces[-1][1]

    @property
    def is_momentary(self) -> bool:
        return len(self.pieces) == 1 and self.pieces[0][0] == self.pieces[0][1]

    @property
    def is_interval(self) -> bool:
        return len(self.pieces) == 1

    @property
    def span(self) -> Fraction:
        """end - start; the duration used by the strict-subsequence law."""
        return self.end - self.start

    def intersection(self, other: "TimeSet") -> "TimeSet":
        if other.clock != self.clock:
            raise ValueError("intersection needs time sets on the same clock")
        out = []
        i = j = 0
        a, b = self.pieces, other.pieces
        while i < len(a) and j < len(b):
            lo, hi = max(a[i][0], b[j][0]), min(a[i][1], b[j][1])
            if lo <= hi:
                out.append((lo, hi))
            if a[i][1] < b[j][1]:
                i += 1
            else:
                j += 1
        return TimeSet(self.clock, tuple(out))

    def transformed(self, affine: Affine, clock: str) -> "TimeSet":
        r, s = affine
        return TimeSet(clock, tuple((r * lo + s, r * hi + s) for lo, hi in self.pieces))

    def __str__(self) -> str:
        return ",".join(f"{format_rational(lo)}:{format_rational(hi)}" for lo, hi in self.pieces)

    @classmethod
    def parse(cls, clock: str, text: str) -> "TimeSet":
        """Inverse of ``str()``: ``"0/1:3/1,4/1:7/1"``."""
        if text in ("", "-"):
            return cls(clock)
        pieces = []
        for chunk in text.split(","):
            lo, _, hi = chunk.partition(":")
            pieces.append((rational(lo), rational(hi or lo)))
        return cls(clock, tuple(pieces))


def map_to_clock(ts: TimeSet, target: str, sync: Iterable[ClockMap] = ()) -> TimeSet:
    return ts.transformed(clock_transform(ts.clock, target, sync), target)


@dataclass(frozen=True)
class EventRecord:
    """An occurrence of ``action`` by ``actor`` during ``time``.

    ``kind`` is ``"initial"``, ``"action"``, ``"receive"``,
    ``"proaction:<timing>"`` or ``"reaction:<timing>"``.  Receives and
    reactions depend on exactly one event, their trigger.
    """

    id: str
    actor: str
    action: str
    time: TimeSet
    depends_on: frozenset[str] = field(default_factory=frozenset)
    kind: str = "action"

    def __post_init__(self):
        object.__setattr__(self, "depends_on", frozenset(self.depends_on))

    @property
    def clock(self) -> str:
        return self.time.clock

    @property
    def timing(self) -> str | None:
        head, _, tail = self.kind.partition(":")
        return tail if head in ("reaction", "proaction") else None

    @property
    def trigger(self) -> str | None:
        if self.kind == "receive" or self.kind.startswith("reaction"):
            if len(self.depends_on) == 1:
                return next(iter(self.depends_on))
        return None


def _aligned(events: Sequence[EventRecord], sync) -> list[TimeSet]:
    target = events[0].clock
    return [map_to_clock(e.time, target, sync) for e in events]


def comparable(e1: EventRecord, e2: EventRecord, sync: Iterable[ClockMap] = ()) -> bool:
    try:
        clock_transform(e1.clock, e2.clock, sync)
    except IncomparableError:
        return False
    return True


def causal_components(events: Iterable[EventRecord]) -> dict[str, str]:
    """Connected components of the undirected depends_on graph (event id -> representative)."""
    parent: dict[str, str] = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in events:
        find(e.id)
        for d in e.depends_on:
            a, b = find(e.id), find(d)
            if a != b:
                parent[max(a, b)] = min(a, b)
    return {x: find(x) for x in parent}


def independent(e1: EventRecord, e2: EventRecord, events: Iterable[EventRecord] = ()) -> bool:
    """Neither event reaches the other through depends_on edges, in either direction.

    ``events`` supplies intermediate events of the causal graph.
    """
    comp = causal_components([e1, e2, *events])
    return comp[e1.id] != comp[e2.id]


def concurrent(e1: EventRecord, e2: EventRecord, sync: Iterable[ClockMap] = (),
               events: Iterable[EventRecord] = ()) -> bool:
    return independent(e1, e2, events) or not comparable(e1, e2, sync)


def parallel(events: Sequence[EventRecord], sync: Iterable[ClockMap] = ()) -> bool:
    """All time sets share at least one common instant."""
    events = list(events)
    if len(events) < 2:
        return True
    sync = list(sync)
    common, *rest = _aligned(events, sync)
    for ts in rest:
        common = common.intersection(ts)
    return not common.is_empty


def strictly_parallel(e1: EventRecord, e2: EventRecord, sync: Iterable[ClockMap] = ()) -> bool:
    a, b = _aligned([e1, e2], list(sync))
    return a == b


def sequential(e1: EventRecord, e2: EventRecord, sync: Iterable[ClockMap] = ()) -> bool:
    """``e2`` is subsequent to ``e1``: it starts at or after ``e1`` ends."""
    a, b = _aligned([e1, e2], list(sync))
    return b.start >= a.end


def strictly_sequential(e1: EventRecord, e2: EventRecord, sync: Iterable[ClockMap] = ()) -> bool:
    """``e2`` starts exactly when ``e1`` ends."""
    a, b = _aligned([e1, e2], list(sync))
    return b.start == a.end


def reaction_timing_check(events: Sequence[EventRecord], sync: Iterable[ClockMap] = ()) -> list[Violation]:
    """Check each reaction against its trigger according to its timing class.

    sharp: starts with the trigger; reserved: starts exactly when the trigger
    ends; delayed: starts strictly after the trigger ends.
    """
    sync = list(sync)
    by_id = {e.id: e for e in events}
    out = []
    for e in events:
        timing = e.timing
        if timing is None or not e.kind.startswith("reaction"):
            continue
        tid = e.trigger
        if tid is None or tid not in by_id:
            raise DanglingReferenceError(f"reaction {e.id!r} has no resolvable trigger")
        t = by_id[tid]
        if not comparable(t, e, sync):
            out.append(Violation("timing", f"{e.id} and trigger {tid} are on incomparable clocks", (tid, e.id)))
            continue
        trig, reac = _aligned([t, e], sync)
        ok = {
            "sharp": reac.start == trig.start,
            "reserved": reac.start == trig.end,
            "delayed": reac.start > trig.end,
        }.get(timing)
        if ok is None:
            out.append(Violation("timing", f"{e.id}: unknown timing class {timing!r}", (e.id,)))
        elif not ok:
            out.append(Violation("timing", f"{timing} reaction {e.id} mistimed against trigger {tid}", (tid, e.id)))
    return out


# -- law checks over a set of events ------------------------------------------------

def _pairwise_comparable(triple, sync) -> bool:
    return all(comparable(a, b, sync) for a, b in combinations(triple, 2))


def temporal_law_violations(events: Sequence[EventRecord], sync: Iterable[ClockMap] = ()) -> dict[str, list[Violation]]:
    """Evaluate the transitivity and Helly-type laws on every triple of ``events``."""
    sync = list(sync)
    events = list(events)
    out: dict[str, list[Violation]] = {k: [] for k in (
        "Prop3.8", "Prop3.9", "Prop3.10", "Prop3.11", "Prop3.12", "Prop3.13", "Prop3.14")}
    comp = causal_components(events)
    dep = {(a.id, b.id): comp[a.id] == comp[b.id] for a in events for b in events}
    for x, y, z in permutations(events, 3):
        ids = (x.id, y.id, z.id)
        if dep[x.id, y.id] and dep[y.id, z.id] and not dep[x.id, z.id]:
            out["Prop3.8"].append(Violation("Prop3.8", "temporal dependence not transitive", ids))
        if comparable(x, y, sync) and comparable(y, z, sync) and not comparable(x, z, sync):
            out["Prop3.9"].append(Violation("Prop3.9", "comparability not transitive", ids))
        if not _pairwise_comparable((x, y, z), sync):
            continue
        if all(e.time.is_momentary for e in (x, y, z)):
            if parallel([x, y], sync) and parallel([y, z], sync) and not parallel([x, y, z], sync):
                out["Prop3.10"].append(Violation("Prop3.10", "momentary parallelism not transitive", ids))
        if all(e.time.is_interval for e in (x, y, z)):
            if parallel([x, y], sync) and parallel([y, z], sync) and parallel([x, z], sync) \
                    and not parallel([x, y, z], sync):
                out["Prop3.11"].append(Violation("Prop3.11", "pairwise parallel intervals lack a common point", ids))
        if strictly_parallel(x, y, sync) and strictly_parallel(y, z, sync) and not strictly_parallel(x, z, sync):
            out["Prop3.12"].append(Violation("Prop3.12", "strict parallelism not transitive", ids))
        if sequential(x, y, sync) and sequential(y, z, sync) and not sequential(x, z, sync):
            out["Prop3.13"].append(Violation("Prop3.13", "sequence not transitive", ids))
        # z strictly subsequent to y, y (positive duration) strictly subsequent to x
        if strictly_sequential(y, z, sync) and strictly_sequential(x, y, sync) \
                and _aligned([y, x], sync)[0].span > 0 and strictly_sequential(x, z, sync):
            out["Prop3.14"].append(Violation("Prop3.14", "strict subsequence passed through a positive-duration event", ids))
    return out
