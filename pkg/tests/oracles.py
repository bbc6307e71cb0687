"""Independent reference computations used to cross-check the library.

Only the plain data types are borrowed from the library.  Homology is
decided by enumerating bijections, parallelism by testing every interval
endpoint, connectivity and friendship by scanning all actor pairs.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations, product

from sysactor import ActorSpec, RelationItem


def _void(ref: str) -> bool:
    return ref.startswith("~") or ref == "T_IA"


# -- homology by exhaustive enumeration ---------------------------------------------

def _view(actor, scope):
    """(sorts, labels, relations) computed straight from the actor fields."""
    if scope == "structural":
        act, trn = set(actor.act), set(actor.trn)
        react, proact, combact = set(actor.react), set(actor.proact), set(actor.combact)
        kinds = {r.id: r.kind for r in actor.rel}
        rel = set(kinds)
    else:
        act = {x for x in actor.act if not _void(x)}
        trn = set(actor.trn)
        react = {(t, x) for t, x in actor.react if not _void(x)}
        proact = {(r, x) for r, x in actor.proact if not _void(x)}
        combact = {(t, r, x) for t, r, x in actor.combact if not _void(x)}
        rel = {r for r, _ in proact} | {r for _, r, _ in combact}
        kinds = {r: None for r in rel}
    sorts = {"rel": sorted(rel), "act": sorted(act), "trn": sorted(trn)}
    labels = {("rel", r): kinds[r] for r in rel}
    labels.update({("act", x): _void(x) for x in act})
    labels.update({("trn", t): _void(t) for t in trn})
    rels = {"react": (("trn", "act"), react), "proact": (("rel", "act"), proact),
            "combact": (("trn", "rel", "act"), combact)}
    return sorts, labels, rels


def is_isomorphism(a, b, maps, scope="structural") -> bool:
    """Whether ``maps`` (sort -> dict) carries a's structure exactly onto b's."""
    sa, la, ra = _view(a, scope)
    sb, lb, rb = _view(b, scope)
    for s in sa:
        m = maps.get(s, {})
        if sorted(m) != sa[s] or sorted(m.values()) != sb[s]:
            return False
        if any(la[s, x] != lb[s, m[x]] for x in m):
            return False
    for name, (sorts, tuples) in ra.items():
        image = {tuple(maps[srt][e] for srt, e in zip(sorts, t)) for t in tuples}
        if image != rb[name][1]:
            return False
    return True


def _bijections(xs, ys, label_a, label_b):
    """Every label-preserving bijection xs -> ys."""
    for perm in permutations(ys):
        m = dict(zip(xs, perm))
        if all(label_a(x) == label_b(m[x]) for x in xs):
            yield m


def brute_force_iso(a, b, scope="structural"):
    """First isomorphism found by trying every triple of label-preserving
    bijections, or None.  The react relation is tested as soon as the trn and
    act maps are fixed; proact and combact once the rel map is fixed too."""
    sa, la, ra = _view(a, scope)
    sb, lb, rb = _view(b, scope)
    if any(len(sa[s]) != len(sb[s]) for s in sa):
        return None
    if any(len(ra[n][1]) != len(rb[n][1]) for n in ra):
        return None

    def bij(sort):
        return list(_bijections(sa[sort], sb[sort], lambda x: la[sort, x], lambda y: lb[sort, y]))

    rels, acts, trns = bij("rel"), bij("act"), bij("trn")
    for mt, ma in product(trns, acts):
        if {(mt[t], ma[x]) for t, x in ra["react"][1]} != rb["react"][1]:
            continue
        for mr in rels:
            maps = {"rel": mr, "act": ma, "trn": mt}
            if is_isomorphism(a, b, maps, scope):
                return maps
    return None


def shuffled_copy(actor, rng, name="B"):
    """Rename every element through a random bijection; void names stay void."""
    def ren(prefix, xs, void_ok):
        xs = sorted(xs)
        fresh = [f"{prefix}{i}" for i in range(len(xs))]
        rng.shuffle(fresh)
        return {x: ("~" + f if void_ok and (x.startswith("~") or x == "T_IA") else f) for x, f in zip(xs, fresh)}
    ra, aa, ta = ren("R", actor.rel_ids, False), ren("X", actor.act, True), ren("T", actor.trn, True)
    return ActorSpec(
        name, rel={RelationItem(ra[r.id], r.kind, ()) for r in actor.rel},
        act={aa[x] for x in actor.act}, trn={ta[t] for t in actor.trn},
        react={(ta[t], aa[x]) for t, x in actor.react}, proact={(ra[r], aa[x]) for r, x in actor.proact},
        combact={(ta[t], ra[r], aa[x]) for t, r, x in actor.combact})


# -- time ------------------------------------------------------------------------------

def common_point(intervals) -> bool:
    """Closed intervals share a point iff the largest start is <= the smallest end."""
    return max(lo for lo, _ in intervals) <= min(hi for _, hi in intervals)


def points_common(sets, grid) -> bool:
    """Multi-interval sets share one of the candidate points in ``grid``."""
    return any(all(any(lo <= t <= hi for lo, hi in s) for s in sets) for t in grid)


def candidate_points(sets):
    """Every endpoint; a nonempty intersection of closed unions contains one."""
    return sorted({Fraction(x) for s in sets for iv in s for x in iv})


# -- acquaintances ----------------------------------------------------------------------

def connectivity_holds(facq: dict, bacq: dict) -> bool:
    for a in facq:
        for c in facq:
            if (c in facq[a]) != (a in bacq[c]):
                return False
    return True


def friends_of(facq: dict, bacq: dict, a: str) -> set:
    return {c for c in facq if c in facq[a] and c in bacq[a]}
