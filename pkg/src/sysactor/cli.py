"""Command-line entry point.

Exit status: 0 success or pass, 1 violations found, 2 usage or parse errors.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace
from pathlib import Path

from .core import validate_environment
from .engine import check_trace, run
from .equivalence import classify, dyn_homological, homological, related
from .errors import IncomparableError, RunError, SamError, SpecError, UnknownActorError, UnknownLawError, ValidationError
from .laws import LAW_IDS, run_law_suite
from .spec_io import format_traces, parse_traces, read_spec
from .temporal import (
    comparable,
    concurrent,
    independent,
    parallel,
    sequential,
    strictly_parallel,
    strictly_sequential,
)

OK, VIOLATIONS, USAGE = 0, 1, 2

ACTOR_RELATIONS = ("identical", "dyn-equivalent", "homological", "dyn-homological")
EVENT_RELATIONS = ("parallel", "strictly-parallel", "sequential", "strictly-sequential",
                   "concurrent", "comparable", "independent")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE)


def _csv(text: str) -> list[str]:
    return [x.strip() for x in text.split(",") if x.strip()]


def _load(path: str):
    return read_spec(path, validate=False)


def cmd_validate(args, out) -> int:
    doc = _load(args.spec)
    report = validate_environment(doc.env)
    if report.ok:
        print(f"ok: {doc.env.name} ({len(doc.env.actors)} actors)", file=out)
        return OK
    for v in report:
        print(f"violation\t{v.code}\t{v.message}", file=out)
    return VIOLATIONS


def cmd_check(args, out) -> int:
    doc = _load(args.spec)
    selection = _csv(args.laws) if args.laws else "all"
    results = run_law_suite(doc.env, selection, doc.events, doc.sim,
                            doc.domain_objects or None, doc.model_map)
    failed = 0
    for r in results:
        tag = {"pass": "PASS", "fail": "FAIL", "not_applicable": "N/A"}[r.status]
        print(f"{tag}\t{r.law}" + (f"\t{r.note}" if r.note else ""), file=out)
        for w in r.witnesses:
            print(f"  witness\t{w.message}", file=out)
        failed += r.status == "fail"
    return VIOLATIONS if failed else OK


def cmd_classify(args, out) -> int:
    doc = _load(args.spec)
    names = [args.actor] if args.actor else list(doc.env.actors)
    bad = 0
    for name in names:
        rep = classify(name, doc.env)
        print(f"{name}\tbehavioral={rep.behavioral}\tstructural={','.join(sorted(rep.structural))}"
              f"\tcommunication={','.join(sorted(rep.communication))}\tprimary={str(rep.primary).lower()}", file=out)
        for v in rep.lattice_violations(name):
            print(f"  violation\t{v}", file=out)
            bad += 1
    return VIOLATIONS if bad else OK


def cmd_compare(args, out) -> int:
    doc = _load(args.spec)
    names = _csv(args.actors)
    if len(names) != 2:
        raise _UsageError("--actors takes exactly two names")
    a, b = (doc.env.actor(n) for n in names)
    rel = args.relation.replace("-", "_")
    verdict = related(a, b, rel)
    print(f"{args.relation}({a.name},{b.name}) = {str(verdict).lower()}", file=out)
    if verdict and rel in ("homological", "dyn_homological"):
        iso = (homological if rel == "homological" else dyn_homological)(a, b)
        for sort, m in (("rel", iso.rel_map), ("act", iso.act_map), ("trn", iso.trn_map)):
            for x, y in sorted(m.items()):
                print(f"  {sort}\t{x}\t->\t{y}", file=out)
    return OK


def cmd_relate(args, out) -> int:
    doc = _load(args.spec)
    by_id = {e.id: e for e in doc.events}
    ids = _csv(args.events)
    missing = [i for i in ids if i not in by_id]
    if missing:
        raise _UsageError(f"unknown event id(s): {', '.join(missing)}")
    events = [by_id[i] for i in ids]
    sync = doc.env.sync
    rel = args.relation
    if rel == "parallel":
        if len(events) < 2:
            raise _UsageError("parallel needs at least two events")
        value = parallel(events, sync)
    else:
        if len(events) != 2:
            raise _UsageError(f"{rel} relates exactly two events")
        e1, e2 = events
        value = {
            "strictly-parallel": lambda: strictly_parallel(e1, e2, sync),
            "sequential": lambda: sequential(e1, e2, sync),
            "strictly-sequential": lambda: strictly_sequential(e1, e2, sync),
            "concurrent": lambda: concurrent(e1, e2, sync, doc.events),
            "comparable": lambda: comparable(e1, e2, sync),
            "independent": lambda: independent(e1, e2, doc.events),
        }[rel]()
    print(f"{rel}({','.join(ids)}) = {str(value).lower()}", file=out)
    return OK


def _seed(args, doc) -> int:
    if args.seed is not None:
        return args.seed
    env_seed = os.environ.get("SAM_SEED")
    if env_seed:
        try:
            return int(env_seed)
        except ValueError:
            raise _UsageError(f"SAM_SEED is not an integer: {env_seed!r}") from None
    return doc.sim.seed


def cmd_simulate(args, out) -> int:
    doc = _load(args.spec)
    sim = replace(doc.sim, seed=_seed(args, doc))
    if args.mode:
        sim = replace(sim, mode=args.mode.replace("-", "_"))
    if args.max_steps:
        sim = replace(sim, max_steps=args.max_steps)
    try:
        result = run(doc.env, sim, doc.events)
    except RunError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.witness is not None:
            print(f"  witness\t{exc.witness}", file=sys.stderr)
        return VIOLATIONS
    text = format_traces(result)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        n = len(result) if isinstance(result, list) else 1
        print(f"wrote {n} trace(s) to {args.out}", file=out)
    else:
        out.write(text)
    return OK


def cmd_trace_check(args, out) -> int:
    doc = _load(args.spec)
    traces = parse_traces(Path(args.trace).read_text(encoding="utf-8"))
    bad = 0
    for t in traces:
        violations = check_trace(t, doc.env)
        status = "FAIL" if violations else "PASS"
        print(f"{status}\tbranch={t.branch_id}\tevents={len(t.events)}", file=out)
        for v in violations:
            print(f"  violation\t{v}", file=out)
        bad += bool(violations)
    return VIOLATIONS if bad else OK


class _UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sam", description="Check, classify and simulate actor environments (.sam files).")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("validate", help="check structural invariants")
    s.add_argument("spec")
    s.set_defaults(fn=cmd_validate)

    s = sub.add_parser("check", help="run law checks")
    s.add_argument("spec")
    s.add_argument("--laws", help=f"comma-separated law ids or 'all' (known: {', '.join(LAW_IDS)})")
    s.set_defaults(fn=cmd_check)

    s = sub.add_parser("classify", help="behavioral, structural and communication classes")
    s.add_argument("spec")
    s.add_argument("--actor")
    s.set_defaults(fn=cmd_classify)

    s = sub.add_parser("compare", help="relate two actors")
    s.add_argument("spec")
    s.add_argument("--actors", required=True, help="A,B")
    s.add_argument("--relation", required=True, choices=ACTOR_RELATIONS)
    s.set_defaults(fn=cmd_compare)

    s = sub.add_parser("relate", help="temporal relation between events of the document")
    s.add_argument("spec")
    s.add_argument("--events", required=True, help="E1,E2[,E3]")
    s.add_argument("--relation", required=True, choices=EVENT_RELATIONS)
    s.set_defaults(fn=cmd_relate)

    s = sub.add_parser("simulate", help="run the engine and emit a trace file")
    s.add_argument("spec")
    s.add_argument("--seed", type=int)
    s.add_argument("--mode", choices=("sampled", "enumerate-all"))
    s.add_argument("--max-steps", type=int)
    s.add_argument("--out")
    s.set_defaults(fn=cmd_simulate)

    s = sub.add_parser("trace-check", help="verify a trace file against an environment")
    s.add_argument("spec")
    s.add_argument("trace")
    s.set_defaults(fn=cmd_trace_check)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args, out)
    except (SpecError, ValidationError, UnknownActorError, UnknownLawError, IncomparableError,
            _UsageError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except (SamError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    raise SystemExit(main())
