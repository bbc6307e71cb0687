"""Reference environments and event sets used by the tests, demos and shipped ``.sam`` files.

Each ``*_doc`` function returns a :class:`~sysactor.spec_io.SpecDocument`;
:func:`write_all` regenerates the ``fixtures/`` directory from them.
"""

from __future__ import annotations

from pathlib import Path

from .actions import CompositionOp, complement_operator, receive, send
from .core import ActorSpec, Environment, LawConfig, RelationItem
from .engine import SimConfig
from .spec_io import SpecDocument, serialize_spec
from .temporal import Clock, ClockMap, EventRecord, TimeSet


def _ev(eid, lo_hi, actor="X", action="happen", clock="E", deps=()):
    pieces = lo_hi if isinstance(lo_hi[0], tuple) else (lo_hi,)
    return EventRecord(eid, actor, action, TimeSet(clock, pieces), frozenset(deps), "initial")


# -- temporal counterexamples --------------------------------------------------------

def triple_events() -> dict[str, EventRecord]:
    """E1=[0,3], E2=[2,5], E3=[4,7] and the two-piece F3=[0,1]u[4,7]."""
    return {
        "E1": _ev("E1", (0, 3)),
        "E2": _ev("E2", (2, 5)),
        "E3": _ev("E3", (4, 7)),
        "F3": _ev("F3", ((0, 1), (4, 7))),
    }


def strict_chain_events() -> dict[str, EventRecord]:
    """P3=[0,2], P2=[2,4], P1=[4,6]: each strictly after the previous one."""
    return {"P3": _ev("P3", (0, 2)), "P2": _ev("P2", (2, 4)), "P1": _ev("P1", (4, 6))}


def automaton_run_events(n: int = 4) -> list[EventRecord]:
    """Unit-length transitions of an automaton run, back to back."""
    return [_ev(f"T{i}", (i, i + 1), action="step") for i in range(n)]


def triple_doc() -> SpecDocument:
    observer = ActorSpec("X", act={"happen", "step"})
    env = Environment.of([observer], name="E", clocks=(Clock("E"),))
    events = list(triple_events().values()) + list(strict_chain_events().values())
    return SpecDocument(env, SimConfig(), events)


# -- acquaintances and messaging --------------------------------------------------------

def two_actor_env(receiver_listens: bool = True) -> Environment:
    """A sends one messenger to B when its relation ``ready`` holds; B acknowledges."""
    sab, rab = send("A", "B").id, receive("A", "B").id
    a = ActorSpec("A", rel={RelationItem("ready", "property", ("A",))}, act={sab},
                  proact={("ready", sab)}, facq=("B",))
    b = ActorSpec("B", act={"ack"}, trn={rab}, react={(rab, "ack")},
                  bacq=("A",) if receiver_listens else ())
    return Environment.of([a, b], name="E",
                          clocks=(Clock("cA", "A"), Clock("cB", "B")),
                          sync=(ClockMap("cA", "cB", 1, 0),),
                          laws=LawConfig(CA=receiver_listens, RM=receiver_listens))


def two_actor_doc() -> SpecDocument:
    return SpecDocument(two_actor_env(), SimConfig(seed=7))


def ca_broken_doc() -> SpecDocument:
    """facq(A)={B} while bacq(B) is empty."""
    a = ActorSpec("A", facq=("B",))
    b = ActorSpec("B")
    return SpecDocument(Environment.of([a, b], name="E", laws=LawConfig(CA=False)))


def three_actor_env() -> Environment:
    """A messages B; B either forwards to C or rests; C either logs or does not.

    Clocks: t_B = t_A + 1 and t_C = 2 t_B.
    """
    sab, rab = send("A", "B").id, receive("A", "B").id
    sbc, rbc = send("B", "C").id, receive("B", "C").id
    a = ActorSpec("A", rel={RelationItem("start", "property", ("A",))}, act={sab},
                  proact={("start", sab)}, facq=("B",))
    b = ActorSpec("B", act={sbc, "rest"}, trn={rab}, react={(rab, sbc), (rab, "rest")},
                  facq=("C",), bacq=("A",))
    c = ActorSpec("C", act={"log", "~log"}, trn={rbc}, react={(rbc, "log"), (rbc, "~log")}, bacq=("B",))
    return Environment.of([a, b, c], name="E",
                          clocks=(Clock("cA", "A"), Clock("cB", "B"), Clock("cC", "C")),
                          sync=(ClockMap("cA", "cB", 1, 1), ClockMap("cB", "cC", 2, 0)))


def three_actor_doc() -> SpecDocument:
    return SpecDocument(three_actor_env(), SimConfig(seed=1, mode="enumerate_all"))


# -- void actions ------------------------------------------------------------------

def run_walk_stand_operator() -> CompositionOp:
    return complement_operator("L", ("run", "walk", "stand"))


def ea_off_env() -> Environment:
    person = ActorSpec("Person", act={"run", "walk", "stand"})
    return Environment.of([person], name="E", operators={"L": run_walk_stand_operator()},
                          laws=LawConfig(EA=False))


def ea_off_doc() -> SpecDocument:
    return SpecDocument(ea_off_env())


def seq_operator() -> CompositionOp:
    return CompositionOp("seq", 2, ea_compliant=True)


# -- automata --------------------------------------------------------------------

def parity_automaton(name: str, letters=("0", "1"), states=("even", "odd")) -> ActorSpec:
    """Deterministic automaton counting the second letter modulo 2.

    Inputs are transactions, transitions are actions and the current state is
    a relation; a transition depends on the input and the state jointly.
    """
    keep, flip = letters
    s0, s1 = states
    t = {(keep, s0): f"{s0}>{s0}", (keep, s1): f"{s1}>{s1}",
         (flip, s0): f"{s0}>{s1}", (flip, s1): f"{s1}>{s0}"}
    return ActorSpec(
        name,
        rel={RelationItem(s0, "property", (name,)), RelationItem(s1, "property", (name,))},
        act=set(t.values()),
        trn=set(letters),
        combact={(x, s, a) for (x, s), a in t.items()},
        tentative={s1},
    )


def one_state_automaton(name: str = "Mono", letters=("0", "1")) -> ActorSpec:
    """A single state ``s``: every input triggers the same self-transition."""
    return ActorSpec(name, act={"s>s"}, trn=set(letters), react={(x, "s>s") for x in letters})


def automata_env() -> Environment:
    return Environment.of([parity_automaton("P01"), parity_automaton("Pab", ("a", "b"), ("even", "odd")),
                           one_state_automaton()], name="E")


def automata_doc() -> SpecDocument:
    return SpecDocument(automata_env())


def classify_env() -> Environment:
    """A receptor (input, no output), a generator (output, no input), their
    source and sink, and a closed one-state automaton."""
    rcv, gen = receive("Src", "Receptor").id, send("Generator", "Sink").id
    src = ActorSpec("Src", act={send("Src", "Receptor").id, "idle"}, facq=("Receptor",),
                    rel={RelationItem("on", "property", ("Src",))},
                    proact={("on", send("Src", "Receptor").id), ("on", "idle")})
    receptor = ActorSpec("Receptor", act={"q0>q1", "q1>q1"}, trn={rcv},
                         react={(rcv, "q0>q1"), (rcv, "q1>q1")}, bacq=("Src",))
    generator = ActorSpec("Generator", rel={RelationItem("tick", "property", ("Generator",))},
                          act={gen}, proact={("tick", gen)}, facq=("Sink",))
    sink = ActorSpec("Sink", trn={receive("Generator", "Sink").id}, bacq=("Generator",))
    return Environment.of([src, receptor, generator, sink, one_state_automaton()], name="E")


def classify_doc() -> SpecDocument:
    return SpecDocument(classify_env())


def cam_universe_env() -> tuple[Environment, frozenset[str], dict[str, str]]:
    """Two computational actors exchanging a message, with the message itself
    modeled as a messenger actor.  Returns (env, domain objects, model map)."""
    s, m = send("Alice", "Msg1").id, send("Msg1", "Bob").id
    alice = ActorSpec("Alice", act={s}, rel={RelationItem("has_news", "property", ("Alice",))},
                      proact={("has_news", s)}, facq=("Msg1",))
    msg = ActorSpec("Msg1", act={m}, trn={receive("Alice", "Msg1").id},
                    react={(receive("Alice", "Msg1").id, m)}, facq=("Bob",), bacq=("Alice",))
    bob = ActorSpec("Bob", act={"read"}, trn={receive("Msg1", "Bob").id},
                    react={(receive("Msg1", "Bob").id, "read")}, bacq=("Msg1",))
    env = Environment.of([alice, msg, bob], name="E", laws=LawConfig(MA=True))
    objects = frozenset({"alice", "bob", "message-1"})
    return env, objects, {"alice": "Alice", "bob": "Bob", "message-1": "Msg1"}


def cam_universe_doc() -> SpecDocument:
    env, objects, model = cam_universe_env()
    return SpecDocument(env, SimConfig(), [], objects, model)


DOCUMENTS = {
    "triple": triple_doc,
    "two-actor": two_actor_doc,
    "three-actor": three_actor_doc,
    "ca-broken": ca_broken_doc,
    "ea-off": ea_off_doc,
    "automata": automata_doc,
    "classify": classify_doc,
    "cam-universe": cam_universe_doc,
}


def write_all(directory: str | Path) -> list[Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    out = []
    for name, make in DOCUMENTS.items():
        path = directory / f"{name}.sam"
        path.write_text(serialize_spec(make()), encoding="utf-8")
        out.append(path)
    return out


if __name__ == "__main__":
    import sys

    for p in write_all(sys.argv[1] if len(sys.argv) > 1 else "fixtures"):
        print(p)
