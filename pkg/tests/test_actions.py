import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from sysactor import (
    TOTAL_INACTION,
    ArityError,
    CompositionOp,
    ModalityAssertion,
    atomic,
    classify_dependency,
    compose,
    includes,
    modality_closure,
    negate,
    parse_ref,
    receive,
    send,
)
from sysactor.actions import normalize
from sysactor.core import ActorSpec
from sysactor.fixtures import run_walk_stand_operator

SEQ = CompositionOp("seq", 2)
PAR = CompositionOp("par", 2)
REP = CompositionOp("rep", 1)
OPS = {"seq": SEQ, "par": PAR, "rep": REP}
atoms = st.sampled_from(["a", "b", "c", "d"]).map(atomic)


def _terms(leaves, negations):
    def extend(children):
        parts = [
            st.tuples(children, children).map(lambda p: compose(SEQ, p)),
            st.tuples(children, children).map(lambda p: compose(PAR, p)),
            children.map(lambda p: compose(REP, [p])),
        ]
        if negations:
            parts.append(children.filter(lambda x: x.kind != "total_inaction").map(negate))
        return st.one_of(*parts)
    return st.recursive(leaves, extend, max_leaves=5)


positive_terms = _terms(atoms, negations=False)
terms = _terms(atoms, negations=True)


def syntactic_parts(t):
    """Oracle: the term and everything reachable through composition."""
    out = {t.id}
    if t.kind == "composed":
        for p in t.parts:
            out |= syntactic_parts(p)
    return out


# -- terms ----------------------------------------------------------------------------

@given(terms)
def test_id_round_trip(t):
    assert parse_ref(t.id, OPS) == t


@given(terms)
def test_double_negation_cancels(t):
    assume(t.kind != "total_inaction")
    assert negate(negate(t)) == t
    assert negate(t).is_void != t.is_void


@given(terms)
def test_normalize_idempotent(t):
    assert normalize(normalize(t)) == normalize(t) == t


def test_messaging_ids():
    assert send("A", "B").id == "SMes(A,B)"
    assert send("A", "B", request=True).id == "Req(A,B)"
    assert receive("A", "B").message == "receive"
    assert parse_ref("SMes(A,B)").peers == ("A", "B")


def test_parse_errors():
    for bad in ("seq(a", "a)", "nope(a,b)", ""):
        with pytest.raises(ValueError):
            parse_ref(bad, OPS)


def test_arity_checked():
    with pytest.raises(ArityError):
        compose(SEQ, [atomic("a")])


def test_total_inaction_has_no_negation():
    with pytest.raises(ValueError):
        negate(TOTAL_INACTION)


# -- void actions ---------------------------------------------------------------------

@given(st.lists(atoms, min_size=2, max_size=2))
def test_ea_compliant_voids_compose_to_negation(parts):
    out = compose(SEQ, [negate(p) for p in parts])
    assert out.kind == "negation"
    assert out == negate(compose(SEQ, parts))


def test_non_compliant_operator_yields_proper_stand():
    L = run_walk_stand_operator()
    out = compose(L, [negate(atomic("run")), negate(atomic("walk"))])
    assert out.id == "stand" and not out.is_void


def test_ea_compliant_operator_refuses_void_rule():
    with pytest.raises(ValueError):
        CompositionOp("bad", 2, True, ((("~x", "~y"), "z"),))


def test_total_inaction_absorbs_void_composition():
    assert compose(SEQ, [TOTAL_INACTION, negate(atomic("a"))]) == TOTAL_INACTION


def test_composed_duration_and_direction():
    a = atomic("a", direction="external", duration="singular")
    b = atomic("b", direction="internal", duration="singular")
    c = compose(SEQ, [a, b])
    assert c.direction == "combined" and c.duration_kind == "singular" and c.organization == "mediated"
    assert compose(SEQ, [a, atomic("z")]).duration_kind == "regular"


# -- inclusion ------------------------------------------------------------------------

@given(positive_terms, positive_terms)
def test_inclusion_on_proper_terms_is_subterm(a, b):
    assert includes(a, b) == (b.id in syntactic_parts(a))


@given(terms, terms, terms)
def test_inclusion_transitive(a, b, c):
    if includes(a, b) and includes(b, c):
        assert includes(a, c)


@given(terms, terms)
def test_inclusion_antitone(a, b):
    assume(TOTAL_INACTION not in (a, b))
    if includes(a, b):
        assert includes(negate(b), negate(a))


@given(terms)
def test_total_inaction_includes_inactions(t):
    if t.kind == "negation":
        assert includes(TOTAL_INACTION, t)
    if t.kind == "atomic":
        assert not includes(TOTAL_INACTION, t)
        assert includes(TOTAL_INACTION, negate(t))


# -- modalities -----------------------------------------------------------------------

def test_modality_closure_derivations():
    c = modality_closure([ModalityAssertion("x", m) for m in ("unknown", "possible", "permitted")])
    mods = {m.modality for m in c.assertions}
    assert {"unidentified", "unspecified", "not_performed"} <= mods
    assert c.contradictions == []


def test_modality_contradiction_detected():
    c = modality_closure([ModalityAssertion("x", "performed"), ModalityAssertion("x", "impossible")])
    assert c.contradictions == [("x", "possible", "impossible")]


def test_unknown_modality_rejected():
    with pytest.raises(ValueError):
        ModalityAssertion("x", "likely")


# -- dependency classes ---------------------------------------------------------------

def test_dependency_classes():
    actor = ActorSpec("A", rel={"r"}, act={"p", "q", "j", "f"}, trn={"t"},
                      react={("t", "p")}, proact={("r", "q")}, combact={("t", "r", "j")})
    assert classify_dependency(actor, "p") == "primitive"
    assert classify_dependency(actor, "q") == "primitive"
    assert classify_dependency(actor, "j") == "automatic"
    assert classify_dependency(actor, "f") == "unclassified"
    assert classify_dependency(actor, "~p") == "primitive"
