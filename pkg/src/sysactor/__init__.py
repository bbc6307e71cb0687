"""Actors, environments, action algebra, local-clock time and law checks.

Modules
-------
core         actors, environments, acquaintances, rank
actions      action terms, void actions, modalities, dependency classes
temporal     clocks, time sets and relations between events
equivalence  identity, equivalence and homology of actors; classification
engine       discrete-event execution, enumeration and trace checking
laws         registry of executable law checks
spec_io      ``.sam`` documents and ``.trace`` files
"""

from .actions import (
    TOTAL_INACTION,
    Action,
    CompositionOp,
    ModalityAssertion,
    atomic,
    build_combact,
    classify_dependency,
    complement_operator,
    compose,
    includes,
    modality_closure,
    negate,
    parse_ref,
    receive,
    send,
)
from .core import (
    ActorSpec,
    Environment,
    ExtendedActorSpec,
    LawConfig,
    RelationItem,
    can_receive,
    can_send,
    check_connectivity,
    check_domain_embedding,
    check_modeling_axiom,
    extend,
    friends,
    rank_compare,
    validate_environment,
)
from .engine import SimConfig, Timing, Trace, check_trace, enumerate_all, replay, run, run_branch, run_sampled
from .equivalence import (
    ClassificationReport,
    ComponentIsomorphism,
    check_modeling_consequences,
    check_preservation,
    classify,
    dyn_equivalent,
    dyn_homological,
    homological,
    identical,
)
from .errors import (
    ArityError,
    ConfigurationError,
    DanglingReferenceError,
    DivergenceError,
    IncomparableError,
    OwnershipError,
    RunError,
    SamError,
    SpecError,
    UnknownActorError,
    UnknownLawError,
    ValidationError,
    Verdict,
    Violation,
)
from .laws import LAW_IDS, LawCheckResult, run_law_suite
from .spec_io import SpecDocument, format_traces, parse_spec, parse_traces, read_spec, serialize_spec
from .temporal import (
    Clock,
    ClockMap,
    EventRecord,
    TimeSet,
    comparable,
    concurrent,
    independent,
    map_to_clock,
    parallel,
    reaction_timing_check,
    sequential,
    strictly_parallel,
    strictly_sequential,
)

__version__ = "0.1.0"

__all__ = [
    "TOTAL_INACTION",
    "Action",
    "CompositionOp",
    "ModalityAssertion",
    "atomic",
    "build_combact",
    "classify_dependency",
    "complement_operator",
    "compose",
    "includes",
    "modality_closure",
    "negate",
    "parse_ref",
    "receive",
    "send",
    "ActorSpec",
    "Environment",
    "ExtendedActorSpec",
    "LawConfig",
    "RelationItem",
    "can_receive",
    "can_send",
    "check_connectivity",
    "check_domain_embedding",
    "check_modeling_axiom",
    "extend",
    "friends",
    "rank_compare",
    "validate_environment",
    "ClassificationReport",
    "ComponentIsomorphism",
    "check_modeling_consequences",
    "check_preservation",
    "classify",
    "dyn_equivalent",
    "dyn_homological",
    "homological",
    "identical",
    "ArityError",
    "ConfigurationError",
    "DanglingReferenceError",
    "DivergenceError",
    "IncomparableError",
    "OwnershipError",
    "RunError",
    "SamError",
    "SpecError",
    "UnknownActorError",
    "UnknownLawError",
    "ValidationError",
    "Verdict",
    "Violation",
    "Clock",
    "ClockMap",
    "EventRecord",
    "TimeSet",
    "comparable",
    "concurrent",
    "independent",
    "map_to_clock",
    "parallel",
    "reaction_timing_check",
    "sequential",
    "strictly_parallel",
    "strictly_sequential",
    "SimConfig",
    "Timing",
    "Trace",
    "check_trace",
    "enumerate_all",
    "replay",
    "run",
    "run_branch",
    "run_sampled",
    "LAW_IDS",
    "LawCheckResult",
    "run_law_suite",
    "SpecDocument",
    "format_traces",
    "parse_spec",
    "parse_traces",
    "read_spec",
    "serialize_spec",
]
