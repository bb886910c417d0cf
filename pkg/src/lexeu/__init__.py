"""Lexicographic expected-utility models over finite state spaces.

A model carries a descending hierarchy of probability levels, each with its
own support, measure, and utility.  Acts are compared by the first level at
which their expected utilities differ; conditioning, induced lotteries,
axiom checking, and exact model synthesis from preference tables build on
that comparison.
"""
from .acts import Act, OutcomeSpace
from .axioms import AxiomReport, AxiomStatus, SuiteReport, Witness, check_all, check_axiom
from .conditioning import (
    ConditioningVerdict,
    ObsClass,
    ObservabilityEntry,
    ObservabilityReport,
    fineness_holds,
    observability_check,
    savage_conditional,
    strong_conditional_strict,
)
from .errors import (
    AxiomPrecheckFailed,
    CapExceeded,
    IncompleteTable,
    LexeuError,
    NotNormalized,
    ParseError,
    Unrepresentable,
    ValidationError,
    VerificationFailed,
)
from .events import Event, StateSpace
from .family import ModelBackedFamily, TableBackedFamily, derive_table
from .feasibility import ConstraintSystem, FeasibilityResult, Rel, solve
from .lottery import (
    Lottery,
    act_from_lottery,
    induced_lottery,
    lottery_compare,
    mix,
    normalize_lottery,
)
from .model import GsleuModel, Level, validate_model
from .preference import (
    DEGENERATE,
    ClassPartition,
    Dominance,
    LexVerdict,
    Ordering,
    class_partition,
    dominance,
    indexed_prefer,
    is_null_at,
    level_values,
    lex_prefer,
    qual_prob_compare,
)
from .synthesis import SynthesisResult, infer_hierarchy, measure_from_order, synthesize

__all__ = [
    "Act",
    "AxiomPrecheckFailed",
    "AxiomReport",
    "AxiomStatus",
    "CapExceeded",
    "ClassPartition",
    "ConditioningVerdict",
    "ConstraintSystem",
    "DEGENERATE",
    "Dominance",
    "Event",
    "FeasibilityResult",
    "GsleuModel",
    "IncompleteTable",
    "Level",
    "LexVerdict",
    "LexeuError",
    "Lottery",
    "ModelBackedFamily",
    "NotNormalized",
    "ObsClass",
    "ObservabilityEntry",
    "ObservabilityReport",
    "Ordering",
    "OutcomeSpace",
    "ParseError",
    "Rel",
    "StateSpace",
    "SuiteReport",
    "SynthesisResult",
    "TableBackedFamily",
    "Unrepresentable",
    "ValidationError",
    "VerificationFailed",
    "Witness",
    "act_from_lottery",
    "check_all",
    "check_axiom",
    "class_partition",
    "derive_table",
    "dominance",
    "fineness_holds",
    "indexed_prefer",
    "induced_lottery",
    "infer_hierarchy",
    "is_null_at",
    "level_values",
    "lex_prefer",
    "lottery_compare",
    "measure_from_order",
    "mix",
    "normalize_lottery",
    "observability_check",
    "qual_prob_compare",
    "savage_conditional",
    "solve",
    "strong_conditional_strict",
    "synthesize",
    "validate_model",
]
