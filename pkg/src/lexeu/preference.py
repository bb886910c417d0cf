"""Preference computations induced by a model.

Indexed preference at an event compares single-level expected utilities at
the event's class; the unconditional preference compares the per-level
value sequence lexicographically along the top-event chain.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .acts import Act
from .errors import ClassMismatch, EmptyEvent, NotSubset, SpaceMismatch
from .events import Event
from .model import (
    GsleuModel,
    ZERO,
    class_of,
    conditional_measure,
    top_event_chain,
)


class Ordering(enum.Enum):
    STRICTLY_PREFER = "strictly_prefer"
    INDIFFERENT = "indifferent"
    STRICTLY_DISPREFER = "strictly_disprefer"

    def flip(self) -> "Ordering":
        if self is Ordering.STRICTLY_PREFER:
            return Ordering.STRICTLY_DISPREFER
        if self is Ordering.STRICTLY_DISPREFER:
            return Ordering.STRICTLY_PREFER
        return self

    @staticmethod
    def from_difference(d: Fraction) -> "Ordering":
        if d > 0:
            return Ordering.STRICTLY_PREFER
        if d < 0:
            return Ordering.STRICTLY_DISPREFER
        return Ordering.INDIFFERENT


class _Degenerate:
    """Verdict for preferences indexed by the empty event: every act is
    weakly preferred to every act.  A distinct value, not an error."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "DEGENERATE"


DEGENERATE = _Degenerate()


@dataclass(frozen=True)
class LexVerdict:
    ordering: Ordering
    deciding_level: int | None

    def __post_init__(self) -> None:
        strict = self.ordering is not Ordering.INDIFFERENT
        if strict != (self.deciding_level is not None):
            raise ValueError("deciding level present iff the verdict is strict")


def _check_act(m: GsleuModel, f: Act) -> None:
    if f.space != m.space or f.outcome_space != m.outcome_space:
        raise SpaceMismatch("act over different spaces than the model")


def level_eu(m: GsleuModel, k: int, a: Event, f: Act) -> Fraction:
    """Expected utility of f at level k under the conditional measure of a.

    The event must actually live at level k (its class must be k).
    """
    _check_act(m, f)
    if a.is_empty:
        raise EmptyEvent("level expected utility needs a nonempty event")
    if class_of(m, a) != k:
        raise ClassMismatch(f"event {a!r} has class {class_of(m, a)}, not {k}")
    lv = m.level(k)
    measure = conditional_measure(m, a)
    return sum(
        (measure[i] * lv.utility[f.assignment[i]] for i in a.members),
        ZERO,
    )


def level_values(m: GsleuModel, f: Act) -> tuple[Fraction, ...]:
    """Per-level expected utilities along the top-event chain.

    At chain entry k the conditional measure is exactly level k's
    probability, so this is a plain dot product per level.
    """
    _check_act(m, f)
    out = []
    for lv in m.levels:
        total = ZERO
        for i in lv.support.members:
            total += lv.prob[i] * lv.utility[f.assignment[i]]
        out.append(total)
    return tuple(out)


def indexed_prefer(m: GsleuModel, a: Event, f: Act, g: Act):
    """Preference indexed by an event: single-level comparison at its class.

    Returns DEGENERATE for the empty event.
    """
    _check_act(m, f)
    _check_act(m, g)
    if a.space != m.space:
        raise SpaceMismatch("event over a different state space")
    if a.is_empty:
        return DEGENERATE
    k = class_of(m, a)
    lv = m.level(k)
    measure = conditional_measure(m, a)
    diff = ZERO
    for i in a.members:
        if measure[i]:
            diff += measure[i] * (lv.utility[f.assignment[i]] - lv.utility[g.assignment[i]])
    return Ordering.from_difference(diff)


def lex_prefer(m: GsleuModel, f: Act, g: Act) -> LexVerdict:
    """Lexicographic comparison: first level whose values differ decides."""
    vf = level_values(m, f)
    vg = level_values(m, g)
    for k, (x, y) in enumerate(zip(vf, vg), start=1):
        if x != y:
            return LexVerdict(Ordering.from_difference(x - y), k)
    return LexVerdict(Ordering.INDIFFERENT, None)


def lex_prefer_bruteforce(m: GsleuModel, f: Act, g: Act) -> LexVerdict:
    """Literal evaluation of the lexicographic rule over the chain.

    f is weakly preferred to g when every chain event at which g wins
    strictly is preceded (inclusively) by one at which f wins strictly.
    Kept deliberately naive as an oracle for lex_prefer.
    """
    chain = top_event_chain(m)
    strict_at = []
    for ev in chain:
        strict_at.append(indexed_prefer(m, ev, f, g))

    def weakly_preferred(signs: Iterable[Ordering], win: Ordering, lose: Ordering) -> bool:
        signs = list(signs)
        for k, s in enumerate(signs):
            if s is lose:
                if not any(signs[j] is win for j in range(k + 1)):
                    return False
        return True

    fw = weakly_preferred(strict_at, Ordering.STRICTLY_PREFER, Ordering.STRICTLY_DISPREFER)
    gw = weakly_preferred(strict_at, Ordering.STRICTLY_DISPREFER, Ordering.STRICTLY_PREFER)
    if fw and gw:
        return LexVerdict(Ordering.INDIFFERENT, None)
    deciding = next(
        (k for k, s in enumerate(strict_at, start=1) if s is not Ordering.INDIFFERENT),
        None,
    )
    if fw:
        return LexVerdict(Ordering.STRICTLY_PREFER, deciding)
    if gw:
        return LexVerdict(Ordering.STRICTLY_DISPREFER, deciding)
    raise AssertionError("model-backed lexicographic preference is complete")


def is_null_at(m: GsleuModel, b: Event, a: Event) -> bool:
    """Whether b (a subevent of a) carries no weight at a.

    The empty event is null everywhere; otherwise b is null exactly when
    it misses the support of a's class.
    """
    if not b.is_subset(a):
        raise NotSubset("nullity is defined for subevents only")
    if b.is_empty:
        return True
    k = class_of(m, a)
    return b.mask & m.level(k).support.mask == 0


def agreement(m: GsleuModel, a: Event, b: Event) -> bool:
    """Whether the preferences indexed by a and b coincide on all acts.

    For nonempty events this reduces to equal classes and equal conditional
    measures: utilities are non-constant, so distinct conditionals always
    rank some pair of acts differently.  The empty event's degenerate
    preference agrees only with itself.
    """
    if a.space != m.space or b.space != m.space:
        raise SpaceMismatch("event over a different state space")
    if a.is_empty or b.is_empty:
        return a.is_empty and b.is_empty
    if class_of(m, a) != class_of(m, b):
        return False
    return conditional_measure(m, a) == conditional_measure(m, b)


def qual_prob_compare(m: GsleuModel, a: Event, b: Event, c: Event) -> Ordering:
    """Compare the conditional masses of two subevents of a."""
    if a.is_empty:
        raise EmptyEvent("qualitative comparison needs a nonempty index event")
    if not b.is_subset(a) or not c.is_subset(a):
        raise NotSubset("compared events must be subevents of the index event")
    measure = conditional_measure(m, a)
    mass_b = sum((measure[i] for i in b.members), ZERO)
    mass_c = sum((measure[i] for i in c.members), ZERO)
    return Ordering.from_difference(mass_b - mass_c)


class Dominance(enum.Enum):
    A_DOMINATES = "a_dominates"
    B_DOMINATES = "b_dominates"
    EQUIVALENT = "equivalent"


def dominance(m: GsleuModel, a: Event, b: Event) -> Dominance:
    """Rank two events by class; the empty event sits below everything."""
    ka = class_of(m, a)
    kb = class_of(m, b)
    ia = m.depth + 1 if ka is None else ka
    ib = m.depth + 1 if kb is None else kb
    if ia < ib:
        return Dominance.A_DOMINATES
    if ib < ia:
        return Dominance.B_DOMINATES
    return Dominance.EQUIVALENT


@dataclass(frozen=True)
class ClassPartition:
    """Events grouped by class, highest class first; the empty event forms
    its own trivial cell and is not listed."""

    classes: tuple[tuple[Event, ...], ...]

    @property
    def depth(self) -> int:
        return len(self.classes)

    def index_of(self, a: Event) -> int | None:
        for k, group in enumerate(self.classes, start=1):
            if a in group:
                return k
        return None

    @property
    def supports(self) -> tuple[Event, ...]:
        """Per class, the union of its singleton events (the class atoms)."""
        out = []
        for group in self.classes:
            mask = 0
            space = group[0].space
            for ev in group:
                if ev.size == 1:
                    mask |= ev.mask
            out.append(Event(space, mask))
        return tuple(out)

    @property
    def top_events(self) -> tuple[Event, ...]:
        """Per class, the union of all its events (its largest member)."""
        out = []
        for group in self.classes:
            mask = 0
            for ev in group:
                mask |= ev.mask
            out.append(Event(group[0].space, mask))
        return tuple(out)


def class_partition(m: GsleuModel, cap: int | None = None) -> ClassPartition:
    """Group the whole powerset by class (the empty event is left out)."""
    groups: list[list[Event]] = [[] for _ in range(m.depth)]
    for ev in m.space.all_events(cap):
        k = class_of(m, ev)
        if k is not None:
            groups[k - 1].append(ev)
    return ClassPartition(tuple(tuple(g) for g in groups))


@dataclass(frozen=True)
class RiskRelation:
    level_a: int
    level_b: int
    ordinally_equivalent: bool
    affinely_related: bool
    witness: tuple[Fraction, Fraction] | None  # (scale, shift) when affine


@dataclass(frozen=True)
class RiskProfile:
    relations: tuple[RiskRelation, ...]

    def between(self, j: int, k: int) -> RiskRelation:
        lo, hi = min(j, k), max(j, k)
        for r in self.relations:
            if (r.level_a, r.level_b) == (lo, hi):
                return r
        raise KeyError((j, k))


def risk_profile(m: GsleuModel) -> RiskProfile:
    """Pairwise comparison of level utilities: same ranking? same up to a
    positive affine map?"""

    def sign(x: Fraction) -> int:
        return (x > 0) - (x < 0)

    rels = []
    nout = m.outcome_space.size
    for j in range(1, m.depth + 1):
        uj = m.level(j).utility
        for k in range(j + 1, m.depth + 1):
            uk = m.level(k).utility
            ordinal = all(
                sign(uj[x] - uj[y]) == sign(uk[x] - uk[y])
                for x in range(nout)
                for y in range(x + 1, nout)
            )
            witness = None
            if ordinal:
                x, y = next(
                    (x, y)
                    for x in range(nout)
                    for y in range(nout)
                    if uj[x] != uj[y]
                )
                scale = (uk[x] - uk[y]) / (uj[x] - uj[y])
                shift = uk[x] - scale * uj[x]
                if scale > 0 and all(uk[z] == scale * uj[z] + shift for z in range(nout)):
                    witness = (scale, shift)
            rels.append(RiskRelation(j, k, ordinal, witness is not None, witness))
    return RiskProfile(tuple(rels))


def outcome_order(m: GsleuModel) -> tuple[int, ...]:
    """Outcome indices best-first under the shared constant-act ranking
    (level 1 utility; declaration order breaks ties)."""
    u = m.levels[0].utility
    return tuple(sorted(range(m.outcome_space.size), key=lambda o: (-u[o], o)))
