"""Finite state spaces and events.

States live in a fixed declaration order; an event is a bitmask over that
order, so set algebra is integer arithmetic and every derived iteration
order (members, powerset, partitions) is deterministic.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .caps import check_state_count
from .errors import EmptyEvent, SpaceMismatch, UnknownState


@dataclass(frozen=True)
class StateSpace:
    """An ordered tuple of distinct state labels.

    The declaration order is canonical: it fixes bit positions for events,
    serialization order, and every enumeration order downstream.
    """

    states: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.states:
            raise ValueError("state space must be nonempty")
        if len(set(self.states)) != len(self.states):
            raise ValueError("state labels must be distinct")

    @property
    def size(self) -> int:
        return len(self.states)

    def index(self, label: str) -> int:
        try:
            return self.states.index(label)
        except ValueError:
            raise UnknownState(f"unknown state {label!r}") from None

    def event(self, labels=()) -> "Event":
        mask = 0
        for label in labels:
            mask |= 1 << self.index(label)
        return Event(self, mask)

    @property
    def full(self) -> "Event":
        return Event(self, (1 << self.size) - 1)

    @property
    def empty(self) -> "Event":
        return Event(self, 0)

    def singleton(self, label: str) -> "Event":
        return Event(self, 1 << self.index(label))

    def all_events(self, cap: int | None = None) -> Iterator["Event"]:
        """Yield the full powerset in mask order (empty event first)."""
        check_state_count(self.size, cap)
        for mask in range(1 << self.size):
            yield Event(self, mask)


@dataclass(frozen=True)
class Event:
    space: StateSpace
    mask: int

    def __post_init__(self) -> None:
        if not 0 <= self.mask < (1 << self.space.size):
            raise ValueError(f"mask {self.mask} out of range for {self.space.size} states")

    # -- set algebra ---------------------------------------------------
    def _check(self, other: "Event") -> None:
        if self.space != other.space:
            raise SpaceMismatch("events over different state spaces")

    def __or__(self, other: "Event") -> "Event":
        self._check(other)
        return Event(self.space, self.mask | other.mask)

    def __and__(self, other: "Event") -> "Event":
        self._check(other)
        return Event(self.space, self.mask & other.mask)

    def __sub__(self, other: "Event") -> "Event":
        self._check(other)
        return Event(self.space, self.mask & ~other.mask)

    def __xor__(self, other: "Event") -> "Event":
        self._check(other)
        return Event(self.space, self.mask ^ other.mask)

    def complement(self) -> "Event":
        return Event(self.space, self.space.full.mask & ~self.mask)

    def is_subset(self, other: "Event") -> bool:
        self._check(other)
        return self.mask & ~other.mask == 0

    def isdisjoint(self, other: "Event") -> bool:
        self._check(other)
        return self.mask & other.mask == 0

    # -- inspection ----------------------------------------------------
    @property
    def is_empty(self) -> bool:
        return self.mask == 0

    @property
    def size(self) -> int:
        return self.mask.bit_count()

    @property
    def members(self) -> tuple[int, ...]:
        """State indices in declaration order."""
        return tuple(i for i in range(self.space.size) if self.mask >> i & 1)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(self.space.states[i] for i in self.members)

    def __contains__(self, label: str) -> bool:
        return self.mask >> self.space.index(label) & 1 == 1

    def __repr__(self) -> str:
        return f"Event({{{', '.join(self.labels)}}})"


def set_op(op: str, a: Event, b: Event | None = None) -> Event:
    """Named dispatch over the event algebra (used by tooling)."""
    if op == "complement":
        return a.complement()
    if b is None:
        raise ValueError(f"operation {op!r} needs two events")
    ops = {
        "union": Event.__or__,
        "intersection": Event.__and__,
        "difference": Event.__sub__,
        "symmetric_difference": Event.__xor__,
    }
    if op not in ops:
        raise ValueError(f"unknown set operation {op!r}")
    return ops[op](a, b)


Partition = tuple[Event, ...]


def enumerate_partitions(a: Event, max_blocks: int | None = None) -> Iterator[Partition]:
    """Yield all partitions of a nonempty event, restricted-growth order.

    Each partition is a tuple of disjoint nonempty events covering `a`,
    blocks ordered by their smallest member.  Restricted-growth strings are
    generated lexicographically, so the one-block partition comes first and
    the all-singletons partition last.
    """
    if a.is_empty:
        raise EmptyEvent("cannot partition the empty event")
    members = a.members
    n = len(members)
    limit = n if max_blocks is None else min(max_blocks, n)
    if limit < 1:
        return

    def emit(codes: list[int]) -> Partition:
        nblocks = max(codes) + 1
        masks = [0] * nblocks
        for idx, code in zip(members, codes):
            masks[code] |= 1 << idx
        return tuple(Event(a.space, m) for m in masks)

    def rec(i: int, codes: list[int], used: int) -> Iterator[Partition]:
        if i == n:
            yield emit(codes)
            return
        top = min(used + 1, limit)
        for code in range(top):
            codes.append(code)
            yield from rec(i + 1, codes, max(used, code + 1))
            codes.pop()

    yield from rec(1, [0], 1)


def singleton_partition(a: Event) -> Partition:
    if a.is_empty:
        raise EmptyEvent("cannot partition the empty event")
    return tuple(Event(a.space, 1 << i) for i in a.members)


def bell_number(n: int) -> int:
    """Number of partitions of an n-element set (triangle recurrence)."""
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for v in row:
            nxt.append(nxt[-1] + v)
        row = nxt
    return row[0]
