"""Enumeration caps.

Full enumeration of acts (m^n) and of the event powerset (2^n) is central to
the exhaustive checks, so both are guarded.  The act cap can be overridden
with the LEXEU_CAP environment variable; callers may also pass explicit caps.
"""
from __future__ import annotations

import os

from .errors import CapExceeded

DEFAULT_ACT_CAP = 100_000
DEFAULT_STATE_CAP = 16  # max |S| for powerset enumeration (2^16 events)


def act_cap() -> int:
    raw = os.environ.get("LEXEU_CAP")
    if raw is None:
        return DEFAULT_ACT_CAP
    try:
        value = int(raw)
    except ValueError as exc:
        raise CapExceeded(f"LEXEU_CAP is not an integer: {raw!r}") from exc
    if value <= 0:
        raise CapExceeded(f"LEXEU_CAP must be positive, got {value}")
    return value


def check_act_count(count: int, cap: int | None = None) -> None:
    limit = act_cap() if cap is None else cap
    if count > limit:
        raise CapExceeded(
            f"act enumeration needs {count} acts, cap is {limit}",
            needed=count,
            cap=limit,
        )


def check_state_count(n: int, cap: int | None = None) -> None:
    limit = DEFAULT_STATE_CAP if cap is None else cap
    if n > limit:
        raise CapExceeded(
            f"powerset enumeration over {n} states exceeds cap {limit}",
            needed=n,
            cap=limit,
        )
