"""Complex event sequences: timestamped slots of (event, utility) pairs.

A sequence is a single timeline where several events may occur simultaneously
at one time point, each carrying a non-negative utility.  Timestamps with no
events are simply absent.  All utility arithmetic is exact: integers stay
integers, decimal inputs become fractions.
"""

from __future__ import annotations

import logging
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

log = logging.getLogger(__name__)

Utility = Union[int, Fraction]

_COMMENT_PREFIXES = ("#", "%", "@")


class ParseError(ValueError):
    """Malformed dataset line; carries the 1-based line number."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def as_ratio(value) -> Fraction:
    """Coerce a threshold ratio to an exact fraction.

    Floats go through their decimal string form so that e.g. 0.6 means
    exactly 6/10, not the nearest binary float.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    return Fraction(str(value))


def _parse_number(token: str, lineno: int) -> Utility:
    try:
        if "." in token or "/" in token:
            value = Fraction(token)
        else:
            value = int(token)
    except (ValueError, ZeroDivisionError):
        raise ParseError(lineno, f"bad number {token!r}") from None
    if value < 0:
        raise ParseError(lineno, f"negative utility {token!r}")
    if isinstance(value, Fraction) and value.denominator == 1:
        value = int(value)
    return value


@dataclass(frozen=True)
class TimeSlot:
    """One time point: a non-empty set of distinct events with utilities."""

    timestamp: int
    entries: tuple[tuple[int, Utility], ...]  # sorted by event id, ids unique

    def __post_init__(self):
        if self.timestamp < 1:
            raise ValueError(f"timestamp must be positive, got {self.timestamp}")
        if not self.entries:
            raise ValueError("empty time slot (omit empty time points instead)")
        ids = [e for e, _ in self.entries]
        if ids != sorted(set(ids)):
            raise ValueError(f"slot entries must be unique and sorted: {ids}")
        if any(u < 0 for _, u in self.entries):
            raise ValueError("negative utility in slot")

    @property
    def total(self) -> Utility:
        return sum(u for _, u in self.entries)

    @property
    def events(self) -> tuple[int, ...]:
        return tuple(e for e, _ in self.entries)


class EventSequence:
    """Immutable complex event sequence with fast window-sum lookups.

    Safe to share across concurrent workers once constructed.
    """

    def __init__(self, slots: Iterable[TimeSlot]):
        slots = tuple(slots)
        for a, b in zip(slots, slots[1:]):
            if a.timestamp >= b.timestamp:
                raise ValueError(
                    f"timestamps must be strictly increasing: {a.timestamp} then {b.timestamp}"
                )
        self.slots = slots
        self._timestamps = [s.timestamp for s in slots]
        prefix = [0]
        for s in slots:
            prefix.append(prefix[-1] + s.total)
        self._prefix = prefix
        positions: dict[int, list[int]] = {}
        utilities: dict[int, dict[int, Utility]] = {}
        for s in slots:
            for e, u in s.entries:
                positions.setdefault(e, []).append(s.timestamp)
                utilities.setdefault(e, {})[s.timestamp] = u
        self._positions = {e: tuple(ts) for e, ts in positions.items()}
        self._utilities = utilities
        self._by_timestamp = {s.timestamp: s for s in slots}

    @property
    def alphabet(self) -> frozenset[int]:
        return frozenset(self._positions)

    def __len__(self) -> int:
        return len(self.slots)

    def __eq__(self, other) -> bool:
        return isinstance(other, EventSequence) and self.slots == other.slots

    def __hash__(self):
        return hash(self.slots)

    def slot_at(self, t: int) -> TimeSlot | None:
        return self._by_timestamp.get(t)

    def positions(self, event: int) -> tuple[int, ...]:
        """Timestamps where the event occurs, ascending; empty if absent."""
        return self._positions.get(event, ())

    def utility_at(self, event: int, t: int) -> Utility:
        return self._utilities[event][t]

    def slot_utility(self, t: int) -> Utility:
        """Sum of utilities at time point t; 0 for gaps and out-of-range t."""
        slot = self._by_timestamp.get(t)
        return slot.total if slot is not None else 0

    def window_utility(self, lo: int, hi: int) -> Utility:
        """Sum of slot utilities over timestamps in [lo, hi]; 0 when lo > hi."""
        if lo > hi:
            return 0
        i = bisect_left(self._timestamps, lo)
        j = bisect_right(self._timestamps, hi)
        return self._prefix[j] - self._prefix[i]

    def total_utility(self) -> Utility:
        return self._prefix[-1]

    def timestamps_in(self, lo: int, hi: int) -> list[int]:
        """Occupied timestamps within [lo, hi], ascending."""
        if lo > hi:
            return []
        i = bisect_left(self._timestamps, lo)
        j = bisect_right(self._timestamps, hi)
        return self._timestamps[i:j]

    def drop_events(self, events: set[int]) -> "EventSequence":
        """New sequence without the given events; emptied slots are dropped."""
        if not events:
            return self
        kept = []
        for s in self.slots:
            entries = tuple((e, u) for e, u in s.entries if e not in events)
            if entries:
                kept.append(TimeSlot(s.timestamp, entries))
        return EventSequence(kept)


@dataclass(frozen=True)
class Spans:
    """Maximum temporal extents of antecedent, consequent, and the gap between."""

    xspan: int
    yspan: int
    xyspan: int

    def __post_init__(self):
        for name in ("xspan", "yspan", "xyspan"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")

    @property
    def window(self) -> int:
        """Whole-rule extent bound, derived; never stored independently."""
        return self.xspan + self.yspan + self.xyspan - 3


@dataclass(frozen=True)
class Thresholds:
    """Mining thresholds; exactly one of minutil / delta must be given.

    A relative delta resolves to an absolute minutil against the sequence
    total before mining starts.
    """

    minsup: int
    minconf: Fraction
    minutil: Utility | None = None
    delta: Fraction | None = None

    def __post_init__(self):
        if self.minsup < 1:
            raise ValueError("minsup must be >= 1")
        object.__setattr__(self, "minconf", as_ratio(self.minconf))
        if not 0 <= self.minconf <= 1:
            raise ValueError("minconf must be in [0, 1]")
        if (self.minutil is None) == (self.delta is None):
            raise ValueError("exactly one of minutil / delta must be supplied")
        if self.minutil is not None and self.minutil < 0:
            raise ValueError("minutil must be non-negative")
        if self.delta is not None:
            object.__setattr__(self, "delta", as_ratio(self.delta))
            if not 0 <= self.delta <= 1:
                raise ValueError("delta must be in [0, 1]")

    def resolve(self, seq: EventSequence) -> "Thresholds":
        """Turn a relative delta into an absolute minutil for this sequence."""
        if self.minutil is not None:
            return self
        minutil = self.delta * seq.total_utility()
        if isinstance(minutil, Fraction) and minutil.denominator == 1:
            minutil = int(minutil)
        return Thresholds(self.minsup, self.minconf, minutil=minutil)


def _parse_line(line: str, lineno: int, default_ts: int) -> TimeSlot:
    body = line
    timestamp = default_ts
    if "|" in line:
        ts_part, body = line.split("|", 1)
        try:
            timestamp = int(ts_part.strip())
        except ValueError:
            raise ParseError(lineno, f"bad timestamp {ts_part.strip()!r}") from None
    parts = body.split(":")
    if len(parts) != 3:
        raise ParseError(lineno, f"expected 'items:total:utilities', got {body!r}")
    id_tokens = parts[0].split()
    util_tokens = parts[2].split()
    if not id_tokens:
        raise ParseError(lineno, "no events on line")
    if len(id_tokens) != len(util_tokens):
        raise ParseError(
            lineno,
            f"{len(id_tokens)} events but {len(util_tokens)} utilities",
        )
    entries = []
    seen = set()
    for tok, util_tok in zip(id_tokens, util_tokens):
        try:
            event = int(tok)
        except ValueError:
            raise ParseError(lineno, f"bad event id {tok!r}") from None
        if event < 0:
            raise ParseError(lineno, f"negative event id {event}")
        if event in seen:
            raise ParseError(lineno, f"duplicate event {event}")
        seen.add(event)
        entries.append((event, _parse_number(util_tok, lineno)))
    declared_total = _parse_number(parts[1].strip(), lineno)
    slot = TimeSlot(timestamp, tuple(sorted(entries)))
    if declared_total != slot.total:
        # Mismatches are reported, not rejected: some published datasets
        # carry slot totals that disagree with their per-event utilities.
        log.warning(
            "line %d: declared slot total %s != sum of utilities %s",
            lineno,
            declared_total,
            slot.total,
        )
    return slot


def parse_sequence(text: str) -> EventSequence:
    """Parse dataset text: one slot per line, ``<ids>:<slot total>:<utilities>``.

    Lines starting with ``#``, ``%`` or ``@`` are skipped.  Timestamps default
    to the 1-based index of the non-comment line; a leading ``<timestamp>|``
    prefix gives explicit timestamps for sequences with gaps.
    """
    slots = []
    index = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith(_COMMENT_PREFIXES):
            continue
        index += 1
        slots.append(_parse_line(line, lineno, index))
    try:
        return EventSequence(slots)
    except ValueError as exc:
        raise ParseError(0, str(exc)) from None


def _format_number(value: Utility) -> str:
    return str(value)


def serialize_sequence(seq: EventSequence) -> str:
    """Inverse of parse_sequence; explicit timestamps only when there are gaps."""
    consecutive = all(s.timestamp == i for i, s in enumerate(seq.slots, start=1))
    lines = []
    for slot in seq.slots:
        ids = " ".join(str(e) for e, _ in slot.entries)
        utils = " ".join(_format_number(u) for _, u in slot.entries)
        body = f"{ids}:{_format_number(slot.total)}:{utils}"
        lines.append(body if consecutive else f"{slot.timestamp}|{body}")
    return "\n".join(lines) + ("\n" if lines else "")
