"""Occurrence records and the measures built on them.

An occurrence list holds every known embedding of an event set or a rule,
sorted by outer interval.  Support is the number of non-overlapping groups,
utility the sum of per-group maxima, confidence the exact ratio of rule
support to antecedent support.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .sequence import Spans, Utility


@dataclass(frozen=True, slots=True)
class SetOccurrence:
    """Embedding of an event set: every member occurs within [start, end]."""

    start: int
    end: int
    utility: Utility

    def __post_init__(self):
        if self.start > self.end:
            raise ValueError(f"start {self.start} > end {self.end}")

    @property
    def outer_start(self) -> int:
        return self.start

    @property
    def outer_end(self) -> int:
        return self.end

    @property
    def interval(self) -> tuple[int, int]:
        return (self.start, self.end)

    @property
    def sort_key(self):
        return (self.start, self.end)


@dataclass(frozen=True, slots=True)
class RuleOccurrence:
    """Embedding of a rule: antecedent part strictly before consequent part.

    ``utility`` is the sum of both parts at these positions; ``x_utility``
    keeps the antecedent part alone for expansion-bound computations.

    A record may be *pending*: its gap still exceeds the gap span, but a
    later consequent event inside the expansion window can pull the start
    back within it.  Pending records feed expansion only; every measure is
    computed over the records satisfying the gap constraint.
    """

    x_start: int
    x_end: int
    y_start: int
    y_end: int
    utility: Utility
    x_utility: Utility

    def __post_init__(self):
        if not (self.x_start <= self.x_end < self.y_start <= self.y_end):
            raise ValueError(
                f"bad rule interval ({self.x_start},{self.x_end},{self.y_start},{self.y_end})"
            )

    @classmethod
    def checked(cls, x_start, x_end, y_start, y_end, utility, x_utility, spans: Spans):
        """Construct and verify the span constraints up to the reachable envelope."""
        occ = cls(x_start, x_end, y_start, y_end, utility, x_utility)
        if x_end - x_start >= spans.xspan:
            raise ValueError(f"antecedent span {x_end - x_start + 1} exceeds {spans.xspan}")
        if y_end - y_start >= spans.yspan:
            raise ValueError(f"consequent span {y_end - y_start + 1} exceeds {spans.yspan}")
        if y_end - x_end > spans.xyspan + spans.yspan - 2:
            raise ValueError(
                f"consequent end {y_end} beyond the reachable envelope of x_end {x_end}"
            )
        return occ

    def satisfies_gap(self, spans: Spans) -> bool:
        return self.y_start - self.x_end < spans.xyspan

    @property
    def outer_start(self) -> int:
        return self.x_start

    @property
    def outer_end(self) -> int:
        return self.y_end

    @property
    def interval(self) -> tuple[int, int, int, int]:
        return (self.x_start, self.x_end, self.y_start, self.y_end)

    @property
    def sort_key(self):
        return (self.x_start, self.y_end, self.x_end, self.y_start)


Occurrence = Union[SetOccurrence, RuleOccurrence]


def overlaps(a: Occurrence, b: Occurrence) -> bool:
    """True iff the outer intervals intersect."""
    return a.outer_start <= b.outer_end and b.outer_start <= a.outer_end


def canonical(occs: Sequence[Occurrence]) -> list[Occurrence]:
    """Sort and merge exact-duplicate intervals, keeping the max utility.

    For rules, the antecedent-part utility is also maximised independently;
    both maxima are achievable, and the expansion bound stays an upper bound.
    """
    best: dict[tuple, Occurrence] = {}
    for occ in occs:
        key = occ.interval
        old = best.get(key)
        if old is None:
            best[key] = occ
        elif isinstance(occ, RuleOccurrence):
            if occ.utility > old.utility or occ.x_utility > old.x_utility:
                best[key] = RuleOccurrence(
                    occ.x_start,
                    occ.x_end,
                    occ.y_start,
                    occ.y_end,
                    max(occ.utility, old.utility),
                    max(occ.x_utility, old.x_utility),
                )
        elif occ.utility > old.utility:
            best[key] = occ
    return sorted(best.values(), key=lambda o: o.sort_key)


@dataclass(frozen=True)
class OccurrenceGroup:
    """A maximal run of mutually qualifying occurrences around one representative."""

    representative: Occurrence
    members: tuple[Occurrence, ...]

    @property
    def utility(self) -> Utility:
        return max(m.utility for m in self.members)


def group_occurrences(occs: Sequence[Occurrence]) -> list[OccurrenceGroup]:
    """Greedy left-to-right grouping over a canonically sorted list.

    The representative is the minimal-end member seen so far (ties: minimal
    start); an occurrence joins the current group iff it overlaps the current
    representative.  Representatives of consecutive groups never overlap, and
    the group count equals the classic earliest-end maximum of pairwise
    non-overlapping intervals.
    """
    groups: list[OccurrenceGroup] = []
    rep: Occurrence | None = None
    members: list[Occurrence] = []
    for occ in occs:
        if rep is not None and occ.outer_start <= rep.outer_end:
            members.append(occ)
            if occ.outer_end < rep.outer_end:
                rep = occ
        else:
            if rep is not None:
                groups.append(OccurrenceGroup(rep, tuple(members)))
            rep = occ
            members = [occ]
    if rep is not None:
        groups.append(OccurrenceGroup(rep, tuple(members)))
    return groups


def support(occs: Sequence[Occurrence]) -> int:
    """Number of non-overlapping occurrence groups."""
    return len(group_occurrences(occs))


def utility(occs: Sequence[Occurrence]) -> Utility:
    """Sum over groups of the maximum member utility; 0 for an empty list."""
    return sum(g.utility for g in group_occurrences(occs))


def confidence(rule_support: int, antecedent_support: int) -> Fraction:
    """Exact ratio of rule support to antecedent support."""
    if antecedent_support <= 0:
        raise ValueError("confidence undefined for zero antecedent support")
    return Fraction(rule_support, antecedent_support)
