"""Utility upper bounds used to prune candidate rules.

Three bounds, all derived from window sums over the sequence:

* per-event window bound: caps the utility of any rule containing the event;
* pairwise bound table: the window bound of each viable two-event rule,
  used to veto expansions doomed by any antecedent event;
* expansion bound: caps the utility reachable by growing a rule occurrence's
  consequent inside its remaining legal window.  Anti-monotone under
  expansion, so a failing rule never needs its descendants examined.
"""

from __future__ import annotations

from typing import Sequence as Seq

from .occurrences import RuleOccurrence, group_occurrences
from .sequence import EventSequence, Spans, Utility


def event_window_bound(seq: EventSequence, event: int, spans: Spans) -> Utility:
    """Sum of window utilities around every occurrence of the event.

    Window positions outside the sequence contribute 0.
    """
    w = spans.window
    return sum(
        seq.window_utility(t - w, t + w) for t in seq.positions(event)
    )


class PairBounds:
    """Sparse table of window bounds for ordered event pairs; absent pair -> 0."""

    def __init__(self, table: dict[tuple[int, int], Utility]):
        self._table = {k: v for k, v in table.items() if v != 0}

    def get(self, a: int, b: int) -> Utility:
        return self._table.get((a, b), 0)

    def items(self):
        return self._table.items()

    def __len__(self) -> int:
        return len(self._table)

    def __eq__(self, other) -> bool:
        return isinstance(other, PairBounds) and self._table == other._table


def build_pair_bounds(seq: EventSequence, spans: Spans) -> PairBounds:
    """Window bounds for ordered event pairs (antecedent event, consequent event).

    For each position of a, only the earliest following b contributes: the
    window [b_first - window, a_pos + window] shrinks as the b position
    grows, so the first occurrence carries the maximum.  Pairs are collected
    up to the whole-rule window, not just the gap span: inside a wider rule,
    a may precede b by up to the full extent, and a narrower table would veto
    rules it never accounted for.  (For unit antecedent and consequent spans
    the two horizons coincide.)
    """
    w = spans.window
    table: dict[tuple[int, int], Utility] = {}
    for slot in seq.slots:
        ti = slot.timestamp
        first_after: dict[int, int] = {}
        for tj in seq.timestamps_in(ti + 1, ti + w):
            for b in seq.slot_at(tj).events:
                first_after.setdefault(b, tj)
        if not first_after:
            continue
        for a in slot.events:
            for b, tj in first_after.items():
                key = (a, b)
                table[key] = table.get(key, 0) + seq.window_utility(tj - w, ti + w)
    return PairBounds(table)


def expansion_window(occ: RuleOccurrence, spans: Spans) -> tuple[int, int]:
    """Timestamp range where the occurrence may legally gain consequent events.

    May be empty (start > end).  Membership in this range is exactly
    equivalent to the expanded occurrence satisfying all span constraints.
    """
    start = max(occ.y_end - spans.yspan + 1, occ.x_end + 1)
    end = min(occ.y_start + spans.yspan - 1, occ.x_end + spans.xyspan + spans.yspan - 2)
    return start, end


def occurrence_expansion_bound(seq: EventSequence, occ: RuleOccurrence, spans: Spans) -> Utility:
    """Antecedent-part utility plus the window sum over the expansion window."""
    start, end = expansion_window(occ, spans)
    return occ.x_utility + seq.window_utility(start, end)


def rule_expansion_bound(
    seq: EventSequence, occs: Seq[RuleOccurrence], spans: Spans
) -> Utility:
    """Grouped expansion bound of a rule: per-group maximum, summed.

    Uses the same grouping as support and utility, so the bound provably
    dominates the utility computed over identical groups.  Not anti-monotone
    under expansion (widening intervals can re-partition the groups), so the
    miner's pruning gate uses expansion_gate_bound instead.
    """
    total: Utility = 0
    for group in group_occurrences(occs):
        total += max(occurrence_expansion_bound(seq, m, spans) for m in group.members)
    return total


def expansion_gate_bound(
    seq: EventSequence, occs: Seq[RuleOccurrence], spans: Spans
) -> Utility:
    """Anti-monotone pruning bound: per-antecedent-start maximum, summed.

    Occurrences sharing an outer start always share a group, and expansion
    never changes the antecedent start, so every descendant's utility is a
    sum of per-start maxima dominated by this one.  Dominates the grouped
    bound and shrinks (weakly) on every expansion.
    """
    best: dict[int, Utility] = {}
    for occ in occs:
        b = occurrence_expansion_bound(seq, occ, spans)
        if b > best.get(occ.x_start, -1):
            best[occ.x_start] = b
    return sum(best.values())
