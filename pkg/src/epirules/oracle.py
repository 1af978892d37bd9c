"""Brute-force rule enumeration for differential testing.

Evaluates every rule by exhaustive position search, with no pruning and no
growth order, directly from the definitions of occurrence, overlap, support,
confidence, and utility.  Grouping is deliberately re-implemented here (via
classic earliest-end selection) rather than shared with the measure module,
so that a grouping bug in either side shows up as a disagreement.

Only feasible on small instances; hard caps guard against accidental blowup.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .sequence import EventSequence, Spans, Thresholds, Utility


class CapsExceededError(ValueError):
    """The instance is too large for exhaustive enumeration."""


@dataclass(frozen=True)
class OracleCaps:
    max_slots: int = 12
    max_alphabet: int = 5
    max_set_size: int = 3  # per rule side


@dataclass(frozen=True)
class OracleRule:
    antecedent: tuple[int, ...]
    consequent: tuple[int, ...]
    support: int
    confidence: Fraction
    utility: Utility
    reeu: Utility  # grouped expansion bound, for soundness checks


def _interval_assignments(
    seq: EventSequence, events: tuple[int, ...], span: int
) -> dict[tuple[int, int], Utility]:
    """Max utility per (earliest, latest) interval over all position assignments.

    Every event takes one of its positions; assignments wider than the span
    are discarded (prefix-pruned, which skips no valid assignment).
    """
    out: dict[tuple[int, int], Utility] = {}
    choices = [
        [(t, seq.utility_at(e, t)) for t in seq.positions(e)] for e in events
    ]
    if any(not c for c in choices):
        return out

    def extend(i: int, lo: int, hi: int, util: Utility) -> None:
        if i == len(choices):
            key = (lo, hi)
            if util > out.get(key, -1):
                out[key] = util
            return
        for t, u in choices[i]:
            nlo, nhi = min(lo, t), max(hi, t)
            if nhi - nlo < span:
                extend(i + 1, nlo, nhi, util + u)

    first = choices[0]
    for t, u in first:
        extend(1, t, t, u)
    return out


def _grouped(intervals: list[tuple[int, int, Utility, Utility]]) -> tuple[int, Utility, Utility]:
    """(group count, summed max utility, summed max bound) by earliest-end selection.

    Scans start-sorted intervals, absorbing everything that begins no later
    than the smallest end seen in the current group.
    """
    items = sorted(intervals)
    count = 0
    total_util: Utility = 0
    total_bound: Utility = 0
    i = 0
    while i < len(items):
        min_end = items[i][1]
        best_util = items[i][2]
        best_bound = items[i][3]
        j = i + 1
        while j < len(items) and items[j][0] <= min_end:
            min_end = min(min_end, items[j][1])
            best_util = max(best_util, items[j][2])
            best_bound = max(best_bound, items[j][3])
            j += 1
        count += 1
        total_util += best_util
        total_bound += best_bound
        i = j
    return count, total_util, total_bound


def _check_caps(seq: EventSequence, caps: OracleCaps) -> None:
    if len(seq) > caps.max_slots:
        raise CapsExceededError(f"{len(seq)} slots exceeds cap {caps.max_slots}")
    if len(seq.alphabet) > caps.max_alphabet:
        raise CapsExceededError(
            f"{len(seq.alphabet)} events exceeds cap {caps.max_alphabet}"
        )


def enumerate_all_rules(
    seq: EventSequence,
    spans: Spans,
    caps: OracleCaps = OracleCaps(),
    allow_shared_events: bool = True,
) -> list[OracleRule]:
    """Exact measures for every rule with at least one occurrence."""
    _check_caps(seq, caps)
    alphabet = sorted(seq.alphabet)
    subsets = [
        s
        for size in range(1, caps.max_set_size + 1)
        for s in itertools.combinations(alphabet, size)
    ]
    x_sides = {
        s: ts
        for s in subsets
        if (ts := _interval_assignments(seq, s, spans.xspan))
    }
    y_sides = {
        s: ts
        for s in subsets
        if (ts := _interval_assignments(seq, s, spans.yspan))
    }
    x_support = {
        s: _grouped([(lo, hi, u, 0) for (lo, hi), u in ts.items()])[0]
        for s, ts in x_sides.items()
    }

    results: list[OracleRule] = []
    for x_set, x_tuples in x_sides.items():
        for y_set, y_tuples in y_sides.items():
            if not allow_shared_events and set(x_set) & set(y_set):
                continue
            occ: dict[tuple[int, int, int, int], tuple[Utility, Utility]] = {}
            for (xs, xe), xu in x_tuples.items():
                for (ys, ye), yu in y_tuples.items():
                    if ys <= xe or ys - xe >= spans.xyspan:
                        continue
                    key = (xs, xe, ys, ye)
                    total, x_part = occ.get(key, (-1, -1))
                    occ[key] = (max(total, xu + yu), max(x_part, xu))
            if not occ:
                continue
            intervals = []
            for (xs, xe, ys, ye), (total, x_part) in occ.items():
                lo = max(ye - spans.yspan + 1, xe + 1)
                hi = min(ys + spans.yspan - 1, xe + spans.xyspan + spans.yspan - 2)
                bound = x_part + seq.window_utility(lo, hi)
                intervals.append((xs, ye, total, bound))
            sup, util, bound = _grouped(intervals)
            results.append(
                OracleRule(
                    x_set,
                    y_set,
                    sup,
                    Fraction(sup, x_support[x_set]),
                    util,
                    bound,
                )
            )
    results.sort(key=lambda r: (r.antecedent, r.consequent))
    return results


def oracle_mine(
    seq: EventSequence,
    thresholds: Thresholds,
    spans: Spans,
    caps: OracleCaps = OracleCaps(),
    allow_shared_events: bool = True,
) -> list[OracleRule]:
    """All rules meeting the three thresholds, by exhaustive evaluation."""
    th = thresholds.resolve(seq)
    return [
        r
        for r in enumerate_all_rules(seq, spans, caps, allow_shared_events)
        if r.utility >= th.minutil
        and r.support >= th.minsup
        and r.confidence >= th.minconf
    ]
