"""The mining pipeline: preprocessing, antecedent growth, and rule expansion.

Four variants share the same output and differ only in which utility-based
pruning filters run: the pairwise bound table (variant 2), the expansion
bound (variant 3), or both (variant 4).  Variant 1 uses neither.  Support-
and window-bound-based event removal always runs.
"""

from __future__ import annotations

import resource
import sys
import time
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .bounds import (
    PairBounds,
    build_pair_bounds,
    event_window_bound,
    expansion_gate_bound,
    expansion_window,
)
from .occurrences import (
    RuleOccurrence,
    SetOccurrence,
    canonical,
    support,
    utility,
)
from .sequence import EventSequence, Spans, Thresholds, Utility


@dataclass(frozen=True)
class VariantConfig:
    """Which optional pruning filters are active."""

    use_pair_filter: bool = False  # two-event bound table gate (stats: pruned_reucsp)
    use_expansion_filter: bool = False  # expansion bound gate (stats: pruned_reeup)

    @classmethod
    def from_number(cls, n: int) -> "VariantConfig":
        if n not in (1, 2, 3, 4):
            raise ValueError(f"variant must be 1..4, got {n}")
        return cls(use_pair_filter=n in (2, 4), use_expansion_filter=n in (3, 4))

    @property
    def number(self) -> int:
        return 1 + int(self.use_pair_filter) + 2 * int(self.use_expansion_filter)


@dataclass(frozen=True)
class MinerOptions:
    """Behavioral switches orthogonal to the pruning variants.

    ``pseudocode_compat`` drops the independent minimum-support check from
    the output test (and the matching expansion stop), keeping only the
    utility and confidence tests.  ``allow_shared_events`` permits an event
    id to appear on both sides of a rule (occurrences occupy disjoint time
    ranges either way).  ``debug_checks`` verifies expansion-window nesting
    and bound anti-monotonicity on every expansion.
    """

    pseudocode_compat: bool = False
    allow_shared_events: bool = True
    debug_checks: bool = False
    threads: int = 1


@dataclass(frozen=True)
class EventSetEntry:
    """A candidate antecedent with its full occurrence list and support."""

    events: tuple[int, ...]
    occs: tuple[SetOccurrence, ...]
    support: int


@dataclass(frozen=True)
class MinedRule:
    """A rule meeting all three thresholds, with its exact measures."""

    antecedent: tuple[int, ...]
    consequent: tuple[int, ...]
    support: int
    confidence: Fraction
    utility: Utility

    @property
    def sort_key(self):
        return (self.antecedent, self.consequent)


@dataclass
class MiningStats:
    """Counters for one mining run; field names match the stats CSV columns."""

    variant: str = "1"
    candidates: int = 0
    pruned_reucsp: int = 0
    pruned_reeup: int = 0
    removed_resp: int = 0
    removed_weup: int = 0
    huers: int = 0
    elapsed_ms: int = 0
    peak_mem_bytes: int = 0


def _peak_memory_bytes() -> int:
    # Best-effort OS query; excluded from correctness assertions.
    rss = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss
    return rss if sys.platform == "darwin" else rss * 1024


def preprocess(
    seq: EventSequence, thresholds: Thresholds, spans: Spans
) -> tuple[EventSequence, int, int]:
    """Drop events that no rule can carry past the thresholds.

    An event goes when its support is below minsup, or (failing that test
    only) when its window bound is below minutil.  Support and bounds are
    both computed on the incoming sequence in a single pass.  Returns the
    filtered sequence plus the two removal counts.
    """
    th = thresholds.resolve(seq)
    by_support = {e for e in seq.alphabet if len(seq.positions(e)) < th.minsup}
    by_bound = {
        e
        for e in seq.alphabet - by_support
        if event_window_bound(seq, e, spans) < th.minutil
    }
    return seq.drop_events(by_support | by_bound), len(by_support), len(by_bound)


def mine_antecedents(seq: EventSequence, xspan: int, minsup: int) -> list[EventSetEntry]:
    """All event sets with non-overlapping support >= minsup, with occurrence lists.

    Breadth-complete growth: each set extends by events greater than its last
    member, found within the span window around each of its occurrences, so
    every qualifying superset is reached exactly once.
    """
    entries: list[EventSetEntry] = []
    worklist: deque[EventSetEntry] = deque()
    for e in sorted(seq.alphabet):
        occs = tuple(
            SetOccurrence(t, t, seq.utility_at(e, t)) for t in seq.positions(e)
        )
        if len(occs) >= minsup:  # point occurrences never overlap
            entry = EventSetEntry((e,), occs, len(occs))
            entries.append(entry)
            worklist.append(entry)
    while worklist:
        entry = worklist.popleft()
        last = entry.events[-1]
        extensions: dict[int, list[SetOccurrence]] = {}
        for occ in entry.occs:
            lo = occ.end - xspan + 1
            hi = occ.start + xspan - 1
            for t in seq.timestamps_in(lo, hi):
                for e, u in seq.slot_at(t).entries:
                    if e <= last:
                        continue
                    extensions.setdefault(e, []).append(
                        SetOccurrence(min(occ.start, t), max(occ.end, t), occ.utility + u)
                    )
        for e in sorted(extensions):
            occs = tuple(canonical(extensions[e]))
            sup = support(occs)
            if sup >= minsup:
                child = EventSetEntry(entry.events + (e,), occs, sup)
                entries.append(child)
                worklist.append(child)
    entries.sort(key=lambda en: en.events)
    return entries


@dataclass
class _Counters:
    candidates: int = 0
    pruned_reucsp: int = 0
    pruned_reeup: int = 0


def _process_antecedent(
    seq: EventSequence,
    s_y: EventSequence,
    entry: EventSetEntry,
    thresholds: Thresholds,
    spans: Spans,
    variant: VariantConfig,
    options: MinerOptions,
    pair_bounds: PairBounds | None,
) -> tuple[list[MinedRule], _Counters]:
    """Mine every rule with this antecedent by breadth-first consequent growth."""
    minutil = thresholds.minutil
    minsup = thresholds.minsup
    conf_floor = thresholds.minconf * entry.support
    x_events = set(entry.events)
    counters = _Counters()
    rules: list[MinedRule] = []
    queue: deque[tuple[tuple[int, ...], list[RuleOccurrence], Utility | None]] = deque()

    blocked_cache: dict[int, bool] = {}

    def blocked(e: int) -> bool:
        hit = blocked_cache.get(e)
        if hit is None:
            hit = any(pair_bounds.get(a, e) < minutil for a in entry.events)
            blocked_cache[e] = hit
        return hit

    def evaluate(
        consequent: tuple[int, ...],
        occs: list[RuleOccurrence],
        parent_bound: Utility | None,
    ) -> None:
        counters.candidates += 1
        bound = None
        if variant.use_expansion_filter or options.debug_checks:
            bound = expansion_gate_bound(seq, occs, spans)
            if (
                options.debug_checks
                and parent_bound is not None
                and bound > parent_bound
            ):
                raise AssertionError(
                    f"expansion bound grew: {bound} > {parent_bound} for "
                    f"{entry.events} -> {consequent}"
                )
        if variant.use_expansion_filter and bound < minutil:
            # utility <= bound < minutil, so the rule cannot be output either
            counters.pruned_reeup += 1
            return
        valid = [o for o in occs if o.satisfies_gap(spans)]
        sup = support(valid)
        util = utility(valid)
        if (
            util >= minutil
            and sup >= conf_floor
            and (options.pseudocode_compat or sup >= minsup)
        ):
            rules.append(
                MinedRule(entry.events, consequent, sup, Fraction(sup, entry.support), util)
            )
        # The group count over all records (pending included) only shrinks
        # under expansion, so once it cannot reach the support or confidence
        # floor no descendant can be output.
        potential = support(occs)
        if options.pseudocode_compat or (potential >= minsup and potential >= conf_floor):
            queue.append((consequent, occs, bound))

    if spans.xyspan < 2:
        return rules, counters  # the gap constraint is unsatisfiable

    seeds: dict[int, list[RuleOccurrence]] = {}
    blocked_seen: set[int] = set()
    envelope = spans.xyspan + spans.yspan - 2
    for xo in entry.occs:
        for t in s_y.timestamps_in(xo.end + 1, xo.end + envelope):
            for e, u in s_y.slot_at(t).entries:
                if not options.allow_shared_events and e in x_events:
                    continue
                if pair_bounds is not None and blocked(e):
                    blocked_seen.add(e)
                    continue
                seeds.setdefault(e, []).append(
                    RuleOccurrence.checked(
                        xo.start, xo.end, t, t, xo.utility + u, xo.utility, spans
                    )
                )
    counters.pruned_reucsp += len(blocked_seen)
    for e in sorted(seeds):
        evaluate((e,), canonical(seeds[e]), None)

    while queue:
        consequent, occs, parent_bound = queue.popleft()
        last = consequent[-1]
        extensions: dict[int, list[RuleOccurrence]] = {}
        blocked_seen = set()
        for occ in occs:
            lo, hi = expansion_window(occ, spans)
            for t in s_y.timestamps_in(lo, hi):
                for e, u in s_y.slot_at(t).entries:
                    if e <= last:
                        continue
                    if not options.allow_shared_events and e in x_events:
                        continue
                    if pair_bounds is not None and blocked(e):
                        blocked_seen.add(e)
                        continue
                    if t < occ.y_start:
                        ys, ye = t, occ.y_end
                    elif t > occ.y_end:
                        ys, ye = occ.y_start, t
                    else:
                        ys, ye = occ.y_start, occ.y_end
                    child = RuleOccurrence.checked(
                        occ.x_start, occ.x_end, ys, ye, occ.utility + u, occ.x_utility, spans
                    )
                    if options.debug_checks:
                        clo, chi = expansion_window(child, spans)
                        if clo < lo or chi > hi:
                            raise AssertionError(
                                f"expansion window not nested: [{clo},{chi}] vs [{lo},{hi}]"
                            )
                    extensions.setdefault(e, []).append(child)
        counters.pruned_reucsp += len(blocked_seen)
        for e in sorted(extensions):
            evaluate(consequent + (e,), canonical(extensions[e]), parent_bound)

    return rules, counters


def mine_rules(
    seq: EventSequence,
    antecedents: list[EventSetEntry],
    thresholds: Thresholds,
    spans: Spans,
    variant: VariantConfig = VariantConfig(),
    options: MinerOptions = MinerOptions(),
    pair_bounds: PairBounds | None = None,
) -> tuple[list[MinedRule], MiningStats]:
    """Grow consequents for each antecedent and collect the passing rules.

    ``seq`` must already be preprocessed; expansion events are drawn from a
    further copy with low-support consequent events removed.
    """
    th = thresholds.resolve(seq)
    floor = th.minsup * th.minconf
    weak = {e for e in seq.alphabet if len(seq.positions(e)) < floor}
    s_y = seq.drop_events(weak)
    if variant.use_pair_filter and pair_bounds is None:
        pair_bounds = build_pair_bounds(seq, spans)
    gate = pair_bounds if variant.use_pair_filter else None

    def work(entry: EventSetEntry):
        return _process_antecedent(seq, s_y, entry, th, spans, variant, options, gate)

    if options.threads > 1 and len(antecedents) > 1:
        with ThreadPoolExecutor(max_workers=options.threads) as pool:
            results = list(pool.map(work, antecedents))
    else:
        results = [work(entry) for entry in antecedents]

    stats = MiningStats(variant=str(variant.number))
    rules: list[MinedRule] = []
    for part, counters in results:
        rules.extend(part)
        stats.candidates += counters.candidates
        stats.pruned_reucsp += counters.pruned_reucsp
        stats.pruned_reeup += counters.pruned_reeup
    rules.sort(key=lambda r: r.sort_key)
    stats.huers = len(rules)
    return rules, stats


def mine(
    seq: EventSequence,
    thresholds: Thresholds,
    spans: Spans,
    variant: VariantConfig = VariantConfig(),
    options: MinerOptions = MinerOptions(),
) -> tuple[list[MinedRule], MiningStats]:
    """Full pipeline: preprocess, grow antecedents, mine rules, aggregate stats."""
    started = time.perf_counter()
    th = thresholds.resolve(seq)
    # The pair table is built from the unfiltered sequence, before removals.
    pair_bounds = build_pair_bounds(seq, spans) if variant.use_pair_filter else None
    filtered, removed_resp, removed_weup = preprocess(seq, th, spans)
    antecedents = mine_antecedents(filtered, spans.xspan, th.minsup)
    rules, stats = mine_rules(
        filtered, antecedents, th, spans, variant, options, pair_bounds
    )
    stats.removed_resp = removed_resp
    stats.removed_weup = removed_weup
    stats.elapsed_ms = int((time.perf_counter() - started) * 1000)
    stats.peak_mem_bytes = _peak_memory_bytes()
    return rules, stats
