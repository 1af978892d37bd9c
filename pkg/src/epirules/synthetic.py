"""Seeded random instances for differential testing and benchmarking."""

from __future__ import annotations

import random
from fractions import Fraction

from .sequence import EventSequence, Spans, Thresholds, TimeSlot


def random_sequence(
    rng: random.Random,
    max_slots: int = 12,
    max_events: int = 5,
    max_utility: int = 10,
    gap_chance: float = 0.15,
) -> EventSequence:
    """A small dense-ish sequence; occasional timestamp gaps."""
    n_slots = rng.randint(1, max_slots)
    alphabet = list(range(1, rng.randint(2, max_events) + 1))
    slots = []
    t = 0
    for _ in range(n_slots):
        t += 1 + (rng.random() < gap_chance)
        k = rng.randint(1, min(3, len(alphabet)))
        events = sorted(rng.sample(alphabet, k))
        entries = tuple((e, rng.randint(1, max_utility)) for e in events)
        slots.append(TimeSlot(t, entries))
    return EventSequence(slots)


def random_spans(rng: random.Random, lo: int = 1, hi: int = 4) -> Spans:
    """Spans in [lo, hi]^3 with a gap span of at least 2 so rules can exist."""
    return Spans(
        xspan=rng.randint(lo, hi),
        yspan=rng.randint(lo, hi),
        xyspan=rng.randint(max(lo, 2), hi),
    )


def random_thresholds(rng: random.Random, seq: EventSequence) -> Thresholds:
    total = seq.total_utility()
    return Thresholds(
        minsup=rng.randint(1, 3),
        minconf=rng.choice(
            [Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(3, 5), Fraction(3, 4)]
        ),
        minutil=rng.randint(0, max(int(total), 1)),
    )


def random_instance(rng: random.Random, **kwargs):
    """(sequence, thresholds, spans) triple for one differential-test round."""
    seq = random_sequence(rng, **kwargs)
    return seq, random_thresholds(rng, seq), random_spans(rng)
