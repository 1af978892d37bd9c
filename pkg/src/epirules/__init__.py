"""High-utility partially-ordered episode rule mining."""

from .bounds import (
    PairBounds,
    build_pair_bounds,
    event_window_bound,
    expansion_window,
    occurrence_expansion_bound,
    rule_expansion_bound,
)
from .miner import (
    EventSetEntry,
    MinedRule,
    MinerOptions,
    MiningStats,
    VariantConfig,
    mine,
    mine_antecedents,
    mine_rules,
    preprocess,
)
from .occurrences import (
    OccurrenceGroup,
    RuleOccurrence,
    SetOccurrence,
    canonical,
    confidence,
    group_occurrences,
    overlaps,
    support,
    utility,
)
from .oracle import CapsExceededError, OracleCaps, OracleRule, enumerate_all_rules, oracle_mine
from .sequence import (
    EventSequence,
    ParseError,
    Spans,
    Thresholds,
    TimeSlot,
    parse_sequence,
    serialize_sequence,
)

__all__ = [
    "CapsExceededError",
    "EventSequence",
    "EventSetEntry",
    "MinedRule",
    "MinerOptions",
    "MiningStats",
    "OccurrenceGroup",
    "OracleCaps",
    "OracleRule",
    "PairBounds",
    "ParseError",
    "RuleOccurrence",
    "SetOccurrence",
    "Spans",
    "Thresholds",
    "TimeSlot",
    "VariantConfig",
    "build_pair_bounds",
    "canonical",
    "confidence",
    "enumerate_all_rules",
    "event_window_bound",
    "expansion_window",
    "group_occurrences",
    "mine",
    "mine_antecedents",
    "mine_rules",
    "occurrence_expansion_bound",
    "oracle_mine",
    "overlaps",
    "parse_sequence",
    "preprocess",
    "rule_expansion_bound",
    "serialize_sequence",
    "support",
    "utility",
]
