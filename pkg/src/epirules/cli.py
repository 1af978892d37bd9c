"""Command-line front end: mining runs, variant benchmarks, oracle runs, table dumps."""

from __future__ import annotations

import argparse
import csv
import io
import random
import sys
from fractions import Fraction

from .bounds import build_pair_bounds
from .miner import MinedRule, MinerOptions, MiningStats, VariantConfig, mine
from .oracle import CapsExceededError, OracleCaps, oracle_mine
from .sequence import (
    EventSequence,
    ParseError,
    Spans,
    Thresholds,
    Utility,
    parse_sequence,
)
from .synthetic import random_sequence

STATS_COLUMNS = [
    "variant",
    "candidates",
    "pruned_reucsp",
    "pruned_reeup",
    "removed_resp",
    "removed_weup",
    "huers",
    "elapsed_ms",
    "peak_mem_bytes",
]

RULES_HEADER = "# {antecedent} -> {consequent} #SUP: support #CONF: confidence #UTIL: utility"


def format_utility(value: Utility) -> str:
    if isinstance(value, Fraction) and value.denominator == 1:
        value = int(value)
    return str(value)


def format_rule(rule) -> str:
    x = "{" + ",".join(str(e) for e in rule.antecedent) + "}"
    y = "{" + ",".join(str(e) for e in rule.consequent) + "}"
    conf = f"{float(rule.confidence):.6f}"
    return f"{x} -> {y} #SUP: {rule.support} #CONF: {conf} #UTIL: {format_utility(rule.utility)}"


def format_rules(rules) -> str:
    lines = [RULES_HEADER]
    lines.extend(format_rule(r) for r in rules)
    return "\n".join(lines) + "\n"


def parse_rules(text: str) -> list[MinedRule]:
    """Read back a rule file (confidence is recovered at its printed precision)."""
    rules = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        head, _, tail = line.partition(" #SUP: ")
        x_part, _, y_part = head.partition(" -> ")
        sup_str, _, tail = tail.partition(" #CONF: ")
        conf_str, _, util_str = tail.partition(" #UTIL: ")
        antecedent = tuple(int(t) for t in x_part.strip("{}").split(",") if t)
        consequent = tuple(int(t) for t in y_part.strip("{}").split(",") if t)
        rules.append(
            MinedRule(
                antecedent,
                consequent,
                int(sup_str),
                Fraction(conf_str),
                Fraction(util_str) if "/" in util_str or "." in util_str else int(util_str),
            )
        )
    return rules


def format_stats(rows: list[MiningStats]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(STATS_COLUMNS)
    for s in rows:
        writer.writerow([getattr(s, col) for col in STATS_COLUMNS])
    return buf.getvalue()


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="epirules",
        description="Mine high-utility partially-ordered episode rules from a "
        "complex event sequence with per-event utilities.",
    )
    parser.add_argument(
        "--mode",
        choices=["mine", "bench", "oracle", "dump-reucs"],
        default="mine",
        help="mine rules, benchmark all four variants, run the brute-force "
        "enumerator, or dump the pairwise bound table",
    )
    parser.add_argument("--input", help="dataset path (SPMF utility-transaction format)")
    parser.add_argument("--minsup", type=int, help="minimum support (>= 1)")
    parser.add_argument("--minconf", help="minimum confidence in [0,1], e.g. 0.6")
    parser.add_argument("--minutil", help="absolute minimum utility")
    parser.add_argument("--delta", help="minimum utility as a fraction of the sequence total")
    parser.add_argument("--xspan", type=int, help="max antecedent extent (>= 1)")
    parser.add_argument("--yspan", type=int, help="max consequent extent (>= 1)")
    parser.add_argument("--xyspan", type=int, help="max antecedent-to-consequent gap (>= 1)")
    parser.add_argument("--variant", type=int, choices=[1, 2, 3, 4], default=4)
    parser.add_argument("--output", help="rule file path (default: stdout)")
    parser.add_argument("--stats", help="stats CSV path (default: stdout)")
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument(
        "--seed",
        type=int,
        help="generate a random small instance instead of --input (bench/oracle only)",
    )
    return parser


def _fail(message: str) -> int:
    print(f"epirules: error: {message}", file=sys.stderr)
    return 2


def _load_config(args) -> tuple[Spans, Thresholds | None]:
    if args.xspan is None or args.yspan is None or args.xyspan is None:
        raise ValueError("--xspan, --yspan and --xyspan are required")
    spans = Spans(args.xspan, args.yspan, args.xyspan)
    thresholds = None
    if args.mode != "dump-reucs":
        if args.minsup is None or args.minconf is None:
            raise ValueError("--minsup and --minconf are required")
        minutil = Fraction(args.minutil) if args.minutil is not None else None
        delta = Fraction(args.delta) if args.delta is not None else None
        if minutil is not None and minutil.denominator == 1:
            minutil = int(minutil)
        thresholds = Thresholds(
            args.minsup, Fraction(args.minconf), minutil=minutil, delta=delta
        )
    return spans, thresholds


def _load_sequence(args) -> EventSequence:
    if args.input is not None:
        if args.seed is not None:
            raise ValueError("--input and --seed are mutually exclusive")
        with open(args.input) as fh:
            return parse_sequence(fh.read())
    if args.seed is not None:
        if args.mode not in ("bench", "oracle"):
            raise ValueError("--seed is only valid in bench/oracle mode")
        return random_sequence(random.Random(args.seed))
    raise ValueError("--input is required" + (
        " (or --seed)" if args.mode in ("bench", "oracle") else ""
    ))


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spans, thresholds = _load_config(args)
        seq = _load_sequence(args)
    except (ValueError, OSError) as exc:
        return _fail(str(exc))

    options = MinerOptions(threads=args.threads)
    try:
        if args.mode == "mine":
            rules, stats = mine(
                seq, thresholds, spans, VariantConfig.from_number(args.variant), options
            )
            _write(args.output, format_rules(rules))
            _write(args.stats, format_stats([stats]))
        elif args.mode == "bench":
            rows = []
            rules = None
            for n in (1, 2, 3, 4):
                rules, stats = mine(
                    seq, thresholds, spans, VariantConfig.from_number(n), options
                )
                rows.append(stats)
            if args.output:
                _write(args.output, format_rules(rules))
            _write(args.stats, format_stats(rows))
        elif args.mode == "oracle":
            found = oracle_mine(seq, thresholds, spans, OracleCaps())
            _write(args.output, format_rules(found))
        else:  # dump-reucs
            table = build_pair_bounds(seq, spans)
            buf = io.StringIO()
            writer = csv.writer(buf, lineterminator="\n")
            writer.writerow(["a", "b", "value"])
            for (a, b), value in sorted(table.items()):
                writer.writerow([a, b, format_utility(value)])
            _write(args.output, buf.getvalue())
    except CapsExceededError as exc:
        return _fail(f"oracle refused: {exc}")
    except ParseError as exc:
        return _fail(str(exc))
    return 0


if __name__ == "__main__":
    sys.exit(main())
