"""``conemetric oracle``: exhaustive small-instance sweeps."""

from __future__ import annotations

import argparse
from fractions import Fraction

from conemetric.commands.base import (
    EXIT_NOT_EXISTS,
    EXIT_OK,
    Command,
    CommandResult,
    RunConfig,
    parse_range,
)
from conemetric.errors import InputError
from conemetric.oracle import (
    OracleReport,
    corollary_sweep,
    lemma_a1_sweep,
    lemma_a2_sweep,
    parity_triples_sweep,
    pq_report,
    roundtrip_sweep,
)
from conemetric.schemas import parse_rational

SWEEPS = ("lemma-a1", "lemma-a2", "parity-triples", "pq", "corollary", "roundtrip")


def _configure(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("sweep", choices=SWEEPS)
    parser.add_argument("--max-len", type=int, help="longest residue vector (lemma sweeps)")
    parser.add_argument("--max-entry", type=int, help="largest |entry| (lemma sweeps)")
    parser.add_argument("--alpha", type=parse_range, default="2..8", help="saddle angles, a..b")
    parser.add_argument("--beta-den", type=parse_range, default="2,3,4", help="denominators")
    parser.add_argument("--max-numerator", type=int, default=24)
    parser.add_argument("--S", dest="S", help="p + q for the pq sweep")
    parser.add_argument("--D", dest="D", help="q - p for the pq sweep")
    parser.add_argument("--count", type=int, default=1000, help="round-trip divisors")
    parser.add_argument("--seed", type=int, default=0, help="round-trip seed")


def _rational(config: RunConfig, name: str) -> Fraction:
    value = config.option(name)
    if value is None:
        raise InputError(f"the pq sweep needs --{name}")
    try:
        return parse_rational(value)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def run_oracle(config: RunConfig) -> CommandResult:
    """Run one sweep; exit 1 when it finds a counterexample."""
    sweep = config.option("sweep")
    report: OracleReport
    if sweep == "lemma-a1":
        report = lemma_a1_sweep(config.option("max_len"), config.option("max_entry"))
    elif sweep == "lemma-a2":
        report = lemma_a2_sweep(config.option("max_len"), config.option("max_entry"))
    elif sweep == "parity-triples":
        report = parity_triples_sweep(
            config.option("alpha"), config.option("beta_den"), config.option("max_numerator")
        )
    elif sweep == "pq":
        report = pq_report(_rational(config, "S"), _rational(config, "D"))
    elif sweep == "corollary":
        report = corollary_sweep()
    else:
        report = roundtrip_sweep(config.option("count"), config.option("seed"))
    return CommandResult(payload=report, exit_code=EXIT_OK if report.ok else EXIT_NOT_EXISTS)


def get_oracle_command() -> Command:
    return Command(
        name="oracle",
        help="Cross-check deciders and planner on every small instance.",
        configure=_configure,
        run=run_oracle,
    )
