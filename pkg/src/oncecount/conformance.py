"""Randomized engine-versus-oracle equivalence runs."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import oracle
from .engine import Engine
from .model import (Event, FrequencyKind, SymbolTable, TimeConstrainedEpisode, make_batch)


@dataclass(frozen=True)
class Limits:
    max_len: int = 30
    max_k: int = 4
    max_sigma: int = 4
    max_tau: int = 12
    max_gap: int = 3
    complex_fraction: float = 0.0

    def __post_init__(self) -> None:
        if self.max_len > oracle.MAX_EVENTS:
            raise ValueError(f"max_len above oracle limit {oracle.MAX_EVENTS}")
        if min(self.max_k, self.max_sigma, self.max_tau, self.max_gap) < 1 or self.max_len < 0:
            raise ValueError("limits must be positive")


@dataclass
class Instance:
    stream: list
    episode: TimeConstrainedEpisode

    def describe(self) -> str:
        from .streamio import format_event
        return f"episode={self.episode} stream=[{' '.join(format_event(x) for x in self.stream)}]"


@dataclass
class Mismatch:
    instance: Instance
    mode: FrequencyKind
    engine_count: int
    oracle_count: int

    def __str__(self) -> str:
        return (f"{self.mode.value}: engine={self.engine_count} oracle={self.oracle_count} "
                f"{self.instance.describe()}")


@dataclass
class Report:
    trials: int = 0
    nonoverlapped_ok: int = 0
    distinct_ok: int = 0
    exhaustive_checked: int = 0
    mismatches: list = field(default_factory=list)
    gaps: list = field(default_factory=list)  # (instance, greedy, maximum)

    @property
    def passed(self) -> bool:
        return not self.mismatches

    def summary(self) -> str:
        lines = [
            f"nonoverlapped: {self.nonoverlapped_ok}/{self.trials} match max_nonoverlapped",
            f"distinct: {self.distinct_ok}/{self.trials} match greedy_distinct",
            f"distinct vs maximum: {self.exhaustive_checked} checked exhaustively, "
            f"{len(self.gaps)} greedy<maximum gaps",
        ]
        if self.mismatches:
            lines.append(f"FIRST COUNTEREXAMPLE {self.mismatches[0]}")
        for inst, g, m in self.gaps[:5]:
            lines.append(f"WARN greedy={g} maximum={m} {inst.describe()}")
        return "\n".join(lines)


def random_instance(rng: random.Random, limits: Limits, table: SymbolTable) -> Instance:
    sigma = rng.randint(1, limits.max_sigma)
    alphabet = [table.intern(chr(ord("A") + i)) for i in range(sigma)]
    n = rng.randint(0, limits.max_len)
    stream = []
    t = 0
    left = n
    while left > 0:
        t += rng.randint(1, limits.max_gap)
        if sigma > 1 and rng.random() < limits.complex_fraction:
            m = rng.randint(1, min(sigma, left))
            stream.append(make_batch(t, rng.sample(alphabet, m)))
            left -= m
        else:
            stream.append(Event(rng.choice(alphabet), t))
            left -= 1
    k = rng.randint(1, limits.max_k)
    episode = TimeConstrainedEpisode(tuple(rng.choice(alphabet) for _ in range(k)),
                                     rng.randint(1, limits.max_tau))
    return Instance(stream, episode)


def check_instance(inst: Instance, report: Report,
                   max_occurrences: int = oracle.MAX_EXHAUSTIVE_OCCURRENCES) -> None:
    eng = Engine()
    h_no = eng.register(inst.episode, FrequencyKind.NON_OVERLAPPED)
    h_d = eng.register(inst.episode, FrequencyKind.DISTINCT)
    eng.run(inst.stream)
    got_no, got_d = eng.frequency(h_no), eng.frequency(h_d)
    want_no = oracle.max_nonoverlapped(inst.stream, inst.episode)
    want_d = oracle.greedy_distinct(inst.stream, inst.episode)
    report.trials += 1
    if got_no == want_no:
        report.nonoverlapped_ok += 1
    else:
        report.mismatches.append(Mismatch(inst, FrequencyKind.NON_OVERLAPPED, got_no, want_no))
    if got_d == want_d:
        report.distinct_ok += 1
    else:
        report.mismatches.append(Mismatch(inst, FrequencyKind.DISTINCT, got_d, want_d))
    if len(oracle.enumerate_occurrences(inst.stream, inst.episode)) <= max_occurrences:
        report.exhaustive_checked += 1
        best = oracle.max_distinct(inst.stream, inst.episode, max_occurrences=max_occurrences)
        if got_d > best:
            report.mismatches.append(Mismatch(inst, FrequencyKind.DISTINCT, got_d, best))
        elif got_d < best:
            report.gaps.append((inst, got_d, best))


def run_suite(trials: int, limits: Limits = Limits(), seed: int = 0) -> Report:
    rng = random.Random(seed)
    table = SymbolTable()
    report = Report()
    for _ in range(trials):
        check_instance(random_instance(rng, limits, table), report)
    return report
