"""Incident rules: per-group episode counters with latched threshold alerts.

Rule file lines look like::

    cell_out: low_voltage,bs_disconnect,carrier_wave @tau=3m threshold=10% of cells by district
    ne_sync: sync_path_fault,sync_fault @tau=5m threshold=5 by NE
    population cells district1=80 district2=40

An alarm raised in group ``g`` arrives on the stream as the composite symbol
``<alarm>@<g>``, so each (rule, group) pair gets its own counter.
"""

from __future__ import annotations

import logging
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .engine import CounterHandle, Engine
from .model import (Event, EventBatch, FrequencyKind, Symbol, SymbolTable,
                    TimeConstrainedEpisode, UNIT_MINUTES, intern_symbol)

log = logging.getLogger(__name__)

GROUP_SEP = "@"
_FORBIDDEN = (GROUP_SEP, ",", "|", "\n")


class RuleError(ValueError):
    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class IncidentRule:
    name: str
    alarm_symbols: tuple
    tau: int
    threshold: int | Fraction
    percent: bool
    group_key: str
    population_name: str | None = None
    population: Mapping[str, int] = field(default_factory=dict)
    mode: FrequencyKind = FrequencyKind.NON_OVERLAPPED

    def required_count(self, group: str) -> int | None:
        """Count at which ``group`` alerts; None if its population is unknown."""
        if not self.percent:
            return int(self.threshold)
        pop = self.population.get(group)
        if pop is None:
            return None
        return max(1, math.ceil(self.threshold / 100 * pop))


@dataclass(frozen=True)
class Alert:
    rule: str
    group: str
    count: int
    timestamp: int

    def __str__(self) -> str:
        return f"ALERT {self.rule} {self.group} count={self.count} t={self.timestamp}"


_RULE_RE = re.compile(
    r"^(?P<name>[^:\s]+)\s*:\s*(?P<syms>.+?)\s+@tau=(?P<tau>\d+)(?P<unit>[mh]?)"
    r"\s+threshold=(?P<thr>\d+(?:\.\d+)?)(?P<pct>%?)"
    r"(?:\s+of\s+(?P<pop>\S+))?"
    r"\s+by\s+(?P<key>\S+)"
    r"(?:\s+mode=(?P<mode>\S+))?\s*$"
)
_POP_RE = re.compile(r"^population\s+(?P<name>\S+)\s+(?P<body>.+)$")


def parse_populations(text: str) -> dict[str, dict[str, int]]:
    """Parse ``population <name> <group>=<count> ...`` lines."""
    pops: dict[str, dict[str, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _POP_RE.match(line)
        if m is None:
            raise RuleError(f"expected 'population <name> <group>=<n> ...', got {line!r}", lineno)
        _parse_population_body(m, pops, lineno)
    return pops


def _parse_population_body(m: re.Match, pops: dict, lineno: int) -> None:
    groups = pops.setdefault(m.group("name"), {})
    for item in m.group("body").split():
        g, eq, n = item.partition("=")
        if not eq or not n.isdigit():
            raise RuleError(f"bad population entry {item!r}", lineno)
        groups[g] = int(n)


def load_rules(text: str, ticks_per_minute: int = 60,
               populations: Mapping[str, Mapping[str, int]] | None = None) -> list[IncidentRule]:
    pops: dict[str, dict[str, int]] = {k: dict(v) for k, v in (populations or {}).items()}
    pending = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        pm = _POP_RE.match(line)
        if pm is not None:
            _parse_population_body(pm, pops, lineno)
            continue
        m = _RULE_RE.match(line)
        if m is None:
            raise RuleError(f"cannot parse rule {line!r}", lineno)
        pending.append((lineno, m))

    rules = []
    for lineno, m in pending:
        syms = tuple(s.strip() for s in m.group("syms").split(","))
        if any(not s or GROUP_SEP in s for s in syms):
            raise RuleError("alarm names must be non-empty and must not contain '@'", lineno)
        tau = int(m.group("tau"))
        if m.group("unit"):
            tau *= UNIT_MINUTES[m.group("unit")] * ticks_per_minute
        if tau <= 0:
            raise RuleError("tau must be positive", lineno)
        percent = bool(m.group("pct"))
        threshold = Fraction(m.group("thr"))
        if threshold <= 0:
            raise RuleError("threshold must be positive", lineno)
        if not percent:
            if threshold.denominator != 1:
                raise RuleError("absolute thresholds must be whole counts", lineno)
            threshold = int(threshold)
        pop_name = m.group("pop")
        if percent and pop_name is None:
            raise RuleError("percentage threshold needs 'of <population>'", lineno)
        try:
            mode = FrequencyKind.parse(m.group("mode") or "nonoverlapped")
        except ValueError as exc:
            raise RuleError(str(exc), lineno) from None
        rules.append(IncidentRule(
            name=m.group("name"), alarm_symbols=syms, tau=tau, threshold=threshold,
            percent=percent, group_key=m.group("key"), population_name=pop_name,
            population=dict(pops.get(pop_name, {})) if pop_name else {}, mode=mode))
    return rules


def compose_symbol(base: str, group_value: str, table: SymbolTable | None = None) -> Symbol:
    if not base or not group_value:
        raise ValueError("base symbol and group value must be non-empty")
    for part in (base, group_value):
        bad = [c for c in _FORBIDDEN if c in part]
        if bad:
            raise ValueError(f"{part!r} contains reserved character {bad[0]!r}")
    return intern_symbol(f"{base}{GROUP_SEP}{group_value}", table)


def bind_rule(engine: Engine, rule: IncidentRule, group_values: Iterable[str],
              table: SymbolTable | None = None) -> dict[str, CounterHandle]:
    handles = {}
    for g in group_values:
        episode = TimeConstrainedEpisode(
            tuple(compose_symbol(s, g, table) for s in rule.alarm_symbols), rule.tau)
        handles[g] = engine.register(episode, rule.mode)
    return handles


class RuleMonitor:
    """Runs rules over a live stream and latches one alert per (rule, group)."""

    def __init__(self, rules: Iterable[IncidentRule], engine: Engine | None = None,
                 groups: Iterable[str] = (), table: SymbolTable | None = None) -> None:
        self.engine = engine or Engine()
        self.rules = list(rules)
        self.table = table
        self._bound: dict[int, tuple[IncidentRule, str]] = {}
        self._handles: dict[tuple[str, str], CounterHandle] = {}
        self._latched: set[tuple[str, str]] = set()
        self._by_alarm: dict[str, list[IncidentRule]] = {}
        self._unknown: set[tuple[str, str]] = set()
        for rule in self.rules:
            for s in set(rule.alarm_symbols):
                self._by_alarm.setdefault(s, []).append(rule)
            initial = set(groups) | (set(rule.population) if rule.percent else set())
            self._bind(rule, sorted(initial))

    def _bind(self, rule: IncidentRule, groups: Iterable[str]) -> None:
        fresh = [g for g in groups if (rule.name, g) not in self._handles]
        for g, h in bind_rule(self.engine, rule, fresh, self.table).items():
            self._bound[h.id] = (rule, g)
            self._handles[(rule.name, g)] = h

    def _discover(self, symbol: Symbol) -> None:
        base, sep, group = symbol.name.rpartition(GROUP_SEP)
        if not sep:
            return
        for rule in self._by_alarm.get(base, ()):
            if (rule.name, group) in self._handles:
                continue
            if rule.percent and group not in rule.population:
                if (rule.name, group) not in self._unknown:
                    self._unknown.add((rule.name, group))
                    log.warning("rule %s: no population for group %s; not counted",
                                rule.name, group)
                continue
            self._bind(rule, [group])

    def on_count(self, handle: CounterHandle, new_count: int, timestamp: int) -> Alert | None:
        rule, group = self._bound[handle.id]
        key = (rule.name, group)
        if key in self._latched:
            return None
        need = rule.required_count(group)
        if need is None or new_count < need:
            return None
        self._latched.add(key)
        return Alert(rule.name, group, new_count, timestamp)

    def process(self, item: Event | EventBatch) -> list[Alert]:
        syms = item.symbols if isinstance(item, EventBatch) else (item.symbol,)
        for s in syms:
            self._discover(s)
        alerts = []
        for handle, occ in self.engine.process(item):
            if handle.id in self._bound:
                alert = self.on_count(handle, self.engine.frequency(handle), occ[-1])
                if alert is not None:
                    alerts.append(alert)
        return alerts

    def run(self, stream: Iterable[Event | EventBatch]) -> list[Alert]:
        out = []
        for item in stream:
            out.extend(self.process(item))
        return out

    def reset(self, rule_name: str, group: str) -> None:
        """Start a new epoch for one (rule, group): zero its counter and re-arm."""
        key = (rule_name, group)
        self.engine.reset(self._handles[key])
        self._latched.discard(key)

    def handle(self, rule_name: str, group: str) -> CounterHandle:
        return self._handles[(rule_name, group)]

    def counts(self) -> dict[tuple[str, str], int]:
        return {key: self.engine.frequency(h) for key, h in sorted(self._handles.items())}
