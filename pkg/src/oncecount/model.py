"""Symbols, events, episodes and the relations between occurrences."""

from __future__ import annotations

import enum
import re
import threading
from typing import Iterable, NamedTuple, Sequence


class Symbol(NamedTuple):
    id: int
    name: str

    def __str__(self) -> str:
        return self.name


class SymbolTable:
    """Interns symbol names to small integer ids.

    Interning is the only shared mutable state in the package, so it takes a
    lock.
    """

    def __init__(self) -> None:
        self._by_name: dict[str, Symbol] = {}
        self._by_id: list[Symbol] = []
        self._lock = threading.Lock()

    def intern(self, name: str) -> Symbol:
        sym = self._by_name.get(name)
        if sym is not None:
            return sym
        if not isinstance(name, str) or not name:
            raise ValueError("symbol name must be a non-empty string")
        with self._lock:
            sym = self._by_name.get(name)
            if sym is None:
                sym = Symbol(len(self._by_id), name)
                self._by_id.append(sym)
                self._by_name[name] = sym
        return sym

    def lookup(self, ident: int) -> Symbol:
        return self._by_id[ident]

    def __contains__(self, name: str) -> bool:
        return name in self._by_name

    def __len__(self) -> int:
        return len(self._by_id)


default_table = SymbolTable()


def intern_symbol(name: str, table: SymbolTable | None = None) -> Symbol:
    return (table or default_table).intern(name)


class Event(NamedTuple):
    symbol: Symbol
    timestamp: int


class EventBatch(NamedTuple):
    """Symbols that happen at the same timestamp (a complex event)."""

    timestamp: int
    symbols: frozenset

    def events(self) -> list[Event]:
        # name order keeps batch processing deterministic
        return [Event(s, self.timestamp) for s in sorted(self.symbols, key=lambda s: s.name)]


def make_batch(timestamp: int, symbols: Iterable[Symbol]) -> EventBatch:
    syms = frozenset(symbols)
    if not syms:
        raise ValueError("an event batch needs at least one symbol")
    return EventBatch(timestamp, syms)


class FrequencyKind(enum.Enum):
    NON_OVERLAPPED = "nonoverlapped"
    DISTINCT = "distinct"

    @classmethod
    def parse(cls, text: str) -> "FrequencyKind":
        try:
            return cls(text.strip().lower().replace("-", "").replace("_", ""))
        except ValueError:
            raise ValueError(f"unknown frequency kind {text!r}") from None


# An occurrence is a strictly increasing tuple of k timestamps.
Occurrence = tuple


class TimeConstrainedEpisode(NamedTuple):
    symbols: tuple
    tau: int

    @property
    def k(self) -> int:
        return len(self.symbols)

    def __str__(self) -> str:
        return ",".join(s.name for s in self.symbols) + f"@tau={self.tau}"


def make_episode(names: Sequence[str] | str, tau: int,
                 table: SymbolTable | None = None) -> TimeConstrainedEpisode:
    """Build an episode from symbol names, e.g. ``make_episode("AAB", 3)``."""
    if isinstance(names, str):
        names = list(names) if "," not in names else names.split(",")
    symbols = tuple(intern_symbol(n.strip(), table) for n in names)
    if not symbols:
        raise ValueError("an episode needs at least one symbol")
    if isinstance(tau, bool) or not isinstance(tau, int) or tau <= 0:
        raise ValueError(f"tau must be a positive integer, got {tau!r}")
    return TimeConstrainedEpisode(symbols, tau)


_EPISODE_RE = re.compile(
    r"^\s*(?P<syms>[^@]+?)\s*@\s*tau\s*=\s*(?P<tau>\d+)(?P<unit>[mh]?)\s*$")
UNIT_MINUTES = {"m": 1, "h": 60}


def parse_episode(text: str, table: SymbolTable | None = None,
                  ticks_per_minute: int | None = None) -> TimeConstrainedEpisode:
    """Parse the ``A,A,B@tau=3`` episode syntax.

    ``tau`` may carry an ``m`` or ``h`` suffix when ``ticks_per_minute`` is given.
    """
    m = _EPISODE_RE.match(text)
    if m is None:
        raise ValueError(f"malformed episode {text!r}; expected e.g. 'A,A,B@tau=3'")
    names = [n.strip() for n in m.group("syms").split(",")]
    if any(not n for n in names):
        raise ValueError(f"empty symbol name in episode {text!r}")
    tau = int(m.group("tau"))
    if m.group("unit"):
        if ticks_per_minute is None:
            raise ValueError(f"tau unit in {text!r} needs a declared tick length")
        tau *= UNIT_MINUTES[m.group("unit")] * ticks_per_minute
    return make_episode(names, tau, table)


def is_valid_occurrence(episode: TimeConstrainedEpisode, events: Iterable[Event],
                        ts: Sequence[int]) -> bool:
    if len(ts) != episode.k:
        raise ValueError(f"occurrence has {len(ts)} timestamps, episode has {episode.k}")
    if any(a >= b for a, b in zip(ts, ts[1:])):
        return False
    if ts[-1] - ts[0] > episode.tau:
        return False
    present = set()
    for ev in events:
        if isinstance(ev, EventBatch):
            present.update((s, ev.timestamp) for s in ev.symbols)
        else:
            present.add((ev.symbol, ev.timestamp))
    return all((sym, t) in present for sym, t in zip(episode.symbols, ts))


def are_nonoverlapped(o1: Sequence[int], o2: Sequence[int]) -> bool:
    return o2[0] > o1[-1] or o1[0] > o2[-1]


def are_distinct(episode: TimeConstrainedEpisode, o1: Sequence[int], o2: Sequence[int]) -> bool:
    """True when the two occurrences use no common (symbol, timestamp) event."""
    used = set(zip(episode.symbols, o1))
    return not any(pair in used for pair in zip(episode.symbols, o2))
