"""One-pass counting engine over many registered episodes."""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Union

from .model import Event, EventBatch, FrequencyKind, TimeConstrainedEpisode
from .occmap import OccMap


@dataclass(frozen=True)
class CounterHandle:
    id: int
    episode: TimeConstrainedEpisode
    mode: FrequencyKind

    def __str__(self) -> str:
        return f"#{self.id} {self.episode} {self.mode.value}"


@dataclass
class EngineMetrics:
    events_processed: int = 0
    matches: int = 0
    per_counter_entries: dict = field(default_factory=dict)
    per_counter_frequency: dict = field(default_factory=dict)
    per_counter_peak: dict = field(default_factory=dict)


class _Counter:
    __slots__ = ("handle", "occmap", "frequency")

    def __init__(self, handle: CounterHandle) -> None:
        self.handle = handle
        self.occmap = OccMap(handle.episode, handle.mode)
        self.frequency = 0


Emission = tuple  # (CounterHandle, occurrence)
StreamItem = Union[Event, EventBatch]


class Engine:
    """Feeds each arriving event to every OccMap whose episode mentions its symbol."""

    _ids = itertools.count()

    def __init__(self) -> None:
        self._counters: dict[int, _Counter] = {}
        self._index: dict[int, list[_Counter]] = {}
        self._events = 0
        self._last_t: int | None = None
        self._seen_at_t: set[int] = set()

    def register(self, episode: TimeConstrainedEpisode,
                 mode: FrequencyKind = FrequencyKind.NON_OVERLAPPED) -> CounterHandle:
        handle = CounterHandle(next(self._ids), episode, mode)
        counter = _Counter(handle)
        self._counters[handle.id] = counter
        for sid in counter.occmap.symbol_ids:
            self._index.setdefault(sid, []).append(counter)
        return handle

    @property
    def handles(self) -> list[CounterHandle]:
        return [c.handle for c in self._counters.values()]

    def _counter(self, handle: CounterHandle) -> _Counter:
        try:
            return self._counters[handle.id]
        except (KeyError, AttributeError):
            raise KeyError(f"unknown counter handle {handle!r}") from None

    def process_event(self, event: Event) -> list[Emission]:
        t = event.timestamp
        if self._last_t is not None and t <= self._last_t:
            if t < self._last_t:
                raise ValueError(f"event at {t} arrives after {self._last_t}")
            if event.symbol.id in self._seen_at_t:
                self._events += 1
                return []
        else:
            self._seen_at_t.clear()
            self._last_t = t
        self._seen_at_t.add(event.symbol.id)
        self._events += 1
        out = []
        for c in self._index.get(event.symbol.id, ()):
            om = c.occmap
            if om.list_update(event):
                res = om.validate()
                if res.accepted:
                    c.frequency += 1
                    out.append((c.handle, res.occurrence))
        return out

    def process_batch(self, batch: EventBatch) -> list[Emission]:
        if self._last_t is not None and batch.timestamp < self._last_t:
            raise ValueError(f"batch at {batch.timestamp} arrives after {self._last_t}")
        out = []
        for ev in batch.events():
            out.extend(self.process_event(ev))
        return out

    def process(self, item: StreamItem) -> list[Emission]:
        if isinstance(item, EventBatch):
            return self.process_batch(item)
        return self.process_event(item)

    def run(self, stream: Iterable[StreamItem]) -> list[Emission]:
        out = []
        for item in stream:
            out.extend(self.process(item))
        return out

    def frequency(self, handle: CounterHandle) -> int:
        return self._counter(handle).frequency

    def occmap(self, handle: CounterHandle) -> OccMap:
        return self._counter(handle).occmap

    def reset(self, handle: CounterHandle) -> None:
        c = self._counter(handle)
        c.occmap.reset()
        c.frequency = 0

    def metrics(self) -> EngineMetrics:
        cs = self._counters.values()
        return EngineMetrics(
            events_processed=self._events,
            matches=sum(c.occmap.inserted for c in cs),
            per_counter_entries={c.handle: c.occmap.total_entries() for c in cs},
            per_counter_frequency={c.handle: c.frequency for c in cs},
            per_counter_peak={c.handle: c.occmap.peak for c in cs},
        )


class ShardedEngine:
    """Counters partitioned over ``shards`` independent engines.

    Each shard owns its counters; events are fanned out by value to the shards
    whose alphabets contain the symbol.  ``run`` processes shards on a thread
    pool and merges emissions back into stream order, so the result matches a
    single engine exactly.
    """

    def __init__(self, shards: int = 2) -> None:
        if shards < 1:
            raise ValueError("shards must be >= 1")
        self.shards = [Engine() for _ in range(shards)]
        self._owner: dict[int, Engine] = {}
        self._alphabets: list[set[int]] = [set() for _ in range(shards)]
        self._rr = itertools.cycle(range(shards))
        self._events = 0
        self._last_t: int | None = None

    def register(self, episode: TimeConstrainedEpisode,
                 mode: FrequencyKind = FrequencyKind.NON_OVERLAPPED) -> CounterHandle:
        i = next(self._rr)
        handle = self.shards[i].register(episode, mode)
        self._owner[handle.id] = self.shards[i]
        self._alphabets[i].update(s.id for s in episode.symbols)
        return handle

    def process(self, item: StreamItem) -> list[Emission]:
        t = item.timestamp
        if self._last_t is not None and t < self._last_t:
            raise ValueError(f"event at {t} arrives after {self._last_t}")
        self._last_t = t
        out = []
        for ev in item.events() if isinstance(item, EventBatch) else (item,):
            self._events += 1
            sid = ev.symbol.id
            got = []
            for eng, alpha in zip(self.shards, self._alphabets):
                if sid in alpha:
                    got.extend(eng.process_event(ev))
            out.extend(sorted(got, key=lambda e: e[0].id))
        return out

    def run(self, stream: Iterable[StreamItem]) -> list[Emission]:
        flat = []
        last = self._last_t
        for item in stream:
            if last is not None and item.timestamp < last:
                raise ValueError(f"event at {item.timestamp} arrives after {last}")
            last = item.timestamp
            flat.extend(item.events() if isinstance(item, EventBatch) else (item,))
        self._last_t = last
        self._events += len(flat)

        def work(i: int) -> list[tuple]:
            eng, alpha = self.shards[i], self._alphabets[i]
            got = []
            for pos, ev in enumerate(flat):
                if ev.symbol.id in alpha:
                    for em in eng.process_event(ev):
                        got.append((pos, em[0].id, em))
            return got

        with ThreadPoolExecutor(max_workers=len(self.shards)) as pool:
            parts = list(pool.map(work, range(len(self.shards))))
        merged = sorted(itertools.chain.from_iterable(parts), key=lambda x: (x[0], x[1]))
        return [em for _, _, em in merged]

    def frequency(self, handle: CounterHandle) -> int:
        return self._owner[handle.id].frequency(handle)

    def reset(self, handle: CounterHandle) -> None:
        self._owner[handle.id].reset(handle)

    def metrics(self) -> EngineMetrics:
        m = EngineMetrics(events_processed=self._events)
        for eng in self.shards:
            sub = eng.metrics()
            m.matches += sub.matches
            m.per_counter_entries.update(sub.per_counter_entries)
            m.per_counter_frequency.update(sub.per_counter_frequency)
            m.per_counter_peak.update(sub.per_counter_peak)
        return m
