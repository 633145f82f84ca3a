"""Event file format, stream reading, synthetic workloads and selectivity.

The interchange format is one record per line::

    # comment
    <timestamp>,<symbol>
    <timestamp>,<symbol>|<symbol>|...   (several symbols at one timestamp)
"""

from __future__ import annotations

import io
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import IO, Iterable, Iterator, Union

import numpy as np

from .engine import EngineMetrics
from .model import Event, EventBatch, SymbolTable, intern_symbol, make_batch


class StreamError(ValueError):
    def __init__(self, message: str, record: int | None = None) -> None:
        self.record = record
        super().__init__(f"record {record}: {message}" if record is not None else message)


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def parse_event_line(line: str, lineno: int | None = None,
                     table: SymbolTable | None = None) -> Event | EventBatch:
    ts, sep, rest = line.strip().partition(",")
    if not sep or not rest.strip():
        raise ParseError(f"expected '<timestamp>,<symbol>', got {line.strip()!r}", lineno)
    try:
        t = int(ts)
    except ValueError:
        raise ParseError(f"bad timestamp {ts!r}", lineno) from None
    if t < 0:
        raise ParseError(f"negative timestamp {t}", lineno)
    names = [n.strip() for n in rest.split("|")]
    if any(not n for n in names):
        raise ParseError(f"empty symbol in {line.strip()!r}", lineno)
    if len(names) == 1:
        return Event(intern_symbol(names[0], table), t)
    return make_batch(t, (intern_symbol(n, table) for n in names))


def format_event(item: Event | EventBatch) -> str:
    if isinstance(item, EventBatch):
        return f"{item.timestamp}," + "|".join(sorted(s.name for s in item.symbols))
    return f"{item.timestamp},{item.symbol.name}"


Source = Union[str, os.PathLike, IO[str], Iterable]


@dataclass(frozen=True)
class StreamSource:
    """Where events come from: a path, an open text stream or an in-memory list."""

    origin: Source
    format: str = "csv-lines"


def _lines(origin) -> Iterator[str | Event | EventBatch]:
    if isinstance(origin, (str, os.PathLike)):
        with open(origin, encoding="utf-8") as fh:
            yield from fh
    else:
        yield from origin


def read_stream(source: Source | StreamSource, table: SymbolTable | None = None
                ) -> Iterator[Event | EventBatch]:
    """Lazily yield events, failing at the first timestamp regression.

    Parse errors carry the physical line number; ordering errors carry the
    record number (non-comment records, starting at 1).
    """
    origin = source.origin if isinstance(source, StreamSource) else source
    last = None
    record = 0
    for lineno, raw in enumerate(_lines(origin), 1):
        if isinstance(raw, (Event, EventBatch)):
            item = raw
            record += 1
        else:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            record += 1
            item = parse_event_line(line, lineno, table)
        t = item.timestamp
        if last is not None and t < last:
            raise StreamError(f"timestamp {t} after {last}", record)
        last = t
        yield item


def write_stream(items: Iterable[Event | EventBatch], out: str | os.PathLike | IO[str],
                 header: str | None = None) -> None:
    if isinstance(out, (str, os.PathLike)):
        with open(out, "w", encoding="utf-8") as fh:
            write_stream(items, fh, header)
        return
    if header:
        for h in header.splitlines():
            out.write(f"# {h}\n")
    for item in items:
        out.write(format_event(item) + "\n")


def dumps(items: Iterable[Event | EventBatch]) -> str:
    buf = io.StringIO()
    write_stream(items, buf)
    return buf.getvalue()


@dataclass(frozen=True)
class GeneratorSpec:
    alphabet_size: int
    length: int
    seed: int = 0
    tick_interval: int = 1

    def __post_init__(self) -> None:
        if self.alphabet_size < 1:
            raise ValueError("alphabet_size must be >= 1")
        if self.length < 0:
            raise ValueError("length must be >= 0")
        if self.tick_interval < 1:
            raise ValueError("tick_interval must be >= 1")


def symbol_names(alphabet_size: int) -> list[str]:
    return [f"s{i}" for i in range(alphabet_size)]


def generate_uniform(spec: GeneratorSpec, table: SymbolTable | None = None) -> list[Event]:
    """i.i.d. uniform symbols at timestamps 0, tick, 2*tick, ..."""
    alphabet = [intern_symbol(n, table) for n in symbol_names(spec.alphabet_size)]
    rng = np.random.default_rng(spec.seed)
    draws = rng.integers(0, spec.alphabet_size, size=spec.length)
    tick = spec.tick_interval
    return [Event(alphabet[d], i * tick) for i, d in enumerate(draws.tolist())]


def measure_selectivity(metrics: EngineMetrics) -> Fraction:
    """Timestamps inserted into any OccMap per processed event."""
    if metrics.events_processed <= 0:
        raise ValueError("selectivity is undefined before any event is processed")
    return Fraction(metrics.matches, metrics.events_processed)
