"""Brute-force reference counts over small, fully materialized sequences.

Nothing here shares code with the streaming path; these functions enumerate
occurrences directly and are exponential by design.
"""

from __future__ import annotations

import math
from typing import Iterable

from .model import EventBatch, Symbol, TimeConstrainedEpisode

MAX_EVENTS = 64
MAX_EXHAUSTIVE_OCCURRENCES = 15


class OracleLimitError(ValueError):
    pass


def _flatten(seq: Iterable) -> list[tuple[int, Symbol]]:
    out = set()
    for item in seq:
        if isinstance(item, EventBatch):
            out.update((item.timestamp, s) for s in item.symbols)
        else:
            out.add((item.timestamp, item.symbol))
    return sorted(out, key=lambda p: (p[0], p[1].name))


def _checked(seq: Iterable, limit: int) -> list[tuple[int, Symbol]]:
    events = _flatten(seq)
    if len(events) > limit:
        raise OracleLimitError(f"{len(events)} events exceeds oracle limit {limit}")
    return events


def _symbols_tau(episode) -> tuple[tuple, float]:
    if isinstance(episode, TimeConstrainedEpisode):
        return episode.symbols, episode.tau
    return tuple(episode), math.inf


def enumerate_occurrences(seq: Iterable, episode, limit: int = MAX_EVENTS) -> list[tuple]:
    """All strictly increasing timestamp tuples matching the episode within tau.

    ``episode`` may also be a plain symbol sequence, meaning no time constraint.
    """
    events = _checked(seq, limit)
    symbols, tau = _symbols_tau(episode)
    k = len(symbols)
    found: list[tuple] = []
    prefix: list[int] = []

    def extend(start: int) -> None:
        i = len(prefix)
        for idx in range(start, len(events)):
            t, s = events[idx]
            if prefix and t <= prefix[-1]:
                continue
            if prefix and t - prefix[0] > tau:
                break
            if s != symbols[i]:
                continue
            prefix.append(t)
            if i == k - 1:
                found.append(tuple(prefix))
            else:
                extend(idx + 1)
            prefix.pop()

    extend(0)
    return sorted(found)


def minimal_occurrences(seq: Iterable, episode, limit: int = MAX_EVENTS) -> list[tuple]:
    """Occurrences whose window [t_1, t_k] contains no other occurrence's window."""
    occs = enumerate_occurrences(seq, episode, limit)
    windows = {(o[0], o[-1]) for o in occs}
    out = []
    for o in occs:
        a, b = o[0], o[-1]
        if not any(a <= c and d <= b and (c, d) != (a, b) for c, d in windows):
            out.append(o)
    return out


def max_nonoverlapped(seq: Iterable, episode: TimeConstrainedEpisode,
                      limit: int = MAX_EVENTS) -> int:
    """Largest set of occurrences with pairwise disjoint windows (earliest-end greedy)."""
    occs = enumerate_occurrences(seq, episode, limit)
    count = 0
    last_end = -math.inf
    for start, end in sorted({(o[0], o[-1]) for o in occs}, key=lambda w: (w[1], w[0])):
        if start > last_end:
            count += 1
            last_end = end
    return count


def max_distinct(seq: Iterable, episode: TimeConstrainedEpisode, limit: int = MAX_EVENTS,
                 max_occurrences: int = MAX_EXHAUSTIVE_OCCURRENCES) -> int:
    """Largest set of pairwise event-disjoint occurrences, by exhaustive search."""
    occs = enumerate_occurrences(seq, episode, limit)
    n = len(occs)
    if n > max_occurrences:
        raise OracleLimitError(f"{n} occurrences exceeds exhaustive limit {max_occurrences}; "
                               "use greedy_distinct")
    used = [frozenset(zip(episode.symbols, o)) for o in occs]
    conflicts = [0] * n
    for i in range(n):
        for j in range(n):
            if i != j and used[i] & used[j]:
                conflicts[i] |= 1 << j

    best = 0

    def search(i: int, chosen: int, size: int) -> None:
        nonlocal best
        if size + (n - i) <= best:
            return
        if i == n:
            best = size
            return
        if not conflicts[i] & chosen:
            search(i + 1, chosen | (1 << i), size + 1)
        search(i + 1, chosen, size)

    search(0, 0, 0)
    return best


def greedy_distinct(seq: Iterable, episode: TimeConstrainedEpisode,
                    limit: int = MAX_EVENTS) -> int:
    """Repeatedly take the lexicographically earliest occurrence and consume its events."""
    return len(greedy_distinct_occurrences(seq, episode, limit))


def greedy_distinct_occurrences(seq: Iterable, episode: TimeConstrainedEpisode,
                                limit: int = MAX_EVENTS) -> list[tuple]:
    remaining = _checked(seq, limit)
    symbols, tau = episode.symbols, episode.tau
    k = len(symbols)
    picked = []

    def first(pos: int, start: int, t1, prev) -> list[int] | None:
        for idx in range(start, len(remaining)):
            t, s = remaining[idx]
            if prev is not None and t <= prev:
                continue
            if t1 is not None and t - t1 > tau:
                return None
            if s != symbols[pos]:
                continue
            if pos == k - 1:
                return [idx]
            rest = first(pos + 1, idx + 1, t if t1 is None else t1, t)
            if rest is not None:
                return [idx] + rest
        return None

    while True:
        idxs = first(0, 0, None, None)
        if idxs is None:
            return picked
        picked.append(tuple(remaining[i][0] for i in idxs))
        for i in sorted(set(idxs), reverse=True):
            del remaining[i]

