"""Throughput, scalability and memory sweeps over synthetic workloads."""

from __future__ import annotations

import csv
import gc
import io
import random
import statistics
import time
from dataclasses import asdict, dataclass, field, fields
from typing import Iterable, Sequence

import numpy as np

from .engine import Engine
from .model import Event, FrequencyKind, TimeConstrainedEpisode, intern_symbol
from .streamio import GeneratorSpec, format_event, generate_uniform, measure_selectivity, \
    parse_event_line, symbol_names


@dataclass
class BenchRow:
    sweep: str
    mode: str
    n: int
    k: int
    tau: int
    sigma: int
    episodes: int
    events: int
    wall_time: float
    throughput: float
    selectivity: float
    peak_entries: int
    mean_frequency: float
    note: str = ""


@dataclass
class BenchReport:
    workload: str
    rows: list[BenchRow] = field(default_factory=list)

    def to_csv(self, out: io.TextIOBase | None = None) -> str:
        buf = out or io.StringIO()
        w = csv.DictWriter(buf, fieldnames=[f.name for f in fields(BenchRow)])
        w.writeheader()
        for r in self.rows:
            w.writerow(asdict(r))
        return buf.getvalue() if out is None else ""

    def to_table(self) -> str:
        head = f"{'sweep':<12}{'mode':<14}{'n':>9}{'k':>4}{'tau':>7}{'sel':>9}" \
               f"{'time_s':>10}{'events/s':>13}{'peak':>7}{'freq':>9}"
        lines = [f"# {self.workload}", head]
        for r in self.rows:
            lines.append(f"{r.sweep:<12}{r.mode:<14}{r.n:>9}{r.k:>4}{r.tau:>7}"
                         f"{r.selectivity:>9.4f}{r.wall_time:>10.4f}{r.throughput:>13,.0f}"
                         f"{r.peak_entries:>7}{r.mean_frequency:>9.1f}"
                         + (f"  {r.note}" if r.note else ""))
        return "\n".join(lines)


def random_episodes(sigma: int, k: int, count: int, tau: int, seed: int = 0
                    ) -> list[TimeConstrainedEpisode]:
    rng = random.Random(seed)
    names = symbol_names(sigma)
    return [TimeConstrainedEpisode(tuple(intern_symbol(rng.choice(names)) for _ in range(k)), tau)
            for _ in range(count)]


def prefix_episodes(sigma: int, k: int, count: int, tau: int, k_max: int, seed: int = 0
                    ) -> list[TimeConstrainedEpisode]:
    """Length-k prefixes of ``count`` fixed random episodes of length ``k_max``."""
    base = random_episodes(sigma, k_max, count, tau, seed)
    return [TimeConstrainedEpisode(e.symbols[:k], tau) for e in base]


def run_once(events: Sequence[Event] | Sequence[str], episode: TimeConstrainedEpisode,
             mode: FrequencyKind) -> tuple[float, Engine]:
    """Time one pass of a single-counter engine; strings are parsed inside the timer.

    The garbage collector is paused while timing, as ``timeit`` does.
    """
    eng = Engine()
    eng.register(episode, mode)
    process = eng.process_event
    was_enabled = gc.isenabled()
    gc.disable()
    try:
        if events and isinstance(events[0], str):
            t0 = time.perf_counter()
            for line in events:
                process(parse_event_line(line))
            return time.perf_counter() - t0, eng
        t0 = time.perf_counter()
        for ev in events:
            process(ev)
        return time.perf_counter() - t0, eng
    finally:
        if was_enabled:
            gc.enable()


def measure(events: Sequence[Event], episodes: Sequence[TimeConstrainedEpisode],
            mode: FrequencyKind = FrequencyKind.NON_OVERLAPPED, repeats: int = 5,
            preparse: bool = True) -> dict:
    """Median over ``repeats`` runs of the per-episode average time for one pass."""
    feed = events if preparse else [format_event(e) for e in events]
    run_times = []
    peak = 0
    freqs = []
    sels = []
    for rep in range(repeats):
        times = []
        for ep in episodes:
            dt, eng = run_once(feed, ep, mode)
            times.append(dt)
            if rep == 0:
                m = eng.metrics()
                (h,) = m.per_counter_peak
                peak = max(peak, m.per_counter_peak[h])
                freqs.append(m.per_counter_frequency[h])
                sels.append(float(measure_selectivity(m)) if m.events_processed else 0.0)
        run_times.append(statistics.fmean(times))
    wall = statistics.median(run_times)
    return {
        "wall_time": wall,
        "throughput": len(events) / wall if wall > 0 else float("inf"),
        "peak_entries": peak,
        "mean_frequency": statistics.fmean(freqs) if freqs else 0.0,
        "selectivity": statistics.fmean(sels) if sels else 0.0,
    }


def _row(sweep: str, mode: FrequencyKind, n: int, k: int, tau: int, sigma: int,
         episodes: int, stats: dict, note: str = "") -> BenchRow:
    return BenchRow(sweep=sweep, mode=mode.value, n=n, k=k, tau=tau, sigma=sigma,
                    episodes=episodes, events=n, note=note, **stats)


def tau_sweep(taus: Iterable[int], k: int = 5, n: int = 100_000, sigma: int = 20,
              episodes: int = 10, repeats: int = 5, seed: int = 0,
              mode: FrequencyKind = FrequencyKind.NON_OVERLAPPED, preparse: bool = True
              ) -> list[BenchRow]:
    events = generate_uniform(GeneratorSpec(sigma, n, seed))
    rows = []
    for tau in taus:
        eps = random_episodes(sigma, k, episodes, tau, seed)
        rows.append(_row("tau", mode, n, k, tau, sigma, episodes,
                         measure(events, eps, mode, repeats, preparse)))
    return rows


def n_sweep(ns: Iterable[int], k: int = 5, tau: int = 100, sigma: int = 20,
            episodes: int = 10, repeats: int = 5, seed: int = 0,
            mode: FrequencyKind = FrequencyKind.NON_OVERLAPPED, preparse: bool = True
            ) -> list[BenchRow]:
    """Prefixes of one stream; repeats are interleaved across n so that slow
    phases of a shared machine hit every point alike."""
    ns = list(ns)
    full = generate_uniform(GeneratorSpec(sigma, max(ns), seed))
    eps = random_episodes(sigma, k, episodes, tau, seed)
    first: dict[int, dict] = {}
    walls: dict[int, list[float]] = {n: [] for n in ns}
    for _ in range(repeats):
        for n in ns:
            stats = measure(full[:n], eps, mode, 1, preparse)
            first.setdefault(n, stats)
            walls[n].append(stats["wall_time"])
    rows = []
    for n in ns:
        stats = dict(first[n], wall_time=statistics.median(walls[n]))
        stats["throughput"] = n / stats["wall_time"] if stats["wall_time"] > 0 else float("inf")
        rows.append(_row("n", mode, n, k, tau, sigma, episodes, stats))
    return rows


def k_sweep(ks: Iterable[int], tau: int = 100, n: int = 100_000, sigma: int = 20,
            episodes: int = 10, repeats: int = 1, seed: int = 0,
            mode: FrequencyKind = FrequencyKind.NON_OVERLAPPED, preparse: bool = True
            ) -> list[BenchRow]:
    ks = list(ks)
    events = generate_uniform(GeneratorSpec(sigma, n, seed))
    rows = []
    for k in ks:
        eps = prefix_episodes(sigma, k, episodes, tau, max(ks), seed)
        rows.append(_row("k", mode, n, k, tau, sigma, episodes,
                         measure(events, eps, mode, repeats, preparse)))
    return rows


def selectivity_workloads(sigma: int, k: int, tau: int) -> dict[str, list[TimeConstrainedEpisode]]:
    """Episode families spanning low to high selectivity on a uniform stream."""
    names = symbol_names(sigma)
    absent = intern_symbol("__absent__")
    sym = [intern_symbol(x) for x in names]
    return {
        "absent": [TimeConstrainedEpisode((absent,) * k, tau)],
        "distinct-symbols": [TimeConstrainedEpisode(tuple(sym[i % sigma] for i in range(k)), tau)],
        "two-symbols": [TimeConstrainedEpisode(tuple(sym[i % 2] for i in range(k)), tau)],
        "repeated": [TimeConstrainedEpisode((sym[0],) * (k - 1) + (absent,), tau)],
    }


def selectivity_sweep(k: int = 5, tau: int = 100, n: int = 100_000, sigma: int = 2,
                      repeats: int = 5, seed: int = 0,
                      mode: FrequencyKind = FrequencyKind.NON_OVERLAPPED, preparse: bool = True
                      ) -> list[BenchRow]:
    events = generate_uniform(GeneratorSpec(sigma, n, seed))
    rows = []
    for name, eps in selectivity_workloads(sigma, k, tau).items():
        rows.append(_row("selectivity", mode, n, k, tau, sigma, len(eps),
                         measure(events, eps, mode, repeats, preparse), note=name))
    return rows


def linear_fit(xs: Sequence[float], ys: Sequence[float]) -> tuple[float, float, float]:
    """Least-squares slope, intercept and R^2."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 - float((resid ** 2).sum()) / ss_tot if ss_tot > 0 else 1.0
    return float(slope), float(intercept), r2
