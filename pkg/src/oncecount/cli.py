"""``oncecount`` command line: count, gen, oracle-check, bench, monitor.

Exit codes: 0 success, 1 usage, 2 input error, 3 conformance failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path
from typing import Sequence

from . import bench, conformance
from .engine import Engine, ShardedEngine
from .model import FrequencyKind, parse_episode
from .rules import RuleError, RuleMonitor, load_rules, parse_populations
from .streamio import GeneratorSpec, ParseError, StreamError, generate_uniform, read_stream, \
    write_stream

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_CONFORMANCE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    try:
        vals = [int(float(x)) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _mode(text: str) -> FrequencyKind:
    try:
        return FrequencyKind.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _open_stream(path: str | None):
    if path in (None, "-"):
        return sys.stdin
    return Path(path)


def _replayed(items, speed: float):
    """Yield items with their original gaps, ``speed`` ticks per second."""
    prev = None
    for item in items:
        if prev is not None and item.timestamp > prev:
            time.sleep((item.timestamp - prev) / speed)
        prev = item.timestamp
        yield item


def cmd_count(args) -> int:
    if not args.episode:
        raise UsageError("count needs at least one --episode")
    try:
        episodes = [parse_episode(e, ticks_per_minute=args.tau_unit) for e in args.episode]
    except ValueError as exc:
        raise UsageError(str(exc))
    engine = ShardedEngine(args.shards) if args.shards > 1 else Engine()
    handles = [engine.register(ep, args.mode) for ep in episodes]
    items = read_stream(_open_stream(args.stream))
    if args.replay:
        items = _replayed(items, args.replay)
    if args.shards > 1:
        engine.run(items)
    else:
        for item in items:
            engine.process(item)
    for ep, h in zip(episodes, handles):
        print(f"{ep} {args.mode.value} {engine.frequency(h)}")
    return EXIT_OK


def cmd_gen(args) -> int:
    spec = GeneratorSpec(args.sigma, args.n, args.seed, args.interval)
    header = (f"oncecount gen n={spec.length} sigma={spec.alphabet_size} "
              f"seed={spec.seed} interval={spec.tick_interval}")
    events = generate_uniform(spec)
    write_stream(events, sys.stdout if args.out in (None, "-") else args.out, header)
    return EXIT_OK


def cmd_oracle_check(args) -> int:
    limits = conformance.Limits(args.max_len, args.max_k, args.max_sigma, args.max_tau,
                                args.max_gap, args.complex_fraction)
    report = conformance.run_suite(args.trials, limits, args.seed)
    print(report.summary())
    return EXIT_OK if report.passed else EXIT_CONFORMANCE


def cmd_bench(args) -> int:
    report = bench.BenchReport(
        f"uniform sigma={args.sigma} seed={args.seed} mode={args.mode.value} "
        f"episodes={args.episodes} repeats={args.repeats} preparse={args.preparse}")
    common = dict(sigma=args.sigma, repeats=args.repeats, seed=args.seed, mode=args.mode,
                  preparse=args.preparse)
    sweeps = []
    if args.tau:
        sweeps.append(("tau", lambda: bench.tau_sweep(args.tau, k=args.k[0], n=args.n[0],
                                                      episodes=args.episodes, **common)))
    if args.n_sweep:
        sweeps.append(("n", lambda: bench.n_sweep(args.n, k=args.k[0], tau=args.fixed_tau,
                                                  episodes=args.episodes, **common)))
    if args.k_sweep:
        sweeps.append(("k", lambda: bench.k_sweep(args.k, tau=args.fixed_tau, n=args.n[0],
                                                  episodes=args.episodes, **common)))
    if args.selectivity:
        sel = dict(common, sigma=2)
        sweeps.append(("selectivity", lambda: bench.selectivity_sweep(
            k=args.k[0], tau=args.fixed_tau, n=args.n[0], **sel)))
    if not sweeps:
        raise UsageError("bench needs at least one of --tau, --n-sweep, --k-sweep, --selectivity")
    for name, run in sweeps:
        try:
            report.rows.extend(run())
        except Exception as exc:  # annotate, keep going
            report.rows.append(bench.BenchRow(name, args.mode.value, 0, 0, 0, args.sigma, 0,
                                              0, 0.0, 0.0, 0.0, 0, 0.0, note=f"failed: {exc}"))
    print(report.to_table())
    if args.n_sweep and len(args.n) > 1:
        rows = [r for r in report.rows if r.sweep == "n" and r.events]
        if len(rows) > 1:
            slope, _, r2 = bench.linear_fit([r.n for r in rows],
                                            [r.wall_time for r in rows])
            print(f"# n sweep linear fit: {slope * 1e6:.3f} us/event R^2={r2:.4f}")
    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            report.to_csv(fh)
    return EXIT_OK


def cmd_monitor(args) -> int:
    text = Path(args.rules).read_text(encoding="utf-8")
    pops = parse_populations(Path(args.populations).read_text(encoding="utf-8")) \
        if args.populations else None
    rules = load_rules(text, ticks_per_minute=args.tau_unit or 60, populations=pops)
    monitor = RuleMonitor(rules, groups=args.group or ())
    try:
        for item in read_stream(_open_stream(args.stream)):
            for alert in monitor.process(item):
                print(alert, flush=True)
    except KeyboardInterrupt:
        pass
    for (rule, group), n in monitor.counts().items():
        print(f"COUNT {rule} {group} {n}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="oncecount",
                description="One-pass time-constrained episode counting.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("count", help="count episodes over an event file or stdin")
    c.add_argument("stream", nargs="?", help="event file (default: stdin)")
    c.add_argument("--episode", action="append", default=[], metavar="SPEC",
                   help="episode like A,A,B@tau=3 (repeatable)")
    c.add_argument("--mode", type=_mode, default=FrequencyKind.NON_OVERLAPPED,
                   help="nonoverlapped (default) or distinct")
    c.add_argument("--tau-unit", type=int, default=None, metavar="TICKS",
                   help="ticks per minute, enables m/h suffixes on tau")
    c.add_argument("--shards", type=int, default=1)
    c.add_argument("--replay", type=float, default=None, metavar="TICKS_PER_SEC",
                   help="sleep between events to replay original spacing")
    c.set_defaults(func=cmd_count)

    g = sub.add_parser("gen", help="write a uniform synthetic event file")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--sigma", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--interval", type=int, default=1)
    g.add_argument("--out", default=None, help="output path (default: stdout)")
    g.set_defaults(func=cmd_gen)

    o = sub.add_parser("oracle-check", help="randomized engine-versus-oracle conformance")
    d = conformance.Limits()
    o.add_argument("--trials", type=int, default=10_000)
    o.add_argument("--seed", type=int, default=0)
    o.add_argument("--max-len", type=int, default=d.max_len)
    o.add_argument("--max-k", type=int, default=d.max_k)
    o.add_argument("--max-sigma", type=int, default=d.max_sigma)
    o.add_argument("--max-tau", type=int, default=d.max_tau)
    o.add_argument("--max-gap", type=int, default=d.max_gap)
    o.add_argument("--complex-fraction", type=float, default=d.complex_fraction)
    o.set_defaults(func=cmd_oracle_check)

    b = sub.add_parser("bench", help="throughput and memory sweeps")
    b.add_argument("--tau", type=_int_list, default=None, help="tau sweep, e.g. 10,100,1000")
    b.add_argument("--k", type=_int_list, default=[5], help="k (first value used outside k sweep)")
    b.add_argument("--n", type=_int_list, default=[100_000], help="stream length(s)")
    b.add_argument("--n-sweep", action="store_true", help="sweep over all --n values")
    b.add_argument("--k-sweep", action="store_true", help="sweep over all --k values")
    b.add_argument("--selectivity", action="store_true", help="run selectivity workloads")
    b.add_argument("--fixed-tau", type=int, default=100, help="tau for n/k/selectivity sweeps")
    b.add_argument("--sigma", type=int, default=20)
    b.add_argument("--episodes", type=int, default=10)
    b.add_argument("--repeats", type=int, default=5)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--mode", type=_mode, default=FrequencyKind.NON_OVERLAPPED)
    b.add_argument("--preparse", action=argparse.BooleanOptionalAction, default=True,
                   help="parse events before timing (default on)")
    b.add_argument("--csv", default=None, metavar="PATH")
    b.set_defaults(func=cmd_bench)

    m = sub.add_parser("monitor", help="run incident rules over a live stream")
    m.add_argument("stream", nargs="?", help="event file (default: stdin)")
    m.add_argument("--rules", required=True)
    m.add_argument("--populations", default=None)
    m.add_argument("--tau-unit", type=int, default=None, metavar="TICKS",
                   help="ticks per minute for m/h suffixes (default 60)")
    m.add_argument("--group", action="append", default=[],
                   help="group value to bind eagerly (repeatable)")
    m.set_defaults(func=cmd_monitor)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help or a usage error
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"oncecount: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, StreamError, RuleError, OSError, ValueError) as exc:
        print(f"oncecount: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
