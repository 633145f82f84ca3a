"""
Checking the engine against brute force
=======================================

Every small random instance is counted three ways: by the engine, by an
exhaustive maximum and by an earliest-first greedy over the materialized
stream.  The non-overlapped count must equal the maximum.  The distinct count
follows the greedy, which can fall short of the true maximum.
"""

from oncecount import Engine, FrequencyKind, make_episode, oracle
from oncecount.conformance import Limits, run_suite
from oncecount.streamio import parse_event_line

report = run_suite(2000, Limits(), seed=1)
print(report.summary())

# complex events (several symbols at one timestamp) go through the same check
print(run_suite(1000, Limits(complex_fraction=0.3), seed=2).summary())

# one case where earliest-first is not the best packing
s = [parse_event_line(f"{t},{x}") for t, x in
     [(1, "A"), (2, "A"), (3, "A"), (6, "A"), (9, "A"), (11, "B"), (12, "A"), (15, "A"),
      (17, "B"), (19, "A"), (22, "B"), (25, "B"), (26, "B")]]
ep = make_episode("BAB", 12)
engine = Engine()
h = engine.register(ep, FrequencyKind.DISTINCT)
engine.run(s)
print("engine", engine.frequency(h), "greedy", oracle.greedy_distinct(s, ep),
      "maximum", oracle.max_distinct(s, ep))
