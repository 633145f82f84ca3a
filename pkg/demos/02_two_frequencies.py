"""
Non-overlapped versus distinct occurrences
==========================================

The same stream counted both ways.  Non-overlapped occurrences may not
interleave at all; distinct occurrences only have to avoid reusing an event.
"""

from oncecount import Engine, FrequencyKind, make_episode
from oncecount.streamio import parse_event_line

stream = [parse_event_line(x) for x in "1,A 2,C 3,A 4,D 5,A 6,C 7,A 8,C 9,B 10,B".split()]

for tau in (9, 7):
    engine = Engine()
    handles = {mode: engine.register(make_episode("AAB", tau), mode) for mode in FrequencyKind}
    emitted = engine.run(stream)
    for mode, h in handles.items():
        occs = [o for hh, o in emitted if hh == h]
        print(f"tau={tau} {mode.value:>13}: {engine.frequency(h)} {occs}")

# A1 A2 A3 A4 B5 B6 with tau=4: one non-overlapped, two distinct
engine = Engine()
ep = make_episode("AAB", 4)
no = engine.register(ep, FrequencyKind.NON_OVERLAPPED)
di = engine.register(ep, FrequencyKind.DISTINCT)
engine.run([parse_event_line(x) for x in "1,A 2,A 3,A 4,A 5,B 6,B".split()])
print("definitional example:", engine.frequency(no), engine.frequency(di))
