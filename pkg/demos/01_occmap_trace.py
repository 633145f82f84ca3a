"""
Watching an OccMap count a time-constrained episode
===================================================

Feed a short stream into the counter for <A,A,B> with tau=3 and print the
layers after every event.  C events are ignored; each B triggers a validation.
"""

from oncecount import Engine, make_episode
from oncecount.streamio import parse_event_line

stream = "1,A 2,A 3,B 4,A 5,C 6,A 7,A 8,B 9,A 10,C 11,C 12,A 13,B 14,A 15,B".split()

engine = Engine()
handle = engine.register(make_episode("AAB", 3))

for line in stream:
    event = parse_event_line(line)
    emitted = engine.process(event)
    note = f" -> accepted {emitted[0][1]}" if emitted else ""
    print(f"after ({event.symbol},{event.timestamp}){note}")
    print("   " + engine.occmap(handle).snapshot().replace("\n", " | "))

# <9,12,13> is rejected at t=13 (span 4), so the count is 3
print("frequency:", engine.frequency(handle))
