"""
Alarm rules over districts
==========================

Two rules in the rule-file syntax: one with a percentage threshold over a
population of cells, one with an absolute threshold.  Each district gets its
own counter; an alert fires once, when the count first reaches the threshold.
"""

from oncecount import Event, RuleMonitor, intern_symbol, load_rules

RULES = """
population cells district1=30 district2=50
cell_out: low_voltage,bs_disconnect,carrier_wave @tau=3m threshold=10% of cells by district
ne_sync: sync_path_fault,sync_fault @tau=5m threshold=2 by district
"""

rules = load_rules(RULES, ticks_per_minute=60)  # one tick per second
monitor = RuleMonitor(rules)


def alarm(name, district, t):
    return Event(intern_symbol(f"{name}@{district}"), t)


stream = []
for i in range(4):
    t = 600 * i
    stream += [alarm("low_voltage", "district1", t), alarm("bs_disconnect", "district1", t + 20),
               alarm("carrier_wave", "district1", t + 50)]
    # every other sync pair is too slow for its 5 minute window
    gap = 60 if i % 2 == 0 else 400
    stream += [alarm("sync_path_fault", "district2", t + 5),
               alarm("sync_fault", "district2", t + 5 + gap)]
stream.sort(key=lambda e: e.timestamp)

for event in stream:
    for a in monitor.process(event):
        print(a)
for key, n in monitor.counts().items():
    print(*key, n)
