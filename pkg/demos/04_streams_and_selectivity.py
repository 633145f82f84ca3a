"""
Event files, synthetic streams and selectivity
==============================================
"""

import io

from oncecount import Engine, GeneratorSpec, generate_uniform, make_episode, read_stream, \
    write_stream
from oncecount.streamio import measure_selectivity

# a paper-scale synthetic corpus: 91,021 events over 622 symbols
events = generate_uniform(GeneratorSpec(alphabet_size=622, length=91021, seed=0))
print(len(events), "events,", len({e.symbol for e in events}), "symbols")

# round trip through the line format
buf = io.StringIO()
write_stream(events[:5], buf, header="first five")
print(buf.getvalue())
print(list(read_stream(io.StringIO(buf.getvalue()))))

# selectivity is measured: inserted timestamps per event, set by the episode choice
small = generate_uniform(GeneratorSpec(alphabet_size=2, length=20000, seed=1))
for names in (["s0", "s1", "s0"], ["s0", "s0", "s0", "never"], ["never"]):
    engine = Engine()
    engine.register(make_episode(names, 50))
    engine.run(small)
    print(names, float(measure_selectivity(engine.metrics())))
