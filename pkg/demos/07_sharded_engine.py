"""
Many episodes, several shards
=============================

Counters can be spread over shards that run on a thread pool.  The emitted
occurrences come back in stream order and match a single engine exactly.
"""

from oncecount import Engine, FrequencyKind, ShardedEngine, GeneratorSpec, generate_uniform
from oncecount.bench import random_episodes

stream = generate_uniform(GeneratorSpec(alphabet_size=8, length=20000, seed=3))
episodes = random_episodes(8, 3, 12, 15, seed=3)

single, sharded = Engine(), ShardedEngine(shards=4)
for ep in episodes:
    for mode in FrequencyKind:
        single.register(ep, mode)
        sharded.register(ep, mode)

a = [(h.episode, h.mode, o) for h, o in single.run(stream)]
b = [(h.episode, h.mode, o) for h, o in sharded.run(stream)]
print(len(a), "occurrences; identical:", a == b)
for h in single.handles[:6]:
    print(h.episode, h.mode.value, single.frequency(h))
