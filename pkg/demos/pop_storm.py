# One expensive step, cheap on average
#
# A nested zigzag builds d vertices, then a single sample wipes them all. That
# step costs d pops, yet the whole stream averages under two stack operations
# per sample because every vertex is pushed and popped at most once.

import numpy as np

from pstack.engine import pop_count_profile
from pstack.signals import GeneratorSpec, generate

for d in (10, 100, 1000):
    L = 2 * d + 2
    u = generate(GeneratorSpec("pop_storm", 0, L, params={"depth": d}))
    prof = pop_count_profile(u, L)
    ops = prof["total_pops"] + prof["total_pushes"]
    print(f"d={d:5}  samples={len(u):5}  max pops in a step={prof['max_pops']:5}  "
          f"ops/sample={ops / len(u):.3f}")

pops = np.array(prof["pops"])
print("steps with any pop:", np.count_nonzero(pops), "largest at index", int(pops.argmax()))
