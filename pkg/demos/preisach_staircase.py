# Preisach output from the stack alone
#
# A random integer Preisach measure is applied to a random walk twice: once by
# switching every relay at every sample, once from the short reduced sequence
# the stack keeps. The two integers match exactly.

import numpy as np

from pstack import run
from pstack.preisach import direct_output, random_measure, reduced_sequence, staircase_output
from pstack.signals import GeneratorSpec, generate

L = 64
u = generate(GeneratorSpec("walk", 5000, L, seed=3, params={"step": 5}))
mu = random_measure(L, seed=11)
print(len(mu), "weighted cells, total weight", mu.total_weight)

state = run(u, L).state
print("stream length", len(u), "stack depth", state.depth)
print("reduced sequence:", reduced_sequence(state))

print(direct_output(mu, u), staircase_output(mu, state))

# The same check across many seeds:

rng = np.random.default_rng(0)
agree = 0
for trial in range(200):
    v = generate(GeneratorSpec("walk", 300, L, seed=trial))
    m = random_measure(L, seed=int(rng.integers(1 << 30)))
    agree += direct_output(m, v) == staircase_output(m, run(v, L).state)
print(agree, "/ 200")
