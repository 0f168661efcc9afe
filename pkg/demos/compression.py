# Compressing long monotone runs
#
# A stream of 100001 samples made of ten ramps keeps only a handful of
# vertices, so the encoded state is a few bytes against 7 bits per raw sample.

import time

from pstack import codec, run
from pstack.signals import GeneratorSpec, generate

L = 100
u = generate(GeneratorSpec("monotone_runs", 100_001, L, seed=1, params={"runs": 10}))

t0 = time.perf_counter()
state = run(u, L).state
blob = codec.encode_final(state)
print(f"engine + encode: {time.perf_counter() - t0:.3f} s")

raw = codec.raw_size_bits(len(u) - 1, L)
bits = codec.size_bits(state)
print("k =", state.depth, " bits =", bits, " raw =", raw, f" ratio = {raw / bits:.0f}")
print(blob.hex())

# Decoding gives back the identical state, and a stream can be resumed from it.

back = codec.decode(blob)
print(back == state)

more = [50, 20, 80]
resumed = type(run(u, L)).from_state(back).feed(more).state
print(resumed == run(u + more, L).state)

# The event log keeps every confirmed extremum instead of just the survivors.

log = codec.EventLog.from_stream(u, L)
print(len(log.extrema), "extrema,", codec.eventlog_size_bits(log), "bits")
