# Lossy baselines versus the stack
#
# PAA averages windows and the swinging door drops points inside a tolerance
# corridor. Both can erase a turning point, and then a query about it gets the
# wrong answer. r_preservation_check reports the first vertex that differs.

from pstack import codec, run
from pstack.baselines import (
    paa_compress,
    paa_reconstruct,
    r_preservation_check,
    sdt_compress,
    sdt_reconstruct,
)
from pstack.preisach import reduced_sequence

L = 10
u = [1, 9, 2, 7, 4, 6]

for name, rec in [
    ("paa w=4", paa_reconstruct(paa_compress(u, 4))),
    ("sdt eps=2", sdt_reconstruct(sdt_compress(u, 2), len(u))),
    ("sdt eps=100", sdt_reconstruct(sdt_compress(u, 100), len(u))),
    ("pstack", reduced_sequence(codec.decode(codec.encode_final(run(u, L).state)))),
]:
    res = r_preservation_check(u, rec, L)
    print(f"{name:12} preserved={bool(res)!s:5} witness={res.witness}")

# The same comparison over generated streams, with sizes, is what
# `pstack bench` prints:

from pstack.cli import main

main(["bench", "--gen", "walk:n=2000,L=64,seed=2", "sine_drift:n=2000,L=64",
      "--baselines", "paa:w=4,sdt:eps=2"])
