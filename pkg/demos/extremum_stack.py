# Watching the extremum stack evolve
#
# A stream on the grid 0..L is fed one sample at a time. After each sample we
# print what the engine is holding: completed (max, min) vertices, a confirmed
# maximum still waiting for its minimum, and the direction of travel.

from pstack import StackEngine

L = 10
u = [1, 9, 2, 7, 4, 6, 3, 8, 0, 10]

eng = StackEngine(u[0], L, record=True)
print(f"{'u':>3}  {'pops':>4}  vertices / pending / direction")
for x in u[1:]:
    ev = eng.update(x)
    print(f"{x:>3}  {ev.pops:>4}  {list(eng.vertices)} / {eng.pending} / {eng.direction.name}")

# The 8 confirms the minimum 3, which undercuts the inner pair (7, 4); it is
# replaced by (7, 3). The 0 confirms the maximum 8, which clears (7, 3). The
# final 10 confirms 0, lower than the minimum 2, so (9, 2) becomes (9, 0).

# The recorded log is every confirmed extremum in order:

print(eng.log)

# A brute-force view built from the whole history agrees with the engine.

from pstack.oracle import oracle_stack

print(oracle_stack(u))
print((eng.vertices, eng.pending, eng.direction) == oracle_stack(u))
