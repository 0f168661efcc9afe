# Rebuilding the stack from yes/no questions
#
# Each query asks whether a pair (M, m) is a vertex of the stack. There are
# (L+1)(L+2)/2 such questions, and the positive answers are the stack.

from pstack import run
from pstack.queries import answer_table, dilate, enumerate_family, reconstruct

L = 10
u = [1, 9, 2, 7, 4, 6, 5]
state = run(u, L).state
table = answer_table(state)

print(len(table.bits), "questions,", sum(table.bits), "answered yes")
print(table.positives())
print(reconstruct(table) == state.vertices)

# Slowing the stream down, repeating samples and filling in monotone steps,
# leaves every answer unchanged.

v = dilate(u, seed=4)
print(v)
print(answer_table(run(v, L).state) == table)

# The first few questions, in enumeration order:

print(list(enumerate_family(L))[:6])
