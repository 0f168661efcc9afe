import pytest
from hypothesis import given, strategies as st

from conftest import grid_streams
from pstack.engine import (
    EngineState,
    StackEngine,
    StackInvariantError,
    VertexPair,
    canonical_stack,
    check_stack,
    depth_bound,
    init,
    pop_count_profile,
    run,
    step,
    validate_state,
)
from pstack.grid import Direction, GridError
from pstack.oracle import confirmed_history, oracle_stack
from pstack.signals import GeneratorSpec, generate


@pytest.mark.parametrize("u0, d", [(0, Direction.NONE), (5, Direction.RISING), (10, Direction.RISING)])
def test_init(u0, d):
    s = init(u0, 10)
    assert s.vertices == () and s.pending is None
    assert s.direction is d and s.current == u0


def test_step_examples():
    s = run([1, 9, 2, 7, 4, 6], 10).state
    assert s.vertices == ((9, 2), (7, 4))
    assert s.pending is None and s.current == 6 and s.direction is Direction.RISING

    s = run([2, 18, 4, 14, 8, 13, 1, 5], 20).state
    # the minimum 1 wipes (14, 8) and (18, 4); the outer maximum 18 survives
    assert s.vertices == ((18, 1),)
    assert s.pending is None and s.direction is Direction.RISING

    s = run([0, 1, 2, 3], 10).state
    assert s.vertices == () and s.pending is None


def test_functional_step_matches_engine():
    u = [1, 9, 2, 7, 4, 6]
    s = init(u[0], 10)
    events = []
    for x in u[1:]:
        s, ev = step(s, x)
        events.append(ev)
    assert s == run(u, 10).state
    assert [e.pushed for e in events if e.pushed] == [(9, 2), (7, 4)]
    assert [e.confirmed for e in events if e.confirmed] == [
        (9, "max"), (2, "min"), (7, "max"), (4, "min")]


def test_canonical_stack_excludes_pending():
    assert canonical_stack(run([1, 9, 2, 7, 4, 6], 10).state) == ((9, 2), (7, 4))
    assert canonical_stack(init(0, 10)) == ()
    s = run([5, 9, 3], 10).state
    assert canonical_stack(s) == () and s.pending == 9 and s.direction is Direction.FALLING


def test_flat_step_only_counts():
    eng = StackEngine(4, 10)
    ev = eng.update(4)
    assert ev.pops == 0 and ev.pushed is None and ev.confirmed is None
    assert eng.samples_seen == 2
    assert eng.state == init(4, 10)


def test_tie_pops_on_equal_maximum():
    s = run([9, 2, 9, 1], 10).state
    # re-reaching 9 erases the (9, 2) corner
    assert s.vertices == () and s.pending == 9


def test_rejects_off_grid():
    eng = StackEngine(0, 10)
    with pytest.raises(GridError):
        eng.update(11)
    with pytest.raises(GridError):
        StackEngine(0, 10).feed([1, 2, 30])


def test_feed_equals_update():
    u = [3, 8, 1, 6, 6, 2, 9, 0, 4]
    a = StackEngine(u[0], 10)
    for x in u[1:]:
        a.update(x)
    b = StackEngine(u[0], 10).feed(u[1:])
    assert a.state == b.state and a.pops == b.pops and a.pushes == b.pushes


def test_pop_count_profile_examples():
    prof = pop_count_profile(list(range(11)), 10)
    assert set(prof["pops"]) == {0} and prof["total_pushes"] == 0

    prof = pop_count_profile([1, 9, 2, 7, 4, 6], 10)
    assert prof["total_pushes"] == 2 and prof["total_pops"] == 0

    u = generate(GeneratorSpec("pop_storm", 0, 42, params={"depth": 20}))
    prof = pop_count_profile(u, 42)
    assert prof["max_pops"] == 20
    assert prof["pops"].count(20) == 1
    # the storm happens on the very last sample
    assert prof["pops"][-1] == 20


def test_from_state_validates():
    bad = EngineState(L=10, vertices=((5, 2), (6, 3)), current=7, direction=Direction.RISING)
    with pytest.raises(StackInvariantError):
        StackEngine.from_state(bad)


@pytest.mark.parametrize("state", [
    EngineState(10, (), None, 3, Direction.NONE),
    EngineState(10, (), 5, 2, Direction.RISING),
    EngineState(10, (), None, 2, Direction.FALLING),
    EngineState(10, ((9, 2),), 9, 3, Direction.FALLING),
    EngineState(10, ((9, 2),), 5, 6, Direction.FALLING),
    EngineState(10, ((9, 2),), None, 2, Direction.RISING),
    EngineState(10, ((11, 2),), None, 5, Direction.RISING),
])
def test_validate_state_rejects(state):
    with pytest.raises(StackInvariantError):
        validate_state(state)


def test_check_stack():
    check_stack([(9, 2), (7, 4)])
    for bad in ([(5, 5)], [(9, 2), (9, 3)], [(9, 2), (8, 2)], [(9, 2), (10, 3)]):
        with pytest.raises(StackInvariantError):
            check_stack(bad)


# -- oracle ------------------------------------------------------------------

@pytest.mark.parametrize("u, want", [
    ([1, 9, 2, 7, 4, 6], (((9, 2), (7, 4)), None, Direction.RISING)),
    ([2, 18, 4, 14, 8, 13, 1, 5], (((18, 1),), None, Direction.RISING)),
    ([5, 9, 3], ((), 9, Direction.FALLING)),
    ([55, 52, 59], (((55, 52),), None, Direction.RISING)),
    ([0, 0, 0], ((), None, Direction.NONE)),
    # constant nonzero stream: only the virtual rise, nothing confirmed
    ([5, 5, 5], ((), None, Direction.RISING)),
])
def test_oracle_examples(u, want):
    assert oracle_stack(u) == want


def test_confirmed_history_cuts_final_run():
    assert confirmed_history([1, 9, 2, 7, 4, 6]) == [0, 1, 9, 2, 7, 4]
    assert confirmed_history([3, 3, 5]) == [0]


# -- properties ----------------------------------------------------------------

@given(grid_streams())
def test_engine_matches_oracle(case):
    u, L = case
    eng = run(u, L)
    assert (eng.vertices, eng.pending, eng.direction) == oracle_stack(u)


@given(grid_streams())
def test_invariants_after_every_step(case):
    u, L = case
    eng = StackEngine(u[0], L)
    for x in u[1:]:
        eng.update(x)
        validate_state(eng.state)
        assert eng.depth <= depth_bound(eng.samples_seen)


@given(grid_streams())
def test_amortised_cost(case):
    u, L = case
    eng = run(u, L)
    assert eng.pops <= eng.pushes
    assert eng.pushes + eng.pops <= 2 * len(u)


@given(grid_streams(), st.data())
def test_flats_are_idempotent(case, data):
    u, L = case
    reps = data.draw(st.lists(st.integers(0, 3), min_size=len(u), max_size=len(u)))
    v = [x for x, r in zip(u, reps) for _ in range(r + 1)]
    assert run(v, L).state == run(u, L).state


@given(grid_streams())
def test_global_maximum_wipes_everything(case):
    u, L = case
    g = max(u)
    if g == 0:
        return
    s = run(u + [g, g - 1], L).state
    assert len(s.vertices) <= 1
    assert s.vertices == () and s.pending == g
