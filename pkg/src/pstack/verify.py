"""Seeded property suites: engine vs. oracle, sufficiency, rate-independence,
reconstruction and codec round-trips.

Each trial draws its stream from ``default_rng([seed, suite_id, trial])`` so
any reported failure can be replayed in isolation. The first failing stream
of a suite is shrunk to a minimal reproducer.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import codec
from .engine import StackEngine, StackInvariantError, check_stack, depth_bound, validate_state
from .oracle import oracle_stack
from .preisach import direct_output, random_measure, staircase_output
from .queries import answer_table, dilate, family_size, reconstruct
from .signals import fuzz_stream

log = logging.getLogger(__name__)

GRIDS = (2, 4, 10, 64)
MAX_N = 512
SUITES = ("engine", "preisach", "queries", "codec")
_SUITE_IDS = {name: i for i, name in enumerate(SUITES)}


class CheckFailed(AssertionError):
    pass


@dataclass
class Failure:
    trial: int
    L: int
    stream: list
    message: str
    reproducer: Optional[list] = None


@dataclass
class SuiteResult:
    name: str
    trials: int = 0
    passed: int = 0
    checks: int = 0
    failures: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        line = f"{self.name}: {self.passed}/{self.trials} trials passed ({self.checks} checks)"
        if self.failures:
            f = self.failures[0]
            line += f"; first failure trial={f.trial} L={f.L}: {f.message}"
            if f.reproducer is not None:
                line += f"; reproducer={f.reproducer}"
        return line


def trial_rng(seed: int, suite: str, trial: int):
    return np.random.default_rng([seed, _SUITE_IDS[suite], trial])


def trial_stream(rng, max_n: int = MAX_N):
    L = int(rng.choice(GRIDS))
    n = int(rng.integers(1, max_n + 1))
    return fuzz_stream(rng, n, L), L


def shrink(u: list, fails: Callable[[list], bool]) -> list:
    """Greedy chunk-removal shrinker; returns a (locally) minimal failing stream."""
    u = list(u)
    chunk = max(1, len(u) // 2)
    while chunk >= 1:
        i = 0
        changed = False
        while i < len(u):
            cand = u[:i] + u[i + chunk:]
            if cand and fails(cand):
                u = cand
                changed = True
            else:
                i += chunk
        if not changed:
            chunk //= 2
    return u


def _check(cond, msg):
    if not cond:
        raise CheckFailed(msg)


# -- individual trial checks -------------------------------------------------


def check_engine(u, L, engine_cls=StackEngine) -> int:
    """Engine equals oracle; invariants and depth bound after every step."""
    eng = engine_cls(u[0], L)
    checks = 0
    for x in u[1:]:
        eng.update(x)
        try:
            check_stack(eng.vertices, L)
            validate_state(eng.state)
        except StackInvariantError as exc:
            raise CheckFailed(f"invariant broken after {eng.samples_seen} samples: {exc}")
        _check(eng.depth <= depth_bound(eng.samples_seen),
               f"depth {eng.depth} exceeds bound after {eng.samples_seen} samples")
        checks += 1
    got = (eng.vertices, eng.pending, eng.direction)
    want = oracle_stack(u)
    _check(got == want, f"engine {got} != oracle {want}")
    _check(eng.pushes + eng.pops <= 2 * len(u),
           f"{eng.pushes} pushes + {eng.pops} pops exceed 2n = {2 * len(u)}")
    return checks + 1


def check_sufficiency(u, L, measure_seed, engine_cls=StackEngine) -> int:
    mu = random_measure(L, measure_seed)
    state = engine_cls(u[0], L).feed(u[1:]).state
    direct = direct_output(mu, u)
    stair = staircase_output(mu, state)
    _check(direct == stair, f"direct {direct} != staircase {stair}")
    return 1


def check_rate_independence(u, L, dilation_seed, measure_seed, engine_cls=StackEngine) -> int:
    v = dilate(u, dilation_seed)
    su = engine_cls(u[0], L).feed(u[1:]).state
    sv = engine_cls(v[0], L).feed(v[1:]).state
    _check(answer_table(su) == answer_table(sv), "indicator answers differ under dilation")
    mu = random_measure(L, measure_seed)
    a, b = direct_output(mu, u), direct_output(mu, v)
    _check(a == b, f"Preisach output {a} != {b} under dilation")
    return 2


def check_reconstruction(u, L, engine_cls=StackEngine) -> int:
    state = engine_cls(u[0], L).feed(u[1:]).state
    table = answer_table(state)
    _check(len(table.bits) == family_size(L) == (L + 1) * (L + 2) // 2, "family size mismatch")
    _check(sum(table.bits) == state.depth, "positive answers != stack depth")
    rec = reconstruct(table)
    _check(rec == state.vertices, f"reconstructed {rec} != stack {state.vertices}")
    return 3


def size_bound(k: int, L: int) -> int:
    return 56 + (2 * k + 3) * (2 * L.bit_length() + 1) + 3


def check_codec(u, L, rng, mutations: int = 1, engine_cls=StackEngine) -> dict:
    """Round-trip, resume, size bound, query preservation and corruption.

    Returns counters; raises :class:`CheckFailed` on any contract breach.
    """
    eng = engine_cls(u[0], L, record=True).feed(u[1:])
    state = eng.state
    blob = codec.encode_final(state)
    out = codec.decode(blob)
    _check(out == state, f"final round trip {out} != {state}")
    _check(codec.size_bits(state) <= size_bound(state.depth, L),
           f"size {codec.size_bits(state)} above bound {size_bound(state.depth, L)}")

    elog = codec.EventLog(L, tuple(eng.log), eng.current, eng.direction)
    back = codec.decode(codec.encode_eventlog(elog))
    _check(back == elog, "event log round trip")
    _check(back.replay() == state, "event log replay != final state")

    j = int(rng.integers(0, len(u)))
    head = engine_cls(u[0], L).feed(u[1:j + 1]).state
    resumed = engine_cls.from_state(codec.decode(codec.encode_final(head))).feed(u[j + 1:]).state
    _check(resumed == state, f"resume at {j} gives {resumed} != {state}")

    _check(answer_table(out) == answer_table(state), "indicator answers changed by the codec")
    mu = random_measure(L, int(rng.integers(0, 2**31)))
    _check(staircase_output(mu, out) == direct_output(mu, u), "Preisach output changed by codec")

    stats = {"mutations": 0, "rejected": 0, "aliased": 0}
    for _ in range(mutations):
        bad = mutate(blob, rng)
        if bad == blob:
            continue
        stats["mutations"] += 1
        try:
            got = codec.decode(bad)
        except codec.CodecError:
            stats["rejected"] += 1
            continue
        # accepted: must be a valid state whose unique encoding is exactly these bytes
        validate_state(got)
        _check(codec.encode_final(got) == bad,
               f"mutated blob {bad.hex()} decoded to {got}, which does not re-encode to it")
        stats["aliased"] += 1
    return stats


def mutate(blob: bytes, rng) -> bytes:
    b = bytearray(blob)
    op = int(rng.integers(0, 4))
    if op == 0:
        i = int(rng.integers(0, 8 * len(b)))
        b[i // 8] ^= 0x80 >> (i % 8)
    elif op == 1:
        b[int(rng.integers(0, len(b)))] = int(rng.integers(0, 256))
    elif op == 2:
        del b[int(rng.integers(1, len(b))):]
    else:
        b.insert(int(rng.integers(0, len(b) + 1)), int(rng.integers(0, 256)))
    return bytes(b)


# -- suite drivers -----------------------------------------------------------


def _run(name, trials, seed, body, engine_cls, max_n=MAX_N) -> SuiteResult:
    res = SuiteResult(name)
    for t in range(trials):
        rng = trial_rng(seed, name, t)
        u, L = trial_stream(rng, max_n)
        res.trials += 1
        try:
            out = body(u, L, rng, t)
        except (CheckFailed, StackInvariantError) as exc:
            fail = Failure(t, L, u, str(exc))
            if not res.failures:
                fail.reproducer = shrink(u, lambda c: _fails(body, c, L, seed, name, t))
            res.failures.append(fail)
            continue
        res.passed += 1
        if isinstance(out, dict):
            res.checks += 1
            for k, v in out.items():
                res.stats[k] = res.stats.get(k, 0) + v
        else:
            res.checks += out
    if trials == 0:
        log.warning("suite %s ran zero trials; passing vacuously", name)
    return res


def _fails(body, u, L, seed, name, t) -> bool:
    try:
        body(u, L, trial_rng(seed, name, t), t)
    except (CheckFailed, StackInvariantError):
        return True
    return False


def run_suite(name: str, trials: int, seed: int = 0, engine_cls=StackEngine,
              max_n: int = MAX_N) -> SuiteResult:
    if name == "engine":
        body = lambda u, L, rng, t: check_engine(u, L, engine_cls)  # noqa: E731
    elif name == "preisach":
        body = lambda u, L, rng, t: check_sufficiency(  # noqa: E731
            u, L, int(rng.integers(0, 2**31)), engine_cls)
    elif name == "queries":
        def body(u, L, rng, t):
            return (check_rate_independence(u, L, int(rng.integers(0, 2**31)),
                                            int(rng.integers(0, 2**31)), engine_cls)
                    + check_reconstruction(u, L, engine_cls))
    elif name == "codec":
        body = lambda u, L, rng, t: check_codec(u, L, rng, 1, engine_cls)  # noqa: E731
    else:
        raise ValueError(f"unknown suite {name!r}; choose from {SUITES} or 'all'")
    return _run(name, trials, seed, body, engine_cls, max_n)


def run_suites(names, trials: int, seed: int = 0, engine_cls=StackEngine) -> list:
    if isinstance(names, str):
        names = SUITES if names == "all" else (names,)
    return [run_suite(n, trials, seed, engine_cls) for n in names]
