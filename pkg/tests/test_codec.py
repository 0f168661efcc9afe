import pytest
from hypothesis import given, strategies as st

from conftest import grid_streams
from pstack import codec
from pstack.bits import BitReader, BitWriter, gamma_length, read_uleb128, write_uleb128
from pstack.engine import EngineState, StackEngine, init, run
from pstack.grid import Direction
from pstack.preisach import random_measure, staircase_output
from pstack.queries import answer_table
from pstack.signals import fuzz_stream
from pstack.verify import mutate, size_bound

import numpy as np

HDR_FINAL_10 = bytes.fromhex("5053544b01000a")
HDR_LOG_10 = bytes.fromhex("5053544b01010a")

# hand-assembled from the layout:
#   fresh:      gamma(1) 0 gamma(1) 00                   -> 1 0 1 00
#   two-vertex: gamma(3) gamma(2) gamma(2) gamma(3) gamma(2) 0 gamma(7) 01
#               -> 011 010 010 011 010 0 00111 01
#   pending:    gamma(1) 1 gamma(10) gamma(4) 10          -> 1 1 0001010 00100 10
#   log [9,2]:  gamma(3) gamma(10) gamma(3) gamma(7) 01   -> 011 0001010 011 00111 01
GOLDEN = [
    (EngineState(10, (), None, 0, Direction.NONE), HDR_FINAL_10 + bytes.fromhex("a0")),
    (EngineState(10, ((9, 2), (7, 4)), None, 6, Direction.RISING),
     HDR_FINAL_10 + bytes.fromhex("69343a")),
    (EngineState(10, (), 9, 3, Direction.FALLING), HDR_FINAL_10 + bytes.fromhex("c512")),
]


def test_gamma_codes():
    for v, bits in [(1, "1"), (2, "010"), (3, "011"), (4, "00100"), (7, "00111"), (10, "0001010")]:
        w = BitWriter()
        w.write_gamma(v)
        assert w.nbits == len(bits) == gamma_length(v)
        r = BitReader(w.getvalue())
        assert r.read(len(bits)) == int(bits, 2)
        assert BitReader(w.getvalue()).read_gamma() == v
    with pytest.raises(ValueError):
        BitWriter().write_gamma(0)


@given(st.lists(st.integers(1, 10**6), max_size=50))
def test_gamma_stream_round_trip(vals):
    w = BitWriter()
    for v in vals:
        w.write_gamma(v)
    r = BitReader(w.getvalue())
    assert [r.read_gamma() for _ in vals] == vals


@pytest.mark.parametrize("n, enc", [(0, "00"), (10, "0a"), (127, "7f"), (128, "8001"), (300, "ac02")])
def test_uleb128(n, enc):
    assert write_uleb128(n).hex() == enc
    assert read_uleb128(bytes.fromhex(enc)) == (n, len(enc) // 2)


@pytest.mark.parametrize("state, blob", GOLDEN)
def test_golden_final(state, blob):
    assert codec.encode_final(state) == blob
    assert codec.decode(blob) == state


def test_golden_eventlog():
    log = codec.EventLog.from_stream([1, 9, 2, 7], 10)
    assert log.extrema == (9, 2) and log.current == 7
    log = codec.EventLog(10, (9, 2), 6, Direction.RISING)
    blob = codec.encode_eventlog(log)
    assert blob == HDR_LOG_10 + bytes.fromhex("6299d0")
    assert codec.decode(blob) == log


def test_eventlog_replay():
    log = codec.EventLog(10, (9, 2), 6, Direction.RISING)
    assert log.replay().vertices == ((9, 2),)
    s1 = log.replay(1)
    assert s1.vertices == () and s1.pending == 9
    empty = codec.EventLog(10, (), 0, Direction.NONE)
    assert codec.decode(codec.encode_eventlog(empty)).replay() == init(0, 10)


@pytest.mark.parametrize("log", [
    codec.EventLog(10, (2, 9), 6, Direction.RISING),
    codec.EventLog(10, (9, 2), 1, Direction.RISING),
    codec.EventLog(10, (9,), 3, Direction.RISING),
    codec.EventLog(10, (), 4, Direction.NONE),
    codec.EventLog(10, (11, 2), 5, Direction.RISING),
])
def test_eventlog_rejects_bad_alternation(log):
    with pytest.raises(ValueError):
        codec.encode_eventlog(log)


def test_size_bits_examples():
    assert codec.raw_size_bits(10**5, 100) == 100001 * 7
    assert codec.size_bits(GOLDEN[1][0]) == 56 + 23
    assert codec.size_bits(init(0, 10)) == 56 + 5
    # a monotone stream's state does not depend on its length
    sizes = {codec.size_bits(run(list(range(k + 1)), 100).state) for k in range(1, 100)}
    assert len(sizes) <= 7  # only the current value's gamma length varies


def test_size_growth_per_vertex():
    L = 10
    per = 2 * (2 * L.bit_length() + 1)
    prev = codec.size_bits(run([9, 1], L).state)
    stream = [9, 1]
    for M, m in [(8, 2), (7, 3), (6, 4)]:
        stream += [M, m]
        s = run(stream + [m + 1], L).state
        assert codec.size_bits(s) - prev <= per
        prev = codec.size_bits(s)


def test_distinct_states_distinct_blobs():
    assert codec.encode_final(init(0, 10)) != codec.encode_final(run([9, 2, 5], 10).state)


def test_large_L_uses_multibyte_header():
    s = run([300, 2, 250, 10, 200], 1000).state
    blob = codec.encode_final(s)
    assert blob[6:8] == write_uleb128(1000)
    assert codec.decode(blob) == s


@pytest.mark.parametrize("blob, err", [
    (b"XXXX\x01\x00\x0a\xa0", codec.BadMagic),
    (b"PSTK\x02\x00\x0a\xa0", codec.BadVersion),
    (b"PSTK\x01\x07\x0a\xa0", codec.BadMode),
    (b"PSTK\x01\x00\x0a", codec.TruncatedBitstream),
    (b"PSTK\x01\x00", codec.TruncatedBitstream),
    (b"PSTK\x01\x00\x8a\x00\xa0", codec.InvariantViolation),   # overlong LEB128
    (b"PSTK\x01\x00\x01\xa0", codec.InvariantViolation),       # L = 1
    (b"PSTK\x01\x00\x0a\xa1", codec.InvariantViolation),       # nonzero padding
    (b"PSTK\x01\x00\x0a\xa0\x00", codec.TrailingData),
    (b"PSTK\x01\x00\x0a\xb0", codec.InvariantViolation),       # falling with no pending maximum
])
def test_decode_errors(blob, err):
    with pytest.raises(err):
        codec.decode(blob)


def test_errors_are_distinct():
    kinds = {codec.BadMagic, codec.BadVersion, codec.TruncatedBitstream, codec.InvariantViolation}
    assert len(kinds) == 4
    assert all(issubclass(k, codec.CodecError) for k in kinds)


def test_self_delimiting():
    a = codec.encode_final(run([1, 9, 2, 7, 4, 6], 10).state)
    b = codec.encode_eventlog(codec.EventLog.from_stream([3, 8, 1], 10))
    obj, used = codec.decode_prefix(a + b)
    assert used == len(a) and obj == codec.decode(a)
    assert codec.decode((a + b)[used:]) == codec.decode(b)


@given(grid_streams(max_size=200))
def test_round_trip(case):
    u, L = case
    eng = StackEngine(u[0], L, record=True).feed(u[1:])
    s = eng.state
    out = codec.decode(codec.encode_final(s))
    assert out == s
    assert codec.size_bits(s) <= size_bound(s.depth, L)
    log = codec.EventLog(L, tuple(eng.log), eng.current, eng.direction)
    assert codec.decode(codec.encode_eventlog(log)).replay() == s


@given(grid_streams(max_size=200), st.data())
def test_resume_equivalence(case, data):
    u, L = case
    j = data.draw(st.integers(0, len(u) - 1))
    head = run(u[: j + 1], L).state
    resumed = StackEngine.from_state(codec.decode(codec.encode_final(head))).feed(u[j + 1:])
    assert resumed.state == run(u, L).state


@given(grid_streams(max_size=200), st.integers(0, 2**31))
def test_queries_preserved(case, seed):
    u, L = case
    s = run(u, L).state
    out = codec.decode(codec.encode_final(s))
    mu = random_measure(L, seed)
    assert answer_table(out) == answer_table(s)
    assert staircase_output(mu, out) == staircase_output(mu, s)


@given(grid_streams(max_size=100), st.integers(0, 2**31))
def test_corruption_never_misparses(case, seed):
    u, L = case
    blob = codec.encode_final(run(u, L).state)
    rng = np.random.default_rng(seed)
    bad = mutate(blob, rng)
    try:
        got = codec.decode(bad)
    except codec.CodecError:
        return
    got.validate()
    assert codec.encode_final(got) == bad


@given(st.integers(2, 65535), st.integers(0, 2**32), st.integers(1, 300))
def test_size_bound_holds_for_wide_headers(L, seed, n):
    rng = np.random.default_rng(seed)
    s = run(fuzz_stream(rng, n, L), L).state
    assert codec.size_bits(s) <= size_bound(s.depth, L)
