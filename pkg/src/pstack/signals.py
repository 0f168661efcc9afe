"""Synthetic streams and file ingestion.

Every generator draws from ``numpy.random.default_rng(seed)`` (PCG64) and
returns a list of Python ``int`` grid indices, so a failing seed replays
identically anywhere numpy does.
"""

from __future__ import annotations

import csv
import struct
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .grid import GridError, as_resolution, quantize

KINDS = ("walk", "sine_drift", "monotone_runs", "pop_storm")

PSIG_MAGIC = b"PSIG"


class IngestError(ValueError):
    """Input file could not be turned into grid samples."""


@dataclass(frozen=True)
class GeneratorSpec:
    """What to generate.

    ``params`` by kind:

    walk
        ``step`` (max absolute increment, default 2), ``flat`` (probability
        of a repeated sample, default 0.1)
    sine_drift
        ``periods`` (default 5), ``amplitude`` (fraction of the range,
        default 0.4), ``drift`` (total drift over the stream as a fraction
        of the range, default 0.2), ``noise`` (grid steps, default 1)
    monotone_runs
        ``runs`` (number of monotone runs, default 10)
    pop_storm
        ``depth`` (nested vertices before the storm, required); ``n`` may
        be 0 to get the minimal length ``2 * depth + 2``
    """

    kind: str
    n: int
    L: int
    seed: int = 0
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown generator kind {self.kind!r}; choose from {KINDS}")
        as_resolution(self.L)
        if self.n < 1 and self.kind != "pop_storm":
            raise ValueError("n must be >= 1")


def _clip(a, L):
    return [int(x) for x in np.clip(a, 0, L)]


def _walk(spec, rng):
    step = int(spec.params.get("step", 2))
    flat = float(spec.params.get("flat", 0.1))
    if step < 1:
        raise ValueError("walk step must be >= 1")
    x = int(rng.integers(0, spec.L + 1))
    out = [x]
    for _ in range(spec.n - 1):
        if rng.random() >= flat:
            x += int(rng.integers(-step, step + 1))
            # reflect at the edges
            if x < 0:
                x = -x
            if x > spec.L:
                x = 2 * spec.L - x
            x = min(max(x, 0), spec.L)
        out.append(x)
    return out


def _sine_drift(spec, rng):
    L, n = spec.L, spec.n
    periods = float(spec.params.get("periods", 5))
    amp = float(spec.params.get("amplitude", 0.4))
    drift = float(spec.params.get("drift", 0.2))
    noise = int(spec.params.get("noise", 1))
    t = np.arange(n) / max(n - 1, 1)
    base = 0.5 - drift / 2 + drift * t + amp * np.sin(2 * np.pi * periods * t)
    x = np.floor(base * L + 0.5).astype(np.int64)
    if noise:
        x += rng.integers(-noise, noise + 1, size=n)
    return _clip(x, L)


def _monotone_runs(spec, rng):
    L, n = spec.L, spec.n
    runs = int(spec.params.get("runs", 10))
    if not 1 <= runs <= n:
        raise ValueError("runs must be in 1..n")
    bounds = np.linspace(0, n, runs + 1).round().astype(int)
    start = 0
    out = []
    for r in range(runs):
        length = int(bounds[r + 1] - bounds[r])
        # alternate up and down runs, each to a fresh random turning value
        if r % 2 == 0:
            target = int(rng.integers(start + 1, L + 1)) if start < L else L
        else:
            target = int(rng.integers(0, start)) if start > 0 else 0
        ramp = start + (target - start) * np.arange(1, length + 1) / length
        if r == 0:
            ramp = start + (target - start) * np.arange(length) / max(length - 1, 1)
        out += [int(v) for v in np.floor(ramp + 0.5)]
        start = target
    return out[:n]


def _pop_storm(spec, rng):
    d = int(spec.params.get("depth", 0))
    L = spec.L
    if d < 1:
        raise ValueError("pop_storm needs depth >= 1")
    if L < 2 * d + 2:
        raise ValueError(f"pop_storm depth {d} needs L >= {2 * d + 2}, got {L}")
    out = []
    for i in range(d):
        out += [L - 1 - i, 1 + i]
    # the peak confirms the innermost minimum (depth d), the next sample
    # confirms the peak and wipes all d vertices at once
    out += [L, L - 1]
    n = spec.n or len(out)
    if n < len(out):
        raise ValueError(f"pop_storm depth {d} needs n >= {len(out)}")
    out += [L - 1] * (n - len(out))
    return out


_GENERATORS = {
    "walk": _walk,
    "sine_drift": _sine_drift,
    "monotone_runs": _monotone_runs,
    "pop_storm": _pop_storm,
}


def generate(spec: GeneratorSpec) -> list:
    rng = np.random.default_rng(spec.seed)
    return _GENERATORS[spec.kind](spec, rng)


def fuzz_stream(rng, n: int, L: int) -> list:
    """Random test stream mixing i.i.d. samples, walks and flat runs."""
    style = int(rng.integers(0, 3))
    if style == 0:
        x = rng.integers(0, L + 1, size=n)
    elif style == 1:
        steps = rng.integers(-max(1, L // 4), max(1, L // 4) + 1, size=n)
        x = np.clip(int(rng.integers(0, L + 1)) + np.cumsum(steps), 0, L)
    else:
        x = rng.integers(0, L + 1, size=n)
        hold = rng.random(n) < 0.5
        for i in range(1, n):
            if hold[i]:
                x[i] = x[i - 1]
    return [int(v) for v in x]


def parse_spec(text: str) -> GeneratorSpec:
    """Parse ``kind:key=val,key=val`` (keys ``n``, ``L``, ``seed`` or params)."""
    kind, _, rest = text.partition(":")
    kw = {"n": 0 if kind == "pop_storm" else 1000, "L": None, "seed": 0}
    params = {}
    for item in filter(None, (s.strip() for s in rest.split(","))):
        key, eq, val = item.partition("=")
        if not eq:
            raise ValueError(f"bad generator parameter {item!r} in {text!r}")
        key = {"d": "depth"}.get(key, key)
        if key in ("n", "L", "seed"):
            kw[key] = int(val)
        else:
            params[key] = float(val) if any(c in val for c in ".e") else int(val)
    if kw["L"] is None:
        kw["L"] = 2 * int(params.get("depth", 0)) + 2 if kind == "pop_storm" else 100
    return GeneratorSpec(kind=kind, n=kw["n"], L=kw["L"], seed=kw["seed"], params=params)


# -- files ------------------------------------------------------------------


def iter_csv(path, column: int = 0, L=10, clamp: bool = False):
    """Yield quantized samples from one column of a CSV file of reals in ``[0, 1]``.

    Blank lines are skipped; errors name the offending line.
    """
    res = as_resolution(L)
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), 1):
            if not row or all(not c.strip() for c in row):
                continue
            if column >= len(row):
                raise IngestError(f"{path}:{lineno}: no column {column}")
            text = row[column].strip()
            try:
                x = Fraction(text)
            except (ValueError, ZeroDivisionError):
                raise IngestError(f"{path}:{lineno}: cannot parse {text!r} as a number") from None
            try:
                yield quantize(x, res, clamp=clamp)
            except GridError as exc:
                raise IngestError(f"{path}:{lineno}: {exc}") from None


def ingest_csv(path, column: int = 0, L=10, clamp: bool = False) -> list:
    return list(iter_csv(path, column, L, clamp))


def write_csv(path, u, L) -> None:
    res = as_resolution(L)
    with open(path, "w", newline="") as fh:
        for x in u:
            fh.write(f"{x / res.L!r}\n")


def write_psig(path, u, L) -> None:
    res = as_resolution(L)
    if res.L > 0xFFFF:
        raise ValueError("PSIG stores 16-bit indices; L must be <= 65535")
    a = np.asarray(u, dtype="<u2")
    Path(path).write_bytes(PSIG_MAGIC + struct.pack("<I", res.L) + a.tobytes())


def iter_psig(path, chunk: int = 1 << 16):
    """``(L, samples)`` where ``samples`` lazily yields the file's indices."""
    fh = open(path, "rb")
    head = fh.read(8)
    if len(head) < 8 or head[:4] != PSIG_MAGIC:
        fh.close()
        raise IngestError(f"{path}: not a PSIG file")
    (L,) = struct.unpack("<I", head[4:8])

    def samples():
        pos = 0
        with fh:
            while True:
                buf = fh.read(2 * chunk)
                if not buf:
                    return
                if len(buf) % 2:
                    raise IngestError(f"{path}: odd payload length")
                for x in np.frombuffer(buf, dtype="<u2").tolist():
                    if x > L:
                        raise IngestError(f"{path}: sample {pos} = {x} exceeds L={L}")
                    pos += 1
                    yield x

    return L, samples()


def read_psig(path) -> tuple:
    """``(samples, L)`` from a PSIG file."""
    data = Path(path).read_bytes()
    if len(data) < 8 or data[:4] != PSIG_MAGIC:
        raise IngestError(f"{path}: not a PSIG file")
    (L,) = struct.unpack("<I", data[4:8])
    body = data[8:]
    if len(body) % 2:
        raise IngestError(f"{path}: odd payload length {len(body)}")
    u = np.frombuffer(body, dtype="<u2")
    if len(u) and int(u.max()) > L:
        bad = int(np.argmax(u > L))
        raise IngestError(f"{path}: sample {bad} = {int(u[bad])} exceeds L={L}")
    return [int(x) for x in u], L


def open_stream(path, L=None, column: int = 0, clamp: bool = False) -> tuple:
    """Like :func:`load_stream` but the samples come back as a lazy iterator."""
    p = Path(path)
    with open(p, "rb") as fh:
        head = fh.read(4)
    if head == PSIG_MAGIC:
        fileL, it = iter_psig(p)
        if L is not None and int(L) != fileL:
            raise IngestError(f"{path}: file has L={fileL}, requested L={L}")
        return it, fileL
    if L is None:
        raise IngestError(f"{path}: CSV input needs an explicit L")
    return iter_csv(p, column=column, L=L, clamp=clamp), int(L)


def load_stream(path, L=None, column: int = 0, clamp: bool = False) -> tuple:
    """Read PSIG (detected by magic) or CSV; returns ``(samples, L)``."""
    p = Path(path)
    with open(p, "rb") as fh:
        head = fh.read(4)
    if head == PSIG_MAGIC:
        u, fileL = read_psig(p)
        if L is not None and int(L) != fileL:
            raise IngestError(f"{path}: file has L={fileL}, requested L={L}")
        return u, fileL
    if L is None:
        raise IngestError(f"{path}: CSV input needs an explicit L")
    return ingest_csv(p, column=column, L=L, clamp=clamp), int(L)
