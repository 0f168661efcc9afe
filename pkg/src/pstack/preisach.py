"""Discrete Preisach operator with integer weights.

Cells are threshold pairs ``(alpha, beta)`` on the grid with ``alpha > beta``.
Every relay starts at -1, as if the input had rested at grid value 0
before the first sample; this is the same convention the stack engine uses, so
the output computed from the full history and from the stack agree exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np

from .engine import EngineState
from .grid import GridError, as_resolution


def relay_step(alpha: int, beta: int, s: int, u: int) -> int:
    """Next state of the bistable relay with thresholds ``alpha > beta``."""
    if alpha <= beta:
        raise ValueError(f"relay needs alpha > beta, got ({alpha}, {beta})")
    if u >= alpha:
        return 1
    if u <= beta:
        return -1
    return s


@dataclass(frozen=True)
class PreisachMeasure:
    L: int
    weights: dict = field(default_factory=dict)

    def __post_init__(self):
        as_resolution(self.L)
        for key, w in self.weights.items():
            a, b = key
            if not (0 <= b < a <= self.L):
                raise ValueError(f"cell {key} is not a strict triangle cell for L={self.L}")
            if int(w) != w or w < 0:
                raise ValueError(f"cell {key} has weight {w!r}; weights are nonnegative integers")

    @property
    def total_weight(self) -> int:
        return int(sum(self.weights.values()))

    def __len__(self):
        return len(self.weights)

    def arrays(self):
        """``(alpha, beta, weight)`` int64 arrays in sorted cell order."""
        return self._arrays

    @cached_property
    def _arrays(self):
        cells = sorted(self.weights)
        if not cells:
            e = np.zeros(0, dtype=np.int64)
            return e, e, e
        a, b = np.array(cells, dtype=np.int64).T
        w = np.array([self.weights[c] for c in cells], dtype=np.int64)
        return a, b, w


def _cells(L: int):
    return [(a, b) for a in range(1, L + 1) for b in range(a)]


def uniform_measure(L) -> PreisachMeasure:
    L = as_resolution(L).L
    return PreisachMeasure(L, {c: 1 for c in _cells(L)})


def random_measure(L, seed, max_weight: int = 9, density: float = 0.5) -> PreisachMeasure:
    """Seeded measure: each cell kept with prob ``density``, weight in 1..max_weight."""
    L = as_resolution(L).L
    rng = np.random.default_rng(seed)
    cells = _cells(L)
    keep = rng.random(len(cells)) < density
    w = rng.integers(1, max_weight + 1, size=len(cells))
    return PreisachMeasure(L, {c: int(wi) for c, k, wi in zip(cells, keep, w) if k})


def relay_states(mu: PreisachMeasure, u) -> np.ndarray:
    """Final state of every cell of ``mu`` (in :meth:`PreisachMeasure.arrays` order)."""
    a, b, _ = mu.arrays()
    s = -np.ones(a.shape, dtype=np.int64)
    for x in u:
        if not (0 <= x <= mu.L):
            raise GridError(f"sample {x!r} is off the measure's grid (L={mu.L})")
        s[a <= x] = 1
        s[b >= x] = -1
    return s


def direct_output(mu: PreisachMeasure, u) -> int:
    """Weighted relay sum after feeding the whole history ``u``."""
    if len(u) == 0:
        raise ValueError("direct_output needs a nonempty sequence")
    _, _, w = mu.arrays()
    return int(np.dot(w, relay_states(mu, u)))


def reduced_sequence(state: EngineState) -> list:
    """Shortest history with the same memory as ``state``.

    ``[0, M1, m1, ..., Mk, mk] + [pending] + [current]``.
    """
    seq = [0]
    for M, m in state.vertices:
        seq += [M, m]
    if state.pending is not None:
        seq.append(state.pending)
    seq.append(state.current)
    return seq


def staircase_output(mu: PreisachMeasure, state: EngineState) -> int:
    """Preisach output computed from the stack alone."""
    if state.L != mu.L:
        raise GridError(f"state is on L={state.L} but measure on L={mu.L}")
    return direct_output(mu, reduced_sequence(state))


def load_measure(path, L) -> PreisachMeasure:
    """Read ``alpha_idx,beta_idx,weight`` lines; ``#`` starts a comment line."""
    L = as_resolution(L).L
    weights = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 3:
            raise ValueError(f"{path}:{lineno}: expected alpha,beta,weight")
        try:
            a, b, w = (int(p) for p in parts)
        except ValueError:
            raise ValueError(f"{path}:{lineno}: non-integer field in {line!r}") from None
        if w < 0:
            raise ValueError(f"{path}:{lineno}: negative weight")
        if (a, b) in weights:
            raise ValueError(f"{path}:{lineno}: duplicate cell ({a}, {b})")
        if not (0 <= b < a <= L):
            raise GridError(f"{path}:{lineno}: cell ({a}, {b}) invalid for L={L}")
        weights[(a, b)] = w
    return PreisachMeasure(L, weights)


def save_measure(mu: PreisachMeasure, path) -> None:
    lines = [f"# preisach measure, L={mu.L}"]
    lines += [f"{a},{b},{mu.weights[(a, b)]}" for a, b in sorted(mu.weights)]
    Path(path).write_text("\n".join(lines) + "\n")
