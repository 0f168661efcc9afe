"""Extremum-stack memory for grid-quantized signals.

Streaming wiping-out engine, Preisach evaluation from the stack, indicator
queries with exact stack reconstruction, and a prefix-free state codec.
"""

from .codec import EventLog, decode, decode_prefix, encode_eventlog, encode_final, size_bits
from .engine import EngineState, StackEngine, VertexPair, canonical_stack, init, run, step
from .grid import Direction, Resolution, direction_of, quantize
from .oracle import oracle_stack
from .preisach import (
    PreisachMeasure,
    direct_output,
    random_measure,
    relay_step,
    staircase_output,
    uniform_measure,
)
from .queries import answer_table, dilate, enumerate_family, indicator_eval, reconstruct

__version__ = "0.1.0"

__all__ = [
    "Direction",
    "EngineState",
    "EventLog",
    "PreisachMeasure",
    "Resolution",
    "StackEngine",
    "VertexPair",
    "answer_table",
    "canonical_stack",
    "decode",
    "decode_prefix",
    "dilate",
    "direct_output",
    "direction_of",
    "encode_eventlog",
    "encode_final",
    "enumerate_family",
    "indicator_eval",
    "init",
    "oracle_stack",
    "quantize",
    "random_measure",
    "reconstruct",
    "relay_step",
    "run",
    "size_bits",
    "staircase_output",
    "step",
    "uniform_measure",
]
