"""``pstack`` command line: compress, inspect, query, verify, bench, gen.

Exit status: 0 success, 1 verification failure, 2 usage error, 3 I/O or
format error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time
from pathlib import Path

from . import codec
from .baselines import (
    paa_compress,
    paa_reconstruct,
    r_preservation_check,
    sdt_compress,
    sdt_reconstruct,
)
from .bits import CodecError
from .engine import StackEngine, pop_count_profile
from .grid import GridError
from .preisach import load_measure, reduced_sequence, staircase_output
from .queries import indicator_eval
from .signals import (
    IngestError,
    GeneratorSpec,
    KINDS,
    generate,
    open_stream,
    parse_spec,
    write_csv,
    write_psig,
)
from .verify import SUITES, run_suites

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

BENCH_FIELDS = [
    "stream", "method", "samples", "L", "bits", "raw_bits", "ratio",
    "preserved", "witness", "max_step_pops", "ops_per_sample",
]


class UsageError(Exception):
    pass


def _load_blob(path):
    data = Path(path).read_bytes()
    return codec.decode(data)


def _state_of(obj):
    return obj.replay() if isinstance(obj, codec.EventLog) else obj


def cmd_compress(args, out) -> int:
    samples, L = open_stream(args.input, args.L, column=args.column, clamp=args.clamp)
    it = iter(samples)
    try:
        first = next(it)
    except StopIteration:
        raise IngestError(f"{args.input}: no samples") from None
    eng = StackEngine(first, L, record=args.mode == "eventlog").feed(it)
    state = eng.state
    if args.mode == "eventlog":
        log = codec.EventLog(L, tuple(eng.log), eng.current, eng.direction)
        blob = codec.encode_eventlog(log)
        bits = codec.eventlog_size_bits(log)
    else:
        blob = codec.encode_final(state)
        bits = codec.size_bits(state)
    Path(args.output).write_bytes(blob)
    n = state.samples_seen - 1
    raw = codec.raw_size_bits(n, L)
    print(f"n={n} k={state.depth} size_bits={bits} raw_size_bits={raw} "
          f"ratio={raw / bits:.3f}", file=out)
    return EXIT_OK


def _state_record(obj) -> dict:
    state = _state_of(obj)
    rec = {
        "mode": "eventlog" if isinstance(obj, codec.EventLog) else "final",
        "L": state.L,
        "k": state.depth,
        "vertices": [list(v) for v in state.vertices],
        "pending": state.pending,
        "current": state.current,
        "direction": state.direction.name.lower(),
        "size_bits": codec.size_bits(state),
    }
    if isinstance(obj, codec.EventLog):
        rec["extrema"] = list(obj.extrema)
    return rec


def cmd_inspect(args, out) -> int:
    rec = _state_record(_load_blob(args.blob))
    if args.format == "jsonl":
        print(json.dumps(rec, sort_keys=True), file=out)
    else:
        for key, val in rec.items():
            print(f"{key}: {val}", file=out)
    return EXIT_OK


def cmd_query(args, out) -> int:
    state = _state_of(_load_blob(args.blob))
    if args.indicator is not None:
        try:
            M, m = (int(x) for x in args.indicator.split(","))
        except ValueError:
            raise UsageError(f"--indicator expects M,m, got {args.indicator!r}") from None
        if M < m:
            raise UsageError("--indicator needs M >= m")
        print(indicator_eval(state, (M, m)), file=out)
    else:
        mu = load_measure(args.measure, state.L)
        print(staircase_output(mu, state), file=out)
    return EXIT_OK


def cmd_verify(args, out) -> int:
    results = run_suites(args.suite, args.trials, args.seed)
    if args.trials == 0:
        print("warning: trials=0, every suite passes vacuously", file=out)
    for res in results:
        print(("PASS " if res.ok else "FAIL ") + res.summary(), file=out)
        if not res.ok:
            f = res.failures[0]
            print(f"  replay: seed={args.seed} suite={res.name} trial={f.trial}", file=out)
    return EXIT_OK if all(r.ok for r in results) else EXIT_FAIL


def _parse_baselines(text):
    out = []
    if not text:
        return out
    for item in text.split(","):
        item = item.strip()
        name, _, param = item.partition(":")
        key, _, val = param.partition("=")
        if name == "paa" and key == "w":
            out.append(("paa", int(val)))
        elif name == "sdt" and key == "eps":
            out.append(("sdt", val))
        else:
            raise UsageError(f"bad baseline {item!r}; use paa:w=<int> or sdt:eps=<num>")
    return out


def bench_rows(gen_specs, baselines, timing=False) -> list:
    rows = []
    for text in gen_specs:
        spec = parse_spec(text)
        u = generate(spec)
        L = spec.L
        n = len(u) - 1
        raw = codec.raw_size_bits(n, L)

        t0 = time.perf_counter()
        prof = pop_count_profile(u, L)
        state = StackEngine(u[0], L).feed(u[1:]).state
        bits = codec.size_bits(state)
        roundtrip = codec.decode(codec.encode_final(state))
        elapsed = time.perf_counter() - t0
        pres = r_preservation_check(u, reduced_sequence(roundtrip), L)
        row = {
            "stream": text, "method": "pstack", "samples": len(u), "L": L,
            "bits": bits, "raw_bits": raw, "ratio": f"{raw / bits:.3f}",
            "preserved": "yes" if pres else "no", "witness": _witness(pres),
            "max_step_pops": prof["max_pops"],
            "ops_per_sample": f"{(prof['total_pops'] + prof['total_pushes']) / len(u):.4f}",
        }
        if timing:
            row["wall_s"] = f"{elapsed:.4f}"
        rows.append(row)

        for name, param in baselines:
            t0 = time.perf_counter()
            if name == "paa":
                model = paa_compress(u, param)
                rec = paa_reconstruct(model)
                label = f"paa(w={param})"
            else:
                model = sdt_compress(u, param)
                rec = sdt_reconstruct(model, len(u))
                label = f"sdt(eps={param})"
            elapsed = time.perf_counter() - t0
            b = model.bits(L)
            pres = r_preservation_check(u, rec, L)
            row = {
                "stream": text, "method": label, "samples": len(u), "L": L,
                "bits": b, "raw_bits": raw, "ratio": f"{raw / b:.3f}",
                "preserved": "yes" if pres else "no", "witness": _witness(pres),
                "max_step_pops": "", "ops_per_sample": "",
            }
            if timing:
                row["wall_s"] = f"{elapsed:.4f}"
            rows.append(row)
    return rows


def _witness(pres) -> str:
    if pres:
        return ""
    pos, a, b = pres.witness
    fmt = lambda x: "none" if x is None else (str(tuple(x)) if isinstance(x, tuple) else str(x))  # noqa: E731
    return f"{pos}: {fmt(a)} -> {fmt(b)}"


def cmd_bench(args, out) -> int:
    rows = bench_rows(args.gen, _parse_baselines(args.baselines), timing=args.timing)
    fields = BENCH_FIELDS + (["wall_s"] if args.timing else [])
    if args.format == "jsonl":
        for row in rows:
            print(json.dumps(row, sort_keys=True), file=out)
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        out.write(buf.getvalue())
    else:
        widths = {f: max(len(f), *(len(str(r[f])) for r in rows)) for f in fields} if rows else {}
        print("  ".join(f.ljust(widths.get(f, len(f))) for f in fields).rstrip(), file=out)
        for r in rows:
            print("  ".join(str(r[f]).ljust(widths[f]) for f in fields).rstrip(), file=out)
    return EXIT_OK


def cmd_gen(args, out) -> int:
    params = {}
    for item in args.param or []:
        key, eq, val = item.partition("=")
        if not eq:
            raise UsageError(f"--param expects key=value, got {item!r}")
        params[key] = float(val) if any(c in val for c in ".e") else int(val)
    if args.kind == "pop_storm" and "depth" not in params and args.depth:
        params["depth"] = args.depth
    n = args.n if args.n is not None else (0 if args.kind == "pop_storm" else 1000)
    spec = GeneratorSpec(kind=args.kind, n=n, L=args.L, seed=args.seed, params=params)
    u = generate(spec)
    if str(args.out).endswith((".psig", ".bin")):
        write_psig(args.out, u, spec.L)
    else:
        write_csv(args.out, u, spec.L)
    print(f"wrote {len(u)} samples to {args.out}", file=out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pstack", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compress", help="stream a file through the engine and write a .pstk blob")
    c.add_argument("--input", required=True)
    c.add_argument("--L", type=int, help="resolution (required for CSV input)")
    c.add_argument("--mode", choices=("final", "eventlog"), default="final")
    c.add_argument("--output", required=True)
    c.add_argument("--column", type=int, default=0)
    c.add_argument("--clamp", action="store_true", help="clamp values outside [0, 1]")
    c.set_defaults(func=cmd_compress)

    i = sub.add_parser("inspect", help="decode and print a blob")
    i.add_argument("--blob", required=True)
    i.add_argument("--format", choices=("human", "jsonl"), default="human")
    i.set_defaults(func=cmd_inspect)

    q = sub.add_parser("query", help="answer an indicator or Preisach query from a blob")
    q.add_argument("--blob", required=True)
    g = q.add_mutually_exclusive_group(required=True)
    g.add_argument("--indicator", metavar="M,m")
    g.add_argument("--measure", metavar="PATH")
    q.set_defaults(func=cmd_query)

    v = sub.add_parser("verify", help="run the property suites")
    v.add_argument("--suite", choices=("all",) + SUITES, default="all")
    v.add_argument("--trials", type=int, default=200)
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="compare pstack with PAA / swinging door")
    b.add_argument("--gen", nargs="+", required=True, metavar="KIND:key=val,...")
    b.add_argument("--baselines", default="", metavar="paa:w=N,sdt:eps=X,...")
    b.add_argument("--format", choices=("human", "csv", "jsonl"), default="human")
    b.add_argument("--timing", action="store_true", help="add a wall_s column (not reproducible)")
    b.set_defaults(func=cmd_bench)

    gn = sub.add_parser("gen", help="write a synthetic stream (.psig binary, otherwise CSV)")
    gn.add_argument("--kind", choices=KINDS, required=True)
    gn.add_argument("--n", type=int, help="samples (default 1000; pop_storm: minimal length)")
    gn.add_argument("--L", type=int, default=100)
    gn.add_argument("--seed", type=int, default=0)
    gn.add_argument("--depth", type=int, default=0, help="pop_storm nesting depth")
    gn.add_argument("--param", action="append", metavar="key=value")
    gn.add_argument("--out", required=True)
    gn.set_defaults(func=cmd_gen)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"pstack: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, IngestError, CodecError, GridError, ValueError) as exc:
        print(f"pstack: error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
