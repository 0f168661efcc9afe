import csv
import io
import json

import pytest

from pstack import codec
from pstack.cli import main
from pstack.preisach import direct_output, random_measure, save_measure
from pstack.signals import write_psig


def cli(*argv):
    buf = io.StringIO()
    code = main([str(a) for a in argv], out=buf)
    return code, buf.getvalue()


@pytest.fixture
def stream(tmp_path):
    p = tmp_path / "u.psig"
    write_psig(p, [1, 9, 2, 7, 4, 6], 10)
    return p


def test_compress_and_inspect(tmp_path, stream):
    blob = tmp_path / "u.pstk"
    code, out = cli("compress", "--input", stream, "--output", blob)
    assert code == 0
    assert out.startswith("n=5 k=2 size_bits=")
    code, out = cli("inspect", "--blob", blob, "--format", "jsonl")
    rec = json.loads(out)
    assert rec["vertices"] == [[9, 2], [7, 4]] and rec["direction"] == "rising"
    assert rec["current"] == 6 and rec["mode"] == "final"


def test_compress_csv_eventlog(tmp_path):
    src = tmp_path / "u.csv"
    src.write_text("0.1\n0.9\n0.2\n0.7\n")
    blob = tmp_path / "e.pstk"
    code, out = cli("compress", "--input", src, "--L", 10, "--mode", "eventlog", "--output", blob)
    assert code == 0 and "k=1" in out
    obj = codec.decode(blob.read_bytes())
    assert isinstance(obj, codec.EventLog) and obj.extrema == (9, 2)


def test_compress_errors(tmp_path):
    assert cli("compress", "--input", tmp_path / "missing", "--L", 10,
               "--output", tmp_path / "o")[0] == 3
    src = tmp_path / "u.csv"
    src.write_text("0.5\n")
    assert cli("compress", "--input", src, "--output", tmp_path / "o")[0] == 3
    assert cli("compress", "--input", src)[0] == 2
    bad = tmp_path / "bad.pstk"
    bad.write_bytes(b"PSTK\x02\x00\x0a\xa0")
    assert cli("inspect", "--blob", bad)[0] == 3


def test_query(tmp_path, stream):
    blob = tmp_path / "u.pstk"
    cli("compress", "--input", stream, "--output", blob)
    assert cli("query", "--blob", blob, "--indicator", "9,2") == (0, "1\n")
    assert cli("query", "--blob", blob, "--indicator", "9,3") == (0, "0\n")
    assert cli("query", "--blob", blob, "--indicator", "2,9")[0] == 2
    mu = random_measure(10, 4)
    mpath = tmp_path / "mu.txt"
    save_measure(mu, mpath)
    code, out = cli("query", "--blob", blob, "--measure", mpath)
    assert code == 0 and int(out) == direct_output(mu, [1, 9, 2, 7, 4, 6])


def test_verify():
    code, out = cli("verify", "--trials", 20, "--seed", 3)
    assert code == 0
    assert out.count("PASS") == 4
    code, out = cli("verify", "--suite", "engine", "--trials", 0)
    assert code == 0 and "warning" in out


BENCH = ("bench", "--gen", "walk:n=300,L=50,seed=1", "pop_storm:d=5",
         "--baselines", "paa:w=4,sdt:eps=2", "--format", "csv")


def test_bench_csv_is_reproducible():
    code, out = cli(*BENCH)
    assert code == 0
    assert cli(*BENCH)[1] == out
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["method"] for r in rows] == ["pstack", "paa(w=4)", "sdt(eps=2)"] * 2
    assert all(r["preserved"] == "yes" for r in rows if r["method"] == "pstack")
    storm = [r for r in rows if r["stream"] == "pop_storm:d=5" and r["method"] == "pstack"][0]
    assert storm["max_step_pops"] == "5"
    assert "wall_s" not in rows[0]


def test_bench_other_formats():
    code, out = cli("bench", "--gen", "sine_drift:n=200", "--baselines", "paa:w=8", "--timing")
    assert code == 0 and "wall_s" in out.splitlines()[0]
    code, out = cli("bench", "--gen", "sine_drift:n=200", "--format", "jsonl")
    assert json.loads(out)["method"] == "pstack"
    assert cli("bench", "--gen", "walk", "--baselines", "foo:x=1")[0] == 2


def test_gen(tmp_path):
    out_csv = tmp_path / "g.csv"
    assert cli("gen", "--kind", "walk", "--n", 50, "--L", 20, "--out", out_csv)[0] == 0
    assert len(out_csv.read_text().splitlines()) == 50
    out_bin = tmp_path / "g.psig"
    assert cli("gen", "--kind", "pop_storm", "--depth", 4, "--L", 10, "--out", out_bin)[0] == 0
    assert out_bin.read_bytes()[:4] == b"PSIG"
    assert cli("gen", "--kind", "nope", "--out", out_bin)[0] == 2
