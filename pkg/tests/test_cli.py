from pathlib import Path

import pytest

from succinct_automata import container
from succinct_automata.cli import main

DATA = Path(__file__).resolve().parent.parent / "data"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_build_accept(tmp_path, capsys):
    c = tmp_path / "p.saut"
    assert run(capsys, "build", DATA / "parity.dfa", "-o", c)[0] == 0
    code, out, _ = run(capsys, "accept", c, "", "0", "00", "0110", "1")
    assert code == 0
    assert out.split() == ["accept", "reject", "accept", "accept", "accept"]


def test_accept_reports_bad_words(tmp_path, capsys):
    c = tmp_path / "p.saut"
    run(capsys, "build", DATA / "parity.dfa", "-o", c)
    code, out, err = run(capsys, "accept", c, "00", "0x")
    assert code == 1
    assert out.split() == ["accept", "error"] and "line 2" in err


@pytest.mark.parametrize("repr_,src,word,verdict", [
    ("sadfa", "chain.dfa", "2", "accept"),
    ("snfa", "small.nfa", "ab", "accept"),
    ("snfa", "parity.dfa", "0", "reject"),
])
def test_other_reprs(tmp_path, capsys, repr_, src, word, verdict):
    c = tmp_path / "x.saut"
    assert run(capsys, "build", DATA / src, "--repr", repr_, "-o", c)[0] == 0
    assert container.repr_name(container.load(c)) == repr_
    assert run(capsys, "accept", c, word)[:2] == (0, verdict + "\n")


def test_nfa_into_deterministic_repr(tmp_path, capsys):
    code, _, err = run(capsys, "build", DATA / "small.nfa", "--repr", "sdfa", "-o", tmp_path / "x")
    assert code == 2 and "deterministic representation requires dfa input" in err


def test_cyclic_into_sadfa(tmp_path, capsys):
    assert run(capsys, "build", DATA / "parity.dfa", "--repr", "sadfa", "-o", tmp_path / "x")[0] == 2


def test_failure_build(tmp_path, capsys):
    c = tmp_path / "f.saut"
    assert run(capsys, "build", DATA / "chain.dfa", "--failure", "3", "-o", c)[0] == 0
    obj = container.load(c)
    assert obj.failure and obj.n == 2
    code, out, _ = run(capsys, "accept", c, "1", "2", "11", "")
    assert out.split() == ["accept", "accept", "reject", "reject"]


def test_stats_prints_rows_and_figure(tmp_path, capsys):
    c = tmp_path / "p.saut"
    run(capsys, "build", DATA / "ends_a.dfa", "-o", c)
    fig = tmp_path / "stats.png"
    code, out, _ = run(capsys, "stats", c, "--figure", fig)
    assert code == 0
    stat = [ln.split("\t") for ln in out.splitlines() if ln.startswith("stat\t")]
    assert {r[1] for r in stat} >= {"F", "P", "T", "NewBoxed", "total"}
    sections = [ln.split("\t") for ln in out.splitlines() if ln.startswith("section\t")]
    assert sections[-1][1] == "payload"
    assert int(sections[-1][2]) == sum(int(r[2]) for r in sections[:-1])
    assert fig.read_bytes()[:4] == b"\x89PNG"


def test_roundtrip(capsys, tmp_path):
    for name in ("parity.dfa", "ends_a.dfa", "chain.dfa"):
        code, out, _ = run(capsys, "roundtrip", DATA / name)
        assert (code, out.strip()) == (0, "OK")
    dy = tmp_path / "d.saut"
    run(capsys, "encode-dyck", DATA / "ends_b.dfa", "-o", dy)
    assert run(capsys, "roundtrip", dy)[:2] == (0, "OK\n")


def test_product_and_complement(tmp_path, capsys):
    u = tmp_path / "u.saut"
    assert run(capsys, "product", DATA / "ends_a.dfa", DATA / "ends_b.dfa", "--op", "union", "-o", u)[0] == 0
    _, out, _ = run(capsys, "accept", u, "a", "b", "c", "ca", "")
    assert out.split() == ["accept", "accept", "reject", "accept", "reject"]
    i = tmp_path / "i.saut"
    run(capsys, "product", DATA / "ends_a.dfa", DATA / "ends_b.dfa", "--op", "intersect", "-o", i)
    _, out, _ = run(capsys, "accept", i, "a", "b", "")
    assert out.split() == ["reject"] * 3
    comp = tmp_path / "c.saut"
    assert run(capsys, "complement", u, "-o", comp)[0] == 0
    _, out, _ = run(capsys, "accept", comp, "a", "c", "")
    assert out.split() == ["reject", "accept", "accept"]


def test_product_alphabet_mismatch(capsys):
    assert run(capsys, "product", DATA / "parity.dfa", DATA / "ends_a.dfa", "-o", "/dev/null")[0] == 2


def test_dyck_commands(tmp_path, capsys):
    dy = tmp_path / "d.saut"
    assert run(capsys, "encode-dyck", DATA / "parity.dfa", "-o", dy)[0] == 0
    code, out, _ = run(capsys, "decode-dyck", dy)
    assert code == 0 and out.startswith("dfa 2 2")
    b = tmp_path / "b.saut"
    assert run(capsys, "decode-dyck", dy, "--format", "binary", "-o", b)[0] == 0
    assert container.repr_name(container.load(b)) == "sdfa"
    assert run(capsys, "decode-dyck", b)[0] == 2


def test_random_and_bench(tmp_path, capsys):
    r = tmp_path / "r.saut"
    assert run(capsys, "random", "--n", 40, "--sigma", 3, "--seed", 2, "--format", "binary", "-o", r)[0] == 0
    code, out, _ = run(capsys, "random", "--kind", "nfa", "--n", 5, "--sigma", 2)
    assert code == 0 and out.startswith("nfa 5 2")
    code, out, _ = run(capsys, "random", "--kind", "acyclic", "--n", 5, "--sigma", 2)
    assert code == 0 and out.startswith("dfa 5 2")
    fig = tmp_path / "bench.png"
    code, out, _ = run(capsys, "bench", r, "--length", 200, "--reps", 2, "--figure", fig)
    lines = out.splitlines()
    assert code == 0 and lines[0].startswith("bench\tlabel") and len(lines) == 2
    assert fig.exists()
    assert run(capsys, "bench")[0] == 2


def test_integrity_and_missing_files(tmp_path, capsys):
    c = tmp_path / "p.saut"
    run(capsys, "build", DATA / "parity.dfa", "-o", c)
    data = bytearray(c.read_bytes())
    data[-1] ^= 0xFF
    c.write_bytes(bytes(data))
    code, _, err = run(capsys, "accept", c, "0")
    assert code == 3 and "integrity" in err
    assert run(capsys, "accept", tmp_path / "missing", "0")[0] == 2
    bad = tmp_path / "bad.dfa"
    bad.write_text("dfa 2 1\ninitial 1\ntrans 1 1 2\n")
    code, _, err = run(capsys, "build", bad, "-o", tmp_path / "o")
    assert code == 2
