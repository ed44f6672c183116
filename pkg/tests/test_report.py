import math

from succinct_automata.automaton import random_acyclic_dfa, random_connected_dfa, random_connected_nfa
from succinct_automata.bench import BenchResult, bench_object, sweep_sigma, transient_walks
from succinct_automata.automaton import classify_acyclic
from succinct_automata.dyckcodec import encode_dyck
from succinct_automata.report import StatRow, bench_figure, format_table, format_tsv, stats_figure, stats_rows
from succinct_automata.sadfa import build_sadfa
from succinct_automata.sdfa import build_sdfa
from succinct_automata.snfa import build_snfa

import random


def test_ratio():
    assert StatRow("x", 10, "", 20).ratio == 0.5
    assert StatRow("x", 0, "", 0).ratio == 0.0
    assert StatRow("x", 1, "", 0).ratio == math.inf
    assert StatRow("x", 1).ratio is None


def test_rows_for_each_repr():
    d = random_connected_dfa(100, 4, 0.3, 1)
    objs = [build_sdfa(d), build_sadfa(random_acyclic_dfa(100, 4, 0.3, 1)),
            build_snfa(random_connected_nfa(10, 2, 0.2, 0.3, 1)), encode_dyck(d)]
    for obj in objs:
        rows = stats_rows(obj)
        assert rows and all(r.bits >= 0 for r in rows)
        tsv = format_tsv(rows).splitlines()
        assert len(tsv) == len(rows)
        assert all(line.split("\t")[0] == "stat" and len(line.split("\t")) == 6 for line in tsv)
        assert format_table(rows).splitlines()[0].startswith("section")
    sd = stats_rows(objs[0])
    total = next(r for r in sd if r.section == "total")
    assert total.bits == sum(r.bits for r in sd if r.section in ("F", "P", "T", "NewBoxed"))


def test_figures_are_written(tmp_path):
    rows = stats_rows(build_sdfa(random_connected_dfa(50, 3, 0.3, 2)))
    stats_figure(rows, tmp_path / "s.png", "demo")
    assert (tmp_path / "s.png").read_bytes()[:4] == b"\x89PNG"
    res = [BenchResult("a", 10, 2, 100, 5.0, 1000), BenchResult("a", 100, 2, 100, 6.0, 1000)]
    bench_figure(res, tmp_path / "b.png")
    assert (tmp_path / "b.png").stat().st_size > 0


def test_bench_smoke():
    r = bench_object(build_sdfa(random_connected_dfa(30, 2, 0.3, 0)), length=500, reps=2)
    assert r.ns_per_symbol > 0 and r.symbols == 500
    out = sweep_sigma(sigmas=(2, 4), n=50, length=300, reps=2)
    assert [x.sigma for x in out] == [2, 4]


def test_transient_walks_avoid_the_dead_state():
    d = random_acyclic_dfa(200, 3, 0.3, 4)
    dead = classify_acyclic(d)
    walks = transient_walks(d, dead, 2000, random.Random(0))
    assert sum(map(len, walks)) >= 2000
    for w in walks:
        q = d.initial
        for c in w:
            q = d.delta[q - 1][c - 1]
            assert q != dead
