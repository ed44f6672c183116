"""Space accounting rows and the figures drawn from them."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .bench import BenchResult
from .dyckcodec import DyckBoxedDiagram
from .sadfa import SuccinctAcyclicDfa
from .sdfa import SuccinctDfa, SuccinctDfaFailure
from .snfa import SuccinctNfa


@dataclass
class StatRow:
    section: str
    bits: int
    formula: str = ""
    bound: float | None = None

    @property
    def ratio(self) -> float | None:
        if self.bound is None:
            return None
        if self.bound == 0:
            return 0.0 if self.bits == 0 else math.inf
        return self.bits / self.bound


def _clog(x: int) -> int:
    return math.ceil(math.log2(x)) if x > 1 else 0


def stats_rows(obj) -> list[StatRow]:
    """One row per stored component, then rows for the combined budgets."""
    if isinstance(obj, SuccinctDfa):
        n, s = obj.n, obj.sigma
        m = (s - 1) * n + 1
        sp = obj.space()
        small = sp["T"] + sp["P"] + sp["F"]
        return [
            StatRow("F", sp["F"], "n", n),
            StatRow("P", sp["P"], "2n", 2 * n),
            StatRow("T", sp["T"], "n log2 sigma", n * math.log2(s) if s > 1 else 0.0),
            StatRow("NewBoxed", sp["NewBoxed"], "(sigma-1)n ceil(log2(n+1)) + 64 ceil(log2 m)^2",
                    (s - 1) * n * _clog(n + 1) + 64 * _clog(m) ** 2),
            StatRow("T+P+F", small, "n(1+log2 sigma)", n * (1 + math.log2(s))),
            StatRow("total", sum(sp.values()), "(sigma-1)n log2 n", (s - 1) * n * math.log2(n) if n > 1 else 0.0),
        ]
    if isinstance(obj, SuccinctDfaFailure):
        n, s = obj.n, obj.sigma
        big_n = obj.non_failure_transitions
        sp = obj.space()
        return [
            StatRow("F", sp["F"], "n", n),
            StatRow("P", sp["P"], "2n", 2 * n),
            StatRow("T", sp["T"], "n log2 sigma", n * math.log2(s) if s > 1 else 0.0),
            StatRow("Z", sp["Z"]),
            StatRow("NewBoxedPrime", sp["NewBoxedPrime"], "(N-n+1) ceil(log2(n+1))",
                    (big_n - n + 1) * _clog(n + 1)),
            StatRow("total", sum(sp.values()), "(N-n) log2 n",
                    max(0, big_n - n) * math.log2(n) if n > 1 else 0.0),
        ]
    if isinstance(obj, SuccinctAcyclicDfa):
        sp = obj.space()
        n, s = obj.n, obj.sigma
        lead = (s - 1) * (n - 1) * math.log2(n) if n > 1 else 0.0
        return [
            StatRow("W", sp["W"], "2n", 2 * n),
            StatRow("L", sp["L"], "(sigma-1)(n-1) log2 n", lead),
            StatRow("F", sp["F"], "n", n),
            StatRow("start", sp["start"]),
            StatRow("total", sum(sp.values()), "(sigma-1)(n-1) log2 n + 3n", lead + 3 * n),
        ]
    if isinstance(obj, SuccinctNfa):
        sp = obj.space()
        n, s = obj.n, obj.sigma
        return [
            StatRow("H", sp["H"], "sigma n^2", s * n * n),
            StatRow("F", sp["F"], "n", n),
            StatRow("total", sp["H"] + sp["F"], "sigma n^2 + n", s * n * n + n),
            StatRow("workspace", 2 * n, "2n", 2 * n),
        ]
    if isinstance(obj, DyckBoxedDiagram):
        n, s = obj.n, obj.sigma
        return [
            StatRow("Max", obj.max.size_in_bits, "O(n log sigma)", n * (1 + math.log2(s))),
            StatRow("Boxed", obj.boxed.payload_bits, "(sigma-1)n log2 n",
                    (s - 1) * n * math.log2(n) if n > 1 else 0.0),
            StatRow("finals", obj.finals.payload_bits, "n", n),
        ]
    raise TypeError(f"no stats for {type(obj).__name__}")


def format_table(rows: Sequence[StatRow]) -> str:
    lines = [f"{'section':<14}{'bits':>12}  {'bound':>14}  {'ratio':>8}  formula"]
    for r in rows:
        bound = "" if r.bound is None else f"{r.bound:.1f}"
        ratio = "" if r.ratio is None else f"{r.ratio:.3f}"
        lines.append(f"{r.section:<14}{r.bits:>12}  {bound:>14}  {ratio:>8}  {r.formula}")
    return "\n".join(lines)


def format_tsv(rows: Sequence[StatRow]) -> str:
    out = []
    for r in rows:
        bound = "" if r.bound is None else f"{r.bound:.6g}"
        ratio = "" if r.ratio is None else f"{r.ratio:.6g}"
        out.append("\t".join(["stat", r.section, str(r.bits), bound, ratio, r.formula]))
    return "\n".join(out)


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def stats_figure(rows: Sequence[StatRow], path: str | Path, title: str = "") -> None:
    """Bar chart of measured bits next to the formula value for each row."""
    plt = _pyplot()
    rows = [r for r in rows if r.bound is not None]
    fig, ax = plt.subplots(figsize=(7, 4))
    xs = range(len(rows))
    ax.bar([x - 0.2 for x in xs], [r.bits for r in rows], width=0.4, label="measured")
    ax.bar([x + 0.2 for x in xs], [r.bound for r in rows], width=0.4, label="formula")
    ax.set_xticks(list(xs))
    ax.set_xticklabels([r.section for r in rows])
    ax.set_ylabel("bits")
    if title:
        ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def bench_figure(results: Sequence[BenchResult], path: str | Path, xkey: str = "n") -> None:
    """Per-symbol time against ``n`` or ``sigma``, one line per label."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 4))
    labels = sorted({r.label for r in results})
    for label in labels:
        pts = sorted((getattr(r, xkey), r.ns_per_symbol) for r in results if r.label == label)
        ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o", label=label)
    ax.set_xscale("log")
    ax.set_xlabel(xkey)
    ax.set_ylabel("ns per symbol (median)")
    ax.set_ylim(bottom=0)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
