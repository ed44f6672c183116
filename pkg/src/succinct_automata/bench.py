"""Timing helpers for per-symbol acceptance cost."""

from __future__ import annotations

import random
import statistics
import time
import tracemalloc
from dataclasses import dataclass

from .automaton import ExplicitDfa, classify_acyclic, random_acyclic_dfa, random_connected_dfa
from .sadfa import build_sadfa
from .sdfa import build_sdfa


@dataclass
class BenchResult:
    label: str
    n: int
    sigma: int
    symbols: int
    ns_per_symbol: float
    peak_bytes: int


def time_words(accept, words, reps: int) -> float:
    """Median over ``reps`` runs of nanoseconds per symbol."""
    total = sum(len(w) for w in words) or 1
    samples = []
    for _ in range(reps):
        t0 = time.perf_counter_ns()
        for w in words:
            accept(w)
        samples.append((time.perf_counter_ns() - t0) / total)
    return statistics.median(samples)


def peak_bytes(accept, word) -> int:
    """Peak traced allocation of a single acceptance call."""
    tracemalloc.start()
    try:
        accept(word)
        return tracemalloc.get_traced_memory()[1]
    finally:
        tracemalloc.stop()


def random_word(sigma: int, length: int, rng: random.Random) -> list[int]:
    return [rng.randint(1, sigma) for _ in range(length)]


def transient_walks(d: ExplicitDfa, dead: int, total: int, rng: random.Random) -> list[list[int]]:
    """Words totalling ``total`` letters that avoid ``dead`` while they can.

    Each word is a random walk from the initial state choosing only letters
    that stay transient; it ends when every letter leads to ``dead``.
    """
    words = []
    left = total
    while left > 0:
        q = d.initial
        w = []
        while left > 0:
            live = [c for c in range(1, d.sigma + 1) if d.delta[q - 1][c - 1] != dead]
            if not live:
                break
            c = rng.choice(live)
            w.append(c)
            q = d.delta[q - 1][c - 1]
            left -= 1
        if not w:
            break
        words.append(w)
    return words


def bench_object(obj, length: int = 10_000, reps: int = 10, seed: int = 0, label: str = "") -> BenchResult:
    rng = random.Random(seed)
    word = random_word(obj.sigma, length, rng)
    ns = time_words(obj.accept, [word], reps)
    return BenchResult(label or type(obj).__name__, obj.n, obj.sigma, length, ns, peak_bytes(obj.accept, word))


def sweep_acyclic(sizes=(1_000, 10_000, 100_000), sigma: int = 4, length: int = 10_000,
                  reps: int = 10, seed: int = 0) -> list[BenchResult]:
    """Acyclic per-symbol cost as ``n`` grows, on two workloads.

    ``random`` feeds one uniform word of ``length`` letters (it falls into
    the dead state after at most ``n - 1`` letters); ``walk`` feeds words of
    the same total length that stay on transient states.
    """
    out = []
    for n in sizes:
        d = random_acyclic_dfa(n, sigma, 0.3, seed)
        s = build_sadfa(d)
        rng = random.Random(seed + n)
        word = random_word(sigma, length, rng)
        out.append(BenchResult("sadfa/random", n, sigma, length,
                               time_words(s.accept, [word], reps), peak_bytes(s.accept, word)))
        walks = transient_walks(d, classify_acyclic(d), length, rng)
        out.append(BenchResult("sadfa/walk", n, sigma, sum(map(len, walks)),
                               time_words(s.accept, walks, reps), peak_bytes(s.accept, walks[0])))
    return out


def sweep_sigma(sigmas=(2, 16, 256), n: int = 2_000, length: int = 10_000, reps: int = 10,
                seed: int = 0) -> list[BenchResult]:
    out = []
    for sigma in sigmas:
        s = build_sdfa(random_connected_dfa(n, sigma, 0.3, seed))
        out.append(bench_object(s, length, reps, seed + sigma, "sdfa"))
    return out
