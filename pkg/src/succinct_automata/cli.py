"""Command-line interface: ``succinct-automata <command> ...``.

Exit codes: 0 success, 1 query-level failure (bad word, round-trip
mismatch), 2 validation failure, 3 container integrity failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import container
from .automaton import (
    ExplicitDfa,
    ExplicitNfa,
    format_automaton,
    parse_automaton,
    parse_word,
    random_acyclic_dfa,
    random_connected_dfa,
    random_connected_nfa,
    relabel,
)
from .bench import bench_object, sweep_acyclic, sweep_sigma
from .dyckcodec import DyckBoxedDiagram, decode_dyck, encode_dyck
from .errors import IntegrityError, SuccinctError, ValidationError
from .product import build_product
from .report import bench_figure, format_table, format_tsv, stats_figure, stats_rows
from .sadfa import build_sadfa
from .sdfa import SuccinctDfa, build_sdfa, build_sdfa_failure
from .snfa import build_snfa

EXIT_OK, EXIT_QUERY, EXIT_VALIDATION, EXIT_INTEGRITY = 0, 1, 2, 3


def _read_input(path: str):
    """A text automaton or a container, decided by the leading magic."""
    data = sys.stdin.buffer.read() if path == "-" else Path(path).read_bytes()
    if data.startswith(container.MAGIC):
        return container.loads(data)
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError:
        raise IntegrityError(f"{path}: neither a container nor UTF-8 text") from None
    return parse_automaton(text)


def _read_dfa(path: str) -> ExplicitDfa:
    obj = _read_input(path)
    if isinstance(obj, ExplicitNfa):
        raise ValidationError("deterministic representation requires dfa input")
    if not isinstance(obj, ExplicitDfa):
        raise ValidationError(f"{path}: expected a text DFA, got a {container.repr_name(obj)} container")
    return obj


def _read_sdfa(path: str) -> SuccinctDfa:
    obj = _read_input(path)
    if isinstance(obj, ExplicitNfa):
        raise ValidationError(f"{path}: product and complement need DFAs")
    if isinstance(obj, ExplicitDfa):
        return build_sdfa(obj)
    if isinstance(obj, DyckBoxedDiagram):
        return build_sdfa(decode_dyck(obj))
    if not isinstance(obj, SuccinctDfa):
        raise ValidationError(f"{path}: expected a plain sdfa container, got {container.repr_name(obj)}")
    return obj


def _write(data: bytes | str, out: str | None) -> None:
    if isinstance(data, str):
        data = data.encode()
    if out is None or out == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        Path(out).write_bytes(data)


def _as_nfa(d: ExplicitDfa) -> ExplicitNfa:
    return ExplicitNfa(d.n, d.sigma, d.initial, d.finals,
                       [[frozenset({t}) for t in row] for row in d.delta], d.letters)


# -- commands ---------------------------------------------------------------


def cmd_build(args) -> int:
    obj = _read_input(args.input)
    if isinstance(obj, (ExplicitDfa, ExplicitNfa)):
        src = obj
    else:
        raise ValidationError("build expects a text automaton")
    if args.repr == "snfa":
        nf = src if isinstance(src, ExplicitNfa) else _as_nfa(src)
        out = build_snfa(nf)
    else:
        if isinstance(src, ExplicitNfa):
            raise ValidationError("deterministic representation requires dfa input")
        if args.repr == "sadfa":
            out = build_sadfa(src)
        elif args.failure is not None:
            out = build_sdfa_failure(src, args.failure)
        else:
            out = build_sdfa(src)
    _write(container.dumps(out), args.out)
    return EXIT_OK


def _acceptor(obj):
    if isinstance(obj, DyckBoxedDiagram):
        return build_sdfa(decode_dyck(obj))
    return obj


def cmd_accept(args) -> int:
    obj = _acceptor(container.load(args.container))
    letters = obj.alphabet
    lines = args.words if args.words else [ln.rstrip("\n") for ln in sys.stdin]
    failed = 0
    for lineno, line in enumerate(lines, 1):
        try:
            verdict = obj.accept(parse_word(line, letters))
        except ValidationError as exc:
            failed += 1
            print(f"line {lineno}: {exc}", file=sys.stderr)
            print("error")
            continue
        print("accept" if verdict else "reject")
    return EXIT_QUERY if failed else EXIT_OK


def cmd_stats(args) -> int:
    data = Path(args.container).read_bytes()
    kind, sections = container.read_sections(data)
    obj = container.loads(data)
    rows = stats_rows(obj)
    print(f"representation {kind}  n={obj.n}  sigma={obj.sigma}")
    print(format_table(rows))
    print()
    payload = 0
    for name, body in sections.items():
        print(f"section\t{name.decode()}\t{len(body) * 8}")
        payload += len(body) * 8
    print(f"section\tpayload\t{payload}")
    print(format_tsv(rows))
    if args.figure:
        stats_figure(rows, args.figure, f"{kind}: n={obj.n}, sigma={obj.sigma}")
    return EXIT_OK


def _first_mismatch(a: ExplicitDfa, b: ExplicitDfa):
    for q in range(1, a.n + 1):
        for c in range(1, a.sigma + 1):
            if a.delta[q - 1][c - 1] != b.delta[q - 1][c - 1]:
                return q, c
    return None


def cmd_roundtrip(args) -> int:
    obj = _read_input(args.input)
    if isinstance(obj, DyckBoxedDiagram):
        again = encode_dyck(decode_dyck(obj))
        if again != obj:
            print("MISMATCH: re-encoded diagram differs")
            return EXIT_QUERY
        print("OK")
        return EXIT_OK
    if not isinstance(obj, ExplicitDfa):
        raise ValidationError("roundtrip needs a text DFA or a dyck container")
    ref = relabel(obj)
    if obj.sigma >= 2:
        back = decode_dyck(encode_dyck(obj))
        if back.n != ref.n or back.finals != ref.finals or (w := _first_mismatch(ref, back)):
            print(f"MISMATCH: dyck round trip differs at (q, c) = {w}")
            return EXIT_QUERY
    s = build_sdfa(obj)
    for q in range(1, ref.n + 1):
        for c in range(1, ref.sigma + 1):
            if s.delta(q, c) != ref.delta[q - 1][c - 1]:
                print(f"MISMATCH: succinct delta differs at (q, c) = ({q}, {c})")
                return EXIT_QUERY
    print("OK")
    return EXIT_OK


def cmd_product(args) -> int:
    out = build_product(_read_sdfa(args.left), _read_sdfa(args.right), args.op)
    _write(container.dumps(out), args.out)
    return EXIT_OK


def cmd_complement(args) -> int:
    _write(container.dumps(_read_sdfa(args.input).complement()), args.out)
    return EXIT_OK


def cmd_encode_dyck(args) -> int:
    _write(container.dumps(encode_dyck(_read_dfa(args.input), args.failure)), args.out)
    return EXIT_OK


def cmd_decode_dyck(args) -> int:
    obj = container.load(args.container)
    if not isinstance(obj, DyckBoxedDiagram):
        raise ValidationError("decode-dyck expects a dyck container")
    d = decode_dyck(obj)
    _write(container.dumps(build_sdfa(d)) if args.format == "binary" else format_automaton(d), args.out)
    return EXIT_OK


def cmd_random(args) -> int:
    if args.kind == "dfa":
        a = random_connected_dfa(args.n, args.sigma, args.density, args.seed)
        built = build_sdfa
    elif args.kind == "acyclic":
        a = random_acyclic_dfa(args.n, args.sigma, args.density, args.seed)
        built = build_sadfa
    else:
        a = random_connected_nfa(args.n, args.sigma, args.edge_density, args.density, args.seed)
        built = build_snfa
    _write(container.dumps(built(a)) if args.format == "binary" else format_automaton(a), args.out)
    return EXIT_OK


def cmd_bench(args) -> int:
    if args.sweep == "acyclic":
        results, xkey = sweep_acyclic(length=args.length, reps=args.reps, seed=args.seed), "n"
    elif args.sweep == "sigma":
        results, xkey = sweep_sigma(length=args.length, reps=args.reps, seed=args.seed), "sigma"
    elif args.container:
        obj = _acceptor(container.load(args.container))
        results, xkey = [bench_object(obj, args.length, args.reps, args.seed)], "n"
    else:
        raise ValidationError("bench needs a container or --sweep")
    print("bench\tlabel\tn\tsigma\tsymbols\tns_per_symbol\tpeak_bytes")
    for r in results:
        print(f"bench\t{r.label}\t{r.n}\t{r.sigma}\t{r.symbols}\t{r.ns_per_symbol:.1f}\t{r.peak_bytes}")
    if args.figure:
        bench_figure(results, args.figure, xkey)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="succinct-automata",
                                     description="Build and query succinct finite automata.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="encode a text automaton into a container")
    p.add_argument("input")
    p.add_argument("--repr", choices=["sdfa", "sadfa", "snfa"], default="sdfa")
    p.add_argument("--failure", type=int, help="implicit failure state (sdfa only)")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("accept", help="print accept/reject for each word")
    p.add_argument("container")
    p.add_argument("words", nargs="*", help="words to test; read from stdin when absent")
    p.set_defaults(func=cmd_accept)

    p = sub.add_parser("stats", help="space accounting against the formula terms")
    p.add_argument("container")
    p.add_argument("--figure", help="write a bar chart to this path")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("roundtrip", help="encode/decode and exhaustive delta check")
    p.add_argument("input")
    p.set_defaults(func=cmd_roundtrip)

    p = sub.add_parser("product", help="union or intersection of two DFAs")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--op", choices=["union", "intersect"], default="union")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_product)

    p = sub.add_parser("complement", help="flip the finals of an sdfa")
    p.add_argument("input")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_complement)

    p = sub.add_parser("encode-dyck", help="text DFA to a dyck container")
    p.add_argument("input")
    p.add_argument("--failure", type=int)
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_encode_dyck)

    p = sub.add_parser("decode-dyck", help="dyck container to a DFA")
    p.add_argument("container")
    p.add_argument("--format", choices=["text", "binary"], default="text")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_decode_dyck)

    p = sub.add_parser("random", help="random automaton")
    p.add_argument("--kind", choices=["dfa", "acyclic", "nfa"], default="dfa")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--sigma", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--density", type=float, default=0.3, help="fraction of final states")
    p.add_argument("--edge-density", type=float, default=0.2, help="NFA edge probability")
    p.add_argument("--format", choices=["text", "binary"], default="text")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_random)

    p = sub.add_parser("bench", help="per-symbol acceptance time")
    p.add_argument("container", nargs="?")
    p.add_argument("--sweep", choices=["acyclic", "sigma"])
    p.add_argument("--length", type=int, default=10_000)
    p.add_argument("--reps", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--figure", help="write a line chart to this path")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except IntegrityError as exc:
        print(f"integrity error: {exc}", file=sys.stderr)
        return EXIT_INTEGRITY
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except SuccinctError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
