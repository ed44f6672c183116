"""Binary container for every representation.

Layout (all integers little-endian)::

    header   magic "SAUT", u16 version, u8 repr tag, u8 reserved, u32 nsections
    table    nsections x (4-byte kind, u64 offset, u64 length, u32 crc32)
    bodies   section payloads, in table order, back to back

Each representation writes a ``HEAD`` section, a ``LMAP`` letter map and
its own structure sections.  Every reader check failure is an
``IntegrityError``.
"""

from __future__ import annotations

import json
import struct
import zlib
from pathlib import Path

from .bits import Bitvector, MonotoneSequence, SparseBitvector
from .bptree import BpTree
from .dyckcodec import DyckBoxedDiagram, check_diagram
from .errors import IntegrityError, ValidationError
from .packedvec import PackedVector
from .sadfa import SuccinctAcyclicDfa
from .sdfa import SuccinctDfa, SuccinctDfaFailure
from .snfa import SuccinctNfa

MAGIC = b"SAUT"
VERSION = 1
_OUTER = struct.Struct("<4sHBBI")
_ENTRY = struct.Struct("<4sQQI")
_HEAD = struct.Struct("<4sHQQQB")
_HMAT = struct.Struct("<4sQQ")

REPR_TAGS = {"sdfa": 1, "sadfa": 2, "snfa": 3, "dyck": 4}
_TAG_NAMES = {v: k for k, v in REPR_TAGS.items()}
_HEAD_MAGIC = {"sdfa": b"SDFA", "sadfa": b"SADF", "snfa": b"SNFA", "dyck": b"DYCK"}

FLAG_FAILURE = 1


def repr_name(obj) -> str:
    if isinstance(obj, (SuccinctDfa, SuccinctDfaFailure)):
        return "sdfa"
    if isinstance(obj, SuccinctAcyclicDfa):
        return "sadfa"
    if isinstance(obj, SuccinctNfa):
        return "snfa"
    if isinstance(obj, DyckBoxedDiagram):
        return "dyck"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _letter_map(obj) -> bytes:
    letters = obj.letters or [str(c) for c in range(1, obj.sigma + 1)]
    return json.dumps(list(letters), separators=(",", ":")).encode()


def _sections(obj) -> list[tuple[bytes, bytes]]:
    kind = repr_name(obj)
    magic = _HEAD_MAGIC[kind]
    if kind == "sdfa":
        flags = FLAG_FAILURE if obj.failure else 0
        out = [
            (b"HEAD", _HEAD.pack(magic, VERSION, obj.n, obj.sigma, obj.initial_label, flags)),
            (b"LMAP", _letter_map(obj)),
            (b"FINL", obj.F.to_bytes()),
            (b"PARN", obj.P.parens.to_bytes()),
            (b"PDIR", obj.P.directory_bytes()),
            (b"TREE", obj.T.to_bytes()),
        ]
        if obj.failure:
            out += [(b"ZBIT", obj.Z.to_bytes()), (b"NBXP", obj.new_boxed_prime.to_bytes())]
        else:
            out.append((b"NBOX", obj.new_boxed.to_bytes()))
        return out
    if kind == "sadfa":
        return [
            (b"HEAD", _HEAD.pack(magic, VERSION, obj.n, obj.sigma, obj.start_label, 0)),
            (b"LMAP", _letter_map(obj)),
            (b"FINL", obj.F.to_bytes()),
            (b"WPAR", obj.W.parens.to_bytes()),
            (b"WDIR", obj.W.directory_bytes()),
            (b"LTAB", obj.L.to_bytes()),
        ]
    if kind == "snfa":
        return [
            (b"HEAD", _HEAD.pack(magic, VERSION, obj.n, obj.sigma, obj.initial, 0)),
            (b"LMAP", _letter_map(obj)),
            (b"FINL", obj.F.to_bytes()),
            (b"HMAT", _HMAT.pack(b"HMAT", obj.n, obj.sigma) + obj.h_payload_bytes()),
        ]
    flags = FLAG_FAILURE if obj.failure else 0
    return [
        (b"HEAD", _HEAD.pack(magic, VERSION, obj.n, obj.sigma, 1, flags)),
        (b"LMAP", _letter_map(obj)),
        (b"FINL", obj.finals.to_bytes()),
        (b"MAXS", obj.max.to_bytes()),
        (b"BOXD", obj.boxed.to_bytes()),
    ]


def dumps(obj) -> bytes:
    sections = _sections(obj)
    tag = REPR_TAGS[repr_name(obj)]
    head = _OUTER.pack(MAGIC, VERSION, tag, 0, len(sections))
    offset = _OUTER.size + _ENTRY.size * len(sections)
    table = []
    for kind, body in sections:
        table.append(_ENTRY.pack(kind, offset, len(body), zlib.crc32(body)))
        offset += len(body)
    return head + b"".join(table) + b"".join(body for _, body in sections)


def read_sections(data: bytes) -> tuple[str, dict[bytes, bytes]]:
    """Verify the outer structure and return ``(repr name, {kind: body})``."""
    if len(data) < _OUTER.size:
        raise IntegrityError("file too short for a container header")
    magic, version, tag, _, count = _OUTER.unpack_from(data)
    if magic != MAGIC:
        raise IntegrityError(f"bad container magic {magic!r}")
    if version != VERSION:
        raise IntegrityError(f"unsupported container version {version}")
    if tag not in _TAG_NAMES:
        raise IntegrityError(f"unknown representation tag {tag}")
    table_end = _OUTER.size + _ENTRY.size * count
    if table_end > len(data):
        raise IntegrityError("section table runs past the end of the file")
    sections: dict[bytes, bytes] = {}
    spans = []
    for i in range(count):
        kind, off, length, crc = _ENTRY.unpack_from(data, _OUTER.size + i * _ENTRY.size)
        name = kind.decode("ascii", "replace")
        if kind in sections:
            raise IntegrityError(f"duplicate section {name}")
        if length == 0:
            raise IntegrityError(f"section {name} is empty")
        if off < table_end or off + length > len(data):
            raise IntegrityError(f"section {name} lies outside the file")
        body = data[off:off + length]
        if zlib.crc32(body) != crc:
            raise IntegrityError(f"section {name} fails its checksum")
        spans.append((off, off + length, name))
        sections[kind] = body
    spans.sort()
    for (_, end, a), (start, _, b) in zip(spans, spans[1:]):
        if start < end:
            raise IntegrityError(f"sections {a} and {b} overlap")
    return _TAG_NAMES[tag], sections


def _need(sections, kind: bytes) -> bytes:
    if kind not in sections:
        raise IntegrityError(f"missing section {kind.decode()}")
    return sections[kind]


def _head(sections, kind):
    body = _need(sections, b"HEAD")
    if len(body) != _HEAD.size:
        raise IntegrityError("HEAD section has the wrong size")
    magic, version, n, sigma, init, flags = _HEAD.unpack(body)
    if magic != _HEAD_MAGIC[kind]:
        raise IntegrityError(f"HEAD magic {magic!r} does not match representation {kind}")
    if version != VERSION:
        raise IntegrityError(f"unsupported {kind} version {version}")
    if n < 1 or sigma < 1:
        raise IntegrityError("header declares an empty automaton")
    return n, sigma, init, flags


def _letters(sections, sigma):
    try:
        letters = json.loads(_need(sections, b"LMAP").decode())
    except (UnicodeDecodeError, json.JSONDecodeError):
        raise IntegrityError("LMAP section is not a JSON letter list") from None
    if (not isinstance(letters, list) or len(letters) != sigma
            or not all(isinstance(a, str) and a for a in letters) or len(set(letters)) != sigma):
        raise IntegrityError("LMAP must list sigma distinct letter names")
    if letters == [str(c) for c in range(1, sigma + 1)]:
        return None
    return tuple(letters)


def _expect(cond, message):
    if not cond:
        raise IntegrityError(message)


def loads(data: bytes):
    kind, sec = read_sections(data)
    n, sigma, init, flags = _head(sec, kind)
    letters = _letters(sec, sigma)
    F = Bitvector.from_bytes(_need(sec, b"FINL"))
    _expect(len(F) == n, "finals vector length does not match n")
    try:
        if kind == "sdfa":
            return _load_sdfa(sec, n, sigma, init, flags, F, letters)
        if kind == "sadfa":
            return _load_sadfa(sec, n, sigma, init, F, letters)
        if kind == "snfa":
            return _load_snfa(sec, n, sigma, init, F, letters)
        return _load_dyck(sec, n, sigma, flags, F, letters)
    except ValidationError as exc:
        raise IntegrityError(f"container content is invalid: {exc}") from None


def _tree(sec, par, dirk, n):
    P = BpTree.from_sections(Bitvector.from_bytes(_need(sec, par)), _need(sec, dirk))
    _expect(len(P) == n, "tree node count does not match n")
    return P


def _packed(body, length, base, lo, hi, name):
    vec = PackedVector.from_bytes(body)
    _expect(len(vec) == length and vec.base == base, f"{name} has the wrong shape")
    vals = vec.to_list()
    _expect(all(lo <= v <= hi for v in vals), f"{name} holds an out-of-range value")
    return vec


def _load_sdfa(sec, n, sigma, init, flags, F, letters):
    _expect(init == 1, "initial label of a succinct DFA must be 1")
    P = _tree(sec, b"PARN", b"PDIR", n)
    T = SparseBitvector.from_bytes(_need(sec, b"TREE"))
    _expect(len(T) == sigma * n and T.ones == n - 1, "T must have sigma*n bits and n-1 ones")
    m = (sigma - 1) * n + 1
    if flags & FLAG_FAILURE:
        Z = SparseBitvector.from_bytes(_need(sec, b"ZBIT"))
        _expect(len(Z) == m, "Z must have (sigma-1)n+1 bits")
        nbp = _packed(_need(sec, b"NBXP"), Z.ones, n + 1, 1, n, "NewBoxedPrime")
        return SuccinctDfaFailure(n, sigma, 1, F, P, T, Z, nbp, letters)
    nb = _packed(_need(sec, b"NBOX"), m, n + 1, 1, n, "NewBoxed")
    return SuccinctDfa(n, sigma, 1, F, P, T, nb, letters)


def _load_sadfa(sec, n, sigma, start, F, letters):
    _expect(start < n, "start label outside [0, n-1]")
    W = _tree(sec, b"WPAR", b"WDIR", n)
    L = _packed(_need(sec, b"LTAB"), (n - 1) * (sigma - 1), n, 0, n - 1, "L table")
    return SuccinctAcyclicDfa(n, sigma, start, W, L, F, letters)


def _load_snfa(sec, n, sigma, init, F, letters):
    _expect(1 <= init <= n, "initial state outside [1, n]")
    body = _need(sec, b"HMAT")
    _expect(len(body) >= _HMAT.size, "truncated HMAT section")
    magic, hn, hs = _HMAT.unpack_from(body)
    _expect(magic == b"HMAT" and (hn, hs) == (n, sigma), "HMAT header does not match HEAD")
    payload = body[_HMAT.size:]
    nbits = sigma * n * n
    _expect(len(payload) == (nbits + 63) // 64 * 8, "HMAT payload length does not match sigma*n^2")
    value = int.from_bytes(payload, "little")
    _expect(value >> nbits == 0, "HMAT has bits past sigma*n^2")
    return SuccinctNfa.from_payload(n, sigma, init, value, F, letters)


def _load_dyck(sec, n, sigma, flags, F, letters):
    mx = MonotoneSequence.from_bytes(_need(sec, b"MAXS"))
    bx = PackedVector.from_bytes(_need(sec, b"BOXD"))
    _expect(mx.universe == n + 1 and bx.base == n + 1, "Max/Boxed universes must be n+1")
    diag = DyckBoxedDiagram(n, sigma, mx, bx, F, bool(flags & FLAG_FAILURE), letters)
    check_diagram(diag)
    return diag


def save(obj, path: str | Path) -> None:
    Path(path).write_bytes(dumps(obj))


def load(path: str | Path):
    return loads(Path(path).read_bytes())
