"""graph6 and plain edge-list serialization.

graph6 reference: https://users.cecs.anu.edu.au/~bdm/data/formats.txt
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterator

from .errors import Graph6ParseError, GraphInputError
from .graph import MAX_VERTICES, Graph, edge_pairs, from_edge_list

HEADER = b">>graph6<<"


def _as_bytes(line: bytes | str) -> bytes:
    if isinstance(line, str):
        try:
            return line.encode("ascii")
        except UnicodeEncodeError as exc:
            raise Graph6ParseError("non-ASCII character", exc.start) from None
    return bytes(line)


def parse_graph6(line: bytes | str) -> Graph:
    data = _as_bytes(line).rstrip(b"\r\n")
    base = 0
    if data.startswith(HEADER):
        data = data[len(HEADER):]
        base = len(HEADER)
    if not data:
        raise Graph6ParseError("empty graph6 record", base)
    for k, byte in enumerate(data):
        if not 63 <= byte <= 126:
            raise Graph6ParseError(f"byte {byte!r} outside [63, 126]", base + k)

    if data[0] == 126:
        if len(data) >= 2 and data[1] == 126:
            raise Graph6ParseError(f"8-byte size header exceeds the {MAX_VERTICES}-vertex cap", base)
        if len(data) < 4:
            raise Graph6ParseError("truncated 4-byte size header", base + len(data))
        n = ((data[1] - 63) << 12) | ((data[2] - 63) << 6) | (data[3] - 63)
        if n < 63:
            raise Graph6ParseError(f"long size header used for n={n}", base)
        pos = 4
    else:
        n = data[0] - 63
        pos = 1
    if n == 0 or n > MAX_VERTICES:
        raise Graph6ParseError(f"vertex count {n} outside 1..{MAX_VERTICES}", base)

    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    body = data[pos:]
    if len(body) != nbytes:
        raise Graph6ParseError(
            f"expected {nbytes} adjacency bytes for n={n}, found {len(body)}",
            base + pos + min(len(body), nbytes),
        )
    value = 0
    for byte in body:
        value = (value << 6) | (byte - 63)
    pad = 6 * nbytes - nbits
    if value & ((1 << pad) - 1):
        raise Graph6ParseError("nonzero padding bits", base + len(data) - 1)
    value >>= pad
    # first bit in the stream is the most significant of ``value``
    edges = [pair for b, pair in enumerate(edge_pairs(n)) if (value >> (nbits - 1 - b)) & 1]
    return from_edge_list(n, edges)


def to_graph6(g: Graph) -> bytes:
    n = g.n
    if n <= 62:
        out = bytearray([n + 63])
    else:
        out = bytearray([126, 63 + ((n >> 12) & 63), 63 + ((n >> 6) & 63), 63 + (n & 63)])
    pairs = edge_pairs(n)
    bits = [int(g.has_edge(i, j)) for i, j in pairs]
    bits += [0] * (-len(bits) % 6)
    for k in range(0, len(bits), 6):
        chunk = 0
        for b in bits[k:k + 6]:
            chunk = (chunk << 1) | b
        out.append(63 + chunk)
    return bytes(out)


def read_graph6_file(path: str | Path) -> Iterator[tuple[int, Graph]]:
    """Yield (line number, graph) for each non-blank record."""
    with open(path, "rb") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                yield lineno, parse_graph6(line)
            except Graph6ParseError as exc:
                raise Graph6ParseError(f"{path} line {lineno}: {exc.message}", exc.offset) from None


def parse_edge_list_text(text: str) -> Graph:
    """Parse ``"n\\ni j\\n..."``; blank lines and ``#`` comments are ignored."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [(k + 1, ln) for k, ln in enumerate(lines) if ln]
    if not lines:
        raise GraphInputError("edge list is empty; first line must be the vertex count")
    try:
        n = int(lines[0][1])
    except ValueError:
        raise GraphInputError(f"line {lines[0][0]}: expected vertex count") from None
    edges = []
    for lineno, ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise GraphInputError(f"line {lineno}: expected two vertex indices")
        try:
            edges.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise GraphInputError(f"line {lineno}: non-integer vertex index") from None
    return from_edge_list(n, edges)


def format_edge_list_text(g: Graph) -> str:
    return "".join([f"{g.n}\n"] + [f"{i} {j}\n" for i, j in g.edges()])


def parse_inline_edges(spec: str) -> Graph:
    """Parse the compact CLI form ``"n;i-j,i-j,..."``."""
    head, _, body = spec.partition(";")
    try:
        n = int(head)
    except ValueError:
        raise GraphInputError(f"inline edges: bad vertex count {head!r} (expected 'n;i-j,...')") from None
    edges = []
    for k, tok in enumerate(t.strip() for t in body.split(",")):
        if not tok:
            continue
        a, sep, b = tok.partition("-")
        try:
            if not sep:
                raise ValueError
            edges.append((int(a), int(b)))
        except ValueError:
            raise GraphInputError(f"inline edges: token {k} {tok!r} is not 'i-j'") from None
    return from_edge_list(n, edges)
