"""Line-oriented text container for a graph and its endorsement digraphs.

Grammar (UTF-8, LF line endings, one record per line)::

    #nodes N
    #edges M
    #skills K
    e u v        M lines, u < v, sorted
    a k u v      arc u -> v in skill k (0-based), sorted by (k, u, v)

Vertices are ``0..N-1``. A file with ``#skills 0`` carries no endorsements.
Blank lines are not allowed; the encoder never emits them.
"""

from __future__ import annotations

import os
import tempfile
from pathlib import Path

from .graph import EndorsementSet, Graph, GraphError


class FormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)


def encode(g: Graph, endorsements: EndorsementSet | None = None) -> bytes:
    if endorsements is not None and endorsements.base is not g and endorsements.base != g:
        raise ValueError("endorsement set annotates a different graph")
    k = endorsements.skill_count if endorsements is not None else 0
    lines = [
        f"#nodes {g.number_of_nodes()}",
        f"#edges {g.number_of_edges()}",
        f"#skills {k}",
    ]
    lines.extend(f"e {u} {v}" for u, v in g.edges())
    if endorsements is not None:
        for s in range(k):
            lines.extend(f"a {s} {u} {v}" for u, v in endorsements.sorted_arcs(s))
    return ("\n".join(lines) + "\n").encode("utf-8")


def _header(lines: list[str], idx: int, key: str) -> int:
    if idx >= len(lines):
        raise FormatError(f"missing '#{key}' header", idx + 1)
    parts = lines[idx].split(" ")
    if len(parts) != 2 or parts[0] != f"#{key}":
        raise FormatError(f"expected '#{key} <count>', got {lines[idx]!r}", idx + 1)
    try:
        value = int(parts[1])
    except ValueError:
        raise FormatError(f"bad count {parts[1]!r}", idx + 1) from None
    if value < 0:
        raise FormatError(f"negative count {value}", idx + 1)
    return value


def decode(data: bytes | str) -> tuple[Graph, EndorsementSet | None]:
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise FormatError(f"not UTF-8 (byte offset {exc.start})") from None
    else:
        text = data
    if "\r" in text:
        raise FormatError("CR characters are not allowed; use LF line endings")
    if text and not text.endswith("\n"):
        raise FormatError("missing final newline")
    lines = text.split("\n")[:-1]

    n = _header(lines, 0, "nodes")
    m = _header(lines, 1, "edges")
    k = _header(lines, 2, "skills")

    g = Graph(n)
    pos = 3
    for _ in range(m):
        lineno = pos + 1
        if pos >= len(lines):
            raise FormatError(f"expected {m} edge lines, file ended early", lineno)
        parts = lines[pos].split(" ")
        if len(parts) != 3 or parts[0] != "e":
            raise FormatError(f"expected 'e u v', got {lines[pos]!r}", lineno)
        try:
            u, v = int(parts[1]), int(parts[2])
        except ValueError:
            raise FormatError(f"bad vertex id in {lines[pos]!r}", lineno) from None
        try:
            if not g.add_edge(u, v):
                raise FormatError(f"duplicate edge {u} {v}", lineno)
        except GraphError as exc:
            raise FormatError(str(exc), lineno) from None
        pos += 1

    d = EndorsementSet(g, k) if k > 0 else None
    for pos in range(pos, len(lines)):
        lineno = pos + 1
        parts = lines[pos].split(" ")
        if len(parts) != 4 or parts[0] != "a":
            raise FormatError(f"expected 'a k u v', got {lines[pos]!r}", lineno)
        try:
            s, u, v = int(parts[1]), int(parts[2]), int(parts[3])
        except ValueError:
            raise FormatError(f"bad integer in {lines[pos]!r}", lineno) from None
        if d is None or not 0 <= s < k:
            raise FormatError(f"skill index {s} out of range for #skills {k}", lineno)
        try:
            if not d.add_arc(s, u, v):
                raise FormatError(f"duplicate arc {s} {u} {v}", lineno)
        except GraphError as exc:
            raise FormatError(str(exc), lineno) from None
    return g, d


def atomic_write(path: str | os.PathLike, data: bytes) -> None:
    """Write ``data`` to ``path`` via a temporary file and an atomic rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent or ".")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


def write_network(path, g: Graph, endorsements: EndorsementSet | None = None) -> None:
    atomic_write(path, encode(g, endorsements))


def read_network(path) -> tuple[Graph, EndorsementSet | None]:
    with open(path, "rb") as fh:
        return decode(fh.read())
