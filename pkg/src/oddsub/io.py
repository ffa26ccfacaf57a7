"""Edge-list text format.

One edge per line as ``u v`` (decimal, single space).  Lines starting with
``#`` are comments.  An optional ``vertices: u1 u2 ...`` line declares
vertices explicitly, which is the only way to express isolated vertices.
"""

from __future__ import annotations

from typing import Iterable, TextIO

from .graph import Graph, GraphError, build_graph


def parse_edge_list(lines: Iterable[str]) -> Graph:
    edges = []
    vertices: list[int] = []
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("vertices:"):
            try:
                vertices.extend(int(t) for t in line[len("vertices:"):].split())
            except ValueError:
                raise GraphError(f"line {lineno}: bad vertex list") from None
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphError(f"line {lineno}: expected 'u v', got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphError(f"line {lineno}: non-integer vertex in {line!r}") from None
        if u < 0 or v < 0:
            raise GraphError(f"line {lineno}: negative vertex id")
        edges.append((u, v))
    return build_graph(edges, vertices)


def read_edge_list(path_or_file) -> Graph:
    if hasattr(path_or_file, "read"):
        return parse_edge_list(path_or_file)
    with open(path_or_file, encoding="ascii") as fh:
        return parse_edge_list(fh)


def format_edge_list(G: Graph) -> str:
    out = []
    if G.isolated_vertices():
        out.append("vertices: " + " ".join(map(str, G.vertices)))
    out.extend(f"{u} {v}" for u, v in G.edges())
    return "\n".join(out) + "\n"


def write_edge_list(G: Graph, fh: TextIO) -> None:
    fh.write(format_edge_list(G))
