"""Hypergraphs on vertex ids 1..|V|, 2-colourings, and hitting-set search."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Iterable, Sequence

from . import _hitting
from .errors import EmptyEdgeSet, FormatError, SizeCapExceeded, VertexOutOfRange


def _mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << (v - 1)
    return m


def _unmask(m: int) -> tuple[int, ...]:
    return tuple(j + 1 for j in range(m.bit_length()) if m >> j & 1)


@dataclass(frozen=True)
class Hypergraph:
    vertex_count: int
    edges: tuple[frozenset, ...]

    def __init__(self, vertex_count: int, edges: Iterable[Iterable[int]]):
        es = tuple(frozenset(int(v) for v in e) for e in edges)
        for e in es:
            if not e:
                raise FormatError("edges must be nonempty")
            bad = [v for v in e if not 1 <= v <= vertex_count]
            if bad:
                raise VertexOutOfRange(f"vertex {bad[0]} outside 1..{vertex_count}")
        object.__setattr__(self, "vertex_count", int(vertex_count))
        object.__setattr__(self, "edges", es)

    @property
    def edge_masks(self) -> list[int]:
        return [_mask(e) for e in self.edges]

    def __len__(self) -> int:
        return len(self.edges)

    def dedup(self) -> "Hypergraph":
        seen = {}
        for e in self.edges:
            seen.setdefault(e, None)
        return Hypergraph(self.vertex_count, list(seen))

    @property
    def has_duplicates(self) -> bool:
        return len(set(self.edges)) != len(self.edges)

    def sorted_edges(self) -> list[tuple[int, ...]]:
        return [tuple(sorted(e)) for e in self.edges]


@dataclass(frozen=True)
class Colouring:
    colours: tuple[int, ...]

    def __init__(self, colours: Sequence[int] | str):
        if isinstance(colours, str):
            colours = [int(ch) for ch in colours.strip()]
        cs = tuple(int(c) for c in colours)
        if any(c not in (0, 1) for c in cs):
            raise FormatError("colours must be 0 or 1")
        object.__setattr__(self, "colours", cs)

    def __len__(self) -> int:
        return len(self.colours)

    def __getitem__(self, v: int) -> int:
        """Colour of vertex id v (1-based)."""
        return self.colours[v - 1]

    def class_mask(self, colour: int) -> int:
        return sum(1 << i for i, c in enumerate(self.colours) if c == colour)

    def __str__(self) -> str:
        return "".join(map(str, self.colours))


def rank(G: Hypergraph) -> int:
    if not G.edges:
        raise EmptyEdgeSet("rank of a hypergraph with no edges")
    return max(len(e) for e in G.edges)


def is_intersecting(G: Hypergraph) -> bool:
    ms = sorted(set(G.edge_masks))
    return all(a & b for a, b in combinations(ms, 2))


def is_hitting_set(G: Hypergraph, U: Iterable[int]) -> bool:
    U = set(U)
    bad = [v for v in U if not 1 <= v <= G.vertex_count]
    if bad:
        raise VertexOutOfRange(f"vertex {bad[0]} outside 1..{G.vertex_count}")
    return all(e & U for e in G.edges)


def is_monochromatic(c: Colouring, U: Iterable[int]) -> bool:
    return len({c[v] for v in U}) <= 1


def min_monochromatic_hitting_set(G: Hypergraph, c: Colouring, cap: int | None = None):
    """Smallest single-colour vertex set meeting every edge, as ``(size, vertices)``.

    Returns None when no monochromatic hitting set exists at all. With a cap
    below |V|, raises SizeCapExceeded when nothing of size <= cap exists but
    larger sets were not ruled out. Among optimal sets of both colours the
    lexicographically smallest vertex tuple wins.
    """
    if len(c) != G.vertex_count:
        raise FormatError("colouring length differs from |V|")
    best = None
    truncated = False
    for colour in (0, 1):
        allowed = c.class_mask(colour)
        sets = [m & allowed for m in G.edge_masks]
        if any(s == 0 for s in sets):
            continue
        limit = bin(allowed).count("1")
        if cap is not None and cap < limit:
            limit = cap
            truncated = True
        if best is not None:
            limit = min(limit, best[0])
        found = _lex_min_hitting(sets, limit)
        if found is not None:
            cand = (found[0], _unmask(found[1]))
            if best is None or cand < best:
                best = cand
    if best is None and truncated:
        # only raise if some colour class could have had a larger solution
        for colour in (0, 1):
            allowed = c.class_mask(colour)
            if all(m & allowed for m in G.edge_masks):
                raise SizeCapExceeded(f"no monochromatic hitting set of size <= {cap}")
    return best


def _lex_min_hitting(sets: list[int], limit: int):
    """Minimum hitting set; among minimum ones, the lexicographically smallest."""
    found = _hitting.min_hitting_set(sets, max_size=limit)
    if found is None:
        return None
    k = found[0]
    union = 0
    for s in sets:
        union |= s
    verts = [j for j in range(union.bit_length()) if union >> j & 1]
    if len(verts) > 20:
        return found
    for combo in combinations(verts, k):
        m = sum(1 << j for j in combo)
        if all(s & m for s in sets):
            return k, m
    return found  # pragma: no cover


# file formats ---------------------------------------------------------------


def dumps_hg(G: Hypergraph, comments: Iterable[str] = ()) -> str:
    lines = [f"c {c}" for c in comments]
    lines.append(f"p hg {G.vertex_count} {len(G.edges)}")
    lines += [" ".join(map(str, e)) for e in G.sorted_edges()]
    return "\n".join(lines) + "\n"


def loads_hg(text: str) -> Hypergraph:
    header = None
    edges = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line == "c" or line.startswith(("c ", "#")):
            continue
        if header is None:
            parts = line.split()
            if len(parts) != 4 or parts[:2] != ["p", "hg"]:
                raise FormatError(f"bad header line: {line!r}")
            header = (int(parts[2]), int(parts[3]))
            continue
        try:
            edges.append([int(t) for t in line.split()])
        except ValueError as e:
            raise FormatError(f"bad edge line: {line!r}") from e
    if header is None:
        raise FormatError("missing 'p hg' header")
    if len(edges) != header[1]:
        raise FormatError(f"header says {header[1]} edges, found {len(edges)}")
    return Hypergraph(header[0], edges)


def write_hg(G: Hypergraph, path, comments: Iterable[str] = ()) -> None:
    Path(path).write_text(dumps_hg(G, comments))


def read_hg(path) -> Hypergraph:
    return loads_hg(Path(path).read_text())


def write_col(c: Colouring, path) -> None:
    Path(path).write_text(str(c) + "\n")


def read_col(path) -> Colouring:
    lines = [ln.strip() for ln in Path(path).read_text().splitlines() if ln.strip() and not ln.startswith("#")]
    if len(lines) != 1:
        raise FormatError("colouring file must hold exactly one line")
    return Colouring(lines[0])


def triangle() -> Hypergraph:
    return Hypergraph(3, [{1, 2}, {2, 3}, {1, 3}])
