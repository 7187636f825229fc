"""Multigraphs, hinge graphs, thick cycles and their Laplacians.

Vertices are the integers ``0 .. n_vertices - 1``. Edges are stored as a
sorted tuple of ``(u, v, multiplicity)`` triples with ``u < v``, which keeps
every graph hashable so expensive derived data (Smith forms, adjacency) can
be cached per graph.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

from .exact_linalg import IntegerMatrix


class GraphFormatError(ValueError):
    """Malformed graph, layout or divisor document."""


@dataclass(frozen=True)
class Multigraph:
    n_vertices: int
    edges: tuple[tuple[int, int, int], ...] = ()

    def __post_init__(self):
        if self.n_vertices < 0:
            raise ValueError("n_vertices must be non-negative")
        seen = set()
        for u, v, m in self.edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < v < self.n_vertices):
                raise ValueError(f"edge ({u}, {v}) not normalised or out of range")
            if m < 1:
                raise ValueError(f"edge ({u}, {v}) has multiplicity {m}")
            if (u, v) in seen:
                raise ValueError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))
        if list(self.edges) != sorted(self.edges):
            raise ValueError("edges must be sorted")

    @classmethod
    def from_edges(cls, n_vertices: int, edges: Iterable[Sequence[int]]) -> "Multigraph":
        """Build from ``(u, v)`` or ``(u, v, m)`` items; repeated pairs accumulate."""
        mult: dict[tuple[int, int], int] = {}
        for e in edges:
            u, v = e[0], e[1]
            m = e[2] if len(e) > 2 else 1
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < n_vertices and 0 <= v < n_vertices):
                raise ValueError(f"edge ({u}, {v}) out of range")
            if m < 1:
                raise ValueError(f"edge ({u}, {v}) has multiplicity {m}")
            key = (min(u, v), max(u, v))
            mult[key] = mult.get(key, 0) + m
        return cls(n_vertices, tuple(sorted((u, v, m) for (u, v), m in mult.items())))

    # derived data; cached_property works on frozen dataclasses via __dict__
    @cached_property
    def adjacency(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """``adjacency[v]`` lists ``(neighbour, multiplicity)`` pairs."""
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.n_vertices)]
        for u, v, m in self.edges:
            adj[u].append((v, m))
            adj[v].append((u, m))
        return tuple(tuple(a) for a in adj)

    @cached_property
    def valences(self) -> tuple[int, ...]:
        return tuple(sum(m for _, m in nbrs) for nbrs in self.adjacency)

    def multiplicity(self, u: int, v: int) -> int:
        a, b = min(u, v), max(u, v)
        for x, y, m in self.edges:
            if (x, y) == (a, b):
                return m
        return 0

    @property
    def edge_count(self) -> int:
        """Number of edges counted with multiplicity."""
        return sum(m for _, _, m in self.edges)

    def is_simple(self) -> bool:
        return all(m == 1 for _, _, m in self.edges)


@dataclass(frozen=True)
class HingeSpec:
    """Cycle sizes ``(k_1, ..., k_n)``; each counts the two shared vertices."""

    cycle_sizes: tuple[int, ...]

    def __post_init__(self):
        sizes = tuple(int(k) for k in self.cycle_sizes)
        object.__setattr__(self, "cycle_sizes", sizes)
        if len(sizes) < 1:
            raise ValueError("a hinge needs at least one cycle")
        if any(k < 3 for k in sizes):
            raise ValueError(f"every cycle needs at least 3 vertices, got {sizes}")

    @property
    def n(self) -> int:
        return len(self.cycle_sizes)

    def is_same_shape(self) -> bool:
        return len(set(self.cycle_sizes)) == 1


@dataclass(frozen=True)
class HingeLayout:
    spec: HingeSpec
    shared: tuple[int, int] = (0, 1)
    cycle_paths: tuple[tuple[int, ...], ...] = field(default=())

    def path(self, i: int) -> tuple[int, ...]:
        """Path vertices of cycle ``i`` (1-based, as the cycles are numbered in reports)."""
        if not 1 <= i <= len(self.cycle_paths):
            raise IndexError(f"cycle index {i} out of range 1..{len(self.cycle_paths)}")
        return self.cycle_paths[i - 1]


def _as_spec(spec) -> HingeSpec:
    return spec if isinstance(spec, HingeSpec) else HingeSpec(tuple(spec))


def build_hinge(spec) -> tuple[Multigraph, HingeLayout]:
    """Glue cycles of the given sizes along the shared edge ``{0, 1}``.

    Vertex 0 and 1 are the shared pair; cycle ``i`` then contributes its
    ``k_i - 2`` path vertices in order from the vertex next to 0 to the vertex
    next to 1, numbered consecutively after the previous cycle's.
    """
    spec = _as_spec(spec)
    edges = [(0, 1)]
    paths = []
    nxt = 2
    for k in spec.cycle_sizes:
        path = tuple(range(nxt, nxt + k - 2))
        nxt += k - 2
        chain = (0, *path, 1)
        edges.extend(zip(chain, chain[1:]))
        paths.append(path)
    g = Multigraph.from_edges(nxt, edges)
    return g, HingeLayout(spec, (0, 1), tuple(paths))


def build_thick_cycle(multiplicities: Sequence[int]) -> Multigraph:
    """Cycle on ``len(multiplicities)`` vertices; edge ``{i, i+1}`` gets ``multiplicities[i]``.

    With two vertices the two edge classes merge into one pair of multiplicity
    ``m_0 + m_1``.
    """
    mults = [int(m) for m in multiplicities]
    if len(mults) < 2:
        raise ValueError("a thick cycle needs at least 2 edge classes")
    if any(m < 1 for m in mults):
        raise ValueError(f"multiplicities must be positive, got {mults}")
    n = len(mults)
    return Multigraph.from_edges(n, [(i, (i + 1) % n, m) for i, m in enumerate(mults)])


def hinge_dual(spec) -> Multigraph:
    """Planar dual of the hinge graph: the thick cycle ``[k_1-1, ..., k_n-1, 1]``.

    Draw the cycles as nested arcs over the shared edge. The faces are the
    ``n - 1`` regions between consecutive arcs, the region inside the innermost
    arc (bounded by the shared edge) and the outer face. Each cycle's ``k_i - 1``
    path edges separate two consecutive faces, and the shared edge closes the
    ring between the innermost and outer faces.
    """
    spec = _as_spec(spec)
    return build_thick_cycle([k - 1 for k in spec.cycle_sizes] + [1])


def laplacian(g: Multigraph) -> IntegerMatrix:
    """``D - A`` with multiplicities (the negation of the ``A - M`` convention)."""
    n = g.n_vertices
    rows = [[0] * n for _ in range(n)]
    for u, v, m in g.edges:
        rows[u][u] += m
        rows[v][v] += m
        rows[u][v] -= m
        rows[v][u] -= m
    return IntegerMatrix(rows)


def is_connected(g: Multigraph) -> bool:
    if g.n_vertices == 0:
        return True
    seen = {0}
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for w, _ in g.adjacency[v]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return len(seen) == g.n_vertices


def toggle_edge(g: Multigraph, u: int, v: int) -> Multigraph:
    """Add ``{u, v}`` when absent, otherwise remove one copy of it."""
    if u == v:
        raise ValueError("cannot toggle a loop")
    if not (0 <= u < g.n_vertices and 0 <= v < g.n_vertices):
        raise ValueError(f"vertex out of range: ({u}, {v})")
    a, b = min(u, v), max(u, v)
    m = g.multiplicity(a, b)
    rest = [e for e in g.edges if (e[0], e[1]) != (a, b)]
    if m == 0:
        rest.append((a, b, 1))
    elif m > 1:
        rest.append((a, b, m - 1))
    return Multigraph(g.n_vertices, tuple(sorted(rest)))


# -- serialization -----------------------------------------------------------

def dumps_graph(g: Multigraph) -> str:
    doc = {"n_vertices": g.n_vertices, "edges": [list(e) for e in g.edges]}
    return json.dumps(doc, sort_keys=True) + "\n"


def _int(x, what: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise GraphFormatError(f"{what} must be an integer, got {x!r}")
    return x


def loads_graph(text: str) -> Multigraph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"not a JSON document: {exc}") from None
    if not isinstance(doc, dict) or "n_vertices" not in doc or "edges" not in doc:
        raise GraphFormatError("graph document needs 'n_vertices' and 'edges'")
    n = _int(doc["n_vertices"], "n_vertices")
    if n < 0:
        raise GraphFormatError("n_vertices must be non-negative")
    seen: set[tuple[int, int]] = set()
    triples = []
    for item in doc["edges"]:
        if not isinstance(item, list) or len(item) != 3:
            raise GraphFormatError(f"edge must be a [u, v, multiplicity] triple, got {item!r}")
        u, v, m = (_int(x, "edge entry") for x in item)
        if u == v:
            raise GraphFormatError(f"loop at vertex {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"edge ({u}, {v}) out of range for {n} vertices")
        if m < 1:
            raise GraphFormatError(f"edge ({u}, {v}) has non-positive multiplicity {m}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphFormatError(f"duplicate edge {key}")
        seen.add(key)
        triples.append((*key, m))
    return Multigraph(n, tuple(sorted(triples)))


def dumps_layout(layout: HingeLayout) -> str:
    doc = {
        "cycle_sizes": list(layout.spec.cycle_sizes),
        "shared": list(layout.shared),
        "cycle_paths": [list(p) for p in layout.cycle_paths],
    }
    return json.dumps(doc, sort_keys=True) + "\n"


def loads_layout(text: str, g: Multigraph | None = None) -> HingeLayout:
    try:
        doc = json.loads(text)
        spec = HingeSpec(tuple(doc["cycle_sizes"]))
        layout = HingeLayout(spec, tuple(doc["shared"]), tuple(tuple(p) for p in doc["cycle_paths"]))
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise GraphFormatError(f"bad layout document: {exc}") from None
    if len(layout.shared) != 2 or len(layout.cycle_paths) != spec.n:
        raise GraphFormatError("layout shape does not match its cycle sizes")
    for k, p in zip(spec.cycle_sizes, layout.cycle_paths):
        if len(p) != k - 2:
            raise GraphFormatError(f"cycle of size {k} needs {k - 2} path vertices, got {len(p)}")
    if g is not None:
        s0, s1 = layout.shared
        for p in layout.cycle_paths:
            chain = (s0, *p, s1)
            if any(g.multiplicity(a, b) == 0 for a, b in zip(chain, chain[1:])):
                raise GraphFormatError("layout path is not a path of the graph")
        if g.multiplicity(s0, s1) == 0:
            raise GraphFormatError("layout shared pair is not an edge of the graph")
    return layout


def read_graph(path: str | Path) -> Multigraph:
    return loads_graph(Path(path).read_text())


def write_graph(g: Multigraph, path: str | Path) -> None:
    Path(path).write_text(dumps_graph(g))
