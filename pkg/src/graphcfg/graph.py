"""Graph model, parsing and subdivision.

Graphs are small multigraphs with string identifiers. Loops and parallel
edges are allowed on input; the configuration-complex builder wants a simple
graph, which subdivision provides.
"""
from __future__ import annotations

import json
from importlib import resources
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

from .unionfind import UnionFind


class GraphError(ValueError):
    """Malformed graph input or an operation applied to an unsuitable graph."""


class GraphParseError(GraphError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class Edge:
    id: str
    u: str
    v: str

    @property
    def is_loop(self) -> bool:
        return self.u == self.v


@dataclass(frozen=True)
class Graph:
    """Undirected multigraph. Vertex order is declaration order and is used
    wherever a deterministic vertex ordering is needed."""

    vertices: tuple[str, ...]
    edges: tuple[Edge, ...] = ()
    _index: Mapping[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        index: dict[str, int] = {}
        for i, v in enumerate(self.vertices):
            if v in index:
                raise GraphError(f"duplicate vertex id {v!r}")
            index[v] = i
        seen: set[str] = set()
        for e in self.edges:
            if e.id in seen:
                raise GraphError(f"duplicate edge id {e.id!r}")
            seen.add(e.id)
            for end in (e.u, e.v):
                if end not in index:
                    raise GraphError(f"edge {e.id!r} names unknown vertex {end!r}")
        object.__setattr__(self, "_index", index)

    @classmethod
    def from_edges(cls, vertices: Iterable[str], edges: Iterable[tuple[str, str, str]]) -> "Graph":
        return cls(tuple(vertices), tuple(Edge(*e) for e in edges))

    def index(self, v: str) -> int:
        try:
            return self._index[v]
        except KeyError:
            raise GraphError(f"unknown vertex {v!r}") from None

    def __contains__(self, v: object) -> bool:
        return v in self._index

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def degrees(self) -> dict[str, int]:
        deg = Counter({v: 0 for v in self.vertices})
        for e in self.edges:
            deg[e.u] += 1
            deg[e.v] += 1  # a loop counts twice
        return {v: deg[v] for v in self.vertices}

    def neighbors(self, v: str) -> list[str]:
        out = []
        for e in self.edges:
            if e.u == v:
                out.append(e.v)
            if e.v == v and not e.is_loop:
                out.append(e.u)
        return out

    def is_simple(self) -> bool:
        pairs = set()
        for e in self.edges:
            if e.is_loop:
                return False
            key = frozenset((e.u, e.v))
            if key in pairs:
                return False
            pairs.add(key)
        return True

    def component_count(self) -> int:
        uf = UnionFind(self.n_vertices)
        for e in self.edges:
            uf.union(self.index(e.u), self.index(e.v))
        return uf.n_sets

    def is_connected(self) -> bool:
        return self.n_vertices > 0 and self.component_count() == 1

    def first_betti(self) -> int:
        return self.n_edges - self.n_vertices + self.component_count()

    def is_tree(self) -> bool:
        return self.is_connected() and self.n_edges == self.n_vertices - 1

    def remove_vertices(self, drop: Iterable[str]) -> "Graph":
        """Delete vertices together with every incident edge (obstacles)."""
        drop = set(drop)
        for v in drop:
            self.index(v)
        return Graph(
            tuple(v for v in self.vertices if v not in drop),
            tuple(e for e in self.edges if e.u not in drop and e.v not in drop),
        )

    def components(self) -> list["Graph"]:
        """Connected components as induced subgraphs, ordered by their first vertex."""
        uf = UnionFind(self.n_vertices)
        for e in self.edges:
            uf.union(self.index(e.u), self.index(e.v))
        groups: dict[int, list[str]] = {}
        for i, v in enumerate(self.vertices):
            groups.setdefault(uf.find(i), []).append(v)
        out = []
        for members in groups.values():
            keep = set(members)
            out.append(Graph(tuple(members), tuple(e for e in self.edges if e.u in keep)))
        return out

    def to_dict(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [{"id": e.id, "ends": [e.u, e.v]} for e in self.edges],
        }


@dataclass(frozen=True)
class SubdividedGraph:
    """A simple refinement of ``parent`` where every original edge became a
    path of ``factor`` edges."""

    graph: Graph
    parent: Graph
    factor: int
    parent_edge: Mapping[str, tuple[str, int]]

    @property
    def vertices(self) -> tuple[str, ...]:
        return self.graph.vertices

    @property
    def edges(self) -> tuple[Edge, ...]:
        return self.graph.edges


def parse_graph(text: str) -> Graph:
    """Parse the line-oriented graph format (``v <id>``, ``e <id> <u> <v>``, ``#`` comments)."""
    vertices: list[str] = []
    vset: set[str] = set()
    edges: list[Edge] = []
    eset: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind = parts[0]
        if kind == "v":
            if len(parts) != 2:
                raise GraphParseError("expected 'v <id>'", lineno)
            if parts[1] in vset:
                raise GraphParseError(f"duplicate vertex id {parts[1]!r}", lineno)
            vertices.append(parts[1])
            vset.add(parts[1])
        elif kind == "e":
            if len(parts) != 4:
                raise GraphParseError("expected 'e <id> <u> <v>'", lineno)
            eid, u, v = parts[1:]
            if eid in eset:
                raise GraphParseError(f"duplicate edge id {eid!r}", lineno)
            for end in (u, v):
                if end not in vset:
                    raise GraphParseError(f"dangling endpoint {end!r} in edge {eid!r}", lineno)
            edges.append(Edge(eid, u, v))
            eset.add(eid)
        else:
            raise GraphParseError(f"unknown record type {kind!r}", lineno)
    return Graph(tuple(vertices), tuple(edges))


def parse_graph_json(text: str) -> Graph:
    try:
        data = json.loads(text)
        vertices = [str(v) for v in data["vertices"]]
        edges = [(str(e["id"]), *map(str, e["ends"])) for e in data.get("edges", [])]
    except (KeyError, TypeError, ValueError) as exc:
        raise GraphParseError(f"invalid JSON graph: {exc}") from exc
    if any(len(e) != 3 for e in edges):
        raise GraphParseError("each edge needs exactly two ends")
    return Graph.from_edges(vertices, edges)


def load_graph(path: str | Path) -> Graph:
    path = Path(path)
    text = path.read_text()
    if path.suffix == ".json":
        return parse_graph_json(text)
    return parse_graph(text)


FIXTURES = ("y", "h", "q", "circle", "cycle5", "path", "star3", "star4", "star5")


def load_fixture(name: str) -> Graph:
    """One of the bundled graphs: y, h, q (circle with a stem), circle, cycle5, path, star3..star5."""
    if name not in FIXTURES:
        raise GraphError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURES)}")
    return parse_graph(resources.files("graphcfg").joinpath("fixtures", f"{name}.graph").read_text())


def format_graph(g: Graph) -> str:
    lines = [f"v {v}" for v in g.vertices]
    lines += [f"e {e.id} {e.u} {e.v}" for e in g.edges]
    return "\n".join(lines) + "\n"


def essential_vertices(g: Graph) -> list[str]:
    """Vertices of degree greater than two, in vertex order."""
    deg = g.degrees()
    return [v for v in g.vertices if deg[v] > 2]


def is_circle(g: Graph) -> bool:
    if not g.is_connected():
        raise GraphError("is_circle requires a connected graph")
    return all(d == 2 for d in g.degrees().values())


def subdivide(g: Graph, factor: int) -> SubdividedGraph:
    """Split every edge into ``factor`` segments.

    Fresh vertices are named ``<edge-id>#<k>`` for k = 1..factor-1 (counted
    from the ``u`` end); the segment edges are ``<edge-id>:<k>`` for
    k = 1..factor. With factor 1 the edge ids are kept unchanged.
    """
    if not isinstance(factor, int) or factor < 1:
        raise GraphError(f"subdivision factor must be an integer >= 1, got {factor!r}")
    vertices = list(g.vertices)
    edges: list[Edge] = []
    parent_edge: dict[str, tuple[str, int]] = {}
    for e in g.edges:
        if factor == 1:
            edges.append(e)
            parent_edge[e.id] = (e.id, 1)
            continue
        fresh = [f"{e.id}#{k}" for k in range(1, factor)]
        for v in fresh:
            if v in g:
                raise GraphError(f"fresh vertex id {v!r} collides with an existing vertex")
        vertices.extend(fresh)
        chain = [e.u, *fresh, e.v]
        for k in range(1, factor + 1):
            eid = f"{e.id}:{k}"
            edges.append(Edge(eid, chain[k - 1], chain[k]))
            parent_edge[eid] = (e.id, k)
    return SubdividedGraph(Graph(tuple(vertices), tuple(edges)), g, factor, parent_edge)
