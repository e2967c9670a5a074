"""Graph ingestion and the combinatorial conditions imposed on input graphs.

Graphs are simple, undirected, with ordered string vertex labels; the order
of vertices and edges in the input file is significant so that every derived
object (bases, orderings, reports) is deterministic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional


class GraphError(ValueError):
    pass


class Graph:
    """A simple undirected graph with an optional bipartition (X-side, Y-side)."""

    __slots__ = ("vertices", "edges", "bipartition", "_index", "_adj")

    def __init__(self, vertices, edges, bipartition=None):
        self.vertices = tuple(vertices)
        self._index = {v: i for i, v in enumerate(self.vertices)}
        if len(self._index) != len(self.vertices):
            raise GraphError("duplicate vertex labels")
        norm = []
        seen = set()
        for e in edges:
            u, v = e
            if u not in self._index or v not in self._index:
                raise GraphError(f"edge {e!r} uses an undeclared vertex")
            if u == v:
                raise GraphError(f"self-loop at {u!r}")
            key = frozenset((u, v))
            if key in seen:
                raise GraphError(f"duplicate edge {e!r}")
            seen.add(key)
            if self._index[u] > self._index[v]:
                u, v = v, u
            norm.append((u, v))
        self.edges = tuple(norm)
        self._adj = {v: [] for v in self.vertices}
        for u, v in self.edges:
            self._adj[u].append(v)
            self._adj[v].append(u)
        if bipartition is not None:
            xs, ys = tuple(bipartition[0]), tuple(bipartition[1])
            if sorted(xs + ys) != sorted(self.vertices):
                raise GraphError("bipartition does not partition the vertex set")
            xset = set(xs)
            for u, v in self.edges:
                if (u in xset) == (v in xset):
                    raise GraphError(f"edge {u}-{v} does not cross the declared bipartition")
            self.bipartition = (xs, ys)
        else:
            self.bipartition = detect_bipartition(self.vertices, self._adj)

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def e(self) -> int:
        return len(self.edges)

    def neighbors(self, v):
        return tuple(self._adj[v])

    def degree(self, v) -> int:
        return len(self._adj[v])

    def has_edge(self, u, v) -> bool:
        return v in self._adj[u]

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        return len(_component(self._adj, self.vertices[0])) == self.n

    def is_bipartite(self) -> bool:
        return self.bipartition is not None

    def induced_without(self, removed) -> "Graph":
        removed = set(removed)
        verts = [v for v in self.vertices if v not in removed]
        edges = [e for e in self.edges if e[0] not in removed and e[1] not in removed]
        return Graph(verts, edges)

    def to_json(self) -> dict:
        obj = {"vertices": list(self.vertices), "edges": [list(e) for e in self.edges]}
        if self.bipartition is not None:
            obj["bipartition"] = [list(self.bipartition[0]), list(self.bipartition[1])]
        return obj

    def __repr__(self):
        return f"Graph(n={self.n}, e={self.e})"


def detect_bipartition(vertices, adj):
    """2-coloring by BFS; returns (X-side, Y-side) in declared vertex order, or None."""
    color = {}
    for start in vertices:
        if start in color:
            continue
        color[start] = 0
        queue = [start]
        while queue:
            u = queue.pop(0)
            for w in adj[u]:
                if w not in color:
                    color[w] = 1 - color[u]
                    queue.append(w)
                elif color[w] == color[u]:
                    return None
    xs = tuple(v for v in vertices if color[v] == 0)
    ys = tuple(v for v in vertices if color[v] == 1)
    return (xs, ys)


def _component(adj, start):
    seen = {start}
    queue = [start]
    while queue:
        u = queue.pop()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return seen


def parse_graph(obj: dict) -> Graph:
    try:
        vertices = obj["vertices"]
        edges = obj["edges"]
    except (KeyError, TypeError) as exc:
        raise GraphError(f"malformed graph object: {exc}") from exc
    return Graph(vertices, edges, obj.get("bipartition"))


def load_graph(path) -> Graph:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise GraphError(f"graph file is not valid JSON: {exc}") from exc
    return parse_graph(obj)


@dataclass
class ConditionReport:
    """Combinatorial necessary conditions for non-free totally reflexive modules."""

    connected: bool
    bipartite: bool
    edge_count_ok: bool  # e == 2n - 4
    triangle_free: bool
    leaf_free: bool
    tree: bool  # e == n - 1 (and connected)
    build_order: Optional[tuple] = None
    disconnecting_pair: Optional[tuple] = None
    failures: tuple = field(default_factory=tuple)

    @property
    def all_necessary_hold(self) -> bool:
        return self.edge_count_ok and self.triangle_free and self.leaf_free

    def to_json(self) -> dict:
        return {
            "connected": self.connected,
            "bipartite": self.bipartite,
            "edge_count_ok": self.edge_count_ok,
            "triangle_free": self.triangle_free,
            "leaf_free": self.leaf_free,
            "tree": self.tree,
            "build_order": list(self.build_order) if self.build_order else None,
            "disconnecting_pair": list(self.disconnecting_pair) if self.disconnecting_pair else None,
            "failures": list(self.failures),
        }


def has_triangle(g: Graph) -> bool:
    for u, v in g.edges:
        common = set(g.neighbors(u)) & set(g.neighbors(v))
        if common:
            return True
    return False


def necessary_conditions(g: Graph) -> ConditionReport:
    if not g.is_connected():
        raise GraphError("graph must be connected")
    tri_free = not has_triangle(g)
    leaf_free = all(g.degree(v) != 1 for v in g.vertices)
    report = ConditionReport(
        connected=True,
        bipartite=g.is_bipartite(),
        edge_count_ok=(g.e == 2 * g.n - 4),
        triangle_free=tri_free,
        leaf_free=leaf_free,
        tree=(g.e == g.n - 1),
        build_order=build_order(g),
        disconnecting_pair=disconnecting_pair(g) if g.is_bipartite() else None,
    )
    failures = []
    if not report.edge_count_ok:
        failures.append("edge count differs from 2n-4")
    if not report.triangle_free:
        failures.append("graph contains a 3-cycle")
    if not report.leaf_free:
        failures.append("graph has a leaf")
    report.failures = tuple(failures)
    return report


def is_valid_build_order(g: Graph, order) -> bool:
    """Checker: every vertex from the third on has >= 2 earlier neighbors."""
    if sorted(order) != sorted(g.vertices):
        return False
    placed = set()
    for i, v in enumerate(order):
        if i >= 2:
            back = sum(1 for w in g.neighbors(v) if w in placed)
            if back < 2:
                return False
        placed.add(v)
    return True


def build_order(g: Graph):
    """An ordering where each vertex past the second sees >= 2 earlier ones.

    Backtracking over all start pairs, extending with the lexicographically
    first admissible vertex at each step.  Returns None when no ordering
    exists (e.g. for trees, where the last leaf has a single back edge).
    """
    if not g.is_connected():
        raise GraphError("graph must be connected")
    n = g.n
    if n <= 2:
        return tuple(g.vertices)
    verts = g.vertices

    def extend(order, placed):
        if len(order) == n:
            return order
        for v in verts:
            if v in placed:
                continue
            back = sum(1 for w in g.neighbors(v) if w in placed)
            if back >= 2:
                placed.add(v)
                order.append(v)
                got = extend(order, placed)
                if got is not None:
                    return got
                order.pop()
                placed.remove(v)
        return None

    for i, v1 in enumerate(verts):
        for v2 in verts[i + 1 :]:
            got = extend([v1, v2], {v1, v2})
            if got is not None:
                return tuple(got)
            got = extend([v2, v1], {v1, v2})
            if got is not None:
                return tuple(got)
    return None


def disconnecting_pair(g: Graph):
    """First cross pair (x_i, y_j), in declared order, whose removal disconnects.

    Removal leaving at most one vertex counts as connected.
    """
    if not g.is_bipartite():
        raise GraphError("graph must be bipartite")
    xs, ys = g.bipartition
    for x in xs:
        for y in ys:
            sub = g.induced_without((x, y))
            if sub.n > 1 and not sub.is_connected():
                return (x, y)
    return None
