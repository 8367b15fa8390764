"""Finite simple graphs with all-pairs hop distances and connected-subset tools."""

from __future__ import annotations

from collections import deque
from itertools import combinations
from typing import Iterable, Iterator, Sequence


class GraphError(ValueError):
    """Malformed graph input or a vertex that does not belong to the graph."""


class UnreachableError(GraphError):
    """Raised when an operation needs a finite distance between two vertices."""


class Graph:
    """Immutable undirected simple graph.

    Vertices keep their declaration order; that order is the global tie-break
    used by every other module. ``dist(x, y)`` returns ``None`` for pairs in
    different components.
    """

    __slots__ = ("vertices", "index", "edges", "adjacency", "_dist")

    def __init__(self, vertices: Sequence[str], edges: Iterable[Sequence[str]] = ()):
        vertices = tuple(vertices)
        index: dict[str, int] = {}
        for i, name in enumerate(vertices):
            if not isinstance(name, str):
                raise GraphError(f"vertex names must be strings, got {name!r}")
            if name in index:
                raise GraphError(f"duplicate vertex {name!r}")
            index[name] = i

        adjacency: dict[str, set[str]] = {name: set() for name in vertices}
        edge_set: set[frozenset[str]] = set()
        for pair in edges:
            if len(pair) != 2:
                raise GraphError(f"edge must have two endpoints, got {pair!r}")
            x, y = pair
            for end in (x, y):
                if end not in index:
                    raise GraphError(f"edge {pair!r} has unknown endpoint {end!r}")
            if x == y:
                raise GraphError(f"self-loop at {x!r}")
            e = frozenset((x, y))
            if e in edge_set:
                raise GraphError(f"duplicate edge {pair!r}")
            edge_set.add(e)
            adjacency[x].add(y)
            adjacency[y].add(x)

        self.vertices = vertices
        self.index = index
        self.edges = frozenset(edge_set)
        self.adjacency = {name: frozenset(nbrs) for name, nbrs in adjacency.items()}
        self._dist = {name: self._bfs(name) for name in vertices}

    def _bfs(self, source: str) -> dict[str, int]:
        seen = {source: 0}
        queue = deque([source])
        while queue:
            x = queue.popleft()
            for y in self.adjacency[x]:
                if y not in seen:
                    seen[y] = seen[x] + 1
                    queue.append(y)
        return seen

    def __len__(self) -> int:
        return len(self.vertices)

    def __contains__(self, name: object) -> bool:
        return name in self.index

    def __repr__(self) -> str:
        return f"Graph(n={len(self.vertices)}, m={len(self.edges)})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.vertices == other.vertices and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.vertices, self.edges))

    def has_edge(self, x: str, y: str) -> bool:
        return frozenset((x, y)) in self.edges

    def dist(self, x: str, y: str) -> int | None:
        self.check_vertex(x)
        self.check_vertex(y)
        return self._dist[x].get(y)

    def distance(self, x: str, y: str) -> int:
        """Finite hop distance; raises :class:`UnreachableError` otherwise."""
        d = self.dist(x, y)
        if d is None:
            raise UnreachableError(f"{y!r} is not reachable from {x!r}")
        return d

    def check_vertex(self, name: str) -> None:
        if name not in self.index:
            raise GraphError(f"unknown vertex {name!r}")

    def canonical(self, names: Iterable[str]) -> tuple[str, ...]:
        """Deduplicate and sort ``names`` into declaration order."""
        names = set(names)
        for name in names:
            self.check_vertex(name)
        return tuple(sorted(names, key=self.index.__getitem__))

    def indices(self, names: Iterable[str]) -> tuple[int, ...]:
        return tuple(sorted(self.index[x] for x in set(names)))

    def is_connected(self) -> bool:
        return not self.vertices or len(self._dist[self.vertices[0]]) == len(self.vertices)

    def shortest_path(self, x: str, y: str) -> list[str]:
        """A shortest x-y path; among equal-length paths, prefer earlier-declared vertices."""
        d = self.distance(x, y)
        path = [x]
        cur = x
        to_y = self._dist[y]
        for step in range(d, 0, -1):
            cur = min(
                (z for z in self.adjacency[cur] if to_y.get(z) == step - 1),
                key=self.index.__getitem__,
            )
            path.append(cur)
        return path

    def ball(self, center: str, radius: int) -> set[str]:
        return {x for x, d in self._dist[center].items() if d <= radius}

    def subgraph(self, names: Iterable[str]) -> "Graph":
        keep = self.canonical(names)
        kept = set(keep)
        sub_edges = [tuple(sorted(e, key=self.index.__getitem__)) for e in self.edges if e <= kept]
        sub_edges.sort(key=lambda e: (self.index[e[0]], self.index[e[1]]))
        return Graph(keep, sub_edges)

    def edge_list(self) -> list[tuple[str, str]]:
        pairs = [tuple(sorted(e, key=self.index.__getitem__)) for e in self.edges]
        return sorted(pairs, key=lambda e: (self.index[e[0]], self.index[e[1]]))


def build_graph(vertices: Sequence[str], edges: Iterable[Sequence[str]] = ()) -> Graph:
    return Graph(vertices, edges)


def is_connected_subset(g: Graph, s: Iterable[str]) -> bool:
    """True iff ``s`` is nonempty and induces a connected subgraph of ``g``."""
    members = set(s)
    for x in members:
        g.check_vertex(x)
    if not members:
        return False
    start = next(iter(members))
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in g.adjacency[x]:
            if y in members and y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(members)


def enumerate_connected_subsets(g: Graph, max_size: int) -> Iterator[tuple[str, ...]]:
    """Yield every connected vertex subset of size <= ``max_size`` exactly once.

    Order is by size, then lexicographic in declaration order. Each size level is
    produced by extension from its least vertex (only larger-indexed neighbours
    of the current set may join), so no subset is generated twice and at most one
    root's batch of a single size is held in memory.
    """
    if max_size < 1:
        raise ValueError("max_size must be at least 1")
    n = len(g.vertices)
    nbr = [sorted(g.index[y] for y in g.adjacency[x]) for x in g.vertices]

    def extend(sub: list[int], ext: list[int], closed: set[int], root: int, k: int, out: list):
        if len(sub) == k:
            out.append(tuple(sorted(sub)))
            return
        ext = list(ext)
        while ext:
            w = ext.pop()
            fresh = [u for u in nbr[w] if u > root and u not in closed]
            extend(sub + [w], ext + fresh, closed | set(fresh), root, k, out)

    for k in range(1, min(max_size, n) + 1):
        for root in range(n):
            batch: list[tuple[int, ...]] = []
            start = [u for u in nbr[root] if u > root]
            extend([root], start, {root, *start}, root, k, batch)
            batch.sort()
            for idx in batch:
                yield tuple(g.vertices[i] for i in idx)


def brute_force_connected_subsets(g: Graph, max_size: int) -> list[tuple[str, ...]]:
    """Reference enumeration by filtering every subset; exponential, for checks only."""
    out = []
    n = len(g.vertices)
    for k in range(1, min(max_size, n) + 1):
        for combo in combinations(g.vertices, k):
            if is_connected_subset(g, combo):
                out.append(combo)
    return out
