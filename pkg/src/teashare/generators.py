"""Seeded random instances for property checks.

All randomness comes from ``numpy.random.Generator`` over PCG64, so a seed
fixes every instance on a given numpy version.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .dynamics import SharingMove, Weights
from .graph import Graph


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """PCG64 generator; extra ``stream`` ints give independent sub-streams of one seed."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, *stream])))


def random_connected_graph(rng, n: int, extra: float = 0.3, prefix: str = "v") -> Graph:
    """A random spanning tree plus each remaining pair with probability ``extra``."""
    names = [f"{prefix}{i}" for i in range(n)]
    edges = set()
    for i in range(1, n):
        j = int(rng.integers(0, i))
        edges.add((names[j], names[i]))
    for i in range(n):
        for j in range(i + 1, n):
            if (names[i], names[j]) not in edges and rng.random() < extra:
                edges.add((names[i], names[j]))
    return Graph(names, sorted(edges))


def random_rational(rng, max_num: int = 12, max_den: int = 6, zero_prob: float = 0.2) -> Fraction:
    if rng.random() < zero_prob:
        return Fraction(0)
    return Fraction(int(rng.integers(0, max_num + 1)), int(rng.integers(1, max_den + 1)))


def random_weights(rng, g: Graph, **kw) -> Weights:
    return Weights(g, [random_rational(rng, **kw) for _ in g.vertices])


def random_connected_set(rng, g: Graph, max_size: int | None = None) -> SharingMove:
    """Grow a connected set from a random vertex by random frontier additions."""
    n = len(g.vertices)
    cap = n if max_size is None else min(max_size, n)
    size = int(rng.integers(1, cap + 1))
    start = g.vertices[int(rng.integers(0, n))]
    members = {start}
    while len(members) < size:
        frontier = sorted(
            {y for x in members for y in g.adjacency[x]} - members, key=g.index.__getitem__
        )
        if not frontier:
            break
        members.add(frontier[int(rng.integers(0, len(frontier)))])
    return SharingMove(g.canonical(members))


def random_edge_move(rng, g: Graph) -> SharingMove:
    edges = g.edge_list()
    return SharingMove(edges[int(rng.integers(0, len(edges)))])


def random_sequence(rng, g: Graph, length: int, edge_prob: float = 0.0, max_size=None) -> list[SharingMove]:
    out = []
    for _ in range(length):
        if g.edges and rng.random() < edge_prob:
            out.append(random_edge_move(rng, g))
        else:
            out.append(random_connected_set(rng, g, max_size))
    return out


def star_weights(rng, t: int, **kw) -> tuple[Graph, Weights]:
    from .search import star_graph

    g = star_graph(t)
    return g, Weights(g, [random_rational(rng, **kw) for _ in g.vertices])
