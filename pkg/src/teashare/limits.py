"""Limits of move families repeated forever, exactly and by floating-point iteration."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .dynamics import MoveLike, SharingMove, Weights, as_sequence


def family_components(g, fam: Iterable[MoveLike]) -> list[tuple[str, ...]]:
    """Vertex sets of the connected components of the hypergraph whose edges are the moves.

    Vertices covered by no move are left out. Components are sorted by their
    first vertex in declaration order.
    """
    moves = as_sequence(g, fam)
    parent: dict[str, str] = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for m in moves:
        for x in m.vertices:
            parent.setdefault(x, x)
        head = find(m.vertices[0])
        for x in m.vertices[1:]:
            root = find(x)
            if root != head:
                parent[root] = head
    groups: dict[str, list[str]] = {}
    for x in g.vertices:
        if x in parent:
            groups.setdefault(find(x), []).append(x)
    comps = [tuple(members) for members in groups.values()]
    comps.sort(key=lambda c: g.index[c[0]])
    return comps


def limit_distribution(g, w: Weights, fam: Iterable[MoveLike]) -> Weights:
    """The state reached when every move of ``fam`` recurs infinitely often.

    Each hypergraph component ends up at its average; that is also exactly what
    one share per component produces, so the limit is itself reachable.
    """
    vals = list(w.values)
    for comp in family_components(g, fam):
        idx = [g.index[x] for x in comp]
        avg = sum((vals[i] for i in idx), Fraction(0)) / len(idx)
        for i in idx:
            vals[i] = avg
    return Weights(g, vals)


def component_moves(g, fam: Iterable[MoveLike]) -> list[SharingMove]:
    """One share per component; applying these reproduces the limit exactly."""
    return [SharingMove(c) for c in family_components(g, fam)]


def fixed_space_check(fam: Iterable[MoveLike], w: Weights) -> bool:
    """True iff w is constant on every move set (every move leaves it unchanged)."""
    for t in fam:
        names = t.vertices if isinstance(t, SharingMove) else tuple(t)
        if len({w[x] for x in names}) > 1:
            return False
    return True


@dataclass
class ConvergenceReport:
    state: dict[str, float]
    cycles: int
    converged: bool
    last_change: float
    # certified: every vertex is within this of the exact limit
    envelope: Fraction
    exact_limit: Weights

    def distance_to_limit(self) -> Fraction:
        return max(
            (abs(Fraction(self.state[x]) - self.exact_limit[x]) for x in self.state),
            default=Fraction(0),
        )


def iterate_to_convergence(
    g, w: Weights, schedule: Sequence[MoveLike], repeats: int = 10_000, tol=Fraction(1, 10**9)
) -> ConvergenceReport:
    """Apply ``schedule`` cyclically in floats until a full cycle moves no vertex by ``tol`` or more.

    Stops after ``repeats`` cycles otherwise (``converged`` is then False). The
    reported ``envelope`` is computed exactly from the final float state: on
    each component a vertex is at most (spread of the float values) + |float
    average - exact average| away from the exact limit.
    """
    moves = as_sequence(g, schedule)
    if not moves:
        raise ValueError("schedule must contain at least one move")
    tol = Fraction(tol)
    if tol <= 0:
        raise ValueError("tol must be positive")
    tol_f = float(tol)
    index = [[g.index[x] for x in m.vertices] for m in moves]
    state = [float(x) for x in w.values]
    cycles = 0
    change = float("inf")
    converged = False
    while cycles < repeats:
        before = list(state)
        for idx in index:
            avg = sum(state[i] for i in idx) / len(idx)
            for i in idx:
                state[i] = avg
        cycles += 1
        change = max(abs(a - b) for a, b in zip(state, before))
        if change < tol_f:
            converged = True
            break

    exact = limit_distribution(g, w, moves)
    envelope = Fraction(0)
    for comp in family_components(g, moves):
        idx = [g.index[x] for x in comp]
        xs = [Fraction(state[i]) for i in idx]
        drift = abs(sum(xs, Fraction(0)) / len(xs) - exact.values[idx[0]])
        envelope = max(envelope, max(xs) - min(xs) + drift)
    for i, x in enumerate(g.vertices):
        if not any(i in idx for idx in index):
            envelope = max(envelope, abs(Fraction(state[i]) - exact.values[i]))
    return ConvergenceReport(
        state=dict(zip(g.vertices, state)),
        cycles=cycles,
        converged=converged,
        last_change=change,
        envelope=envelope,
        exact_limit=exact,
    )
