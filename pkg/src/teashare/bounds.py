"""Certified upper bounds on how much weight a vertex (or a set) can collect.

Two families live here:

* distance bounds from a single source ``r``: the product ``rho(S)`` of
  ``d/(d+1)`` over ``S`` and the r-feasibility condition
  ``w(S) <= w(G) * (1 - rho(S))`` for every ``S``;
* the multi-source bound ``phi`` at a target ``v``: run the f-recursion
  ``a <- a + (w(x) - a) / (d(x, v) + 1)`` over the vertices heavier than ``v``
  in non-decreasing weight order, starting from ``a = w(v)``.

The inequality checkers at the bottom evaluate the auxiliary integer/rational
inequalities the preservation arguments rest on. They return booleans so they
can be tabulated by the verify suite.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from math import lcm, prod
from typing import Iterable, Sequence

from .dynamics import SharingMove, Weights
from .graph import Graph, GraphError, UnreachableError

ZERO = Fraction(0)
ONE = Fraction(1)

EXHAUSTIVE_LIMIT = 20
BRUTEFORCE_LIMIT = 8


class BoundError(ValueError):
    pass


@dataclass(frozen=True)
class FeasibilityReport:
    feasible: bool
    worst_subset: tuple[str, ...]
    slack: Fraction
    exhaustive: bool = True
    checked: int = 0

    @property
    def status(self) -> str:
        if not self.feasible:
            return "infeasible"
        return "feasible" if self.exhaustive else "not falsified"


@dataclass(frozen=True)
class PhiCertificate:
    value: Fraction
    enumeration: tuple[str, ...]
    ell: int
    target: str = ""
    start: Fraction = field(default=ZERO)


def _dist_or_raise(g: Graph, x: str, y: str) -> int:
    d = g.dist(x, y)
    if d is None:
        raise UnreachableError(f"{y!r} is not reachable from {x!r}")
    return d


def rho(g: Graph, r: str, s: Iterable[str]) -> Fraction:
    out = ONE
    for x in set(s):
        d = _dist_or_raise(g, r, x)
        out *= Fraction(d, d + 1)
    return out


def distance_bound(g: Graph, r: str, v: str, total=ONE) -> Fraction:
    return Fraction(total) / (_dist_or_raise(g, r, v) + 1)


def multi_target_bound(g: Graph, r: str, s: Iterable[str], total=ONE) -> Fraction:
    return Fraction(total) * (1 - rho(g, r, s))


def support_bound(g: Graph, v: str, w: Weights) -> Fraction:
    """Dual bound on the best value at ``v``: max(w) * (1 - rho_v(support of w)).

    By duality the value at ``v`` after any sequence is <c', w> with c'
    reachable from the indicator of ``v``; c' has unit mass and is
    v-feasible, so it puts at most 1 - rho_v(X) on the support X.
    """
    support = [x for x in g.vertices if w[x] > 0]
    if not support:
        return ZERO
    return max(w.values) * (1 - rho(g, v, support))


def _subset_key(subset: Sequence[int]) -> tuple:
    return (len(subset), tuple(subset))


def check_feasible(
    g: Graph, r: str, w: Weights, limit: int = EXHAUSTIVE_LIMIT
) -> FeasibilityReport:
    """Exhaustive r-feasibility scan over all nonempty subsets.

    The reported subset minimizes the slack ``w(G)(1 - rho(S)) - w(S)``; ties go
    to the smaller set, then the lexicographically first.
    """
    n = len(g.vertices)
    if n > limit:
        raise BoundError(
            f"exhaustive feasibility is capped at {limit} vertices (graph has {n}); "
            "use falsify_feasibility for a sampled search"
        )
    factors = [Fraction(d, d + 1) for d in (_dist_or_raise(g, r, x) for x in g.vertices)]
    vals = w.values
    total = sum(vals, ZERO)
    best: list = [None, None]  # slack, index tuple
    chosen: list[int] = []
    count = 0

    def visit(i: int, mass: Fraction, rho_s: Fraction) -> None:
        nonlocal count
        if i == n:
            if not chosen:
                return
            count += 1
            slack = total * (1 - rho_s) - mass
            if best[0] is None or slack < best[0] or (
                slack == best[0] and _subset_key(chosen) < _subset_key(best[1])
            ):
                best[0] = slack
                best[1] = tuple(chosen)
            return
        visit(i + 1, mass, rho_s)
        chosen.append(i)
        visit(i + 1, mass + vals[i], rho_s * factors[i])
        chosen.pop()

    if n == 0:
        return FeasibilityReport(True, (), ZERO, True, 0)
    visit(0, ZERO, ONE)
    worst = tuple(g.vertices[i] for i in best[1])
    return FeasibilityReport(best[0] >= 0, worst, best[0], True, count)


def falsify_feasibility(g: Graph, r: str, w: Weights, samples: int, rng) -> FeasibilityReport:
    """Random-subset search for a violated feasibility inequality.

    A clean result is only "not falsified": sampling cannot certify feasibility.
    ``rng`` needs an ``integers(lo, hi)`` method (a numpy Generator).
    """
    n = len(g.vertices)
    factors = [Fraction(d, d + 1) for d in (_dist_or_raise(g, r, x) for x in g.vertices)]
    total = w.total()
    best_slack, best_set = None, ()
    for _ in range(samples):
        mask = int(rng.integers(1, 1 << n)) if n < 63 else None
        if mask is None:
            members = [i for i in range(n) if rng.integers(0, 2)]
            if not members:
                continue
        else:
            members = [i for i in range(n) if mask >> i & 1]
        rho_s = prod((factors[i] for i in members), start=ONE)
        slack = total * (1 - rho_s) - sum((w.values[i] for i in members), ZERO)
        if best_slack is None or slack < best_slack:
            best_slack, best_set = slack, tuple(members)
    if best_slack is None:
        return FeasibilityReport(True, (), ZERO, False, 0)
    worst = tuple(g.vertices[i] for i in best_set)
    return FeasibilityReport(best_slack >= 0, worst, best_slack, False, samples)


def _check_order(g: Graph, v: str, order: Sequence[str]) -> list[int]:
    g.check_vertex(v)
    if v in order:
        raise BoundError(f"target {v!r} may not appear in the enumeration")
    if len(set(order)) != len(order):
        raise BoundError("enumeration has repeated vertices")
    return [_dist_or_raise(g, x, v) for x in order]


def f_recursion(g: Graph, v: str, order: Sequence[str], w: Weights, a) -> Fraction:
    dists = _check_order(g, v, order)
    a = Fraction(a)
    for x, d in zip(order, dists):
        a += (w[x] - a) / (d + 1)
    return a


def f_closed_form(g: Graph, v: str, order: Sequence[str], w: Weights, a) -> Fraction:
    """Product form of the f-recursion (independent evaluation for cross-checks)."""
    dists = _check_order(g, v, order)
    keep = [Fraction(d, d + 1) for d in dists]
    out = prod(keep, start=ONE) * Fraction(a)
    for i, x in enumerate(order):
        out += prod(keep[i + 1 :], start=ONE) * w[x] / (dists[i] + 1)
    return out


def phi_enumeration(g: Graph, v: str, w: Weights) -> list[str]:
    """Vertices strictly heavier than ``v``, non-decreasing by weight, ties by declaration order."""
    a = w[v]
    heavier = [x for x in g.vertices if x != v and w[x] > a]
    heavier.sort(key=lambda x: (w[x], g.index[x]))
    return heavier


def phi_bound(g: Graph, v: str, w: Weights) -> PhiCertificate:
    if w.graph != g:
        raise GraphError("weights belong to a different graph")
    g.check_vertex(v)
    for x in g.vertices:
        _dist_or_raise(g, v, x)
    order = phi_enumeration(g, v, w)
    a = w[v]
    ell = 1 + sum(1 for x in g.vertices if x != v and w[x] < a)
    value = f_recursion(g, v, order, w, a)
    return PhiCertificate(value, tuple(order), ell, v, a)


def phi_bruteforce(g: Graph, v: str, w: Weights, a, limit: int = BRUTEFORCE_LIMIT) -> Fraction:
    """Literal maximum over all enumerations of V - v and all suffix starts."""
    n = len(g.vertices)
    if n > limit:
        raise BoundError(f"brute-force phi is capped at {limit} vertices (graph has {n})")
    a = Fraction(a)
    others = [x for x in g.vertices if x != v]
    dists = {x: _dist_or_raise(g, x, v) for x in others}
    best = a  # the empty suffix
    for sigma in permutations(others):
        for i in range(len(sigma)):
            val = a
            for x in sigma[i:]:
                val += (w[x] - val) / (dists[x] + 1)
            if val > best:
                best = val
    return best


def phi_within(vals: Sequence[Fraction], target: int, dists: Sequence[int], radius: int | None = None) -> Fraction:
    """phi on raw values, optionally ignoring vertices farther than ``radius`` from the target.

    ``dists[i]`` is the hop distance from vertex ``i`` to the target. The
    radius-limited value bounds what the target can reach within a limited
    number of moves whose sets span at most ``radius`` hops in total: the
    target's final value is <c, w> for a unit-mass, target-feasible c supported
    in that ball, and this greedy order maximizes <c, w> over such c.
    """
    a = vals[target]
    heavier = [
        i for i, x in enumerate(vals)
        if i != target and x > a and (radius is None or dists[i] <= radius)
    ]
    heavier.sort(key=lambda i: (vals[i], i))
    for i in heavier:
        a += (vals[i] - a) / (dists[i] + 1)
    return a


def phi_reach(
    vals: Sequence[Fraction],
    target: int,
    dists: Sequence[int],
    support_sets: Sequence[Sequence[int]],
) -> Fraction:
    """Largest phi restricted to one of ``support_sets`` (index sets containing the target).

    After moves whose sizes add up to at most ``1 + sum(|T| - 1)`` vertices,
    the target's value is <c, w> where c is reachable from the target's
    indicator: unit mass, target-feasible, supported on a connected set that
    contains the target and has at most that many vertices. Passing every
    connected set of that size containing the target gives a valid bound.
    """
    a0 = vals[target]
    heavier = [i for i, x in enumerate(vals) if i != target and x > a0]
    if not heavier:
        return a0
    heavier.sort(key=lambda i: (vals[i], i))
    best = a0
    for members in support_sets:
        a = a0
        for i in heavier:
            if i in members:
                a += (vals[i] - a) / (dists[i] + 1)
        if a > best:
            best = a
    return best


def star_center(g: Graph) -> str:
    n = len(g.vertices)
    if n < 2 or len(g.edges) != n - 1:
        raise BoundError("not a star K_{1,t}")
    for c in g.vertices:
        if len(g.adjacency[c]) == n - 1:
            return c
    raise BoundError("not a star K_{1,t}")


def star_optimum(w: Weights, center: str | None = None) -> tuple[Fraction, list[SharingMove]]:
    """Exact best value at the centre of a star, with an edge-sharing witness."""
    g = w.graph
    c = star_center(g) if center is None else center
    g.check_vertex(c)
    n = len(g.vertices)
    if len(g.edges) != n - 1 or len(g.adjacency[c]) != n - 1:
        raise BoundError(f"{c!r} is not the centre of a star")
    cert = phi_bound(g, c, w)
    witness = [SharingMove(g.canonical((c, x))) for x in cert.enumeration]
    return cert.value, witness


def _is_interval(values: Iterable[int]) -> bool:
    support = set(values)
    return not support or max(support) - min(support) + 1 == len(support)


def check_interval_inequality_A(s: int, t: int, xs: Sequence[int], ys: Sequence[int]) -> bool:
    """s/(s+t) * prod x * prod y + t/(s+t) * prod(x+1) * prod(y+1) >= prod x * prod(y+1).

    Evaluated exactly after clearing the common denominator s+t.
    """
    if len(xs) != s or len(ys) != t:
        raise BoundError("list lengths must equal s and t")
    if s + t <= 0:
        raise BoundError("need s + t > 0")
    combined = list(xs) + list(ys)
    if any(int(z) != z or z < 0 for z in combined):
        raise BoundError("values must be non-negative integers")
    if not _is_interval(combined):
        raise BoundError(f"values {sorted(set(combined))} do not form an integer interval")
    px, py = prod(xs), prod(ys)
    px1, py1 = prod(x + 1 for x in xs), prod(y + 1 for y in ys)
    return s * px * py + t * px1 * py1 >= (s + t) * px * py1


def interval_cases(max_total: int = 6, max_value: int = 6):
    """Every (s, t, xs, ys) with s + t <= max_total, values in [0, max_value],
    interval support. xs and ys are enumerated as sorted tuples (the inequality
    is symmetric within each list)."""
    from itertools import combinations_with_replacement as cwr

    values = range(max_value + 1)
    for size in range(1, max_total + 1):
        for s in range(size + 1):
            t = size - s
            for xs in cwr(values, s):
                for ys in cwr(values, t):
                    if _is_interval(xs + ys):
                        yield s, t, xs, ys


def chebyshev_coefficients(ds: Sequence[int]) -> list[int]:
    t = len(ds)
    return [prod(1 + d for d in ds[:i]) * prod(ds[i + 1 :]) for i in range(t)]


def check_chebyshev_inequality_B(ds: Sequence[int], ws: Sequence) -> bool:
    """sum_i c_i w_i >= (sum_i c_i) * mean(w), c_i = prod_{j<i}(1+d_j) prod_{k>i} d_k."""
    if len(ds) != len(ws) or not ds:
        raise BoundError("need equally many (>= 1) distances and weights")
    if any(int(d) != d or d < 1 for d in ds):
        raise BoundError("distances must be positive integers")
    if not _is_interval(ds):
        raise BoundError(f"distances {sorted(set(ds))} do not form an integer interval")
    ws = [Fraction(x) for x in ws]
    if any(x < 0 for x in ws):
        raise BoundError("weights must be non-negative")
    if any(a > b for a, b in zip(ws, ws[1:])):
        raise BoundError("weights must be non-decreasing")
    coef = chebyshev_coefficients(ds)
    # clear denominators: compare t * sum c_i W_i with (sum c_i) * sum W_i in integers
    scale = lcm(*(x.denominator for x in ws))
    ints = [x.numerator * (scale // x.denominator) for x in ws]
    lhs = len(ints) * sum(c * x for c, x in zip(coef, ints))
    return lhs >= sum(coef) * sum(ints)


def check_edge_step_inequality(a: int, b: int) -> bool:
    """1 + a/(a+1) * b/(b+1) >= 2a/(a+1) for non-negative integers with |a - b| <= 1."""
    if a < 0 or b < 0 or abs(a - b) > 1:
        raise BoundError("need non-negative integers differing by at most 1")
    return 1 + Fraction(a, a + 1) * Fraction(b, b + 1) >= Fraction(2 * a, a + 1)


def swap_order_check(g: Graph, v: str, x1: str, x2: str, w: Weights, a) -> bool:
    """Processing x1 before x2 gives no more than x2 before x1 exactly when w(x1) >= w(x2)."""
    if x1 == x2 or v in (x1, x2):
        raise BoundError("need two distinct vertices other than the target")
    first = f_recursion(g, v, [x1, x2], w, a)
    second = f_recursion(g, v, [x2, x1], w, a)
    return (first <= second) == (w[x1] >= w[x2])
