"""Depth-bounded exact search for sequences that push the most weight onto a target."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

from .bounds import (
    PhiCertificate,
    check_feasible,
    distance_bound,
    phi_bound,
    phi_reach,
    phi_within,
    star_optimum,
    EXHAUSTIVE_LIMIT,
)
from .dynamics import SharingMove, Weights, apply_sequence, as_move, share_values
from .graph import Graph, GraphError, enumerate_connected_subsets

EDGES_ONLY = "edges_only"
ALL_CONNECTED = "all_connected"


class SearchError(ValueError):
    pass


@dataclass
class SearchConfig:
    max_depth: int
    universe: str | Sequence = ALL_CONNECTED
    prune_phi: bool = True
    prune_feasibility: bool = False
    dedup: bool = True
    # feasibility pruning: candidate sources r (default: every vertex)
    sources: Sequence[str] | None = None
    max_move_size: int | None = None
    # radius-limited phi: ignore weight too far away to reach the target in the remaining moves
    horizon: bool = True
    # skip the second of two disjoint (commuting) moves when it sorts before the first
    commute_reduction: bool = True
    seed_incumbent: bool = True
    workers: int = 1
    # stop after this many visited nodes (per worker); the result is then not exhaustive
    node_limit: int | None = None

    def __post_init__(self):
        if self.max_depth < 0:
            raise SearchError("max_depth must be non-negative")
        if self.node_limit is not None and self.node_limit < 1:
            raise SearchError("node_limit must be positive")


@dataclass
class SearchResult:
    best_value: Fraction
    witness: list[SharingMove]
    explored: int
    pruned: int
    bound_certificate: PhiCertificate
    max_depth: int
    target: str = ""
    feasibility_cap: Fraction | None = None
    universe_size: int = 0
    # False if the node limit cut the search short: best_value is then only a lower bound
    exhaustive: bool = True
    extra: dict = field(default_factory=dict)


def move_universe(g: Graph, universe, max_move_size: int | None = None) -> list[SharingMove]:
    """Moves in canonical order (index tuples, lexicographic); singletons are dropped."""
    if universe == EDGES_ONLY:
        moves = [SharingMove(e) for e in g.edge_list()]
    elif universe == ALL_CONNECTED:
        cap = len(g.vertices) if max_move_size is None else max_move_size
        moves = [SharingMove(s) for s in enumerate_connected_subsets(g, cap) if len(s) >= 2]
    elif isinstance(universe, str):
        raise SearchError(f"unknown move universe {universe!r}")
    else:
        moves = [as_move(g, t) for t in universe]
        moves = [m for m in moves if len(m) >= 2]
        moves = list(dict.fromkeys(moves))
    moves.sort(key=lambda m: g.indices(m.vertices))
    return moves


def _encode(seq: Sequence[int], move_idx: Sequence[tuple[int, ...]]) -> tuple:
    return tuple(move_idx[i] for i in seq)


class _Searcher:
    """DFS over move-id sequences. Candidate order: larger value, then shorter, then lexicographic."""

    def __init__(self, vals, target, dists, move_idx, cfg_tuple, cap, incumbent, support_sets=None, node_limit=None):
        (self.max_depth, self.prune, self.dedup, self.horizon, self.commute, self.span) = cfg_tuple
        self.node_limit = node_limit
        self.truncated = False
        self.support_sets = support_sets or {}
        self.n = len(vals)
        self.target = target
        self.dists = dists
        self.move_idx = move_idx
        self.move_sets = [frozenset(m) for m in move_idx]
        self.cap = cap
        self.best_value, self.best_seq = incumbent
        self.best_enc = _encode(self.best_seq, move_idx)
        self.explored = 0
        self.pruned = 0
        self.seen: dict[tuple, int] = {}
        self.root_vals = vals

    def offer(self, value, seq):
        if value < self.best_value:
            return
        enc = _encode(seq, self.move_idx)
        if value > self.best_value or (len(seq), enc) < (len(self.best_seq), self.best_enc):
            self.best_value, self.best_seq, self.best_enc = value, list(seq), enc

    def _tie_possible(self, seq) -> bool:
        # can some extension of seq (length >= len(seq)+1) beat the incumbent at equal value?
        k = len(seq)
        nb = len(self.best_seq)
        if k + 1 < nb:
            return True
        if k + 1 > nb:
            return False
        return _encode(seq, self.move_idx) <= self.best_enc[:k]

    def bound(self, vals, depth):
        remaining = self.max_depth - depth
        radius = remaining * self.span if self.horizon else None
        b = phi_within(vals, self.target, self.dists, radius)
        if self.cap is not None and self.cap < b:
            b = self.cap
        if self.horizon and b >= self.best_value:
            sets = self.support_sets.get(1 + remaining * self.span)
            if sets is not None:
                b = min(b, phi_reach(vals, self.target, self.dists, sets))
        return b

    def run(self, vals, seq, depth, last):
        if self.node_limit is not None and self.explored >= self.node_limit:
            self.truncated = True
            return
        self.explored += 1
        self.offer(vals[self.target], seq)
        if depth >= self.max_depth:
            return
        if self.prune:
            b = self.bound(vals, depth)
            if b < self.best_value or (b == self.best_value and not self._tie_possible(seq)):
                self.pruned += 1
                return
        for mid, idx in enumerate(self.move_idx):
            if (
                self.commute
                and last is not None
                and mid < last
                and not (self.move_sets[mid] & self.move_sets[last])
            ):
                continue
            nxt = share_values(vals, idx)
            if nxt == vals:
                continue
            if self.dedup:
                prev = self.seen.get(nxt)
                if prev is not None and prev <= depth + 1:
                    self.pruned += 1
                    continue
                self.seen[nxt] = depth + 1
            seq.append(mid)
            self.run(nxt, seq, depth + 1, mid)
            seq.pop()


def _run_branch(args):
    vals, target, dists, move_idx, cfg_tuple, cap, incumbent, first_moves, support_sets, limit = args
    s = _Searcher(vals, target, dists, move_idx, cfg_tuple, cap, incumbent, support_sets, limit)
    s.seen[vals] = 0
    for mid in first_moves:
        nxt = share_values(vals, move_idx[mid])
        if nxt == vals:
            continue
        if s.dedup:
            s.seen[nxt] = 1
        s.run(nxt, [mid], 1, mid)
    return s.best_value, s.best_seq, s.explored, s.pruned, s.truncated


SUPPORT_SET_LIMIT = 20_000


def _support_sets(g: Graph, v: str, max_size: int) -> dict[int, list[frozenset[int]]]:
    # connected sets containing v, by size, for sizes below n; empty dict if too many
    out: dict[int, list[frozenset[int]]] = {}
    if max_size < 1:
        return out
    count = 0
    vi = g.index[v]
    for s in enumerate_connected_subsets(g, max_size):
        if v in s:
            out.setdefault(len(s), []).append(frozenset(g.index[x] for x in s))
            count += 1
            if count > SUPPORT_SET_LIMIT:
                return {}
    assert all(vi in m for sets in out.values() for m in sets)
    return out


def _phi_witness(g: Graph, v: str, w: Weights) -> list[SharingMove]:
    # one share per heavier vertex, along a shortest path to the target, lightest first
    cert = phi_bound(g, v, w)
    return [SharingMove(g.canonical(g.shortest_path(v, x))) for x in cert.enumeration]


def search_optimal(g: Graph, w: Weights, v: str, cfg: SearchConfig) -> SearchResult:
    """Best value at ``v`` over all move sequences of length <= cfg.max_depth.

    Exact within the depth bound: pruning uses only proven upper bounds and
    dominance rules that never discard a strictly better candidate, so the
    result is independent of pruning and worker settings.
    """
    if v not in g:
        raise SearchError(f"target {v!r} is not a vertex")
    if not g.is_connected():
        raise SearchError("search needs a connected graph")
    if w.graph != g:
        raise GraphError("weights belong to a different graph")
    moves = move_universe(g, cfg.universe, cfg.max_move_size)
    if not moves and cfg.max_depth > 0:
        raise SearchError("move universe is empty")
    move_idx = [g.indices(m.vertices) for m in moves]
    target = g.index[v]
    dists = [g.distance(x, v) for x in g.vertices]
    span = max((len(m) - 1 for m in moves), default=1)
    cert = phi_bound(g, v, w)

    cap = None
    if cfg.prune_feasibility and len(g.vertices) <= EXHAUSTIVE_LIMIT:
        total = w.total()
        for r in cfg.sources or g.vertices:
            if check_feasible(g, r, w).feasible:
                b = distance_bound(g, r, v, total)
                cap = b if cap is None else min(cap, b)

    vals = w.values
    best = (vals[target], [])
    if cfg.seed_incumbent and cfg.max_depth > 0:
        pos = {m: i for i, m in enumerate(move_idx)}
        heur = [g.indices(m.vertices) for m in _phi_witness(g, v, w)]
        heur = [h for h in heur if len(h) >= 2]
        if heur and len(heur) <= cfg.max_depth and all(h in pos for h in heur):
            seq = [pos[h] for h in heur]
            state = vals
            for h in heur:
                state = share_values(state, h)
            helper = _Searcher(vals, target, dists, move_idx, (0, False, False, False, False, span), None, best)
            helper.offer(state[target], seq)
            best = (helper.best_value, helper.best_seq)

    support_sets = {}
    if cfg.prune_phi and cfg.horizon:
        support_sets = _support_sets(g, v, min(len(g.vertices) - 1, (cfg.max_depth - 1) * span + 1))
    cfg_tuple = (cfg.max_depth, cfg.prune_phi, cfg.dedup, cfg.horizon, cfg.commute_reduction, span)
    root = _Searcher(vals, target, dists, move_idx, cfg_tuple, cap, best, support_sets, cfg.node_limit)
    explored = pruned = 0
    truncated = False
    if cfg.workers <= 1 or cfg.max_depth == 0:
        root.seen[vals] = 0
        root.run(vals, [], 0, None)
        best_value, best_seq = root.best_value, root.best_seq
        explored, pruned, truncated = root.explored, root.pruned, root.truncated
    else:
        root.explored = 1
        root.offer(vals[target], [])
        shares = [list(range(i, len(moves), cfg.workers)) for i in range(cfg.workers)]
        jobs = [
            (vals, target, dists, move_idx, cfg_tuple, cap, (root.best_value, root.best_seq), part, support_sets, cfg.node_limit)
            for part in shares
            if part
        ]
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            for value, seq, ex, pr, tr in pool.map(_run_branch, jobs):
                root.offer(value, seq)
                explored += ex
                pruned += pr
                truncated = truncated or tr
        explored += 1
        best_value, best_seq = root.best_value, root.best_seq

    witness = [moves[i] for i in best_seq]
    return SearchResult(
        best_value=best_value,
        witness=witness,
        explored=explored,
        pruned=pruned,
        bound_certificate=cert,
        max_depth=cfg.max_depth,
        target=v,
        feasibility_cap=cap,
        universe_size=len(moves),
        exhaustive=not truncated,
    )


def single_source_optimum(g: Graph, r: str, v: str) -> tuple[Fraction, list[SharingMove]]:
    """Closed-form best value at v from a unit at r, with its one-move witness."""
    d = g.distance(r, v)
    if d == 0:
        return Fraction(1), []
    return Fraction(1, d + 1), [SharingMove(g.canonical(g.shortest_path(r, v)))]


def nested_move_audit(seq: Iterable) -> list[tuple[int, int]]:
    """All 1-based pairs (i, j), i < j, whose i-th move set lies inside the j-th."""
    sets = [frozenset(m.vertices if isinstance(m, SharingMove) else m) for m in seq]
    return [
        (i + 1, j + 1)
        for i in range(len(sets))
        for j in range(i + 1, len(sets))
        if sets[i] <= sets[j]
    ]


def enumerate_best_sequences(
    g: Graph, w: Weights, v: str, depth: int, universe=ALL_CONNECTED
) -> tuple[Fraction, list[list[SharingMove]]]:
    """Brute force: the best value over sequences of length <= depth, and every sequence attaining it."""
    moves = move_universe(g, universe)
    move_idx = [g.indices(m.vertices) for m in moves]
    t = g.index[v]
    best = w.values[t]
    winners: list[tuple[int, ...]] = [()]
    for length in range(1, depth + 1):
        for seq in product(range(len(moves)), repeat=length):
            vals = w.values
            for i in seq:
                vals = share_values(vals, move_idx[i])
            if vals[t] > best:
                best, winners = vals[t], [seq]
            elif vals[t] == best:
                winners.append(seq)
    return best, [[moves[i] for i in seq] for seq in winners]


NESTED_TREE_EDGES = {frozenset(e) for e in (("r", "s"), ("s", "t"), ("t", "v"), ("t", "u"))}


def counterexample_audit(g: Graph, w: Weights, v: str = "v", depth: int = 3, source: str = "r") -> dict:
    """Recompute every quantity in the nesting argument on the five-vertex tree r-s-t-v, t-u.

    Returns exact values for: sharing {t,v} first (value stuck at v), sharing
    {t,u} first (bound on the rest {r,s,t,v}), the {t,u,v}/{s,t} branch, the
    per-vertex floor after two moves and the shifted feasibility bound, the
    three-move value, and the nesting status of every best sequence within ``depth``.
    """
    if set(g.vertices) != {"r", "s", "t", "u", "v"} or set(g.edges) != NESTED_TREE_EDGES:
        raise SearchError("audit needs the tree r-s-t-v with leaf u at t")
    if v != "v" or source != "r":
        raise SearchError("audit targets v with source r")
    report: dict = {}

    three = [("t", "v"), ("s", "t", "u"), ("r", "s", "t", "v")]
    report["three_move_sequence"] = [list(m) for m in three]
    report["three_move_value"] = apply_sequence(w, three)[v]
    report["nested_pairs_in_three_move_sequence"] = nested_move_audit(three)

    w1 = apply_sequence(w, [("t", "v")])
    report["after_tv_value"] = w1[v]

    w1 = apply_sequence(w, [("t", "u")])
    rest = ("r", "s", "t", "v")
    sub = g.subgraph(rest)
    w1_rest = Weights.from_mapping(sub, {x: w1[x] for x in rest})
    report["after_tu_rest_feasible"] = check_feasible(sub, source, w1_rest).feasible
    report["after_tu_bound"] = w1.mass(rest) / len(rest)

    w2 = apply_sequence(w, [("t", "u", "v"), ("s", "t")])
    report["after_tuv_st_value"] = max(w2[x] for x in ("t", "u", "v"))

    moves = move_universe(g, ALL_CONNECTED)
    excluded_first = {("t", "v"), ("t", "u")}
    floor = None
    cases = 0
    all_feasible = True
    bad_cases = []
    for m1, m2 in product(moves, repeat=2):
        s1, s2 = set(m1.vertices), set(m2.vertices)
        if m1.vertices in excluded_first or s1 <= s2 or s2 <= s1:
            continue
        if m1.vertices == ("t", "u", "v") and m2.vertices == ("s", "t"):
            continue
        cases += 1
        w2 = apply_sequence(w, [m1, m2])
        low = min(w2.values)
        floor = low if floor is None else min(floor, low)
        shift = Fraction(64)
        if low < shift:
            all_feasible = False
            bad_cases.append([list(m1.vertices), list(m2.vertices)])
            continue
        shifted = Weights(g, [x - shift for x in w2.values])
        if not check_feasible(g, source, shifted).feasible:
            all_feasible = False
            bad_cases.append([list(m1.vertices), list(m2.vertices)])
    report["two_move_cases"] = cases
    report["two_move_floor"] = floor
    report["shifted_all_feasible"] = all_feasible
    report["shifted_bad_cases"] = bad_cases
    shifted_total = w.total() - 64 * len(g.vertices)
    report["shifted_total"] = shifted_total
    report["shifted_bound"] = distance_bound(g, source, v, shifted_total)
    report["nesting_free_ceiling"] = report["shifted_bound"] + 64

    best, winners = enumerate_best_sequences(g, w, v, depth)
    report["depth"] = depth
    report["best_within_depth"] = best
    report["best_sequences"] = [[list(m.vertices) for m in seq] for seq in winners]
    report["every_best_sequence_nested"] = all(nested_move_audit(seq) for seq in winners)
    return report


def star_graph(k: int, center: str = "c") -> Graph:
    leaves = [f"x{i}" for i in range(1, k + 1)]
    return Graph([center] + leaves, [(center, x) for x in leaves])


def star_truncation_curve(k_max: int) -> list[Fraction]:
    """Best value at the centre of K_{1,k} with leaf weights 1/2, 1/4, ..., 2^-k, for k = 1..k_max."""
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    out = []
    for k in range(1, k_max + 1):
        g = star_graph(k)
        w = Weights(g, [Fraction(0)] + [Fraction(1, 2**i) for i in range(1, k + 1)])
        out.append(star_optimum(w, "c")[0])
    return out
