"""Seeded property suites behind ``teashare verify``.

Every property is a generator of cases. A case is checked exactly and, when it
fails, kept if it is the smallest failure seen so far (by a per-property size
key), so the report carries a small counterexample rather than the first one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Iterator

from . import bounds, dynamics, limits, search
from .dynamics import SharingMove, Weights
from .generators import (
    make_rng,
    random_connected_graph,
    random_connected_set,
    random_edge_move,
    random_rational,
    random_sequence,
    random_weights,
)
from .io import graph_to_json, load_fixture, weights_to_json

SUITES = ("inequalities", "feasibility", "phi", "duality", "limits", "audit")


@dataclass
class PropertyResult:
    suite: str
    name: str
    checked: int = 0
    failed: int = 0
    counterexample: dict | None = None
    _size: tuple = field(default=(), repr=False)

    @property
    def ok(self) -> bool:
        return self.failed == 0 and self.checked > 0

    def as_dict(self) -> dict:
        out = {"suite": self.suite, "property": self.name, "checked": self.checked, "failed": self.failed}
        if self.counterexample is not None:
            out["smallest_counterexample"] = self.counterexample
        return out


# a property yields (passed, size_key, case_description_thunk)
Case = tuple[bool, tuple, Callable[[], dict]]


def _moves_json(seq) -> list[list[str]]:
    return [list(m.vertices) for m in seq]


def _instance(g, w, **extra) -> dict:
    return {"graph": graph_to_json(g), "weights": weights_to_json(w), **extra}


def _graph(rng, lo=2, hi=7):
    n = int(rng.integers(lo, hi + 1))
    return random_connected_graph(rng, n, extra=float(rng.choice([0.1, 0.3, 0.6])))


# ---------------------------------------------------------------- inequalities


def interval_inequality(rng, trials) -> Iterator[Case]:
    # exhaustive; the trial count does not apply
    for s, t, xs, ys in bounds.interval_cases(6, 6):
        ok = bounds.check_interval_inequality_A(s, t, xs, ys)
        yield ok, (s + t, xs, ys), lambda s=s, t=t, xs=xs, ys=ys: {"s": s, "t": t, "xs": list(xs), "ys": list(ys)}


def chebyshev_distance_tuples(t_max=5, d_max=6):
    for t in range(1, t_max + 1):
        for ds in product(range(1, d_max + 1), repeat=t):
            if bounds._is_interval(ds):
                yield ds


def sorted_weights(rng, t):
    return sorted(random_rational(rng, max_num=20, max_den=7) for _ in range(t))


def chebyshev_inequality(rng, trials) -> Iterator[Case]:
    by_len: dict[int, list] = {}
    for ds in chebyshev_distance_tuples():
        by_len.setdefault(len(ds), []).append(ds)
    for _ in range(trials):
        t = int(rng.integers(1, 6))
        ws = sorted_weights(rng, t)
        for ds in by_len[t]:
            ok = bounds.check_chebyshev_inequality_B(ds, ws)
            yield ok, (t, ds), lambda ds=ds, ws=ws: {"ds": list(ds), "ws": [str(x) for x in ws]}


def edge_step_inequality(rng, trials) -> Iterator[Case]:
    for a in range(0, 60):
        for b in (a - 1, a, a + 1):
            if b >= 0:
                yield bounds.check_edge_step_inequality(a, b), (a, b), lambda a=a, b=b: {"a": a, "b": b}


def f_monotone(rng, trials) -> Iterator[Case]:
    for _ in range(trials):
        g = _graph(rng)
        w = random_weights(rng, g)
        v = g.vertices[int(rng.integers(0, len(g)))]
        others = [x for x in g.vertices if x != v]
        rng.shuffle(others)
        order = others[: int(rng.integers(0, len(others) + 1))]
        a = random_rational(rng)
        b = a + random_rational(rng, zero_prob=0) + Fraction(1, 7)
        fa = bounds.f_recursion(g, v, order, w, a)
        fb = bounds.f_recursion(g, v, order, w, b)
        closed = bounds.f_closed_form(g, v, order, w, a)
        ok = fa < fb and fa == closed
        yield ok, (len(g), len(order)), lambda: _instance(g, w, target=v, order=order, a=str(a), b=str(b))


def order_swap(rng, trials) -> Iterator[Case]:
    for _ in range(trials):
        g = _graph(rng, 3, 7)
        w = random_weights(rng, g)
        v, x1, x2 = (g.vertices[i] for i in rng.choice(len(g), size=3, replace=False))
        if rng.random() < 0.2:
            w = w.replace({x2: w[x1]})
        a = random_rational(rng)
        ok = bounds.swap_order_check(g, v, x1, x2, w, a)
        yield ok, (len(g),), lambda: _instance(g, w, target=v, pair=[x1, x2], a=str(a))


# ---------------------------------------------------------------- feasibility


def feasibility_preserved(rng, trials, hand_built=True) -> Iterator[Case]:
    starts = []
    if hand_built:
        for i in (1, 2, 3):
            inst = load_fixture(f"feasible_{i}.json")
            starts.append((inst.graph, inst.weights, inst.source))
    for k in range(trials + len(starts)):
        if k < len(starts):
            g, w, r = starts[k]
        else:
            g = _graph(rng, 2, 8)
            r = g.vertices[int(rng.integers(0, len(g)))]
            w = Weights.indicator(g, [r])
        seq = random_sequence(rng, g, int(rng.integers(1, 11)), edge_prob=0.3)
        state = w
        ok = bounds.check_feasible(g, r, state).feasible
        for step, m in enumerate(seq):
            state = dynamics.apply_share(state, m)
            if not bounds.check_feasible(g, r, state).feasible:
                ok = False
                seq = seq[: step + 1]
                break
        yield ok, (len(g), len(seq)), lambda g=g, w=w, r=r, seq=seq: _instance(g, w, source=r, moves=_moves_json(seq))


def set_bound_sound(rng, trials) -> Iterator[Case]:
    for _ in range(trials):
        g = _graph(rng, 2, 7)
        r = g.vertices[int(rng.integers(0, len(g)))]
        w = Weights.indicator(g, [r]).replace({r: random_rational(rng, zero_prob=0) + 1})
        seq = random_sequence(rng, g, int(rng.integers(1, 8)), edge_prob=0.3)
        end = dynamics.apply_sequence(w, seq)
        m = w.total()
        k = int(rng.integers(1, len(g) + 1))
        s = [g.vertices[i] for i in rng.choice(len(g), size=k, replace=False)]
        ok = end.mass(s) <= bounds.multi_target_bound(g, r, s, m)
        yield ok, (len(g), len(seq)), lambda: _instance(g, w, source=r, moves=_moves_json(seq), subset=s)


# ---------------------------------------------------------------- phi


def phi_matches_bruteforce(rng, trials) -> Iterator[Case]:
    for _ in range(trials):
        g = _graph(rng, 2, 6)
        w = random_weights(rng, g)
        v = g.vertices[int(rng.integers(0, len(g)))]
        ok = bounds.phi_bound(g, v, w).value == bounds.phi_bruteforce(g, v, w, w[v])
        yield ok, (len(g),), lambda: _instance(g, w, target=v)


def phi_descent(rng, trials) -> Iterator[Case]:
    for _ in range(trials):
        g = _graph(rng, 2, 8)
        w = random_weights(rng, g)
        v = g.vertices[int(rng.integers(0, len(g)))]
        m = random_edge_move(rng, g) if rng.random() < 0.5 and g.edges else random_connected_set(rng, g)
        after = dynamics.apply_share(w, m)
        ok = bounds.phi_bound(g, v, after).value <= bounds.phi_bound(g, v, w).value
        yield ok, (len(g), len(m)), lambda: _instance(g, w, target=v, moves=[list(m.vertices)])


def phi_dominates_reachable(rng, trials) -> Iterator[Case]:
    for _ in range(trials):
        g = _graph(rng, 2, 8)
        w = random_weights(rng, g)
        v = g.vertices[int(rng.integers(0, len(g)))]
        seq = random_sequence(rng, g, int(rng.integers(1, 8)), edge_prob=0.3)
        ok = dynamics.apply_sequence(w, seq)[v] <= bounds.phi_bound(g, v, w).value
        yield ok, (len(g), len(seq)), lambda: _instance(g, w, target=v, moves=_moves_json(seq))


def single_source_tight(rng, trials) -> Iterator[Case]:
    for _ in range(trials):
        g = _graph(rng, 1, 9)
        r, v = (g.vertices[int(rng.integers(0, len(g)))] for _ in range(2))
        w = Weights.indicator(g, [r])
        bound = bounds.distance_bound(g, r, v)
        value, witness = search.single_source_optimum(g, r, v)
        ok = (
            bounds.phi_bound(g, v, w).value == bound == value
            and dynamics.apply_sequence(w, witness)[v] == value
        )
        yield ok, (len(g),), lambda: _instance(g, w, source=r, target=v)


def star_optimum_replays(rng, trials) -> Iterator[Case]:
    for _ in range(trials):
        t = int(rng.integers(1, 7))
        g = search.star_graph(t)
        w = random_weights(rng, g)
        value, witness = bounds.star_optimum(w, "c")
        ok = dynamics.apply_sequence(w, witness)["c"] == value == bounds.phi_bound(g, "c", w).value
        yield ok, (t,), lambda: _instance(g, w, target="c")


# ---------------------------------------------------------------- duality and operators


def adjoint_identity(rng, trials) -> Iterator[Case]:
    for _ in range(trials):
        g = _graph(rng, 1, 8)
        w = random_weights(rng, g)
        c = Weights(g, [random_rational(rng) * (1 if rng.random() < 0.7 else -1) for _ in g.vertices], signed=True)
        seq = random_sequence(rng, g, int(rng.integers(0, 9)), edge_prob=0.3)
        lhs = dynamics.inner_product(c, dynamics.apply_sequence(w, seq))
        rhs = dynamics.inner_product(w, dynamics.apply_adjoint_sequence(c, seq))
        yield lhs == rhs, (len(g), len(seq)), lambda: {**_instance(g, w, moves=_moves_json(seq)), "c": weights_to_json(c)}


def matrix_agrees(rng, trials) -> Iterator[Case]:
    for _ in range(trials):
        g = _graph(rng, 1, 6)
        w = random_weights(rng, g)
        m = random_connected_set(rng, g)
        a = dynamics.matrix_of_move(g, m)
        n = len(g)
        stochastic = all(sum(row) == 1 for row in a) and all(sum(a[i][j] for i in range(n)) == 1 for j in range(n))
        symmetric = all(a[i][j] == a[j][i] for i in range(n) for j in range(n))
        ok = stochastic and symmetric and dynamics.mat_vec(a, w) == dynamics.apply_share(w, m)
        yield ok, (n, len(m)), lambda: _instance(g, w, moves=[list(m.vertices)])


def random_quasi(rng, g, w, steps):
    items = []
    state = w
    for _ in range(steps):
        x, y = random_edge_move(rng, g).vertices
        q = dynamics.orient_quasi(state, x, y, 0)
        gap = state[q.y] - state[q.x]
        s = gap / 2 * Fraction(int(rng.integers(0, 5)), 4)
        q = dynamics.QuasiMove(q.x, q.y, s)
        items.append(q)
        state = dynamics.apply_quasi(state, q)
    return items


def quasi_convex(rng, trials) -> Iterator[Case]:
    for _ in range(trials):
        g = _graph(rng, 2, 6)
        w = random_weights(rng, g)
        qs = random_quasi(rng, g, w, int(rng.integers(1, 6)))
        states = dynamics.apply_quasi_sequence(w, qs)
        q0 = qs[0]
        lam = dynamics.quasi_mixing_weight(w, q0)
        edge = dynamics.apply_edge_share(w, q0.x, q0.y)
        single = tuple((1 - lam) * a + lam * b for a, b in zip(w.values, edge.values)) == states[1].values
        terms = dynamics.quasi_decomposition(w, qs)
        coefs_ok = all(c > 0 for c, _, _ in terms) and sum(c for c, _, _ in terms) == 1
        replay_ok = all(dynamics.apply_sequence(w, [pair for pair in e]) == s for _, s, e in terms)
        whole = dynamics.combine((c, s) for c, s, _ in terms) == states[-1].values
        ok = single and coefs_ok and replay_ok and whole
        yield ok, (len(g), len(qs)), lambda: {
            **_instance(g, w),
            "quasi": [{"edge": [q.x, q.y], "s": str(q.amount)} for q in qs],
        }


# ---------------------------------------------------------------- limits


def norm_descent(rng, trials) -> Iterator[Case]:
    for _ in range(trials):
        g = _graph(rng, 1, 8)
        w = random_weights(rng, g)
        if rng.random() < 0.2:
            w = Weights.uniform(g, random_rational(rng))
        m = random_edge_move(rng, g) if g.edges and rng.random() < 0.5 else random_connected_set(rng, g)
        before, after = dynamics.squared_norm(w), dynamics.squared_norm(dynamics.apply_share(w, m))
        constant = dynamics.is_constant_on(w, m.vertices)
        ok = after == before if constant else after < before
        yield ok, (len(g), len(m)), lambda: _instance(g, w, moves=[list(m.vertices)])


def random_family(rng, g, size=None) -> list[SharingMove]:
    k = int(rng.integers(1, 5)) if size is None else size
    return list(dict.fromkeys(random_connected_set(rng, g) for _ in range(k)))


def limit_properties(rng, trials) -> Iterator[Case]:
    for _ in range(trials):
        g = _graph(rng, 1, 9)
        w = random_weights(rng, g)
        fam = random_family(rng, g)
        lim = limits.limit_distribution(g, w, fam)
        ok = (
            limits.fixed_space_check(fam, lim)
            and lim.total() == w.total()
            and limits.limit_distribution(g, lim, fam) == lim
            and dynamics.apply_sequence(w, limits.component_moves(g, fam)) == lim
        )
        yield ok, (len(g), len(fam)), lambda: _instance(g, w, family=_moves_json(fam))


def iteration_converges(rng, trials) -> Iterator[Case]:
    tol = Fraction(1, 10**9)
    for _ in range(trials):
        g = _graph(rng, 2, 8)
        w = random_weights(rng, g)
        fam = random_family(rng, g)
        schedule = list(fam)
        rng.shuffle(schedule)
        rep = limits.iterate_to_convergence(g, w, schedule, repeats=10_000, tol=tol)
        dist = rep.distance_to_limit()
        ok = rep.converged and dist <= rep.envelope and dist < tol
        yield ok, (len(g), len(fam)), lambda: _instance(g, w, family=_moves_json(schedule))


# ---------------------------------------------------------------- audit


def nesting_audit(rng, trials) -> Iterator[Case]:
    inst = load_fixture("nested_tree.json")
    rep = search.counterexample_audit(inst.graph, inst.weights, "v", 3, "r")
    expected = {
        "three_move_value": 132,
        "after_tv_value": 108,
        "after_tu_bound": 120,
        "shifted_bound": 67,
        "nesting_free_ceiling": 131,
        "two_move_floor": 64,
    }
    for key, want in expected.items():
        yield rep[key] == want, (0,), lambda key=key: {"quantity": key, "got": str(rep[key]), "want": str(expected[key])}
    yield rep["after_tu_rest_feasible"], (1,), lambda: {"quantity": "after_tu_rest_feasible"}
    yield rep["shifted_all_feasible"], (1,), lambda: {"quantity": "shifted_bad_cases", "got": rep["shifted_bad_cases"]}
    yield rep["best_within_depth"] >= 132, (2,), lambda: {"quantity": "best_within_depth", "got": str(rep["best_within_depth"])}
    yield rep["every_best_sequence_nested"], (2,), lambda: {"quantity": "best_sequences", "got": rep["best_sequences"]}


PROPERTIES: list[tuple[str, str, Callable]] = [
    ("inequalities", "interval product inequality", interval_inequality),
    ("inequalities", "weighted Chebyshev sum inequality", chebyshev_inequality),
    ("inequalities", "edge step inequality", edge_step_inequality),
    ("inequalities", "f strictly increasing in its start value", f_monotone),
    ("inequalities", "heavier vertex first never helps", order_swap),
    ("feasibility", "feasibility preserved by sharing moves", feasibility_preserved),
    ("feasibility", "set bound holds after random moves", set_bound_sound),
    ("phi", "phi equals brute-force maximum", phi_matches_bruteforce),
    ("phi", "phi never increases under a move", phi_descent),
    ("phi", "reachable target values stay below phi", phi_dominates_reachable),
    ("phi", "single-source bound is attained", single_source_tight),
    ("phi", "star optimum replays to phi", star_optimum_replays),
    ("duality", "adjoint identity", adjoint_identity),
    ("duality", "sharing matrix: symmetric, doubly stochastic, agrees with move", matrix_agrees),
    ("duality", "quasi moves are convex combinations of edge shares", quasi_convex),
    ("limits", "squared norm descent", norm_descent),
    ("limits", "limit is fixed, conserved, idempotent and reachable", limit_properties),
    ("limits", "float iteration lands on the exact limit", iteration_converges),
    ("audit", "nested-tree audit values", nesting_audit),
]


def run_property(suite: str, name: str, fn: Callable, seed: int, trials: int, stream: int) -> PropertyResult:
    res = PropertyResult(suite, name)
    rng = make_rng(seed, stream)
    for ok, size, describe in fn(rng, trials):
        res.checked += 1
        if not ok:
            res.failed += 1
            if res.counterexample is None or size < res._size:
                res.counterexample, res._size = describe(), size
    return res


def run_suites(suite: str = "all", seed: int = 0, trials: int = 100) -> list[PropertyResult]:
    if suite != "all" and suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from all, {', '.join(SUITES)}")
    if trials < 1:
        raise ValueError("trials must be positive")
    out = []
    for stream, (s, name, fn) in enumerate(PROPERTIES):
        if suite in ("all", s):
            out.append(run_property(s, name, fn, seed, trials, stream))
    return out
