"""Weight distributions and the sharing, edge-sharing and quasi-edge-sharing moves."""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence, Union

from .graph import Graph, GraphError, is_connected_subset
from .rational import to_rational

ZERO = Fraction(0)


class InvalidMoveError(ValueError):
    """A move that is empty, disconnected, off-graph, or out of range for the current state."""

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class Weights(Mapping):
    """Exact weight per vertex, stored in the graph's declaration order.

    Behaves as a read-only ``{vertex: Fraction}`` mapping. Negative entries are
    rejected unless ``signed=True`` (cost vectors in the duality check may be
    signed).
    """

    __slots__ = ("graph", "values")

    def __init__(self, graph: Graph, values: Iterable, *, signed: bool = False):
        vals = tuple(to_rational(x) for x in values)
        if len(vals) != len(graph.vertices):
            raise ValueError(f"expected {len(graph.vertices)} weights, got {len(vals)}")
        if not signed:
            for name, x in zip(graph.vertices, vals):
                if x < 0:
                    raise ValueError(f"negative weight {x} at {name!r}")
        self.graph = graph
        self.values = vals

    @classmethod
    def from_mapping(cls, graph: Graph, mapping: Mapping, *, signed: bool = False) -> "Weights":
        extra = set(mapping) - set(graph.vertices)
        if extra:
            raise ValueError(f"weights given for unknown vertices {sorted(extra)}")
        missing = [x for x in graph.vertices if x not in mapping]
        if missing:
            raise ValueError(f"no weight for vertices {missing}")
        return cls(graph, (mapping[x] for x in graph.vertices), signed=signed)

    @classmethod
    def indicator(cls, graph: Graph, names: Iterable[str]) -> "Weights":
        members = set(graph.canonical(names))
        return cls(graph, (1 if x in members else 0 for x in graph.vertices))

    @classmethod
    def uniform(cls, graph: Graph, value=1) -> "Weights":
        return cls(graph, [value] * len(graph.vertices))

    @classmethod
    def _raw(cls, graph: Graph, vals: tuple) -> "Weights":
        # internal constructor: vals already Fractions and validated
        obj = cls.__new__(cls)
        obj.graph = graph
        obj.values = vals
        return obj

    def __getitem__(self, name: str) -> Fraction:
        return self.values[self.graph.index[name]]

    def __iter__(self) -> Iterator[str]:
        return iter(self.graph.vertices)

    def __len__(self) -> int:
        return len(self.values)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Weights):
            return self.graph == other.graph and self.values == other.values
        if isinstance(other, Mapping):
            return dict(self.items()) == dict(other.items())
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.values)

    def __repr__(self) -> str:
        inner = ", ".join(f"{k}={v}" for k, v in self.items())
        return f"Weights({inner})"

    def mass(self, names: Iterable[str] | None = None) -> Fraction:
        """w(S); the whole graph when ``names`` is None."""
        if names is None:
            return sum(self.values, ZERO)
        idx = self.graph.index
        return sum((self.values[idx[x]] for x in set(names)), ZERO)

    def total(self) -> Fraction:
        return self.mass()

    def replace(self, updates: Mapping) -> "Weights":
        vals = list(self.values)
        for name, x in updates.items():
            vals[self.graph.index[name]] = to_rational(x)
        return Weights(self.graph, vals)


@dataclass(frozen=True)
class SharingMove:
    """Equalize the weights on a connected vertex set."""

    vertices: tuple[str, ...]

    @classmethod
    def of(cls, g: Graph, names: Iterable[str]) -> "SharingMove":
        try:
            members = g.canonical(names)
        except GraphError as exc:
            raise InvalidMoveError(str(exc)) from exc
        if not members:
            raise InvalidMoveError("sharing move on an empty set")
        if not is_connected_subset(g, members):
            raise InvalidMoveError(f"sharing move on disconnected set {list(members)}")
        return cls(members)

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)


@dataclass(frozen=True)
class QuasiMove:
    """Shift ``amount`` from the heavier endpoint ``y`` to the lighter endpoint ``x``."""

    x: str
    y: str
    amount: Fraction

    def __post_init__(self):
        object.__setattr__(self, "amount", to_rational(self.amount))


MoveLike = Union[SharingMove, Iterable[str]]


def as_move(g: Graph, t: MoveLike) -> SharingMove:
    if isinstance(t, SharingMove):
        return SharingMove.of(g, t.vertices)
    if isinstance(t, str):
        raise InvalidMoveError(f"a move is a collection of vertex names, got the string {t!r}")
    return SharingMove.of(g, t)


def as_sequence(g: Graph, seq: Iterable[MoveLike]) -> list[SharingMove]:
    out = []
    for i, t in enumerate(seq):
        try:
            out.append(as_move(g, t))
        except InvalidMoveError as exc:
            raise InvalidMoveError(f"move {i}: {exc}", index=i) from exc
    return out


def share_values(vals: tuple, idx: Sequence[int]) -> tuple:
    """Averaging on raw value tuples; ``idx`` are positions in the vertex order."""
    if len(idx) == 1:
        return vals
    avg = sum((vals[i] for i in idx), ZERO) / len(idx)
    out = list(vals)
    for i in idx:
        out[i] = avg
    return tuple(out)


def apply_share(w: Weights, t: MoveLike) -> Weights:
    g = w.graph
    move = as_move(g, t)
    return Weights._raw(g, share_values(w.values, g.indices(move.vertices)))


def apply_edge_share(w: Weights, x: str, y: str) -> Weights:
    g = w.graph
    for end in (x, y):
        if end not in g:
            raise InvalidMoveError(f"unknown vertex {end!r}")
    if not g.has_edge(x, y):
        raise InvalidMoveError(f"{x!r}-{y!r} is not an edge")
    i, j = g.index[x], g.index[y]
    return Weights._raw(g, share_values(w.values, (i, j)))


def apply_quasi(w: Weights, q: QuasiMove) -> Weights:
    g = w.graph
    for end in (q.x, q.y):
        if end not in g:
            raise InvalidMoveError(f"unknown vertex {end!r}")
    if not g.has_edge(q.x, q.y):
        raise InvalidMoveError(f"{q.x!r}-{q.y!r} is not an edge")
    wx, wy = w[q.x], w[q.y]
    if wx > wy:
        raise InvalidMoveError(f"quasi move needs w({q.x}) <= w({q.y}), got {wx} > {wy}")
    if not 0 <= q.amount <= (wy - wx) / 2:
        raise InvalidMoveError(f"quasi amount {q.amount} outside [0, {(wy - wx) / 2}]")
    vals = list(w.values)
    vals[g.index[q.x]] += q.amount
    vals[g.index[q.y]] -= q.amount
    return Weights._raw(g, tuple(vals))


def quasi_mixing_weight(w: Weights, q: QuasiMove) -> Fraction:
    """lambda with apply_quasi(w, q) == (1 - lambda) w + lambda * edge_share(w)."""
    gap = w[q.y] - w[q.x]
    if gap == 0:
        return ZERO
    return 2 * q.amount / gap


def apply_sequence(w: Weights, seq: Iterable[MoveLike]) -> Weights:
    g = w.graph
    vals = w.values
    for i, t in enumerate(seq):
        try:
            move = as_move(g, t)
        except InvalidMoveError as exc:
            raise InvalidMoveError(f"move {i}: {exc}", index=i) from exc
        vals = share_values(vals, g.indices(move.vertices))
    return Weights._raw(g, vals)


def trace_sequence(w: Weights, seq: Iterable[MoveLike]) -> list[Weights]:
    """Every intermediate distribution, starting with ``w`` itself."""
    states = [w]
    for i, t in enumerate(seq):
        try:
            states.append(apply_share(states[-1], t))
        except InvalidMoveError as exc:
            raise InvalidMoveError(f"move {i}: {exc}", index=i) from exc
    return states


def apply_quasi_sequence(w: Weights, qs: Iterable[QuasiMove]) -> list[Weights]:
    states = [w]
    for i, q in enumerate(qs):
        try:
            states.append(apply_quasi(states[-1], q))
        except InvalidMoveError as exc:
            raise InvalidMoveError(f"quasi move {i}: {exc}", index=i) from exc
    return states


def orient_quasi(w: Weights, x: str, y: str, amount) -> QuasiMove:
    """The quasi move on the unordered edge xy, pointed from the heavier end to the lighter one."""
    for end in (x, y):
        if end not in w.graph:
            raise InvalidMoveError(f"unknown vertex {end!r}")
    if w[x] > w[y]:
        x, y = y, x
    return QuasiMove(x, y, amount)


def apply_edge_quasi_sequence(w: Weights, items: Iterable[tuple[str, str, Fraction]]) -> list[QuasiMove]:
    """Orient each (x, y, s) against the state it is applied to; returns the oriented moves."""
    out = []
    state = w
    for i, (x, y, amount) in enumerate(items):
        try:
            q = orient_quasi(state, x, y, amount)
            state = apply_quasi(state, q)
        except InvalidMoveError as exc:
            raise InvalidMoveError(f"quasi move {i}: {exc}", index=i) from exc
        out.append(q)
    return out


def apply_adjoint_sequence(c: Weights, seq: Iterable[MoveLike]) -> Weights:
    """Apply ``seq`` to ``c`` in reverse order (each sharing matrix is symmetric)."""
    return apply_sequence(c, list(seq)[::-1])


def matrix_of_move(g: Graph, t: MoveLike) -> list[list[Fraction]]:
    move = as_move(g, t)
    n = len(g.vertices)
    inside = set(g.indices(move.vertices))
    share = Fraction(1, len(inside))
    rows = []
    for i in range(n):
        if i in inside:
            rows.append([share if j in inside else ZERO for j in range(n)])
        else:
            rows.append([Fraction(int(i == j)) for j in range(n)])
    return rows


def mat_mul(a: list[list[Fraction]], b: list[list[Fraction]]) -> list[list[Fraction]]:
    cols = list(zip(*b))
    return [[sum((x * y for x, y in zip(row, col)), ZERO) for col in cols] for row in a]


def mat_vec(a: list[list[Fraction]], w: Weights, *, signed: bool = False) -> Weights:
    vals = [sum((x * y for x, y in zip(row, w.values)), ZERO) for row in a]
    return Weights(w.graph, vals, signed=signed)


def matrix_of_sequence(g: Graph, seq: Iterable[MoveLike]) -> list[list[Fraction]]:
    """A_{T_k} ... A_{T_1}: the operator that applies ``seq`` left to right."""
    n = len(g.vertices)
    acc = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for t in seq:
        acc = mat_mul(matrix_of_move(g, t), acc)
    return acc


def inner_product(a: Mapping, b: Mapping) -> Fraction:
    if set(a) != set(b):
        raise ValueError("inner product of distributions on different vertex sets")
    if isinstance(a, Weights) and isinstance(b, Weights) and a.graph.vertices == b.graph.vertices:
        return sum((x * y for x, y in zip(a.values, b.values)), ZERO)
    return sum((to_rational(a[k]) * to_rational(b[k]) for k in a), ZERO)


def squared_norm(w: Mapping) -> Fraction:
    if isinstance(w, Weights):
        return sum((x * x for x in w.values), ZERO)
    return sum((to_rational(x) ** 2 for x in w.values()), ZERO)


def is_constant_on(w: Weights, names: Iterable[str]) -> bool:
    return len({w[x] for x in names}) <= 1


def quasi_decomposition(
    w: Weights, qs: Sequence[QuasiMove]
) -> list[tuple[Fraction, Weights, tuple[tuple[str, str], ...]]]:
    """Write the end state of ``qs`` as a convex combination of edge-reachable states.

    Returns ``(coefficient, state, edge_sequence)`` triples; each state is ``w``
    after the listed edge-sharing moves, and the coefficients are positive and
    sum to 1. Built inductively: a quasi move on xy mixes the current state with
    its xy edge-share, and edge sharing is linear, so it distributes over the
    existing combination. States reached twice are merged.
    """
    terms: dict[tuple, list] = {w.values: [Fraction(1), w, ()]}
    current = w
    for step, q in enumerate(qs):
        try:
            nxt = apply_quasi(current, q)
        except InvalidMoveError as exc:
            raise InvalidMoveError(f"quasi move {step}: {exc}", index=step) from exc
        lam = quasi_mixing_weight(current, q)
        updated: dict[tuple, list] = {}

        def add(coef, state, edges):
            if coef == 0:
                return
            slot = updated.get(state.values)
            if slot is None:
                updated[state.values] = [coef, state, edges]
            else:
                slot[0] += coef

        for coef, state, edges in terms.values():
            add(coef * (1 - lam), state, edges)
            add(coef * lam, apply_edge_share(state, q.x, q.y), edges + ((q.x, q.y),))
        terms = updated
        current = nxt
    return [(c, s, e) for c, s, e in terms.values()]


def combine(terms: Iterable[tuple[Fraction, Weights]]) -> tuple[Fraction, ...]:
    acc = None
    for coef, state in terms:
        scaled = [coef * x for x in state.values]
        acc = scaled if acc is None else [a + b for a, b in zip(acc, scaled)]
    return tuple(acc or ())


def edge_approximation(g: Graph, seq: Iterable[MoveLike], sweeps: int) -> list[SharingMove]:
    """Replace each sharing move by ``sweeps`` passes over the edges it induces.

    Repeated edge sharing inside a connected set converges to its average, so
    the resulting edge-only sequence approaches the effect of ``seq``.
    """
    out = []
    for t in seq:
        move = as_move(g, t)
        if len(move) == 1:
            continue
        members = set(move.vertices)
        inner = [e for e in g.edge_list() if e[0] in members and e[1] in members]
        for _ in range(sweeps):
            out.extend(SharingMove(e) for e in inner)
    return out
