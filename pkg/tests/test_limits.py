from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from teashare.dynamics import Weights, apply_sequence
from teashare.graph import Graph
from teashare.limits import (
    component_moves,
    family_components,
    fixed_space_check,
    iterate_to_convergence,
    limit_distribution,
)

from conftest import graphs_with_weights, moves

F = Fraction
PATH3 = Graph(["a", "b", "c"], [("a", "b"), ("b", "c")])
PATH4 = Graph(["a", "b", "c", "d"], [("a", "b"), ("b", "c"), ("c", "d")])


def test_limit_examples():
    third = F(1, 3)
    assert limit_distribution(PATH3, Weights(PATH3, [1, 0, 0]), [["a", "b"], ["b", "c"]]).values == (third,) * 3
    w = Weights(PATH3, [1, 2, 3])
    assert limit_distribution(PATH3, w, [["b"]]) == w
    lim = limit_distribution(PATH4, Weights(PATH4, [1, 0, 0, 2]), [["a", "b"], ["c", "d"]])
    assert lim.values == (F(1, 2), F(1, 2), 1, 1)
    assert family_components(PATH4, [["c", "d"], ["a", "b"]]) == [("a", "b"), ("c", "d")]


def test_fixed_space_examples():
    w = Weights(PATH3, [1, 2, 2])
    assert not fixed_space_check([["a", "b"]], w)
    assert fixed_space_check([["b", "c"]], w)
    assert fixed_space_check([["a", "b"], ["b", "c"]], Weights.uniform(PATH3, 5))


def test_iteration_examples():
    rep = iterate_to_convergence(PATH3, Weights(PATH3, [1, 0, 0]), [["a", "b"], ["b", "c"]], tol=F(1, 10**9))
    assert rep.converged and rep.cycles < 60
    assert rep.distance_to_limit() < F(1, 10**9) and rep.distance_to_limit() <= rep.envelope
    one = iterate_to_convergence(PATH3, Weights(PATH3, [1, 0, 0]), [["a", "b"]])
    assert one.converged and one.cycles == 2 and one.distance_to_limit() == 0
    fixed = iterate_to_convergence(PATH3, Weights.uniform(PATH3, 2), [["a", "b"], ["b", "c"]])
    assert fixed.cycles == 1 and fixed.last_change == 0
    with pytest.raises(ValueError):
        iterate_to_convergence(PATH3, Weights.uniform(PATH3), [])
    with pytest.raises(ValueError):
        iterate_to_convergence(PATH3, Weights.uniform(PATH3), [["a"]], tol=0)


def test_non_convergence_is_reported():
    g = Graph([f"x{i}" for i in range(12)], [(f"x{i}", f"x{i+1}") for i in range(11)])
    w = Weights.indicator(g, ["x0"])
    fam = [list(e) for e in g.edge_list()]
    rep = iterate_to_convergence(g, w, fam, repeats=3, tol=F(1, 10**12))
    assert not rep.converged and rep.cycles == 3
    assert rep.distance_to_limit() <= rep.envelope


@given(st.data())
def test_limit_invariants(data):
    g, w = data.draw(graphs_with_weights(1, 8))
    fam = data.draw(st.lists(moves(g), min_size=1, max_size=4))
    lim = limit_distribution(g, w, fam)
    assert lim.total() == w.total()
    assert fixed_space_check(fam, lim)
    assert limit_distribution(g, lim, fam) == lim
    assert apply_sequence(w, component_moves(g, fam)) == lim
    covered = {x for m in fam for x in m.vertices}
    assert all(lim[x] == w[x] for x in g.vertices if x not in covered)


@settings(max_examples=30)
@given(st.data())
def test_schedule_independence(data):
    g, w = data.draw(graphs_with_weights(2, 7))
    fam = data.draw(st.lists(moves(g), min_size=1, max_size=4))
    other = data.draw(st.permutations(fam))
    tol = F(1, 10**9)
    exact = limit_distribution(g, w, fam)
    for schedule in (fam, other):
        rep = iterate_to_convergence(g, w, schedule, tol=tol)
        assert rep.converged and rep.cycles <= 10_000
        assert rep.exact_limit == exact
        assert rep.distance_to_limit() < tol
