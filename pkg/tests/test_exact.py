import random
from fractions import Fraction

import pytest

from bondcover.detect import verify_cover
from bondcover.errors import BudgetExceededError, ValidationError
from bondcover.exact import anchored_graph, constrained_cover, exact_cover, opt
from bondcover.instance import gadget_chain
from bondcover.multigraph import WeightedMultigraph
from bondcover.structure import iter_outgrowths

from oracles import Brute, ForestBrute, random_graph


def unit(edges):
    vs = {x for e in edges for x in e[:2]}
    return WeightedMultigraph({v: 1 for v in vs}, edges)


def test_triangle_and_k4():
    assert opt(unit([(1, 2, 1), (2, 3, 1), (1, 3, 1)]), 2) == 1
    k4 = unit([(i, j, 1) for i in range(4) for j in range(i + 1, 4)])
    assert opt(k4, 2) == 2
    assert exact_cover(k4, 2, method="enumerate")[1] == 2


def test_theta3_cheaper_endpoint():
    g = WeightedMultigraph({1: 5, 2: 1}, [(1, 2, 3)])
    assert exact_cover(g, 3) == ({2}, 1)


def test_free_graph_needs_nothing():
    assert exact_cover(unit([(1, 2, 1), (2, 3, 1)]), 2) == (frozenset(), 0)


def test_budget_error():
    rng = random.Random(0)
    g = random_graph(rng, 14, 2, p=0.6)
    with pytest.raises(BudgetExceededError):
        exact_cover(g, 2, budget=3)


def test_bad_method_and_order():
    g = unit([(1, 2, 1)])
    with pytest.raises(ValidationError):
        exact_cover(g, 2, method="magic")
    with pytest.raises(ValidationError):
        exact_cover(g, 0)


def test_matches_brute_force_with_fractions_and_zeros():
    rng = random.Random(7)
    for _ in range(120):
        c = rng.choice([2, 3, 4])
        g = random_graph(rng, rng.randint(1, 10), c, zero_weights=True, fractional=True)
        S, w = exact_cover(g, c)
        assert verify_cover(g, c, S)
        assert w == g.total_weight(S)
        assert w == Brute(g, c).opt()


def test_enumerate_method_agrees():
    rng = random.Random(8)
    for _ in range(40):
        g = random_graph(rng, rng.randint(1, 9), 2)
        assert exact_cover(g, 2, method="enumerate")[1] == ForestBrute(g).opt()


def test_constrained_cover_path():
    u, a, b, v = 1, 2, 3, 4
    K = unit([(u, a, 1), (a, b, 1), (b, v, 1)])
    T, w = constrained_cover(K, u, v, 0, 2)
    assert T in ({a}, {b}) and w == 1
    assert constrained_cover(K, u, v, 1, 2) == (frozenset(), 0)


def test_constrained_cover_two_paths():
    u, a, b, v = 1, 2, 3, 4
    K = unit([(u, a, 1), (a, v, 1), (u, b, 1), (b, v, 1)])
    T, w = constrained_cover(K, u, v, 1, 3)
    assert w == 1 and len(T) == 1 and not T & {u, v}


def test_constrained_cover_rejects_anchor_edges_and_bad_index():
    K = unit([(1, 2, 1), (2, 3, 1), (1, 3, 1)])
    with pytest.raises(ValidationError):
        constrained_cover(K, 1, 3, 0, 2)
    with pytest.raises(ValidationError):
        constrained_cover(K.remove_edges([(1, 3)]), 1, 3, 2, 2)


def _separating_brute(Kuv, u, v, T, order):
    """Does Kuv - T still have a theta_order model with u and v on different sides?"""
    h = Kuv.delete_vertices(T)
    vs = list(h.vertices())
    conn = []
    for bits in range(1, 1 << len(vs)):
        S = frozenset(vs[i] for i in range(len(vs)) if bits >> i & 1)
        if h.is_connected_set(S):
            conn.append(S)
    xs = [X for X in conn if u in X and v not in X]
    ys = [Y for Y in conn if v in Y and u not in Y]
    return any(not X & Y and h.edges_between(X, Y) >= order for X in xs for Y in ys)


def test_constrained_cover_against_brute_force():
    rng = random.Random(4)
    checked = 0
    for seed in range(40):
        c = rng.choice([2, 3])
        g = gadget_chain(2, rng.randint(1, 3), c, seed, chords=0)
        for og in iter_outgrowths(g, c):
            u, v = og.anchors
            Kuv = anchored_graph(g, og.component, u, v)
            inner = sorted(og.component)
            for i in range(c):
                T, w = constrained_cover(Kuv, u, v, i, c)
                assert not _separating_brute(Kuv, u, v, T, i + 1)
                best = min(
                    Kuv.total_weight(S)
                    for S in ({inner[j] for j in range(len(inner)) if bits >> j & 1} for bits in range(1 << len(inner)))
                    if not _separating_brute(Kuv, u, v, S, i + 1)
                )
                assert w == best
                checked += 1
    assert checked > 50


def test_monotone_chain():
    rng = random.Random(9)
    for seed in range(30):
        c = rng.choice([2, 3, 4])
        g = gadget_chain(3, rng.randint(1, 3), c, seed, chords=1)
        for og in iter_outgrowths(g, c):
            u, v = og.anchors
            Kuv = og.anchored(g)
            ws = [constrained_cover(Kuv, u, v, c - 1 - i, c)[1] for i in range(c)]
            assert ws[0] == 0
            assert ws == sorted(ws)
