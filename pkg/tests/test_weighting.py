import random
from fractions import Fraction

import pytest

from bondcover.detect import ThetaModel, find_theta_model, minimize_model
from bondcover.errors import ValidationError
from bondcover.multigraph import ClusterCollection, WeightedMultigraph, contract_clusters
from bondcover.weighting import (
    cluster_layer,
    cluster_weighting,
    edge_degree_weighting,
    model_layer,
    subtract_layer,
)

from oracles import cluster_instance, dense_instance, oracle_for, random_graph


def unit(edges):
    vs = {x for e in edges for x in e[:2]}
    return WeightedMultigraph({v: 1 for v in vs}, edges)


def test_cluster_weighting_examples():
    star = unit([(0, i, 1) for i in range(1, 6)])
    cc = ClusterCollection([{v} for v in star.vertices()], star)
    assert cluster_weighting(star, cc)[0] == 5
    g = unit([(1, 2, 1), (2, 3, 1), (1, 4, 3), (3, 4, 3)])
    cc = ClusterCollection([{1, 2, 3}, {4}], g)
    w = cluster_weighting(g, cc)
    assert w[1] == w[2] == w[3] == 2 and w[4] == 6


def test_cluster_weighting_ignores_outside_and_sums_to_twice_edges():
    rng = random.Random(1)
    for _ in range(50):
        g, clusters = cluster_instance(rng, delta=rng.randint(1, 10))
        extra = max(g.vertices()) + 1
        g2 = g.add({extra: 1}, [(extra, 1, 2)])
        cc = ClusterCollection(clusters, g2)
        w = cluster_weighting(g2, cc)
        assert extra not in w
        h, _ = contract_clusters(g2, cc)
        assert sum(w.values()) == 2 * h.num_edges()


def test_model_layer_examples():
    g = WeightedMultigraph({1: Fraction(1, 2), 2: 1, 3: 2, 4: 3}, [(1, 2, 1), (2, 3, 1), (3, 4, 1), (4, 1, 1)])
    layer = model_layer(g, ThetaModel({1, 2}, {3, 4}, 2))
    assert all(layer(v) == Fraction(1, 2) for v in g.vertices())
    assert layer.alpha == 4 and layer.deleted == {1}
    tri = unit([(1, 2, 1), (2, 3, 1), (1, 3, 1)])
    layer = model_layer(tri, ThetaModel({1}, {2, 3}, 2))
    assert layer.deleted == {1, 2, 3}
    assert len(subtract_layer(tri, layer)) == 0


def test_model_layer_rejects_zero_weight_and_invalid():
    tri = WeightedMultigraph({1: 0, 2: 1, 3: 1}, [(1, 2, 1), (2, 3, 1), (1, 3, 1)])
    with pytest.raises(ValidationError):
        model_layer(tri, ThetaModel({1}, {2, 3}, 2))
    with pytest.raises(ValidationError):
        model_layer(tri, ThetaModel({1}, {2}, 2))


def _check_thin(g, layer, c):
    w = g.weights()
    assert all(0 <= layer(v) <= w[v] for v in g.vertices())
    assert any(layer(v) == w[v] and v in layer.layer_weight for v in g.vertices())
    oracle = oracle_for(g, c)
    wo = [layer(v) for v in oracle.order]
    total = layer.total()
    for S in oracle.minimal_covers():
        assert oracle.weight(S, wo) * layer.alpha >= total


def test_model_layer_is_thin():
    rng = random.Random(2)
    for _ in range(60):
        c = rng.choice([2, 3])
        g = random_graph(rng, rng.randint(2, 10), c, fractional=True)
        m = find_theta_model(g, c)
        if m is None:
            continue
        _check_thin(g, model_layer(g, minimize_model(g, m)), c)


def test_cluster_layer_singletons_alpha_four():
    rng = random.Random(3)
    g, _ = cluster_instance(rng, capacity=1, delta=16)
    layer = cluster_layer(g, ClusterCollection([{v} for v in g.vertices()], g), 2)
    assert layer.alpha == 4
    _check_thin(g, layer, 2)


def test_cluster_layer_needs_degree():
    g = unit([(1, 2, 1), (2, 3, 1), (1, 3, 1)])
    with pytest.raises(ValidationError, match="8c"):
        cluster_layer(g, ClusterCollection([{v} for v in g.vertices()], g), 2)


def test_cluster_layer_thin_and_sandwich():
    rng = random.Random(4)
    for _ in range(15):
        g, clusters = cluster_instance(rng, capacity=3, delta=16)
        cc = ClusterCollection(clusters, g)
        layer = cluster_layer(g, cc, 2)
        assert layer.alpha == 4 * cc.capacity
        _check_thin(g, layer, 2)
        h, _ = contract_clusters(g, cc)
        E = h.num_edges()
        eps = min(g.weight(v) / x for v, x in cluster_weighting(g, cc).items())
        oracle = oracle_for(g, 2)
        wo = [layer(v) for v in oracle.order]
        for S in oracle.minimal_covers():
            x = oracle.weight(S, wo)
            assert eps * E / (2 * cc.capacity) <= x <= 2 * eps * E


def test_edge_degree_weighting_examples():
    k4 = unit([(i, j, 1) for i in range(4) for j in range(i + 1, 4)])
    assert set(edge_degree_weighting(k4).values()) == {3}
    assert edge_degree_weighting(unit([(1, 2, 3)])) == {1: 3, 2: 3}


def test_edge_degree_bound_on_dense_graphs():
    rng = random.Random(5)
    for n, c in ((13, 2), (10, 3)):
        g = dense_instance(rng, n, c)
        d = edge_degree_weighting(g)
        E = g.num_edges()
        oracle = oracle_for(g, c)
        dw = [d[v] for v in oracle.order]
        for S in oracle.minimal_covers():
            x = oracle.weight(S, dw)
            assert E <= 2 * x <= 4 * E


def test_subtract_layer_examples():
    g = WeightedMultigraph({1: 2, 2: 3, 3: 5}, [(1, 2, 1), (2, 3, 1), (1, 3, 1)])
    layer = model_layer(g, ThetaModel({1}, {2, 3}, 2))
    h = subtract_layer(g, layer)
    assert set(h.vertices()) == {2, 3}
    for v in h.vertices():
        assert g.weight(v) == layer(v) + h.weight(v)
    for v in layer.deleted:
        assert g.weight(v) == layer(v)
