import random

import pytest

from bondcover.detect import find_theta_model, is_theta_free, is_valid_model
from bondcover.errors import ValidationError
from bondcover.instance import gadget_chain
from bondcover.multigraph import WeightedMultigraph, contract_clusters, cut_vertices
from bondcover.structure import (
    Clusters,
    LargeOutgrowth,
    Outgrowth,
    SmallModel,
    StructureParams,
    ThetaFree,
    decompose_1_reduced,
    find_outgrowth,
    is_outgrowth,
    iter_outgrowths,
    merge_clusters,
    outgrowths_at,
    reduce_to_1_reduced,
    strip_theta_free_blocks,
    structure,
)

from oracles import random_graph


def unit(edges, n=None):
    vs = {x for e in edges for x in e[:2]} | set(range(1, (n or 0) + 1))
    return WeightedMultigraph({v: 1 for v in vs}, edges)


def cycle(k):
    return unit([(i, i % k + 1, 1) for i in range(1, k + 1)])


def complete(n, m=1):
    return unit([(i, j, m) for i in range(1, n + 1) for j in range(i + 1, n + 1)])


# -- outgrowths ------------------------------------------------------------


def test_six_cycle_outgrowth_at_anchors():
    ogs = outgrowths_at(cycle(6), 2, 1, 4)
    assert Outgrowth({2, 3}, (1, 4)) in ogs
    assert all(og.size == 2 for og in ogs)


def test_absent_outgrowths():
    assert find_outgrowth(unit([(1, 2, 3)]), 3, 1) is None
    assert find_outgrowth(cycle(3), 2, 2) is None
    assert find_outgrowth(cycle(3), 2, 1) is not None


def test_outgrowth_validator():
    g = cycle(6)
    assert is_outgrowth(g, Outgrowth({2, 3}, (1, 4)), 2)
    assert not is_outgrowth(g, Outgrowth({2}, (1, 4)), 2)
    assert not is_outgrowth(complete(4), Outgrowth({3, 4}, (1, 2)), 2)


def test_enumeration_matches_definition():
    rng = random.Random(3)
    for _ in range(60):
        g = random_graph(rng, rng.randint(3, 8), 3, p=0.4)
        c = rng.choice([2, 3])
        found = set(iter_outgrowths(g, c))
        vs = list(g.vertices())
        for i, u in enumerate(vs):
            for v in vs[i + 1:]:
                for K in g.delete_vertices([u, v]).components():
                    og = Outgrowth(K, (u, v))
                    assert (og in found) == is_outgrowth(g, og, c)


# -- block stripping -------------------------------------------------------


def test_strip_examples():
    tree = unit([(1, 2, 1), (2, 3, 1), (2, 4, 1), (4, 5, 1)])
    assert len(strip_theta_free_blocks(tree, 2)) == 0
    lolly = unit([(1, 2, 1), (2, 3, 1), (1, 3, 1), (3, 4, 1), (4, 5, 1)])
    assert set(strip_theta_free_blocks(lolly, 2).vertices()) == {1, 2, 3}
    bowtie = unit([(1, 2, 1), (2, 3, 1), (1, 3, 1), (1, 4, 1), (4, 5, 1), (1, 5, 1)])
    assert strip_theta_free_blocks(bowtie, 2) == bowtie


def test_strip_reaches_fixpoint():
    rng = random.Random(4)
    for _ in range(60):
        g = random_graph(rng, rng.randint(2, 10), 3, p=0.3)
        c = rng.choice([2, 3])
        h = strip_theta_free_blocks(g, c)
        assert is_theta_free(h, c) == is_theta_free(g, c)
        cuts = cut_vertices(h)
        for b in h.blocks():
            # a model-free block survives only as a link between other blocks
            assert not is_theta_free(h.induced(b), c) or b <= cuts


# -- 1-reduction -----------------------------------------------------------


def test_reduce_four_cycle():
    g = cycle(4)
    h, red = reduce_to_1_reduced(g, 3)
    assert set(h.vertices()) == {1, 3}
    assert h.multiplicity(1, 3) == 2
    assert [og.multiplicity for og in red.stages[0]] == [1, 1]


def test_reduce_identity_on_reduced_graph():
    g = complete(5)
    h, red = reduce_to_1_reduced(g, 2)
    assert h == g and not red


def test_reduce_rejects_large_outgrowth():
    with pytest.raises(ValidationError, match="size"):
        reduce_to_1_reduced(cycle(6), 2)


def test_reduction_preserves_freeness_and_expands_models():
    rng = random.Random(5)
    seen = 0
    for seed in range(60):
        c = rng.choice([3, 4])
        g = gadget_chain(rng.randint(2, 4), rng.randint(1, c - 1), c, seed, chords=rng.randint(0, 3))
        if find_outgrowth(g, c, c) is not None:
            continue
        h, red = reduce_to_1_reduced(g, c)
        assert find_outgrowth(h, c, 1) is None
        assert is_theta_free(h, c) == is_theta_free(g, c)
        m = find_theta_model(h, c)
        if m is not None:
            assert is_valid_model(g, red.expand_model(m))
            seen += 1
    assert seen > 10


# -- cluster merging -------------------------------------------------------


def test_merge_without_b():
    Z = complete(5)
    cc = merge_clusters(Z, set(Z.vertices()), set(), 4, 2)
    assert sorted(map(sorted, cc.clusters)) == [[v] for v in range(1, 6)]


def test_merge_star_of_stars():
    a1, a2 = 1, 2
    Z = unit([(a1, a2, 1)] + [(a, b, 1) for a in (a1, a2) for b in (3, 4, 5)])
    cc = merge_clusters(Z, {a1, a2}, {3, 4, 5}, 2, 2)
    assert cc.capacity <= 3
    h, _ = contract_clusters(Z, cc)
    assert 2 * h.min_edge_degree() >= 2


def _random_merge_input(rng):
    c = rng.choice([2, 3])
    k = rng.randint(2, 6)
    A = list(range(1, rng.randint(2, 6) + 1))
    B = list(range(len(A) + 1, len(A) + rng.randint(0, 6) + 1))
    k = min(k, (c - 1) * (len(A) + len(B) - 1))
    edges = {}
    for b in B:
        for a in rng.sample(A, rng.randint(2, len(A))):
            edges[(a, b)] = rng.randint(1, c - 1)
    for a in A:
        deg = sum(m for (x, y), m in edges.items() if a in (x, y))
        others = [x for x in A + B if x != a]
        while deg < k:
            y = rng.choice([x for x in others if edges.get((min(a, x), max(a, x)), 0) < c - 1])
            key = (min(a, y), max(a, y))
            edges[key] = edges.get(key, 0) + 1
            deg += 1
    Z = WeightedMultigraph({v: 1 for v in A + B}, [(x, y, m) for (x, y), m in edges.items()])
    return Z, set(A), set(B), k, c


def test_merge_conclusions_on_random_inputs():
    rng = random.Random(6)
    for _ in range(200):
        Z, A, B, k, c = _random_merge_input(rng)
        cc = merge_clusters(Z, A, B, k, c)
        assert sorted(v for C in cc.clusters for v in C if v in A) == sorted(A)
        assert all(len(C & A) == 1 for C in cc.clusters)
        assert cc.capacity <= k + 1
        h, _ = contract_clusters(Z, cc)
        assert c * h.min_edge_degree() >= k


def test_merge_rejects_bad_input():
    Z = unit([(1, 2, 2), (2, 3, 1)])
    with pytest.raises(ValidationError):
        merge_clusters(Z, {1, 2}, {3}, 1, 2)  # multiplicity >= c
    Z = unit([(1, 2, 1), (2, 3, 1), (1, 3, 1)])
    with pytest.raises(ValidationError):
        merge_clusters(Z, {1}, {2, 3}, 1, 2)  # B not independent
    with pytest.raises(ValidationError):
        merge_clusters(Z, {1, 2}, {3}, 5, 2)  # degree below k
    with pytest.raises(ValidationError):
        merge_clusters(Z, {1}, {2}, 1, 2)  # not a partition


# -- decomposition ---------------------------------------------------------


def test_decompose_heavy_edge():
    g = unit([(1, 2, 3), (1, 3, 1), (1, 4, 1), (2, 3, 1), (2, 4, 1), (3, 4, 1)])
    out = decompose_1_reduced(g, 3, StructureParams.default(3))
    assert isinstance(out, SmallModel) and len(out.model) == 2


def test_decompose_dense_gives_clusters():
    g = complete(18)
    out = decompose_1_reduced(g, 2, StructureParams.default(2, t=16, k=4, r=4))
    assert isinstance(out, Clusters)
    h, _ = contract_clusters(g, out.clusters)
    assert h.min_edge_degree() >= 16


def test_decompose_rejects_unreduced():
    with pytest.raises(ValidationError):
        decompose_1_reduced(cycle(5), 2, StructureParams.default(2))


def test_decompose_outputs_are_valid():
    rng = random.Random(8)
    kinds = set()
    for _ in range(80):
        n = rng.randint(6, 16)
        g = random_graph(rng, n, 2, p=rng.uniform(0.4, 0.9), max_mult=1)
        if find_outgrowth(g, 2, 1) is not None:
            continue
        params = StructureParams.default(2, t=rng.choice([2, 4, 8]), k=rng.choice([2, 4]), r=rng.choice([2, 3, 8]))
        out = decompose_1_reduced(g, 2, params)
        kinds.add(type(out).__name__)
        if isinstance(out, SmallModel):
            assert is_valid_model(g, out.model)
        elif isinstance(out, Clusters):
            h, _ = contract_clusters(g, out.clusters)
            assert h.min_edge_degree() >= params.t
            assert out.clusters.capacity <= params.model_bound
    assert "Clusters" in kinds


# -- the four-way outcome --------------------------------------------------


def test_structure_examples():
    assert isinstance(structure(unit([(i, i + 1, 1) for i in range(1, 5)]), 2), ThetaFree)
    out = structure(unit([(1, 2, 3)]), 3)
    assert isinstance(out, SmallModel) and len(out.model) == 2
    out = structure(cycle(6), 2)
    assert isinstance(out, LargeOutgrowth) and out.outgrowth.size >= 2


def test_params_validation():
    with pytest.raises(ValidationError):
        StructureParams(0, 1, 1, 1)
    p = StructureParams.default(3)
    assert (p.t, p.k, p.r, p.model_bound) == (24, 24, 96, 48)


def test_structure_outcomes_satisfy_invariants():
    rng = random.Random(9)
    for _ in range(150):
        c = rng.choice([2, 3, 4])
        g = random_graph(rng, rng.randint(1, 12), c, p=rng.uniform(0.1, 0.8))
        params = StructureParams.default(c)
        out = structure(g, c, params)
        if isinstance(out, LargeOutgrowth):
            assert is_outgrowth(g, out.outgrowth, c) and out.outgrowth.size >= c
        elif isinstance(out, SmallModel):
            assert is_valid_model(g, out.model)
            if out.source == "decomposition":
                assert len(out.model) <= params.model_bound
        elif isinstance(out, Clusters):
            h, _ = contract_clusters(g, out.clusters)
            assert h.min_edge_degree() >= params.t
            assert out.clusters.capacity <= params.model_bound
        else:
            assert is_theta_free(g, c)
