"""Structural decomposition used by every round of the primal-dual loop.

Given a graph and an order ``c``, :func:`structure` returns one of

* a c-outgrowth with at least ``c`` vertices (:class:`LargeOutgrowth`),
* a small theta_c model (:class:`SmallModel`),
* a cluster collection whose contraction has minimum edge-degree at least
  ``t`` (:class:`Clusters`), or
* a certificate that the graph is theta_c-minor-free (:class:`ThetaFree`).

The practical parameters in :class:`StructureParams` are far below the
worst-case constants needed for the guarantee, so the cluster branch may
fail; :func:`structure` then falls back to an inclusion-minimal model,
which is always available when the graph is not theta_c-minor-free.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Union

from .detect import (
    BitGraph,
    ThetaModel,
    find_separating_model,
    find_theta_model,
    is_theta_free,
    is_valid_model,
    minimize_model,
    popcount,
)
from .errors import ValidationError
from .exact import DEFAULT_BUDGET, anchored_graph, constrained_cover
from .multigraph import ClusterCollection, WeightedMultigraph, contract_clusters, cut_vertices


@dataclass(frozen=True)
class Outgrowth:
    """A component ``K`` of ``G - {u, v}`` hanging off exactly ``u`` and ``v``."""

    component: frozenset
    anchors: tuple

    def __post_init__(self):
        object.__setattr__(self, "component", frozenset(self.component))
        object.__setattr__(self, "anchors", tuple(self.anchors))

    @property
    def size(self) -> int:
        return len(self.component)

    @property
    def closure(self) -> frozenset:
        return self.component | set(self.anchors)

    def anchored(self, g: WeightedMultigraph) -> WeightedMultigraph:
        u, v = self.anchors
        return anchored_graph(g, self.component, u, v)


def is_outgrowth(g: WeightedMultigraph, og: Outgrowth, c: int) -> bool:
    u, v = og.anchors
    K = og.component
    if u == v or u not in g or v not in g or u in K or v in K or not K:
        return False
    if not all(x in g for x in K):
        return False
    rest = g.delete_vertices([u, v])
    if K not in rest.components():
        return False
    if g.neighborhood(K) != {u, v}:
        return False
    return is_theta_free(og.anchored(g), c)


def outgrowths_at(g: WeightedMultigraph, c: int, u, v) -> list[Outgrowth]:
    """Every c-outgrowth anchored at ``u`` and ``v``."""
    bg = BitGraph.of(g)
    iu, iv = bg.index[g._check(u)], bg.index[g._check(v)]
    return list(_at(g, bg, c, iu, iv, 1, None))


def _at(g, bg, c, iu, iv, min_size, max_size):
    u, v = bg.order[iu], bg.order[iv]
    alive = bg.full & ~(1 << iu) & ~(1 << iv)
    for comp in bg.components(alive):
        size = popcount(comp)
        if size < min_size or (max_size is not None and size > max_size):
            continue
        nb = bg.neighbors_mask(comp)
        if nb != (1 << iu) | (1 << iv):
            continue
        og = Outgrowth(bg.verts(comp), (u, v))
        if is_theta_free(og.anchored(g), c):
            yield og


def iter_outgrowths(g: WeightedMultigraph, c: int, min_size: int = 1, max_size: int | None = None) -> Iterator[Outgrowth]:
    """c-outgrowths with size in ``[min_size, max_size]``, anchor pairs in lexicographic order."""
    bg = BitGraph.of(g)
    for iu in range(bg.n):
        for iv in range(iu + 1, bg.n):
            yield from _at(g, bg, c, iu, iv, min_size, max_size)


def find_outgrowth(g: WeightedMultigraph, c: int, min_size: int = 1) -> Outgrowth | None:
    return next(iter_outgrowths(g, c, min_size), None)


def strip_theta_free_blocks(g: WeightedMultigraph, c: int) -> WeightedMultigraph:
    """Repeatedly drop the non-cut vertices of theta_c-free blocks."""
    while True:
        cuts = cut_vertices(g)
        drop = set()
        for b in g.blocks():
            if is_theta_free(g.induced(b), c):
                drop |= {v for v in b if v not in cuts}
        if not drop:
            return g
        g = g.delete_vertices(drop)


# -- outcomes ------------------------------------------------------------


@dataclass(frozen=True)
class StructureParams:
    t: int
    k: int
    r: int
    model_bound: int

    def __post_init__(self):
        for name in ("t", "k", "r", "model_bound"):
            if getattr(self, name) < 1:
                raise ValidationError(f"{name} must be positive")

    @classmethod
    def default(cls, c: int, t: int | None = None, k: int | None = None, r: int | None = None,
                model_bound: int | None = None) -> "StructureParams":
        t = 8 * c if t is None else t
        k = t if k is None else k
        r = 4 * k if r is None else r
        B = 16 * c if model_bound is None else model_bound
        return cls(t, k, r, B)


@dataclass(frozen=True)
class LargeOutgrowth:
    outgrowth: Outgrowth


@dataclass(frozen=True)
class SmallModel:
    model: ThetaModel
    source: str = "decomposition"


@dataclass(frozen=True)
class Clusters:
    clusters: ClusterCollection


@dataclass(frozen=True)
class ThetaFree:
    pass


StructureOutcome = Union[LargeOutgrowth, SmallModel, Clusters, ThetaFree]


# -- 1-reduction ---------------------------------------------------------


@dataclass
class _Collapsed:
    outgrowth: Outgrowth
    multiplicity: int
    split: tuple | None  # separating (X, Y) of the anchored graph when multiplicity > 0


@dataclass
class Reduction:
    """Record of the small outgrowths collapsed into parallel edges.

    ``stages[j]`` lists the outgrowths removed in round ``j``; expansion
    replays the rounds backwards.
    """

    stages: list = field(default_factory=list)

    def __bool__(self):
        return any(self.stages)

    def expand_model(self, m: ThetaModel) -> ThetaModel:
        X, Y = set(m.x_side), set(m.y_side)
        for stage in reversed(self.stages):
            for item in stage:
                if not item.multiplicity:
                    continue
                u, v = item.outgrowth.anchors
                K = item.outgrowth.component
                xs, ys = item.split
                if u in X and v in X:
                    X |= K
                elif u in Y and v in Y:
                    Y |= K
                elif u in X and v in Y:
                    X |= xs - {u}
                    Y |= ys - {v}
                elif u in Y and v in X:
                    Y |= xs - {u}
                    X |= ys - {v}
        return ThetaModel(X, Y, m.order)

    def expand_clusters(self, clusters: list) -> list:
        cl = [set(C) for C in clusters]
        for stage in reversed(self.stages):
            for item in stage:
                if not item.multiplicity:
                    continue
                u, v = item.outgrowth.anchors
                K = item.outgrowth.component
                cu = next((C for C in cl if u in C), None)
                cv = next((C for C in cl if v in C), None)
                if cu is None or cv is None:
                    continue
                if cu is cv:
                    cu |= K
                else:
                    xs, ys = item.split
                    cu |= xs - {u}
                    cv |= ys - {v}
        return [frozenset(C) for C in cl]


def collapse_multiplicity(g: WeightedMultigraph, og: Outgrowth, c: int, budget: int = DEFAULT_BUDGET) -> int:
    """Smallest ``i`` whose constrained cover of the outgrowth is empty."""
    u, v = og.anchors
    Kuv = og.anchored(g)
    for i in range(c):
        T, _ = constrained_cover(Kuv, u, v, i, c, budget)
        if not T:
            return i
    raise AssertionError("anchored outgrowth graph contains a theta_c model")  # pragma: no cover


def _maximal(ogs: list) -> list:
    """Outgrowths no other outgrowth nests inside (closure as a proper subset)."""
    out = []
    for og in ogs:
        if not any(o is not og and o.closure < og.closure for o in ogs):
            out.append(og)
    return out


def reduce_to_1_reduced(g: WeightedMultigraph, c: int, budget: int = DEFAULT_BUDGET):
    """Collapse small c-outgrowths into parallel anchor edges until none remain.

    Returns the reduced graph and a :class:`Reduction` that maps models and
    cluster collections of the reduced graph back to ``g``.  Raises
    :class:`ValidationError` if ``g`` (or an intermediate graph) still has
    an outgrowth with ``c`` or more vertices.
    """
    red = Reduction()
    cur = g
    for _ in range(len(g) + 1):
        big = find_outgrowth(cur, c, c)
        if big is not None:
            raise ValidationError(
                f"outgrowth {sorted(big.component)} at {big.anchors} has size {big.size} >= c={c}"
            )
        small = list(iter_outgrowths(cur, c, 1, c - 1))
        if not small:
            return cur, red
        chosen: list = []
        used_k: set = set()
        used_anchor: set = set()
        for og in _maximal(small):
            if og.component & used_k or og.component & used_anchor or set(og.anchors) & used_k:
                continue
            chosen.append(og)
            used_k |= og.component
            used_anchor |= set(og.anchors)
        stage = []
        extra = []
        for og in chosen:
            i = collapse_multiplicity(cur, og, c, budget)
            split = None
            if i:
                u, v = og.anchors
                sep = find_separating_model(og.anchored(cur), u, v, i)
                split = (sep.x_side, sep.y_side)
                extra.append((u, v, i))
            stage.append(_Collapsed(og, i, split))
        red.stages.append(stage)
        cur = cur.delete_vertices(used_k).add(edges=extra)
    raise AssertionError("reduction did not terminate")  # pragma: no cover


# -- cluster merging -----------------------------------------------------


def merge_clusters(Z: WeightedMultigraph, A, B, k: int, c: int) -> ClusterCollection:
    """Attach private sets of B-vertices to every A-vertex.

    Each cluster is ``{a} + B_a`` with ``B_a`` a subset of the B-neighbours
    of ``a``; clusters have at most ``k + 1`` vertices and every cluster has
    at least ``k / c`` edges to the other clusters.
    """
    A, B = set(A), set(B)
    if A & B or A | B != set(Z.vertices()):
        raise ValidationError("A and B must partition the vertex set")
    if Z.max_multiplicity() >= c:
        raise ValidationError(f"multiplicity {Z.max_multiplicity()} >= c={c}")
    for a in A:
        if Z.edge_degree(a) < k:
            raise ValidationError(f"A-vertex {a!r} has edge-degree < k={k}")
    for b in B:
        if any(x in B for x in Z._adj[b]):
            raise ValidationError(f"B is not independent at {b!r}")
        if Z.vertex_degree(b) < 2:
            raise ValidationError(f"B-vertex {b!r} has vertex-degree < 2")

    order = sorted(A)
    attached: dict = {a: set() for a in order}
    owner: dict = {}

    def outward(a) -> int:
        cluster = attached[a] | {a}
        return sum(
            m
            for x in cluster
            for y, m in Z._adj[x].items()
            if y not in cluster and (y in A or y in owner)
        )

    limit = 10 * len(A) * (len(B) + 1) + 10
    for _ in range(limit):
        deficient = next((a for a in order if c * outward(a) < k), None)
        if deficient is None:
            return ClusterCollection([frozenset({a} | attached[a]) for a in order], Z)
        a = deficient
        for b in attached[a]:
            del owner[b]
        attached[a] = set()
        p = outward(a)
        if c * p >= k:
            continue
        need = k - p
        free = sorted(
            (b for b in Z._adj[a] if b in B and b not in owner),
            key=lambda b: (-Z._adj[a][b], b),
        )
        pick, got = [], 0
        for b in free:
            if got >= need:
                break
            pick.append(b)
            got += Z._adj[a][b]
        if got < need:
            raise ValidationError(f"cannot give A-vertex {a!r} enough B-neighbours")
        for b in sorted(pick, key=lambda b: (Z._adj[a][b], b)):
            if got - Z._adj[a][b] >= need:
                pick.remove(b)
                got -= Z._adj[a][b]
        attached[a] = set(pick)
        for b in pick:
            owner[b] = a
    raise ValidationError("cluster merging did not converge")


# -- decomposition of 1-reduced graphs -----------------------------------


def _induced_paths(h: WeightedMultigraph, allowed: set, r: int, step_cap: int = 200_000) -> list:
    """Greedy maximal packing of vertex-disjoint induced paths on ``r`` vertices."""
    packed = []
    free = set(allowed)
    steps = [0]

    def extend(path, inpath):
        if len(path) == r:
            return list(path)
        steps[0] += 1
        if steps[0] > step_cap:
            return None
        last = path[-1]
        for y in sorted(h._adj[last]):
            if y not in free or y in inpath:
                continue
            if any(z in inpath and z != last for z in h._adj[y]):
                continue
            path.append(y)
            inpath.add(y)
            found = extend(path, inpath)
            if found:
                return found
            path.pop()
            inpath.discard(y)
        return None

    for s in sorted(allowed):
        if s not in free:
            continue
        found = extend([s], {s})
        if found:
            packed.append(found)
            free -= set(found)
        if steps[0] > step_cap:
            break
    return packed


def _model_in(g: WeightedMultigraph, vs, c: int):
    m = find_theta_model(g.induced(vs), c)
    return None if m is None else SmallModel(m)


def decompose_1_reduced(g: WeightedMultigraph, c: int, params: StructureParams, check: bool = True):
    """Small model or dense cluster collection of a 1-reduced graph.

    Returns a :class:`SmallModel`, a :class:`Clusters`, :class:`ThetaFree`
    when block stripping leaves nothing, or ``None`` when the parameters are
    too small for the construction to reach minimum degree ``params.t``.
    """
    if check and find_outgrowth(g, c, 1) is not None:
        raise ValidationError("graph is not 1-reduced")
    for u, v, m in g.edges():
        if m >= c:
            return SmallModel(ThetaModel({u}, {v}, c))
    h = strip_theta_free_blocks(g, c)
    if len(h) == 0:
        return ThetaFree()
    k, r = params.k, params.r
    W = {v for v in h.vertices() if h.edge_degree(v) >= k}
    paths = _induced_paths(h, set(h.vertices()) - W, r)
    in_paths = set().union(*map(set, paths)) if paths else set()
    comps = h.components(set(h.vertices()) - W - in_paths)

    parts = [frozenset({w}) for w in sorted(W)] + [frozenset(p) for p in paths] + list(comps)
    kind = ["W"] * len(W) + ["P"] * len(paths) + ["C"] * len(comps)
    label = {}
    for idx, part in enumerate(parts):
        for v in part:
            label[v] = idx
    between: dict = {}
    for u, v, m in h.edges():
        a, b = label[u], label[v]
        if a != b:
            key = (min(a, b), max(a, b))
            between[key] = between.get(key, 0) + m
    for (a, b), m in sorted(between.items()):
        if m >= c:
            return SmallModel(ThetaModel(parts[a], parts[b], c))
    part_nbrs: dict = {i: set() for i in range(len(parts))}
    for a, b in between:
        part_nbrs[a].add(b)
        part_nbrs[b].add(a)

    good, bad = [], []
    for idx, C in enumerate(parts):
        if kind[idx] != "C":
            continue
        deg = len(part_nbrs[idx])
        if deg == 0:
            found = _model_in(h, C, c)
            if found is not None:
                return found
            return None
        if deg == 1:
            (nb,) = part_nbrs[idx]
            if kind[nb] == "W":
                found = _model_in(h, C | parts[nb], c)
                if found is not None:
                    return found
                return None
            bad.append(idx)
        else:
            good.append(idx)

    bad_union = set().union(*(parts[i] for i in bad)) if bad else set()
    for idx, P in enumerate(parts):
        if kind[idx] != "P":
            continue
        black = [v for v in P if all(y in P or y in bad_union for y in h._adj[v])]
        if black:
            region = set(P) | set().union(*(parts[i] for i in bad if idx in part_nbrs[i]))
            found = _model_in(h, region, c)
            if found is not None:
                return found

    keep = [parts[i] for i in range(len(parts)) if kind[i] in ("W", "P")] + [parts[i] for i in good]
    if not keep:
        return None
    cc1 = ClusterCollection(keep, h)
    Z, prov = contract_clusters(h, cc1)
    if Z.max_multiplicity() >= c:
        u, v, _ = max(Z.edges(), key=lambda e: e[2])
        return SmallModel(ThetaModel(prov[u], prov[v], c))
    back = {frozenset(C): z for z, C in prov.items()}
    A = {back[parts[i]] for i in range(len(parts)) if kind[i] in ("W", "P")}
    B = {back[parts[i]] for i in good}
    try:
        cc2 = merge_clusters(Z, A, B, k, c)
    except ValidationError:
        return None
    merged = [frozenset().union(*(prov[z] for z in C)) for C in cc2.clusters]
    cc3 = ClusterCollection(merged, g)
    h3, _ = contract_clusters(g, cc3)
    if h3.min_edge_degree() < params.t or cc3.capacity > params.model_bound:
        return None
    return Clusters(cc3)


# -- the four-way decomposition ------------------------------------------


def structure(g: WeightedMultigraph, c: int, params: StructureParams | None = None,
              budget: int = DEFAULT_BUDGET) -> StructureOutcome:
    """Theta_c-freeness, large outgrowth, small model, or dense clusters.

    Freeness is tested first so that a model-free graph is never reported
    through one of its (harmless) outgrowths.
    """
    params = params or StructureParams.default(c)
    model = find_theta_model(g, c)
    if model is None:
        return ThetaFree()
    og = find_outgrowth(g, c, c)
    if og is not None:
        return LargeOutgrowth(og)
    try:
        g2, red = reduce_to_1_reduced(g, c, budget)
        res = decompose_1_reduced(g2, c, params, check=False)
    except ValidationError:
        res = None
    if isinstance(res, SmallModel):
        m = red.expand_model(res.model)
        if is_valid_model(g, m):
            m = minimize_model(g, m)
            if len(m) <= params.model_bound:
                return SmallModel(m, "decomposition")
    elif isinstance(res, Clusters):
        cl = red.expand_clusters(res.clusters.clusters)
        try:
            cc = ClusterCollection(cl, g)
        except ValidationError:
            cc = None
        if cc is not None and cc.capacity <= params.model_bound:
            h, _ = contract_clusters(g, cc)
            if h.min_edge_degree() >= params.t:
                return Clusters(cc)
    return SmallModel(minimize_model(g, model), "fallback")


def clusters_ratio(cc: ClusterCollection) -> Fraction:
    return Fraction(4 * cc.capacity)
