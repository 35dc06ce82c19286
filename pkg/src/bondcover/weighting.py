"""Weighting schemes and thin layers for the primal-dual loop."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .detect import ThetaModel, validate_model
from .errors import ValidationError
from .multigraph import ClusterCollection, WeightedMultigraph, contract_clusters


@dataclass(frozen=True)
class ThinLayer:
    """A weight function ``layer_weight`` peeled off the current graph.

    Vertices missing from ``layer_weight`` carry layer weight zero.
    ``deleted`` lists the vertices whose weight is used up completely.
    """

    layer_weight: dict
    alpha: Fraction
    deleted: frozenset
    kind: str = "model"
    source: object = field(default=None, compare=False)

    def __call__(self, v) -> Fraction:
        return self.layer_weight.get(v, Fraction(0))

    def total(self, vs=None) -> Fraction:
        if vs is None:
            return sum(self.layer_weight.values(), Fraction(0))
        return sum((self(v) for v in vs), Fraction(0))


def cluster_weighting(g: WeightedMultigraph, cc: ClusterCollection) -> dict:
    """Give every vertex of cluster ``C`` the weight ``|ext(C)| / |C|``.

    ``ext`` only counts edges that stay inside the union of the clusters.
    """
    if cc.host is not g:
        cc = ClusterCollection(cc.clusters, g)
    out = {}
    for C in cc.clusters:
        share = Fraction(cc.ext(C), len(C))
        for v in C:
            out[v] = share
    return out


def _require_positive(g: WeightedMultigraph, vs):
    zero = sorted(v for v in vs if g.weight(v) == 0)
    if zero:
        raise ValidationError(f"zero-weight vertices {zero} must be removed first")


def model_layer(g: WeightedMultigraph, m: ThetaModel) -> ThinLayer:
    """Uniform layer on the model's vertices at the smallest model weight."""
    validate_model(g, m)
    M = m.vertices
    _require_positive(g, M)
    eps = min(g.weight(v) for v in M)
    return ThinLayer(
        {v: eps for v in M},
        Fraction(len(M)),
        frozenset(v for v in M if g.weight(v) == eps),
        "model",
        m,
    )


def contracted_min_degree(g: WeightedMultigraph, cc: ClusterCollection) -> int:
    h, _ = contract_clusters(g, cc)
    return h.min_edge_degree()


def cluster_layer(g: WeightedMultigraph, cc: ClusterCollection, c: int) -> ThinLayer:
    """Layer proportional to the cluster weighting, scaled until some vertex is used up.

    Requires every contracted cluster to have edge-degree at least ``8c``.
    """
    if cc.host is not g:
        cc = ClusterCollection(cc.clusters, g)
    delta = contracted_min_degree(g, cc)
    if delta < 8 * c:
        raise ValidationError(f"contracted minimum edge-degree {delta} < 8c = {8 * c}")
    wc = cluster_weighting(g, cc)
    _require_positive(g, wc)
    eps = min(g.weight(v) / wc[v] for v in wc)
    layer = {v: eps * x for v, x in wc.items()}
    return ThinLayer(
        layer,
        Fraction(4 * cc.capacity),
        frozenset(v for v in wc if layer[v] == g.weight(v)),
        "clusters",
        cc,
    )


def edge_degree_weighting(g: WeightedMultigraph) -> dict:
    return {v: g.edge_degree(v) for v in g.vertices()}


def subtract_layer(g: WeightedMultigraph, layer: ThinLayer) -> WeightedMultigraph:
    """Residual graph: weights minus the layer, with used-up vertices removed."""
    residual = {}
    for v, x in layer.layer_weight.items():
        r = g.weight(v) - x
        if r < 0:
            raise ValidationError(f"layer exceeds weight at {v!r}")
        residual[v] = r
    h = g.with_weights(residual)
    return h.delete_vertices(v for v, r in residual.items() if r == 0)
