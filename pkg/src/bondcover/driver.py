"""The primal-dual peeling loop and backward reconstruction.

Forward pass: at every round the structure step either finds a large
outgrowth (which the replacer shrinks) or yields a model or a dense cluster
collection from which a thin layer of weight is peeled; vertices whose
weight is used up disappear.  The loop stops once the graph is
theta_c-minor-free.  Backward pass: starting from the empty cover, each
layer adds the vertices it removed and each replacement lifts the cover
through the gadget.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Union

from .detect import find_theta_model, minimize_model, reverse_delete, verify_cover
from .errors import ValidationError
from .exact import DEFAULT_BUDGET
from .multigraph import WeightedMultigraph
from .replacer import ReplacementRecord, apply_replacement, lift_solution, replace_outgrowth
from .structure import Clusters, LargeOutgrowth, SmallModel, StructureParams, ThetaFree, structure
from .weighting import ThinLayer, cluster_layer, model_layer, subtract_layer

__all__ = [
    "SolveConfig", "Snapshot", "Layer", "Replacement", "PeelTrace", "SolveResult",
    "solve", "reconstruct", "verify_cover",
]


@dataclass(frozen=True)
class SolveConfig:
    c: int
    t: int | None = None
    k: int | None = None
    r: int | None = None
    model_bound: int | None = None
    reverse_delete: bool = False
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        if self.c < 1:
            raise ValidationError("c must be positive")
        if self.t is not None and self.t < 1:
            raise ValidationError("t must be positive")

    @property
    def params(self) -> StructureParams:
        return StructureParams.default(self.c, self.t, self.k, self.r, self.model_bound)


@dataclass(frozen=True)
class Snapshot:
    """Vertex set and weights of the graph an event was applied to."""

    vertices: frozenset
    weights: tuple

    @classmethod
    def of(cls, g: WeightedMultigraph) -> "Snapshot":
        return cls(frozenset(g.vertices()), tuple(sorted(g.weights().items())))


@dataclass(frozen=True)
class Layer:
    layer: ThinLayer
    deleted: frozenset
    snapshot: Snapshot


@dataclass(frozen=True)
class Replacement:
    record: ReplacementRecord
    snapshot: Snapshot


Event = Union[Layer, Replacement]


@dataclass
class PeelTrace:
    c: int
    events: list = field(default_factory=list)

    @property
    def realized_alpha(self) -> Fraction:
        alphas = [e.layer.alpha for e in self.events if isinstance(e, Layer) and e.layer.kind != "zero"]
        return max(alphas, default=Fraction(1))

    def summary(self) -> dict:
        out: dict = {}
        for e in self.events:
            key = "replacement" if isinstance(e, Replacement) else e.layer.kind
            out[key] = out.get(key, 0) + 1
        return out

    def chain(self, g: WeightedMultigraph) -> list:
        """Replay the events from ``g``: the graphs ``G_1, ..., G_(l+1)``."""
        graphs = [g]
        for e in self.events:
            cur = graphs[-1]
            if Snapshot.of(cur) != e.snapshot:
                raise ValidationError(f"trace does not match graph at event {len(graphs) - 1}")
            if isinstance(e, Layer):
                nxt = subtract_layer(cur, e.layer)
                if set(cur.vertices()) - set(nxt.vertices()) != e.deleted:
                    raise ValidationError(f"layer {len(graphs) - 1} deletes a different set")
            else:
                nxt = apply_replacement(cur, e.record)
            graphs.append(nxt)
        return graphs


class SolveResult(NamedTuple):
    cover: frozenset
    weight: Fraction
    trace: PeelTrace
    realized_alpha: Fraction


def _zero_layer(g: WeightedMultigraph) -> ThinLayer | None:
    zeros = frozenset(v for v in g.vertices() if g.weight(v) == 0)
    if not zeros:
        return None
    return ThinLayer({v: Fraction(0) for v in zeros}, Fraction(1), zeros, "zero")


def _fallback_layer(g: WeightedMultigraph, c: int) -> ThinLayer:
    return model_layer(g, minimize_model(g, find_theta_model(g, c)))


def solve(g: WeightedMultigraph, cfg: SolveConfig) -> SolveResult:
    """Approximate minimum-weight c-bond cover of ``g``."""
    c = cfg.c
    params = cfg.params
    trace = PeelTrace(c)
    cur = g
    for _ in range(2 * len(g) + 1):
        layer = _zero_layer(cur)
        if layer is None:
            out = structure(cur, c, params, cfg.budget)
            if isinstance(out, ThetaFree):
                break
            if isinstance(out, LargeOutgrowth):
                nxt, rec = replace_outgrowth(cur, out.outgrowth, c, cfg.budget)
                trace.events.append(Replacement(rec, Snapshot.of(cur)))
                cur = nxt
                continue
            if isinstance(out, SmallModel):
                layer = model_layer(cur, out.model)
            elif isinstance(out, Clusters):
                try:
                    layer = cluster_layer(cur, out.clusters, c)
                except ValidationError:
                    layer = _fallback_layer(cur, c)
        nxt = subtract_layer(cur, layer)
        trace.events.append(Layer(layer, frozenset(cur.vertices()) - frozenset(nxt.vertices()), Snapshot.of(cur)))
        cur = nxt
    else:  # pragma: no cover - every event shrinks the graph
        raise AssertionError("peeling loop did not terminate")
    S = reconstruct(trace, g, cfg.reverse_delete)
    if not verify_cover(g, c, S):  # pragma: no cover
        raise AssertionError("reconstructed set is not a cover")
    return SolveResult(S, g.total_weight(S), trace, trace.realized_alpha)


def reconstruct(trace: PeelTrace, g: WeightedMultigraph, reverse_delete_on: bool = False) -> frozenset:
    """Walk the trace backwards from the empty cover of the final graph."""
    chain = trace.chain(g)
    if not verify_cover(chain[-1], trace.c, ()):
        raise ValidationError("trace does not end in a theta_c-minor-free graph")
    S: frozenset = frozenset()
    for e, gi in zip(reversed(trace.events), reversed(chain[:-1])):
        if isinstance(e, Layer):
            S = S | e.deleted
            if reverse_delete_on:
                S = reverse_delete(gi, trace.c, S)
        else:
            S = lift_solution(gi, e.record, S)
    return S
