"""Replacing a large c-outgrowth by a small gadget with the same optimum.

For an outgrowth ``(K, u, v)`` let ``K_i`` be the anchored graph with ``i``
extra parallel u-v edges and ``T_i`` a lightest subset of ``K`` making
``K_i`` theta_c-minor-free.  The weights ``w_i = w(T_i)`` grow with ``i``
and ``w_0 = 0``.  The gadget is a path ``u, x_1, ..., x_(c-1), v`` with every
``x_i`` (``i >= 2``) also joined to ``u``; vertex ``x_i`` weighs ``w_i``, so
deleting ``x_i`` from the gadget costs exactly what ``T_i`` costs in ``K``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .detect import max_separating_theta, reverse_delete, verify_cover
from .errors import ValidationError
from .exact import DEFAULT_BUDGET, constrained_cover
from .multigraph import WeightedMultigraph
from .structure import Outgrowth, is_outgrowth


@dataclass(frozen=True)
class ReplacementRecord:
    anchors: tuple
    removed: frozenset
    gadget: tuple
    gadget_weights: tuple
    separators: tuple
    separator_weights: tuple
    c: int

    @property
    def gadget_edges(self) -> tuple:
        return gadget_edges(self.anchors, self.gadget)


def gadget_edges(anchors, xs) -> tuple:
    u, v = anchors
    if not xs:
        return ()
    path = [u, *xs, v]
    edges = [(path[j], path[j + 1], 1) for j in range(len(path) - 1)]
    edges += [(x, u, 1) for x in xs[1:]]
    return tuple(edges)


def separator_chain(g: WeightedMultigraph, og: Outgrowth, c: int, budget: int = DEFAULT_BUDGET):
    """``T_0..T_(c-1)`` and their weights; ``T_i`` handles ``i`` extra u-v edges."""
    u, v = og.anchors
    Kuv = og.anchored(g)
    ts, ws = [], []
    for i in range(c):
        T, w = constrained_cover(Kuv, u, v, c - 1 - i, c, budget)
        ts.append(T)
        ws.append(w)
    return tuple(ts), tuple(ws)


def replace_outgrowth(g: WeightedMultigraph, og: Outgrowth, c: int, budget: int = DEFAULT_BUDGET):
    """Swap ``og`` for the gadget; returns ``(g', record)``."""
    if not is_outgrowth(g, og, c):
        raise ValidationError(f"not a {c}-outgrowth: {sorted(og.component)} at {og.anchors}")
    if og.size < c:
        raise ValidationError(f"outgrowth of size {og.size} is smaller than c={c}")
    ts, ws = separator_chain(g, og, c, budget)
    xs = tuple(g.fresh_ids(c - 1))
    rec = ReplacementRecord(og.anchors, og.component, xs, ws[1:], ts, ws, c)
    return apply_replacement(g, rec), rec


def apply_replacement(g: WeightedMultigraph, rec: ReplacementRecord) -> WeightedMultigraph:
    h = g.delete_vertices(rec.removed)
    return h.add(dict(zip(rec.gadget, rec.gadget_weights)), rec.gadget_edges)


def lift_solution(g: WeightedMultigraph, rec: ReplacementRecord, S_prime) -> frozenset:
    """Turn a cover of the replaced graph into a cover of ``g`` that is no heavier."""
    c = rec.c
    h = apply_replacement(g, rec)
    S_prime = set(S_prime)
    if not S_prime <= set(h.vertices()) or not verify_cover(h, c, S_prime):
        raise ValidationError("solution is not a cover of the replaced graph")
    S_prime = reverse_delete(h, c, S_prime)
    u, v = rec.anchors
    gadget = set(rec.gadget)
    base = S_prime - gadget
    if u in S_prime or v in S_prime:
        S = base
    else:
        rest = h.delete_vertices(gadget | S_prime)
        level = max_separating_theta(rest, u, v, c)
        S = base | rec.separators[level]
    if not verify_cover(g, c, S):  # pragma: no cover - guarded by the replacement lemma
        raise AssertionError("lifted set is not a cover")
    return frozenset(S)
