"""Exact minimum-weight c-bond covers for small graphs.

The solver is a branch-and-bound over hitting sets: every cover must hit
every theta_c model, so at each node we find an inclusion-minimal model
and branch on which of its vertices to delete.  Vertex-disjoint models give
an additive lower bound.  A node budget turns a runaway search into a
:class:`BudgetExceededError` instead of a silent wrong answer.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

from .detect import BitGraph, find_model_mask, iter_bits, minimize_mask
from .errors import BudgetExceededError, ValidationError
from .multigraph import WeightedMultigraph

DEFAULT_BUDGET = 10**7
ENUMERATION_LIMIT = 22


def _integer_weights(g: WeightedMultigraph):
    ws = [g.weight(v) for v in g.vertices()]
    scale = 1
    for w in ws:
        scale = lcm(scale, w.denominator)
    return [int(w * scale) for w in ws], scale


class _Search:
    def __init__(self, g: WeightedMultigraph, c: int, budget: int, forced_keep: int = 0):
        self.bg = BitGraph.of(g)
        self.c = c
        self.w, self.scale = _integer_weights(g)
        self.budget = budget
        self.nodes = 0
        self.forced_keep = forced_keep

    def weight(self, mask: int) -> int:
        w = self.w
        return sum(w[i] for i in iter_bits(mask))

    def greedy(self) -> int | None:
        """A feasible cover: repeatedly delete the lightest deletable vertex of a minimal model."""
        bg, c = self.bg, self.c
        alive = bg.full
        chosen = 0
        while True:
            m = find_model_mask(bg, alive, c)
            if m is None:
                break
            x, y = minimize_mask(bg, m, c)
            cand = (x | y) & ~self.forced_keep
            if not cand:
                return None
            i = min(iter_bits(cand), key=lambda j: (self.w[j], j))
            chosen |= 1 << i
            alive &= ~(1 << i)
        # reverse delete, heaviest first
        for i in sorted(iter_bits(chosen), key=lambda j: (-self.w[j], j)):
            trial = chosen & ~(1 << i)
            if find_model_mask(bg, bg.full & ~trial, c) is None:
                chosen = trial
        return chosen

    def run(self):
        start = self.greedy()
        if start is None:
            return None
        self.best_mask = start
        self.best_w = self.weight(start)
        self._rec(self.bg.full, self.forced_keep, 0, 0)
        return self.best_mask

    def _rec(self, alive, kept, acc, chosen):
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceededError(self.budget)
        bg, c, w = self.bg, self.c, self.w
        lb = 0
        rest = alive
        branch = None
        branch_size = None
        while True:
            m = find_model_mask(bg, rest, c)
            if m is None:
                break
            mm = m[0] | m[1]
            d = mm & ~kept
            if not d:
                return
            lb += min(w[i] for i in iter_bits(d))
            size = bin(d).count("1")
            if branch is None or size < branch_size:
                branch, branch_size = m, size
            rest &= ~mm
        if branch is None:
            if acc < self.best_w:
                self.best_w, self.best_mask = acc, chosen
            return
        if acc + lb >= self.best_w:
            return
        x, y = minimize_mask(bg, branch, c)
        d = (x | y) & ~kept
        if not d:
            return
        for i in sorted(iter_bits(d), key=lambda j: (w[j], j)):
            b = 1 << i
            if acc + w[i] < self.best_w:
                self._rec(alive & ~b, kept, acc + w[i], chosen | b)
            kept |= b


def _enumerate(g: WeightedMultigraph, c: int, forced_keep: int = 0):
    bg = BitGraph.of(g)
    w, _ = _integer_weights(g)
    best = None
    best_w = None
    for s in range(1 << bg.n):
        if s & forced_keep:
            continue
        ws = sum(w[i] for i in iter_bits(s))
        if best_w is not None and ws >= best_w:
            continue
        if find_model_mask(bg, bg.full & ~s, c) is None:
            best, best_w = s, ws
    return best


def exact_cover(g: WeightedMultigraph, c: int, budget: int = DEFAULT_BUDGET, method: str = "bnb"):
    """Minimum-weight c-bond cover of ``g`` as ``(vertex set, weight)``.

    ``method="enumerate"`` runs plain subset enumeration instead of the
    branch-and-bound (only for graphs with at most 22 vertices).
    """
    if c < 1:
        raise ValidationError("c must be positive")
    if method == "bnb":
        search = _Search(g, c, budget)
        mask = search.run()
    elif method == "enumerate":
        if len(g) > ENUMERATION_LIMIT:
            raise BudgetExceededError(budget, f"enumeration limited to {ENUMERATION_LIMIT} vertices")
        mask = _enumerate(g, c)
    else:
        raise ValidationError(f"unknown method {method!r}")
    S = BitGraph.of(g).verts(mask)
    return S, g.total_weight(S)


def opt(g: WeightedMultigraph, c: int, budget: int = DEFAULT_BUDGET) -> Fraction:
    return exact_cover(g, c, budget)[1]


def anchored_graph(g: WeightedMultigraph, K, u, v) -> WeightedMultigraph:
    """``K^(u,v)``: the graph induced on ``K + {u, v}`` without the u-v edges."""
    return g.induced(set(K) | {u, v}).remove_edges([(u, v)])


def constrained_cover(Kuv: WeightedMultigraph, u, v, i: int, c: int, budget: int = DEFAULT_BUDGET):
    """Lightest ``T`` inside ``K = V(Kuv) - {u, v}`` killing every theta_(i+1) model that separates u and v.

    ``Kuv`` is the anchored outgrowth graph.  Following the usual reduction,
    u and v are joined by ``c`` parallel edges, made too heavy to delete, and
    the result is solved exactly for order ``c + i + 1``.
    """
    if not 0 <= i < c:
        raise ValidationError(f"i={i} outside 0..{c - 1}")
    if Kuv.multiplicity(u, v):
        raise ValidationError("anchored graph must not contain u-v edges")
    inner = [x for x in Kuv.vertices() if x not in (u, v)]
    heavy = Kuv.total_weight(inner) + 1
    h = Kuv.with_weights({u: heavy, v: heavy}).add(edges=[(u, v, c)])
    search = _Search(h, c + i + 1, budget)
    mask = search.run()
    T = search.bg.verts(mask)
    if u in T or v in T:  # pragma: no cover - deleting all of K is always cheaper
        raise AssertionError("anchor selected by constrained cover")
    return T, Kuv.total_weight(T)
