"""Exact detection of theta_c models.

A theta_c model is a pair of disjoint connected vertex sets ``X`` and ``Y``
with at least ``c`` edges (counted with multiplicity) between them.  A
graph has one iff it has a bond (minimal cut) of size at least ``c``, and
every bond lives inside a single block.  The search therefore runs block
by block and enumerates the connected bipartitions of each block.

All searches work on an integer-indexed view of the graph (:class:`BitGraph`)
where vertex sets are bitmasks.  Vertex ``i`` of the view is the ``i``-th
smallest vertex identifier, so the first model found is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import ValidationError
from .multigraph import WeightedMultigraph, _tarjan_blocks


def iter_bits(mask: int):
    while mask:
        b = mask & -mask
        yield b.bit_length() - 1
        mask ^= b


def popcount(mask: int) -> int:
    return bin(mask).count("1")


class BitGraph:
    """Bitmask view of a :class:`WeightedMultigraph`."""

    __slots__ = ("order", "index", "n", "adj", "mult", "nbrs", "full", "cache")

    def __init__(self, g: WeightedMultigraph):
        self.order = g.vertices()
        self.index = {v: i for i, v in enumerate(self.order)}
        self.n = len(self.order)
        self.adj = [0] * self.n
        self.mult = [dict() for _ in range(self.n)]
        for u, v, m in g.edges():
            i, j = self.index[u], self.index[v]
            self.adj[i] |= 1 << j
            self.adj[j] |= 1 << i
            self.mult[i][j] = m
            self.mult[j][i] = m
        self.nbrs = [tuple(d.items()) for d in self.mult]
        self.full = (1 << self.n) - 1
        self.cache: dict = {}

    @classmethod
    def of(cls, g: WeightedMultigraph) -> "BitGraph":
        bg = g._cache.get("bitgraph")
        if bg is None:
            bg = g._cache["bitgraph"] = cls(g)
        return bg

    def mask(self, vs: Iterable) -> int:
        m = 0
        for v in vs:
            m |= 1 << self.index[v]
        return m

    def verts(self, mask: int) -> frozenset:
        return frozenset(self.order[i] for i in iter_bits(mask))

    def neighbors_mask(self, mask: int) -> int:
        out = 0
        for i in iter_bits(mask):
            out |= self.adj[i]
        return out & ~mask

    def reach(self, start: int, within: int) -> int:
        seen = frontier = start & within
        adj = self.adj
        while frontier:
            nb = 0
            f = frontier
            while f:
                b = f & -f
                nb |= adj[b.bit_length() - 1]
                f ^= b
            frontier = nb & within & ~seen
            seen |= frontier
        return seen

    def connected(self, mask: int) -> bool:
        if not mask:
            return False
        return self.reach(mask & -mask, mask) == mask

    def components(self, mask: int) -> list[int]:
        out = []
        rest = mask
        while rest:
            comp = self.reach(rest & -rest, mask)
            out.append(comp)
            rest &= ~comp
        return out

    def crossing(self, xmask: int, ymask: int) -> int:
        total = 0
        for i in iter_bits(xmask):
            for j, m in self.nbrs[i]:
                if ymask >> j & 1:
                    total += m
        return total

    def edges_within(self, mask: int) -> int:
        total = 0
        for i in iter_bits(mask):
            for j, m in self.nbrs[i]:
                if j > i and mask >> j & 1:
                    total += m
        return total

    def blocks(self, mask: int) -> list[int]:
        def nbrs(i):
            return list(iter_bits(self.adj[i] & mask))

        out = []
        for blk in _tarjan_blocks(list(iter_bits(mask)), nbrs):
            m = 0
            for i in blk:
                m |= 1 << i
            out.append(m)
        return out


def _degrees_within(bg: BitGraph, mask: int) -> dict:
    deg = {}
    for i in iter_bits(mask):
        d = 0
        for j, m in bg.nbrs[i]:
            if mask >> j & 1:
                d += m
        deg[i] = d
    return deg


def _search_bipartition(bg: BitGraph, comp: int, root: int, c: int, forbid: int = 0, best=None):
    """Connected bipartitions ``(X, comp - X)`` of ``comp`` with ``root`` in X.

    Vertices in ``forbid`` are kept out of ``X``.  Returns the first ``X``
    whose crossing count reaches ``c``; if ``best`` is a one-element list it
    instead records the largest crossing count seen (capped at ``c``) and
    keeps going until the cap is hit.
    """
    deg = _degrees_within(bg, comp)
    adj = bg.adj
    nbrs = bg.nbrs
    rootbit = 1 << root
    connected = bg.connected

    def rec(X, cross, ext, excl):
        rest = comp & ~X
        if rest:
            if cross >= c or (best is not None and cross > best[0]):
                if connected(rest):
                    if cross >= c:
                        return X
                    best[0] = cross
        while ext:
            b = ext & -ext
            ext ^= b
            i = b.bit_length() - 1
            inner = 0
            for j, m in nbrs[i]:
                if X >> j & 1:
                    inner += m
            found = rec(X | b, cross + deg[i] - 2 * inner, (ext | adj[i]) & comp & ~(X | b) & ~excl & ~forbid, excl)
            if found is not None:
                return found
            excl |= b
        return None

    start_ext = adj[root] & comp & ~rootbit & ~forbid
    return rec(rootbit, deg[root], start_ext, rootbit)


def _find_in_block(bg: BitGraph, blk: int, c: int):
    if c <= 0:
        return None
    k = popcount(blk)
    if k < 2:
        return None
    deg = _degrees_within(bg, blk)
    # Cheap witnesses first: a heavy edge, then a single vertex whose
    # in-block edge-degree is large (in a block every vertex star is a bond).
    for i in iter_bits(blk):
        for j, m in bg.nbrs[i]:
            if j > i and blk >> j & 1 and m >= c:
                return (1 << i, 1 << j)
    if k >= 3:
        for i in iter_bits(blk):
            if deg[i] >= c:
                return (1 << i, blk & ~(1 << i))
    else:
        return None
    root = (blk & -blk).bit_length() - 1
    X = _search_bipartition(bg, blk, root, c)
    if X is None:
        return None
    return (X, blk & ~X)


def find_model_mask(bg: BitGraph, alive: int, c: int):
    """Bitmask form of :func:`find_theta_model` restricted to ``alive``."""
    key = (alive, c)
    hit = bg.cache.get(key, False)
    if hit is not False:
        return hit
    out = None
    for comp in bg.components(alive):
        if popcount(comp) < 2:
            continue
        for blk in bg.blocks(comp):
            out = _find_in_block(bg, blk, c)
            if out is not None:
                break
        if out is not None:
            break
    if len(bg.cache) > 200_000:
        bg.cache.clear()
    bg.cache[key] = out
    return out


def minimize_mask(bg: BitGraph, model, c: int):
    """Shrink a model until no single vertex of it can be dropped."""
    x, y = model
    mask = x | y
    changed = True
    while changed:
        changed = False
        for i in iter_bits(mask):
            sub = find_model_mask(bg, mask & ~(1 << i), c)
            if sub is not None:
                x, y = sub
                mask = x | y
                changed = True
                break
    return (x, y)


@dataclass(frozen=True)
class ThetaModel:
    x_side: frozenset
    y_side: frozenset
    order: int

    def __post_init__(self):
        object.__setattr__(self, "x_side", frozenset(self.x_side))
        object.__setattr__(self, "y_side", frozenset(self.y_side))

    @property
    def vertices(self) -> frozenset:
        return self.x_side | self.y_side

    def __len__(self):
        return len(self.x_side) + len(self.y_side)

    def swapped(self) -> "ThetaModel":
        return ThetaModel(self.y_side, self.x_side, self.order)


def crossing_count(g: WeightedMultigraph, X, Y) -> int:
    return g.edges_between(X, Y)


def is_valid_model(g: WeightedMultigraph, m: ThetaModel, c: int | None = None) -> bool:
    c = m.order if c is None else c
    X, Y = m.x_side, m.y_side
    if not X or not Y or X & Y:
        return False
    if any(v not in g for v in X | Y):
        return False
    if not (g.is_connected_set(X) and g.is_connected_set(Y)):
        return False
    return crossing_count(g, X, Y) >= c


def validate_model(g: WeightedMultigraph, m: ThetaModel) -> None:
    if not is_valid_model(g, m):
        raise ValidationError(
            f"not a theta_{m.order} model: X={sorted(m.x_side)} Y={sorted(m.y_side)}"
        )


def _to_model(bg: BitGraph, pair, c: int) -> ThetaModel:
    return ThetaModel(bg.verts(pair[0]), bg.verts(pair[1]), c)


def find_theta_model(g: WeightedMultigraph, c: int) -> ThetaModel | None:
    """A theta_c model of ``g``, or ``None`` if ``g`` is theta_c-minor-free."""
    if c < 1:
        raise ValidationError("c must be positive")
    bg = BitGraph.of(g)
    out = find_model_mask(bg, bg.full, c)
    return None if out is None else _to_model(bg, out, c)


def has_theta_model(g: WeightedMultigraph, c: int) -> bool:
    return find_theta_model(g, c) is not None


def is_theta_free(g: WeightedMultigraph, c: int) -> bool:
    return find_theta_model(g, c) is None


def minimize_model(g: WeightedMultigraph, m: ThetaModel) -> ThetaModel:
    """Shrink ``m`` to an inclusion-minimal model vertex set."""
    validate_model(g, m)
    bg = BitGraph.of(g)
    x, y = minimize_mask(bg, (bg.mask(m.x_side), bg.mask(m.y_side)), m.order)
    return _to_model(bg, (x, y), m.order)


def model_to_bond(g: WeightedMultigraph, m: ThetaModel):
    """Grow ``m`` into a bipartition ``(X', V - X')`` whose cut is a c-bond.

    Vertices of the model's component are absorbed one at a time into
    whichever side they touch (X first), in BFS order from the model.
    """
    validate_model(g, m)
    X, Y = set(m.x_side), set(m.y_side)
    comp = next(c for c in g.components() if m.x_side <= c)
    pending = sorted(comp - X - Y)
    while pending:
        for v in pending:
            nb = g._adj[v]
            if any(u in X for u in nb):
                X.add(v)
                break
            if any(u in Y for u in nb):
                Y.add(v)
                break
        else:  # pragma: no cover - the component is connected
            raise AssertionError("component is not connected")
        pending.remove(v)
    rest = frozenset(g.vertices()) - X
    return frozenset(X), rest


def _separating(g: WeightedMultigraph, u, v, c: int, best=None):
    if u == v:
        raise ValidationError("u and v must differ")
    bg = BitGraph.of(g)
    iu, iv = bg.index[g._check(u)], bg.index[g._check(v)]
    comp = bg.reach(1 << iu, bg.full)
    if not comp >> iv & 1:
        return None, bg
    return _search_bipartition(bg, comp, iu, c, forbid=1 << iv, best=best), bg


def find_separating_model(g: WeightedMultigraph, u, v, i: int) -> ThetaModel | None:
    """A theta_i model with ``u`` in X and ``v`` in Y, if one exists."""
    if i < 1:
        raise ValidationError("order must be positive")
    X, bg = _separating(g, u, v, i)
    if X is None:
        return None
    comp = bg.reach(X, bg.full)
    return _to_model(bg, (X, comp & ~X), i)


def max_separating_theta(g: WeightedMultigraph, u, v, c: int) -> int:
    """Largest ``l < c`` with a theta_l model separating ``u`` from ``v`` (0 if disconnected)."""
    if c < 1:
        raise ValidationError("c must be positive")
    best = [0]
    X, _ = _separating(g, u, v, c, best=best)
    if X is not None:
        return c - 1
    return min(best[0], c - 1)


def verify_cover(g: WeightedMultigraph, c: int, S) -> bool:
    """True iff deleting ``S`` leaves ``g`` theta_c-minor-free."""
    S = set(S)
    if not S <= set(g.vertices()):
        return False
    bg = BitGraph.of(g)
    return find_model_mask(bg, bg.full & ~bg.mask(S), c) is None


def reverse_delete(g: WeightedMultigraph, c: int, S) -> frozenset:
    """Drop vertices from the cover ``S`` while it stays a cover.

    Candidates are tried heaviest first, ties by identifier, so the result
    is an inclusion-minimal cover.
    """
    bg = BitGraph.of(g)
    chosen = bg.mask(S)
    if find_model_mask(bg, bg.full & ~chosen, c) is not None:
        raise ValidationError("not a cover")
    for v in sorted(S, key=lambda x: (-g.weight(x), x)):
        b = 1 << bg.index[v]
        if find_model_mask(bg, bg.full & ~(chosen & ~b), c) is None:
            chosen &= ~b
    return bg.verts(chosen)
