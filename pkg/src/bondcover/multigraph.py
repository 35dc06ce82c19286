"""Loopless vertex-weighted multigraphs.

Graphs are treated as values: every operation that changes structure
returns a new :class:`WeightedMultigraph`.  Weights are stored as
:class:`fractions.Fraction` so that repeated subtraction stays exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Iterator, Mapping

from .errors import ValidationError

Vertex = Hashable


def as_weight(value) -> Fraction:
    w = Fraction(value)
    if w < 0:
        raise ValidationError(f"negative weight {value!r}")
    return w


def _pair(u, v):
    return (u, v) if u <= v else (v, u)


class WeightedMultigraph:
    """Loopless multigraph with non-negative rational vertex weights.

    ``weights`` maps every vertex to its weight; ``edges`` is an iterable of
    ``(u, v)`` or ``(u, v, multiplicity)`` triples.  Repeated pairs have
    their multiplicities summed.

    Vertex identifiers must be mutually comparable; operations that create
    vertices (contraction, gadgets) hand out integers, so integer
    identifiers are the safe choice.

    ``id_floor`` is a lower bound for identifiers handed out by
    :meth:`fresh_ids`; derived graphs inherit it so that newly created
    vertices never reuse an identifier seen earlier in the derivation.
    """

    __slots__ = ("_w", "_adj", "_id_floor", "_cache")

    def __init__(self, weights: Mapping | None = None, edges: Iterable = (), id_floor: int = 0):
        self._w: dict = {v: as_weight(x) for v, x in (weights or {}).items()}
        self._adj: dict = {v: {} for v in self._w}
        for e in edges:
            if len(e) == 2:
                u, v, m = e[0], e[1], 1
            else:
                u, v, m = e
            m = int(m)
            if u == v:
                raise ValidationError(f"loop at vertex {u!r}")
            if m < 1:
                raise ValidationError(f"edge {u!r}-{v!r} has multiplicity {m}")
            for x in (u, v):
                if x not in self._w:
                    raise ValidationError(f"edge endpoint {x!r} is not a vertex")
            self._adj[u][v] = self._adj[u].get(v, 0) + m
            self._adj[v][u] = self._adj[v].get(u, 0) + m
        top = max((v for v in self._w if isinstance(v, int)), default=-1)
        self._id_floor = max(int(id_floor), top + 1)
        self._cache: dict = {}

    @classmethod
    def _raw(cls, weights: dict, adj: dict, id_floor: int) -> "WeightedMultigraph":
        g = cls.__new__(cls)
        g._w = weights
        g._adj = adj
        top = max((v for v in weights if isinstance(v, int)), default=-1)
        g._id_floor = max(id_floor, top + 1)
        g._cache = {}
        return g

    # -- basic queries -------------------------------------------------

    def __len__(self) -> int:
        return len(self._w)

    def __contains__(self, v) -> bool:
        return v in self._w

    def __iter__(self) -> Iterator:
        return iter(self.vertices())

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeightedMultigraph):
            return NotImplemented
        return self._w == other._w and self._adj == other._adj

    def __hash__(self):
        return hash((frozenset(self._w.items()), frozenset(self.edges())))

    def __repr__(self) -> str:
        return f"WeightedMultigraph(n={len(self)}, m={self.num_edges()})"

    def vertices(self) -> tuple:
        vs = self._cache.get("vertices")
        if vs is None:
            vs = self._cache["vertices"] = tuple(sorted(self._w))
        return vs

    @property
    def id_floor(self) -> int:
        return self._id_floor

    def weight(self, v) -> Fraction:
        return self._w[self._check(v)]

    def weights(self) -> dict:
        return dict(self._w)

    def total_weight(self, vs: Iterable | None = None) -> Fraction:
        if vs is None:
            return sum(self._w.values(), Fraction(0))
        return sum((self._w[v] for v in vs), Fraction(0))

    def neighbors(self, v) -> dict:
        """Map from each neighbour of ``v`` to the multiplicity of the joining edge."""
        return dict(self._adj[self._check(v)])

    def multiplicity(self, u, v) -> int:
        return self._adj[self._check(u)].get(v, 0)

    def edges(self) -> Iterator[tuple]:
        """Yield ``(u, v, multiplicity)`` once per adjacent pair, with ``u < v``."""
        for u in self.vertices():
            for v, m in self._adj[u].items():
                if u < v:
                    yield (u, v, m)

    def num_edges(self) -> int:
        return sum(sum(nb.values()) for nb in self._adj.values()) // 2

    def edge_degree(self, v) -> int:
        return sum(self._adj[self._check(v)].values())

    def vertex_degree(self, v) -> int:
        return len(self._adj[self._check(v)])

    def max_multiplicity(self) -> int:
        return max((m for nb in self._adj.values() for m in nb.values()), default=0)

    def min_edge_degree(self) -> int:
        return min((sum(nb.values()) for nb in self._adj.values()), default=0)

    def ext_edges(self, C: Iterable) -> int:
        C = set(C)
        return sum(m for u in C for v, m in self._adj[self._check(u)].items() if v not in C)

    def edges_between(self, A: Iterable, B: Iterable) -> int:
        B = set(B)
        return sum(m for u in A for v, m in self._adj[u].items() if v in B)

    def _check(self, v):
        if v not in self._w:
            raise ValidationError(f"unknown vertex {v!r}")
        return v

    # -- derived graphs ------------------------------------------------

    def induced(self, X: Iterable) -> "WeightedMultigraph":
        X = set(X)
        for v in X:
            self._check(v)
        w = {v: self._w[v] for v in X}
        adj = {v: {u: m for u, m in self._adj[v].items() if u in X} for v in X}
        return WeightedMultigraph._raw(w, adj, self._id_floor)

    def delete_vertices(self, X: Iterable) -> "WeightedMultigraph":
        X = set(X)
        return self.induced(v for v in self._w if v not in X)

    def with_weights(self, weights: Mapping) -> "WeightedMultigraph":
        """Copy with the weights of the listed vertices replaced."""
        w = dict(self._w)
        for v, x in weights.items():
            w[self._check(v)] = as_weight(x)
        adj = {v: dict(nb) for v, nb in self._adj.items()}
        return WeightedMultigraph._raw(w, adj, self._id_floor)

    def add(self, weights: Mapping | None = None, edges: Iterable = ()) -> "WeightedMultigraph":
        """Copy with extra vertices and/or extra edge multiplicity."""
        w = dict(self._w)
        for v, x in (weights or {}).items():
            if v in w:
                raise ValidationError(f"vertex {v!r} already present")
            w[v] = x
        return WeightedMultigraph(w, list(self.edges()) + list(edges), self._id_floor)

    def remove_edges(self, pairs: Iterable) -> "WeightedMultigraph":
        """Copy with every edge between the listed vertex pairs removed."""
        drop = {frozenset(p) for p in pairs}
        return WeightedMultigraph(
            self._w, [e for e in self.edges() if frozenset(e[:2]) not in drop], self._id_floor
        )

    def fresh_ids(self, k: int) -> list[int]:
        return list(range(self._id_floor, self._id_floor + k))

    # -- connectivity --------------------------------------------------

    def components(self, within: Iterable | None = None) -> list[frozenset]:
        """Connected components, ordered by smallest vertex."""
        allowed = set(self._w) if within is None else set(within)
        seen: set = set()
        comps = []
        for s in sorted(allowed):
            if s in seen:
                continue
            comp = {s}
            stack = [s]
            while stack:
                x = stack.pop()
                for y in self._adj[x]:
                    if y in allowed and y not in comp:
                        comp.add(y)
                        stack.append(y)
            seen |= comp
            comps.append(frozenset(comp))
        return comps

    def is_connected_set(self, X: Iterable) -> bool:
        X = set(X)
        return bool(X) and len(self.components(X)) == 1

    def neighborhood(self, X: Iterable) -> set:
        X = set(X)
        return {u for v in X for u in self._adj[v] if u not in X}

    def blocks(self) -> list[frozenset]:
        return blocks(self)


def _tarjan_blocks(order, nbrs) -> list[list]:
    """Biconnected components plus isolated vertices.

    ``nbrs(v)`` returns the distinct neighbours of ``v``.  Parallel edges
    are irrelevant here: a multi-edge between two vertices is still just a
    two-vertex block.
    """
    disc: dict = {}
    low: dict = {}
    out = []
    for root in order:
        if root in disc:
            continue
        disc[root] = low[root] = 0
        counter = 1
        root_nbrs = nbrs(root)
        if not root_nbrs:
            out.append([root])
            continue
        edge_stack = []
        stack = [(root, None, iter(root_nbrs))]
        while stack:
            v, parent, it = stack[-1]
            advanced = False
            for w in it:
                if w == parent:
                    continue
                if w not in disc:
                    disc[w] = low[w] = counter
                    counter += 1
                    edge_stack.append((v, w))
                    stack.append((w, v, iter(nbrs(w))))
                    advanced = True
                    break
                if disc[w] < disc[v]:
                    edge_stack.append((v, w))
                    if disc[w] < low[v]:
                        low[v] = disc[w]
            if advanced:
                continue
            stack.pop()
            if parent is None:
                continue
            if low[v] < low[parent]:
                low[parent] = low[v]
            if low[v] >= disc[parent]:
                comp = set()
                while True:
                    a, b = edge_stack.pop()
                    comp.add(a)
                    comp.add(b)
                    if (a, b) == (parent, v):
                        break
                out.append(sorted(comp))
    return out


def blocks(g: WeightedMultigraph) -> list[frozenset]:
    """All blocks of ``g``: isolated vertices, bridges and biconnected components."""
    return [frozenset(b) for b in _tarjan_blocks(g.vertices(), lambda v: sorted(g._adj[v]))]


def cut_vertices(g: WeightedMultigraph) -> set:
    count: dict = {}
    for b in blocks(g):
        for v in b:
            count[v] = count.get(v, 0) + 1
    return {v for v, k in count.items() if k > 1}


def edge_degree(g: WeightedMultigraph, v) -> int:
    return g.edge_degree(v)


def ext_edges(g: WeightedMultigraph, C: Iterable) -> int:
    return g.ext_edges(C)


def induced(g: WeightedMultigraph, X: Iterable) -> WeightedMultigraph:
    return g.induced(X)


def delete_vertices(g: WeightedMultigraph, X: Iterable) -> WeightedMultigraph:
    return g.delete_vertices(X)


def components(g: WeightedMultigraph) -> list[frozenset]:
    return g.components()


def max_multiplicity(g: WeightedMultigraph) -> int:
    return g.max_multiplicity()


def min_edge_degree(g: WeightedMultigraph) -> int:
    return g.min_edge_degree()


@dataclass(frozen=True)
class ClusterCollection:
    """Pairwise disjoint, non-empty, connected vertex sets of ``host``."""

    clusters: tuple
    host: WeightedMultigraph = field(repr=False, compare=False)

    def __post_init__(self):
        cl = tuple(frozenset(c) for c in self.clusters)
        object.__setattr__(self, "clusters", cl)
        seen: set = set()
        for c in cl:
            if not c:
                raise ValidationError("empty cluster")
            if seen & c:
                raise ValidationError(f"clusters overlap on {sorted(seen & c)}")
            missing = [v for v in c if v not in self.host]
            if missing:
                raise ValidationError(f"cluster vertices {missing} not in host graph")
            if not self.host.is_connected_set(c):
                raise ValidationError(f"cluster {sorted(c)} is not connected")
            seen |= c

    def __len__(self):
        return len(self.clusters)

    def __iter__(self):
        return iter(self.clusters)

    @property
    def capacity(self) -> int:
        return max((len(c) for c in self.clusters), default=0)

    @property
    def union(self) -> frozenset:
        return frozenset().union(*self.clusters)

    def ext(self, C) -> int:
        """Edges with exactly one endpoint in ``C``, counted inside the union."""
        U = self.union
        C = frozenset(C)
        return sum(m for u in C for v, m in self.host._adj[u].items() if v in U and v not in C)

    def cluster_of(self, v):
        for c in self.clusters:
            if v in c:
                return c
        return None


def contract_clusters(g: WeightedMultigraph, cc: ClusterCollection):
    """Contract every cluster of ``cc`` into a single vertex.

    Singleton clusters keep their vertex identifier; larger clusters get a
    fresh one.
    Vertices outside the union of the clusters are dropped, parallel edges
    between clusters are merged by summing multiplicities and loops are
    discarded.  Returns the contracted graph and a map from each new vertex
    to the cluster it stands for.  The new vertex's weight is the cluster's
    total weight.
    """
    if cc.host is not g:
        cc = ClusterCollection(cc.clusters, g)
    fresh = iter(g.fresh_ids(len(cc.clusters)))
    where = {}
    provenance = {}
    for c in cc.clusters:
        new = next(iter(c)) if len(c) == 1 else next(fresh)
        provenance[new] = c
        for v in c:
            where[v] = new
    edges: dict = {}
    for u, v, m in g.edges():
        a, b = where.get(u), where.get(v)
        if a is None or b is None or a == b:
            continue
        key = _pair(a, b)
        edges[key] = edges.get(key, 0) + m
    weights = {new: g.total_weight(c) for new, c in provenance.items()}
    h = WeightedMultigraph(weights, [(a, b, m) for (a, b), m in edges.items()], g.id_floor)
    return h, provenance
