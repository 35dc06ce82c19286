"""Plain-text instance format and random instance generators.

The format is DIMACS-like::

    c any comment
    p bond <n> <m>
    v <id> <weight>        weight as integer, decimal, or p/q
    e <u> <v> <mult>       multiplicity defaults to 1

Vertices are ``1..n``; a vertex without a ``v`` line weighs 1.  ``m``
counts ``e`` lines.  Repeated edge lines add up their multiplicities.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .errors import ValidationError
from .multigraph import WeightedMultigraph


def _fail(lineno: int, col: int, msg: str):
    raise ValidationError(f"line {lineno}, column {col}: {msg}")


def _columns(line: str):
    """Yield ``(column, token)`` pairs, columns 1-based."""
    col = 0
    for tok in line.split():
        col = line.index(tok, col)
        yield col + 1, tok
        col += len(tok)


def _int(tok, lineno, col, what):
    try:
        return int(tok)
    except ValueError:
        _fail(lineno, col, f"{what} must be an integer, got {tok!r}")


def parse_weight(tok: str) -> Fraction:
    w = Fraction(tok)
    if w < 0:
        raise ValueError("negative")
    return w


def parse_instance(text: str) -> WeightedMultigraph:
    n = m = None
    weights: dict = {}
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        toks = list(_columns(raw))
        if not toks or toks[0][1] == "c":
            continue
        col, kind = toks[0]
        if kind == "p":
            if n is not None:
                _fail(lineno, col, "second problem line")
            if len(toks) != 4 or toks[1][1] != "bond":
                _fail(lineno, col, "expected 'p bond <n> <m>'")
            n = _int(toks[2][1], lineno, toks[2][0], "n")
            m = _int(toks[3][1], lineno, toks[3][0], "m")
            if n < 0 or m < 0:
                _fail(lineno, toks[2][0], "negative size")
            continue
        if n is None:
            _fail(lineno, col, "data before problem line")
        if kind == "v":
            if len(toks) != 3:
                _fail(lineno, col, "expected 'v <id> <weight>'")
            v = _int(toks[1][1], lineno, toks[1][0], "vertex id")
            if not 1 <= v <= n:
                _fail(lineno, toks[1][0], f"vertex id {v} outside 1..{n}")
            if v in weights:
                _fail(lineno, toks[1][0], f"vertex {v} listed twice")
            try:
                weights[v] = parse_weight(toks[2][1])
            except (ValueError, ZeroDivisionError):
                _fail(lineno, toks[2][0], f"bad weight {toks[2][1]!r}")
        elif kind == "e":
            if len(toks) not in (3, 4):
                _fail(lineno, col, "expected 'e <u> <v> [mult]'")
            u = _int(toks[1][1], lineno, toks[1][0], "endpoint")
            v = _int(toks[2][1], lineno, toks[2][0], "endpoint")
            mult = _int(toks[3][1], lineno, toks[3][0], "multiplicity") if len(toks) == 4 else 1
            for x, (c, _) in ((u, toks[1]), (v, toks[2])):
                if not 1 <= x <= n:
                    _fail(lineno, c, f"vertex id {x} outside 1..{n}")
            if u == v:
                _fail(lineno, toks[2][0], "self-loop")
            if mult < 1:
                _fail(lineno, toks[3][0], "multiplicity must be at least 1")
            edges.append((u, v, mult))
        else:
            _fail(lineno, col, f"unknown line type {kind!r}")
    if n is None:
        raise ValidationError("missing problem line 'p bond <n> <m>'")
    if len(edges) != m:
        raise ValidationError(f"header announces {m} edge lines, found {len(edges)}")
    full = {v: weights.get(v, Fraction(1)) for v in range(1, n + 1)}
    return WeightedMultigraph(full, edges)


def format_weight(w: Fraction) -> str:
    w = Fraction(w)
    return str(w.numerator) if w.denominator == 1 else f"{w.numerator}/{w.denominator}"


def serialize_instance(g: WeightedMultigraph, comments=()) -> str:
    n = len(g)
    if set(g.vertices()) != set(range(1, n + 1)):
        raise ValidationError("vertices must be exactly 1..n to serialize")
    edges = list(g.edges())
    lines = [f"c {line}" for line in comments]
    lines.append(f"p bond {n} {len(edges)}")
    lines += [f"v {v} {format_weight(g.weight(v))}" for v in g.vertices()]
    lines += [f"e {u} {v} {m}" for u, v, m in edges]
    return "\n".join(lines) + "\n"


def read_instance(path) -> WeightedMultigraph:
    with open(path) as fh:
        return parse_instance(fh.read())


def instance_order(text: str) -> int | None:
    """The order ``c`` recorded in an ``c order <c>`` comment, if any."""
    for raw in text.splitlines():
        toks = raw.split()
        if len(toks) == 3 and toks[:2] == ["c", "order"]:
            try:
                return int(toks[2])
            except ValueError:
                return None
    return None


# -- generators ------------------------------------------------------------


def _weights(rng: random.Random, n: int, max_weight: int) -> dict:
    return {v: rng.randint(1, max_weight) for v in range(1, n + 1)}


def gnp(n: int, p: float, seed: int, c: int = 2, max_mult: int | None = None, max_weight: int = 5) -> WeightedMultigraph:
    """Each pair joined with probability ``p`` and a random multiplicity."""
    if n < 0 or not 0 <= p <= 1 or max_weight < 1:
        raise ValidationError("gnp needs n >= 0, 0 <= p <= 1, max_weight >= 1")
    max_mult = c if max_mult is None else max_mult
    if max_mult < 1:
        raise ValidationError("max_mult must be positive")
    rng = random.Random(seed)
    w = _weights(rng, n, max_weight)
    edges = []
    for u in range(1, n + 1):
        for v in range(u + 1, n + 1):
            if rng.random() < p:
                edges.append((u, v, rng.randint(1, max_mult)))
    return WeightedMultigraph(w, edges)


def _random_tree(rng, verts, c):
    edges = []
    for i in range(1, len(verts)):
        edges.append((verts[rng.randrange(i)], verts[i], rng.randint(1, max(1, c - 1))))
    return edges


def planted_instance(n: int, c: int, models: int, planted: int, seed: int, max_weight: int = 5):
    """A theta_c-free tree plus edges incident to a planted set ``P``.

    Every added edge touches ``P``, so ``P`` is a cover; returns ``(g, P)``.
    """
    if c < 2 or n < 2 or not 1 <= planted <= n or models < 0:
        raise ValidationError("planted needs c >= 2, n >= 2, 1 <= planted <= n")
    rng = random.Random(seed)
    w = _weights(rng, n, max_weight)
    verts = list(range(1, n + 1))
    rng.shuffle(verts)
    edges = _random_tree(rng, verts, c)
    P = sorted(rng.sample(range(1, n + 1), planted))
    for _ in range(models):
        a = rng.choice(P)
        b = rng.choice([v for v in range(1, n + 1) if v != a])
        edges.append((a, b, rng.randint(1, c)))
    return WeightedMultigraph(w, edges), frozenset(P)


def gadget_chain(anchors: int, blob: int, c: int, seed: int, chords: int = 0, max_weight: int = 5) -> WeightedMultigraph:
    """A ring of anchors with a theta_c-free tree hanging between neighbours.

    Each tree has ``blob`` vertices and touches exactly its two anchors, so
    it is a c-outgrowth of size ``blob``.  ``chords`` extra anchor-anchor
    edges add further models.
    """
    if anchors < 2 or blob < 1 or c < 2:
        raise ValidationError("gadget-chain needs anchors >= 2, blob >= 1, c >= 2")
    rng = random.Random(seed)
    n = anchors + anchors * blob
    w = _weights(rng, n, max_weight)
    edges = []
    nxt = anchors + 1
    pairs = [(i, i % anchors + 1) for i in range(1, anchors + 1)]
    if anchors == 2:
        pairs = pairs[:1] * 2
    for a, b in pairs:
        verts = list(range(nxt, nxt + blob))
        nxt += blob
        edges += _random_tree(rng, verts, c)
        edges.append((a, rng.choice(verts), rng.randint(1, max(1, c - 1))))
        edges.append((b, rng.choice(verts), rng.randint(1, max(1, c - 1))))
    for _ in range(chords):
        a, b = rng.sample(range(1, anchors + 1), 2)
        edges.append((a, b, rng.randint(1, c - 1)))
    return WeightedMultigraph(w, edges)


GENERATORS = ("gnp", "planted", "gadget-chain")


def generate(model: str, seed: int, **params) -> WeightedMultigraph:
    if model == "gnp":
        return gnp(seed=seed, **params)
    if model == "planted":
        return planted_instance(seed=seed, **params)[0]
    if model == "gadget-chain":
        return gadget_chain(seed=seed, **params)
    raise ValidationError(f"unknown generator {model!r}; choose from {', '.join(GENERATORS)}")
