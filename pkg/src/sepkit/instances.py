"""Named example inputs and seeded random generators."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import product

from .cantor import SPLeaf, SPNode
from .geometry import Box, BoxSet
from .graphtree import BAIRE, CANTOR, GraphTree
from .souslin import SouslinScheme, address_1d, tuple_pair

F = Fraction

# ------------------------------------------------------- Cantor side


def coordinate_tree(n: int = 0, bit: int = 1) -> GraphTree:
    """Presents {x : x(n) = bit}."""
    edges = []
    for i in range(n):
        edges += [(f"p{i}", (0, 0), f"p{i + 1}"), (f"p{i}", (1, 0), f"p{i + 1}")]
    edges += [(f"p{n}", (bit, 0), "live"), ("live", (0, 0), "live"), ("live", (1, 0), "live")]
    return GraphTree.build(edges, root="p0")


def full_tree(K: int = 1) -> GraphTree:
    return GraphTree.build([("f", (b, n), "f") for b in (0, 1) for n in range(K)], root="f", alphabet_bound=K)


def empty_tree() -> GraphTree:
    return GraphTree.build([], root="e")


def prefix_tree(word) -> GraphTree:
    """Presents the cylinder of a binary word."""
    edges = [(f"p{i}", (b, 0), f"p{i + 1}") for i, b in enumerate(word)]
    end = f"p{len(word)}"
    edges += [(end, (0, 0), end), (end, (1, 0), end)]
    return GraphTree.build(edges, root="p0")


def random_tree(rng: random.Random, max_states: int = 5, max_K: int = 3, side: str = CANTOR,
                density: float = 0.35) -> GraphTree:
    n = rng.randint(1, max_states)
    K = rng.randint(1, max_K)
    first = range(2) if side == CANTOR else range(K)
    names = [f"q{i}" for i in range(n)]
    edges = []
    for q in names:
        for lab in product(first, range(K)):
            if rng.random() < density:
                edges.append((q, lab, rng.choice(names)))
    return GraphTree.build(edges, root="q0", alphabet_bound=K, side=side, states=names, prune=True)


def random_graph_tree(rng: random.Random, n: int, K: int, acyclic: bool = False, loop_bit: int | None = None,
                      density: float = 0.3) -> GraphTree:
    """Cantor-side tree on exactly n reachable states.

    A spine q0 -> q1 -> ... reaches every state; further edges go forward.
    Unless acyclic, states may also carry self-loops, all reading loop_bit
    when it is given (any bit otherwise).
    """
    names = [f"q{i}" for i in range(n)]
    emap = {}
    for i in range(1, n):
        emap[(names[i - 1], (rng.randrange(2), rng.randrange(K)))] = names[i]
    for i, q in enumerate(names):
        for lab in product(range(2), range(K)):
            if (q, lab) in emap or rng.random() >= density:
                continue
            loop_ok = not acyclic and (loop_bit is None or lab[0] == loop_bit)
            if loop_ok and (i == n - 1 or rng.random() < 0.5):
                emap[(q, lab)] = q
            elif i < n - 1:
                emap[(q, lab)] = names[rng.randrange(i + 1, n)]
    return GraphTree(tuple(names), "q0", K, emap)


def random_spcode(rng: random.Random, depth: int = 3, support: int = 10, width: int = 3,
                  leaf_p: float = 0.3):
    def leaf():
        r = rng.random()
        if r < 0.08:
            return SPLeaf(0)
        if r < 0.16:
            return SPLeaf(1)
        return SPLeaf(2 + rng.randrange(support))

    def go(d):
        if d == 0 or rng.random() < leaf_p:
            return leaf()
        rows = rng.randint(1, width)
        cols = rng.randint(1, width)
        return SPNode(tuple(tuple(go(d - 1) for _ in range(cols)) for _ in range(rows)))

    return go(depth)


def random_finite_tree(rng: random.Random, size: int = 8, branching: int = 3) -> set:
    nodes = {()}
    for _ in range(size):
        parent = rng.choice(sorted(nodes))
        nodes.add(parent + (rng.randrange(branching),))
    return nodes


# -------------------------------------------------------- Baire side


def point_tree(points, dim: int, name: str = "b") -> GraphTree:
    """Baire-side tree whose branches are the eventually-zero addresses of
    the given points (ends of their dyadic-style expansions).

    Each point must have an address that is eventually 0 in every
    coordinate, which holds for points whose coordinates are left
    endpoints of address intervals (integers, for instance).
    """
    edges = []
    for k, x in enumerate(points):
        word = _eventually_zero_address(x, dim)
        prev = "root"
        for i, letter in enumerate(word):
            nxt = f"{name}{k}_{i}"
            edges.append((prev, (letter, 0), nxt))
            prev = nxt
        edges.append((prev, (0, 0), prev))
    return _merge_paths(edges)


def _eventually_zero_address(x, dim):
    for t in range(1, 40):
        parts = [address_1d(v, t) for v in x]
        if all(_limit_is(v, p) for v, p in zip(x, parts)):
            return tuple(tuple_pair([p[i] for p in parts]) for i in range(t))
    raise ValueError(f"{x} has no eventually-zero address")


def _limit_is(v, word):
    from .souslin import interval_bounds
    return interval_bounds(word)[0] == F(v)


def _merge_paths(edges) -> GraphTree:
    """Identify states reached by the same label path from the root."""
    emap = {}
    rename = {"root": "root"}
    for q, lab, r in edges:
        q = rename.get(q, q)
        key = (q, lab)
        if key in emap:
            rename[r] = emap[key]
        else:
            emap[key] = rename.get(r, r)
    return GraphTree.build([(q, lab, r) for (q, lab), r in emap.items()], root="root", side=BAIRE)


def segment_tree(start, dim: int, axis: int = 0, letters: int = 2, name: str = "s") -> GraphTree:
    """Branches whose addresses agree with `start` except that the coordinate
    `axis` continues with any letters below `letters` after its first letter.

    The presented set is a Cantor-like subset of the unit segment from
    `start` along `axis`; `start` itself is included.
    """
    word = [address_1d(v, 1)[0] for v in start]
    first = tuple_pair(word)
    edges = [("root", (first, 0), "free")]
    for k in range(letters):
        parts = [0] * dim
        parts[axis] = k
        edges.append(("free", (tuple_pair(parts), 0), "free"))
    return GraphTree.build(edges, root="root", side=BAIRE)


# ----------------------------------------------------------- schemes


def const_scheme(lo, hi, depth: int = 8, alphabet: int = 1) -> SouslinScheme:
    box = Box(tuple(F(v) for v in lo), tuple(F(v) for v in hi))
    return SouslinScheme.constant(BoxSet((box,)), box.dim, depth, alphabet)


def shrinking_scheme(lo, hi, depth: int = 8, alphabet: int = 1) -> SouslinScheme:
    """Q_u = the box [lo, hi] thickened by 2^-|u|; the limit set is [lo, hi]."""
    lo = tuple(F(v) for v in lo)
    hi = tuple(F(v) for v in hi)

    def rule(u):
        e = F(1, 2 ** len(u))
        return BoxSet((Box(tuple(v - e for v in lo), tuple(v + e for v in hi)),))

    return SouslinScheme.from_rule(rule, len(lo), depth, alphabet)


def diagonal_scheme(p, q, depth: int = 7, alphabet: int = 1) -> SouslinScheme:
    """Covers the segment from p to q (in R^2) by 2^|u| small boxes at level |u|."""
    p = tuple(F(v) for v in p)
    q = tuple(F(v) for v in q)

    def rule(u):
        n = len(u)
        pieces = 2 ** n
        e = F(1, 2 ** n)
        boxes = []
        for k in range(pieces):
            a = tuple(pi + (qi - pi) * F(k, pieces) for pi, qi in zip(p, q))
            b = tuple(pi + (qi - pi) * F(k + 1, pieces) for pi, qi in zip(p, q))
            lo = tuple(min(x, y) - e for x, y in zip(a, b))
            hi = tuple(max(x, y) + e for x, y in zip(a, b))
            boxes.append(Box(lo, hi))
        return BoxSet.of(boxes)

    return SouslinScheme.from_rule(rule, len(p), depth, alphabet)


def branching_scheme(lo, hi, depth: int = 6) -> SouslinScheme:
    """Two-letter scheme on the line: a word containing a 0 keeps only the
    left half of [lo, hi], a word of 1s keeps all of it; thickened by 2^-|u|
    as in shrinking_scheme.  Nested, increasing in every letter, and its
    limit set is [lo, hi] (through the all-ones branch).
    """
    lo, hi = F(lo), F(hi)
    mid = (lo + hi) / 2

    def rule(u):
        e = F(1, 2 ** len(u))
        right = mid if 0 in u else hi
        return BoxSet((Box((lo - e,), (right + e,)),))

    return SouslinScheme.from_rule(rule, 1, depth, 2)


# ------------------------------------------------------ Preiss battery


def preiss_battery() -> list[tuple[str, SouslinScheme, GraphTree, int]]:
    """Convex A, disjoint B, cube range M: (name, scheme, tree, M)."""
    from .souslin import build_good_scheme

    h = F(1, 2)
    out = [
        ("unit-vs-2", const_scheme((0,), (1,), 6), point_tree([(2,)], 1), 2),
        ("unit-vs-neg1", const_scheme((0,), (1,), 6), point_tree([(-1,)], 1), 2),
        ("unit-vs-two-points", const_scheme((0,), (1,), 6), point_tree([(2,), (-1,)], 1), 2),
        ("unit-vs-5/2", const_scheme((0,), (1,), 6), point_tree([(F(5, 2),)], 1), 3),
        ("origin-vs-1", shrinking_scheme((0,), (0,), 6), point_tree([(1,)], 1), 2),
        ("shrinking-unit-vs-3", shrinking_scheme((0,), (1,), 6), point_tree([(3,)], 1), 3),
        ("branching-vs-2", branching_scheme(0, 1, 6), point_tree([(2,)], 1), 2),
        ("unit-vs-segment", const_scheme((0,), (1,), 6), segment_tree((2,), 1), 2),
        ("alphabet-2-vs-neg2", const_scheme((-h,), (h,), 6, alphabet=2), point_tree([(-2,)], 1), 3),
        ("good-origin-vs-2", build_good_scheme(point_tree([(0,)], 1), 1, 6, 2), point_tree([(2,)], 1), 2),
        ("good-1-vs-neg1", build_good_scheme(point_tree([(1,)], 1), 1, 4, 2), point_tree([(-1,)], 1), 2),
        ("square-vs-point", const_scheme((0, 0), (1, 1), 6), point_tree([(2, 0)], 2), 2),
        ("square-vs-two-points", const_scheme((0, 0), (1, 1), 6), point_tree([(2, 2), (-1, -1)], 2), 2),
        ("square-vs-segment", const_scheme((0, 0), (1, 1), 6), segment_tree((2, 0), 2, axis=1), 2),
        ("origin-vs-corner", shrinking_scheme((0, 0), (0, 0), 6), point_tree([(1, 1)], 2), 2),
        ("nested-box-vs-segment", shrinking_scheme((-h, -h), (h, h), 6), segment_tree((-2, 0), 2, axis=1), 3),
        ("diagonal-vs-point", diagonal_scheme((0, 0), (1, 1), 6), point_tree([(2, 0)], 2), 2),
        ("horizontal-vs-segment", shrinking_scheme((0, 0), (1, 0), 6), segment_tree((0, 1), 2, axis=0), 2),
        ("good-origin-2d", build_good_scheme(point_tree([(0, 0)], 2), 2, 6, 2), point_tree([(1, -1)], 2), 2),
        ("square-vs-far-points", const_scheme((-1, -1), (1, 1), 6), point_tree([(2, 0), (0, -2)], 2), 3),
        ("square-alphabet-2", const_scheme((0, 0), (1, 1), 6, alphabet=2), point_tree([(-1, 0)], 2), 2),
    ]
    return out
