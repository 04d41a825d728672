"""Separating a convex analytic set in R^N from a disjoint analytic set by a
convexly generated set.

A is given by a good Souslin scheme Q (boxes at every word u), B by a
Baire-side graph tree S whose first coordinates are interval addresses.
The tree J holds the nodes (m, b, d, u) with

  C1  Q_u meets the cube [-m, m]^N,
  C2  (b, d) is a path of S,
  C3  dist(anchor(b|s), hull(Q_{u|s} in the cube)) < 2^(4-s) for s <= |u|.

Recursion from the leaves of J emits a code: each child index (k, l, j)
gets the empty set (Q runs out), the working cube (S runs out), an open
hull neighbourhood (C3 breaks at the new level) or the child's own code.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

from .cantor import UPPoint
from .dyck import member_projection
from .errors import CapacityExceeded, ConstantsViolation, MalformedInput, PreconditionError
from .geometry import (EMPTY, Box, BoxSet, Polytope, hull_distance_inf, hull_membership, hull_of_boxset,
                       minkowski_cube, polytope_from_box, polytope_subset, vec)
from .graphtree import BAIRE, GraphTree
from .souslin import GOOD, SouslinScheme, anchor, depth_approx_member, sigma_limit, word_box

MAX_CUBES = 16
CODE_EMITTED = "code-emitted"
FUEL_EXHAUSTED = "fuel-exhausted"


@dataclass(frozen=True)
class PreissConfig:
    cubes: int = 2
    fuel: int = 10_000
    levels: int = 6


@dataclass(frozen=True)
class PreissNode:
    m: int
    b: tuple = ()
    d: tuple = ()
    u: tuple = ()

    def __post_init__(self):
        if not len(self.b) == len(self.d) == len(self.u):
            raise MalformedInput("b, d and u must have equal length")


# ----------------------------------------------------------------- codes


@dataclass(frozen=True)
class Leaf:
    P: Polytope


@dataclass(frozen=True)
class OpenNbhd:
    """Points at max-distance strictly below r from hull(P)."""

    P: Polytope
    r: Fraction
    levels: int = 6

    def radii(self) -> list[Fraction]:
        out, i = [], 0
        while len(out) < self.levels:
            e = Fraction(1, 2 ** i)
            if e < self.r:
                out.append(self.r - e)
            i += 1
        return out

    def expand(self) -> "Node":
        return Node(tuple((Leaf(minkowski_cube(self.P, s)),) for s in self.radii()))


@dataclass(frozen=True)
class Node:
    """Union over rows of the intersection of each row."""

    rows: tuple
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.rows)
        if not rows or any(not r for r in rows):
            raise MalformedInput("a node needs nonempty rows")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "_hash", hash(rows))

    def __hash__(self):
        return self._hash


def cgc_nodes(c) -> list:
    """Distinct subterms, children before parents."""
    seen, out = set(), []
    stack = [(c, False)]
    while stack:
        n, done = stack.pop()
        if done:
            out.append(n)
            continue
        if id(n) in seen:
            continue
        seen.add(id(n))
        stack.append((n, True))
        if isinstance(n, Node):
            stack.extend((ch, False) for row in reversed(n.rows) for ch in reversed(row))
    return out


def eval_cgc(c, x: Sequence) -> bool:
    x = vec(x)
    memo = {}

    def go(n):
        k = id(n)
        if k not in memo:
            if isinstance(n, Leaf):
                memo[k] = hull_membership(x, n.P)
            elif isinstance(n, OpenNbhd):
                memo[k] = hull_distance_inf(x, n.P) < n.r
            else:
                memo[k] = any(all(go(ch) for ch in row) for row in n.rows)
        return memo[k]

    return go(c)


def cgc_rank(c) -> int:
    memo = {}
    for n in cgc_nodes(c):
        if isinstance(n, Leaf):
            memo[id(n)] = 0
        elif isinstance(n, OpenNbhd):
            memo[id(n)] = 1
        else:
            memo[id(n)] = 1 + max(memo[id(ch)] for row in n.rows for ch in row)
    return memo[id(c)]


def validate_cgc(c, samples: Sequence = ()) -> dict:
    """Check that row intersections increase at every node.

    Consecutive rows are certified when the later row's conjuncts are a
    subset of the earlier row's, or when both are single polytopes related
    by inclusion.  Other pairs are tested on the given samples only and
    counted as sampled.
    """
    rep = {"ok": True, "nodes": 0, "certified": 0, "sampled": 0, "violations": []}
    for n in cgc_nodes(c):
        if isinstance(n, OpenNbhd):
            rep["nodes"] += 1
            rep["certified"] += 1  # radii r - 2^-i increase with i
            continue
        if not isinstance(n, Node):
            continue
        rep["nodes"] += 1
        for i in range(len(n.rows) - 1):
            lo, hi = n.rows[i], n.rows[i + 1]
            if set(hi) <= set(lo):
                rep["certified"] += 1
            elif len(lo) == len(hi) == 1 and isinstance(lo[0], Leaf) and isinstance(hi[0], Leaf):
                if polytope_subset(lo[0].P, hi[0].P):
                    rep["certified"] += 1
                else:
                    rep["violations"].append({"row": i, "kind": "polytope"})
            else:
                rep["sampled"] += 1
                bad = [x for x in samples
                       if all(eval_cgc(ch, x) for ch in lo) and not all(eval_cgc(ch, x) for ch in hi)]
                if bad:
                    rep["violations"].append({"row": i, "kind": "sampled",
                                              "point": [str(v) for v in bad[0]]})
    rep["ok"] = not rep["violations"]
    return rep


# ------------------------------------------------------------ membership


def _threshold(s: int) -> Fraction:
    return Fraction(16, 2 ** s)


def j_member(node: PreissNode, A: SouslinScheme, S: GraphTree) -> bool:
    n = len(node.u)
    if n > A.depth:
        raise CapacityExceeded(f"node length {n} beyond scheme depth {A.depth}")
    if A.restricted(node.u, node.m).is_empty:
        return False
    if not S.accepts(zip(node.b, node.d)):
        return False
    for s in range(n + 1):
        H = hull_of_boxset(A.restricted(node.u[:s], node.m))
        if H.is_empty or not hull_distance_inf(anchor(node.b[:s], A.dimension), H) < _threshold(s):
            return False
    return True


# ------------------------------------------------------------- recursion


@dataclass
class PreissReport:
    outcome: str
    code: object = None
    explored: dict = field(default_factory=dict)
    cases: dict = field(default_factory=dict)
    verification: dict = field(default_factory=dict)
    guarantee_cube: int = 0
    cubes: int = 0
    fuel_used: int = 0
    exhausted_by: str | None = None


def _subtree_ids(A: SouslinScheme) -> dict:
    """Intern every word by the scheme values below it, so words with equal
    futures share recursion results."""
    intern, sid = {}, {}

    def go(u):
        kids = () if len(u) == A.depth else tuple(go(u + (j,)) for j in range(A.alphabet))
        key = (A[u], kids)
        sid[u] = intern.setdefault(key, len(intern))
        return sid[u]

    go(())
    return sid


class _OutOfFuel(Exception):
    def __init__(self, why):
        self.why = why


def preiss_separate(A: SouslinScheme, S: GraphTree, M: int = 2, fuel: int = 10_000,
                    levels: int = 6) -> PreissReport:
    if A.kind != GOOD:
        raise PreconditionError(f"scheme kind {A.kind!r} is not good")
    if S.side != BAIRE:
        raise MalformedInput("B must be presented by a Baire-side tree")
    if fuel <= 0:
        raise PreconditionError("fuel must be positive")
    if not 1 <= M <= MAX_CUBES:
        raise PreconditionError(f"cube range must lie in 1..{MAX_CUBES}")
    N = A.dimension
    K = S.alphabet_bound
    cube_leaf = Leaf(polytope_from_box(Box.cube(M, N)))
    empty_leaf = Leaf(EMPTY)
    sid = _subtree_ids(A)
    hulls = {}
    memo = {}
    explored = {}
    cases = {"1a": 0, "1b": 0, "1c": 0, "2": 0}
    budget = [fuel]

    def hull(u, m):
        key = (m, sid[u])
        if key not in hulls:
            Q = A.restricted(u, m)
            hulls[key] = (Q, hull_of_boxset(Q))
        return hulls[key]

    def gap_check(b2, H, n):
        r = Fraction(1, 2 ** n)
        if hull_distance_inf(anchor(b2, N), H) < 8 * r:
            raise ConstantsViolation(f"anchor of {b2} within 2^{3 - n} of the hull")
        box = word_box(b2, N).closure()
        pts = box.vertices() + [tuple((a + c) / 2 for a, c in zip(box.lo, box.hi))]
        for y in pts:
            if not hull_distance_inf(y, H) > r:
                raise ConstantsViolation(f"B-point {y} through {b2} within 2^-{n} of the hull")

    def code(m, b, q, u):
        key = (m, b, q, sid[u])
        if key in memo:
            return memo[key]
        n = len(u)
        if n >= A.depth:
            raise _OutOfFuel("depth")
        if budget[0] <= 0:
            raise _OutOfFuel("fuel")
        budget[0] -= 1
        explored[n] = explored.get(n, 0) + 1
        D = {}
        for j in range(A.alphabet):
            u2 = u + (j,)
            Q, H = hull(u2, m)
            if Q.is_empty:
                for k, l in product(range(K), repeat=2):
                    D[k, l, j] = empty_leaf
                cases["1a"] += K * K
                continue
            for k, l in product(range(K), repeat=2):
                q2 = S.step(q, (k, l))
                if q2 is None:
                    D[k, l, j] = cube_leaf
                    cases["1b"] += 1
                    continue
                b2 = b + (k,)
                if not hull_distance_inf(anchor(b2, N), H) < _threshold(n + 1):
                    gap_check(b2, H, n)
                    D[k, l, j] = OpenNbhd(H, Fraction(1, 2 ** n), levels)
                    cases["1c"] += 1
                else:
                    cases["2"] += 1
                    D[k, l, j] = code(m, b2, q2, u2)
        rows = []
        for j in range(A.alphabet):
            row = [D[k, l, i] for i in range(j, A.alphabet) for k, l in product(range(K), repeat=2)]
            rows.append(tuple(dict.fromkeys(row)))
        memo[key] = Node(tuple(rows))
        return memo[key]

    comps = []
    try:
        for m in range(M):
            root = PreissNode(m)
            comps.append(code(m, (), S.root, ()) if j_member(root, A, S) else empty_leaf)
    except _OutOfFuel as exc:
        return PreissReport(FUEL_EXHAUSTED, explored=_sorted(explored), cases=cases, guarantee_cube=M - 1,
                            cubes=M, fuel_used=fuel - budget[0], exhausted_by=exc.why)
    top = Node(tuple(tuple(comps[s] for s in range(m, M)) for m in range(M)))
    return PreissReport(CODE_EMITTED, code=top, explored=_sorted(explored), cases=cases,
                        guarantee_cube=M - 1, cubes=M, fuel_used=fuel - budget[0])


def _sorted(d: dict) -> dict:
    return {k: d[k] for k in sorted(d)}


# ---------------------------------------------------------- verification


def grid(radius: int, dim: int, step: Fraction = Fraction(1, 4)) -> list:
    """Rational grid of the given step over [-radius, radius]^dim."""
    n = int(2 * radius / step)
    axis = [-radius + step * i for i in range(n + 1)]
    return [tuple(p) for p in product(axis, repeat=dim)]


def sample_addresses(S: GraphTree, max_len: int = 6, limit: int = 64) -> list[UPPoint]:
    """Ultimately periodic first coordinates of S's branches, read off the
    label paths of length <= max_len that revisit a state."""
    out = {}
    frontier = [((), (S.root,))]
    for _ in range(max_len):
        nxt = []
        for labs, states in frontier:
            for lab, r in S.children(states[-1]):
                labs2, states2 = labs + (lab,), states + (r,)
                if r in states:
                    i = states.index(r)
                    word = tuple(a for a, _ in labs2)
                    out.setdefault(UPPoint(word[:i], word[i:]), None)
                else:
                    nxt.append((labs2, states2))
        frontier = nxt
    return sorted(out, key=lambda p: (len(p.prefix) + len(p.period), p.prefix, p.period))[:limit]


def verify_preiss(A: SouslinScheme, S: GraphTree, c, samples: Sequence = (), b_samples: Sequence = (),
                  guarantee: int | None = None) -> dict:
    N = A.dimension
    g = Fraction(guarantee) if guarantee is not None else None
    summary = {"a_checked": 0, "b_checked": 0, "b_skipped": 0, "violations": []}
    for x in samples:
        x = vec(x)
        if g is not None and any(abs(v) > g for v in x):
            continue
        if not depth_approx_member(A, x, A.depth):
            continue
        summary["a_checked"] += 1
        if not eval_cgc(c, x):
            summary["violations"].append({"side": "A", "point": [str(v) for v in x]})
    for y in b_samples:
        if not member_projection(S, y):
            summary["b_skipped"] += 1
            continue
        p = sigma_limit(y, N)
        summary["b_checked"] += 1
        if eval_cgc(c, p):
            summary["violations"].append({"side": "B", "address": str(y), "point": [str(v) for v in p]})
    return summary


def run_preiss(A: SouslinScheme, S: GraphTree, cfg: PreissConfig = PreissConfig(),
               verify: bool = True) -> PreissReport:
    """Separate, then verify on the step-1/4 grid of the guarantee cube and
    on the sampled B-addresses."""
    rep = preiss_separate(A, S, cfg.cubes, cfg.fuel, cfg.levels)
    if verify and rep.code is not None:
        pts = grid(rep.guarantee_cube, A.dimension)
        v = verify_preiss(A, S, rep.code, pts, sample_addresses(S), rep.guarantee_cube)
        v["cgc"] = validate_cgc(rep.code, pts)
        rep.verification = v
    return rep


# ------------------------------------------------------------------ JSON


def materialize(c):
    """Replace every open neighbourhood by its exhaustion by compact polytopes."""
    memo = {}
    for n in cgc_nodes(c):
        if isinstance(n, OpenNbhd):
            memo[id(n)] = n.expand()
        elif isinstance(n, Node):
            memo[id(n)] = Node(tuple(tuple(memo[id(ch)] for ch in row) for row in n.rows))
        else:
            memo[id(n)] = n
    return memo[id(c)]


def cgc_to_json(c, expand: bool = False) -> dict:
    from .serialize import _dag_dump, fmt_rat, polytope_to_json

    def kids(n):
        return [ch for row in n.rows for ch in row] if isinstance(n, Node) else []

    def leaf_json(n):
        if isinstance(n, Leaf):
            return {"polytope": polytope_to_json(n.P)}
        return {"open_nbhd": {"polytope": polytope_to_json(n.P), "radius": fmt_rat(n.r), "levels": n.levels}}

    return _dag_dump(materialize(c) if expand else c, kids, leaf_json,
                     lambda n, dump: {"union": [[dump(ch) for ch in row] for row in n.rows]})


def cgc_from_json(obj):
    from .serialize import _dag_load, polytope_from_json, rat

    def load(o, rec, where):
        if not isinstance(o, dict):
            raise MalformedInput(f"{where}: expected an object")
        if "polytope" in o:
            return Leaf(polytope_from_json(o["polytope"], where))
        if "open_nbhd" in o:
            body = o["open_nbhd"]
            try:
                r = rat(body["radius"])
                lv = body.get("levels", 6)
                P = polytope_from_json(body["polytope"], where)
            except (KeyError, TypeError):
                raise MalformedInput(f"{where}: open_nbhd needs polytope and radius") from None
            if r <= 0 or P.is_empty or not isinstance(lv, int) or lv < 0:
                raise MalformedInput(f"{where}: bad open_nbhd")
            return OpenNbhd(P, r, lv)
        if "union" in o:
            rows = o["union"]
            if not isinstance(rows, list) or not rows or any(not isinstance(r, list) or not r for r in rows):
                raise MalformedInput(f"{where}: union needs a nonempty list of nonempty rows")
            return Node(tuple(tuple(rec(ch, f"{where}.union[{i}][{j}]") for j, ch in enumerate(row))
                              for i, row in enumerate(rows)))
        raise MalformedInput(f"{where}: expected 'polytope', 'open_nbhd' or 'union'")

    return _dag_load(obj, load)
