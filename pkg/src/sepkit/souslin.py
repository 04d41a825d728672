"""Interval addresses for R^N and finite-depth Souslin schemes.

The interval scheme gives every nonempty letter word u a half-open
interval I_u: the first letter picks a unit interval ([k, k+1) for 2k,
[-(k+1), -k) for 2k+1) and each further letter n picks the n-th piece of
the geometric subdivision of the current interval [a, b), namely
[a + (b-a)(1 - 2^-n), a + (b-a)(1 - 2^-(n+1))).

In dimension N a letter is the Cantor code of an N-tuple of coordinate
letters, so a word addresses the product of N intervals.

A SouslinScheme assigns a finite union of closed boxes to every word of
length at most `depth` over the letters 0..alphabet-1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

from .cantor import UPPoint
from .errors import CapacityExceeded, MalformedInput
from .geometry import Box, BoxSet, Vec, boxset_subset, vec
from .graphtree import BAIRE, GraphTree

FinSeq = tuple[int, ...]

DEFAULT_MAX_PATHS = 200_000


# ------------------------------------------------------------- pairings


def cantor_pair(a: int, b: int) -> int:
    return (a + b) * (a + b + 1) // 2 + b


def cantor_unpair(z: int) -> tuple[int, int]:
    w = (math.isqrt(8 * z + 1) - 1) // 2
    b = z - w * (w + 1) // 2
    return w - b, b


def tuple_pair(letters: Sequence[int]) -> int:
    """Iterated Cantor pairing of an N-tuple (identity for N = 1)."""
    z = letters[-1]
    for a in reversed(letters[:-1]):
        z = cantor_pair(a, z)
    return z


def tuple_unpair(z: int, n: int) -> tuple[int, ...]:
    out = []
    for _ in range(n - 1):
        a, z = cantor_unpair(z)
        out.append(a)
    out.append(z)
    return tuple(out)


def square_pair(a: int, b: int) -> int:
    """Szudzik pairing; maps {0..K-1}^2 onto {0..K^2-1} for every K."""
    return b * b + a if a < b else a * a + a + b


def square_unpair(z: int) -> tuple[int, int]:
    s = math.isqrt(z)
    r = z - s * s
    return (r, s) if r < s else (s, r - s)


def seq_pair(u: FinSeq, v: FinSeq) -> FinSeq:
    if len(u) != len(v):
        raise MalformedInput("paired words must have equal length")
    return tuple(square_pair(a, b) for a, b in zip(u, v))


def seq_unpair(w: FinSeq) -> tuple[FinSeq, FinSeq]:
    pairs = [square_unpair(z) for z in w]
    return tuple(a for a, _ in pairs), tuple(b for _, b in pairs)


def preceq(c: FinSeq, u: FinSeq) -> bool:
    """c(i) <= u(i) on the common length."""
    return all(a <= b for a, b in zip(c, u))


# ------------------------------------------------------ interval scheme


@dataclass(frozen=True)
class HalfOpenBox:
    """Product of intervals [lo_i, hi_i); None bounds mean unbounded."""

    lo: tuple
    hi: tuple

    @property
    def bounded(self) -> bool:
        return None not in self.lo and None not in self.hi

    def contains(self, x: Sequence) -> bool:
        return all((a is None or a <= v) and (b is None or v < b) for a, v, b in zip(self.lo, x, self.hi))

    def closure(self) -> Box:
        if not self.bounded:
            raise ValueError("closure of an unbounded box")
        return Box(self.lo, self.hi)

    def length(self) -> Fraction:
        return max(b - a for a, b in zip(self.lo, self.hi))


def _child(a: Fraction, b: Fraction, n: int) -> tuple[Fraction, Fraction]:
    span = b - a
    return a + span * (1 - Fraction(1, 2 ** n)), a + span * (1 - Fraction(1, 2 ** (n + 1)))


def _top(letter: int) -> tuple[Fraction, Fraction]:
    k, odd = divmod(letter, 2)
    return (Fraction(-(k + 1)), Fraction(-k)) if odd else (Fraction(k), Fraction(k + 1))


def interval_bounds(u: FinSeq) -> tuple[Fraction, Fraction]:
    if not u:
        raise ValueError("the empty word addresses the whole line")
    a, b = _top(u[0])
    for n in u[1:]:
        a, b = _child(a, b, n)
    return a, b


def interval_scheme(u: FinSeq) -> HalfOpenBox:
    if not u:
        return HalfOpenBox((None,), (None,))
    a, b = interval_bounds(u)
    return HalfOpenBox((a,), (b,))


def components(b: FinSeq, dim: int) -> list[FinSeq]:
    """Split a word of N-dimensional letters into N coordinate words."""
    tuples = [tuple_unpair(z, dim) for z in b]
    return [tuple(t[i] for t in tuples) for i in range(dim)]


def sigma_box(parts: Sequence[FinSeq]) -> HalfOpenBox:
    """Product of the intervals of N coordinate words of equal length."""
    if len({len(p) for p in parts}) > 1:
        raise MalformedInput("coordinate words must have equal length")
    if any(not p for p in parts):
        return HalfOpenBox((None,) * len(parts), (None,) * len(parts))
    bounds = [interval_bounds(p) for p in parts]
    return HalfOpenBox(tuple(a for a, _ in bounds), tuple(b for _, b in bounds))


def word_box(b: FinSeq, dim: int) -> HalfOpenBox:
    return sigma_box(components(b, dim))


def anchor(b: FinSeq, dim: int) -> Vec:
    """Lower corner of the box a word addresses; the origin for the empty word."""
    if not b:
        return (Fraction(0),) * dim
    return word_box(b, dim).lo


def address_1d(r, t: int) -> FinSeq:
    """First t letters of the address of the real r."""
    r = Fraction(r)
    if t == 0:
        return ()
    letter = 2 * math.floor(r) if r >= 0 else 2 * (math.ceil(-r) - 1) + 1
    out = [letter]
    a, b = _top(letter)
    while len(out) < t:
        f = (r - a) / (b - a)
        n = 0
        while not f < 1 - Fraction(1, 2 ** (n + 1)):
            n += 1
        out.append(n)
        a, b = _child(a, b, n)
    return tuple(out)


def address(x: Sequence, t: int) -> FinSeq:
    parts = [address_1d(v, t) for v in x]
    return tuple(tuple_pair([p[i] for p in parts]) for i in range(t))


def limit_1d(prefix: FinSeq, period: FinSeq) -> Fraction:
    if not prefix:
        prefix = period
    a, b = interval_bounds(prefix)
    alpha, beta = Fraction(0), Fraction(1)
    for n in reversed(period):
        w = Fraction(1, 2 ** (n + 1))
        alpha = (1 - 2 * w) + w * alpha
        beta = w * beta
    return a + (b - a) * alpha / (1 - beta)


def sigma_limit(addr: UPPoint, dim: int) -> Vec:
    """The point an ultimately periodic address converges to (always rational)."""
    pre = components(addr.prefix, dim)
    per = components(addr.period, dim)
    return tuple(limit_1d(p, q) for p, q in zip(pre, per))


# --------------------------------------------------------------- schemes


GOOD, NORMAL, RAW = "good", "normal", "raw"


def words(alphabet: int, depth: int) -> Iterable[FinSeq]:
    for n in range(depth + 1):
        yield from product(range(alphabet), repeat=n)


@dataclass(frozen=True)
class SouslinScheme:
    dimension: int
    depth: int
    alphabet: int
    entries: dict = field(hash=False)
    kind: str = RAW
    cube: Fraction | None = None

    def __post_init__(self):
        ents = {tuple(u): v for u, v in self.entries.items()}
        object.__setattr__(self, "entries", ents)
        if self.cube is not None:
            object.__setattr__(self, "cube", Fraction(self.cube))
        if self.kind not in (GOOD, NORMAL, RAW):
            raise MalformedInput(f"unknown scheme kind {self.kind!r}")
        expected = sum(self.alphabet ** n for n in range(self.depth + 1))
        bad = [u for u in ents if len(u) > self.depth or any(not 0 <= a < self.alphabet for a in u)]
        if bad or len(ents) != expected:
            raise MalformedInput("scheme is not total on its declared domain")
        for u, q in ents.items():
            if any(b.dim != self.dimension for b in q.boxes):
                raise MalformedInput(f"entry {u} has boxes of the wrong dimension")

    def __getitem__(self, u) -> BoxSet:
        u = tuple(u)
        if len(u) > self.depth:
            raise CapacityExceeded(f"word of length {len(u)} beyond scheme depth {self.depth}")
        return self.entries[u]

    def restricted(self, u, m) -> BoxSet:
        """Q_u intersected with the cube [-m, m]^N."""
        return self[u].intersect_box(Box.cube(m, self.dimension))

    @classmethod
    def from_rule(cls, rule, dimension, depth, alphabet, kind=GOOD, cube=None) -> "SouslinScheme":
        return cls(dimension, depth, alphabet, {u: rule(u) for u in words(alphabet, depth)}, kind, cube)

    @classmethod
    def constant(cls, boxes: BoxSet, dimension, depth, alphabet=1) -> "SouslinScheme":
        return cls.from_rule(lambda u: boxes, dimension, depth, alphabet)


def _cube(m, dim) -> Box:
    return Box.cube(m, dim)


def ball_box(c1: FinSeq, dim: int, cube: Box) -> Box | None:
    """Closed ball of radius 2^(2 - |c1|) around the anchor of c1, inside the cube."""
    if not c1:
        return cube
    r = Fraction(4, 2 ** len(c1))
    return Box.ball(anchor(c1, dim), r).intersect(cube)


def build_good_scheme(T: GraphTree, dim: int, depth: int, m, alphabet: int | None = None,
                      max_paths: int = DEFAULT_MAX_PATHS) -> SouslinScheme:
    """Q_u = union of the balls around anchor(c1) over pairs (c1, c2) in T of
    length |u| whose paired word lies below u letter by letter."""
    if T.side != BAIRE:
        raise MalformedInput("good schemes are built from Baire-side trees")
    K = alphabet if alphabet is not None else T.alphabet_bound ** 2
    cube = _cube(m, dim)
    entries = {(): BoxSet((cube,))}
    balls = {}
    budget = [max_paths]

    def ball(c1):
        if c1 not in balls:
            balls[c1] = ball_box(c1, dim, cube)
        return balls[c1]

    def grow(u, matches):
        if len(u) == depth:
            return
        for j in range(K):
            nxt = [(r, c1 + (a,)) for q, c1 in matches
                   for (a, w), r in T.children(q) if square_pair(a, w) <= j]
            budget[0] -= len(nxt)
            if budget[0] < 0:
                raise CapacityExceeded(f"more than {max_paths} pair paths enumerated")
            v = u + (j,)
            bs = [ball(c1) for c1 in dict.fromkeys(c1 for _, c1 in nxt)]
            entries[v] = BoxSet.of(b for b in bs if b is not None)
            grow(v, nxt)

    grow((), [(T.root, ())])
    return SouslinScheme(dim, depth, K, entries, GOOD, Fraction(m))


def p_set(T: GraphTree, dim: int, u: FinSeq, c: FinSeq, m) -> BoxSet:
    """The set P^u_c: the ball of c if c lies below u and pairs into T, else empty."""
    if not preceq(c, u):
        return BoxSet()
    c1, c2 = seq_unpair(c)
    if not T.accepts(zip(c1, c2)):
        return BoxSet()
    b = ball_box(c1, dim, _cube(m, dim))
    return BoxSet() if b is None else BoxSet((b,))


def build_normal_scheme(T: GraphTree, dim: int, depth: int, m, alphabet: int | None = None) -> SouslinScheme:
    """P_w = closure of the box addressed by w1 when (w1, w2) is in T, else empty."""
    K = alphabet if alphabet is not None else T.alphabet_bound ** 2
    cube = _cube(m, dim)

    def rule(w):
        u, v = seq_unpair(w)
        if not T.accepts(zip(u, v)):
            return BoxSet()
        if not w:
            return BoxSet((cube,))
        b = word_box(u, dim).closure().intersect(cube)
        return BoxSet() if b is None else BoxSet((b,))

    return SouslinScheme.from_rule(rule, dim, depth, K, NORMAL, Fraction(m))


# ------------------------------------------------------------ validation


@dataclass
class ValidationReport:
    ok: bool = True
    clauses: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)
    checks: int = 0

    def add(self, violation: dict):
        self.ok = False
        self.violations.append(violation)

    def to_json(self) -> dict:
        return {"ok": self.ok, "clauses": self.clauses, "violations": self.violations, "checks": self.checks}


def _check_regular(s: SouslinScheme, rep: ValidationReport, exhaustive: bool):
    for u in words(s.alphabet, s.depth - 1):
        for j in range(s.alphabet):
            v = u + (j,)
            targets = [u[:k] for k in range(len(u) + 1)] if exhaustive else [u]
            for t in targets:
                rep.checks += 1
                if s[v] is not s[t] and not boxset_subset(s[v], s[t]):
                    rep.add({"clause": "c", "outer": list(t), "inner": list(v)})


def _check_increasing(s: SouslinScheme, rep: ValidationReport, exhaustive: bool):
    for w in words(s.alphabet, s.depth):
        for p, i in enumerate(w):
            js = range(i + 1, s.alphabet) if exhaustive else range(i + 1, min(i + 2, s.alphabet))
            for j in js:
                w2 = w[:p] + (j,) + w[p + 1:]
                rep.checks += 1
                if s[w] is not s[w2] and not boxset_subset(s[w], s[w2]):
                    rep.add({"clause": "d", "u": list(w[:p]), "i": i, "j": j, "v": list(w[p + 1:])})


def validate_good(s: SouslinScheme, exhaustive: bool = False) -> ValidationReport:
    """Check closedness, regularity and the inserted-letter increasing clause.

    By default only one-step generators are compared (u against u+j for
    regularity, letter i against i+1 for the increasing clause); inclusion
    is transitive, so this covers every pair.  exhaustive=True compares
    all pairs directly.
    """
    rep = ValidationReport()
    rep.clauses["b"] = "satisfied-by-representation"
    n = len(rep.violations)
    _check_regular(s, rep, exhaustive)
    rep.clauses["c"] = "ok" if len(rep.violations) == n else "violated"
    n = len(rep.violations)
    _check_increasing(s, rep, exhaustive)
    rep.clauses["d"] = "ok" if len(rep.violations) == n else "violated"
    return rep


def validate_normal(s: SouslinScheme) -> ValidationReport:
    rep = ValidationReport()
    rep.clauses["b"] = "satisfied-by-representation"
    _check_regular(s, rep, False)
    rep.clauses["c"] = "ok" if rep.ok else "violated"
    n = len(rep.violations)
    for w in words(s.alphabet, s.depth):
        if w:
            rep.checks += 1
            if s[w].diameter() > Fraction(4, 2 ** len(w)):
                rep.add({"clause": "diameter", "u": list(w), "diameter": str(s[w].diameter())})
    rep.clauses["diameter"] = "ok" if len(rep.violations) == n else "violated"
    return rep


def check_good_claims(T: GraphTree, dim: int, depth: int, m, alphabet: int | None = None) -> ValidationReport:
    """Inclusions among the sets P^u_c on the finite domain.

    1. c a prefix of d  => P^u_d within P^u_c
    2. u a prefix of v  => P^v_c within P^u_c
    3. u below v letterwise, same length => P^u_c within P^v_c

    c ranges over the paired words of T (other c give the empty set);
    each relation is checked on its one-step generators.
    """
    K = alphabet if alphabet is not None else T.alphabet_bound ** 2
    cube = _cube(m, dim)
    cs = [()]
    frontier = [((), T.root, ())]
    for _ in range(depth):
        nxt = []
        for c, q, c1 in frontier:
            for (a, w), r in T.children(q):
                z = square_pair(a, w)
                if z < K:
                    nxt.append((c + (z,), r, c1 + (a,)))
        cs += [c for c, _, _ in nxt]
        frontier = nxt
    ball = {}
    for c in cs:
        c1, _ = seq_unpair(c)
        ball[c] = ball_box(c1, dim, cube)

    def P(u, c):
        b = ball[c] if preceq(c, u) else None
        return BoxSet() if b is None else BoxSet((b,))

    incl = {}

    def sub(a: BoxSet, b: BoxSet) -> bool:
        key = (a, b)
        if key not in incl:
            incl[key] = boxset_subset(a, b)
        return incl[key]

    rep = ValidationReport()
    children = {}
    for c in cs:
        if c:
            children.setdefault(c[:-1], []).append(c)
    domain = list(words(K, depth))
    for name in ("1", "2", "3"):
        n = len(rep.violations)
        for u in domain:
            if name == "1":
                pairs = [((u, d), (u, d[:-1])) for d in cs if d]
            elif name == "2":
                pairs = [((u + (j,), c), (u, c)) for j in range(K) for c in cs] if len(u) < depth else []
            else:
                pairs = [((u, c), (u[:p] + (u[p] + 1,) + u[p + 1:], c))
                         for p in range(len(u)) if u[p] + 1 < K for c in cs]
            for (ua, ca), (ub, cb) in pairs:
                rep.checks += 1
                if not sub(P(ua, ca), P(ub, cb)):
                    rep.add({"claim": name, "inner": [list(ua), list(ca)], "outer": [list(ub), list(cb)]})
        rep.clauses["claim" + name] = "ok" if len(rep.violations) == n else "violated"
    return rep


def depth_approx_member(s: SouslinScheme, x: Sequence, t: int, start: FinSeq = ()) -> bool:
    """Some word of length t extending `start` keeps x in Q along all its prefixes."""
    x = vec(x)
    if t > s.depth:
        raise CapacityExceeded(f"approximation depth {t} beyond scheme depth {s.depth}")
    if not all(s[start[:k]].contains(x) for k in range(len(start) + 1)):
        return False
    frontier = [tuple(start)]
    for _ in range(len(start), t):
        frontier = [w + (j,) for w in frontier for j in range(s.alphabet) if s[w + (j,)].contains(x)]
        if not frontier:
            return False
    return bool(frontier)


# ----------------------------------------------------------------- JSON


def _fmt(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def box_to_json(b: Box) -> dict:
    return {"lo": [_fmt(v) for v in b.lo], "hi": [_fmt(v) for v in b.hi]}


def scheme_to_json(s: SouslinScheme) -> dict:
    out = {"dimension": s.dimension, "depth": s.depth, "alphabet": s.alphabet, "kind": s.kind,
           "entries": [{"u": list(u), "boxes": [box_to_json(b) for b in q.boxes]}
                       for u, q in sorted(s.entries.items(), key=lambda kv: (len(kv[0]), kv[0]))]}
    if s.cube is not None:
        out["cube"] = _fmt(s.cube)
    return out


def scheme_from_json(obj: dict) -> SouslinScheme:
    from .serialize import boxset_from_json, rat
    try:
        entries = {}
        for n, e in enumerate(obj["entries"]):
            boxes = e["boxes"]
            if isinstance(boxes, list):
                boxes = {"boxes": boxes}
            entries[tuple(int(a) for a in e["u"])] = boxset_from_json(boxes, where=f"entries[{n}]")
        cube = obj.get("cube")
        return SouslinScheme(int(obj["dimension"]), int(obj["depth"]), int(obj["alphabet"]), entries,
                             obj.get("kind", RAW), None if cube is None else rat(cube))
    except KeyError as exc:
        raise MalformedInput(f"scheme JSON lacks field {exc}") from None
