"""Ultimately periodic points, semi-positive codes and Borel codes on 2^omega.

SPCode
    SPLeaf(k): k = 0 is the empty set, k = 1 the whole space, and
    k = n + 2 the coordinate set U_n = {x : x(n) = 1}.
    SPNode(grid): union over rows of the intersection of the row.
BorelCode
    CoCylinder(w): complement of the cylinder of the binary word w.
    CoUnion(children): union of the complements of the children.

Codes may share subterms; every traversal memoizes on object identity so
shared DAGs are walked once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product
from typing import Sequence, Union

from .errors import CapacityExceeded, MalformedInput
from .sequences import LinOrder

MONOTONE_BOUND = 16


@dataclass(frozen=True)
class UPPoint:
    """An ultimately periodic sequence prefix + period + period + ...

    Stored in canonical form: primitive period, shortest prefix.
    """

    prefix: tuple[int, ...]
    period: tuple[int, ...]

    def __post_init__(self):
        prefix, period = tuple(self.prefix), tuple(self.period)
        if not period:
            raise MalformedInput("period must be nonempty")
        n = len(period)
        for d in range(1, n + 1):
            if n % d == 0 and period[:d] * (n // d) == period:
                period = period[:d]
                break
        while prefix and prefix[-1] == period[-1]:
            period = period[-1:] + period[:-1]
            prefix = prefix[:-1]
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "period", period)

    def __getitem__(self, n: int) -> int:
        if n < len(self.prefix):
            return self.prefix[n]
        return self.period[(n - len(self.prefix)) % len(self.period)]

    def take(self, n: int) -> tuple[int, ...]:
        return tuple(self[i] for i in range(n))

    @classmethod
    def constant(cls, a: int) -> "UPPoint":
        return cls((), (a,))

    @classmethod
    def parse(cls, text: str) -> "UPPoint":
        """Read 'prefix(period)'; letters are digits, or comma separated."""
        text = text.strip()
        if not text.endswith(")") or "(" not in text:
            raise MalformedInput(f"point literal {text!r} must look like prefix(period)")
        head, tail = text[:-1].split("(", 1)

        def letters(s):
            s = s.strip().strip(",")
            if not s:
                return ()
            if "," in s:
                return tuple(int(a) for a in s.split(","))
            if not s.isdigit():
                raise MalformedInput(f"bad letters {s!r} in point literal")
            return tuple(int(a) for a in s)

        return cls(letters(head), letters(tail))

    def __str__(self) -> str:
        if all(a < 10 for a in self.prefix + self.period):
            return "".join(map(str, self.prefix)) + "(" + "".join(map(str, self.period)) + ")"
        p = ",".join(map(str, self.prefix))
        return p + ("," if p else "") + "(" + ",".join(map(str, self.period)) + ")"


ZERO = UPPoint.constant(0)
ONE = UPPoint.constant(1)


def zip_points(x: UPPoint, y: UPPoint) -> tuple[int, int]:
    """A window length and period length on which both points are periodic."""
    pre = max(len(x.prefix), len(y.prefix))
    per = math.lcm(len(x.period), len(y.period))
    return pre, per


def point_subseteq(x: UPPoint, y: UPPoint) -> bool:
    pre, per = zip_points(x, y)
    return all(not (x[n] == 1 and y[n] != 1) for n in range(pre + per))


# ---------------------------------------------------------------- codes


@dataclass(frozen=True)
class SPLeaf:
    k: int

    def __post_init__(self):
        if self.k < 0:
            raise MalformedInput("leaf index must be a natural number")


@dataclass(frozen=True)
class SPNode:
    grid: tuple
    _h: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        grid = tuple(tuple(row) for row in self.grid)
        if not grid or any(not row for row in grid):
            raise MalformedInput("grid must have at least one row and one column")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "_h", hash(grid))

    def __hash__(self):
        return self._h


SPCode = Union[SPLeaf, SPNode]

V0 = SPLeaf(0)
V1 = SPLeaf(1)


def U(n: int) -> SPLeaf:
    """Leaf for the coordinate set {x : x(n) = 1}."""
    return SPLeaf(n + 2)


@dataclass(frozen=True)
class CoCylinder:
    word: tuple[int, ...]

    def __post_init__(self):
        w = tuple(int(b) for b in self.word)
        if any(b not in (0, 1) for b in w):
            raise MalformedInput("cylinder words are binary")
        object.__setattr__(self, "word", w)


@dataclass(frozen=True)
class CoUnion:
    children: tuple
    _h: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        ch = tuple(self.children)
        if not ch:
            raise MalformedInput("a Borel node needs at least one child")
        object.__setattr__(self, "children", ch)
        object.__setattr__(self, "_h", hash(ch))

    def __hash__(self):
        return self._h


BorelCode = Union[CoCylinder, CoUnion]


def subterms(c) -> list:
    """Distinct subterms (by identity) in post-order: children before parents."""
    seen, out = set(), []
    stack = [(c, False)]
    while stack:
        node, done = stack.pop()
        if id(node) in seen:
            continue
        if done or isinstance(node, (SPLeaf, CoCylinder)):
            seen.add(id(node))
            out.append(node)
            continue
        stack.append((node, True))
        kids = _kids(node)
        for ch in reversed(kids):
            if id(ch) not in seen:
                stack.append((ch, False))
    return out


def _kids(node) -> list:
    if isinstance(node, SPNode):
        return [ch for row in node.grid for ch in row]
    if isinstance(node, CoUnion):
        return list(node.children)
    return []


def support(c) -> set[int]:
    """Coordinates the code can depend on."""
    out = set()
    for node in subterms(c):
        if isinstance(node, SPLeaf) and node.k >= 2:
            out.add(node.k - 2)
        elif isinstance(node, CoCylinder):
            out.update(range(len(node.word)))
    return out


def eval_spc(c: SPCode, x: UPPoint) -> bool:
    memo = {}

    def go(node):
        key = id(node)
        if key in memo:
            return memo[key]
        if isinstance(node, SPLeaf):
            r = node.k == 1 or (node.k >= 2 and x[node.k - 2] == 1)
        else:
            r = any(all(go(ch) for ch in row) for row in node.grid)
        memo[key] = r
        return r

    return go(c)


def eval_borel(c: BorelCode, x: UPPoint) -> bool:
    memo = {}

    def go(node):
        key = id(node)
        if key in memo:
            return memo[key]
        if isinstance(node, CoCylinder):
            r = x.take(len(node.word)) != node.word
        else:
            r = any(not go(ch) for ch in node.children)
        memo[key] = r
        return r

    return go(c)


def eval_masks(c, coord_mask, full: int) -> int:
    """Evaluate a code on many points at once.

    Points are bit positions of Python ints; coord_mask(k) is the set of
    points whose coordinate k is 1 and `full` is the set of all points.
    Returns the set of points in the code's denotation.
    """
    memo = {}
    cyl_cache = {}
    for node in subterms(c):
        if isinstance(node, SPLeaf):
            r = 0 if node.k == 0 else full if node.k == 1 else coord_mask(node.k - 2)
        elif isinstance(node, SPNode):
            r = 0
            for row in node.grid:
                acc = full
                for ch in row:
                    acc &= memo[id(ch)]
                    if not acc:
                        break
                r |= acc
        elif isinstance(node, CoCylinder):
            r = full
            for i, b in enumerate(node.word):
                key = (i, b)
                if key not in cyl_cache:
                    m = coord_mask(i)
                    cyl_cache[key] = m if b else full & ~m
                r &= cyl_cache[key]
            r = full & ~r
        else:
            r = 0
            for ch in node.children:
                r |= full & ~memo[id(ch)]
        memo[id(node)] = r
    return memo[id(c)]


def _stripes(k: int, width: int) -> int:
    """Bits w < 2**width whose k-th binary digit is 1."""
    step = 1 << k
    if width < 3:
        return sum(1 << w for w in range(1 << width) if w & step)
    # build bytewise: a 2**width-bit int is 2**(width-3) bytes
    if k < 3:
        unit = bytes([(0xAA, 0xCC, 0xF0)[k]])
    else:
        unit = bytes(step // 8) + b"\xff" * (step // 8)
    return int.from_bytes(unit * ((1 << (width - 3)) // len(unit)), "little")


def cube_coord_masks(width: int):
    """Coordinate masks for all points w + tail, |w| = width, tail constant.

    Point index = tail * 2**width + w, where bit i of w is coordinate i.
    Returns (coord_mask, full).
    """
    n = 1 << width
    half = (1 << n) - 1
    full = (half << n) | half
    cache = {}

    def coord_mask(k):
        if k in cache:
            return cache[k]
        if k >= width:
            m = half << n
        else:
            lo = _stripes(k, width)
            m = lo | (lo << n)
        cache[k] = m
        return m

    return coord_mask, full


def point_of_index(idx: int, width: int) -> UPPoint:
    tail, w = divmod(idx, 1 << width)
    return UPPoint(tuple((w >> i) & 1 for i in range(width)), (tail,))


def eval_spc_many(c, points: Sequence[UPPoint]) -> list[bool]:
    """eval_spc (or eval_borel) on a batch of points, via bit masks."""
    cache = {}
    full = (1 << len(points)) - 1

    def coord_mask(k):
        if k not in cache:
            cache[k] = sum(1 << i for i, x in enumerate(points) if x[k] == 1)
        return cache[k]

    m = eval_masks(c, coord_mask, full)
    return [bool((m >> i) & 1) for i in range(len(points))]


def spc_norm(c: SPCode) -> int:
    memo = {}
    for node in subterms(c):
        if isinstance(node, SPLeaf):
            memo[id(node)] = 0
        else:
            memo[id(node)] = 1 + max(memo[id(ch)] for row in node.grid for ch in row)
    return memo[id(c)]


def borel_rank(c: BorelCode) -> int:
    memo = {}
    for node in subterms(c):
        if isinstance(node, CoCylinder):
            memo[id(node)] = 0
        else:
            memo[id(node)] = 1 + max(memo[id(ch)] for ch in node.children)
    return memo[id(c)]


def _coordinate_borel(n: int) -> BorelCode:
    # {x(n) = 0} is the union of the cylinders w0 with |w| = n; a single
    # CoUnion over it yields its complement, which is U_n.
    zero_side = CoUnion(tuple(CoCylinder(w + (0,)) for w in product((0, 1), repeat=n)))
    return CoUnion((zero_side,))


def spc_to_borel(c: SPCode) -> BorelCode:
    """Translate by double complementation.

    CoUnion(children) denotes the union of complements, so a union of
    intersections becomes CoUnion over rows of CoUnion over the row.
    """
    memo = {}
    empty = CoCylinder(())
    whole = CoUnion((empty,))
    for node in subterms(c):
        if isinstance(node, SPLeaf):
            if node.k == 0:
                r = empty
            elif node.k == 1:
                r = whole
            else:
                r = _coordinate_borel(node.k - 2)
        else:
            r = CoUnion(tuple(CoUnion(tuple(memo[id(ch)] for ch in row)) for row in node.grid))
        memo[id(node)] = r
    return memo[id(c)]


def truth_table(c, coords: Sequence[int]) -> int:
    """Bit a of the result is the value at the point whose coordinates in
    `coords` follow the bits of a, with constant tail given by the next bit
    (index len(coords)); coordinates outside `coords` take the tail value."""
    n = len(coords)
    total = 1 << (n + 1)
    full = (1 << total) - 1
    pos = {k: i for i, k in enumerate(coords)}

    def bitmask(i):
        step = 1 << i
        block = ((1 << step) - 1) << step
        return block * (full // ((1 << (2 * step)) - 1))

    tail = bitmask(n)

    def coord_mask(k):
        return bitmask(pos[k]) if k in pos else tail

    return eval_masks(c, coord_mask, full)


def monotone_table(table: int, nbits: int) -> bool:
    total = 1 << nbits
    full = (1 << total) - 1
    for i in range(nbits):
        step = 1 << i
        upper = (((1 << step) - 1) << step) * (full // ((1 << (2 * step)) - 1))
        lower = full & ~upper
        # every point a without bit i must imply the point a + 2**i
        if ((table & lower) << step) & ~table:
            return False
    return True


def is_monotone(c, bound: int = MONOTONE_BOUND) -> bool:
    """Decide monotonicity of the Boolean function the code induces on its
    support (for Borel codes: all coordinates below the longest word),
    with the constant tail treated as one more input."""
    sup = sorted(support(c))
    if len(sup) > bound:
        raise CapacityExceeded(f"support of size {len(sup)} exceeds the bound {bound}")
    if isinstance(c, (CoCylinder, CoUnion)):
        sup = list(range(max(sup) + 1)) if sup else []
        if len(sup) > bound:
            raise CapacityExceeded(f"window of size {len(sup)} exceeds the bound {bound}")
    return monotone_table(truth_table(c, sup), len(sup) + 1)


def is_positive(c: SPCode) -> bool:
    return eval_spc(c, ONE) and not eval_spc(c, ZERO)


# ------------------------------------------------ fixpoint comparisons


@dataclass(frozen=True)
class FixpointTable:
    """Least fixpoint of a comparison operator on a finite universe.

    For the norm-below-order table, entries are pairs (subterm index, k),
    read as "the subterm's norm is at most the type of the initial
    segment of length k".  For the order-below-norm table they are pairs
    (k, subterm index).
    """

    subterms: tuple
    chain: tuple
    entries: frozenset
    rounds: int


def _grid_children(terms):
    index = {id(t): i for i, t in enumerate(terms)}
    return [[index[id(ch)] for row in t.grid for ch in row] if isinstance(t, SPNode) else []
            for t in terms]


def phi_step(entries: frozenset, children, size: int) -> frozenset:
    out = set()
    for i, kids in enumerate(children):
        for k in range(size + 1):
            # a leaf always qualifies; a node needs each child to sit below
            # some element of the segment, i.e. below a shorter segment
            if all(any((ch, r) in entries for r in range(k)) for ch in kids):
                out.add((i, k))
    return frozenset(out)


def psi_step(entries: frozenset, children, size: int) -> frozenset:
    out = set()
    for i, kids in enumerate(children):
        for k in range(size + 1):
            if k == 0 or all(any((r, ch) in entries for ch in kids) for r in range(k)):
                out.add((k, i))
    return frozenset(out)


def _lfp(step, c: SPCode, b: LinOrder) -> FixpointTable:
    chain = tuple(b.chain())
    terms = subterms(c)
    kids = _grid_children(terms)
    entries, rounds = frozenset(), 0
    while True:
        nxt = step(entries, kids, len(chain))
        rounds += 1
        if nxt == entries:
            return FixpointTable(tuple(terms), chain, entries, rounds)
        entries = nxt


def phi_fixpoint(c: SPCode, b: LinOrder) -> FixpointTable:
    return _lfp(phi_step, c, b)


def psi_fixpoint(b: LinOrder, c: SPCode) -> FixpointTable:
    return _lfp(psi_step, c, b)


def norm_le_wo(c: SPCode, b: LinOrder) -> bool:
    t = phi_fixpoint(c, b)
    return (len(t.subterms) - 1, len(t.chain)) in t.entries


def wo_le_norm(b: LinOrder, c: SPCode) -> bool:
    t = psi_fixpoint(b, c)
    return (len(t.chain), len(t.subterms) - 1) in t.entries
