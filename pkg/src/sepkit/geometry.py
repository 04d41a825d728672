"""Exact convex geometry in R^N under the maximum norm.

Box       closed axis-parallel box [lo, hi]
BoxSet    finite union of closed boxes
Polytope  convex hull of finitely many vertices, or the empty polytope
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence

from .errors import MalformedInput, UndefinedDistance
from .lp import OPTIMAL, lp_feasible_min

Vec = tuple[Fraction, ...]


def vec(xs: Iterable) -> Vec:
    return tuple(Fraction(x) for x in xs)


def dist_inf(x: Sequence, y: Sequence) -> Fraction:
    return max((abs(a - b) for a, b in zip(x, y)), default=Fraction(0))


@dataclass(frozen=True, order=True)
class Box:
    lo: Vec
    hi: Vec

    def __post_init__(self):
        lo, hi = vec(self.lo), vec(self.hi)
        if len(lo) != len(hi):
            raise MalformedInput("box corners differ in dimension")
        if any(a > b for a, b in zip(lo, hi)):
            raise MalformedInput(f"empty box {lo} .. {hi}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def dim(self) -> int:
        return len(self.lo)

    @classmethod
    def cube(cls, r, dim: int) -> "Box":
        r = Fraction(r)
        return cls((-r,) * dim, (r,) * dim)

    @classmethod
    def ball(cls, center: Sequence, r) -> "Box":
        """Closed max-norm ball."""
        return cls(tuple(c - r for c in center), tuple(c + r for c in center))

    def contains(self, x: Sequence) -> bool:
        return all(a <= v <= b for a, v, b in zip(self.lo, x, self.hi))

    def subset_of(self, other: "Box") -> bool:
        return all(a2 <= a and b <= b2 for a, b, a2, b2 in zip(self.lo, self.hi, other.lo, other.hi))

    def intersect(self, other: "Box") -> "Box | None":
        lo = tuple(max(a, b) for a, b in zip(self.lo, other.lo))
        hi = tuple(min(a, b) for a, b in zip(self.hi, other.hi))
        if any(a > b for a, b in zip(lo, hi)):
            return None
        return Box(lo, hi)

    def vertices(self) -> list[Vec]:
        return sorted(set(product(*zip(self.lo, self.hi))))

    def diameter(self) -> Fraction:
        return max((b - a for a, b in zip(self.lo, self.hi)), default=Fraction(0))


@dataclass(frozen=True)
class BoxSet:
    boxes: tuple[Box, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "boxes", tuple(self.boxes))

    @classmethod
    def of(cls, boxes: Iterable[Box]) -> "BoxSet":
        """Normalized form: sorted, without boxes contained in another."""
        bs = sorted(set(boxes))
        keep = [b for i, b in enumerate(bs)
                if not any(j != i and b.subset_of(o) and (o != b) for j, o in enumerate(bs))]
        return cls(tuple(keep))

    @property
    def is_empty(self) -> bool:
        return not self.boxes

    def contains(self, x: Sequence) -> bool:
        return any(b.contains(x) for b in self.boxes)

    def intersect_box(self, box: Box) -> "BoxSet":
        return BoxSet.of(c for c in (b.intersect(box) for b in self.boxes) if c is not None)

    def union(self, other: "BoxSet") -> "BoxSet":
        return BoxSet.of(self.boxes + other.boxes)

    def diameter(self) -> Fraction:
        if not self.boxes:
            return Fraction(0)
        dim = self.boxes[0].dim
        lo = [min(b.lo[i] for b in self.boxes) for i in range(dim)]
        hi = [max(b.hi[i] for b in self.boxes) for i in range(dim)]
        return max(b - a for a, b in zip(lo, hi))


def _pieces(breaks: Sequence[Fraction]):
    """Points and open gaps of a sorted breakpoint list, as (lo, hi, is_point)."""
    out = []
    for i, p in enumerate(breaks):
        out.append((p, p, True))
        if i + 1 < len(breaks):
            out.append((p, breaks[i + 1], False))
    return out


def _piece_in_open(piece, lo, hi) -> bool:
    a, b, point = piece
    return lo < a < hi if point else lo <= a and b <= hi


def _piece_in_closed(piece, lo, hi) -> bool:
    a, b, _ = piece
    return lo <= a and b <= hi


def complement_in_cube(open_boxes: Sequence[Box], m, dim: int) -> BoxSet:
    """[-m, m]^dim minus the union of the interiors of the given boxes.

    Every coordinate is split at all box endpoints; each cell of the
    resulting grid lies entirely inside or entirely outside each open box,
    and the closures of the outside cells form the answer.
    """
    m = Fraction(m)
    breaks = []
    for i in range(dim):
        pts = {-m, m}
        for b in open_boxes:
            pts.update(v for v in (b.lo[i], b.hi[i]) if -m < v < m)
        breaks.append(_pieces(sorted(pts)))
    out = []
    for cell in product(*breaks):
        if any(all(_piece_in_open(p, b.lo[i], b.hi[i]) for i, p in enumerate(cell)) for b in open_boxes):
            continue
        out.append(Box(tuple(p[0] for p in cell), tuple(p[1] for p in cell)))
    return BoxSet.of(_merge(out))


def _merge(boxes: list[Box]) -> list[Box]:
    """Greedily join boxes that agree off one axis and touch along it."""
    boxes = sorted(set(boxes))
    changed = True
    while changed:
        changed = False
        for i, a in enumerate(boxes):
            for j in range(i + 1, len(boxes)):
                b = boxes[j]
                diff = [k for k in range(a.dim) if (a.lo[k], a.hi[k]) != (b.lo[k], b.hi[k])]
                if len(diff) == 1:
                    k = diff[0]
                    if a.hi[k] >= b.lo[k] and b.hi[k] >= a.lo[k]:
                        lo = list(a.lo)
                        hi = list(a.hi)
                        lo[k] = min(a.lo[k], b.lo[k])
                        hi[k] = max(a.hi[k], b.hi[k])
                        boxes = [c for t, c in enumerate(boxes) if t not in (i, j)]
                        boxes.append(Box(tuple(lo), tuple(hi)))
                        boxes.sort()
                        changed = True
                        break
            if changed:
                break
    return boxes


def boxset_subset(a: BoxSet, b: BoxSet) -> bool:
    """Exact inclusion of finite unions of closed boxes."""
    for box in a.boxes:
        if any(box.subset_of(o) for o in b.boxes):
            continue
        cover = [o for o in b.boxes if o.intersect(box) is not None]
        if not cover:
            return False
        breaks = []
        for i in range(box.dim):
            pts = {box.lo[i], box.hi[i]}
            for o in cover:
                pts.update(v for v in (o.lo[i], o.hi[i]) if box.lo[i] < v < box.hi[i])
            breaks.append(_pieces(sorted(pts)))
        for cell in product(*breaks):
            if not any(all(_piece_in_closed(p, o.lo[i], o.hi[i]) for i, p in enumerate(cell)) for o in cover):
                return False
    return True


# -------------------------------------------------------------- polytopes


@dataclass(frozen=True)
class Polytope:
    vertices: tuple[Vec, ...] = ()

    def __post_init__(self):
        vs = tuple(sorted(set(vec(v) for v in self.vertices)))
        if len({len(v) for v in vs}) > 1:
            raise MalformedInput("polytope vertices differ in dimension")
        object.__setattr__(self, "vertices", vs)

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    @property
    def dim(self) -> int:
        return len(self.vertices[0]) if self.vertices else 0


EMPTY = Polytope(())


def hull_membership(x: Sequence, P: Polytope) -> bool:
    """x lies in the convex hull of P's vertices (False for the empty polytope)."""
    if P.is_empty:
        return False
    return _member(vec(x), P.vertices)


@lru_cache(maxsize=1 << 16)
def _member(x: Vec, vs: tuple) -> bool:
    if x in vs:
        return True
    for i in range(len(x)):
        if not min(v[i] for v in vs) <= x[i] <= max(v[i] for v in vs):
            return False
    if len(x) == 1:
        return True
    k = len(vs)
    A_eq = [[v[i] for v in vs] for i in range(len(x))] + [[1] * k]
    b_eq = list(x) + [1]
    return lp_feasible_min([0] * k, A_eq=A_eq, b_eq=b_eq).status == OPTIMAL


def hull_distance_inf(x: Sequence, P: Polytope) -> Fraction:
    """Exact max-norm distance from x to the convex hull of P."""
    if P.is_empty:
        raise UndefinedDistance("distance to the empty polytope")
    return _distance(vec(x), P.vertices)


@lru_cache(maxsize=1 << 16)
def _distance(x: Vec, vs: tuple) -> Fraction:
    n = len(x)
    if n == 1:
        lo, hi = min(v[0] for v in vs), max(v[0] for v in vs)
        return max(lo - x[0], x[0] - hi, Fraction(0))
    k = len(vs)
    # variables: lambda_1..lambda_k, t
    A_ub, b_ub = [], []
    for i in range(n):
        A_ub.append([-v[i] for v in vs] + [-1])
        b_ub.append(-x[i])
        A_ub.append([v[i] for v in vs] + [-1])
        b_ub.append(x[i])
    res = lp_feasible_min([0] * k + [1], A_ub, b_ub, [[1] * k + [0]], [1])
    assert res.status == OPTIMAL
    return res.value


def extreme_points(P: Polytope) -> Polytope:
    """Drop vertices lying in the hull of the remaining ones."""
    vs = list(P.vertices)
    if len(vs) <= 2:
        return P
    if P.dim == 1:
        return Polytope((min(vs), max(vs)))
    i = 0
    while i < len(vs):
        rest = tuple(vs[:i] + vs[i + 1:])
        if rest and _member(vs[i], rest):
            vs.pop(i)
        else:
            i += 1
    return Polytope(tuple(vs))


def polytope_from_box(box: Box) -> Polytope:
    return Polytope(tuple(box.vertices()))


def hull_of_boxset(B: BoxSet, reduce: bool = True) -> Polytope:
    if B.is_empty:
        return EMPTY
    P = Polytope(tuple(v for b in B.boxes for v in b.vertices()))
    return extreme_points(P) if reduce else P


def minkowski_cube(P: Polytope, r) -> Polytope:
    """Vertices v + e for v in P and e a corner of [-r, r]^N."""
    r = Fraction(r)
    if r < 0:
        raise ValueError("radius must be nonnegative")
    if P.is_empty:
        raise ValueError("Minkowski sum with the empty polytope")
    corners = list(product((-r, r), repeat=P.dim))
    return extreme_points(Polytope(tuple(tuple(a + e for a, e in zip(v, c)) for v in P.vertices for c in corners)))


def polytope_subset(P: Polytope, Q: Polytope) -> bool:
    return all(hull_membership(v, Q) for v in P.vertices)
