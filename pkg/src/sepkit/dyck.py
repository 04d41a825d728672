"""Separating a monotone analytic subset of 2^omega from a disjoint analytic set.

A and B are the projections of two Cantor-side graph trees T and S.  The
product graph pairs a T-edge (t, n) with an S-edge (s, m) unless t = 1 and
s = 0, so its label paths are the quadruples (u, c, v, d) with u(i) = 1
forcing v(i) = 1.  When the product (over state pairs) is acyclic the
tree of quadruples is well founded and recursion from the leaves emits a
semi-positive code C with A inside C and B outside; a cycle instead
yields ultimately periodic x in A, y in B with x below y.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .cantor import (V0, V1, U, SPNode, UPPoint, cube_coord_masks, eval_masks, point_of_index,
                     point_subseteq, spc_to_borel, support)
from .errors import CapacityExceeded, LogicError, MalformedInput, PreconditionError
from .graphtree import CANTOR, GraphTree, live_states

DEFAULT_MAX_STATES = 64
MAX_VERIFY_DEPTH = 26

CODE_EMITTED = "code-emitted"
WITNESS_FOUND = "witness-found"


@dataclass
class DyckProduct:
    T: GraphTree
    S: GraphTree
    root: tuple
    edges: dict
    acyclic: bool
    lasso: tuple | None = None
    layers: tuple | None = None

    @property
    def height(self) -> int:
        """Length of the longest path (acyclic products only)."""
        if not self.acyclic:
            raise LogicError("a cyclic product has unbounded paths")
        return len(self.layers) - 1

    @property
    def nodes(self) -> set:
        """Triples (stateT, stateS, depth) reachable from the root."""
        if not self.acyclic:
            raise LogicError("a cyclic product has infinitely many depth-indexed nodes")
        return {(p[0], p[1], d) for d, layer in enumerate(self.layers) for p in layer}


def _check_side(g: GraphTree, name: str):
    if g.side != CANTOR:
        raise MalformedInput(f"{name} must be a Cantor-side tree")


def build_product(T: GraphTree, S: GraphTree) -> DyckProduct:
    _check_side(T, "T")
    _check_side(S, "S")
    root = (T.root, S.root)
    edges = {}
    stack = [root]
    while stack:
        p = stack.pop()
        if p in edges:
            continue
        out = []
        for (t, n), qt in T.children(p[0]):
            for (s, m), qs in S.children(p[1]):
                if t == 1 and s == 0:
                    continue
                out.append((((t, n), (s, m)), (qt, qs)))
        edges[p] = out
        stack.extend(q for _, q in out if q not in edges)

    lasso = _find_lasso(root, edges)
    if lasso is not None:
        return DyckProduct(T, S, root, edges, False, lasso=lasso)
    layers = [frozenset([root])]
    while True:
        nxt = frozenset(q for p in layers[-1] for _, q in edges[p])
        if not nxt:
            break
        layers.append(nxt)
    return DyckProduct(T, S, root, edges, True, layers=tuple(layers))


def _find_lasso(root, edges):
    """First back edge of a depth-first search in canonical label order.

    Returns (stem labels, cycle labels) or None when acyclic.
    """
    color = {root: 1}
    path = [(root, None)]  # (node, label into node)
    iters = [iter(edges[root])]
    while iters:
        try:
            lab, q = next(iters[-1])
        except StopIteration:
            node, _ = path.pop()
            iters.pop()
            color[node] = 2
            continue
        c = color.get(q, 0)
        if c == 1:
            start = next(i for i, (node, _) in enumerate(path) if node == q)
            stem = tuple(l for _, l in path[1:start + 1])
            cycle = tuple(l for _, l in path[start + 1:]) + (lab,)
            return stem, cycle
        if c == 0:
            color[q] = 1
            path.append((q, lab))
            iters.append(iter(edges[q]))
    return None


@dataclass(frozen=True)
class SeparationWitness:
    x: UPPoint
    gammaX: UPPoint
    y: UPPoint
    gammaY: UPPoint

    def to_json(self) -> dict:
        return {"x": str(self.x), "gammaX": str(self.gammaX), "y": str(self.y), "gammaY": str(self.gammaY)}


def extract_witness(p: DyckProduct) -> SeparationWitness:
    if p.acyclic:
        raise LogicError("an acyclic product has no infinite branch to unroll")
    stem, cycle = p.lasso

    def proj(labels, side, k):
        return tuple(lab[side][k] for lab in labels)

    return SeparationWitness(UPPoint(proj(stem, 0, 0), proj(cycle, 0, 0)),
                             UPPoint(proj(stem, 0, 1), proj(cycle, 0, 1)),
                             UPPoint(proj(stem, 1, 0), proj(cycle, 1, 0)),
                             UPPoint(proj(stem, 1, 1), proj(cycle, 1, 1)))


def projection_witness(T: GraphTree, x: UPPoint) -> UPPoint | None:
    """A second coordinate gamma with (x, gamma) an infinite branch of T, if any.

    Searches the product of T with the lasso automaton of x for a
    reachable cycle.
    """
    pre, per = len(x.prefix), len(x.period)

    def nxt(i):
        return i + 1 if i + 1 < pre + per else pre

    start = (T.root, 0)
    color = {start: 1}
    path = [(start, None)]

    def succ(node):
        q, i = node
        return iter([(lab[1], (r, nxt(i))) for lab, r in T.children(q) if lab[0] == x[i]])

    iters = [succ(start)]
    while iters:
        try:
            letter, node = next(iters[-1])
        except StopIteration:
            done, _ = path.pop()
            iters.pop()
            color[done] = 2
            continue
        c = color.get(node, 0)
        if c == 1:
            k = next(i for i, (n, _) in enumerate(path) if n == node)
            stem = tuple(l for _, l in path[1:k + 1])
            cycle = tuple(l for _, l in path[k + 1:]) + (letter,)
            return UPPoint(stem, cycle)
        if c == 0:
            color[node] = 1
            path.append((node, letter))
            iters.append(succ(node))
    return None


def member_projection(T: GraphTree, x: UPPoint) -> bool:
    """x is the first coordinate of some infinite branch of T."""
    return projection_witness(T, x) is not None


def has_branch(T: GraphTree, x: UPPoint, gamma: UPPoint) -> bool:
    """(x, gamma) is an infinite branch of T."""
    pre = max(len(x.prefix), len(gamma.prefix))
    per = len(x.period) * len(gamma.period)
    q = T.root
    seen = set()
    n = 0
    while True:
        if n >= pre and (n - pre) % per == 0:
            if q in seen:
                return True
            seen.add(q)
        q = T.step(q, (x[n], gamma[n]))
        if q is None:
            return False
        n += 1


def witness_valid(T: GraphTree, S: GraphTree, w: SeparationWitness) -> bool:
    return (has_branch(T, w.x, w.gammaX) and has_branch(S, w.y, w.gammaY)
            and member_projection(T, w.x) and member_projection(S, w.y)
            and point_subseteq(w.x, w.y))


# ------------------------------------------------------- bar recursion


def separating_code(p: DyckProduct, alphabet: int | None = None, memo: bool = True):
    """Recursion over the well-founded product, from the leaves up.

    For the node reached after reading u (depth |u|) and each pair of
    child labels (t, n), (s, m):
      T has no (t, n) child            -> empty set
      S has no (s, m) child            -> whole space
      both exist but t = 1 and s = 0   -> U_|u|
      otherwise                        -> the child's code
    and the node's code is the union over (t, n) of the intersection
    over (s, m).
    """
    if not p.acyclic:
        raise LogicError("bar recursion needs a well-founded product")
    T, S = p.T, p.S
    K = max(T.alphabet_bound, S.alphabet_bound)
    if alphabet is not None:
        if alphabet < K:
            raise PreconditionError(f"alphabet {alphabet} is below the trees' bound {K}")
        K = alphabet
    labels = list(product((0, 1), range(K)))
    table = {}
    coords = {}

    def coord(d):
        if d not in coords:
            coords[d] = U(d)
        return coords[d]

    def build(qt, qs, d):
        key = (qt, qs, d)
        if memo and key in table:
            return table[key]
        rows = []
        for tn in labels:
            rt = T.step(qt, tn)
            if rt is None:
                rows.append((V0,) * len(labels))
                continue
            row = []
            for sm in labels:
                rs = S.step(qs, sm)
                if rs is None:
                    row.append(V1)
                elif tn[0] == 1 and sm[0] == 0:
                    row.append(coord(d))
                else:
                    row.append(build(rt, rs, d + 1))
            rows.append(tuple(row))
        node = SPNode(tuple(rows))
        if memo:
            table[key] = node
        return node

    return build(T.root, S.root, 0)


def _membership_masks(T: GraphTree, width: int, coord_mask, full: int) -> int:
    """Points w + tail (|w| = width) lying in the projection of T."""
    n = 1 << width
    half = (1 << n) - 1
    reach = {T.root: half}
    for i in range(width):
        one = coord_mask(i) & half
        zero = half & ~one
        nxt = {}
        for q, mask in reach.items():
            for (bit, _), r in T.children(q):
                m = mask & (one if bit else zero)
                if m:
                    nxt[r] = nxt.get(r, 0) | m
        reach = nxt
    out = 0
    for tail in (0, 1):
        live = live_states(T, lambda lab, b=tail: lab[0] == b)
        m = 0
        for q, mask in reach.items():
            if q in live:
                m |= mask
        out |= m << (tail * n)
    return out & full


def verify_dyck(T: GraphTree, S: GraphTree, c, depth: int, max_examples: int = 5) -> dict:
    """Check C against every point w + constant tail with |w| = depth.

    All 2 * 2**depth points are handled at once as bit positions of
    integers, both for the code and for projection membership.
    """
    sup = support(c)
    need = 1 + max(sup) if sup else 0
    if depth < need:
        raise PreconditionError(f"depth {depth} is below the support bound {need}")
    if depth > MAX_VERIFY_DEPTH:
        raise CapacityExceeded(f"verification depth {depth} exceeds {MAX_VERIFY_DEPTH}")
    coord_mask, full = cube_coord_masks(depth)
    inside = eval_masks(c, coord_mask, full)
    in_a = _membership_masks(T, depth, coord_mask, full)
    in_b = _membership_masks(S, depth, coord_mask, full)
    bad_a = in_a & ~inside
    bad_b = in_b & inside
    examples = []
    for side, bad in (("A", bad_a), ("B", bad_b)):
        m = bad
        while m and len(examples) < max_examples:
            low = m & -m
            idx = low.bit_length() - 1
            examples.append({"side": side, "point": str(point_of_index(idx, depth))})
            m ^= low
    return {"depth": depth, "points": 2 << depth, "in_A": in_a.bit_count(), "in_B": in_b.bit_count(),
            "violations": bad_a.bit_count() + bad_b.bit_count(), "examples": examples}


@dataclass
class DyckReport:
    outcome: str
    code: object = None
    borel: object = None
    witness: SeparationWitness | None = None
    verification: dict = field(default_factory=dict)
    product_states: int = 0
    height: int | None = None


def dyck_separate(T: GraphTree, S: GraphTree, alphabet: int | None = None, memo: bool = True,
                  verify_depth: int | None = None, max_states: int = DEFAULT_MAX_STATES,
                  verify: bool = True) -> DyckReport:
    bound = len(T.states) * len(S.states)
    if bound > max_states:
        raise CapacityExceeded(f"{bound} state pairs exceed the bound {max_states}")
    p = build_product(T, S)
    if not p.acyclic:
        w = extract_witness(p)
        if not witness_valid(T, S, w):
            raise LogicError("extracted witness failed re-verification")
        return DyckReport(WITNESS_FOUND, witness=w, product_states=len(p.edges))
    code = separating_code(p, alphabet, memo)
    rep = DyckReport(CODE_EMITTED, code=code, borel=spc_to_borel(code),
                     product_states=len(p.edges), height=p.height)
    if verify:
        depth = default_verify_depth(p) if verify_depth is None else verify_depth
        rep.verification = verify_dyck(T, S, code, depth)
    return rep


def default_verify_depth(p: DyckProduct) -> int:
    """State-pair bound plus one, capped at MAX_VERIFY_DEPTH.

    The bound |states T| * |states S| exceeds every product depth, hence
    every coordinate the code reads.
    """
    bound = len(p.T.states) * len(p.S.states) + 1
    return max(p.height + 1, min(bound, MAX_VERIFY_DEPTH))
