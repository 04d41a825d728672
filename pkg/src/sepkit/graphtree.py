"""Deterministic labelled graphs presenting trees of pairs.

A Cantor-side tree has labels (bit, letter); a Baire-side tree has labels
(letter, witness).  The tree itself is the set of label paths that can be
run from the root, and the presented set is the projection of its body to
the first label component.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import MalformedInput

Label = tuple[int, int]

CANTOR = "cantor"
BAIRE = "baire"


@dataclass(frozen=True)
class GraphTree:
    states: tuple[str, ...]
    root: str
    alphabet_bound: int
    edges: Mapping[tuple[str, Label], str]
    side: str = CANTOR
    _out: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        states = tuple(self.states)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "edges", dict(self.edges))
        if self.side not in (CANTOR, BAIRE):
            raise MalformedInput(f"unknown side {self.side!r}")
        if self.alphabet_bound < 1:
            raise MalformedInput("alphabet_bound must be at least 1")
        if len(set(states)) != len(states):
            raise MalformedInput("duplicate state names")
        if self.root not in states:
            raise MalformedInput(f"root {self.root!r} is not a state")
        known = set(states)
        out = {q: [] for q in states}
        for (q, (a, b)), r in self.edges.items():
            if q not in known or r not in known:
                raise MalformedInput(f"edge {q!r} -> {r!r} mentions an unknown state")
            first_bound = 2 if self.side == CANTOR else self.alphabet_bound
            if not (0 <= a < first_bound and 0 <= b < self.alphabet_bound):
                raise MalformedInput(f"label {(a, b)} out of range on edge from {q!r}")
            out[q].append(((a, b), r))
        for q in out:
            out[q].sort()
        object.__setattr__(self, "_out", out)
        seen = self._reachable()
        if seen != known:
            missing = sorted(known - seen)
            raise MalformedInput(f"states not reachable from root: {missing}")

    @classmethod
    def build(cls, edges: Iterable[tuple[str, Label, str]], root="q0", alphabet_bound=None,
              side=CANTOR, states=None, prune=False) -> "GraphTree":
        """Build from (source, label, target) triples.

        With prune=True, states not reachable from the root are dropped
        instead of rejected.
        """
        edges = list(edges)
        if states is None:
            names = [root]
            for q, _, r in edges:
                names += [q, r]
            states = list(dict.fromkeys(names))
        if alphabet_bound is None:
            alphabet_bound = 1 + max([lab[1] for _, lab, _ in edges] +
                                     ([lab[0] for _, lab, _ in edges] if side == BAIRE else []) + [0])
        emap = {}
        for q, lab, r in edges:
            key = (q, tuple(lab))
            if key in emap and emap[key] != r:
                raise MalformedInput(f"two edges from {q!r} under label {lab}")
            emap[key] = r
        if prune:
            reach = {root}
            stack = [root]
            while stack:
                q = stack.pop()
                for (p, _), r in emap.items():
                    if p == q and r not in reach:
                        reach.add(r)
                        stack.append(r)
            states = [q for q in states if q in reach]
            emap = {k: r for k, r in emap.items() if k[0] in reach}
        return cls(tuple(states), root, alphabet_bound, emap, side)

    def _reachable(self) -> set:
        seen = {self.root}
        stack = [self.root]
        while stack:
            q = stack.pop()
            for _, r in self._out[q]:
                if r not in seen:
                    seen.add(r)
                    stack.append(r)
        return seen

    def children(self, q: str) -> list[tuple[Label, str]]:
        if q not in self._out:
            raise MalformedInput(f"unknown state {q!r}")
        return list(self._out[q])

    def step(self, q: str, label: Label) -> str | None:
        return self.edges.get((q, tuple(label)))

    def run(self, path: Iterable[Label], start: str | None = None) -> str | None:
        """State reached after reading a label path, or None if it falls off."""
        q = self.root if start is None else start
        for lab in path:
            q = self.edges.get((q, tuple(lab)))
            if q is None:
                return None
        return q

    def accepts(self, path: Iterable[Label]) -> bool:
        return self.run(path) is not None

    def paths(self, length: int, start: str | None = None):
        """All label paths of the given length, in canonical order, with end states."""
        frontier = [((), self.root if start is None else start)]
        for _ in range(length):
            frontier = [(p + (lab,), r) for p, q in frontier for lab, r in self._out[q]]
        return frontier

    def to_json(self) -> dict:
        first, second = ("bit", "letter") if self.side == CANTOR else ("letter", "witness")
        edges = [{"from": q, first: a, second: b, "to": r}
                 for q in self.states for (a, b), r in self._out[q]]
        return {"states": list(self.states), "root": self.root,
                "alphabet_bound": self.alphabet_bound, "edges": edges}

    @classmethod
    def from_json(cls, obj: dict, side: str | None = None) -> "GraphTree":
        try:
            edges = obj["edges"]
            if side is None:
                side = BAIRE if any("witness" in e for e in edges) else CANTOR
            if side == BAIRE:
                keys = ("letter", "witness")
            else:
                keys = ("bit", "letter")
            emap = {}
            for n, e in enumerate(edges):
                try:
                    key = (str(e["from"]), (int(e[keys[0]]), int(e[keys[1]])))
                    target = str(e["to"])
                except KeyError as exc:
                    raise MalformedInput(f"edges[{n}] lacks field {exc}") from None
                if key in emap and emap[key] != target:
                    raise MalformedInput(f"edges[{n}] duplicates label {key[1]} from {key[0]!r}")
                emap[key] = target
            return cls(tuple(map(str, obj["states"])), str(obj["root"]),
                       int(obj["alphabet_bound"]), emap, side)
        except KeyError as exc:
            raise MalformedInput(f"tree JSON lacks field {exc}") from None
        except TypeError as exc:
            raise MalformedInput(f"tree JSON has the wrong shape: {exc}") from None


def unfold_children(g: GraphTree, node) -> list[tuple[Label, str]]:
    """Outgoing edges of a state (or of the state a label path leads to)."""
    if isinstance(node, str):
        return g.children(node)
    q = g.run(node)
    if q is None:
        raise MalformedInput(f"path {node} is not in the tree")
    return g.children(q)


def live_states(g: GraphTree, allowed=lambda lab: True) -> set:
    """States with an infinite run using only edges whose label passes `allowed`."""
    succ = {q: [r for lab, r in g.children(q) if allowed(lab)] for q in g.states}
    live = set(g.states)
    changed = True
    while changed:
        changed = False
        for q in list(live):
            if not any(r in live for r in succ[q]):
                live.discard(q)
                changed = True
    return live
