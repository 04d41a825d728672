"""Finite sequences, prime-power sequence codes, the Kleene-Brouwer order and
finite linear-order codes.

Finite sequences are plain tuples of naturals throughout the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from typing import Iterable

from .errors import InputTooLarge, MalformedInput

FinSeq = tuple[int, ...]

# encode_seq refuses to build codes wider than this many bits
MAX_CODE_BITS = 1 << 14

_PRIMES = [2]


def nth_prime(i: int) -> int:
    while len(_PRIMES) <= i:
        c = _PRIMES[-1] + 1
        while any(c % p == 0 for p in _PRIMES if p * p <= c):
            c += 1
        _PRIMES.append(c)
    return _PRIMES[i]


def is_prefix(u: FinSeq, v: FinSeq) -> bool:
    return len(u) <= len(v) and tuple(v[: len(u)]) == tuple(u)


def encode_seq(u: Iterable[int]) -> int:
    """Product of p_i ** (u_i + 1); the empty sequence codes to 1."""
    u = tuple(u)
    if any(a < 0 for a in u):
        raise MalformedInput(f"negative entry in {u}")
    bits = sum((a + 1) * math.log2(nth_prime(i)) for i, a in enumerate(u))
    if bits > MAX_CODE_BITS:
        raise InputTooLarge(f"code of {u} needs about {int(bits)} bits")
    s = 1
    for i, a in enumerate(u):
        s *= nth_prime(i) ** (a + 1)
    return s


def decode_seq(s: int) -> FinSeq | None:
    """Inverse of encode_seq, or None when s codes no sequence."""
    if s < 1:
        return None
    out = []
    i = 0
    while s > 1:
        p = nth_prime(i)
        e = 0
        while s % p == 0:
            s //= p
            e += 1
        if e == 0:
            return None
        out.append(e - 1)
        i += 1
    return tuple(out)


def component(s: int, i: int) -> int:
    """(s)_i: the i-th entry of the decoded sequence, 0 when undefined."""
    u = decode_seq(s)
    if u is None or i >= len(u) or i < 0:
        return 0
    return u[i]


def rational_enum(s: int) -> Fraction:
    return Fraction(component(s, 0), component(s, 1) + 1)


def kb_compare(u: FinSeq, v: FinSeq) -> int:
    """Kleene-Brouwer comparison: -1 if u < v, 0 if equal, 1 if u > v.

    u < v when u properly extends v, or when u is smaller at the first
    index where the two differ.
    """
    for a, b in zip(u, v):
        if a != b:
            return -1 if a < b else 1
    if len(u) == len(v):
        return 0
    return -1 if len(u) > len(v) else 1


kb_key = cmp_to_key(kb_compare)


@dataclass(frozen=True)
class LinOrder:
    """A finite relation given as a set of pairs (a, b) meaning a <= b."""

    field: frozenset
    relation: frozenset

    @classmethod
    def from_chain(cls, chain: Iterable[int]) -> "LinOrder":
        chain = list(chain)
        if len(set(chain)) != len(chain):
            raise MalformedInput("repeated element in chain")
        rel = {(a, b) for i, a in enumerate(chain) for b in chain[i:]}
        return cls(frozenset(chain), frozenset(rel))

    def le(self, a: int, b: int) -> bool:
        return (a, b) in self.relation

    def lt(self, a: int, b: int) -> bool:
        return a != b and (a, b) in self.relation

    def is_linear(self) -> bool:
        f, r = self.field, self.relation
        if any(a not in f or b not in f for a, b in r):
            return False
        for a in f:
            if (a, a) not in r:
                return False
            for b in f:
                if a != b and ((a, b) in r) == ((b, a) in r):
                    return False
        for a, b in r:
            for c in f:
                if (b, c) in r and (a, c) not in r:
                    return False
        return True

    @property
    def order_type(self) -> int:
        return len(self.field)

    def chain(self) -> list[int]:
        """Field elements listed in increasing order."""
        if not self.is_linear():
            raise MalformedInput("relation is not a linear order")
        return sorted(self.field, key=lambda a: sum(1 for b in self.field if (b, a) in self.relation))


def is_closed_tree(T: Iterable[FinSeq]) -> bool:
    nodes = set(map(tuple, T))
    return bool(nodes) and all(u[:-1] in nodes for u in nodes if u)


def lo_code_of_tree(T: Iterable[FinSeq]) -> LinOrder:
    """Order the codes of the nodes of a finite tree by Kleene-Brouwer."""
    nodes = sorted(set(map(tuple, T)), key=kb_key)
    if not is_closed_tree(nodes):
        raise MalformedInput("tree must be nonempty and closed under prefixes")
    return LinOrder.from_chain(encode_seq(u) for u in nodes)


def lo_embedding_check(a: LinOrder, b: LinOrder) -> bool:
    """Characteristic function of a is pointwise below that of b."""
    return a.relation <= b.relation and a.field <= b.field
