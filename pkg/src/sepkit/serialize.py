"""JSON codecs.

Rationals are "p/q" strings.  Code ASTs use the plain nested form
({"leaf": k}, {"union": [[...]]}, ...) when no subterm is shared; when
some node occurs more than once the document becomes
{"defs": [...], "root": ...} and repeated nodes are written {"ref": i}.
Definitions only refer to earlier definitions.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction

from .cantor import CoCylinder, CoUnion, SPLeaf, SPNode
from .errors import MalformedInput
from .geometry import Box, BoxSet, Polytope


def rat(v) -> Fraction:
    if isinstance(v, bool):
        raise MalformedInput(f"not a rational: {v!r}")
    if isinstance(v, (int, Fraction)):
        return Fraction(v)
    if isinstance(v, str):
        try:
            return Fraction(v.strip())
        except (ValueError, ZeroDivisionError):
            pass
    raise MalformedInput(f"not an exact rational: {v!r}")


def fmt_rat(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def show_rat(q) -> str:
    """Human form: '1', '-1/2'."""
    return str(Fraction(q))


def vec_to_json(v) -> list:
    return [fmt_rat(a) for a in v]


def vec_from_json(obj) -> tuple:
    if isinstance(obj, str):
        return tuple(rat(a) for a in obj.split(","))
    if not isinstance(obj, list):
        raise MalformedInput(f"expected a vector, got {obj!r}")
    return tuple(rat(a) for a in obj)


def polytope_to_json(P: Polytope) -> dict:
    return {"vertices": [vec_to_json(v) for v in P.vertices]}


def polytope_from_json(obj, where="polytope") -> Polytope:
    try:
        return Polytope(tuple(vec_from_json(v) for v in obj["vertices"]))
    except (KeyError, TypeError):
        raise MalformedInput(f"{where}: expected {{\"vertices\": [...]}}") from None


def boxset_to_json(B: BoxSet) -> dict:
    return {"boxes": [{"lo": vec_to_json(b.lo), "hi": vec_to_json(b.hi)} for b in B.boxes]}


def boxset_from_json(obj, where="boxset") -> BoxSet:
    try:
        return BoxSet.of(Box(vec_from_json(b["lo"]), vec_from_json(b["hi"])) for b in obj["boxes"])
    except (KeyError, TypeError):
        raise MalformedInput(f"{where}: expected {{\"boxes\": [{{\"lo\", \"hi\"}}]}}") from None


# ------------------------------------------------------------- code ASTs


def _dag_dump(root, kids, leaf_json, node_json) -> dict:
    counts = {}
    stack = [root]
    while stack:
        n = stack.pop()
        counts[id(n)] = counts.get(id(n), 0) + 1
        if counts[id(n)] == 1:
            stack.extend(kids(n))
    shared = {k for k, c in counts.items() if c > 1}
    defs, ref = [], {}

    def dump(n, top=False):
        ks = kids(n)
        if not ks:
            return leaf_json(n)
        if id(n) in ref and not top:
            return {"ref": ref[id(n)]}
        if id(n) in shared and not top:
            body = node_json(n, dump)
            ref[id(n)] = len(defs)
            defs.append(body)
            return {"ref": ref[id(n)]}
        return node_json(n, dump)

    body = dump(root, top=True)
    return {"defs": defs, "root": body} if defs else body


def _dag_load(obj, load_node):
    if isinstance(obj, dict) and "defs" in obj and "root" in obj:
        defs = []

        def resolve(o, where):
            if isinstance(o, dict) and "ref" in o:
                i = o["ref"]
                if not isinstance(i, int) or not 0 <= i < len(defs):
                    raise MalformedInput(f"{where}: dangling reference {i!r}")
                return defs[i]
            return load_node(o, resolve, where)

        for i, d in enumerate(obj["defs"]):
            defs.append(resolve(d, f"defs[{i}]"))
        return resolve(obj["root"], "root")

    def plain(o, where):
        if isinstance(o, dict) and "ref" in o:
            raise MalformedInput(f"{where}: reference outside a defs document")
        return load_node(o, plain, where)

    return plain(obj, "root")


def _sp_kids(n):
    return [ch for row in n.grid for ch in row] if isinstance(n, SPNode) else []


def spc_to_json(c) -> dict:
    return _dag_dump(c, _sp_kids, lambda n: {"leaf": n.k},
                     lambda n, dump: {"union": [[dump(ch) for ch in row] for row in n.grid]})


def spc_from_json(obj):
    def load(o, rec, where):
        if not isinstance(o, dict):
            raise MalformedInput(f"{where}: expected an object")
        if "leaf" in o:
            k = o["leaf"]
            if not isinstance(k, int) or k < 0:
                raise MalformedInput(f"{where}: leaf index must be a natural number")
            return SPLeaf(k)
        if "union" in o:
            rows = o["union"]
            if not isinstance(rows, list) or not rows or any(not isinstance(r, list) or not r for r in rows):
                raise MalformedInput(f"{where}: union needs a nonempty list of nonempty rows")
            return SPNode(tuple(tuple(rec(ch, f"{where}.union[{i}][{j}]") for j, ch in enumerate(row))
                                for i, row in enumerate(rows)))
        raise MalformedInput(f"{where}: expected 'leaf' or 'union'")

    return _dag_load(obj, load)


def borel_to_json(c) -> dict:
    return _dag_dump(c, lambda n: list(n.children) if isinstance(n, CoUnion) else [],
                     lambda n: {"co_cylinder": "".join(map(str, n.word))},
                     lambda n, dump: {"co_union": [dump(ch) for ch in n.children]})


def borel_from_json(obj):
    def load(o, rec, where):
        if not isinstance(o, dict):
            raise MalformedInput(f"{where}: expected an object")
        if "co_cylinder" in o:
            w = o["co_cylinder"]
            if not isinstance(w, str) or any(ch not in "01" for ch in w):
                raise MalformedInput(f"{where}: cylinder word must be a binary string")
            return CoCylinder(tuple(int(ch) for ch in w))
        if "co_union" in o:
            ch = o["co_union"]
            if not isinstance(ch, list) or not ch:
                raise MalformedInput(f"{where}: co_union needs a nonempty list")
            return CoUnion(tuple(rec(x, f"{where}.co_union[{i}]") for i, x in enumerate(ch)))
        raise MalformedInput(f"{where}: expected 'co_cylinder' or 'co_union'")

    return _dag_load(obj, load)


# ------------------------------------------------------------ reports


def canonical_dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def digest(obj) -> str:
    return hashlib.sha256(canonical_dumps(obj).encode()).hexdigest()


def report_dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"
