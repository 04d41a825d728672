"""Write the example inputs used by the README and the CLI tests into data/."""

import sys
from fractions import Fraction as F
from pathlib import Path

from sepkit.cantor import SPNode, U
from sepkit.instances import const_scheme, coordinate_tree, full_tree, point_tree
from sepkit.serialize import polytope_to_json, report_dumps, spc_to_json
from sepkit.geometry import Box, BoxSet, Polytope
from sepkit.souslin import SouslinScheme, scheme_to_json


def u0_complement():
    """Presents {x : x(0) = 0}, disjoint from U_0."""
    return coordinate_tree(0, 0)


def swapped_scheme():
    """Q_(1) = {0} sits inside Q_(0) = [0, 1] instead of containing it."""
    unit = BoxSet((Box((F(0),), (F(1),)),))
    point = BoxSet((Box((F(0),), (F(0),)),))
    return SouslinScheme.from_rule(lambda u: point if u[:1] == (1,) else unit, 1, 2, 2)


def main(out="data"):
    d = Path(out)
    d.mkdir(exist_ok=True)
    docs = {
        "u0_T.json": coordinate_tree(0, 1).to_json(),
        "u0_S.json": u0_complement().to_json(),
        "full.json": full_tree().to_json(),
        "u0.json": spc_to_json(U(0)),
        "u0_and_u1.json": spc_to_json(SPNode(((U(0), U(1)),))),
        "tri.json": polytope_to_json(Polytope(((0, 0), (1, 0), (0, 1)))),
        "unit_scheme.json": scheme_to_json(const_scheme((0,), (1,), depth=6)),
        "point2.json": point_tree([(2,)], 1).to_json(),
        "swapped_scheme.json": scheme_to_json(swapped_scheme()),
    }
    for name, doc in docs.items():
        (d / name).write_text(report_dumps(doc))
    print(f"wrote {len(docs)} files to {d}/")


if __name__ == "__main__":
    main(*sys.argv[1:])
