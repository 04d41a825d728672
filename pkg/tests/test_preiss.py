import json
from fractions import Fraction as F

import pytest

from sepkit.cantor import UPPoint
from sepkit.errors import CapacityExceeded, MalformedInput, PreconditionError
from sepkit.geometry import EMPTY, Polytope
from sepkit.graphtree import CANTOR
from sepkit.instances import (const_scheme, coordinate_tree, point_tree, preiss_battery, segment_tree,
                              shrinking_scheme)
from sepkit.preiss import (CODE_EMITTED, FUEL_EXHAUSTED, Leaf, Node, OpenNbhd, PreissConfig, PreissNode,
                           cgc_from_json, cgc_nodes, cgc_rank, cgc_to_json, eval_cgc, grid, j_member,
                           materialize, preiss_separate, run_preiss, sample_addresses, validate_cgc,
                           verify_preiss)
from sepkit.souslin import RAW, SouslinScheme, sigma_limit

unit = const_scheme((0,), (1,), 6)


def test_unit_vs_two():
    rep = run_preiss(unit, point_tree([(2,)], 1))
    assert rep.outcome == CODE_EMITTED
    c = rep.code
    # A = [0, 1] is inside, B = {2} outside; checked by hand, not via the scheme
    for k in range(0, 9):
        assert eval_cgc(c, (F(k, 8),))
    assert not eval_cgc(c, (2,))
    assert rep.verification["violations"] == []
    assert rep.verification["cgc"]["ok"]
    assert rep.verification["a_checked"] == 5


def test_two_dimensional_point():
    A = const_scheme((0, 0), (1, 1), 6)
    rep = run_preiss(A, point_tree([(2, 0)], 2))
    assert rep.outcome == CODE_EMITTED
    assert all(eval_cgc(rep.code, (F(i, 4), F(j, 4))) for i in range(5) for j in range(5))
    assert not eval_cgc(rep.code, (2, 0))


def test_segment_points_excluded():
    S = segment_tree((2,), 1)
    rep = run_preiss(unit, S)
    for y in sample_addresses(S):
        assert not eval_cgc(rep.code, sigma_limit(y, 1))


@pytest.mark.parametrize("name,A,S,M", preiss_battery(), ids=[b[0] for b in preiss_battery()])
def test_battery(name, A, S, M):
    rep = run_preiss(A, S, PreissConfig(cubes=M))
    assert rep.outcome == CODE_EMITTED
    v = rep.verification
    assert v["violations"] == [] and v["cgc"]["ok"]
    assert v["a_checked"] > 0 and v["b_checked"] > 0


def test_fuel_exhaustion():
    rep = preiss_separate(unit, point_tree([(2,)], 1), fuel=1)
    assert rep.outcome == FUEL_EXHAUSTED and rep.exhausted_by == "fuel" and rep.code is None


def test_depth_frontier_exhaustion():
    shallow = shrinking_scheme((0,), (0,), 1)
    rep = preiss_separate(shallow, point_tree([(F(1, 2),)], 1))
    assert rep.outcome == FUEL_EXHAUSTED and rep.exhausted_by == "depth"


def test_deterministic():
    S = point_tree([(2,), (-1,)], 1)
    a = cgc_to_json(preiss_separate(unit, S).code)
    b = cgc_to_json(preiss_separate(unit, S).code)
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_preconditions():
    S = point_tree([(2,)], 1)
    raw = SouslinScheme(1, 1, 1, {(): unit[()], (0,): unit[(0,)]}, RAW)
    with pytest.raises(PreconditionError):
        preiss_separate(raw, S)
    with pytest.raises(PreconditionError):
        preiss_separate(unit, S, fuel=0)
    with pytest.raises(PreconditionError):
        preiss_separate(unit, S, M=17)
    with pytest.raises(MalformedInput):
        preiss_separate(unit, coordinate_tree())


def test_j_member_root():
    S = point_tree([(2,)], 1)
    assert j_member(PreissNode(1), unit, S)
    far = const_scheme((30,), (31,), 2)
    assert not j_member(PreissNode(1), far, S)       # empty inside [-1, 1]
    with pytest.raises(CapacityExceeded):
        j_member(PreissNode(0, (0,) * 9, (0,) * 9, (0,) * 9), unit, S)


# ---------------------------------------------------------------- codes


seg = Polytope(((0,), (1,)))


def test_open_nbhd():
    o = OpenNbhd(seg, F(1, 2), 3)
    assert eval_cgc(o, (F(-1, 4),)) and not eval_cgc(o, (F(-1, 2),))
    assert o.radii() == [F(1, 2) - F(1, 4), F(1, 2) - F(1, 8), F(1, 2) - F(1, 16)]
    assert cgc_rank(o) == 1


def test_materialize_is_inner_approximation():
    rep = preiss_separate(unit, point_tree([(2,), (-1,)], 1))
    full = materialize(rep.code)
    assert not any(isinstance(n, OpenNbhd) for n in cgc_nodes(full))
    for x in grid(2, 1, F(1, 16)):
        if eval_cgc(full, x):
            assert eval_cgc(rep.code, x)
    assert eval_cgc(full, (F(1, 2),))


def test_validate_cgc_flags_decreasing_rows():
    small, big = Leaf(Polytope(((0,),))), Leaf(seg)
    assert validate_cgc(Node(((small,), (big,))))["ok"]
    bad = validate_cgc(Node(((big,), (small,))))
    assert not bad["ok"] and bad["violations"][0]["kind"] == "polytope"
    sampled = validate_cgc(Node(((big, OpenNbhd(seg, F(1))), (small, Leaf(EMPTY)))), [(F(1, 2),)])
    assert not sampled["ok"] and sampled["violations"][0]["kind"] == "sampled"


def test_verify_catches_mutations():
    S = point_tree([(2,)], 1)
    pts = grid(1, 1)
    bs = sample_addresses(S)
    assert verify_preiss(unit, S, Leaf(EMPTY), pts, bs, 1)["violations"]
    wide = OpenNbhd(seg, F(4))
    v = verify_preiss(unit, S, wide, pts, bs, 1)
    assert [x["side"] for x in v["violations"]] == ["B"]
    # shrinking the radius to nearly nothing keeps A inside, and B stays out
    thin = OpenNbhd(seg, F(1, 1024))
    assert verify_preiss(unit, S, thin, pts, bs, 1)["violations"] == []


def test_json_roundtrip():
    rep = preiss_separate(unit, point_tree([(2,), (-1,)], 1), M=3)
    obj = json.loads(json.dumps(cgc_to_json(rep.code)))
    back = cgc_from_json(obj)
    for x in grid(3, 1, F(1, 8)):
        assert eval_cgc(back, x) == eval_cgc(rep.code, x)
    exp = cgc_from_json(cgc_to_json(rep.code, expand=True))
    assert not any(isinstance(n, OpenNbhd) for n in cgc_nodes(exp))


def test_json_rejects_bad_nodes():
    for bad in ({"open_nbhd": {"polytope": {"vertices": [["0/1"]]}, "radius": "0/1"}},
                {"union": []}, {"thing": 1}, [1]):
        with pytest.raises(MalformedInput):
            cgc_from_json(bad)


def test_sample_addresses():
    ys = sample_addresses(point_tree([(2,), (-1,)], 1))
    assert sorted(sigma_limit(y, 1) for y in ys) == [(-1,), (2,)]
    assert all(isinstance(y, UPPoint) for y in ys)
