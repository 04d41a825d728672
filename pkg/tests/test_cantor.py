import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import naive_norm, naive_spc_eval
from sepkit.cantor import (ONE, V0, V1, ZERO, CoCylinder, CoUnion, SPLeaf, SPNode, U, UPPoint, _stripes,
                           borel_rank, cube_coord_masks, eval_borel, eval_masks, eval_spc, eval_spc_many,
                           is_monotone, is_positive, norm_le_wo, point_of_index, point_subseteq, spc_norm,
                           spc_to_borel, support, truth_table, wo_le_norm)
from sepkit.errors import CapacityExceeded, MalformedInput
from sepkit.instances import random_spcode
from sepkit.sequences import LinOrder

bits = st.lists(st.integers(0, 1), max_size=5).map(tuple)
points = st.builds(UPPoint, bits, st.lists(st.integers(0, 1), min_size=1, max_size=4).map(tuple))

leaves = st.integers(0, 8).map(SPLeaf)
spcodes = st.recursive(
    leaves,
    lambda kids: st.lists(st.lists(kids, min_size=1, max_size=3).map(tuple), min_size=1, max_size=3)
    .map(lambda g: SPNode(tuple(g))),
    max_leaves=12)


# ------------------------------------------------------------- points


def test_canonical_form():
    assert UPPoint((0, 1, 1), (1, 1)) == UPPoint((0,), (1,))
    assert UPPoint((1, 0), (1, 0)) == UPPoint((), (1, 0))
    assert str(UPPoint((1,), (0,))) == "1(0)"
    assert str(UPPoint((12,), (3,))) == "12,(3)"
    with pytest.raises(MalformedInput):
        UPPoint((), ())


@given(points)
def test_parse_roundtrip(x):
    assert UPPoint.parse(str(x)) == x


@given(points, points)
def test_equality_is_pointwise(x, y):
    assert (x == y) == (x.take(20) == y.take(20))


def test_parse_errors():
    for bad in ("101", "1(a)", "x(0)"):
        with pytest.raises(MalformedInput):
            UPPoint.parse(bad)
    assert UPPoint.parse("3,10,(0)") == UPPoint((3, 10), (0,))


@given(points, points)
def test_subseteq(x, y):
    assert point_subseteq(x, y) == all(not (x[n] == 1 and y[n] == 0) for n in range(20))


# -------------------------------------------------------------- codes


def test_leaves():
    x = UPPoint((1, 0), (0,))
    assert not eval_spc(V0, x) and eval_spc(V1, x)
    assert eval_spc(U(0), x) and not eval_spc(U(1), x)
    assert eval_spc(SPNode(((U(0), U(1)), (U(0),))), x)
    assert not eval_spc(SPNode(((U(0), U(1)),)), x)
    assert support(SPNode(((U(0), U(3)), (V1,)))) == {0, 3}
    with pytest.raises(MalformedInput):
        SPNode(())
    with pytest.raises(MalformedInput):
        SPLeaf(-1)


@given(spcodes, points)
def test_eval_matches_naive(c, x):
    assert eval_spc(c, x) == naive_spc_eval(c, lambda n: x[n])


@given(spcodes, points)
def test_borel_translation(c, x):
    b = spc_to_borel(c)
    assert eval_borel(b, x) == eval_spc(c, x)
    assert naive_spc_eval(b, lambda n: x[n]) == eval_spc(c, x)


@given(spcodes)
def test_norm(c):
    assert spc_norm(c) == naive_norm(c)
    # translation doubles the rank of each union-of-intersections layer
    assert borel_rank(spc_to_borel(c)) >= spc_norm(c)


@given(spcodes)
def test_monotone_and_positive(c):
    assert is_monotone(c)
    # SP codes are monotone, so positivity is decided at the two constants
    assert is_positive(c) == (eval_spc(c, ONE) and not eval_spc(c, ZERO))


def test_borel_primitives():
    x = UPPoint((1, 0), (1,))
    assert not eval_borel(CoCylinder((1, 0)), x)
    assert eval_borel(CoCylinder((0,)), x)
    assert not eval_borel(CoCylinder(()), x)
    # complement of the empty set is everything
    assert eval_borel(CoUnion((CoCylinder(()),)), x)
    with pytest.raises(MalformedInput):
        CoCylinder((2,))
    with pytest.raises(MalformedInput):
        CoUnion(())


def test_nonmonotone_borel():
    # complement of the cylinder [1] is {x(0) = 0}
    assert not is_monotone(CoCylinder((1,)))
    assert is_monotone(CoCylinder((0,)))


def test_monotone_bound():
    c = SPNode(((tuple(U(n) for n in range(20))),))
    with pytest.raises(CapacityExceeded):
        is_monotone(c)


# ------------------------------------------------------ batch evaluation


@pytest.mark.parametrize("width", range(0, 9))
def test_stripes_brute_force(width):
    for k in range(width):
        assert _stripes(k, width) == sum(1 << w for w in range(1 << width) if (w >> k) & 1)


def test_cube_masks_match_points():
    width = 4
    coord_mask, full = cube_coord_masks(width)
    for idx in range(2 << width):
        x = point_of_index(idx, width)
        for k in range(width + 2):
            assert ((coord_mask(k) >> idx) & 1) == x[k]
    assert full == (1 << (2 << width)) - 1


@given(spcodes)
def test_masks_agree_with_pointwise(c):
    width = 5
    coord_mask, full = cube_coord_masks(width)
    m = eval_masks(c, coord_mask, full)
    for idx in range(0, 2 << width, 3):
        assert ((m >> idx) & 1) == eval_spc(c, point_of_index(idx, width))


@given(spcodes, st.lists(points, min_size=1, max_size=6))
def test_eval_many(c, xs):
    assert eval_spc_many(c, xs) == [eval_spc(c, x) for x in xs]


def test_truth_table_layout():
    # bit a of the table is the value at coordinates (a0, a1) and tail a2
    t = truth_table(U(1), [0, 1])
    assert t == sum(1 << a for a in range(8) if (a >> 1) & 1)
    t = truth_table(U(5), [0])
    assert t == sum(1 << a for a in range(4) if (a >> 1) & 1)


# ------------------------------------------------------ norms vs orders


def chain(n):
    return LinOrder.from_chain(range(1, n + 1))


@given(spcodes, st.integers(0, 5))
def test_fixpoint_comparisons(c, n):
    b = chain(n)
    assert norm_le_wo(c, b) == (naive_norm(c) <= n)
    assert wo_le_norm(b, c) == (n <= naive_norm(c))


def test_fixpoint_examples():
    c = SPNode(((SPNode(((U(0),),)),),))
    assert spc_norm(c) == 2
    assert norm_le_wo(c, chain(2)) and not norm_le_wo(c, chain(1))
    assert wo_le_norm(chain(2), c) and not wo_le_norm(chain(3), c)
    assert norm_le_wo(V0, chain(0))


def test_random_spcode_shape():
    rng = random.Random(5)
    for _ in range(50):
        c = random_spcode(rng)
        assert spc_norm(c) <= 3
        assert support(c) <= set(range(10))
