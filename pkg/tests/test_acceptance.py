"""Acceptance suite: one check per criterion, each printing a PASS/FAIL line.

Run directly (python3 tests/test_acceptance.py) for just the summary lines.
"""

import json
import random
import sys
import time
from fractions import Fraction as F
from itertools import permutations, product
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oracles import caratheodory_member, fm_hull_distance, naive_norm, naive_spc_eval, projection_contains
from sepkit.cantor import V0, V1, SPNode, U, cube_coord_masks, eval_masks, is_monotone, spc_to_borel, support
from sepkit.cli import DyckRunConfig, PreissRunConfig, dyck_report, preiss_report
from sepkit.dyck import (build_product, default_verify_depth, extract_witness, member_projection,
                         separating_code, verify_dyck)
from sepkit.cantor import point_subseteq
from sepkit.errors import ConstantsViolation
from sepkit.geometry import Polytope, hull_distance_inf, hull_membership
from sepkit.graphtree import BAIRE
from sepkit.instances import preiss_battery, random_finite_tree, random_graph_tree, random_spcode, random_tree
from sepkit.preiss import CODE_EMITTED, PreissConfig, run_preiss
from sepkit.sequences import LinOrder, lo_code_of_tree, lo_embedding_check
from sepkit.serialize import report_dumps
from sepkit.souslin import build_good_scheme, check_good_claims, scheme_to_json, validate_good

RESULTS = {}


def report(n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail})"
    RESULTS[n] = line
    print(line, flush=True)
    return ok


def dyck_pair(rng):
    """Pairs with acyclic products by construction: one side a DAG, or
    self-loops that can never run in step (T loops on 1, S loops on 0)."""
    K = rng.randint(1, 3)
    nt, ns = rng.randint(1, 5), rng.randint(1, 5)
    mode = rng.randrange(3)
    if mode == 0:
        return random_graph_tree(rng, nt, K, acyclic=True), random_graph_tree(rng, ns, K)
    if mode == 1:
        return random_graph_tree(rng, nt, K), random_graph_tree(rng, ns, K, acyclic=True)
    return random_graph_tree(rng, nt, K, loop_bit=1), random_graph_tree(rng, ns, K, loop_bit=0)


def naive_failures(T, S, c, width):
    horizon = len(T.states) + len(S.states) + 1
    bad = 0
    for w in product((0, 1), repeat=width):
        for tail in (0, 1):
            inside = naive_spc_eval(c, lambda n: w[n] if n < width else tail)
            if projection_contains(T.edges, T.root, w, tail, horizon) and not inside:
                bad += 1
            if projection_contains(S.edges, S.root, w, tail, horizon) and inside:
                bad += 1
    return bad


# ------------------------------------------------------------ criteria


def criterion_1():
    rng = random.Random(2024)
    t0 = time.time()
    n = bad = oracle_bad = points = 0
    while n < 200:
        T, S = dyck_pair(rng)
        p = build_product(T, S)
        if not p.acyclic:
            continue
        n += 1
        c = separating_code(p)
        depth = default_verify_depth(p)
        v = verify_dyck(T, S, c, depth)
        bad += v["violations"] != 0
        points += v["points"]
        oracle_bad += naive_failures(T, S, c, min(depth, 8)) != 0
    dt = time.time() - t0
    ok = bad == 0 and oracle_bad == 0 and dt < 60
    return report(1, ok, f"{n} acyclic pairs, {points} points, {bad} failing, "
                         f"{oracle_bad} oracle mismatches, {dt:.1f}s")


def criterion_2():
    rng = random.Random(99)
    n = bad = 0
    while n < 100:
        K = rng.randint(1, 3)
        T = random_graph_tree(rng, rng.randint(1, 5), K, density=0.4)
        S = random_graph_tree(rng, rng.randint(1, 5), K, density=0.4)
        p = build_product(T, S)
        if p.acyclic:
            continue
        n += 1
        w = extract_witness(p)
        ok = member_projection(T, w.x) and member_projection(S, w.y) and point_subseteq(w.x, w.y)
        bad += not ok
    return report(2, bad == 0, f"{n} cyclic pairs, {bad} invalid witnesses")


def criterion_3():
    rng = random.Random(3)
    bad = sum(not is_monotone(random_spcode(rng, depth=3, support=10)) for _ in range(1000))
    return report(3, bad == 0, f"1000 codes, {bad} non-monotone")


def code_family():
    leaves = [V0, V1, U(0), U(1)]
    d1 = [SPNode(((a,),)) for a in leaves]
    d1 += [SPNode(((a, b),)) for a in leaves for b in leaves]
    d1 += [SPNode(((a,), (b,))) for a in leaves for b in leaves]
    d2 = [SPNode(((a,),)) for a in d1] + [SPNode(((a, l),)) for a in d1[:10] for l in leaves]
    d3 = [SPNode(((b,), (l,))) for b in d2[::4] for l in leaves[:2]]
    return leaves + d1 + d2 + d3


def criterion_4():
    codes = code_family()
    orders = [LinOrder.from_chain(p) for n in range(6) for p in permutations(range(1, n + 1))]
    from sepkit.cantor import norm_le_wo, wo_le_norm
    pairs = bad = 0
    for c in codes:
        nc = naive_norm(c)
        for b in orders:
            pairs += 1
            bad += norm_le_wo(c, b) != (nc <= len(b.field))
            bad += wo_le_norm(b, c) != (len(b.field) <= nc)
    ok = bad == 0 and pairs >= 10 ** 4 and max(map(naive_norm, codes)) == 3
    return report(4, ok, f"{len(codes)} codes x {len(orders)} orders = {pairs} pairs, {bad} disagreements")


def criterion_5():
    rng = random.Random(5)
    bad = checked = 0
    for _ in range(500):
        T = random_finite_tree(rng, size=rng.randint(0, 8))
        big = set(T)
        for _ in range(rng.randint(0, 6)):
            parent = rng.choice(sorted(big))
            big.add(parent + (rng.randrange(3),))
        a, b = lo_code_of_tree(T), lo_code_of_tree(big)
        direct = all(b.lt(x, y) for x in a.field for y in a.field if a.lt(x, y))
        checked += len(a.field) ** 2
        bad += not (direct and lo_embedding_check(a, b))
    return report(5, bad == 0, f"500 tree pairs, {checked} field pairs, {bad} failing")


def rand_poly(rng, dim, k):
    return Polytope(tuple(tuple(F(rng.randint(-8, 8), rng.randint(1, 3)) for _ in range(dim)) for _ in range(k)))


def criterion_6():
    rng = random.Random(6)
    bad_d = bad_m = 0
    for _ in range(300):
        dim = rng.randint(1, 2)
        P = rand_poly(rng, dim, rng.randint(1, 5))
        x = tuple(F(rng.randint(-10, 10), rng.randint(1, 3)) for _ in range(dim))
        bad_d += hull_distance_inf(x, P) != fm_hull_distance(x, P.vertices)
    inside = 0
    for _ in range(300):
        dim = rng.randint(1, 3)
        P = rand_poly(rng, dim, rng.randint(1, 8))
        if rng.random() < 0.5:
            # a convex combination of vertices, so both answers are exercised
            w = [F(rng.randint(0, 4)) for _ in P.vertices]
            w[0] += 1
            x = tuple(sum(wi * v[i] for wi, v in zip(w, P.vertices)) / sum(w) for i in range(dim))
        else:
            x = tuple(F(rng.randint(-10, 10), rng.randint(1, 3)) for _ in range(dim))
        got = hull_membership(x, P)
        inside += got
        bad_m += got != caratheodory_member(x, P.vertices)
    return report(6, bad_d == 0 and bad_m == 0,
                  f"300 distances ({bad_d} mismatches), 300 memberships ({inside} inside, {bad_m} mismatches)")


def criterion_7():
    rng = random.Random(7)
    bad = checks = 0
    for _ in range(50):
        T = random_tree(rng, max_states=4, max_K=3, side=BAIRE, density=0.5)
        # the scheme alphabet is K^2; depth 4 over 9 letters is too large
        depth = 4 if T.alphabet_bound <= 2 else 3
        dim = rng.randint(1, 2)
        s = build_good_scheme(T, dim, depth, 3)
        v, c = validate_good(s), check_good_claims(T, dim, depth, 3)
        checks += v.checks + c.checks
        bad += not (v.ok and c.ok and all(x in ("ok", "satisfied-by-representation")
                                          for x in list(v.clauses.values()) + list(c.clauses.values())))
    return report(7, bad == 0, f"50 schemes, {checks} inclusion checks, {bad} failing")


def criterion_8():
    t0 = time.time()
    battery = preiss_battery()
    bad, gaps = [], 0
    for name, A, S, M in battery:
        try:
            rep = run_preiss(A, S, PreissConfig(cubes=M, fuel=10_000))
        except ConstantsViolation:
            gaps += 1
            bad.append(name)
            continue
        v = rep.verification
        if rep.outcome != CODE_EMITTED or v["violations"] or not v["cgc"]["ok"]:
            bad.append(name)
    dt = time.time() - t0
    ok = not bad and len(battery) >= 20 and dt < 300
    return report(8, ok, f"{len(battery)} instances, failing {bad}, {gaps} gap assertions, {dt:.1f}s")


def criterion_9():
    rng = random.Random(9)
    bad = 0
    for _ in range(1000):
        c = random_spcode(rng, depth=3, support=10)
        b = spc_to_borel(c)
        width = max(support(c) | support(b), default=-1) + 1
        coord_mask, full = cube_coord_masks(width)
        bad += eval_masks(c, coord_mask, full) != eval_masks(b, coord_mask, full)
    return report(9, bad == 0, f"1000 codes, {bad} disagreeing")


def full_suite_reports() -> bytes:
    rng = random.Random(10)
    out = []
    for i in range(20):
        T, S = dyck_pair(rng)
        out.append(report_dumps(dyck_report(T, S, DyckRunConfig(), {"T": T.to_json(), "S": S.to_json()})))
    for name, A, S, M in preiss_battery():
        cfg = PreissRunConfig(cubes=M)
        out.append(report_dumps(preiss_report(A, S, cfg, {"A": scheme_to_json(A), "B": S.to_json()})))
    return "".join(out).encode()


def _suite_in_subprocess(seed: str) -> bytes:
    import os
    import subprocess
    env = dict(os.environ, PYTHONHASHSEED=seed)
    code = "import sys, test_acceptance as t; sys.stdout.buffer.write(t.full_suite_reports())"
    r = subprocess.run([sys.executable, "-c", code], cwd=Path(__file__).parent, env=env,
                       capture_output=True, check=True)
    return r.stdout


def criterion_10():
    # separate interpreters with different hash seeds, so set and dict
    # iteration order cannot leak into the reports
    a, b = _suite_in_subprocess("1"), _suite_in_subprocess("2")
    same = a == b and a == full_suite_reports()
    return report(10, same, f"{len(a)} bytes per run, identical={same}")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


@pytest.mark.parametrize("check", CRITERIA, ids=[f"criterion_{i}" for i in range(1, 11)])
def test_criterion(check):
    assert check()


if __name__ == "__main__":
    results = [c() for c in CRITERIA]
    sys.exit(0 if all(results) else 1)
