"""Separate random tree pairs and summarize outcomes.

usage: python3 scripts/run_dyck_battery.py [count] [seed]
"""

import random
import sys
import time
from collections import Counter

from sepkit.dyck import CODE_EMITTED, dyck_separate, witness_valid
from sepkit.instances import random_graph_tree


def main(count: int = 100, seed: int = 0):
    rng = random.Random(seed)
    outcomes, depths, bad = Counter(), Counter(), 0
    t0 = time.time()
    for _ in range(count):
        K = rng.randint(1, 3)
        T = random_graph_tree(rng, rng.randint(1, 5), K, acyclic=rng.random() < 0.5)
        S = random_graph_tree(rng, rng.randint(1, 5), K)
        rep = dyck_separate(T, S)
        outcomes[rep.outcome] += 1
        if rep.outcome == CODE_EMITTED:
            depths[rep.verification["depth"]] += 1
            bad += rep.verification["violations"] != 0
        else:
            bad += not witness_valid(T, S, rep.witness)
    print(f"{count} pairs in {time.time() - t0:.1f}s: {dict(outcomes)}")
    print("verification depths:", dict(sorted(depths.items())))
    print("failures:", bad)
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main(*map(int, sys.argv[1:])))
