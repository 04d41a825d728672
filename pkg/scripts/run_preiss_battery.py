"""Run the Preiss recursion on the hand-built battery and print one line per instance.

usage: python3 scripts/run_preiss_battery.py [outdir]
With an output directory, each report is written there as JSON.
"""

import sys
import time
from pathlib import Path

from sepkit.cli import PreissRunConfig, preiss_report
from sepkit.instances import preiss_battery
from sepkit.serialize import report_dumps
from sepkit.souslin import scheme_to_json


def main(outdir: str | None = None):
    out = Path(outdir) if outdir else None
    if out:
        out.mkdir(parents=True, exist_ok=True)
    failures = 0
    for name, A, S, M in preiss_battery():
        t0 = time.time()
        rep = preiss_report(A, S, PreissRunConfig(cubes=M), {"A": scheme_to_json(A), "B": S.to_json()})
        v = rep.get("verification")
        ok = v is not None and not v["violations"] and v["cgc"]["ok"]
        failures += not ok
        detail = (f"{rep['fuel_used']:4d} nodes, {v['a_checked']:4d} A / {v['b_checked']:2d} B samples"
                  if v else f"exhausted by {rep['exhausted_by']}")
        print(f"{'ok  ' if ok else 'FAIL'} {name:24s} N={A.dimension} M={M}  {detail}  {time.time() - t0:.2f}s")
        if out:
            (out / f"{name.replace('/', '_')}.json").write_text(report_dumps(rep))
    print(f"{failures} failures")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main(*sys.argv[1:]))
