"""Run every acceptance suite twice, write the JSON reports, print one line per criterion."""
from __future__ import annotations

import argparse
import time
from pathlib import Path

from morita.config import SearchConfig
from morita.suites import SUITES

CRITERIA = [
    (1, "coherence", "pentagon/triangle over ring, multimatrix and groupoid corpora"),
    (2, "ring-flagship", "column module over (M_n(F_p), F_p), n,p in {2,3}"),
    (3, "ring-refutation", "no equivalence of dim <= 2 between F2xF2 and F2"),
    (4, "ring-oracle", "certify_equivalence vs bicategorical inverse check"),
    (5, "rep-functor", "hom dimensions and round trips under induced functors"),
    (6, "cstar", "certified iff permutation; strict associativity and unitality"),
    (7, "groupoid-flagship", "P_n ~ pt for n=2,3,4; Z4 vs Z2xZ2 isotropy obstruction"),
    (8, "groupoid-oracle", "morita_decide vs exhaustive bibundle search"),
]


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", type=Path, default=Path("reports"))
    args = ap.parse_args(argv)
    args.out.mkdir(parents=True, exist_ok=True)
    config = SearchConfig(seed=args.seed)
    failures = 0
    identical = True
    for number, name, what in CRITERIA:
        start = time.perf_counter()
        first = SUITES[name](config)
        elapsed = time.perf_counter() - start
        second = SUITES[name](config)
        identical &= first.to_json() == second.to_json()
        (args.out / f"{name}.json").write_text(first.to_json(), encoding="utf-8")
        failures += not first.passed
        print(f"[{'PASS' if first.passed else 'FAIL'}] {number}. {name}: {what} ({elapsed:.1f}s)")
    failures += not identical
    print(f"[{'PASS' if identical else 'FAIL'}] 9. determinism: two runs give identical JSON")
    return 1 if failures else 0


if __name__ == "__main__":
    raise SystemExit(main())
