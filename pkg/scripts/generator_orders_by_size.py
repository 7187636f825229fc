"""Tabulate, by number of cycles, how often the generating-set orders embed in the group.

Sweeps every multiset of cycle sizes up to ``--max-n`` cycles of at most
``--max-k`` vertices and prints pass/fail counts per cycle count, plus a few
failing specs with their predicted orders and invariant factors.

    python3 scripts/generator_orders_by_size.py --max-n 6 --max-k 7 --jobs 4
"""

import argparse
from collections import Counter

from hinge_sandpile.verify import run_verify


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--max-n", type=int, default=6)
    parser.add_argument("--max-k", type=int, default=7)
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--show", type=int, default=5)
    args = parser.parse_args()
    report = run_verify("thm4.4", max_cycles=args.max_n, max_k=args.max_k, jobs=args.jobs)
    tally = Counter((len(c["params"]["spec"]), c["status"]) for c in report.cases)
    for n in range(3, args.max_n + 1):
        print(f"n={n}: pass={tally[(n, 'pass')]:4} fail={tally[(n, 'fail')]:4}")
    fails = [c for c in report.cases if c["status"] == "fail"]
    for c in fails[: args.show]:
        print(f"  {c['params']['spec']}: predicted {c['predicted']}, invariant factors {c['computed']}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
