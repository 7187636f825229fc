"""Run the factorisation checker under both readings of the input values and compare.

    python3 scripts/claim45_sweep.py --max-n 4 --max-k 7 --out-dir results/claim45
"""

import argparse
import json
from pathlib import Path

from hinge_sandpile.verify import exhaustive_specs, run_claim45


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--max-n", type=int, default=4)
    parser.add_argument("--max-k", type=int, default=7)
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--out-dir", type=Path, default=Path("results/claim45"))
    args = parser.parse_args()
    args.out_dir.mkdir(parents=True, exist_ok=True)
    specs = exhaustive_specs(args.max_n, 3, args.max_k, min_cycles=2)
    for convention in ("vertices", "minus-one"):
        report = run_claim45(specs, convention, args.jobs)
        path = args.out_dir / f"claim45_{convention}.json"
        path.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
        s = report["summary"]
        print(f"{convention:10} {s['consistent']}/{s['total']} consistent "
              f"(same shape {s['same_shape_consistent']}/{s['same_shape']}) -> {path}")
        for spec in report["counterexample_candidates"][:10]:
            print("   candidate:", spec)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
