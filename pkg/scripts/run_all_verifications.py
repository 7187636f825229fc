"""Run every verify target on its default grid and write one JSON report per target.

    python3 scripts/run_all_verifications.py --out-dir results/verify --jobs 4
"""

import argparse
import json
from pathlib import Path

from hinge_sandpile.verify import TARGETS, run_verify


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out-dir", type=Path, default=Path("results/verify"))
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    args.out_dir.mkdir(parents=True, exist_ok=True)
    failed = []
    for name in sorted(TARGETS):
        report = run_verify(name, seed=args.seed, jobs=args.jobs)
        path = args.out_dir / f"{name}.json"
        path.write_text(json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n")
        s = report.summary
        print(f"{name:10} pass={s['pass']:5} fail={s['fail']:3} skipped={s['skipped']:4} budget={s['budget']:3} -> {path}")
        if s["fail"]:
            failed.append(name)
    if failed:
        print("mismatches in:", ", ".join(failed))
    return 1 if failed else 0


if __name__ == "__main__":
    raise SystemExit(main())
