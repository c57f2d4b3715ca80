"""
Run a pipeline config and print mean +- std accuracy per featurization and
classifier, grouped by target.

    python scripts/run_comparison.py                       # configs/full.yaml
    python scripts/run_comparison.py --config configs/quick.yaml --jobs 4
"""

import argparse
import csv
import time
from pathlib import Path

from roughtda import pipeline

ROOT = Path(__file__).resolve().parents[1]


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--config", default=str(ROOT / "configs" / "full.yaml"))
    ap.add_argument("--out", default=None)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()

    cfg = pipeline.load_config(args.config, args.out)
    t0 = time.perf_counter()
    pipeline.run(cfg, args.jobs)
    elapsed = time.perf_counter() - t0

    with open(Path(cfg.output_dir) / "summary.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    table = {}
    for r in rows:
        table.setdefault((r["target"], r["featurization"]), {})[r["classifier"]] = \
            f"{float(r['mean']):.3f} +- {float(r['std']):.3f}"
    classifiers = sorted({r["classifier"] for r in rows})
    width = max(len(f) for _, f in table) + 2
    print(f"{'featurization':<{width}}" + "".join(f"{c:>18}" for c in classifiers))
    target = None
    for (t, fid), cells in sorted(table.items()):
        if t != target:
            print(f"-- {t}")
            target = t
        print(f"{fid:<{width}}" + "".join(f"{cells.get(c, '-'):>18}" for c in classifiers))
    print(f"\n{len(rows)} results in {elapsed:.0f} s, written to {cfg.output_dir}")


if __name__ == "__main__":
    main()
