"""
Command line entry point.

    roughtda run --config configs/full.yaml --out runs/full --jobs 4
    roughtda report runs/full runs/other --out merged.csv

Exit codes: 0 success, 1 config error, 2 data error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import __version__
from . import pipeline
from .errors import ConfigError, RoughtdaError

log = logging.getLogger("roughtda")

EXIT_OK, EXIT_CONFIG, EXIT_DATA, EXIT_IO = 0, 1, 2, 3


def _common(p):
    p.add_argument("--config", help="YAML pipeline config (default: built-in full comparison)")
    p.add_argument("--out", help="output directory (overrides output_dir)")
    p.add_argument("--seed", type=int, help="override the dataset and cross-validation seeds")
    p.add_argument("--jobs", type=int, default=1, help="worker processes (results do not depend on it)")


def _dumps(p):
    p.add_argument("--dump-mean-lines", action="store_true",
                   help="write filtered mean lines of the profile baselines")
    p.add_argument("--dump-apsd", action="store_true", help="write APSD grids as SURF1 files")
    p.add_argument("--dump-diagrams", action="store_true", help="write persistence diagrams as CSV")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="roughtda", description=__doc__.split("\n\n")[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    _common(sub.add_parser("generate", help="write the synthetic surfaces and profiles"))
    p = sub.add_parser("featurize", help="compute feature matrices")
    _common(p)
    _dumps(p)
    _common(sub.add_parser("classify", help="cross-validate the feature matrices"))
    p = sub.add_parser("run", help="generate, featurize, classify and summarize")
    _common(p)
    _dumps(p)

    p = sub.add_parser("report", help="merge CvReport JSONs of several runs")
    p.add_argument("run_dirs", nargs="*")
    p.add_argument("--out", help="write the merged CSV here instead of stdout")
    return ap


def _load(args) -> pipeline.PipelineConfig:
    if args.jobs < 1:
        raise ConfigError("--jobs must be >= 1")
    if args.config:
        cfg = pipeline.load_config(args.config, args.out)
    else:
        cfg = pipeline.default_config(args.out or "runs/default")
    if args.seed is not None:
        if args.seed < 0:
            raise ConfigError("--seed must be non-negative")
        cfg = pipeline.with_seed(cfg, args.seed)
    return cfg


def _dump_flags(args):
    return {"dump_mean_lines": args.dump_mean_lines, "dump_apsd": args.dump_apsd,
            "dump_diagrams": args.dump_diagrams}


def _dispatch(args) -> int:
    if args.command == "report":
        if not args.run_dirs:
            log.error("report: no run directories given")
            return EXIT_DATA
        text, skipped = pipeline.report(args.run_dirs)
        for s in skipped:
            log.warning("skipped %s", s)
        if args.out:
            from .io import atomic_write_text

            atomic_write_text(args.out, text)
        else:
            sys.stdout.write(text)
        return EXIT_OK

    cfg = _load(args)
    if args.command == "generate":
        pipeline.generate_stage(cfg, args.jobs)
    elif args.command == "featurize":
        data = pipeline.generate_stage(cfg, args.jobs)
        pipeline.featurize_stage(cfg, data, args.jobs, **_dump_flags(args))
    elif args.command == "classify":
        pipeline.classify_stage(cfg, args.jobs)
    else:
        pipeline.run(cfg, args.jobs, **_dump_flags(args))
        sys.stdout.write((Path(cfg.output_dir) / "summary.csv").read_text())
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return _dispatch(args)
    except ConfigError as exc:
        log.error("config error: %s", exc)
        return EXIT_CONFIG
    except RoughtdaError as exc:
        log.error("data error: %s", exc)
        return EXIT_DATA
    except OSError as exc:
        log.error("I/O error: %s", exc)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
