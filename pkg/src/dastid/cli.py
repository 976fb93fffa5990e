"""Command-line entry point.

Exit codes: 0 on success, 2 for an invalid configuration, 3 when any solver
run stopped at ``max_iter`` (records are still written), 1 for other
pipeline failures.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .experiments import (EXPERIMENTS, ConfigError, ExperimentConfig, ExperimentError,
                          curve_to_csv, records_to_csv, records_to_json, run_experiment)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INVALID_CONFIG = 2
EXIT_NONCONVERGENCE = 3

log = logging.getLogger("dastid")


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _ArgumentParser(prog="dastid", description="System identification experiments by DAST.")
    p.add_argument("--config", type=Path, help="flat key = value configuration file")
    p.add_argument("--experiment", choices=EXPERIMENTS, help="overrides the config value")
    p.add_argument("--seed", type=int, help="seed for identify; single-seed sweep otherwise")
    p.add_argument("--threads", type=int, help="BLAS threads per solve")
    p.add_argument("--out", type=Path, help="output file (stdout when omitted)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                   help="extra config override, may repeat")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def load_config(args) -> ExperimentConfig:
    base = ExperimentConfig.from_file(args.config) if args.config else ExperimentConfig()
    overrides = {}
    for item in args.set:
        if "=" not in item:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        k, v = item.split("=", 1)
        overrides[k.strip()] = v
    if args.experiment is not None:
        overrides["experiment"] = args.experiment
    if args.seed is not None:
        overrides["seed"] = str(args.seed)
        overrides["seeds"] = str(args.seed)
    if args.threads is not None:
        overrides["threads"] = str(args.threads)
    base_dir = args.config.parent if args.config else None
    return ExperimentConfig.from_mapping(overrides, base_dir=base_dir, base=base) if overrides else base


def _sidecar(out: Path, suffix: str) -> Path:
    return out.with_name(f"{out.stem}_{suffix}")


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_INVALID_CONFIG
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(args)
    except ConfigError as exc:
        print(f"dastid: invalid config: {exc}", file=sys.stderr)
        return EXIT_INVALID_CONFIG
    log.info("running %s (config %s)", cfg.experiment, cfg.config_hash())
    try:
        result = run_experiment(cfg)
    except ConfigError as exc:
        print(f"dastid: invalid config: {exc}", file=sys.stderr)
        return EXIT_INVALID_CONFIG
    except ExperimentError as exc:
        print(f"dastid: {exc}", file=sys.stderr)
        return EXIT_FAILURE

    text = records_to_json(result.records) if args.format == "json" else records_to_csv(result.records)
    if args.out is None:
        sys.stdout.write(text)
    else:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        args.out.write_text(text, encoding="utf-8")
        if result.curve:
            _sidecar(args.out, "curve.csv").write_text(curve_to_csv(result.curve), encoding="utf-8")
        if result.flags:
            _sidecar(args.out, "summary.json").write_text(json.dumps(result.flags, indent=1) + "\n",
                                                          encoding="utf-8")
    for key, value in result.flags.items():
        print(f"{key}: {value}", file=sys.stderr)
    if result.any_nonconverged:
        bad = sum(r.status == "max_iter" for r in result.records)
        print(f"dastid: {bad} solve(s) hit max_iter before the gap tolerance", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
