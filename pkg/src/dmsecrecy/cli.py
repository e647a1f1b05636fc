"""Command line entry point: ``dm-secrecy {solve,sweep-snr,converge,ber-sweep}``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .experiments import (
    ConfigError,
    ExperimentConfig,
    convergence_rows,
    format_rows,
    load_config,
    resolve_seed,
    run_ber_sweep,
    run_convergence,
    run_sr_vs_snr,
    solution_from_dict,
    solution_to_dict,
    solve_summary,
    write_rows,
)
from .solvers import NumericalError

EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

log = logging.getLogger("dmsecrecy")


def _parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON experiment config (defaults: 8 elements, 45 and 70 deg)")
    common.add_argument("--out", type=Path, help="output data file")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--seed", type=int, help="overrides config seed and $DM_SECRECY_SEED")
    common.add_argument("--dump-solutions", type=Path, metavar="PATH",
                        help="write the solved beamformers as JSON")
    common.add_argument("--quiet", action="store_true")

    p = argparse.ArgumentParser(prog="dm-secrecy", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("solve", parents=[common], help="solve one scenario and print a JSON summary")
    s.add_argument("--method", choices=("max_sr", "leakage", "nsp"), default="max_sr")
    s.add_argument("--snr-db", type=float, help="defaults to the first config SNR")
    sub.add_parser("sweep-snr", parents=[common], help="secrecy rate versus SNR")
    sub.add_parser("converge", parents=[common], help="secrecy rate versus outer iteration")
    sub.add_parser("ber-sweep", parents=[common], help="BER versus receive direction")
    return p


def _write_meta(out: Path, args, config, seed):
    # timestamps live beside the data file so the data stays byte-stable
    meta = {
        "command": args.command,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "version": __version__,
        "seed": seed,
        "config": config.__dict__,
    }
    out.with_name(out.name + ".meta.json").write_text(json.dumps(meta, indent=1, default=str) + "\n")


def _dump(path, solutions):
    path.write_text(json.dumps([solution_to_dict(sol, snr) for snr, sol in solutions], indent=1) + "\n")


def _run(args) -> int:
    config = load_config(args.config) if args.config else ExperimentConfig()
    seed = resolve_seed(config, args.seed)

    if args.command == "solve":
        summary = solve_summary(config, method=args.method, snr_db=args.snr_db, seed=seed)
        text = json.dumps(summary, indent=1) + "\n"
        if args.dump_solutions:
            sol = solution_from_dict(summary["solution"])
            _dump(args.dump_solutions, [(summary["snr_db"], sol)])
        if args.out:
            args.out.write_text(text)
        sys.stdout.write(text)
        return 0

    solutions = [] if args.dump_solutions else None
    if args.command == "sweep-snr":
        rows = run_sr_vs_snr(config, seed, solutions=solutions)
    elif args.command == "converge":
        rows = convergence_rows(run_convergence(config, seed))
    else:
        rows = run_ber_sweep(config, seed, solutions=solutions)

    if args.out:
        write_rows(rows, args.out, args.format)
        _write_meta(args.out, args, config, seed)
        log.info("wrote %d rows to %s", len(rows), args.out)
    else:
        sys.stdout.write(format_rows(rows, args.format))
    if solutions is not None:
        _dump(args.dump_solutions, solutions)
    return 0


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING if args.quiet else logging.INFO,
        format="%(levelname)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return _run(args)
    except ConfigError as exc:
        print(f"dm-secrecy: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"dm-secrecy: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
