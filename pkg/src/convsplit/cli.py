"""Command-line entry point: ``convsplit run|list-problems|reproduce``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .harness import (
    REPRODUCE_TARGETS,
    ConfigError,
    load_config,
    reproduce_configs,
    run,
)
from .problems import REGISTRY, get_problem

EXIT_OK, EXIT_CONFIG, EXIT_DIVERGED = 0, 1, 2


def _print_rows(name: str, rows) -> None:
    print(f"# {name}")
    print(f"{'N':>6} {'Nt':>8} {'Linf':>12} {'order':>6} {'L2':>12} {'order':>6} {'cpu[s]':>8}")
    for r in rows:
        if r.diverged:
            print(f"{r.N:>6} {r.Nt:>8} {'diverged':>12}")
            continue
        print(f"{r.N:>6} {r.Nt:>8} {r.linf:12.4e} {r.order_linf:6.2f} {r.l2:12.4e} {r.order_l2:6.2f} {r.cpu:8.2f}")


def _execute(cfg, jobs: int, out: str | None) -> bool:
    result, paths, diverged = run(cfg, jobs=jobs, out_dir=out)
    if cfg.mode == "timeseries":
        d = result.diagnostics[-1] if result.diagnostics else None
        print(f"# {cfg.name}: {len(result.diagnostics) - 1} steps" + (f", final min {d.umin:.4e} max {d.umax:.4e}" if d else ""))
        if result.diverged:
            print(f"  diverged: {result.message}")
    else:
        _print_rows(cfg.name, result)
    print(f"  wrote {paths['manifest']}")
    return diverged


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="convsplit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="run an experiment described by an INI file")
    p_run.add_argument("config")
    p_run.add_argument("--out", default=None, help="output directory (overrides the config)")
    p_run.add_argument("--jobs", type=int, default=1, help="parallel runs across the sweep")
    p_run.add_argument("--override", action="append", default=[], metavar="KEY=VALUE")
    sub.add_parser("list-problems", help="list registered problems")
    p_rep = sub.add_parser("reproduce", help="regenerate the data behind a table or figure")
    p_rep.add_argument("target", choices=REPRODUCE_TARGETS)
    p_rep.add_argument("--out", default="results")
    p_rep.add_argument("--jobs", type=int, default=1)
    p_rep.add_argument("--full", action="store_true", help="include the heaviest 2D resolutions")
    args = parser.parse_args(argv)

    if args.command == "list-problems":
        for name in sorted(REGISTRY):
            p = get_problem(name)
            print(f"{name:18s} {p.dim}D {p.boundary:9s} {p.description}")
        return EXIT_OK
    try:
        if args.command == "run":
            cfg = load_config(args.config)
            if args.override:
                cfg = cfg.with_overrides(args.override)
            cfgs = [cfg]
        else:
            cfgs = reproduce_configs(args.target, full=args.full)
        if args.jobs < 1:
            raise ConfigError("--jobs must be at least 1")
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    diverged = False
    for cfg in cfgs:
        out = args.out if args.out is not None else cfg.out_dir
        try:
            diverged |= _execute(cfg, args.jobs, str(Path(out)))
        except OSError as exc:
            print(f"output error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
    return EXIT_DIVERGED if diverged else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
