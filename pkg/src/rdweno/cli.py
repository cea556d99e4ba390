"""Command-line entry point: ``rdweno solve | table | list-presets``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import yaml

from .config import ConfigError, apply_overrides, parse_config
from .runner import FAMILIES, list_presets, run, run_table

EXIT_OK, EXIT_CONFIG, EXIT_INTERNAL = 0, 2, 3


def _load_document(path: str | None, preset: str | None) -> dict:
    doc = {}
    if path is not None:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"--config: cannot read {path}: {exc.strerror}") from None
        try:
            doc = yaml.safe_load(text) or {}
        except yaml.YAMLError as exc:
            raise ConfigError(f"<root>: malformed document: {exc}") from None
        if not isinstance(doc, dict):
            raise ConfigError("<root>: expected a mapping")
    if preset is not None:
        doc = {"preset": preset, **doc}
    if not doc:
        raise ConfigError("no configuration given; use --config or --preset")
    return doc


def cmd_solve(args) -> int:
    doc = apply_overrides(_load_document(args.config, args.preset), args.override or [])
    config = parse_config(doc)
    report = run(config, out_dir=args.out or config.out_dir)
    print(json.dumps(report.to_json(), indent=2))
    return EXIT_OK


def cmd_table(args) -> int:
    rows = run_table(args.family, out_dir=args.out, jobs=args.jobs, n_values=args.n)
    for row in rows:
        norms = "blow-up" if row.l1 is None else f"L1={row.l1:.6e} L2={row.l2:.6e} Linf={row.linf:.6e}"
        extra = f" t_blowup={row.blowup_time:.6g}" if row.blowup_time is not None else ""
        print(f"{row.preset:28s} {row.scheme:8s} N={row.n_cells:<6d} CFL={row.cfl:<6g} {row.species} "
              f"{row.status:6s} {norms}{extra}")
    if args.out:
        print(f"wrote {Path(args.out) / (args.family + '.csv')}")
    return EXIT_OK


def cmd_list(args) -> int:
    for name, desc in list_presets():
        print(f"{name:30s} {desc}")
    print("\nfamilies: " + ", ".join(FAMILIES))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rdweno", description="WENO solvers for reaction-diffusion traveling waves")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="run one configuration")
    solve.add_argument("--config", help="YAML or JSON run configuration")
    solve.add_argument("--preset", help="start from a named preset")
    solve.add_argument("--override", action="append", metavar="KEY=VALUE",
                       help="dotted-key override, e.g. scheme.kind=CWENO (repeatable)")
    solve.add_argument("--out", help="output directory (overrides out_dir)")
    solve.set_defaults(func=cmd_solve)

    table = sub.add_parser("table", help="run a preset family and write an aggregated CSV")
    table.add_argument("--family", required=True, help=", ".join(FAMILIES))
    table.add_argument("--out", help="directory for <family>.csv")
    table.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    table.add_argument("--n", type=int, nargs="+", help="only run these grid sizes")
    table.set_defaults(func=cmd_table)

    lst = sub.add_parser("list-presets", help="show presets and table families")
    lst.set_defaults(func=cmd_list)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001
        logging.getLogger(__name__).debug("internal error", exc_info=True)
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
