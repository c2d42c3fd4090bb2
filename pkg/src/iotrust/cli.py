"""Command-line entry point: run scenarios, sweep parameters, rebuild figures.

Exit codes: 0 success, 1 usage error, 2 configuration error, 3 runtime
failure. Errors are single lines on stderr prefixed with ``error:``.
All randomness flows from the config seed or ``--seed``; nothing is ever
seeded from the clock.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from .config import (
    ConfigError,
    apply_overrides,
    build_config,
    effective_dict,
    load_raw_config,
)
from .harness import FIGURES, reproduce_figure, run_scenario, sweep, write_run_csv, write_sweep_csv

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CONFIG = 2
EXIT_RUNTIME = 3

OUT_ENV_VAR = "IOTRUST_OUT"

log = logging.getLogger("iotrust")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="iotrust", description=__doc__)
    parser.add_argument("--verbose", "-v", action="count", default=0, help="increase log output")
    sub = parser.add_subparsers(dest="command", metavar="command")

    def common(p: _Parser) -> None:
        p.add_argument("--config", help="TOML scenario config file")
        p.add_argument("--seed", type=int, help="override the scenario seed")
        p.add_argument("--out", help=f"output directory (default ${OUT_ENV_VAR} or ./results)")
        p.add_argument("--jobs", type=int, default=1, help="parallel workers (default 1)")
        p.add_argument(
            "--set",
            dest="overrides",
            action="append",
            default=[],
            metavar="KEY=VALUE",
            help="override a config key, e.g. --set attack.p_a=0.3 (repeatable)",
        )

    p_run = sub.add_parser("run", help="simulate one scenario and write per-replication CSVs")
    common(p_run)

    p_sweep = sub.add_parser("sweep", help="sweep one parameter and write a summary CSV")
    common(p_sweep)
    p_sweep.add_argument("--axis", required=True, help="parameter to sweep, e.g. p_a")
    p_sweep.add_argument(
        "--values", required=True, help="comma list or start:stop:step range, e.g. 0.1:1.0:0.1"
    )

    p_fig = sub.add_parser("figure", help="reproduce a named experiment's CSVs")
    common(p_fig)
    p_fig.add_argument("figure_id", metavar="figure-id", help="all|" + "|".join(sorted(FIGURES)))

    p_val = sub.add_parser("validate-config", help="check a config and print the effective values")
    p_val.add_argument("--config", help="TOML scenario config file")
    p_val.add_argument("--seed", type=int, help="override the scenario seed")
    p_val.add_argument(
        "--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE"
    )
    return parser


def parse_values(text: str) -> list[float]:
    """Sweep values: either a comma list or an inclusive start:stop:step range."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise UsageError(f"range {text!r} must look like start:stop:step")
        try:
            start, stop, step = (float(p) for p in parts)
        except ValueError as exc:
            raise UsageError(f"range {text!r}: {exc}") from exc
        if step <= 0:
            raise UsageError(f"range {text!r}: step must be positive")
        values = []
        k = 0
        while True:
            v = start + k * step
            if v > stop + 1e-9:
                break
            values.append(round(v, 12))
            k += 1
        if not values:
            raise UsageError(f"range {text!r} contains no values")
        return values
    try:
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError as exc:
        raise UsageError(f"values {text!r}: {exc}") from exc


def _load_config(args: argparse.Namespace) -> tuple[dict, object]:
    raw = load_raw_config(args.config) if args.config else {}
    if args.overrides:
        raw = apply_overrides(raw, args.overrides)
    if args.seed is not None:
        raw.setdefault("scenario", {})["seed"] = args.seed
    return raw, build_config(raw)


def _out_dir(args: argparse.Namespace) -> Path:
    if getattr(args, "out", None):
        return Path(args.out)
    return Path(os.environ.get(OUT_ENV_VAR, "results"))


def _print_effective(config) -> None:
    for section, body in effective_dict(config).items():
        print(f"[{section}]")
        for key, val in body.items():
            print(f"{key} = {val!r}")
        print()


def _cmd_run(args: argparse.Namespace) -> int:
    _, config = _load_config(args)
    out = _out_dir(args)
    replications = run_scenario(config, jobs=args.jobs)
    for r, records in enumerate(replications):
        path = write_run_csv(records, out / f"run_rep{r:03d}.csv", config.n_devices)
        log.info("wrote %s", path)
    print(f"wrote {len(replications)} replication CSV(s) to {out}")
    return EXIT_OK


def _cmd_sweep(args: argparse.Namespace) -> int:
    _, config = _load_config(args)
    values = parse_values(args.values)
    try:
        rows = sweep(config, args.axis, values, jobs=args.jobs)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    out = _out_dir(args)
    path = write_sweep_csv(rows, out / f"sweep_{rows[0]['axis']}.csv")
    print(f"wrote {path}")
    return EXIT_OK


def _cmd_figure(args: argparse.Namespace) -> int:
    if args.figure_id != "all" and args.figure_id not in FIGURES:
        raise UsageError(
            f"unknown figure id {args.figure_id!r}; known: all, {', '.join(sorted(FIGURES))}"
        )
    if args.config:
        raise UsageError("figure runs use built-in scenarios; use --set to adjust them")
    seed = args.seed if args.seed is not None else 1
    ids = sorted(FIGURES) if args.figure_id == "all" else [args.figure_id]
    for figure_id in ids:
        written = reproduce_figure(
            figure_id, seed=seed, out_dir=_out_dir(args), jobs=args.jobs, overrides=args.overrides
        )
        for path in written:
            print(f"wrote {path}")
    return EXIT_OK


def _cmd_validate(args: argparse.Namespace) -> int:
    _, config = _load_config(args)
    _print_effective(config)
    print("config ok")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a command is required (run | sweep | figure | validate-config)")
        logging.basicConfig(
            level=logging.DEBUG if args.verbose > 1 else logging.INFO if args.verbose else logging.WARNING,
            format="%(levelname)s %(name)s: %(message)s",
        )
        handler = {
            "run": _cmd_run,
            "sweep": _cmd_sweep,
            "figure": _cmd_figure,
            "validate-config": _cmd_validate,
        }[args.command]
        return handler(args)
    except UsageError as exc:
        print(f"error: usage: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConfigError as exc:
        print(f"error: config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001 - the CLI boundary reports, not raises
        print(f"error: runtime: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


def run_main() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    run_main()
