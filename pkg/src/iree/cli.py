"""Command-line interface: ``iree eval``, ``iree sweep`` and ``iree presets``."""

from __future__ import annotations

import argparse
import configparser
import sys
from pathlib import Path
from typing import Sequence

from .config import load_config, list_presets
from .errors import ConfigError, IREEError
from .metrics import MetricsReport, build_snapshot, report
from .randomized import random_scenario
from .report import emit_report
from .sweep import SWEEP_KINDS, SweepSpec, run_sweep

MODES = {"numeric": ("numeric",), "closed": ("closed-form",), "both": ("numeric", "closed-form")}
REPORT_FIELDS = ("ee", "aee", "iee", "iree", "se", "de", "xi", "c_tot", "d_tot", "p_tot", "clamped")
SPEC_KEYS = {"kind", "start", "stop", "steps", "axis", "assets", "target"}


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--grid", type=int, metavar="N", help="grid resolution per axis (overrides the scenario)")
    common.add_argument("--mode", choices=sorted(MODES), default="both", help="divergence mode(s) to report")
    common.add_argument("--epoch", type=float, metavar="SECONDS", help="evaluation epoch (overrides the scenario)")
    common.add_argument(
        "--seed", type=int, help="seed for the randomized scenario; only valid with scenario 'random'"
    )
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="iree", description="IREE metrics for 3D wireless network scenarios.")
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", parents=[common], help="evaluate one scenario")
    ev.add_argument("scenario", help="config file, preset name, or 'random' (needs --seed)")

    sw = sub.add_parser("sweep", parents=[common], help="run a parameter sweep")
    sw.add_argument("scenario", help="config file, preset name, or 'random' (needs --seed)")
    sw.add_argument("--spec", type=Path, help="INI file with a [sweep] section; flags override its keys")
    sw.add_argument("--kind", choices=SWEEP_KINDS)
    sw.add_argument("--start", type=float)
    sw.add_argument("--stop", type=float)
    sw.add_argument("--steps", type=int)
    sw.add_argument("--axis", choices=("x", "y", "z"))
    sw.add_argument("--asset", action="append", default=None, metavar="NAME",
                    help="[asset.NAME] section of the scenario to place (repeatable)")
    sw.add_argument("--target", help="station kind for se/de sweeps (default terrestrial)")
    sw.add_argument("--workers", type=int, default=1, help="concurrent sweep points")
    sw.add_argument("--format", choices=("csv", "human-summary"), default="csv")
    sw.add_argument("--output", "-o", type=Path, help="write here instead of stdout")

    sub.add_parser("presets", help="list bundled scenarios")
    return parser


def _load(args):
    if args.scenario == "random":
        if args.seed is None:
            raise ConfigError("scenario 'random' needs --seed")
        scenario, assets = random_scenario(args.seed), {}
    else:
        if args.seed is not None:
            raise ConfigError("--seed only applies to scenario 'random'")
        loaded = load_config(args.scenario)
        scenario, assets = loaded.scenario, loaded.assets
    changes = {}
    if args.grid is not None:
        changes["grid_resolution"] = args.grid
    if args.epoch is not None:
        changes["epoch"] = args.epoch
    return (scenario.replace(**changes) if changes else scenario), assets


def _spec_from_file(path: Path) -> dict:
    parser = configparser.ConfigParser()
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from None
    if "sweep" not in parser:
        raise ConfigError(f"{path}: missing [sweep] section")
    sec = parser["sweep"]
    unknown = set(sec) - SPEC_KEYS
    if unknown:
        raise ConfigError(f"{path}: [sweep]: unknown keys {sorted(unknown)}")
    out = dict(sec)
    if "assets" in out:
        out["assets"] = [a.strip() for a in out["assets"].split(",") if a.strip()]
    return out


def _build_spec(args, assets) -> SweepSpec:
    raw = _spec_from_file(args.spec) if args.spec else {}
    for key, flag in (("kind", "kind"), ("start", "start"), ("stop", "stop"), ("steps", "steps"),
                      ("axis", "axis"), ("assets", "asset"), ("target", "target")):
        value = getattr(args, flag)
        if value is not None:
            raw[key] = value
    for key in ("kind", "start", "stop", "steps"):
        if key not in raw:
            raise ConfigError(f"sweep needs --{key}")
    names = raw.get("assets", [])
    missing = [n for n in names if n not in assets]
    if missing:
        known = ", ".join(sorted(assets)) or "none"
        raise ConfigError(f"unknown asset(s) {missing}; scenario defines: {known}")
    try:
        start, stop, steps = float(raw["start"]), float(raw["stop"]), int(raw["steps"])
    except ValueError as exc:
        raise ConfigError(f"sweep range: {exc}") from None
    return SweepSpec(
        kind=raw["kind"],
        start=start,
        stop=stop,
        steps=steps,
        axis=raw.get("axis", "x"),
        assets=tuple(assets[n] for n in names),
        target=raw.get("target", "terrestrial"),
    )


def _format_reports(name: str, reports: Sequence[MetricsReport]) -> str:
    lines = [f"scenario: {name}"]
    head = f"{'metric':<8}" + "".join(f"{r.mode:>18}" for r in reports)
    lines.append(head)
    for field in REPORT_FIELDS:
        cells = []
        for r in reports:
            v = getattr(r, field)
            cells.append(f"{str(v).lower():>18}" if isinstance(v, bool) else f"{v:>18.9g}")
        lines.append(f"{field:<8}" + "".join(cells))
    return "\n".join(lines) + "\n"


def cmd_eval(args) -> int:
    scenario, _ = _load(args)
    snap = build_snapshot(scenario)
    reports = [report(snap, m) for m in MODES[args.mode]]
    sys.stdout.write(_format_reports(scenario.name, reports))
    return 0


def cmd_sweep(args) -> int:
    scenario, assets = _load(args)
    spec = _build_spec(args, assets)
    if args.workers < 1:
        raise ConfigError("--workers must be at least 1")
    rows = run_sweep(scenario, spec, MODES[args.mode], workers=args.workers)
    emit_report(rows, args.format, args.output, axis_label=spec.label)
    return 0


def cmd_presets(args) -> int:
    for name in list_presets():
        print(name)
    return 0


COMMANDS = {"eval": cmd_eval, "sweep": cmd_sweep, "presets": cmd_presets}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (IREEError, ValueError, ArithmeticError, OSError) as exc:
        msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        print(f"iree: error: {msg}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
