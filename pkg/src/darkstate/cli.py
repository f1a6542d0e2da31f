"""Command-line front end: ``darkstate run | sweep | selfcheck``.

Exit codes: 0 success, 1 selfcheck failure, 2 config/usage error,
3 solver error.
"""

import argparse
import logging
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import selfcheck
from .config import TWO_PI, RunConfig
from .exceptions import ConfigError, DarkStateError
from .io import write_csv
from .propagation import write_snapshot_csv
from .sweep import SweepSpec, run_scenario, run_sweep

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_SOLVER = 0, 1, 2, 3

PROFILE_HEADER = ["x_m", "drive_intensity", "probe_in", "probe_out"]

# CLI axis name -> (sweep axis, factor from CLI units to SI)
AXIS_NAMES = {
    "detuning_hz": ("detuning", TWO_PI),
    "length_m": ("cell_length", 1.0),
    "omega0_hz": ("drive_strength", TWO_PI),
    "density_m3": ("density", 1.0),
}


class UsageError(ConfigError):
    pass


def parse_axis(text):
    """Parse ``name=start:stop:count`` (inclusive) into ``(name, values)`` in CLI units."""
    try:
        name, rng = text.split("=", 1)
        start, stop, count = rng.split(":")
        start, stop, count = float(start), float(stop), int(count)
    except ValueError as exc:
        raise UsageError(f"malformed axis {text!r}; expected name=start:stop:count") from exc
    name = name.strip()
    if name not in AXIS_NAMES:
        raise UsageError(f"unknown axis {name!r}; choose from {', '.join(AXIS_NAMES)}")
    if count < 1:
        raise UsageError(f"axis count must be >= 1, got {count}")
    if count > 1 and not stop > start:
        raise UsageError("axis stop must exceed start when count > 1")
    if not (math.isfinite(start) and math.isfinite(stop)):
        raise UsageError("axis bounds must be finite")
    return name, tuple(float(v) for v in np.linspace(start, stop, count))


def _load(path, out_dir=None, snapshots=None):
    cfg = RunConfig.load(path)
    if out_dir is not None:
        cfg.set("output", "dir", str(out_dir))
    if snapshots is not None:
        cfg.set("output", "snapshots_every", int(snapshots))
    return cfg


def metrics_text(result):
    lines = []
    if result.report is not None:
        lines.append(result.report.to_text().rstrip("\n"))
    else:
        lines.append("narrowing report: n/a (drive or probe has fewer than two peaks)")
    lines.append(f"drive peaks              : {result.drive_metrics.n_peaks}")
    lines.append(f"probe peaks              : {result.probe_metrics.n_peaks}")
    if result.input_metrics is not None:
        ratio = result.probe_metrics.mean_fwhm / result.input_metrics.mean_fwhm
        lines.append(f"probe FWHM out/in        : {ratio:.6g}")
    lines.append(f"power fraction           : {result.record.power_fraction:.6g}")
    return "\n".join(lines) + "\n"


def run_single(path, out_dir=None, snapshots=None):
    cfg = _load(path, out_dir, snapshots)
    scn = cfg.scenario()
    every = cfg.get("output", "snapshots_every") or None
    result = run_scenario(scn, snapshot_every=every)

    out = Path(cfg.get("output", "dir"))
    out.mkdir(parents=True, exist_ok=True)
    write_csv(out / "profile.csv", PROFILE_HEADER,
              zip(scn.grid.x, result.drive.intensity,
                  result.probe_in.intensity, result.probe_out.intensity))
    (out / "metrics.txt").write_text(metrics_text(result), encoding="utf-8", newline="\n")
    for step, field in result.record.snapshots:
        write_snapshot_csv(out / f"snap_{step:06d}.csv", field)
    return result


def run_sweep_cmd(path, axis, out_dir=None, jobs=None):
    cfg = _load(path, out_dir)
    name, values = parse_axis(axis)
    axis_kind, factor = AXIS_NAMES[name]
    spec = SweepSpec(
        base=cfg.scenario(),
        axis=axis_kind,
        values=tuple(v * factor for v in values),
        out_dir=cfg.get("output", "dir"),
        label=name,
        scale=factor,
    )
    return run_sweep(spec, jobs=jobs or os.cpu_count() or 1)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="darkstate",
        description="Probe narrowing by spatially structured dark states.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="propagate one configuration")
    run.add_argument("config")
    run.add_argument("--out", help="output directory (overrides [output] dir)")
    run.add_argument("--snapshots", type=int, metavar="M", help="dump the field every M steps")

    sw = sub.add_parser("sweep", help="sweep one parameter")
    sw.add_argument("config")
    sw.add_argument("--axis", required=True, help="e.g. detuning_hz=-2e6:2e6:21")
    sw.add_argument("--out", help="output directory (overrides [output] dir)")
    sw.add_argument("--jobs", type=int, default=None, help="worker processes (default: CPUs)")

    sub.add_parser("selfcheck", help="run the built-in oracle checks")
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "selfcheck":
            return EXIT_OK if selfcheck.run_all() else EXIT_CHECK
        if args.command == "run":
            result = run_single(args.config, args.out, args.snapshots)
            sys.stdout.write(metrics_text(result))
        else:
            if args.jobs is not None and args.jobs < 1:
                raise UsageError("--jobs must be >= 1")
            rows = run_sweep_cmd(args.config, args.axis, args.out, args.jobs)
            failed = sum(not r.ok for r in rows)
            print(f"{len(rows)} rows written ({failed} failed)")
    except ConfigError as exc:
        print(f"darkstate: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DarkStateError, ArithmeticError, ValueError) as exc:
        print(f"darkstate: solver error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
