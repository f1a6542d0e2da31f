"""Scenario runner and parameter sweeps over detuning, cell length, drive and density."""

import dataclasses
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import analysis, fields
from .atomic import AtomicParams
from .exceptions import NoPeakError, SweepError
from .fields import TransverseGrid
from .io import write_csv
from .propagation import PropagationConfig, free_space, propagate

logger = logging.getLogger(__name__)

SWEEP_HEADER = [
    "axis_name", "axis_value", "probe_fwhm_m", "drive_fwhm_m",
    "ratio_measured", "ratio_predicted", "power_fraction", "error",
]

INTENSITY = "intensity"
OPTICAL_DEPTH = "optical_depth"


@dataclass(frozen=True)
class ProbeSpec:
    """Probe at the cell entrance.

    ``shape`` is ``"plane"``, ``"gaussian"`` or ``"focused"``. A focused probe
    is a Gaussian of waist ``waist`` at a thin lens of focal length
    ``lens_focal``, propagated in free space over ``lens_distance`` to the
    cell entrance. ``lens_distance=None`` centres the cell on the focal plane.
    """

    shape: str = "gaussian"
    amplitude: float = 2 * math.pi * 1e4
    waist: float = 0.7e-3
    center: float = 0.0
    lens_focal: float = None
    lens_distance: float = None

    def __post_init__(self):
        if self.shape not in ("plane", "gaussian", "focused"):
            raise ValueError(f"unknown probe shape {self.shape!r}")
        if self.shape == "focused" and self.lens_focal is None:
            raise ValueError("a focused probe needs lens_focal")


def prepare_probe(grid, spec, wavelength, cell_length):
    if spec.shape == "plane":
        return fields.plane_probe(grid, spec.amplitude)
    probe = fields.gaussian_probe(grid, spec.amplitude, spec.waist, spec.center)
    if spec.shape == "focused":
        distance = spec.lens_distance
        if distance is None:
            distance = spec.lens_focal - cell_length / 2
        probe = fields.lens_phase(probe, spec.lens_focal, wavelength)
        probe = free_space(probe, distance, 2 * math.pi / wavelength)
    return probe


@dataclass(frozen=True)
class Scenario:
    """Everything needed for one propagate-and-measure run.

    ``observable`` picks what is measured: ``"intensity"`` compares the
    transmitted probe intensity with the drive intensity; ``"optical_depth"``
    compares the absorption profile ``-ln|out/in|`` with the dark region of
    the drive (``max - |Omega_d|^2``), which suits drives with a central null.
    """

    atom: AtomicParams
    drive: object
    probe: ProbeSpec
    grid: TransverseGrid
    propagation: PropagationConfig
    observable: str = INTENSITY
    min_prominence: float = analysis.DEFAULT_PROMINENCE

    def __post_init__(self):
        if self.observable not in (INTENSITY, OPTICAL_DEPTH):
            raise ValueError(f"unknown observable {self.observable!r}")


@dataclass(frozen=True, eq=False)
class ScenarioResult:
    scenario: Scenario
    drive: fields.DriveProfile
    record: object
    drive_metrics: analysis.BeamMetrics
    probe_metrics: analysis.BeamMetrics
    input_metrics: analysis.BeamMetrics
    predicted_R: float
    report: analysis.NarrowingReport

    @property
    def probe_in(self):
        return self.record.input

    @property
    def probe_out(self):
        return self.record.output


def predicted_ratio(scn, drive):
    omega = drive.peak_rabi
    if scn.atom.eta > 0 and omega > 0:
        return analysis.ratio_R(scn.atom, omega, scn.propagation.cell_length)
    return None


def run_scenario(scn, snapshot_every=None):
    """Propagate the scenario's probe and measure drive and probe profiles."""
    grid = scn.grid
    drive = fields.make_drive(grid, scn.drive)
    probe_in = prepare_probe(grid, scn.probe, scn.atom.wavelength, scn.propagation.cell_length)
    record = propagate(probe_in, drive, scn.atom, scn.propagation, snapshot_every=snapshot_every)

    if scn.observable == OPTICAL_DEPTH:
        probe_profile = analysis.optical_depth(record.input, record.output)
        drive_profile = np.max(drive.intensity) - drive.intensity
        input_metrics = None
    else:
        probe_profile = record.output.intensity
        drive_profile = drive.intensity
        try:
            input_metrics = analysis.measure(record.input.intensity, grid, scn.min_prominence)
        except NoPeakError:
            input_metrics = None
    drive_metrics = analysis.measure(drive_profile, grid, scn.min_prominence)
    probe_metrics = analysis.measure(probe_profile, grid, scn.min_prominence)

    prediction = predicted_ratio(scn, drive)
    report = None
    if drive_metrics.n_peaks >= 2 and probe_metrics.n_peaks >= 2:
        report = analysis.narrowing_report(drive_metrics, probe_metrics, prediction)
    return ScenarioResult(scn, drive, record, drive_metrics, probe_metrics,
                          input_metrics, prediction, report)


# Sweep axes ------------------------------------------------------------------


def _with_detuning(scn, value):
    return dataclasses.replace(scn, atom=dataclasses.replace(scn.atom, detuning=value))


def _with_density(scn, value):
    return dataclasses.replace(scn, atom=dataclasses.replace(scn.atom, density=value))


def _with_cell_length(scn, value):
    return dataclasses.replace(
        scn, propagation=dataclasses.replace(scn.propagation, cell_length=value))


def _with_drive_strength(scn, value):
    if not hasattr(scn.drive, "omega0"):
        raise ValueError(f"{type(scn.drive).__name__} drives have no drive strength to sweep")
    return dataclasses.replace(scn, drive=dataclasses.replace(scn.drive, omega0=value))


AXES = {
    "detuning": _with_detuning,
    "cell_length": _with_cell_length,
    "drive_strength": _with_drive_strength,
    "density": _with_density,
}


@dataclass(frozen=True)
class SweepSpec:
    """A base scenario and one axis of values (SI units, rates in rad/s).

    ``label`` and ``scale`` only affect the CSV: the written axis value is
    ``value / scale`` (e.g. ``2 pi`` to report Hz).
    """

    base: Scenario
    axis: str
    values: tuple
    out_dir: str = None
    label: str = None
    scale: float = 1.0

    def __post_init__(self):
        if self.axis not in AXES:
            raise ValueError(f"unknown sweep axis {self.axis!r}; choose from {sorted(AXES)}")
        values = tuple(float(v) for v in self.values)
        if not values:
            raise ValueError("sweep axis is empty")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ValueError("sweep axis values must be strictly increasing")
        object.__setattr__(self, "values", values)

    def scenario_at(self, value):
        return AXES[self.axis](self.base, value)


@dataclass(frozen=True)
class SweepRow:
    axis_name: str
    axis_value: float
    probe_fwhm: float
    drive_fwhm: float
    ratio_measured: float
    ratio_predicted: float
    power_fraction: float
    error: str = ""

    @property
    def ok(self):
        return not self.error

    def csv_row(self):
        return [self.axis_name, self.axis_value, self.probe_fwhm, self.drive_fwhm,
                self.ratio_measured, self.ratio_predicted, self.power_fraction, self.error]


def row_from_result(result, name, value):
    probe_w = result.probe_metrics.mean_fwhm
    drive_w = result.drive_metrics.mean_fwhm
    predicted = result.predicted_R
    return SweepRow(
        axis_name=name,
        axis_value=value,
        probe_fwhm=probe_w,
        drive_fwhm=drive_w,
        ratio_measured=drive_w / probe_w,
        ratio_predicted=float("nan") if predicted is None else predicted,
        power_fraction=min(1.0, result.record.power_fraction),
    )


def _run_row(spec, value):
    name = spec.label or spec.axis
    shown = value / spec.scale
    try:
        result = run_scenario(spec.scenario_at(value))
        return row_from_result(result, name, shown)
    except Exception as exc:  # one bad row must not sink the sweep
        logger.warning("sweep row %s=%g failed: %s", name, shown, exc)
        nan = float("nan")
        return SweepRow(name, shown, nan, nan, nan, nan, nan,
                        error=f"{type(exc).__name__}: {exc}".replace(",", ";").replace("\n", " "))


def run_sweep(spec, jobs=1):
    """Run every axis value; rows come back in axis order.

    Rows are independent, so ``jobs > 1`` farms them out to worker processes.
    Failed rows carry an error string; :class:`SweepError` is raised only
    when all rows fail.
    """
    jobs = max(1, int(jobs or os.cpu_count() or 1))
    if jobs == 1 or len(spec.values) == 1:
        rows = [_run_row(spec, v) for v in spec.values]
    else:
        with ProcessPoolExecutor(max_workers=min(jobs, len(spec.values))) as pool:
            rows = list(pool.map(_run_row, [spec] * len(spec.values), spec.values))
    if not any(r.ok for r in rows):
        raise SweepError(f"all {len(rows)} sweep rows failed; first error: {rows[0].error}")
    if spec.out_dir is not None:
        out = Path(spec.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        write_sweep_csv(rows, out / "sweep.csv")
    return rows


def write_sweep_csv(rows, path):
    write_csv(path, SWEEP_HEADER, (r.csv_row() for r in rows))
