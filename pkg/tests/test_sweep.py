import dataclasses
import math

import numpy as np
import pytest

from darkstate import atomic, fields, sweep
from darkstate.config import RunConfig
from darkstate.exceptions import SweepError
from darkstate.propagation import BEER_LAMBERT, PropagationConfig
from darkstate.sweep import ProbeSpec, Scenario, SweepSpec, run_scenario, run_sweep

from .conftest import TWO_PI, config_path, loglog_slope


@pytest.fixture(scope="module")
def fig4():
    return RunConfig.load(config_path("fig4.cfg")).scenario()


def low_od_scenario(z=0.04):
    gamma_r = TWO_PI * 5.746e6
    atom = atomic.AtomicParams.with_eta(gamma_r / 2 / z, gamma=gamma_r / 2,
                                        gamma_cb=TWO_PI * 1e3, gamma_r=gamma_r)
    return Scenario(
        atom=atom,
        drive=fields.ParabolicNull(TWO_PI * 1e7, 1e-2),
        probe=ProbeSpec(shape="plane"),
        grid=fields.make_grid(4096, 4e-3),
        propagation=PropagationConfig(z, solver=BEER_LAMBERT),
        observable=sweep.OPTICAL_DEPTH,
    )


def test_symmetric_detuning_sweep(fig4):
    values = TWO_PI * np.linspace(-5e4, 5e4, 11)
    rows = run_sweep(SweepSpec(fig4, "detuning", values, scale=TWO_PI))
    assert all(r.ok for r in rows)
    ratio = np.array([r.ratio_measured for r in rows])
    assert np.allclose(ratio, ratio[::-1], rtol=0.02, atol=0)
    half = ratio[5:]
    assert np.all(np.diff(half) >= 0)
    assert half[-1] > half[0]
    assert rows[0].axis_value == pytest.approx(-5e4)
    predicted = np.array([r.ratio_predicted for r in rows])
    assert np.array_equal(np.argsort(predicted[5:], kind="stable"),
                          np.argsort(half, kind="stable"))


def test_rows_follow_axis_order(fig4):
    values = TWO_PI * np.array([-2e4, 0.0, 1e4, 3e4])
    rows = run_sweep(SweepSpec(fig4, "detuning", values, scale=TWO_PI), jobs=2)
    assert [r.axis_value for r in rows] == pytest.approx([-2e4, 0.0, 1e4, 3e4])


def test_single_point_equals_direct_run(fig4):
    value = TWO_PI * 2e4
    (row,) = run_sweep(SweepSpec(fig4, "detuning", [value]))
    direct = run_scenario(dataclasses.replace(
        fig4, atom=dataclasses.replace(fig4.atom, detuning=value)))
    assert row == sweep.row_from_result(direct, "detuning", value)
    assert row.probe_fwhm == direct.probe_metrics.mean_fwhm


def test_deterministic_and_worker_independent(fig4, tmp_path):
    values = TWO_PI * np.linspace(-3e4, 3e4, 5)
    outputs = []
    for name, jobs in (("a", 1), ("b", 1), ("c", 4)):
        run_sweep(SweepSpec(fig4, "detuning", values, out_dir=str(tmp_path / name),
                            label="detuning_hz", scale=TWO_PI), jobs=jobs)
        outputs.append((tmp_path / name / "sweep.csv").read_bytes())
    assert outputs[0] == outputs[1] == outputs[2]
    header = outputs[0].split(b"\n", 1)[0].decode()
    assert header == ",".join(sweep.SWEEP_HEADER)


def test_row_fields(fig4):
    (row,) = run_sweep(SweepSpec(fig4, "detuning", [0.0]))
    assert row.ok and row.error == ""
    values = row.csv_row()
    assert all(math.isfinite(v) for v in values[1:7])
    assert 0 <= row.power_fraction <= 1
    assert row.ratio_measured == pytest.approx(row.drive_fwhm / row.probe_fwhm)


@pytest.mark.filterwarnings("ignore:probe is not weak")
def test_failed_row_is_recorded(fig4):
    rows = run_sweep(SweepSpec(fig4, "drive_strength", [0.0, TWO_PI * 3e6]))
    assert not rows[0].ok and "NoPeakError" in rows[0].error
    assert "," not in rows[0].error
    assert math.isnan(rows[0].probe_fwhm)
    assert rows[1].ok


def test_all_rows_failing(fig4):
    broken = dataclasses.replace(fig4, grid=fields.make_grid(16, 1.6e-2))
    with pytest.raises(SweepError):
        run_sweep(SweepSpec(broken, "detuning", [0.0, 1.0]))


@pytest.mark.parametrize("values", [[], [1.0, 1.0], [2.0, 1.0]])
def test_axis_validation(fig4, values):
    with pytest.raises(ValueError):
        SweepSpec(fig4, "detuning", values)


def test_unknown_axis(fig4):
    with pytest.raises(ValueError):
        SweepSpec(fig4, "temperature", [1.0])


def test_drive_strength_exponent():
    values = TWO_PI * 1e7 * np.array([1.0, 1.6, 2.5, 4.0])
    rows = run_sweep(SweepSpec(low_od_scenario(), "drive_strength", values))
    widths = [r.probe_fwhm for r in rows]
    assert loglog_slope(values, widths) == pytest.approx(-1.0, abs=0.15)


def test_cell_length_exponent(fig4):
    base = dataclasses.replace(fig4, probe=ProbeSpec(shape="plane"))
    values = np.array([0.025, 0.04, 0.063, 0.1])
    rows = run_sweep(SweepSpec(base, "cell_length", values))
    widths = [r.probe_fwhm for r in rows]
    assert loglog_slope(values, widths) == pytest.approx(-0.5, abs=0.15)


def test_density_axis(fig4):
    rows = run_sweep(SweepSpec(fig4, "density", [5e17, 1e18, 2e18]))
    ratios = [r.ratio_measured for r in rows]
    assert ratios == sorted(ratios)
    fractions = [r.power_fraction for r in rows]
    assert fractions == sorted(fractions, reverse=True)


def test_focused_probe_sits_at_cell_centre():
    g = fields.make_grid(4096, 8e-3)
    spec = ProbeSpec(shape="focused", amplitude=1.0, waist=0.7e-3, lens_focal=0.75)
    near = sweep.prepare_probe(g, spec, 795e-9, 0.04)
    explicit = sweep.prepare_probe(g, dataclasses.replace(spec, lens_distance=0.73), 795e-9, 0.04)
    assert np.array_equal(near.values, explicit.values)
    with pytest.raises(ValueError):
        ProbeSpec(shape="focused")
