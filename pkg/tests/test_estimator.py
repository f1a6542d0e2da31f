import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline
from sklearn.preprocessing import FunctionTransformer

from darkstate import fields
from darkstate.estimator import BeamProfileMeter, DarkStateImager
from darkstate.propagation import BEER_LAMBERT, PropagationConfig, propagate

from .conftest import TWO_PI

WIDTH = 1.2e-2


@pytest.fixture(scope="module")
def setup():
    g = fields.make_grid(1024, WIDTH)
    drive = fields.interference_drive(g, TWO_PI * 3e6, 8e-4, x0=4e-4)
    probe = fields.gaussian_probe(g, TWO_PI * 1e4, 7e-4)
    return g, drive, probe


def test_params_round_trip():
    est = DarkStateImager(density=2e17, solver=BEER_LAMBERT)
    params = est.get_params()
    assert params["density"] == 2e17 and params["solver"] == BEER_LAMBERT
    twin = clone(est)
    assert twin.get_params() == params
    assert params["drive_intensity"] is None
    est.set_params(detuning=5.0)
    assert est.detuning == 5.0


def test_not_fitted():
    with pytest.raises(NotFittedError):
        DarkStateImager().transform(np.ones((1, 16), complex))


def imager(drive, **kw):
    return DarkStateImager(drive_intensity=drive.intensity, width=WIDTH, solver=BEER_LAMBERT, **kw)


def test_transform_matches_propagate(setup):
    g, drive, probe = setup
    est = imager(drive).fit(probe.values[np.newaxis, :])
    assert est.n_features_in_ == g.n
    out = est.transform(np.vstack([probe.values, 0.5 * probe.values]))
    ref = propagate(probe, drive, est.params_, PropagationConfig(0.04, solver=BEER_LAMBERT))
    assert np.array_equal(out[0], ref.output.values)
    assert np.allclose(out[1], 0.5 * ref.output.values, rtol=1e-15, atol=0)
    frac = est.transmission(probe.values[np.newaxis, :])
    assert frac[0] == pytest.approx(ref.power_fraction, rel=1e-12)


def test_transform_checks_width(setup):
    _, drive, probe = setup
    est = imager(drive).fit(probe.values[np.newaxis, :])
    with pytest.raises(ValueError):
        est.transform(np.ones((1, 512), complex))
    with pytest.raises(ValueError):
        imager(drive).fit(np.ones((1, 512), complex))
    with pytest.raises(ValueError):
        DarkStateImager().fit(probe.values[np.newaxis, :])


def test_pipeline_reports_narrowing(setup):
    g, drive, probe = setup
    pipe = make_pipeline(
        imager(drive),
        FunctionTransformer(lambda f: np.abs(f) ** 2),
        BeamProfileMeter(width=WIDTH),
    )
    (n_peaks, mean_fwhm, spacing, finesse, power), = pipe.fit_transform(
        probe.values[np.newaxis, :])
    drive_row = BeamProfileMeter(width=WIDTH).fit_transform(drive.intensity[np.newaxis, :])[0]
    assert n_peaks == 2
    assert mean_fwhm < drive_row[1]
    assert finesse > drive_row[3]


def test_profile_meter_features():
    g = fields.make_grid(256, 1.0)
    meter = BeamProfileMeter(width=1.0).fit(np.zeros((1, 256)))
    flat = meter.transform(np.zeros(256))
    assert flat[0, 0] == 0 and np.isnan(flat[0, 1])
    single = meter.transform(np.exp(-(g.x / 0.05) ** 2))
    assert single[0, 0] == 1 and np.isnan(single[0, 3])
    assert list(meter.get_feature_names_out()) == list(BeamProfileMeter.feature_names)
