import math
from importlib import resources

import numpy as np
import pytest

from darkstate import atomic, fields


@pytest.fixture
def toy_params():
    """eta = 100, gamma = 1, gamma_cb = 0.01, resonant (dimensionless toy units)."""
    return atomic.AtomicParams.with_eta(100.0, gamma=1.0, gamma_cb=0.01)


@pytest.fixture
def rb_params():
    return atomic.AtomicParams()


@pytest.fixture
def grid():
    return fields.make_grid(1024, 4e-3)


def config_path(name):
    return resources.files("darkstate") / "configs" / name


def fwhm_bruteforce(x, y):
    """Independent FWHM oracle: dense resampling of an isolated single peak."""
    xf = np.linspace(x[0], x[-1], 200 * len(x))
    yf = np.interp(xf, x, y)
    above = xf[yf >= yf.max() / 2]
    return above[-1] - above[0]


def loglog_slope(xs, ys):
    return float(np.polyfit(np.log(xs), np.log(ys), 1)[0])


TWO_PI = 2 * math.pi
