"""scikit-learn compatible wrappers.

:class:`DarkStateImager` holds a drive intensity pattern as a parameter and
transforms batches of probe fields into transmitted fields, so it drops into
a :class:`sklearn.pipeline.Pipeline`. :class:`BeamProfileMeter` turns
intensity rows into peak-statistics features.
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import analysis, atomic, fields
from ._validation import check_field_matrix, check_real_profile
from .exceptions import NoPeakError
from .propagation import PropagationConfig, propagate


class DarkStateImager(TransformerMixin, BaseEstimator):
    """Imprint a drive pattern onto probe fields through a Lambda medium.

    Parameters
    ----------
    drive_intensity : array-like of shape (n,)
        Drive pattern ``|Omega_d(x)|^2`` [rad^2/s^2]; ``n`` must be a power
        of two and sets the number of transverse samples.
    width : float
        Physical extent of the transverse window [m].
    cell_length : float
        Cell length [m].
    wavelength, density, gamma_r, gamma, gamma_cb, detuning
        Medium constants, see :class:`darkstate.atomic.AtomicParams`.
    solver : {"splitstep", "beerlambert"}
    dz : float or None
        Split-step length; ``None`` picks it automatically.
    boundary : {"periodic", "absorbing"}
    pad_fraction : float

    Attributes
    ----------
    grid_ : TransverseGrid
    drive_ : DriveProfile
    params_ : AtomicParams
    kappa_ : ndarray of complex
        Medium coefficient on the grid [1/m].
    n_features_in_ : int
    """

    def __init__(self, drive_intensity=None, width=8e-3, cell_length=0.04, wavelength=atomic.RB87_D1_WAVELENGTH,
                 density=1e18, gamma_r=atomic.RB87_D1_GAMMA_R, gamma=None,
                 gamma_cb=2 * np.pi * 1e3, detuning=0.0, solver="splitstep", dz=None,
                 boundary="periodic", pad_fraction=0.0):
        self.drive_intensity = drive_intensity
        self.width = width
        self.cell_length = cell_length
        self.wavelength = wavelength
        self.density = density
        self.gamma_r = gamma_r
        self.gamma = gamma
        self.gamma_cb = gamma_cb
        self.detuning = detuning
        self.solver = solver
        self.dz = dz
        self.boundary = boundary
        self.pad_fraction = pad_fraction

    def fit(self, X, y=None):
        """Validate the medium and the probe rows ``X`` (complex, shape (m, n))."""
        if self.drive_intensity is None:
            raise ValueError("drive_intensity must be set before fitting")
        drive = check_real_profile(np.asarray(self.drive_intensity, dtype=float),
                                   name="drive intensity")
        check_field_matrix(X, drive.shape[0])
        self.grid_ = fields.make_grid(drive.shape[0], self.width)
        self.drive_ = fields.DriveProfile(self.grid_, drive, None)
        self.params_ = atomic.AtomicParams(
            wavelength=self.wavelength, density=self.density, gamma_r=self.gamma_r,
            gamma=self.gamma, gamma_cb=self.gamma_cb, detuning=self.detuning,
        )
        self.config_ = PropagationConfig(
            cell_length=self.cell_length, dz=self.dz, solver=self.solver,
            boundary=self.boundary, pad_fraction=self.pad_fraction,
        )
        self.kappa_ = np.asarray(atomic.kappa(self.params_, drive), dtype=complex)
        self.n_features_in_ = drive.shape[0]
        return self

    def transform(self, X):
        """Propagate each row of ``X`` (complex probe fields) through the cell."""
        check_is_fitted(self, "kappa_")
        X = check_field_matrix(X, self.n_features_in_)
        out = np.empty_like(X)
        for i, row in enumerate(X):
            field = fields.ComplexField(self.grid_, row)
            out[i] = propagate(field, self.drive_, self.params_, self.config_).output.values
        return out

    def transmission(self, X):
        """Transmitted power fraction of each probe row."""
        X = check_field_matrix(X, getattr(self, "n_features_in_", None))
        out = self.transform(X)
        return np.sum(np.abs(out) ** 2, axis=1) / np.sum(np.abs(X) ** 2, axis=1)


class BeamProfileMeter(TransformerMixin, BaseEstimator):
    """Map intensity rows to ``[n_peaks, mean_fwhm, spacing, finesse, total_power]``.

    Undefined entries (spacing and finesse with fewer than two peaks, all
    widths with no peak) are NaN.
    """

    feature_names = ("n_peaks", "mean_fwhm", "peak_spacing", "finesse", "total_power")

    def __init__(self, drive_intensity=None, width=8e-3, min_prominence=analysis.DEFAULT_PROMINENCE):
        self.width = width
        self.min_prominence = min_prominence

    def fit(self, X, y=None):
        X = np.asarray(X, dtype=float)
        if X.ndim != 2:
            raise ValueError(f"expected a 2-D array of intensity rows, got shape {X.shape}")
        self.grid_ = fields.make_grid(X.shape[1], self.width)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "grid_")
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X[np.newaxis, :]
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} samples per row, got {X.shape[1]}")
        nan = np.nan
        rows = []
        for row in X:
            try:
                m = analysis.measure(row, self.grid_, self.min_prominence)
            except NoPeakError:
                rows.append([0, nan, nan, nan, float(np.sum(row) * self.grid_.dx)])
                continue
            rows.append([
                m.n_peaks, m.mean_fwhm,
                nan if m.peak_spacing is None else m.peak_spacing,
                nan if m.finesse is None else m.finesse,
                m.total_power,
            ])
        return np.asarray(rows, dtype=float)

    def get_feature_names_out(self, input_features=None):
        return np.asarray(self.feature_names, dtype=object)
