"""Transverse grids, probe fields and drive intensity patterns."""

import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

from ._validation import check_real_profile, check_scalar, is_power_of_two
from .exceptions import GridMismatchError, UnresolvedFringeError

DRIVE_CSV_HEADER = "x_m,omega_d_sq"


@dataclass(frozen=True)
class TransverseGrid:
    """Uniform periodic grid on ``x``, centred at zero.

    Samples sit at ``x_i = (i - n/2) * dx`` and ``kx`` follows numpy's FFT
    ordering.
    """

    n: int
    width: float

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, (int, np.integer)):
            raise TypeError(f"n must be an integer, got {self.n!r}")
        if self.n < 16 or not is_power_of_two(int(self.n)):
            raise ValueError(f"n must be a power of two >= 16, got {self.n}")
        check_scalar(self.width, "width", positive=True)

    @property
    def dx(self):
        return self.width / self.n

    @cached_property
    def x(self):
        x = (np.arange(self.n) - self.n // 2) * self.dx
        x.flags.writeable = False
        return x

    @cached_property
    def kx(self):
        kx = 2 * np.pi * np.fft.fftfreq(self.n, d=self.dx)
        kx.flags.writeable = False
        return kx


def make_grid(n, width):
    return TransverseGrid(int(n), float(width))


def _frozen(arr):
    arr = np.array(arr, copy=True)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class ComplexField:
    """Probe Rabi frequency ``Omega_p(x)`` [rad/s] sampled on a grid."""

    grid: TransverseGrid
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        if values.shape != (self.grid.n,):
            raise ValueError(f"field has shape {values.shape}, grid needs ({self.grid.n},)")
        if not np.all(np.isfinite(values)):
            raise ValueError("field contains non-finite samples")
        object.__setattr__(self, "values", _frozen(values))

    @property
    def intensity(self):
        return np.abs(self.values) ** 2

    @property
    def power(self):
        """``sum |Omega_p|^2 dx``."""
        return float(np.sum(self.intensity) * self.grid.dx)

    def with_values(self, values):
        return ComplexField(self.grid, values)


# Drive pattern descriptors ---------------------------------------------------


@dataclass(frozen=True)
class Interference:
    """Ideal two-beam fringes ``|Omega_0|^2 cos^2(pi (x - x0) / period)``."""

    omega0: float
    period: float
    x0: float = 0.0


@dataclass(frozen=True)
class ParabolicMax:
    """Drive near a maximum, ``|Omega_0|^2 max(0, 1 - ((x - x0)/L)^2)``."""

    omega0: float
    L: float
    x0: float = 0.0


@dataclass(frozen=True)
class ParabolicNull:
    """Drive near a zero, ``|Omega_0|^2 (x/L)^2``."""

    omega0: float
    L: float


@dataclass(frozen=True)
class FromFile:
    path: str


@dataclass(frozen=True, eq=False)
class DriveProfile:
    """Drive intensity ``|Omega_d(x)|^2`` [rad^2/s^2], frozen along the cell."""

    grid: TransverseGrid
    intensity: np.ndarray
    descriptor: object

    def __post_init__(self):
        intensity = check_real_profile(self.intensity, self.grid.n, "drive intensity")
        object.__setattr__(self, "intensity", _frozen(intensity))

    @property
    def peak_rabi(self):
        """``|Omega_0|`` for analytic patterns, ``sqrt(max intensity)`` otherwise."""
        omega0 = getattr(self.descriptor, "omega0", None)
        if omega0 is not None:
            return abs(omega0)
        return math.sqrt(float(np.max(self.intensity)))

    @property
    def length_scale(self):
        """Curvature length ``L`` at a drive extremum.

        For fringes ``L = period / pi``: the second derivative of
        ``cos^2(pi u / period)`` at its peak is ``-2 pi^2 / period^2``, which
        equals that of ``1 - (u/L)^2`` exactly when ``L = period / pi``.
        """
        d = self.descriptor
        if isinstance(d, Interference):
            return d.period / math.pi
        if isinstance(d, (ParabolicMax, ParabolicNull)):
            return d.L
        raise ValueError(f"no analytic length scale for {type(d).__name__} drives")


def fringe_period_to_L(period):
    return period / math.pi


def interference_drive(grid, omega0, period, x0=0.0):
    if not period > 2 * grid.dx:
        raise UnresolvedFringeError(
            f"fringe period {period} m is not resolved by dx = {grid.dx} m"
        )
    intensity = omega0**2 * np.cos(np.pi * (grid.x - x0) / period) ** 2
    return DriveProfile(grid, intensity, Interference(omega0, period, x0))


def parabolic_drive(grid, branch, omega0, L, x0=0.0):
    """Analytic drive near an extremum; ``branch`` is ``"max"`` or ``"null"``."""
    check_scalar(L, "L", positive=True)
    branch = branch.lower()
    if branch == "max":
        u = (grid.x - x0) / L
        intensity = omega0**2 * np.clip(1 - u**2, 0.0, None)
        return DriveProfile(grid, intensity, ParabolicMax(omega0, L, x0))
    if branch == "null":
        intensity = omega0**2 * (grid.x / L) ** 2
        return DriveProfile(grid, intensity, ParabolicNull(omega0, L))
    raise ValueError(f"branch must be 'max' or 'null', got {branch!r}")


def load_drive_csv(path, grid):
    """Read a two-column ``x_m,omega_d_sq`` CSV and interpolate it onto ``grid``.

    Outside the tabulated range the nearest tabulated value is used.
    """
    path = Path(path)
    with path.open("r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != DRIVE_CSV_HEADER:
            raise ValueError(f"{path}: expected header {DRIVE_CSV_HEADER!r}, got {header!r}")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    if data.shape[1] != 2 or data.shape[0] < 2:
        raise ValueError(f"{path}: need at least two rows of two columns")
    xs, ws = data[:, 0], data[:, 1]
    if np.any(np.diff(xs) <= 0):
        raise ValueError(f"{path}: x column must be strictly increasing")
    if np.any(ws < 0) or not np.all(np.isfinite(data)):
        raise ValueError(f"{path}: intensities must be finite and nonnegative")
    intensity = np.interp(grid.x, xs, ws)
    return DriveProfile(grid, intensity, FromFile(str(path)))


def make_drive(grid, descriptor):
    """Sample any drive descriptor on ``grid``."""
    if isinstance(descriptor, Interference):
        return interference_drive(grid, descriptor.omega0, descriptor.period, descriptor.x0)
    if isinstance(descriptor, ParabolicMax):
        return parabolic_drive(grid, "max", descriptor.omega0, descriptor.L, descriptor.x0)
    if isinstance(descriptor, ParabolicNull):
        return parabolic_drive(grid, "null", descriptor.omega0, descriptor.L)
    if isinstance(descriptor, FromFile):
        return load_drive_csv(descriptor.path, grid)
    raise TypeError(f"unknown drive descriptor {descriptor!r}")


# Probe fields ----------------------------------------------------------------


def plane_probe(grid, amplitude):
    return ComplexField(grid, np.full(grid.n, amplitude, dtype=complex))


def gaussian_probe(grid, amplitude, waist, center=0.0):
    """Flat-phase Gaussian ``amplitude * exp(-(x - center)^2 / waist^2)``.

    ``waist`` is the 1/e half-width of the amplitude, so the intensity FWHM
    is ``waist * sqrt(2 ln 2)``.
    """
    check_scalar(waist, "waist", positive=True)
    values = amplitude * np.exp(-(((grid.x - center) / waist) ** 2))
    return ComplexField(grid, values.astype(complex))


def lens_phase(field, focal_length, wavelength):
    """Thin lens: multiply by ``exp(-i k x^2 / (2 f))``; ``f > 0`` converges."""
    if focal_length == 0:
        raise ValueError("focal length must be nonzero")
    if math.isinf(focal_length):
        return field
    k = 2 * math.pi / wavelength
    x = field.grid.x
    return field.with_values(field.values * np.exp(-1j * k * x**2 / (2 * focal_length)))


def check_same_grid(*items):
    grids = [item.grid for item in items]
    first = grids[0]
    for g in grids[1:]:
        if g != first:
            raise GridMismatchError(f"grid mismatch: {first} vs {g}")
    return first
