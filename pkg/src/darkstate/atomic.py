"""Steady-state weak-probe response of a driven three-level Lambda medium.

Levels: ``|a>`` excited, ``|b>`` and ``|c>`` ground. The drive couples
``|a>-|b>`` (assumed resonant), the probe couples ``|a>-|c>`` with detuning
``omega``. All rates are angular frequencies in rad/s, lengths in metres.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ._validation import check_scalar
from .exceptions import DegenerateMediumError, UndefinedStateError

#: Rb-87 D1 line vacuum wavelength [m] (Steck, "Rubidium 87 D Line Data").
RB87_D1_WAVELENGTH = 794.978851e-9
#: Rb-87 D1 natural linewidth, 2*pi * 5.746 MHz [rad/s].
RB87_D1_GAMMA_R = 2 * math.pi * 5.746e6


@dataclass(frozen=True)
class ComplexRate:
    """Relaxation rate with an imaginary detuning part, ``re + i*im``."""

    re: float
    im: float

    def __post_init__(self):
        if not self.re >= 0:
            raise ValueError(f"relaxation part must be >= 0, got {self.re}")

    def __complex__(self):
        return complex(self.re, self.im)


@dataclass(frozen=True)
class AtomicParams:
    """Medium constants for the effective three-level system.

    Parameters
    ----------
    wavelength : float
        Probe/drive wavelength [m].
    density : float
        Atomic number density [m^-3].
    gamma_r : float
        Spontaneous emission rate [rad/s].
    gamma : float, optional
        Optical coherence decay rate on ``|a>-|b>`` [rad/s]. Defaults to
        ``gamma_r / 2`` (purely radiative broadening).
    gamma_cb : float
        Ground-state coherence decay rate [rad/s].
    detuning : float
        Probe detuning ``omega_ab - nu`` [rad/s].

    Attributes
    ----------
    eta : float
        Coupling constant ``3 lambda^2 N gamma_r / (8 pi)`` [rad/(s m)].
    """

    wavelength: float = RB87_D1_WAVELENGTH
    density: float = 1e18
    gamma_r: float = RB87_D1_GAMMA_R
    gamma: float = None
    gamma_cb: float = 2 * math.pi * 1e3
    detuning: float = 0.0
    eta: float = field(init=False, repr=False)

    def __post_init__(self):
        check_scalar(self.wavelength, "wavelength", positive=True)
        check_scalar(self.density, "density", nonnegative=True)
        check_scalar(self.gamma_r, "gamma_r", positive=True)
        check_scalar(self.gamma_cb, "gamma_cb", nonnegative=True)
        check_scalar(self.detuning, "detuning")
        gamma = self.gamma
        if gamma is None:
            gamma = self.gamma_r / 2
            object.__setattr__(self, "gamma", gamma)
        check_scalar(gamma, "gamma", positive=True)
        if gamma < self.gamma_r / 2:
            raise ValueError(
                f"gamma={gamma} is below gamma_r/2={self.gamma_r / 2}; the optical "
                "coherence cannot decay slower than half the population decay"
            )
        # exact rational product, rounded once: eta is correctly rounded
        eta = (Fraction(3) * Fraction(self.wavelength) ** 2 * Fraction(self.density)
               * Fraction(self.gamma_r) / (8 * Fraction(math.pi)))
        object.__setattr__(self, "eta", float(eta))

    @classmethod
    def with_eta(cls, eta, gamma, gamma_cb, detuning=0.0, *, gamma_r=None,
                 wavelength=RB87_D1_WAVELENGTH):
        """Build parameters that realise a prescribed ``eta`` by solving for the density."""
        if gamma_r is None:
            gamma_r = min(RB87_D1_GAMMA_R, 2 * gamma)
        density = eta * 8 * math.pi / (3 * wavelength**2 * gamma_r)
        return cls(wavelength=wavelength, density=density, gamma_r=gamma_r,
                   gamma=gamma, gamma_cb=gamma_cb, detuning=detuning)

    @property
    def wavenumber(self):
        return 2 * math.pi / self.wavelength


@dataclass(frozen=True)
class DarkState:
    """Real amplitudes of the dark superposition on ``|c>`` and ``|b>``."""

    amp_c: float
    amp_b: float


def complex_rates(p):
    """Return ``(Gamma_ab, Gamma_cb)`` as :class:`ComplexRate` values."""
    return ComplexRate(p.gamma, p.detuning), ComplexRate(p.gamma_cb, p.detuning)


def kappa(p, drive_intensity):
    """Complex amplitude attenuation coefficient of the probe [1/m].

    ``Re`` is the field absorption per unit length, ``Im`` the phase
    accumulated per unit length. Vectorised over ``drive_intensity``
    (``|Omega_d|^2`` in rad^2/s^2).

    Raises
    ------
    DegenerateMediumError
        If ``gamma_cb == 0``, ``detuning == 0`` and some drive intensity is 0.
    """
    w = np.asarray(drive_intensity, dtype=float)
    if np.any(w < 0):
        raise ValueError("drive intensity must be nonnegative")
    g_ab, g_cb = (complex(r) for r in complex_rates(p))
    if g_cb == 0 and np.any(w == 0):
        raise DegenerateMediumError(
            "gamma_cb = 0, detuning = 0 and zero drive: the response denominator vanishes"
        )
    out = p.eta * g_cb / (g_ab * g_cb + w)
    return out if out.ndim else complex(out)


def kappa_expanded(p, omega0_sq, x_over_L):
    """Quadratic expansion of the absorption near a drive maximum.

    Valid for a drive ``|Omega_0|^2 (1 - (x/L)^2)`` with ``|Omega_0|^2`` large
    compared with ``gamma * gamma_cb`` and ``omega^2``.
    """
    if not omega0_sq > 0:
        raise ValueError(f"omega0_sq must be > 0, got {omega0_sq}")
    u2 = np.square(np.asarray(x_over_L, dtype=float))
    a = p.gamma_cb / omega0_sq
    b = p.gamma * p.detuning**2 / omega0_sq**2
    out = p.eta * (a + b + (a + 2 * b) * u2)
    return out if out.ndim else float(out)


def kappa_strong_drive(p, drive_intensity):
    """Leading strong-drive asymptote of ``Re kappa``.

    ``eta * (gamma_cb / W + gamma * omega^2 / W^2)`` with ``W = |Omega_d|^2``;
    this is what :func:`kappa_expanded` approximates to second order in ``x/L``.
    """
    w = np.asarray(drive_intensity, dtype=float)
    if np.any(w <= 0):
        raise ValueError("strong-drive asymptote needs a strictly positive drive")
    out = p.eta * (p.gamma_cb / w + p.gamma * p.detuning**2 / w**2)
    return out if out.ndim else float(out)


def dark_state(omega_p, omega_d):
    """Dark superposition ``(Omega_p |c> - Omega_d |b>) / sqrt(Omega_p^2 + Omega_d^2)``."""
    norm = math.hypot(omega_p, omega_d)
    if norm == 0:
        raise UndefinedStateError("dark state undefined when both Rabi frequencies vanish")
    return DarkState(amp_c=omega_p / norm, amp_b=-omega_d / norm)


def dark_coupling(state, omega_p, omega_d):
    """Overlap of ``state`` with the coupling row it is dark to.

    The superposition returned by :func:`dark_state` is annihilated by
    ``Omega_d <c| + Omega_p <b|``, so this is zero for it and nonzero for the
    orthogonal bright state.
    """
    return omega_d * state.amp_c + omega_p * state.amp_b
