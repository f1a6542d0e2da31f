"""Probe propagation through the cell: split-step spectral and Beer-Lambert solvers.

The paraxial equation integrated here is

    dOmega_p/dz = -kappa(x) Omega_p + (diffraction),

with the medium term written through the complex coefficient from
:func:`darkstate.atomic.kappa` and diffraction handled exactly in the
spectral domain. The spectral factor is ``exp(-i kx^2 dz / (2k))``, the sign
that makes a field carrying the converging lens phase of
:func:`darkstate.fields.lens_phase` (``f > 0``) focus.
"""

import logging
import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import atomic
from ._validation import check_scalar
from .exceptions import PropagationError
from .fields import ComplexField, check_same_grid

logger = logging.getLogger(__name__)

SPLIT_STEP = "splitstep"
BEER_LAMBERT = "beerlambert"
PERIODIC = "periodic"
ABSORBING = "absorbing"

# Default step-size targets.
MAX_MEDIUM_PHASE = 0.05
MAX_DIFFRACTION_PHASE = 0.5
# Samples whose intensity transmission over the cell is below this are opaque
# and do not constrain the medium step.
OPAQUE_TRANSMISSION = 1e-12


@dataclass(frozen=True)
class PropagationConfig:
    """Cell and solver settings.

    Parameters
    ----------
    cell_length : float
        Cell length ``z_max`` [m].
    dz : float, optional
        Step length [m]. ``None`` selects it automatically (see :func:`auto_step`).
    solver : {"splitstep", "beerlambert"}
    boundary : {"periodic", "absorbing"}
    pad_fraction : float
        Fraction of the window on each side covered by the absorbing mask.
    wavenumber : float, optional
        Probe wavenumber ``k`` [rad/m]. ``None`` uses ``2 pi / lambda`` from the
        atomic parameters; ``inf`` switches diffraction off.
    """

    cell_length: float
    dz: float = None
    solver: str = SPLIT_STEP
    boundary: str = PERIODIC
    pad_fraction: float = 0.0
    wavenumber: float = None

    def __post_init__(self):
        check_scalar(self.cell_length, "cell_length", positive=True)
        if self.dz is not None:
            check_scalar(self.dz, "dz", positive=True)
            if self.dz > self.cell_length:
                raise ValueError(f"dz={self.dz} exceeds the cell length {self.cell_length}")
        if self.solver not in (SPLIT_STEP, BEER_LAMBERT):
            raise ValueError(f"unknown solver {self.solver!r}")
        if self.boundary not in (PERIODIC, ABSORBING):
            raise ValueError(f"unknown boundary {self.boundary!r}")
        if not 0.0 <= self.pad_fraction <= 0.45:
            raise ValueError(f"pad_fraction must lie in [0, 0.45], got {self.pad_fraction}")
        if self.wavenumber is not None and not self.wavenumber > 0:
            raise ValueError("wavenumber must be positive (or inf)")

    def k(self, p):
        return self.wavenumber if self.wavenumber is not None else p.wavenumber


@dataclass(frozen=True, eq=False)
class PropagationRecord:
    input: ComplexField
    output: ComplexField
    z: np.ndarray
    power_trace: np.ndarray
    snapshots: tuple = ()

    @property
    def power_fraction(self):
        p_in = self.input.power
        return self.output.power / p_in if p_in > 0 else float("nan")


def diffraction_phase(grid, k, dz):
    """Spectral multiplier advancing free-space propagation by ``dz``."""
    if math.isinf(k):
        return np.ones(grid.n, dtype=complex)
    return np.exp(-1j * grid.kx**2 * dz / (2 * k))


def free_space(field, distance, k):
    """Exact paraxial free-space propagation over ``distance`` (may be negative)."""
    spectrum = np.fft.fft(field.values) * diffraction_phase(field.grid, k, distance)
    return field.with_values(np.fft.ifft(spectrum))


def absorbing_mask(grid, pad_fraction):
    """Cumulative edge mask ``exp(-40 s^4)``, ``s`` the normalised depth into the pad."""
    if pad_fraction == 0:
        return np.ones(grid.n)
    pad = pad_fraction * grid.width
    inner = grid.width / 2 - pad
    s = np.clip((np.abs(grid.x) - inner) / pad, 0.0, 1.0)
    return np.exp(-40.0 * s**4)


def auto_step(grid, kappa_values, k, z):
    """Step length meeting both default phase targets.

    ``|kappa| dz <= 0.05`` over samples that are not opaque across the whole
    cell, and ``max(kx^2) dz / (2k) <= 0.5`` rad.
    """
    dz = z
    if not math.isinf(k):
        dz = min(dz, MAX_DIFFRACTION_PHASE * 2 * k / float(np.max(grid.kx**2)))
    opaque = 2 * kappa_values.real * z > -math.log(OPAQUE_TRANSMISSION)
    live = np.abs(kappa_values[~opaque])
    if live.size and live.max() > 0:
        dz = min(dz, MAX_MEDIUM_PHASE / float(live.max()))
    return dz


def step_count(cfg, dz):
    return max(1, int(round(cfg.cell_length / dz)))


def _check_weak_probe(field, drive):
    max_probe = float(np.max(np.abs(field.values)))
    max_drive = math.sqrt(float(np.max(drive.intensity)))
    if max_probe > 0.1 * max_drive:
        warnings.warn(
            f"probe is not weak: max|Omega_p| = {max_probe:.3g} exceeds 0.1 max|Omega_d| "
            f"= {0.1 * max_drive:.3g}; the linear medium response may be inaccurate",
            RuntimeWarning,
            stacklevel=3,
        )


class _SplitStepper:
    """Precomputed factors for repeated symmetric steps."""

    def __init__(self, grid, kap, k, dz, mask_total, cell_length):
        # no diffraction: skip the transforms so the step stays pointwise
        self.half = None if math.isinf(k) else diffraction_phase(grid, k, dz / 2)
        self.medium = np.exp(-kap * dz)
        self.mask = None
        if mask_total is not None:
            self.mask = mask_total ** (dz / cell_length)

    def _diffract(self, values):
        if self.half is None:
            return values
        return np.fft.ifft(np.fft.fft(values) * self.half)

    def __call__(self, values):
        values = self._diffract(values)
        values = values * self.medium
        values = self._diffract(values)
        if self.mask is not None:
            values = values * self.mask
        return values


def _medium_kappa(drive, p):
    return np.asarray(atomic.kappa(p, drive.intensity), dtype=complex)


def _mask_for(cfg, grid):
    if cfg.boundary == ABSORBING and cfg.pad_fraction > 0:
        return absorbing_mask(grid, cfg.pad_fraction)
    return None


def _nan_guard(values, step):
    bad = ~np.isfinite(values)
    if np.any(bad):
        idx = int(np.argmax(bad))
        raise PropagationError(
            f"non-finite probe value {values[idx]} at step {step}, sample {idx}",
            step=step, index=idx,
        )


def step_splitstep(field, drive, p, cfg, dz=None):
    """Advance ``field`` by one symmetric (Strang) step of length ``dz``.

    Half a diffraction step, the full medium factor ``exp(-kappa(x) dz)``,
    another half diffraction step, then the absorbing mask if configured.
    ``dz`` defaults to ``cfg.dz``.
    """
    grid = check_same_grid(field, drive)
    dz = cfg.dz if dz is None else dz
    if dz is None:
        raise ValueError("a step length is required (cfg.dz or dz)")
    stepper = _SplitStepper(grid, _medium_kappa(drive, p), cfg.k(p), dz,
                            _mask_for(cfg, grid), cfg.cell_length)
    values = stepper(field.values)
    _nan_guard(values, 1)
    return field.with_values(values)


def propagate(field, drive, p, cfg, snapshot_every=None):
    """Propagate the probe through the whole cell.

    Returns a :class:`PropagationRecord`. With the Beer-Lambert solver the
    output is the closed form ``input * exp(-kappa(x) z_max)`` and diffraction
    is ignored.
    """
    grid = check_same_grid(field, drive)
    _check_weak_probe(field, drive)
    kap = _medium_kappa(drive, p)
    z_max = cfg.cell_length

    if cfg.solver == BEER_LAMBERT:
        values = field.values * np.exp(-kap * z_max)
        _nan_guard(values, 1)
        out = field.with_values(values)
        return PropagationRecord(
            input=field, output=out, z=np.array([0.0, z_max]),
            power_trace=np.array([field.power, out.power]),
        )

    k = cfg.k(p)
    dz = cfg.dz if cfg.dz is not None else auto_step(grid, kap, k, z_max)
    n_steps = step_count(cfg, dz)
    dz = z_max / n_steps
    logger.debug("split-step: %d steps of %.3e m", n_steps, dz)
    stepper = _SplitStepper(grid, kap, k, dz, _mask_for(cfg, grid), z_max)

    values = field.values
    trace = np.empty(n_steps + 1)
    trace[0] = field.power
    snapshots = []
    for step in range(1, n_steps + 1):
        values = stepper(values)
        power = float(np.sum(np.abs(values) ** 2) * grid.dx)
        if not math.isfinite(power):
            _nan_guard(values, step)
            raise PropagationError(f"probe power overflowed at step {step}", step=step)
        trace[step] = power
        if snapshot_every and step % snapshot_every == 0:
            snapshots.append((step, field.with_values(values)))

    return PropagationRecord(
        input=field, output=field.with_values(values),
        z=np.linspace(0.0, z_max, n_steps + 1), power_trace=trace,
        snapshots=tuple(snapshots),
    )


def excited_population_map(field, drive, p):
    """Where the medium absorbs: ``Re kappa(x) |Omega_p(x)|^2`` (arbitrary units)."""
    check_same_grid(field, drive)
    return _medium_kappa(drive, p).real * field.intensity


def write_snapshot_csv(path, field):
    """Write ``x_m,re,im,intensity`` for one snapshot."""
    from .io import write_csv

    v = field.values
    write_csv(path, ["x_m", "re", "im", "intensity"],
              zip(field.grid.x, v.real, v.imag, np.abs(v) ** 2))
