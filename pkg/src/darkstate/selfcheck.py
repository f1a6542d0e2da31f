"""Built-in oracle checks run by ``darkstate selfcheck``."""

import math
import random

import numpy as np

from . import analysis, atomic, fields
from .propagation import BEER_LAMBERT, PropagationConfig, propagate

# Residual of the near-maximum expansion may exceed the quartic fit from the
# two smallest samples by this factor (sixth-order terms, u <= 0.1).
QUARTIC_SLACK = 1.05


def check_free_space_gaussian():
    """Gaussian after one Rayleigh range has 1/e half-width ``sqrt(2) w0`` (0.5%)."""
    wavelength, w0 = 795e-9, 50e-6
    k = 2 * math.pi / wavelength
    z_r = k * w0**2 / 2
    grid = fields.make_grid(4096, 2e-3)
    p = atomic.AtomicParams(wavelength=wavelength, density=0.0)
    drive = fields.DriveProfile(grid, np.full(grid.n, 1e14), None)
    rec = propagate(fields.gaussian_probe(grid, 1.0, w0), drive, p,
                    PropagationConfig(z_r, dz=z_r / 200))
    ratio = analysis.amplitude_half_width(grid, rec.output.values) / w0
    return abs(ratio / math.sqrt(2) - 1) <= 5e-3, f"w(zR)/w0 = {ratio:.6f}"


def check_beer_lambert():
    """Uniform medium with ``kappa z = 1`` transmits ``e^-2`` of the power."""
    grid = fields.make_grid(256, 1e-3)
    p = atomic.AtomicParams.with_eta(100.0, gamma=1.0, gamma_cb=0.01)
    drive = fields.DriveProfile(grid, np.ones(grid.n), None)
    z = 1 / atomic.kappa(p, 1.0).real
    probe = fields.plane_probe(grid, 1e-3)
    worst = 0.0
    for solver, tol in ((BEER_LAMBERT, 1e-9), ("splitstep", 1e-4)):
        frac = propagate(probe, drive, p, PropagationConfig(z, dz=z / 50, solver=solver)).power_fraction
        err = abs(frac - math.exp(-2))
        if err > tol:
            return False, f"{solver}: power fraction {frac:.12f}"
        worst = max(worst, err)
    return True, f"max |fraction - e^-2| = {worst:.2e}"


def check_expansion(u=0.05):
    """Near-maximum expansion vs the strong-drive absorption: residual is quartic."""
    p = atomic.AtomicParams.with_eta(100.0, gamma=1.0, gamma_cb=0.01, detuning=0.5)
    w0 = 400.0
    samples = np.array([0.0125, 0.025, u])

    def residual(s):
        exact = atomic.kappa_strong_drive(p, w0 * (1 - s**2))
        return abs(atomic.kappa_expanded(p, w0, s) - exact)

    c = max(residual(s) / s**4 for s in samples[:2])
    r = residual(samples[-1])
    bound = QUARTIC_SLACK * c * samples[-1] ** 4
    return r <= bound, f"residual {r:.3e} vs bound {bound:.3e} at x/L={u}"


def check_width_ratio_identity(trials=200, seed=1):
    """``L / dx_high`` equals ``R`` at zero detuning (1e-12 relative)."""
    rng = random.Random(seed)
    worst = 0.0
    for _ in range(trials):
        p = atomic.AtomicParams.with_eta(10 ** rng.uniform(0, 14), gamma=10 ** rng.uniform(6, 8),
                                         gamma_cb=10 ** rng.uniform(1, 5))
        omega, L, z = 10 ** rng.uniform(5, 8), 10 ** rng.uniform(-5, -2), 10 ** rng.uniform(-3, 0)
        lhs = L / analysis.predicted_width_high_od(p, omega, L, z)
        rhs = analysis.ratio_R(p, omega, z)
        worst = max(worst, abs(lhs / rhs - 1))
    return worst <= 1e-12, f"max relative mismatch {worst:.1e}"


def check_dark_state(trials=1000, seed=2):
    """Dark state is normalised and decoupled (1e-12)."""
    rng = random.Random(seed)
    worst = 0.0
    for _ in range(trials):
        op, od = rng.uniform(-1e8, 1e8), rng.uniform(-1e8, 1e8)
        d = atomic.dark_state(op, od)
        scale = math.hypot(op, od)
        worst = max(worst, abs(d.amp_c**2 + d.amp_b**2 - 1),
                    abs(atomic.dark_coupling(d, op, od)) / scale)
    return worst <= 1e-12, f"max deviation {worst:.1e}"


CHECKS = (
    ("free-space Gaussian diffraction", check_free_space_gaussian),
    ("Beer-Lambert limit", check_beer_lambert),
    ("near-maximum absorption expansion", check_expansion),
    ("high-density width / narrowing ratio identity", check_width_ratio_identity),
    ("dark-state normalisation", check_dark_state),
)


def run_all(out=print):
    """Run every check, print one line each, return True iff all pass."""
    ok = True
    for name, check in CHECKS:
        try:
            passed, detail = check()
        except Exception as exc:
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        ok &= bool(passed)
        out(f"[{'PASS' if passed else 'FAIL'}] {name}: {detail}")
    return ok
