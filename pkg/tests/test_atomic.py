import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from darkstate import atomic
from darkstate.atomic import AtomicParams, ComplexRate
from darkstate.exceptions import DegenerateMediumError, UndefinedStateError

TWO_PI = 2 * math.pi


def toy(gamma=1.0, gamma_cb=0.01, detuning=0.0, eta=100.0):
    return AtomicParams.with_eta(eta, gamma=gamma, gamma_cb=gamma_cb, detuning=detuning)


class TestAtomicParams:
    @pytest.mark.parametrize("lam,n,gr", [
        (794.978851e-9, 1e18, TWO_PI * 5.746e6),
        (780.241e-9, 3.3e16, 3.8e7),
        (1e-6, 1.0, 1.0),
    ])
    def test_eta_within_one_ulp(self, lam, n, gr):
        p = AtomicParams(wavelength=lam, density=n, gamma_r=gr)
        exact = Fraction(3) * Fraction(lam) ** 2 * Fraction(n) * Fraction(gr) / (8 * Fraction(math.pi))
        assert abs(Fraction(p.eta) - exact) <= Fraction(np.spacing(p.eta))

    def test_gamma_defaults_to_half_radiative_rate(self):
        p = AtomicParams(gamma_r=10.0)
        assert p.gamma == 5.0

    @pytest.mark.parametrize("kwargs", [
        {"wavelength": 0.0}, {"density": -1.0}, {"gamma_r": 0.0},
        {"gamma_cb": -1e-3}, {"gamma_r": 10.0, "gamma": 4.9}, {"gamma": -1.0},
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            AtomicParams(**kwargs)

    def test_with_eta_realises_eta(self):
        p = toy(eta=123.0, gamma=2.0)
        assert p.eta == pytest.approx(123.0, rel=1e-14)
        assert p.gamma == 2.0

    def test_frozen(self):
        p = AtomicParams()
        with pytest.raises(AttributeError):
            p.density = 0.0


class TestComplexRates:
    def test_zero_detuning(self):
        g_ab, g_cb = atomic.complex_rates(toy(gamma=1, gamma_cb=0.01))
        assert (g_ab.re, g_ab.im, g_cb.re, g_cb.im) == (1, 0, 0.01, 0)

    def test_direct_substitution(self):
        g_ab, g_cb = atomic.complex_rates(toy(gamma=1, gamma_cb=0, detuning=2))
        assert complex(g_ab) == 1 + 2j and complex(g_cb) == 2j

    def test_rubidium_scale(self):
        p = AtomicParams(gamma=TWO_PI * 3e6, gamma_cb=TWO_PI * 1e3, detuning=TWO_PI * 1e6)
        g_ab, g_cb = atomic.complex_rates(p)
        # hand arithmetic: 2 pi * 3e6 = 1.885e7, 2 pi * 1e6 = 6.283e6, 2 pi * 1e3 = 6.283e3
        assert g_ab.re == pytest.approx(1.885e7, rel=1e-3)
        assert g_ab.im == pytest.approx(6.283e6, rel=1e-3)
        assert g_cb.re == pytest.approx(6.283e3, rel=1e-3)
        assert g_cb.im == pytest.approx(6.283e6, rel=1e-3)

    def test_negative_relaxation_rejected(self):
        with pytest.raises(ValueError):
            ComplexRate(-1.0, 0.0)


class TestKappa:
    def test_perfect_dark_state_transparency(self):
        p = toy(gamma_cb=0.0)
        assert atomic.kappa(p, 3.0) == 0

    def test_zero_drive_is_two_level_absorption(self):
        p = toy(gamma=2.5)
        assert atomic.kappa(p, 0.0) == pytest.approx(p.eta / 2.5, rel=1e-15)

    def test_hand_value(self):
        assert atomic.kappa(toy(), 1.0) == pytest.approx(100 * 0.01 / (0.01 + 1), rel=1e-14)
        assert atomic.kappa(toy(), 1.0).real == pytest.approx(0.990099, abs=1e-6)

    def test_degenerate(self):
        with pytest.raises(DegenerateMediumError):
            atomic.kappa(toy(gamma_cb=0.0), np.array([1.0, 0.0]))

    def test_vectorised_matches_scalar(self):
        p = toy(detuning=0.3)
        w = np.linspace(0, 5, 7)
        assert np.allclose(atomic.kappa(p, w), [atomic.kappa(p, float(v)) for v in w])

    def test_negative_drive_rejected(self):
        with pytest.raises(ValueError):
            atomic.kappa(toy(), -1.0)

    @settings(max_examples=200, deadline=None)
    @given(
        gamma=st.floats(1e-3, 1e3), gamma_cb=st.floats(1e-6, 1e2),
        detuning=st.floats(-1e3, 1e3), w=st.floats(0, 1e8),
    )
    def test_real_part_nonnegative(self, gamma, gamma_cb, detuning, w):
        assert atomic.kappa(toy(gamma, gamma_cb, detuning), w).real >= 0

    @settings(max_examples=200, deadline=None)
    @given(
        gamma=st.floats(1e-3, 1e3), gamma_cb=st.floats(1e-6, 1e2),
        w1=st.floats(0, 1e6), factor=st.floats(1.001, 1e3),
    )
    def test_transparency_monotone_in_drive(self, gamma, gamma_cb, w1, factor):
        p = toy(gamma, gamma_cb)
        assert atomic.kappa(p, w1 * factor + 1e-9).real < atomic.kappa(p, w1).real

    @pytest.mark.parametrize("detuning", [0.0, 0.05, 3.0])
    def test_eit_limits(self, detuning):
        p = toy(detuning=detuning)
        g_ab, g_cb = (complex(r) for r in atomic.complex_rates(p))
        crossover = abs(g_ab * g_cb)
        # strong drive: kappa -> eta Gamma_cb / W; weak: eta / Gamma_ab
        for scale, tol in ((1e6, 1.0001e-6), (1e10, 1.0001e-10)):
            w = scale * crossover
            assert abs(atomic.kappa(p, w) * w / (p.eta * g_cb) - 1) <= tol
            w = crossover / scale
            assert abs(atomic.kappa(p, w) / (p.eta * g_cb / (g_ab * g_cb)) - 1) <= tol


class TestExpansion:
    def test_constant_term(self):
        p = toy()
        assert atomic.kappa_expanded(p, 4.0, 0.0) == pytest.approx(p.eta * 0.01 / 4, rel=1e-14)

    def test_hand_values(self):
        assert atomic.kappa_expanded(toy(), 4.0, 0.5) == pytest.approx(0.3125, rel=1e-12)
        p = toy(gamma_cb=0.0, detuning=1.0)
        assert atomic.kappa_expanded(p, 4.0, 0.1) == pytest.approx(6.375, rel=1e-12)

    def test_zero_drive_rejected(self):
        with pytest.raises(ValueError):
            atomic.kappa_expanded(toy(), 0.0, 0.1)

    @pytest.mark.parametrize("detuning", [0.0, 0.5, 2.0])
    def test_quartic_residual_against_strong_drive_form(self, detuning):
        p = toy(detuning=detuning)
        w0 = 400.0
        u = np.linspace(0.005, 0.1, 20)
        f = atomic.kappa_strong_drive(p, w0 * (1 - u**2))
        r = np.abs(atomic.kappa_expanded(p, w0, u) - f)
        c = max(r[0] / u[0] ** 4, r[1] / u[1] ** 4)
        assert np.all(r <= 1.05 * c * u**4)
        slope = np.polyfit(np.log(u), np.log(r), 1)[0]
        assert 3.9 < slope < 4.1

    def test_strong_drive_form_is_the_asymptote_of_kappa(self):
        # deviation of Re kappa from the strong-drive form falls like 1/W
        p = toy(detuning=0.5)
        devs = []
        for w in (1e3, 1e4, 1e5):
            exact = atomic.kappa(p, w).real
            devs.append(abs(exact / atomic.kappa_strong_drive(p, w) - 1))
        assert devs[1] / devs[0] == pytest.approx(0.1, rel=0.05)
        assert devs[2] / devs[1] == pytest.approx(0.1, rel=0.05)


class TestDarkState:
    def test_pure_b(self):
        d = atomic.dark_state(0.0, 2.0)
        assert (d.amp_c, d.amp_b) == (0.0, -1.0)

    def test_pure_c(self):
        d = atomic.dark_state(5.0, 0.0)
        assert (d.amp_c, d.amp_b) == (1.0, 0.0)

    def test_three_four_five(self):
        d = atomic.dark_state(3.0, 4.0)
        assert d.amp_c == pytest.approx(0.6, abs=1e-15)
        assert d.amp_b == pytest.approx(-0.8, abs=1e-15)

    def test_undefined(self):
        with pytest.raises(UndefinedStateError):
            atomic.dark_state(0.0, 0.0)

    @settings(max_examples=500, deadline=None)
    @given(st.floats(-1e9, 1e9), st.floats(-1e9, 1e9))
    def test_normalised_and_dark(self, op, od):
        if math.hypot(op, od) < 1e-300:
            return
        d = atomic.dark_state(op, od)
        assert abs(d.amp_c**2 + d.amp_b**2 - 1) <= 1e-12
        assert abs(atomic.dark_coupling(d, op, od)) <= 1e-12 * math.hypot(op, od)
