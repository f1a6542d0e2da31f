"""Beam-profile measurements and the analytic width / narrowing predictions."""

import math
from dataclasses import dataclass, fields

import numpy as np
from scipy.signal import peak_prominences

from . import atomic
from ._validation import check_real_profile
from .exceptions import NoPeakError, UnresolvedPeakError

DEFAULT_PROMINENCE = 0.2
# Peaks with fewer samples than this between them are merged.
MIN_PEAK_GAP = 2


@dataclass(frozen=True)
class BeamMetrics:
    """Peak statistics of one intensity profile.

    ``valley_minimum`` is the lowest sample between the outermost peaks
    divided by the tallest peak height (``None`` with fewer than two peaks),
    so everything except ``total_power`` is invariant under rescaling.
    """

    peak_positions: tuple
    peak_fwhm: tuple
    peak_spacing: float
    finesse: float
    total_power: float
    valley_minimum: float

    @property
    def n_peaks(self):
        return len(self.peak_positions)

    @property
    def mean_fwhm(self):
        return float(np.mean(self.peak_fwhm))


def _local_maxima(v):
    """Interior local maxima; a flat top reports its leftmost sample."""
    peaks = []
    n = len(v)
    i = 1
    while i < n - 1:
        if v[i] > v[i - 1]:
            j = i
            while j + 1 < n and v[j + 1] == v[i]:
                j += 1
            if j + 1 < n and v[j + 1] < v[i]:
                peaks.append(i)
            i = j + 1
        else:
            i += 1
    return np.asarray(peaks, dtype=int)


def _merge_close(peaks, v):
    kept = []
    for p in peaks:
        if kept and p - kept[-1] <= MIN_PEAK_GAP:
            if v[p] > v[kept[-1]]:
                kept[-1] = p
            continue
        kept.append(p)
    return np.asarray(kept, dtype=int)


def _crossing(v, peak, level, direction):
    """Fractional index where ``v`` falls below ``level`` walking away from ``peak``."""
    i = peak
    n = len(v)
    while 0 <= i + direction < n and v[i] >= level:
        i += direction
    if v[i] >= level:
        raise UnresolvedPeakError(
            f"half-maximum crossing of the peak at sample {peak} is not bracketed by the window"
        )
    inner = i - direction
    t = (level - v[i]) / (v[inner] - v[i])
    return i - direction * t


def _refine(v, p):
    left, mid, right = v[p - 1], v[p], v[p + 1]
    if left < mid > right:
        return 0.5 * (left - right) / (left - 2 * mid + right)
    return 0.0


def find_peaks(intensity, min_prominence=DEFAULT_PROMINENCE):
    """Indices and prominences of peaks passing the relative prominence filter."""
    v = np.asarray(intensity, dtype=float)
    top = float(np.max(v))
    peaks = _local_maxima(v)
    if peaks.size == 0 or top <= 0:
        return peaks, np.empty(0)
    prom = peak_prominences(v, peaks)[0]
    keep = prom >= min_prominence * top
    peaks = _merge_close(peaks[keep], v)
    return peaks, peak_prominences(v, peaks)[0] if peaks.size else np.empty(0)


def measure(intensity, grid, min_prominence=DEFAULT_PROMINENCE):
    """Locate peaks and measure their widths on a transverse grid.

    Half maximum is taken halfway between the peak and its valley floor, the
    higher of the two minima that bound the peak's prominence. Crossings are
    linearly interpolated.

    Raises
    ------
    NoPeakError
        No local maximum reaches ``min_prominence`` times the global maximum.
    UnresolvedPeakError
        A half-maximum crossing falls outside the window.
    """
    v = check_real_profile(intensity, grid.n, nonnegative=False)
    peaks, prom = find_peaks(v, min_prominence)
    if peaks.size == 0:
        raise NoPeakError(f"no peak with prominence >= {min_prominence} x global maximum")

    x0, dx = grid.x[0], grid.dx
    positions, widths = [], []
    for p, pr in zip(peaks, prom):
        level = v[p] - pr / 2
        left = _crossing(v, p, level, -1)
        right = _crossing(v, p, level, +1)
        widths.append(float((right - left) * dx))
        positions.append(float(x0 + (p + _refine(v, p)) * dx))

    spacing = finesse = valley = None
    if len(peaks) >= 2:
        spacing = float(np.mean(np.diff(positions)))
        finesse = spacing / float(np.mean(widths))
        valley = float(np.min(v[peaks[0]:peaks[-1] + 1]) / np.max(v[peaks]))
    return BeamMetrics(
        peak_positions=tuple(positions),
        peak_fwhm=tuple(widths),
        peak_spacing=spacing,
        finesse=finesse,
        total_power=float(np.sum(v) * dx),
        valley_minimum=valley,
    )


def amplitude_half_width(grid, values, level=1 / math.e):
    """Half the distance between the two points where ``|values|`` drops to ``level * max``."""
    a = np.abs(np.asarray(values))
    p = int(np.argmax(a))
    lev = level * a[p]
    left = _crossing(a, p, lev, -1)
    right = _crossing(a, p, lev, +1)
    return float((right - left) * grid.dx / 2)


def optical_depth(probe_in, probe_out):
    """Field optical depth ``-ln |out/in|`` per sample.

    Samples where the output underflowed to zero are capped at the depth of
    the smallest positive double (about 745).
    """
    tiny = np.finfo(float).tiny
    a_in = np.maximum(np.abs(probe_in.values), tiny)
    a_out = np.maximum(np.abs(probe_out.values), tiny)
    return np.log(a_in) - np.log(a_out)


# Analytic predictions --------------------------------------------------------


def predicted_width_low_od(p, omega, L):
    """Excited-region width ``L sqrt(|Gamma_ab Gamma_cb|) / |Omega|``."""
    if omega == 0:
        raise ZeroDivisionError("low-density width needs a nonzero drive")
    g_ab, g_cb = (complex(r) for r in atomic.complex_rates(p))
    return L * math.sqrt(abs(g_ab * g_cb)) / abs(omega)


def predicted_width_high_od(p, omega, L, z):
    """Transmitted-peak width ``L |Omega| / sqrt(eta gamma_cb z)``."""
    denom = p.eta * p.gamma_cb * z
    if not denom > 0:
        raise ZeroDivisionError("high-density width needs eta, gamma_cb and z all > 0")
    return L * abs(omega) / math.sqrt(denom)


def ratio_R(p, omega, z):
    """Narrowing ratio ``L / dx = sqrt(eta z (gamma_cb/|W| + 2 gamma w^2 / |W|^2))``.

    ``W = |Omega|^2`` and ``w`` is the probe detuning.
    """
    if omega == 0:
        raise ZeroDivisionError("narrowing ratio needs a nonzero drive")
    if not (p.eta > 0 and z > 0):
        raise ValueError("narrowing ratio needs eta > 0 and z > 0")
    w = abs(omega) ** 2
    return math.sqrt(p.eta * z * (p.gamma_cb / w + 2 * p.gamma * p.detuning**2 / w**2))


@dataclass(frozen=True)
class NarrowingReport:
    drive_fwhm: float
    probe_fwhm: float
    fwhm_ratio: float
    drive_finesse: float
    probe_finesse: float
    finesse_ratio: float
    predicted_R: float = None

    @classmethod
    def csv_header(cls):
        return [f.name for f in fields(cls)]

    def csv_row(self):
        return [getattr(self, name) for name in self.csv_header()]

    def to_text(self):
        def fmt(v):
            return "n/a" if v is None else f"{v:.6g}"

        return "\n".join([
            f"drive peak FWHM [m]      : {fmt(self.drive_fwhm)}",
            f"probe peak FWHM [m]      : {fmt(self.probe_fwhm)}",
            f"FWHM ratio (drive/probe) : {fmt(self.fwhm_ratio)}",
            f"drive finesse            : {fmt(self.drive_finesse)}",
            f"probe finesse            : {fmt(self.probe_finesse)}",
            f"finesse ratio (probe/drv): {fmt(self.finesse_ratio)}",
            f"predicted R              : {fmt(self.predicted_R)}",
        ]) + "\n"


def narrowing_report(drive_metrics, probe_metrics, prediction=None):
    """Measured drive-to-probe narrowing side by side with a predicted ratio."""
    for name, m in (("drive", drive_metrics), ("probe", probe_metrics)):
        if m.n_peaks < 2:
            raise NoPeakError(f"{name} profile has {m.n_peaks} peak(s); the report needs two")
    d_w, p_w = drive_metrics.mean_fwhm, probe_metrics.mean_fwhm
    return NarrowingReport(
        drive_fwhm=d_w,
        probe_fwhm=p_w,
        fwhm_ratio=d_w / p_w,
        drive_finesse=drive_metrics.finesse,
        probe_finesse=probe_metrics.finesse,
        finesse_ratio=probe_metrics.finesse / drive_metrics.finesse,
        predicted_R=prediction,
    )
