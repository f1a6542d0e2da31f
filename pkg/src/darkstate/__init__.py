"""Subwavelength probe patterns from spatially structured dark states.

A weak probe crosses a three-level Lambda medium whose transparency follows
a transverse drive pattern; the package propagates the probe, measures the
transmitted features and compares them with the analytic width laws.
"""

from .analysis import (
    BeamMetrics,
    NarrowingReport,
    measure,
    narrowing_report,
    predicted_width_high_od,
    predicted_width_low_od,
    ratio_R,
)
from .atomic import AtomicParams, ComplexRate, DarkState, complex_rates, dark_state, kappa, kappa_expanded
from .estimator import BeamProfileMeter, DarkStateImager
from .fields import (
    ComplexField,
    DriveProfile,
    TransverseGrid,
    gaussian_probe,
    interference_drive,
    lens_phase,
    make_grid,
    parabolic_drive,
)
from .propagation import PropagationConfig, PropagationRecord, excited_population_map, propagate, step_splitstep
from .sweep import ProbeSpec, Scenario, SweepRow, SweepSpec, run_scenario, run_sweep

__version__ = "0.1.0"

__all__ = [
    "AtomicParams", "ComplexRate", "DarkState", "complex_rates", "dark_state", "kappa",
    "kappa_expanded",
    "ComplexField", "DriveProfile", "TransverseGrid", "gaussian_probe", "interference_drive",
    "lens_phase", "make_grid", "parabolic_drive",
    "PropagationConfig", "PropagationRecord", "excited_population_map", "propagate",
    "step_splitstep",
    "BeamMetrics", "NarrowingReport", "measure", "narrowing_report", "predicted_width_high_od",
    "predicted_width_low_od", "ratio_R",
    "ProbeSpec", "Scenario", "SweepRow", "SweepSpec", "run_scenario", "run_sweep",
    "BeamProfileMeter", "DarkStateImager",
]
