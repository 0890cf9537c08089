"""Group-velocity analysis of semi-discrete advection schemes.

Modified-wavenumber measurement for linear and nonlinear (WENO-type)
discretizations, fully discrete group-velocity maps for Euler/RK3/RK4
time marching, and wave-propagation experiments that check the
predictions against measured crest and envelope speeds.
"""
from __future__ import annotations

from .adr import (
    AdrConfig,
    ModifiedWavenumberTable,
    adr_kprime_at_mode,
    adr_modified_wavenumber,
    adr_nt_kprime,
    adr_nt_table,
    analytic_table,
    dealias_table,
    kappa_grid,
    read_table_csv,
    write_table_csv,
)
from .dft import Spectrum, dft, hilbert_envelope, idft
from .errors import MeasurementError, ReproductionError, StabilityError
from .qldrp import (
    GVP_BAND,
    GroupVelocityPoint,
    GvpMap,
    default_axis,
    dkappa_dk_numeric,
    group_velocity,
    group_velocity_euler,
    group_velocity_rk3,
    group_velocity_rk4,
    gvp_area,
    gvp_map,
    map_summary,
    write_map_csv,
    write_map_svg,
)
from .reproduce import TARGETS, TargetReport, render_text, run_all, run_target
from .schemes import (
    IDEAL_WEIGHTS,
    FrozenStencilField,
    LinearStencil,
    SchemeSpec,
    apply_linear,
    derivative,
    frozen_coefficients,
    modified_wavenumber_linear,
    upw5_stencil,
    weno5_js_derivative,
    weno5_m_derivative,
)
from .timeint import TimeSpec, advance, amplification_polynomial, step
from .waves import (
    AdvectionProblem,
    CombinationWaveSpec,
    CoupledProblem,
    WaveHistory,
    combination_wave_init,
    measure_group_velocity_dft,
    measure_group_velocity_envelope,
    measure_phase_velocity_peak,
    read_history,
    solve_advection,
    solve_coupled,
    write_history,
)

__version__ = "0.1.0"

__all__ = [
    "AdrConfig",
    "AdvectionProblem",
    "CombinationWaveSpec",
    "CoupledProblem",
    "FrozenStencilField",
    "GVP_BAND",
    "GroupVelocityPoint",
    "GvpMap",
    "IDEAL_WEIGHTS",
    "LinearStencil",
    "MeasurementError",
    "ModifiedWavenumberTable",
    "ReproductionError",
    "SchemeSpec",
    "Spectrum",
    "StabilityError",
    "TimeSpec",
    "WaveHistory",
    "adr_kprime_at_mode",
    "adr_modified_wavenumber",
    "adr_nt_kprime",
    "adr_nt_table",
    "advance",
    "amplification_polynomial",
    "analytic_table",
    "apply_linear",
    "combination_wave_init",
    "dealias_table",
    "default_axis",
    "derivative",
    "dft",
    "dkappa_dk_numeric",
    "frozen_coefficients",
    "group_velocity",
    "group_velocity_euler",
    "group_velocity_rk3",
    "group_velocity_rk4",
    "gvp_area",
    "gvp_map",
    "hilbert_envelope",
    "idft",
    "kappa_grid",
    "map_summary",
    "measure_group_velocity_dft",
    "measure_group_velocity_envelope",
    "measure_phase_velocity_peak",
    "modified_wavenumber_linear",
    "read_history",
    "read_table_csv",
    "solve_advection",
    "solve_coupled",
    "step",
    "upw5_stencil",
    "weno5_js_derivative",
    "weno5_m_derivative",
    "write_history",
    "write_map_csv",
    "write_map_svg",
    "write_table_csv",
    "TARGETS",
    "TargetReport",
    "render_text",
    "run_all",
    "run_target",
]
