//! Time integration of the primitive system, its quasi-geostrophic limit,
//! the filtered wave systems and the remainder between them.
//!
//! Every evolution is written as `y' = Ly + N(t, y)` with `L` integrated
//! exactly by a [`Propagator`] and `N` handled by an exponential scheme
//! ([`Method::IfRk4`] or [`Method::EtdRk2`]). Coupled systems advance as
//! bundles of fields through the same scheme, so sums of bundle members
//! follow the sum system to round-off.

mod init;
mod nonlinear;
mod propagator;
mod qg;
mod remainder;
mod run;
mod scheme;

pub use init::{build_initial, osc_profile, qg_profile, InitKind, InitSpec, InitialData, OSC_SHELL, QG_BAND};
pub use nonlinear::{advect_sampled, cfl_number, max_speed, pe_nonlinearity, scalar_advect, transport, Sampled};
pub use propagator::{phi_scalar, BundleFlow, Propagator, PropagatorKind};
pub use qg::{
    compute_g, g_linear_from_vorticity, qg3_rhs, qg_defect, qg_round_trip, require_qg, velocity_rhs, vorticity_rhs,
    GForcing, QG_TOLERANCE,
};
pub use remainder::{
    bilinear_terms, bundle_rhs, delta_forcing, delta_initial, reproject_bundle, solve_filtered, step_bundle,
    truncation_remainder, wave_forcing, wave_initial, DeltaForcing, WaveFilter,
};
pub use run::{reproject, DiagnosticRow, Model, RunState, VorticityRun, BLOWUP_GROWTH, DIVERGENCE_TOL};
pub use scheme::{
    duhamel_step, etd_rk2_step, if_rk4_step, scheme_step, LinearFlow, Method, StateSpace, TimeScheme, MAX_CFL_SAFETY,
};
