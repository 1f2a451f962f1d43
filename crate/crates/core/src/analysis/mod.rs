//! Norms and harmonic-analysis diagnostics.
//!
//! `L^p` norms are grid quadratures (grid max for `p = ∞`), so they are
//! second-order accurate for smooth fields and exact for `p = 2`. Besov norms
//! sum the homogeneous dyadic blocks that touch the grid.

mod fit;
mod norms;
mod products;
mod time;

pub use fit::{check_constant, fit_loglog, ConstantCheck, LogLogFit, STABILITY_TOLERANCE, VIOLATION_FACTOR};
pub use norms::{
    besov_norm, lebesgue_norm, lebesgue_norm_physical, sobolev_norm, weighted_lq, DyadicBlocks, NormKind, NormSpec,
};
pub use products::{bony_split, interpolation_check, m_s_operator, InterpolationCheck};
pub use time::{
    chemin_lerner_from_blocks, chemin_lerner_norm, energy_norm, time_lebesgue, trapezoid, EnergyAccumulator,
};
