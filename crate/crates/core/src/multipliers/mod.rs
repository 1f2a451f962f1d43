//! Fourier multipliers: projections, potential vorticity, dissipation symbols,
//! smooth cutoffs and Littlewood–Paley blocks.

mod cutoff;
mod ops;
mod params;

pub use cutoff::{chi, dyadic_symbol, low_pass_symbol, truncation_symbol, CutoffProfile};
pub use ops::{
    apply_a, biot_savart, delta_f_inverse, diffusion_apply, divergence, dyadic_range, dyadic_range_vertical,
    fractional_derivative, freq_truncate, gamma_apply, gamma_symbol, laplacian_f, leray_project, lp_block,
    lp_block_vertical, lp_low, norm_f2, osc_project, potential_vorticity, qg_direction, qg_from_potential,
    qg_project,
};
pub use params::PhysParams;
