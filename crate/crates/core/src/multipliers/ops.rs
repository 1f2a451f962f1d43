use num_complex::Complex64;

use super::cutoff::{dyadic_symbol, low_pass_symbol, truncation_symbol};
use super::params::PhysParams;
use crate::error::{Error, Result};
use crate::spectral::{norm2, Grid, SpectralField, SpectralField4, SpectralScalar};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `|ξ|_F² = ξ1² + ξ2² + F²ξ3²`.
#[inline]
pub fn norm_f2(xi: [f64; 3], froude: f64) -> f64 {
    xi[0] * xi[0] + xi[1] * xi[1] + froude * froude * xi[2] * xi[2]
}

/// Real direction spanning the quasi-geostrophic line at `ξ`:
/// `(-ξ2, ξ1, 0, -Fξ3)`.
#[inline]
pub fn qg_direction(xi: [f64; 3], froude: f64) -> [f64; 4] {
    [-xi[1], xi[0], 0.0, -froude * xi[2]]
}

/// Leray projection of the velocity components; the temperature is untouched.
pub fn leray_project(f: &SpectralField4) -> SpectralField4 {
    f.map_modes(|_, xi, u| {
        let k2 = norm2(xi);
        if k2 == 0.0 {
            return u;
        }
        let d = (u[0] * xi[0] + u[1] * xi[1] + u[2] * xi[2]) / k2;
        [u[0] - d * xi[0], u[1] - d * xi[1], u[2] - d * xi[2], u[3]]
    })
}

/// Velocity divergence `∂_j v^j`.
pub fn divergence(f: &SpectralField4) -> SpectralScalar {
    let n = f.grid().len();
    SpectralScalar::from_fn(f.grid(), |idx, xi| {
        let d = f.data();
        [I * (xi[0] * d[idx] + xi[1] * d[n + idx] + xi[2] * d[2 * n + idx])]
    })
}

/// Rotation/stratification coupling `(-U², U¹, U⁴/F, -U³/F)`.
pub fn apply_a(f: &SpectralField4, froude: f64) -> SpectralField4 {
    let inv = 1.0 / froude;
    f.map_modes(|_, _, u| [-u[1], u[0], u[3] * inv, -u[2] * inv])
}

/// Potential vorticity `∂1U² - ∂2U¹ - F∂3U⁴`.
pub fn potential_vorticity(f: &SpectralField4, froude: f64) -> SpectralScalar {
    let grid = f.grid();
    SpectralScalar::from_fn(grid, |idx, xi| {
        let u = f.mode(idx);
        [I * (u[1] * xi[0] - u[0] * xi[1] - u[3] * (froude * xi[2]))]
    })
}

/// Orthogonal projection onto the quasi-geostrophic subspace. At each mode
/// this is the rank-one projector onto `(-ξ2, ξ1, 0, -Fξ3)`, which is the
/// same map as `(-∂2, ∂1, 0, -F∂3) Δ_F^{-1} Ω(U)`.
pub fn qg_project(f: &SpectralField4, froude: f64) -> SpectralField4 {
    f.map_modes(|_, xi, u| {
        let m = qg_direction(xi, froude);
        let m2 = norm_f2(xi, froude);
        if m2 == 0.0 {
            return [ZERO; 4];
        }
        let c = (u[0] * m[0] + u[1] * m[1] + u[3] * m[3]) / m2;
        [c * m[0], c * m[1], ZERO, c * m[3]]
    })
}

pub fn osc_project(f: &SpectralField4, froude: f64) -> SpectralField4 {
    f - &qg_project(f, froude)
}

/// `Δ_F = ∂1² + ∂2² + F²∂3²`.
pub fn laplacian_f(phi: &SpectralScalar, froude: f64) -> SpectralScalar {
    phi.apply_symbol(|xi| -norm_f2(xi, froude))
}

/// Inverse of `Δ_F` on mean-free scalars.
pub fn delta_f_inverse(omega: &SpectralScalar, froude: f64) -> Result<SpectralScalar> {
    let mean = omega.data()[0].norm();
    if mean > 1e-12 * omega.max_abs_coefficient().max(1.0) {
        return Err(Error::NonzeroMean(format!("potential vorticity has mean {mean:.3e}")));
    }
    let mut out = omega.apply_symbol(|xi| {
        let k2 = norm_f2(xi, froude);
        if k2 == 0.0 {
            0.0
        } else {
            -1.0 / k2
        }
    });
    out.zero_mean();
    Ok(out)
}

/// `(-∂2Φ, ∂1Φ, 0, -F∂3Φ)`.
pub fn qg_from_potential(phi: &SpectralScalar, froude: f64) -> SpectralField4 {
    let grid = phi.grid();
    SpectralField4::from_fn(grid, |idx, xi| {
        let p = phi.data()[idx] * I;
        [-p * xi[1], p * xi[0], ZERO, -p * (froude * xi[2])]
    })
}

/// Quasi-geostrophic field with potential vorticity `Ω`.
pub fn biot_savart(omega: &SpectralScalar, froude: f64) -> Result<SpectralField4> {
    Ok(qg_from_potential(&delta_f_inverse(omega, froude)?, froude))
}

/// Symbol of the limit dissipation operator
/// `Γ = -|ξ|² (ν(ξ1²+ξ2²) + ν'F²ξ3²) / |ξ|_F²`.
pub fn gamma_symbol(xi: [f64; 3], p: &PhysParams) -> f64 {
    let f2 = norm_f2(xi, p.froude());
    if f2 == 0.0 {
        return 0.0;
    }
    let h = xi[0] * xi[0] + xi[1] * xi[1];
    let v = xi[2] * xi[2] * p.froude() * p.froude();
    -norm2(xi) * (p.nu() * h + p.nu_prime() * v) / f2
}

pub fn gamma_apply<const C: usize>(f: &SpectralField<C>, p: &PhysParams) -> SpectralField<C> {
    f.apply_symbol(|xi| gamma_symbol(xi, p))
}

/// `L = diag(νΔ, νΔ, νΔ, ν'Δ)`.
pub fn diffusion_apply(f: &SpectralField4, p: &PhysParams) -> SpectralField4 {
    let (nu, nup) = (p.nu(), p.nu_prime());
    f.map_modes(|_, xi, u| {
        let k2 = norm2(xi);
        [u[0] * (-nu * k2), u[1] * (-nu * k2), u[2] * (-nu * k2), u[3] * (-nup * k2)]
    })
}

/// `|D|^s`, with the zero mode mapped to zero.
pub fn fractional_derivative<const C: usize>(f: &SpectralField<C>, s: f64) -> SpectralField<C> {
    f.apply_symbol(|xi| {
        let k2 = norm2(xi);
        if k2 == 0.0 {
            0.0
        } else {
            k2.powf(0.5 * s)
        }
    })
}

/// `P_{r,R} = χ(|D|/R) (1 - χ(|D3|/r))`.
pub fn freq_truncate<const C: usize>(f: &SpectralField<C>, r: f64, big_r: f64) -> Result<SpectralField<C>> {
    if !(r > 0.0 && big_r > r) {
        return Err(Error::InvalidParameter(format!("truncation needs 0 < r < R, got r = {r}, R = {big_r}")));
    }
    Ok(f.apply_symbol(|xi| truncation_symbol(r, big_r, xi)))
}

/// Homogeneous dyadic block `Δ̇_j`.
pub fn lp_block<const C: usize>(f: &SpectralField<C>, j: i32) -> SpectralField<C> {
    f.apply_symbol(|xi| dyadic_symbol(j, norm2(xi).sqrt()))
}

/// `S_j = χ(2^{-j}|D|)`.
pub fn lp_low<const C: usize>(f: &SpectralField<C>, j: i32) -> SpectralField<C> {
    f.apply_symbol(|xi| low_pass_symbol(j, norm2(xi).sqrt()))
}

/// Vertical dyadic block `Δ̇^v_k`, acting on `|ξ3|` only.
pub fn lp_block_vertical<const C: usize>(f: &SpectralField<C>, k: i32) -> SpectralField<C> {
    f.apply_symbol(|xi| dyadic_symbol(k, xi[2].abs()))
}

/// Block indices whose symbols cover every nonzero mode of the grid, so that
/// `Σ_{j in range} Δ̇_j = Id` on mean-free fields.
pub fn dyadic_range(grid: &Grid) -> (i32, i32) {
    let jmin = grid.kmin().log2().floor() as i32 - 1;
    let jmax = grid.k_max().log2().ceil() as i32 + 1;
    (jmin, jmax)
}

/// Vertical analogue of [`dyadic_range`].
pub fn dyadic_range_vertical(grid: &Grid) -> (i32, i32) {
    let kmin3 = grid.kmin();
    let kmax3 = grid.kmin() * (grid.dims()[2] / 2) as f64;
    (kmin3.log2().floor() as i32 - 1, kmax3.log2().ceil() as i32 + 1)
}
