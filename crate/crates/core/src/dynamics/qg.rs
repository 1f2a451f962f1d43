//! Limit-system right-hand sides and the forcing that couples the limit
//! flow to the oscillating waves.

use num_complex::Complex64;

use super::nonlinear::{advect_sampled, scalar_advect, Sampled};
use crate::error::{Error, Result};
use crate::multipliers::{
    biot_savart, diffusion_apply, norm_f2, osc_project, potential_vorticity, qg_project, PhysParams,
};
use crate::spectral::{norm2, PhysicalScalar, SpectralField4, SpectralScalar};

/// Relative size of `𝒫U` tolerated when a field is required to be QG.
pub const QG_TOLERANCE: f64 = 1e-9;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `‖𝒫U‖ / ‖U‖`, zero for the zero field.
pub fn qg_defect(u: &SpectralField4, froude: f64) -> f64 {
    let n = u.l2_norm();
    if n == 0.0 {
        0.0
    } else {
        osc_project(u, froude).l2_norm() / n
    }
}

pub fn require_qg(u: &SpectralField4, froude: f64) -> Result<()> {
    let d = qg_defect(u, froude);
    if d > QG_TOLERANCE {
        Err(Error::NotQuasiGeostrophic(d))
    } else {
        Ok(())
    }
}

/// `-v·∇Ω` with `v` the velocity recovered from `Ω` by Biot–Savart, plus the
/// velocity maximum.
pub fn vorticity_rhs(omega: &SpectralScalar, froude: f64) -> Result<(SpectralScalar, f64)> {
    let u = biot_savart(omega, froude)?;
    let s = Sampled::new(&u);
    let w = omega.to_physical().unwrap_or_else(|_| {
        let mut o = omega.clone();
        o.enforce_hermitian();
        o.to_physical().expect("hermitian after symmetrization")
    });
    let w = PhysicalScalar::new(omega.grid(), w.into_data())?;
    let mut out = scalar_advect(&s.phys, &w);
    out.apply_dealias();
    Ok((out, s.max_speed))
}

/// `-𝒬(v·∇U)`, the velocity-form limit nonlinearity.
pub fn velocity_rhs(u: &SpectralField4, froude: f64) -> (SpectralField4, f64) {
    let s = Sampled::new(u);
    (qg_project(&advect_sampled(&s.phys, &s.phys), froude), s.max_speed)
}

/// The two parts of the wave forcing generated by a QG field.
#[derive(Clone, Debug)]
pub struct GForcing {
    /// `ℙ𝒫(U·∇U)`.
    pub bilinear: SpectralField4,
    /// `-𝒫(LU)`; vanishes when `ν = ν'`.
    pub linear: SpectralField4,
}

impl GForcing {
    pub fn total(&self) -> SpectralField4 {
        &self.bilinear + &self.linear
    }
}

/// `G^b` and `G^l` from physical samples of a QG field already on hand.
pub(crate) fn g_from_sampled(u_qg: &SpectralField4, sampled: &Sampled, params: &PhysParams) -> GForcing {
    let adv = advect_sampled(&sampled.phys, &sampled.phys);
    let bilinear = -&osc_project(&adv, params.froude());
    let linear = -&osc_project(&diffusion_apply(u_qg, params), params.froude());
    GForcing { bilinear, linear }
}

/// `G^b = ℙ𝒫(U·∇U)`, `G^l = -𝒫(LU)` for a QG field `U`.
pub fn compute_g(u_qg: &SpectralField4, params: &PhysParams) -> Result<GForcing> {
    require_qg(u_qg, params.froude())?;
    Ok(g_from_sampled(u_qg, &Sampled::new(u_qg), params))
}

/// `G^l` from its closed-form symbol acting on the potential vorticity:
/// `F(ν-ν')|ξ|²/|ξ|_F⁴ · i(Fξ2ξ3², -Fξ1ξ3², 0, -(ξ1²+ξ2²)ξ3) Ω̂`.
pub fn g_linear_from_vorticity(omega: &SpectralScalar, params: &PhysParams) -> SpectralField4 {
    let f = params.froude();
    let c = f * (params.nu() - params.nu_prime());
    SpectralField4::from_fn(omega.grid(), |idx, xi| {
        let nf = norm_f2(xi, f);
        if nf == 0.0 {
            return [Complex64::new(0.0, 0.0); 4];
        }
        let w = omega.data()[idx] * I * (c * norm2(xi) / (nf * nf));
        let (x1, x2, x3) = (xi[0], xi[1], xi[2]);
        [w * (f * x2 * x3 * x3), w * (-f * x1 * x3 * x3), Complex64::new(0.0, 0.0), w * (-(x1 * x1 + x2 * x2) * x3)]
    })
}

/// Right-hand side of the limit flow written around the full linear
/// operator: `-ℙ(U·∇U) + G(𝒬U)`. On QG fields this equals the limit
/// dynamics after the `(1/ε)ℙ𝒜` term and `L` are absorbed by the propagator.
pub fn qg3_rhs(u: &SpectralField4, params: &PhysParams) -> (SpectralField4, GForcing, f64) {
    let s = Sampled::new(u);
    let q = qg_project(u, params.froude());
    let g = if qg_defect(u, params.froude()) == 0.0 {
        g_from_sampled(&q, &s, params)
    } else {
        g_from_sampled(&q, &Sampled::new(&q), params)
    };
    let mut out = advect_sampled(&s.phys, &s.phys);
    out.add_scaled(1.0, &g.bilinear);
    out.add_scaled(1.0, &g.linear);
    (out, g, s.max_speed)
}

/// Potential vorticity of a QG field together with the field rebuilt from it.
pub fn qg_round_trip(u: &SpectralField4, froude: f64) -> Result<(SpectralScalar, SpectralField4)> {
    let omega = potential_vorticity(u, froude);
    let back = biot_savart(&omega, froude)?;
    Ok((omega, back))
}
