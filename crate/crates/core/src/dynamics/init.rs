use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::multipliers::{leray_project, osc_project, qg_from_potential, PhysParams};
use crate::spectral::{band_limited_field, Grid, SpectralField4};

/// Band of the limit-flow profiles, in integer wavenumbers.
pub const QG_BAND: i64 = 4;
/// Shell `[lo, hi]` (physical `|ξ|`) carrying the oscillating profiles.
pub const OSC_SHELL: (f64, f64) = (3.0, 6.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitKind {
    /// Pure QG data.
    QgRandom,
    /// Pure oscillating data of size `ε^{-γ}`.
    OscRandom,
    /// QG data with an `ε^{α0}` perturbation plus `ε^{-γ}` waves, `ν = ν'` regime.
    MixedTheorem2,
    /// Same shape for the truncated-filter regime `ν ≠ ν'`.
    MixedTheorem4,
}

impl InitKind {
    pub const ALL: [InitKind; 4] = [InitKind::QgRandom, InitKind::OscRandom, InitKind::MixedTheorem2, InitKind::MixedTheorem4];
}

impl fmt::Display for InitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InitKind::QgRandom => "qg_random",
            InitKind::OscRandom => "osc_random",
            InitKind::MixedTheorem2 => "mixed_theorem2",
            InitKind::MixedTheorem4 => "mixed_theorem4",
        })
    }
}

impl FromStr for InitKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        InitKind::ALL
            .into_iter()
            .find(|k| k.to_string() == s.trim())
            .ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "unknown init.kind '{s}' (qg_random, osc_random, mixed_theorem2, mixed_theorem4)"
                ))
            })
    }
}

/// Initial-data recipe. Profiles are normalized to unit root-mean-square
/// value over the box and depend only on `seed`, not on the grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InitSpec {
    pub kind: InitKind,
    /// Blow-up exponent of the oscillating part.
    pub gamma: f64,
    /// Extra regularity index.
    pub delta: f64,
    /// Decay exponent of the QG perturbation.
    pub alpha0: f64,
    pub seed: u64,
    /// RMS size of the limit-flow profile.
    pub amplitude: f64,
}

impl InitSpec {
    pub fn new(kind: InitKind, seed: u64) -> Self {
        Self { kind, gamma: 0.02, delta: 0.1, alpha0: 1.0, seed, amplitude: 1.0 }
    }

    pub fn validate(&self, params: &PhysParams) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if !(self.amplitude >= 0.0 && self.amplitude.is_finite()) {
            return bad(format!("init.amplitude must be finite and >= 0, got {}", self.amplitude));
        }
        if !(self.gamma >= 0.0 && self.gamma.is_finite()) {
            return bad(format!("init.gamma must be >= 0, got {}", self.gamma));
        }
        match self.kind {
            InitKind::QgRandom | InitKind::OscRandom => Ok(()),
            InitKind::MixedTheorem2 | InitKind::MixedTheorem4 => {
                if !(self.delta > 0.0 && self.delta <= 0.1) {
                    return bad(format!("init.delta must lie in (0, 0.1], got {}", self.delta));
                }
                if !(self.alpha0 > 0.0 && self.alpha0.is_finite()) {
                    return bad(format!("init.alpha0 must be positive, got {}", self.alpha0));
                }
                if self.kind == InitKind::MixedTheorem2 {
                    if !(self.gamma > 0.0 && self.gamma < 0.5 * self.delta) {
                        return bad(format!("init.gamma must lie in (0, delta/2) = (0, {}), got {}", 0.5 * self.delta, self.gamma));
                    }
                } else {
                    let cap = 0.25 * params.big_m() * self.delta;
                    if !(self.gamma > 0.0 && self.gamma <= cap) {
                        return bad(format!("init.gamma must lie in (0, M delta/4] = (0, {cap}], got {}", self.gamma));
                    }
                }
                Ok(())
            }
        }
    }

    /// `η = (1 - 2γ/δ)/2`.
    pub fn eta(&self) -> f64 {
        0.5 * (1.0 - 2.0 * self.gamma / self.delta)
    }
}

/// The pieces of a decomposed initial state.
#[derive(Clone, Debug)]
pub struct InitialData {
    /// `U_0 = U_{0,QG} + U_{0,osc}`.
    pub u0: SpectralField4,
    /// `Ũ_{0,QG}`, the ε-independent limit data.
    pub qg_limit: SpectralField4,
    /// `U_{0,QG}`.
    pub qg_part: SpectralField4,
    /// `U_{0,osc}`.
    pub osc: SpectralField4,
}

fn rms_normalize(mut f: SpectralField4, rms: f64) -> SpectralField4 {
    let n = f.l2_norm();
    if n > 0.0 {
        f.scale(rms * f.grid().volume().sqrt() / n);
    }
    f
}

/// Random QG field on `0 < |k| ≤ QG_BAND`, unit RMS.
pub fn qg_profile(grid: &Grid, seed: u64, froude: f64) -> SpectralField4 {
    let phi = band_limited_field::<1>(grid, seed, QG_BAND, |k| 1.0 / (1.0 + k * k));
    rms_normalize(qg_from_potential(&phi, froude).dealiased(), 1.0)
}

/// Divergence-free field with zero potential vorticity in the shell
/// `OSC_SHELL`, unit RMS.
pub fn osc_profile(grid: &Grid, seed: u64, froude: f64) -> SpectralField4 {
    let (lo, hi) = OSC_SHELL;
    let kmax = (hi / grid.kmin()).floor() as i64;
    let raw = band_limited_field::<4>(grid, seed, kmax, |k| if (lo..=hi).contains(&k) { 1.0 } else { 0.0 });
    rms_normalize(osc_project(&leray_project(&raw), froude).dealiased(), 1.0)
}

/// Builds the initial state. Seeds `seed`, `seed + 1`, `seed + 2` drive the
/// limit profile, the QG perturbation and the wave profile.
pub fn build_initial(grid: &Grid, params: &PhysParams, spec: &InitSpec) -> Result<InitialData> {
    spec.validate(params)?;
    let f = params.froude();
    let eps = params.epsilon();
    let zero = SpectralField4::zeros(grid);
    let base = qg_profile(grid, spec.seed, f).scaled(spec.amplitude);
    let waves = || osc_profile(grid, spec.seed.wrapping_add(2), f).scaled(eps.powf(-spec.gamma));
    let (qg_limit, qg_part, osc) = match spec.kind {
        InitKind::QgRandom => (base.clone(), base, zero),
        InitKind::OscRandom => (zero.clone(), zero, waves()),
        InitKind::MixedTheorem2 | InitKind::MixedTheorem4 => {
            let mut part = base.clone();
            part.add_scaled(eps.powf(spec.alpha0), &qg_profile(grid, spec.seed.wrapping_add(1), f));
            (base, part, waves())
        }
    };
    Ok(InitialData { u0: &qg_part + &osc, qg_limit, qg_part, osc })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipliers::{divergence, potential_vorticity, qg_project};
    use std::f64::consts::PI;

    fn params() -> PhysParams {
        PhysParams::new(0.05, 0.6, 0.02, 0.02, 0.1, 0.2).unwrap()
    }

    #[test]
    fn profiles_have_the_advertised_structure() {
        let g = Grid::cubic(24, 2.0 * PI).unwrap();
        let q = qg_profile(&g, 3, 0.6);
        assert!((&qg_project(&q, 0.6) - &q).l2_norm() < 1e-13 * q.l2_norm());
        let w = osc_profile(&g, 3, 0.6);
        assert!(potential_vorticity(&w, 0.6).l2_norm() < 1e-12 * w.l2_norm());
        assert!(divergence(&w).l2_norm() < 1e-12 * w.l2_norm());
        for f in [&q, &w] {
            assert!((f.l2_norm() / g.volume().sqrt() - 1.0).abs() < 1e-12);
        }
        // the same function on a finer grid
        let fine = Grid::cubic(32, 2.0 * PI).unwrap();
        let w2 = osc_profile(&fine, 3, 0.6);
        assert!((&w.resample(&fine).unwrap() - &w2).l2_norm() < 1e-12 * w2.l2_norm());
    }

    #[test]
    fn wave_size_scales_like_eps_to_minus_gamma() {
        let g = Grid::cubic(16, 2.0 * PI).unwrap();
        let p = params();
        let mut spec = InitSpec::new(InitKind::OscRandom, 1);
        spec.gamma = 0.0;
        let a = build_initial(&g, &p, &spec).unwrap().osc.l2_norm();
        spec.gamma = 0.3;
        let b = build_initial(&g, &p, &spec).unwrap().osc.l2_norm();
        assert!((b / a - 0.05f64.powf(-0.3)).abs() < 1e-12);
    }

    #[test]
    fn mixed_data_decomposes() {
        let g = Grid::cubic(16, 2.0 * PI).unwrap();
        let p = params();
        let spec = InitSpec::new(InitKind::MixedTheorem2, 5);
        let d = build_initial(&g, &p, &spec).unwrap();
        let gap = (&d.qg_part - &d.qg_limit).l2_norm() / g.volume().sqrt();
        assert!((gap - 0.05).abs() < 1e-12);
        assert!((&(&d.qg_part + &d.osc) - &d.u0).max_abs_coefficient() == 0.0);
        assert!((&qg_project(&d.u0, 0.6) - &d.qg_part).l2_norm() < 1e-12 * d.u0.l2_norm());
    }

    #[test]
    fn hypotheses_are_enforced() {
        let p = params();
        let mut s = InitSpec::new(InitKind::MixedTheorem2, 0);
        s.gamma = 0.05;
        assert!(s.validate(&p).is_err());
        s.gamma = 0.02;
        assert!(s.validate(&p).is_ok());
        assert!((s.eta() - 0.3).abs() < 1e-15);
        s.delta = 0.2;
        assert!(s.validate(&p).is_err());
        let mut s4 = InitSpec::new(InitKind::MixedTheorem4, 0);
        s4.gamma = 0.004;
        assert!(s4.validate(&p).is_ok());
        s4.gamma = 0.006;
        assert!(s4.validate(&p).is_err());
        assert_eq!("osc_random".parse::<InitKind>().unwrap(), InitKind::OscRandom);
        assert!("qg".parse::<InitKind>().is_err());
    }
}
