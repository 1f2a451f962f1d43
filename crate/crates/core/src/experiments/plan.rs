use std::fmt;
use std::str::FromStr;

use crate::analysis::NormSpec;
use crate::dynamics::{InitKind, InitSpec, Method, OSC_SHELL, QG_BAND};
use crate::error::{Error, Result};
use crate::multipliers::PhysParams;
use crate::spectral::Grid;

/// Relative tolerance on equal ratios between successive sweep values.
pub const LOG_SPACING_TOL: f64 = 1e-6;
/// Minimum number of usable points for a slope fit.
pub const MIN_FIT_POINTS: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepKind {
    Convergence,
    Strichartz,
    EigenAccuracy,
    ProjectorSmallness,
}

impl SweepKind {
    pub const ALL: [SweepKind; 4] =
        [SweepKind::Convergence, SweepKind::Strichartz, SweepKind::EigenAccuracy, SweepKind::ProjectorSmallness];
}

impl fmt::Display for SweepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepKind::Convergence => "convergence",
            SweepKind::Strichartz => "strichartz",
            SweepKind::EigenAccuracy => "eigen-accuracy",
            SweepKind::ProjectorSmallness => "projector-smallness",
        })
    }
}

impl FromStr for SweepKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        SweepKind::ALL.into_iter().find(|k| k.to_string() == s.trim()).ok_or_else(|| {
            Error::InvalidParameter(format!(
                "unknown experiment '{s}' (convergence, strichartz, eigen-accuracy, projector-smallness)"
            ))
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepParameter {
    Epsilon,
    Gamma,
    Resolution,
}

impl fmt::Display for SweepParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepParameter::Epsilon => "epsilon",
            SweepParameter::Gamma => "gamma",
            SweepParameter::Resolution => "resolution",
        })
    }
}

impl FromStr for SweepParameter {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "epsilon" => Ok(SweepParameter::Epsilon),
            "gamma" => Ok(SweepParameter::Gamma),
            "resolution" => Ok(SweepParameter::Resolution),
            other => Err(Error::InvalidParameter(format!(
                "unknown sweep parameter '{other}' (epsilon, gamma, resolution)"
            ))),
        }
    }
}

/// Frequency truncation used by the linear sweeps.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Truncation {
    /// Radii held at `r`, `R` for every `ε`.
    Fixed { r: f64, big_r: f64 },
    /// `r = ε^m`, `R = ε^{-M}` from the parameter set.
    Coupled,
}

impl Truncation {
    /// Parameters whose `(r_ε, R_ε)` realize this truncation.
    pub fn apply(&self, params: &PhysParams) -> Result<PhysParams> {
        match *self {
            Truncation::Coupled => Ok(*params),
            Truncation::Fixed { r, big_r } => {
                let le = params.epsilon().ln();
                if le >= 0.0 {
                    return Err(Error::InvalidParameter("fixed truncation radii need epsilon < 1".into()));
                }
                if !(r > 0.0 && r < 1.0) || !(big_r > 1.0 && big_r.is_finite()) {
                    return Err(Error::InvalidParameter(format!(
                        "fixed radii need 0 < r < 1 < R, got r = {r}, R = {big_r}"
                    )));
                }
                params.with_truncation(r.ln() / le, -big_r.ln() / le)
            }
        }
    }
}

impl fmt::Display for Truncation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Truncation::Fixed { r, big_r } => write!(f, "fixed(r={r}, R={big_r})"),
            Truncation::Coupled => f.write_str("coupled"),
        }
    }
}

/// A sweep over one parameter with every other setting held fixed.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepPlan {
    pub kind: SweepKind,
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
    /// Data family; `init.kind` is overwritten by it.
    pub family: InitKind,
    /// Extra norms recorded on the monitored field.
    pub norms: Vec<NormSpec>,
    pub method: Method,
    pub seed: u64,
    pub n: usize,
    pub box_length: f64,
    pub params: PhysParams,
    pub dt: f64,
    /// Horizon; `None` selects [`default_horizon`].
    pub t_end: Option<f64>,
    pub init: InitSpec,
    pub truncation: Truncation,
}

/// One fully resolved sweep point.
#[derive(Clone, Debug)]
pub struct SweepPoint {
    pub value: f64,
    pub grid: Grid,
    pub params: PhysParams,
    pub init: InitSpec,
    pub dt: f64,
    pub t_end: f64,
}

/// `T = min(2, 1/(ν0 k_mid²))`.
pub fn default_horizon(nu0: f64, k_mid: f64) -> f64 {
    if nu0 > 0.0 {
        2f64.min(1.0 / (nu0 * k_mid * k_mid))
    } else {
        2.0
    }
}

/// `count` values `first, first/2, first/4, ...`.
pub fn dyadic_values(first: f64, count: usize) -> Vec<f64> {
    (0..count).map(|i| first * 0.5f64.powi(i as i32)).collect()
}

impl SweepPlan {
    pub fn new(kind: SweepKind, parameter: SweepParameter, values: Vec<f64>, family: InitKind, params: PhysParams) -> Self {
        let truncation = match kind {
            SweepKind::Strichartz | SweepKind::ProjectorSmallness => Truncation::Fixed { r: 0.5, big_r: 8.0 },
            _ => Truncation::Coupled,
        };
        Self {
            kind,
            parameter,
            values,
            family,
            norms: Vec::new(),
            method: Method::IfRk4,
            seed: 0,
            n: 32,
            box_length: 2.0 * std::f64::consts::PI,
            params,
            dt: 0.01,
            t_end: None,
            init: InitSpec::new(family, 0),
            truncation,
        }
    }

    /// Whether the plan has enough points for a slope.
    pub fn fits_slope(&self) -> bool {
        self.values.len() >= MIN_FIT_POINTS
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if self.values.is_empty() {
            return bad("sweep needs at least one value".into());
        }
        if let Some(v) = self.values.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
            return bad(format!("sweep values must be positive and finite, got {v}"));
        }
        if self.values.len() >= 2 {
            let r0 = self.values[1] / self.values[0];
            if r0 == 1.0 {
                return bad("sweep values must be distinct".into());
            }
            if self.values.len() >= MIN_FIT_POINTS {
                for w in self.values.windows(2) {
                    if ((w[1] / w[0]) / r0 - 1.0).abs() > LOG_SPACING_TOL {
                        return bad(format!("sweep values must be log-spaced; ratio {} differs from {r0}", w[1] / w[0]));
                    }
                }
            }
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return bad(format!("time.dt must be positive, got {}", self.dt));
        }
        if let Some(t) = self.t_end {
            if !(t > 0.0 && t.is_finite()) {
                return bad(format!("time.t_end must be positive, got {t}"));
            }
        }
        for n in &self.norms {
            n.validate()?;
        }
        for &v in &self.values {
            self.point(v)?;
        }
        Ok(())
    }

    /// Centre of the spectral band carrying the data.
    pub fn k_mid(&self) -> f64 {
        match self.family {
            InitKind::QgRandom => 0.5 * QG_BAND as f64,
            _ => 0.5 * (OSC_SHELL.0 + OSC_SHELL.1),
        }
    }

    pub fn horizon(&self) -> f64 {
        self.t_end.unwrap_or_else(|| default_horizon(self.params.nu0(), self.k_mid()))
    }

    /// Resolves the settings at sweep value `value`.
    pub fn point(&self, value: f64) -> Result<SweepPoint> {
        let mut params = self.params;
        let mut init = InitSpec { kind: self.family, seed: self.seed, ..self.init };
        let mut n = self.n;
        match self.parameter {
            SweepParameter::Epsilon => params = params.with_epsilon(value)?,
            SweepParameter::Gamma => init.gamma = value,
            SweepParameter::Resolution => {
                if value.fract() != 0.0 {
                    return Err(Error::InvalidParameter(format!("resolution values must be integers, got {value}")));
                }
                n = value as usize;
            }
        }
        let grid = Grid::cubic(n, self.box_length)?;
        if self.kind == SweepKind::Convergence {
            init.validate(&params)?;
        }
        Ok(SweepPoint { value, grid, params, init, dt: self.dt, t_end: self.horizon() })
    }

    /// Reproducibility metadata.
    pub fn metadata(&self) -> Vec<(String, String)> {
        let p = &self.params;
        let mut m = vec![
            ("experiment".to_string(), self.kind.to_string()),
            ("parameter".into(), self.parameter.to_string()),
            ("values".into(), self.values.iter().map(|v| format!("{v}")).collect::<Vec<_>>().join(",")),
            ("family".into(), self.family.to_string()),
            ("seed".into(), self.seed.to_string()),
            ("grid.n".into(), self.n.to_string()),
            ("grid.box_length".into(), format!("{}", self.box_length)),
            ("phys.epsilon".into(), format!("{}", p.epsilon())),
            ("phys.F".into(), format!("{}", p.froude())),
            ("phys.nu".into(), format!("{}", p.nu())),
            ("phys.nu_prime".into(), format!("{}", p.nu_prime())),
            ("trunc.m".into(), format!("{}", p.m())),
            ("trunc.M".into(), format!("{}", p.big_m())),
            ("truncation".into(), self.truncation.to_string()),
            ("time.dt".into(), format!("{}", self.dt)),
            ("time.t_end".into(), format!("{}", self.horizon())),
            ("time.method".into(), self.method.to_string()),
            ("init.gamma".into(), format!("{}", self.init.gamma)),
            ("init.delta".into(), format!("{}", self.init.delta)),
            ("init.alpha0".into(), format!("{}", self.init.alpha0)),
            ("init.amplitude".into(), format!("{}", self.init.amplitude)),
            ("code_version".into(), env!("CARGO_PKG_VERSION").to_string()),
        ];
        if !self.norms.is_empty() {
            m.push(("norms".into(), self.norms.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(",")));
        }
        m
    }
}
