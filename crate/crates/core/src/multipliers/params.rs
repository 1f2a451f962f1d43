use crate::error::{Error, Result};

/// Physical and truncation parameters.
///
/// `epsilon` is the Rossby number, `froude` the Froude number, `nu`/`nu_prime`
/// the kinematic viscosity and thermal diffusivity. `m` and `big_m` set the
/// frequency truncation radii `r = ε^m`, `R = ε^{-M}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysParams {
    epsilon: f64,
    froude: f64,
    nu: f64,
    nu_prime: f64,
    m: f64,
    big_m: f64,
}

/// Smallest admissible `|F - 1|`.
const FROUDE_GAP: f64 = 1e-12;

impl PhysParams {
    pub fn new(epsilon: f64, froude: f64, nu: f64, nu_prime: f64, m: f64, big_m: f64) -> Result<Self> {
        let p = Self { epsilon, froude, nu, nu_prime, m, big_m };
        p.validate_common()?;
        if !(nu > 0.0 && nu.is_finite()) {
            return Err(Error::InvalidParameter(format!("nu must be positive, got {nu}")));
        }
        if !(nu_prime > 0.0 && nu_prime.is_finite()) {
            return Err(Error::InvalidParameter(format!("nu_prime must be positive, got {nu_prime}")));
        }
        Ok(p)
    }

    /// Zero viscosity and diffusivity. Only the skew rotation/stratification
    /// part is left, which is what conservation checks need.
    pub fn inviscid(epsilon: f64, froude: f64) -> Result<Self> {
        let p = Self { epsilon, froude, nu: 0.0, nu_prime: 0.0, m: 0.1, big_m: 0.1 };
        p.validate_common()?;
        Ok(p)
    }

    fn validate_common(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon <= 1.0) {
            return Err(Error::InvalidParameter(format!("epsilon must lie in (0, 1], got {}", self.epsilon)));
        }
        if !(self.froude > 0.0 && self.froude.is_finite()) {
            return Err(Error::InvalidParameter(format!("F must be positive, got {}", self.froude)));
        }
        if (self.froude - 1.0).abs() < FROUDE_GAP {
            return Err(Error::InvalidParameter("F must differ from 1".into()));
        }
        if !(self.m > 0.0 && self.m.is_finite()) || !(self.big_m > 0.0 && self.big_m.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "truncation exponents must be positive, got m = {}, M = {}",
                self.m, self.big_m
            )));
        }
        Ok(())
    }

    /// Exponent constraints `M < 1/4` and `3M + m < 1` used by the general
    /// viscosity results.
    pub fn require_truncation_hypotheses(&self) -> Result<()> {
        if self.big_m >= 0.25 {
            return Err(Error::InvalidParameter(format!("M must be < 1/4, got {}", self.big_m)));
        }
        if 3.0 * self.big_m + self.m >= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "3M + m must be < 1, got {}",
                3.0 * self.big_m + self.m
            )));
        }
        Ok(())
    }

    pub fn with_epsilon(&self, epsilon: f64) -> Result<Self> {
        let p = Self { epsilon, ..*self };
        p.validate_common()?;
        Ok(p)
    }

    pub fn with_viscosity(&self, nu: f64, nu_prime: f64) -> Result<Self> {
        Self::new(self.epsilon, self.froude, nu, nu_prime, self.m, self.big_m)
    }

    pub fn with_truncation(&self, m: f64, big_m: f64) -> Result<Self> {
        let p = Self { m, big_m, ..*self };
        p.validate_common()?;
        Ok(p)
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
    pub fn froude(&self) -> f64 {
        self.froude
    }
    pub fn nu(&self) -> f64 {
        self.nu
    }
    pub fn nu_prime(&self) -> f64 {
        self.nu_prime
    }
    pub fn m(&self) -> f64 {
        self.m
    }
    pub fn big_m(&self) -> f64 {
        self.big_m
    }

    pub fn nu0(&self) -> f64 {
        self.nu.min(self.nu_prime)
    }

    pub fn equal_viscosity(&self) -> bool {
        self.nu == self.nu_prime
    }

    /// Lower truncation radius `r_ε = ε^m`.
    pub fn r_eps(&self) -> f64 {
        self.epsilon.powf(self.m)
    }

    /// Upper truncation radius `R_ε = ε^{-M}`.
    pub fn big_r_eps(&self) -> f64 {
        self.epsilon.powf(-self.big_m)
    }
}
