use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::spectral::SpectralField;

/// Largest admissible CFL safety factor.
pub const MAX_CFL_SAFETY: f64 = 0.8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Integrating-factor RK4 in the frame of the exact linear propagator.
    IfRk4,
    /// Second-order exponential time differencing.
    EtdRk2,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::IfRk4 => "if-rk4",
            Method::EtdRk2 => "etd-rk2",
        })
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "if-rk4" | "ifrk4" | "if_rk4" => Ok(Method::IfRk4),
            "etd-rk2" | "etdrk2" | "etd_rk2" => Ok(Method::EtdRk2),
            other => Err(Error::InvalidParameter(format!("unknown time method '{other}' (if-rk4 or etd-rk2)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeScheme {
    pub dt: f64,
    pub t_end: f64,
    pub method: Method,
    pub cfl_safety: f64,
}

impl TimeScheme {
    pub fn new(dt: f64, t_end: f64, method: Method) -> Result<Self> {
        let s = Self { dt, t_end, method, cfl_safety: MAX_CFL_SAFETY };
        s.validate()?;
        Ok(s)
    }

    pub fn with_cfl_safety(mut self, c: f64) -> Result<Self> {
        self.cfl_safety = c;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidParameter(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::InvalidParameter(format!("t_end must be nonnegative, got {}", self.t_end)));
        }
        if !(self.cfl_safety > 0.0 && self.cfl_safety <= MAX_CFL_SAFETY) {
            return Err(Error::InvalidParameter(format!(
                "cfl_safety must lie in (0, {MAX_CFL_SAFETY}], got {}",
                self.cfl_safety
            )));
        }
        Ok(())
    }

    /// Step count reaching `t_end`; the last step is not shortened, so
    /// `t_end` should be a multiple of `dt`.
    pub fn steps(&self) -> usize {
        (self.t_end / self.dt - 1e-9).ceil().max(0.0) as usize
    }
}

/// A vector space of states.
pub trait StateSpace: Clone {
    /// `self += a x`.
    fn axpy(&mut self, a: f64, x: &Self);
}

impl<const C: usize> StateSpace for SpectralField<C> {
    fn axpy(&mut self, a: f64, x: &Self) {
        self.add_scaled(a, x);
    }
}

impl<S: StateSpace> StateSpace for Vec<S> {
    fn axpy(&mut self, a: f64, x: &Self) {
        assert_eq!(self.len(), x.len(), "bundle size mismatch");
        for (s, xi) in self.iter_mut().zip(x) {
            s.axpy(a, xi);
        }
    }
}

/// Exact flow of the stiff linear part for one fixed step `h`.
pub trait LinearFlow<S> {
    fn step(&self) -> f64;
    /// `e^{hL} s`.
    fn exp_full(&self, s: &S) -> S;
    /// `e^{hL/2} s`.
    fn exp_half(&self, s: &S) -> S;
    /// `φ1(hL) s`.
    fn phi1(&self, s: &S) -> S;
    /// `φ2(hL) s`.
    fn phi2(&self, s: &S) -> S;
}

fn combo<S: StateSpace>(base: &S, terms: &[(f64, &S)]) -> S {
    let mut out = base.clone();
    for (a, x) in terms {
        out.axpy(*a, x);
    }
    out
}

/// One integrating-factor RK4 step (Lawson form) for `y' = Ly + N(t, y)`.
pub fn if_rk4_step<S: StateSpace, L: LinearFlow<S>>(
    lin: &L,
    t: f64,
    y: &S,
    mut n: impl FnMut(f64, &S) -> Result<S>,
) -> Result<S> {
    let h = lin.step();
    let k1 = n(t, y)?;
    let y_half = lin.exp_half(y);
    let k2 = n(t + 0.5 * h, &lin.exp_half(&combo(y, &[(0.5 * h, &k1)])))?;
    let k3 = n(t + 0.5 * h, &combo(&y_half, &[(0.5 * h, &k2)]))?;
    let ek3 = lin.exp_half(&k3);
    let k4 = n(t + h, &combo(&lin.exp_full(y), &[(h, &ek3)]))?;
    let mut out = lin.exp_full(&combo(y, &[(h / 6.0, &k1)]));
    let mid = lin.exp_half(&combo(&k2, &[(1.0, &k3)]));
    out.axpy(h / 3.0, &mid);
    out.axpy(h / 6.0, &k4);
    Ok(out)
}

/// One ETD-RK2 step (Cox–Matthews).
pub fn etd_rk2_step<S: StateSpace, L: LinearFlow<S>>(
    lin: &L,
    t: f64,
    y: &S,
    mut n: impl FnMut(f64, &S) -> Result<S>,
) -> Result<S> {
    let h = lin.step();
    let n0 = n(t, y)?;
    let a = combo(&lin.exp_full(y), &[(h, &lin.phi1(&n0))]);
    let mut diff = n(t + h, &a)?;
    diff.axpy(-1.0, &n0);
    Ok(combo(&a, &[(h, &lin.phi2(&diff))]))
}

pub fn scheme_step<S: StateSpace, L: LinearFlow<S>>(
    method: Method,
    lin: &L,
    t: f64,
    y: &S,
    n: impl FnMut(f64, &S) -> Result<S>,
) -> Result<S> {
    match method {
        Method::IfRk4 => if_rk4_step(lin, t, y, n),
        Method::EtdRk2 => etd_rk2_step(lin, t, y, n),
    }
}

/// Exponential trapezoid for `y' = Ly + g(t)` with `g` linear on the step:
/// `y1 = e^{hL} y0 + h[(φ1 - φ2) g0 + φ2 g1]`.
pub fn duhamel_step<S: StateSpace, L: LinearFlow<S>>(lin: &L, y: &S, g0: &S, g1: &S) -> S {
    let h = lin.step();
    let mut out = lin.exp_full(y);
    let mut d = g1.clone();
    d.axpy(-1.0, g0);
    out.axpy(h, &lin.phi1(g0));
    out.axpy(h, &lin.phi2(&d));
    out
}
