//! Smooth radial cutoffs and dyadic blocks.

/// Radial cutoff equal to 1 on `[0, a]`, 0 on `[b, ∞)`, smooth and
/// nonincreasing in between. The transition is the usual
/// `h(1-u) / (h(1-u) + h(u))` with `h(u) = exp(-1/u)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CutoffProfile {
    pub inner: f64,
    pub outer: f64,
}

impl Default for CutoffProfile {
    fn default() -> Self {
        Self { inner: 0.75, outer: 4.0 / 3.0 }
    }
}

fn h(u: f64) -> f64 {
    if u <= 0.0 {
        0.0
    } else {
        (-1.0 / u).exp()
    }
}

impl CutoffProfile {
    pub fn eval(&self, t: f64) -> f64 {
        let t = t.abs();
        if t <= self.inner {
            return 1.0;
        }
        if t >= self.outer {
            return 0.0;
        }
        let u = (t - self.inner) / (self.outer - self.inner);
        let a = h(1.0 - u);
        a / (a + h(u))
    }

    /// Annular profile `φ(t) = χ(t/2) - χ(t)`.
    pub fn annulus(&self, t: f64) -> f64 {
        self.eval(0.5 * t) - self.eval(t)
    }
}

/// `χ` with the default radii 3/4 and 4/3.
pub fn chi(t: f64) -> f64 {
    CutoffProfile::default().eval(t)
}

/// Dyadic block symbol `φ(2^{-j} t)`.
pub fn dyadic_symbol(j: i32, t: f64) -> f64 {
    CutoffProfile::default().annulus(t * 2f64.powi(-j))
}

/// Low-frequency symbol `χ(2^{-j} t)` (the operator `S_j`).
pub fn low_pass_symbol(j: i32, t: f64) -> f64 {
    chi(t * 2f64.powi(-j))
}

/// Frequency truncation symbol `χ(|ξ|/R) (1 - χ(|ξ3|/r))`, localizing to
/// `|ξ| <= R`, `|ξ3| >= r`.
pub fn truncation_symbol(r: f64, big_r: f64, xi: [f64; 3]) -> f64 {
    let k = (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt();
    chi(k / big_r) * (1.0 - chi(xi[2].abs() / r))
}
