use crate::error::{Error, Result};

/// Allowed excess over a fitted constant on fresh data.
pub const VIOLATION_FACTOR: f64 = 1.05;
/// Allowed relative drift of a fitted constant under refinement.
pub const STABILITY_TOLERANCE: f64 = 0.2;

/// Least-squares line through `(log10 x, log10 y)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogLogFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual in decades.
    pub rms_residual: f64,
}

pub fn fit_loglog(x: &[f64], y: &[f64]) -> Result<LogLogFit> {
    if x.len() != y.len() {
        return Err(Error::ShapeMismatch { expected: x.len(), got: y.len() });
    }
    if x.len() < 2 {
        return Err(Error::InvalidParameter("a slope fit needs at least 2 points".into()));
    }
    if x.iter().chain(y).any(|v| !(*v > 0.0) || !v.is_finite()) {
        return Err(Error::InvalidParameter("log-log fit needs positive finite data".into()));
    }
    let lx: Vec<f64> = x.iter().map(|v| v.log10()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.log10()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParameter("log-log fit needs distinct abscissae".into()));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = lx.iter().zip(&ly).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    Ok(LogLogFit { slope, intercept, rms_residual: (rss / n).sqrt() })
}

/// Outcome of the calibrate / test / refine protocol for an inequality
/// `lhs ≤ C rhs` with unknown `C`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConstantCheck {
    /// Largest ratio on the calibration set.
    pub fitted: f64,
    /// Largest ratio on the held-out set.
    pub worst_test: f64,
    /// Constant refitted on the refined grid, if supplied.
    pub refined: Option<f64>,
}

impl ConstantCheck {
    pub fn holds(&self) -> bool {
        self.worst_test <= VIOLATION_FACTOR * self.fitted
    }

    pub fn stable(&self) -> bool {
        self.refined.is_none_or(|r| (r / self.fitted - 1.0).abs() <= STABILITY_TOLERANCE)
    }

    pub fn passed(&self) -> bool {
        self.fitted.is_finite() && self.holds() && self.stable()
    }
}

fn max_ratio(r: &[f64]) -> Result<f64> {
    if r.is_empty() || r.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(Error::InvalidParameter("constant fit needs nonempty finite nonnegative ratios".into()));
    }
    Ok(r.iter().copied().fold(0.0, f64::max))
}

pub fn check_constant(calibration: &[f64], test: &[f64], refined: Option<&[f64]>) -> Result<ConstantCheck> {
    Ok(ConstantCheck {
        fitted: max_ratio(calibration)?,
        worst_test: max_ratio(test)?,
        refined: refined.map(max_ratio).transpose()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let x = [1.0, 2.0, 4.0, 8.0];
        let y: Vec<f64> = x.iter().map(|v: &f64| 3.0 * v.powf(-1.5)).collect();
        let f = fit_loglog(&x, &y).unwrap();
        assert!((f.slope + 1.5).abs() < 1e-14);
        assert!((f.intercept - 3f64.log10()).abs() < 1e-14);
        assert!(f.rms_residual < 1e-14);
        assert!(fit_loglog(&[1.0], &[1.0]).is_err());
        assert!(fit_loglog(&[1.0, 2.0], &[1.0, -1.0]).is_err());
    }

    #[test]
    fn residual_measures_scatter() {
        let f = fit_loglog(&[1.0, 10.0, 100.0], &[1.0, 100.0, 100.0]).unwrap();
        assert!(f.rms_residual > 0.2);
    }

    #[test]
    fn constant_protocol() {
        let c = check_constant(&[1.0, 2.0], &[2.05], Some(&[2.3])).unwrap();
        assert!(c.holds() && c.stable() && c.passed());
        let c = check_constant(&[1.0, 2.0], &[2.2], None).unwrap();
        assert!(!c.holds());
        let c = check_constant(&[2.0], &[1.0], Some(&[2.5])).unwrap();
        assert!(!c.stable());
        assert!(check_constant(&[], &[1.0], None).is_err());
    }
}
