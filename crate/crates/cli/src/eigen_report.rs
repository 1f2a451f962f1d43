use std::fmt::Write as _;

use qgpe::eigen::{asymptotic_eigenvalues, build_b, exact_eigen};
use qgpe::experiments::MODE_SCALES;
use qgpe::PhysParams;

use crate::error::{CliError, CliResult};

pub const HEADER: &str = "k1\tk2\tk3\tmu0\tmu\tlambda_re\tlambda_im\tmu_lead\tlambda_lead_re\tlambda_lead_im\t\
lambda_gap\tmu_gap\tcondition\twell_separated";

/// Integer modes reported when none are requested.
pub fn default_modes() -> Vec<[f64; 3]> {
    let mut m: Vec<[f64; 3]> = MODE_SCALES.iter().map(|s| [s * 1.0, s * 2.0, s * 1.0]).collect();
    m.extend([[1.0, 0.0, 1.0], [0.0, 0.0, 1.0], [3.0, 1.0, 2.0]]);
    m
}

pub fn parse_mode(text: &str) -> CliResult<[f64; 3]> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Config(format!("--mode `{text}`: {e}")))?;
    match parts[..] {
        [a, b, c] if parts.iter().all(|v| v.is_finite()) && parts.iter().any(|v| *v != 0.0) => Ok([a, b, c]),
        _ => Err(CliError::Config(format!("--mode `{text}`: expected three finite numbers, not all zero"))),
    }
}

/// One row per mode `k`, evaluated at the wavevector `k 2π/L`.
pub fn eigen_report(params: &PhysParams, box_length: f64, modes: &[[f64; 3]]) -> CliResult<String> {
    let kmin = 2.0 * std::f64::consts::PI / box_length;
    let mut out = String::from(HEADER);
    out.push('\n');
    for k in modes {
        let xi = k.map(|v| v * kmin);
        let e = exact_eigen(&build_b(xi, params)?);
        let lead = asymptotic_eigenvalues(xi, params)?;
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{:.12e}\t{:.12e}\t{:.12e}\t{:.12e}\t{:.12e}\t{:.12e}\t{:.12e}\t{:.6e}\t{:.6e}\t{:.6e}\t{}",
            k[0],
            k[1],
            k[2],
            e.mu0,
            e.mu,
            e.lambda.re,
            e.lambda.im,
            lead.mu,
            lead.lambda.re,
            lead.lambda.im,
            e.lambda_correction.norm(),
            e.mu_correction.abs(),
            e.condition,
            e.well_separated
        );
    }
    Ok(out)
}
