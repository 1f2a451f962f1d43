use crate::dynamics::InitKind;
use crate::eigen::{build_b, exact_eigen, EigenTable, Pi};
use crate::error::{Error, Result};
use crate::multipliers::{freq_truncate, leray_project, osc_project, qg_from_potential, truncation_symbol};
use crate::spectral::{norm2, seeded_field, SpectralField4};

use super::convergence::{assemble, run_points};
use super::plan::{SweepKind, SweepParameter, SweepPlan};
use super::report::{fit_series, ExperimentReport};

/// Reference direction of the eigenvalue-gap modes.
pub const REFERENCE_MODE: [f64; 3] = [1.0, 2.0, 1.0];
/// Dyadic multiples of [`REFERENCE_MODE`] used for the `|ξ|` scaling; modes
/// outside the truncation support are reported as NaN.
pub const MODE_SCALES: [f64; 4] = [0.375, 0.75, 1.5, 3.0];

pub const LAMBDA_GAP: &str = "lambda_gap";
pub const MU_GAP: &str = "mu_gap";
/// Fit name of the `|ξ|` exponent of the λ gap at the smallest `ε`.
pub const LAMBDA_XI_FIT: &str = "lambda_gap_vs_xi";
pub const PROJECTOR_RATIO: &str = "p2_ratio";

fn scaled(s: f64) -> [f64; 3] {
    REFERENCE_MODE.map(|x| x * s)
}

/// `(|λ - λ_lead|, |μ - μ_lead|)` at one mode, from the cancellation-free
/// corrections of the exact eigen-structure.
pub fn eigen_gaps(xi: [f64; 3], params: &crate::PhysParams) -> Result<(f64, f64)> {
    let e = exact_eigen(&build_b(xi, params)?);
    Ok((e.lambda_correction.norm(), e.mu_correction.abs()))
}

/// Accuracy of the leading-order eigenvalue expansions against `ε` and `|ξ|`.
pub fn eigen_accuracy_sweep(plan: &SweepPlan) -> Result<ExperimentReport> {
    if plan.kind != SweepKind::EigenAccuracy || plan.parameter != SweepParameter::Epsilon {
        return Err(Error::Experiment("eigen_accuracy_sweep needs an eigen-accuracy plan over epsilon".into()));
    }
    plan.validate()?;
    let columns: Vec<String> = [LAMBDA_GAP, MU_GAP]
        .iter()
        .map(|s| s.to_string())
        .chain(MODE_SCALES.iter().map(|s| format!("{LAMBDA_GAP}_x{s}")))
        .collect();
    let rows = run_points(plan, columns.len(), |pt| {
        let (gl, gm) = eigen_gaps(REFERENCE_MODE, &pt.params)?;
        let mut v = vec![gl, gm];
        for s in MODE_SCALES {
            let xi = scaled(s);
            v.push(if in_truncation(xi, &pt.params) { eigen_gaps(xi, &pt.params)?.0 } else { f64::NAN });
        }
        Ok(v)
    })?;
    let mut report = assemble(plan, columns, rows)?;
    if let Some(row) = report.rows.iter().find(|r| r.status.is_ok()) {
        let k: Vec<f64> = MODE_SCALES.iter().map(|s| norm2(scaled(*s)).sqrt()).collect();
        let fit = fit_series(LAMBDA_XI_FIT, &k, &row.values[2..]);
        report.metadata.push(("xi_fit.epsilon".into(), format!("{}", row.value)));
        report.add_fit(fit);
    }
    Ok(report)
}

/// Truncated, divergence-free test field: `Ω = 0` for oscillating families,
/// QG for `qg_random`.
pub fn projector_test_field(plan: &SweepPlan, params: &crate::PhysParams, grid: &crate::Grid) -> Result<SpectralField4> {
    let f = match plan.family {
        InitKind::QgRandom => qg_from_potential(&seeded_field::<1>(grid, plan.seed), params.froude()),
        _ => osc_project(&leray_project(&seeded_field::<4>(grid, plan.seed)), params.froude()),
    };
    freq_truncate(&f, params.r_eps(), params.big_r_eps())
}

/// `‖ℙ₂ f‖ / ‖f‖` against `ε` at fixed truncation radii.
pub fn projector_smallness_sweep(plan: &SweepPlan) -> Result<ExperimentReport> {
    if plan.kind != SweepKind::ProjectorSmallness || plan.parameter != SweepParameter::Epsilon {
        return Err(Error::Experiment("projector_smallness_sweep needs a projector-smallness plan over epsilon".into()));
    }
    plan.validate()?;
    let columns = vec![PROJECTOR_RATIO.to_string()];
    let rows = run_points(plan, 1, |pt| {
        let params = plan.truncation.apply(&pt.params)?;
        let f = projector_test_field(plan, &params, &pt.grid)?;
        let n = f.l2_norm();
        if n == 0.0 {
            return Err(Error::Experiment("test field vanishes under the truncation".into()));
        }
        let p2 = EigenTable::new(&pt.grid, &params)?.project(&f, Pi::Two)?;
        Ok(vec![p2.l2_norm() / n])
    })?;
    assemble(plan, columns, rows)
}

/// Whether `ξ` lies in the support of the truncation at `params`.
pub fn in_truncation(xi: [f64; 3], params: &crate::PhysParams) -> bool {
    truncation_symbol(params.r_eps(), params.big_r_eps(), xi) > 0.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::plan::dyadic_values;
    use crate::PhysParams;

    #[test]
    fn equal_viscosity_gaps_vanish() {
        let p = PhysParams::new(0.01, 0.6, 0.05, 0.05, 0.1, 0.2).unwrap();
        for s in MODE_SCALES {
            let (gl, gm) = eigen_gaps(scaled(s), &p).unwrap();
            assert!(gl < 1e-10 && gm < 1e-10, "{gl} {gm}");
        }
    }

    #[test]
    fn equal_viscosity_projector_ratio_vanishes() {
        let p = PhysParams::new(0.05, 0.6, 0.05, 0.05, 0.1, 0.2).unwrap();
        let mut plan =
            SweepPlan::new(SweepKind::ProjectorSmallness, SweepParameter::Epsilon, dyadic_values(0.04, 3), InitKind::OscRandom, p);
        plan.n = 16;
        let r = projector_smallness_sweep(&plan).unwrap();
        for v in r.column(PROJECTOR_RATIO).unwrap() {
            assert!(v < 1e-11, "{v}");
        }
    }

    #[test]
    fn wrong_plan_kind_is_rejected() {
        let p = PhysParams::new(0.05, 0.6, 0.05, 0.05, 0.1, 0.2).unwrap();
        let plan = SweepPlan::new(SweepKind::Convergence, SweepParameter::Epsilon, vec![0.1], InitKind::OscRandom, p);
        assert!(eigen_accuracy_sweep(&plan).is_err());
        assert!(projector_smallness_sweep(&plan).is_err());
    }

    #[test]
    fn reference_modes_are_inside_generous_truncations() {
        let p = PhysParams::new(1e-3, 0.6, 0.3, 0.1, 0.1, 0.2).unwrap();
        assert!(in_truncation(scaled(2.0), &p));
    }
}
