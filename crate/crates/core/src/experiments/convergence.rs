use std::sync::Arc;

use rayon::prelude::*;

use crate::analysis::{lebesgue_norm, time_lebesgue, EnergyAccumulator};
use crate::dynamics::{
    build_initial, compute_g, duhamel_step, reproject, wave_forcing, wave_initial, Model, Propagator, PropagatorKind,
    RunState, TimeScheme, WaveFilter,
};
use crate::eigen::EigenTable;
use crate::error::{Error, Result};
use crate::spectral::SpectralField4;

use super::plan::{SweepKind, SweepPlan, SweepPoint};
use super::record::NormRecorder;
use super::report::{ExperimentReport, PointStatus, ReportRow};

/// `sup_t ‖U_ε - Ũ_QG‖_{L²}`.
pub const SUP_L2_GAP: &str = "sup_L2_U_minus_QG";
/// `‖U_ε - Ũ_QG‖_{L²_T L^∞}`.
pub const L2_LINF_GAP: &str = "L2T_Linf_U_minus_QG";
/// `sup_t ‖δ_ε‖_{Ḣ^{1/2}}`.
pub const SUP_HS_DELTA: &str = "sup_Hs_half_delta";
/// `‖δ_ε‖_{Ė^{1/2}}`.
pub const ES_DELTA: &str = "Es_half_delta";
/// `sup_t ‖W_ε‖_{L²}`.
pub const SUP_L2_WAVES: &str = "sup_L2_W";

const BASE_COLUMNS: [&str; 5] = [SUP_L2_GAP, L2_LINF_GAP, SUP_HS_DELTA, ES_DELTA, SUP_L2_WAVES];

/// Monitored quantities at one time.
struct Monitor {
    times: Vec<f64>,
    gap_l2: f64,
    gap_linf: Vec<f64>,
    delta_hs: f64,
    delta_energy: EnergyAccumulator,
    waves_l2: f64,
    extra: Vec<NormRecorder>,
}

impl Monitor {
    fn push(&mut self, t: f64, u: &SpectralField4, q: &SpectralField4, w: &SpectralField4) -> Result<()> {
        let gap = u - q;
        let delta = &gap - w;
        self.times.push(t);
        self.gap_l2 = self.gap_l2.max(gap.l2_norm());
        self.gap_linf.push(lebesgue_norm(&gap, f64::INFINITY)?);
        self.delta_hs = self.delta_hs.max(crate::analysis::sobolev_norm(&delta, 0.5));
        self.delta_energy.push(t, &delta);
        self.waves_l2 = self.waves_l2.max(w.l2_norm());
        for r in &mut self.extra {
            r.push(t, &delta, None)?;
        }
        Ok(())
    }

    fn values(&self) -> Result<Vec<f64>> {
        let mut v = vec![
            self.gap_l2,
            time_lebesgue(&self.times, &self.gap_linf, 2.0),
            self.delta_hs,
            self.delta_energy.value(),
            self.waves_l2,
        ];
        for r in &self.extra {
            v.push(r.value()?);
        }
        Ok(v)
    }
}

/// Runs `U_ε` (PE), `Ũ_QG` (limit system) and `W_ε` (filtered waves, Duhamel
/// along the limit trajectory) in lockstep and monitors `δ_ε = U_ε - Ũ_QG - W_ε`.
fn convergence_point(plan: &SweepPlan, pt: &SweepPoint) -> Result<Vec<f64>> {
    let data = build_initial(&pt.grid, &pt.params, &pt.init)?;
    let table = if pt.params.equal_viscosity() { None } else { Some(EigenTable::new(&pt.grid, &pt.params)?) };
    let filter = table.as_ref().map_or(WaveFilter::Full, WaveFilter::Truncated);
    let scheme = TimeScheme::new(pt.dt, pt.t_end, plan.method)?;
    let prop = Arc::new(Propagator::new(PropagatorKind::FullPe, &pt.grid, &pt.params, pt.dt)?);
    let delta = pt.init.delta;
    let mut pe = RunState::with_propagator(data.u0.clone(), 0.0, pt.params, scheme, Model::Pe, delta, prop.clone())?;
    let mut qg = RunState::new(data.qg_limit.clone(), pt.params, scheme, Model::QgVelocity, delta)?;
    let mut w = wave_initial(&data.osc, filter)?;
    reproject(&mut w);
    let mut g0 = wave_forcing(&compute_g(qg.state(), &pt.params)?, filter)?;
    let extra = plan.norms.iter().map(|n| NormRecorder::new(*n, pt.params.nu0())).collect::<Result<Vec<_>>>()?;
    let mut mon = Monitor {
        times: Vec::new(),
        gap_l2: 0.0,
        gap_linf: Vec::new(),
        delta_hs: 0.0,
        delta_energy: EnergyAccumulator::new(0.5, pt.params.nu0()),
        waves_l2: 0.0,
        extra,
    };
    mon.push(0.0, pe.state(), qg.state(), &w)?;
    while !pe.finished() {
        pe.step()?;
        qg.step()?;
        let g1 = wave_forcing(&compute_g(qg.state(), &pt.params)?, filter)?;
        w = duhamel_step(&*prop, &w, &g0, &g1);
        reproject(&mut w);
        g0 = g1;
        mon.push(pe.time(), pe.state(), qg.state(), &w)?;
    }
    mon.values()
}

fn status_of(e: Error) -> PointStatus {
    match e {
        Error::BlowUp { .. } => PointStatus::BlowUp(e.to_string()),
        other => PointStatus::Failed(other.to_string()),
    }
}

/// Runs every sweep point. A point whose run fails is kept with its status
/// and NaN values; the remaining points still run.
pub(super) fn run_points(
    plan: &SweepPlan,
    columns: usize,
    f: impl Fn(&SweepPoint) -> Result<Vec<f64>> + Sync,
) -> Result<Vec<ReportRow>> {
    let points = plan.values.iter().map(|v| plan.point(*v)).collect::<Result<Vec<_>>>()?;
    Ok(points
        .par_iter()
        .map(|pt| match f(pt) {
            Ok(values) => ReportRow { value: pt.value, values, status: PointStatus::Ok },
            Err(e) => ReportRow { value: pt.value, values: vec![f64::NAN; columns], status: status_of(e) },
        })
        .collect())
}

pub(super) fn assemble(plan: &SweepPlan, columns: Vec<String>, rows: Vec<ReportRow>) -> Result<ExperimentReport> {
    let mut report = ExperimentReport::new(&plan.kind.to_string(), &plan.parameter.to_string(), columns, plan.metadata());
    for r in rows {
        report.push(r)?;
    }
    report.fit_columns();
    Ok(report)
}

/// ε-convergence of the primitive system to its quasi-geostrophic limit.
pub fn convergence_sweep(plan: &SweepPlan) -> Result<ExperimentReport> {
    if plan.kind != SweepKind::Convergence {
        return Err(Error::Experiment(format!("convergence_sweep given a {} plan", plan.kind)));
    }
    plan.validate()?;
    let mut columns: Vec<String> = BASE_COLUMNS.iter().map(|s| s.to_string()).collect();
    columns.extend(plan.norms.iter().map(|n| format!("delta:{n}")));
    let rows = run_points(plan, columns.len(), |pt| convergence_point(plan, pt))?;
    assemble(plan, columns, rows)
}
