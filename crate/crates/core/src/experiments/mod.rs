//! Parameter sweeps turning the convergence and dispersion estimates into
//! measured log-log slopes.
//!
//! A [`SweepPlan`] fixes every setting but one; each sweep point runs
//! independently (in parallel) and the results are merged into an
//! [`ExperimentReport`] ordered by parameter value. Failed points are kept
//! and flagged, never dropped.

mod convergence;
mod plan;
mod record;
mod report;
mod spectra;
mod strichartz;

pub use convergence::{convergence_sweep, ES_DELTA, L2_LINF_GAP, SUP_HS_DELTA, SUP_L2_GAP, SUP_L2_WAVES};
pub use plan::{
    default_horizon, dyadic_values, SweepKind, SweepParameter, SweepPlan, SweepPoint, Truncation, LOG_SPACING_TOL,
    MIN_FIT_POINTS,
};
pub use record::NormRecorder;
pub use report::{fit_series, ExperimentReport, NamedFit, PointStatus, ReportRow};
pub use spectra::{
    eigen_accuracy_sweep, eigen_gaps, in_truncation, projector_smallness_sweep, projector_test_field, LAMBDA_GAP,
    LAMBDA_XI_FIT, MODE_SCALES, MU_GAP, PROJECTOR_RATIO, REFERENCE_MODE,
};
pub use strichartz::{
    chemin_lerner_variants, packet, strichartz_sweep, BLOCK_STRIDE, COARSE_SAMPLES, INITIAL_LAYER, L2_LINF, LAYER_SAMPLES,
    PACKET_WIDTH,
};

use crate::error::Result;

/// Dispatches on the plan's experiment kind.
pub fn run_sweep(plan: &SweepPlan) -> Result<ExperimentReport> {
    match plan.kind {
        SweepKind::Convergence => convergence_sweep(plan),
        SweepKind::Strichartz => strichartz_sweep(plan),
        SweepKind::EigenAccuracy => eigen_accuracy_sweep(plan),
        SweepKind::ProjectorSmallness => projector_smallness_sweep(plan),
    }
}
