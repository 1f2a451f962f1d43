//! Sweep plan files: a run configuration plus `sweep.*` keys.
//!
//! ```text
//! sweep.kind = strichartz            # convergence | strichartz | eigen-accuracy | projector-smallness
//! sweep.parameter = epsilon          # epsilon | gamma | resolution
//! sweep.values = 0.1, 0.05, 0.025, 0.0125
//! sweep.family = osc_random
//! sweep.norms = hdot:0.5; lp:inf@2   # optional, `;`-separated
//! sweep.truncation = fixed           # optional: fixed | coupled
//! sweep.r = 0.5                      # fixed radii
//! sweep.R = 8
//! sweep.name = strichartz_eps        # optional report file stem
//! ```
//!
//! `time.t_end` is taken from the plan only when set there; otherwise the
//! experiment's default horizon applies.

use qgpe::analysis::NormSpec;
use qgpe::dynamics::InitKind;
use qgpe::experiments::{SweepKind, SweepParameter, SweepPlan, Truncation};

use crate::config::{field_error, RunConfig, Settings, RUN_DEFAULTS};
use crate::error::{CliError, CliResult};

pub const PLAN_KEYS: &[&str] = &[
    "sweep.kind",
    "sweep.parameter",
    "sweep.values",
    "sweep.family",
    "sweep.norms",
    "sweep.truncation",
    "sweep.r",
    "sweep.R",
    "sweep.name",
];

const REQUIRED: [&str; 4] = ["sweep.kind", "sweep.parameter", "sweep.values", "sweep.family"];

pub fn plan_settings() -> Settings {
    Settings::new(RUN_DEFAULTS, PLAN_KEYS)
}

fn parse_values(text: &str) -> Result<Vec<f64>, String> {
    text.split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|e| format!("cannot parse value `{}`: {e}", v.trim())))
        .collect()
}

fn parse_norms(text: &str) -> Result<Vec<NormSpec>, String> {
    text.split(';')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<NormSpec>().map_err(|e| e.to_string()))
        .collect()
}

/// A validated plan and the stem of its report files.
pub fn plan_from_settings(s: &Settings) -> CliResult<(SweepPlan, String)> {
    for key in REQUIRED {
        if s.get(key).is_none() {
            return Err(CliError::Config(format!("plan: field `{key}` is required")));
        }
    }
    let kind: SweepKind = s.parse("sweep.kind")?;
    let parameter: SweepParameter = s.parse("sweep.parameter")?;
    let values = s.parse_with("sweep.values", parse_values)?;
    let family: InitKind = s.parse("sweep.family")?;
    let run = RunConfig::from_settings(s)?;
    let mut plan = SweepPlan::new(kind, parameter, values, family, run.params);
    plan.n = run.n;
    plan.box_length = run.box_length;
    plan.dt = run.dt;
    plan.method = run.method;
    plan.seed = run.init.seed;
    plan.init = run.init;
    plan.t_end = if s.is_set("time.t_end") { Some(run.t_end) } else { None };
    if s.get("sweep.norms").is_some() {
        plan.norms = s.parse_with("sweep.norms", parse_norms)?;
    }
    if let Some(t) = s.get("sweep.truncation") {
        plan.truncation = match t.value.as_str() {
            "coupled" => Truncation::Coupled,
            "fixed" => Truncation::Fixed { r: 0.5, big_r: 8.0 },
            other => return Err(field_error(&t.origin, "sweep.truncation", format!("expected fixed or coupled, got `{other}`"))),
        };
    }
    if let Truncation::Fixed { r, big_r } = &mut plan.truncation {
        if s.get("sweep.r").is_some() {
            *r = s.parse("sweep.r")?;
        }
        if s.get("sweep.R").is_some() {
            *big_r = s.parse("sweep.R")?;
        }
    } else if s.get("sweep.r").is_some() || s.get("sweep.R").is_some() {
        return Err(field_error(&s.origin("sweep.r"), "sweep.r", "fixed radii given with coupled truncation"));
    }
    plan.validate().map_err(|e| field_error(&s.origin("sweep.values"), "sweep", e))?;
    let stem = s.get("sweep.name").map_or_else(|| kind.to_string(), |n| n.value.clone());
    if stem.contains(['/', '\\']) || stem.starts_with('.') {
        return Err(field_error(&s.origin("sweep.name"), "sweep.name", "must be a plain file stem"));
    }
    Ok((plan, stem))
}
