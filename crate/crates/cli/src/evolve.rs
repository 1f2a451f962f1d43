use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use qgpe::dynamics::{build_initial, DiagnosticRow, Model, RunState, TimeScheme};
use qgpe::spectral::{write_atomic, Snapshot};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

pub const DIAGNOSTICS_FILE: &str = "diagnostics.tsv";
pub const BLOWUP_FILE: &str = "blowup_report.txt";

pub fn snapshot_name(step: u64) -> String {
    format!("snap_{step:08}.bin")
}

fn global_step(t: f64, dt: f64) -> u64 {
    (t / dt).round() as u64
}

fn diagnostics_text(rows: &[DiagnosticRow]) -> String {
    let mut s = String::from(DiagnosticRow::HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&r.to_line());
        s.push('\n');
    }
    s
}

fn write_snapshot(dir: &Path, run: &RunState, dt: f64) -> CliResult<PathBuf> {
    let path = dir.join(snapshot_name(global_step(run.time(), dt)));
    run.snapshot()?.write(&path)?;
    Ok(path)
}

/// Outcome of a completed run.
#[derive(Debug)]
pub struct EvolveSummary {
    pub steps: u64,
    pub t: f64,
    pub snapshots: Vec<PathBuf>,
    pub last: DiagnosticRow,
}

/// Advances the primitive system from the configured data, or from
/// `resume`, until `time.t_end`. Writes diagnostics, snapshots every
/// `output.snapshot_every` steps (0: none in between) and the final state.
pub fn evolve(cfg: &RunConfig, resume: Option<&Path>, verbose: bool) -> CliResult<EvolveSummary> {
    let grid = cfg.grid();
    let scheme = TimeScheme::new(cfg.dt, cfg.t_end, cfg.method).map_err(|e| CliError::Config(e.to_string()))?;
    let delta = cfg.init.delta;
    let mut run = match resume {
        Some(path) => {
            let snap = Snapshot::read(path)?;
            if snap.grid() != &grid {
                return Err(CliError::Config(format!(
                    "snapshot {} is on a {:?} grid of side {}, config asks for n = {} and box {}",
                    path.display(),
                    snap.grid().dims(),
                    snap.grid().box_length(),
                    cfg.n,
                    cfg.box_length
                )));
            }
            if snap.time > cfg.t_end + 1e-9 * cfg.dt {
                return Err(CliError::Config(format!("snapshot time {} is past time.t_end = {}", snap.time, cfg.t_end)));
            }
            RunState::resume(&snap, cfg.params, scheme, Model::Pe, delta)?
        }
        None => {
            let data = build_initial(&grid, &cfg.params, &cfg.init)?;
            RunState::new(data.u0, cfg.params, scheme, Model::Pe, delta)?
        }
    };
    let dir = &cfg.out_dir;
    fs::create_dir_all(dir).map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", dir.display())))?;
    let mut snapshots = Vec::new();
    if resume.is_none() {
        snapshots.push(write_snapshot(dir, &run, cfg.dt)?);
    }
    let every = cfg.snapshot_every;
    let mut write_failure = None;
    let outcome = run.run(|r| {
        if verbose {
            eprintln!("{}", r.diagnostics().last().map(|d| d.to_line()).unwrap_or_default());
        }
        if every > 0 && global_step(r.time(), cfg.dt) % every == 0 && !r.finished() && write_failure.is_none() {
            match write_snapshot(dir, r, cfg.dt) {
                Ok(p) => snapshots.push(p),
                Err(e) => write_failure = Some(e),
            }
        }
        Ok(())
    });
    if let Some(e) = write_failure {
        return Err(e);
    }
    write_atomic(&dir.join(DIAGNOSTICS_FILE), diagnostics_text(run.diagnostics()).as_bytes())?;
    if let Err(e) = outcome {
        let err = CliError::from(e);
        if let CliError::BlowUp(what) = &err {
            let snap = write_snapshot(dir, &run, cfg.dt)?;
            let report = blowup_report(&run, what, &snap);
            write_atomic(&dir.join(BLOWUP_FILE), report.as_bytes())?;
            return Err(CliError::BlowUp(report));
        }
        return Err(err);
    }
    if run.steps_taken() > 0 || resume.is_some() {
        let last = write_snapshot(dir, &run, cfg.dt)?;
        if snapshots.last() != Some(&last) {
            snapshots.push(last);
        }
    }
    let last = *run.diagnostics().last().expect("initial record");
    Ok(EvolveSummary { steps: run.steps_taken(), t: run.time(), snapshots, last })
}

fn blowup_report(run: &RunState, what: &str, snap: &Path) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{what}");
    let _ = writeln!(s, "last good state: t = {}, steps = {}", run.time(), run.steps_taken());
    if let Some(d) = run.diagnostics().last() {
        let _ = writeln!(s, "{}", DiagnosticRow::HEADER);
        let _ = writeln!(s, "{}", d.to_line());
    }
    let _ = write!(s, "final state written to {}", snap.display());
    s
}
