//! `qgpe`: invariant checks, single runs, parameter sweeps and eigen reports.
//!
//! Exit codes: 0 ok, 1 invariant failure or other error, 2 configuration
//! error, 3 blow-up.

mod check;
mod config;
mod eigen_report;
mod error;
mod evolve;
mod plan;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{RunConfig, Settings, RUN_DEFAULTS, SEED_ENV};
use error::{CliError, CliResult};

#[derive(Parser, Debug)]
#[command(name = "qgpe", version, about = "Rotating stratified Boussinesq flows and their quasi-geostrophic limit")]
struct Cli {
    /// Configuration file (`key = value` lines).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Override one setting; repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    sets: Vec<String>,
    /// Output directory, overriding `output.dir`.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Worker threads for sweeps and mode-parallel kernels.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    /// Echo the resolved settings to stderr.
    #[arg(long, short, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the invariant suite on the configured grid and parameters.
    Check,
    /// Evolve the primitive system and write diagnostics and snapshots.
    Evolve {
        /// Continue from a snapshot instead of the configured initial data.
        #[arg(long, value_name = "SNAP")]
        resume: Option<PathBuf>,
    },
    /// Run a parameter sweep described by a plan file.
    Sweep {
        /// Plan file: run keys plus `sweep.*` keys.
        #[arg(value_name = "PLAN")]
        plan: PathBuf,
    },
    /// Tabulate exact and leading-order eigenvalues on a list of modes.
    EigenReport {
        /// Integer mode `k1,k2,k3`; repeatable.
        #[arg(long = "mode", value_name = "K1,K2,K3")]
        modes: Vec<String>,
    },
}

fn layered(mut s: Settings, cli: &Cli, files: &[&Path]) -> CliResult<Settings> {
    if let Some(c) = &cli.config {
        s.load_file(c)?;
    }
    for f in files {
        s.load_file(f)?;
    }
    s.load_env_seed(std::env::var(SEED_ENV).ok())?;
    for o in &cli.sets {
        s.apply_override(o)?;
    }
    Ok(s)
}

fn run_config(cli: &Cli) -> CliResult<RunConfig> {
    let s = layered(Settings::new(RUN_DEFAULTS, &[]), cli, &[])?;
    if cli.verbose {
        eprint!("{}", s.dump());
    }
    let mut cfg = RunConfig::from_settings(&s)?;
    if let Some(o) = &cli.out {
        cfg.out_dir = o.clone();
    }
    Ok(cfg)
}

fn cmd_check(cli: &Cli) -> CliResult<()> {
    let cfg = run_config(cli)?;
    let groups = check::run_checks(&cfg);
    let mut failed = Vec::new();
    for g in &groups {
        if g.failures.is_empty() {
            println!("PASS {} ({} checks)", g.name, g.checks);
        } else {
            println!("FAIL {} ({} of {} checks)", g.name, g.failures.len(), g.checks);
            for f in &g.failures {
                println!("  {f}");
            }
            failed.push(format!("{}: {}", g.name, g.failures[0]));
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Invariant(failed.join("; ")))
    }
}

fn cmd_evolve(cli: &Cli, resume: Option<&Path>) -> CliResult<()> {
    let cfg = run_config(cli)?;
    let summary = evolve::evolve(&cfg, resume, cli.verbose)?;
    println!("steps = {}", summary.steps);
    println!("t = {}", summary.t);
    println!("{}", qgpe::dynamics::DiagnosticRow::HEADER);
    println!("{}", summary.last.to_line());
    println!("diagnostics: {}", cfg.out_dir.join(evolve::DIAGNOSTICS_FILE).display());
    for s in &summary.snapshots {
        println!("snapshot: {}", s.display());
    }
    Ok(())
}

fn cmd_sweep(cli: &Cli, plan_path: &Path) -> CliResult<()> {
    let s = layered(plan::plan_settings(), cli, &[plan_path])?;
    let (plan, stem) = plan::plan_from_settings(&s)?;
    let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from(&s.get("output.dir").expect("default").value));
    if cli.verbose {
        for (k, v) in plan.metadata() {
            eprintln!("{k} = {v}");
        }
    }
    let report = qgpe::experiments::run_sweep(&plan)?;
    let (tsv, meta) = report.write(&dir, &stem)?;
    for row in &report.rows {
        if !row.status.is_ok() {
            println!("point {} failed: {:?}", row.value, row.status);
        }
    }
    if !plan.fits_slope() {
        println!("flag: {} point(s), no slope fitted", plan.values.len());
    }
    for f in &report.fits {
        match &f.fit {
            Some(fit) => println!("fit {}: slope {:.4} residual {:.4}", f.name, fit.slope, fit.rms_residual),
            None => println!("fit {}: none ({} usable points)", f.name, f.points),
        }
    }
    println!("report: {}", tsv.display());
    println!("metadata: {}", meta.display());
    Ok(())
}

fn cmd_eigen_report(cli: &Cli, modes: &[String]) -> CliResult<()> {
    let cfg = run_config(cli)?;
    let modes = if modes.is_empty() {
        eigen_report::default_modes()
    } else {
        modes.iter().map(|m| eigen_report::parse_mode(m)).collect::<CliResult<_>>()?
    };
    let table = eigen_report::eigen_report(&cfg.params, cfg.box_length, &modes)?;
    print!("{table}");
    if let Some(dir) = &cli.out {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", dir.display())))?;
        qgpe::spectral::write_atomic(&dir.join("eigen_report.tsv"), table.as_bytes())?;
    }
    Ok(())
}

fn run(cli: &Cli) -> CliResult<()> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Config("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Runtime(format!("thread pool: {e}")))?;
    }
    match &cli.command {
        Command::Check => cmd_check(cli),
        Command::Evolve { resume } => cmd_evolve(cli, resume.as_deref()),
        Command::Sweep { plan } => cmd_sweep(cli, plan),
        Command::EigenReport { modes } => cmd_eigen_report(cli, modes),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.code() as u8)
        }
    }
}
