use rand::Rng;

use crate::analysis::{lebesgue_norm, time_lebesgue, DyadicBlocks, NormSpec};
use crate::dynamics::{InitKind, LinearFlow, Propagator, PropagatorKind};
use crate::eigen::{EigenTable, Pi};
use crate::error::{Error, Result};
use crate::multipliers::{freq_truncate, leray_project, osc_project, qg_from_potential};
use crate::spectral::{rng_from_seed, Grid, PhysicalField, SpectralField, SpectralField4};

use super::convergence::{assemble, run_points};
use super::plan::{SweepKind, SweepPlan, SweepPoint};
use super::record::NormRecorder;
use super::report::ExperimentReport;

/// Packet width relative to a `2π` box.
pub const PACKET_WIDTH: f64 = 0.35;
/// Samples on `[INITIAL_LAYER ε, T]`.
pub const COARSE_SAMPLES: usize = 400;
/// Samples resolving the initial layer `[0, INITIAL_LAYER ε]`.
pub const LAYER_SAMPLES: usize = 40;
pub const INITIAL_LAYER: f64 = 5.0;
/// Block norms are taken on every layer sample and every `BLOCK_STRIDE`-th
/// coarse sample.
pub const BLOCK_STRIDE: usize = 4;

/// `‖·‖_{L²_T L^∞}` of the monitored field.
pub const L2_LINF: &str = "L2T_Linf";

/// Chemin–Lerner variants recorded on every sweep.
pub fn chemin_lerner_variants() -> [NormSpec; 2] {
    [NormSpec::besov(0.0, 6.0, 2.0).in_time(2.0), NormSpec::besov(0.0, 48.0, 2.0).in_time(2.0)]
}

fn packet_width(grid: &Grid) -> f64 {
    PACKET_WIDTH * grid.box_length() / (2.0 * std::f64::consts::PI)
}

/// Periodized Gaussian bump of width `PACKET_WIDTH` at a seeded centre.
fn bump<const C: usize>(grid: &Grid, seed: u64) -> SpectralField<C> {
    let mut rng = rng_from_seed(seed);
    let l = grid.box_length();
    let centre: [f64; 3] = std::array::from_fn(|_| rng.random_range(0.0..l));
    let weights: [f64; C] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
    let s2 = packet_width(grid).powi(2);
    let phys = PhysicalField::<C>::from_fn(grid, |x| {
        let r2: f64 = (0..3)
            .map(|i| {
                let d = (x[i] - centre[i]).rem_euclid(l);
                d.min(l - d).powi(2)
            })
            .sum();
        let b = (-0.5 * r2 / s2).exp();
        std::array::from_fn(|c| weights[c] * b)
    });
    SpectralField::from_physical(&phys).0.dealiased()
}

/// Localized truncated data: oscillating (`Ω = 0`) for every family except
/// `qg_random`, which gives a QG packet.
pub fn packet(grid: &Grid, seed: u64, family: InitKind, froude: f64, r: f64, big_r: f64) -> Result<SpectralField4> {
    let raw = match family {
        InitKind::QgRandom => qg_from_potential(&bump::<1>(grid, seed), froude),
        _ => osc_project(&leray_project(&bump::<4>(grid, seed)), froude),
    };
    let mut f = freq_truncate(&raw.dealiased(), r, big_r)?;
    let n = f.l2_norm();
    if n == 0.0 {
        return Err(Error::Experiment("packet vanishes under the truncation".into()));
    }
    f.scale(grid.volume().sqrt() / n);
    Ok(f)
}

/// Linear solve at one point. Oscillating packets are monitored through
/// `ℙ₃₊₄ P_{r,R} f(t)`, QG packets through `P_{r,R} f(t)` itself.
pub(super) fn strichartz_point(plan: &SweepPlan, pt: &SweepPoint, kind: PropagatorKind) -> Result<Vec<f64>> {
    let params = plan.truncation.apply(&pt.params)?;
    let f0 = packet(&pt.grid, plan.seed, plan.family, params.froude(), params.r_eps(), params.big_r_eps())?;
    let mut g = match plan.family {
        InitKind::QgRandom => f0,
        _ => EigenTable::new(&pt.grid, &params)?.project(&f0, Pi::ThreeFour)?,
    };
    let layer = (INITIAL_LAYER * params.epsilon()).min(0.5 * pt.t_end);
    let h_fine = layer / LAYER_SAMPLES as f64;
    let h_coarse = (pt.t_end - layer) / COARSE_SAMPLES as f64;
    let fine = Propagator::new(kind, &pt.grid, &params, h_fine)?;
    let coarse = Propagator::new(kind, &pt.grid, &params, h_coarse)?;
    let blocks = DyadicBlocks::new(&pt.grid);
    let mut recorders = chemin_lerner_variants()
        .into_iter()
        .chain(plan.norms.iter().copied())
        .map(|n| NormRecorder::new(n, params.nu0()))
        .collect::<Result<Vec<_>>>()?;
    let mut times = Vec::with_capacity(LAYER_SAMPLES + COARSE_SAMPLES + 1);
    let mut linf = Vec::with_capacity(times.capacity());
    let mut t = 0.0;
    for k in 0..=(LAYER_SAMPLES + COARSE_SAMPLES) {
        if k > 0 {
            if k <= LAYER_SAMPLES {
                g = fine.exp_full(&g);
                t = k as f64 * h_fine;
            } else {
                g = coarse.exp_full(&g);
                t = layer + (k - LAYER_SAMPLES) as f64 * h_coarse;
            }
        }
        times.push(t);
        linf.push(lebesgue_norm(&g, f64::INFINITY)?);
        let block_sample = k <= LAYER_SAMPLES || (k - LAYER_SAMPLES) % BLOCK_STRIDE == 0;
        let ps: Vec<f64> = recorders.iter().filter_map(|r| r.block_exponent()).collect();
        let mut per_p = if block_sample { blocks.lp_norms_multi(&g, &ps)? } else { Vec::new() }.into_iter();
        for r in &mut recorders {
            if r.block_exponent().is_none() {
                r.push(t, &g, Some(&blocks))?;
            } else if block_sample {
                r.push_blocks(t, per_p.next().unwrap_or_default());
            }
        }
    }
    let mut out = vec![time_lebesgue(&times, &linf, 2.0)];
    for r in &recorders {
        out.push(r.value()?);
    }
    Ok(out)
}

/// Dispersive decay of linear oscillating solutions at fixed truncation.
pub fn strichartz_sweep(plan: &SweepPlan) -> Result<ExperimentReport> {
    if plan.kind != SweepKind::Strichartz {
        return Err(Error::Experiment(format!("strichartz_sweep given a {} plan", plan.kind)));
    }
    plan.validate()?;
    let mut columns = vec![L2_LINF.to_string()];
    columns.extend(chemin_lerner_variants().iter().chain(&plan.norms).map(|n| n.to_string()));
    let rows = run_points(plan, columns.len(), |pt| strichartz_point(plan, pt, PropagatorKind::FullPe))?;
    assemble(plan, columns, rows)
}
