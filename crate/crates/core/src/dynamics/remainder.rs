//! Wave filters and the remainder `δ = U - U_QG - W`.
//!
//! The remainder carries eight bilinear forcings
//!
//! ```text
//! F1 = -ℙ(δ·∇δ)  F2 = -ℙ(δ·∇Q)  F3 = -ℙ(Q·∇δ)  F4 = -ℙ(δ·∇W)
//! F5 = -ℙ(W·∇δ)  F6 = -ℙ(Q·∇W)  F7 = -ℙ(W·∇Q)  F8 = -ℙ(W·∇W)
//! ```
//!
//! plus whatever part of `G` the wave filter leaves out. With the full
//! filter (`W` forced by `-G^b`) that is `-G^l`, which is zero when `ν = ν'`.
//! With the truncated filter (`W` forced by `-P_{r,R}ℙ_{3+4}G`) it is
//! `f^b + f^l`, `f^x = -(Id - P_{r,R})G^x - P_{r,R}ℙ2 G^x`.

use super::nonlinear::{advect_sampled, Sampled};
use super::propagator::{BundleFlow, Propagator};
use super::qg::{compute_g, g_from_sampled, GForcing};
use super::scheme::{duhamel_step, scheme_step, Method};
use crate::eigen::{EigenTable, Pi};
use crate::error::{Error, Result};
use crate::multipliers::{freq_truncate, qg_project, PhysParams};
use crate::spectral::SpectralField4;

/// How the oscillating part of the flow is filtered.
#[derive(Clone, Copy, Debug)]
pub enum WaveFilter<'a> {
    /// Waves forced by `-G^b`, started from the full oscillating data.
    Full,
    /// Waves restricted to `P_{r,R}ℙ_{3+4}`, forced by `-P_{r,R}ℙ_{3+4}G`.
    Truncated(&'a EigenTable),
}

/// The eight bilinear forcings and the two truncation remainders.
#[derive(Clone, Debug)]
pub struct DeltaForcing {
    pub bilinear: [SpectralField4; 8],
    pub f_b: SpectralField4,
    pub f_l: SpectralField4,
}

impl DeltaForcing {
    pub fn total(&self) -> SpectralField4 {
        let mut out = self.f_b.clone();
        out.add_scaled(1.0, &self.f_l);
        for f in &self.bilinear {
            out.add_scaled(1.0, f);
        }
        out
    }
}

/// `[F1, ..., F8]` from samples of `δ`, `Q`, `W`.
fn bilinear_sampled(d: &Sampled, q: &Sampled, w: &Sampled) -> [SpectralField4; 8] {
    let t = |a: &Sampled, b: &Sampled| advect_sampled(&a.phys, &b.phys);
    [t(d, d), t(d, q), t(q, d), t(d, w), t(w, d), t(q, w), t(w, q), t(w, w)]
}

pub fn bilinear_terms(delta: &SpectralField4, q: &SpectralField4, w: &SpectralField4) -> [SpectralField4; 8] {
    bilinear_sampled(&Sampled::new(delta), &Sampled::new(q), &Sampled::new(w))
}

/// `-(Id - P_{r,R})G - P_{r,R}ℙ2 G` for one part of the forcing.
pub fn truncation_remainder(g: &SpectralField4, table: &EigenTable) -> Result<SpectralField4> {
    let p = table.params();
    let mut out = freq_truncate(g, p.r_eps(), p.big_r_eps())?;
    out.add_scaled(-1.0, g);
    out.add_scaled(-1.0, &table.project(g, Pi::Two)?);
    Ok(out)
}

fn filter_parts(g: &GForcing, filter: WaveFilter<'_>) -> Result<(SpectralField4, SpectralField4, SpectralField4)> {
    match filter {
        WaveFilter::Full => Ok((-&g.bilinear, SpectralField4::zeros(g.bilinear.grid()), -&g.linear)),
        WaveFilter::Truncated(table) => {
            let wave = -&table.project(&g.total(), Pi::ThreeFour)?;
            Ok((wave, truncation_remainder(&g.bilinear, table)?, truncation_remainder(&g.linear, table)?))
        }
    }
}

/// Forcing of the wave filter driven by `G`.
pub fn wave_forcing(g: &GForcing, filter: WaveFilter<'_>) -> Result<SpectralField4> {
    match filter {
        WaveFilter::Full => Ok(-&g.bilinear),
        WaveFilter::Truncated(table) => Ok(-&table.project(&g.total(), Pi::ThreeFour)?),
    }
}

/// All forcings of the remainder system. `q` must be QG.
pub fn delta_forcing(
    delta: &SpectralField4,
    q: &SpectralField4,
    w: &SpectralField4,
    params: &PhysParams,
    filter: WaveFilter<'_>,
) -> Result<DeltaForcing> {
    q.same_grid(delta)?;
    q.same_grid(w)?;
    let g = compute_g(q, params)?;
    let (_, f_b, f_l) = filter_parts(&g, filter)?;
    Ok(DeltaForcing { bilinear: bilinear_terms(delta, q, w), f_b, f_l })
}

/// Initial wave data for the chosen filter.
pub fn wave_initial(osc: &SpectralField4, filter: WaveFilter<'_>) -> Result<SpectralField4> {
    match filter {
        WaveFilter::Full => Ok(osc.clone()),
        WaveFilter::Truncated(table) => table.project(osc, Pi::ThreeFour),
    }
}

/// Initial remainder. Full filter: `U_{0,QG} - Ũ_{0,QG}`. Truncated filter:
/// `(U_{0,QG} - Ũ_{0,QG}) + (Id - P_{r,R})U_{0,osc} + P_{r,R}ℙ2 U_{0,osc}`.
pub fn delta_initial(
    qg_data: &SpectralField4,
    qg_limit: &SpectralField4,
    osc: &SpectralField4,
    filter: WaveFilter<'_>,
) -> Result<SpectralField4> {
    let mut d = qg_data - qg_limit;
    if let WaveFilter::Truncated(table) = filter {
        let p = table.params();
        d.add_scaled(1.0, osc);
        d.add_scaled(-1.0, &freq_truncate(osc, p.r_eps(), p.big_r_eps())?);
        d.add_scaled(1.0, &table.project(osc, Pi::Two)?);
    }
    Ok(d)
}

/// Right-hand sides of the coupled `[Q, W]` or `[Q, W, δ]` bundle, all
/// relative to the full linear operator. `G` is evaluated on `𝒬Q`.
pub fn bundle_rhs(state: &[SpectralField4], params: &PhysParams, filter: WaveFilter<'_>) -> Result<(Vec<SpectralField4>, f64)> {
    if !(state.len() == 2 || state.len() == 3) {
        return Err(Error::ShapeMismatch { expected: 3, got: state.len() });
    }
    let (q, w) = (&state[0], &state[1]);
    let sq = Sampled::new(q);
    let qq = qg_project(q, params.froude());
    let g = g_from_sampled(&qq, &Sampled::new(&qq), params);
    let mut dq = advect_sampled(&sq.phys, &sq.phys);
    dq.add_scaled(1.0, &g.bilinear);
    dq.add_scaled(1.0, &g.linear);
    let (dw, f_b, f_l) = filter_parts(&g, filter)?;
    let mut out = vec![dq, dw];
    let mut speed = sq.max_speed;
    if let Some(delta) = state.get(2) {
        let sd = Sampled::new(delta);
        let sw = Sampled::new(w);
        let mut dd = f_b;
        dd.add_scaled(1.0, &f_l);
        for f in bilinear_sampled(&sd, &sq, &sw) {
            dd.add_scaled(1.0, &f);
        }
        out.push(dd);
        speed = speed.max(sd.max_speed).max(sw.max_speed);
    }
    Ok((out, speed))
}

/// Re-projection of a bundle after a step. `Q` is put back on the QG
/// subspace; the removed part moves into `δ` when it is carried, so the
/// bundle sum is unchanged.
pub fn reproject_bundle(state: &mut [SpectralField4], froude: f64) {
    for s in state.iter_mut() {
        super::run::reproject(s);
    }
    let q = qg_project(&state[0], froude);
    let drift = &state[0] - &q;
    state[0] = q;
    if let Some(d) = state.get_mut(2) {
        d.add_scaled(1.0, &drift);
    }
}

/// One step of the coupled bundle. Returns the new state and the largest
/// velocity seen at the start of the step.
pub fn step_bundle(
    method: Method,
    prop: &Propagator,
    t: f64,
    state: &[SpectralField4],
    filter: WaveFilter<'_>,
) -> Result<(Vec<SpectralField4>, f64)> {
    let flow = BundleFlow::uniform(prop, state.len());
    let params = *prop.params();
    let mut speed = None;
    let mut next = scheme_step(method, &flow, t, &state.to_vec(), |_, s: &Vec<SpectralField4>| {
        let (r, v) = bundle_rhs(s, &params, filter)?;
        speed.get_or_insert(v);
        Ok(r)
    })?;
    reproject_bundle(&mut next, params.froude());
    Ok((next, speed.unwrap_or(0.0)))
}

/// Linear wave solve along a stored limit trajectory sampled every `h`:
/// exact propagator plus the exponential trapezoid for the forcing.
/// Returns the wave field at every sample time.
pub fn solve_filtered(
    prop: &Propagator,
    osc: &SpectralField4,
    forcing_series: &[GForcing],
    filter: WaveFilter<'_>,
) -> Result<Vec<SpectralField4>> {
    let mut w = wave_initial(osc, filter)?;
    super::run::reproject(&mut w);
    let mut out = Vec::with_capacity(forcing_series.len().max(1));
    out.push(w.clone());
    let mut g0 = match forcing_series.first() {
        Some(g) => wave_forcing(g, filter)?,
        None => return Ok(out),
    };
    for g in &forcing_series[1..] {
        let g1 = wave_forcing(g, filter)?;
        w = duhamel_step(prop, &w, &g0, &g1);
        super::run::reproject(&mut w);
        out.push(w.clone());
        g0 = g1;
    }
    Ok(out)
}
