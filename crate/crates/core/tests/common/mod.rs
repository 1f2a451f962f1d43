//! Oracles shared by the integration suites and the acceptance target.
#![allow(dead_code)]

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use qgpe::analysis::{besov_norm, m_s_operator};
use qgpe::dynamics::{
    build_initial, delta_initial, reproject, step_bundle, wave_initial, InitKind, InitSpec, Method, Model, Propagator,
    PropagatorKind, RunState, TimeScheme, WaveFilter,
};
use qgpe::eigen::EigenTable;
use qgpe::multipliers::{leray_project, qg_from_potential};
use qgpe::spectral::{band_limited_field, norm2, seeded_field, PhysicalField, SpectralField};
use qgpe::{Grid, PhysParams, SpectralField4};

const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn box_grid(n: usize) -> Grid {
    Grid::cubic(n, 2.0 * PI).unwrap()
}

pub fn rel(a: &SpectralField4, b: &SpectralField4) -> f64 {
    (a - b).l2_norm() / b.l2_norm()
}

/// Dealiased, Leray-projected random field with the given RMS.
pub fn div_free(g: &Grid, seed: u64, rms: f64) -> SpectralField4 {
    let mut u = leray_project(&seeded_field::<4>(g, seed));
    u.apply_dealias();
    let n = u.l2_norm();
    u.scaled(rms * g.volume().sqrt() / n)
}

pub fn qg_field(g: &Grid, seed: u64, froude: f64) -> SpectralField4 {
    qg_from_potential(&seeded_field::<1>(g, seed), froude)
}

/// `∫ |D|^s a · |D|^s b`.
pub fn hs_inner(a: &SpectralField4, b: &SpectralField4, s: f64) -> f64 {
    let g = a.grid();
    let mut acc = 0.0;
    for idx in 0..g.len() {
        let w = norm2(g.wavevector(idx)).powf(s);
        let (x, y) = (a.mode(idx), b.mode(idx));
        acc += w * (0..4).map(|c| (x[c].conj() * y[c]).re).sum::<f64>();
    }
    g.volume() * acc
}

pub fn derivative<const C: usize>(f: &SpectralField<C>, j: usize) -> SpectralField<C> {
    f.map_modes(|_, xi, v| v.map(|c| c * I * xi[j]))
}

/// Dealiased `(v¹∂₁ + v²∂₂ + v³∂₃) f` from pointwise products of samples.
pub fn advective<const C: usize>(u: &SpectralField4, f: &SpectralField<C>) -> SpectralField<C> {
    let g = u.grid();
    let v = u.to_physical().unwrap();
    let grads: Vec<PhysicalField<C>> = (0..3).map(|j| derivative(f, j).to_physical().unwrap()).collect();
    let n = g.len();
    let mut out = vec![0.0; C * n];
    for j in 0..3 {
        let vj = v.component(j);
        for c in 0..C {
            let d = grads[j].component(c);
            for i in 0..n {
                out[c * n + i] += vj[i] * d[i];
            }
        }
    }
    SpectralField::<C>::from_physical(&PhysicalField::<C>::new(g, out).unwrap()).0.dealiased()
}

/// `ν‖∇v‖² + ν′‖∇θ‖²`.
pub fn dissipation(u: &SpectralField4, p: &PhysParams) -> f64 {
    let g = u.grid();
    let mut acc = 0.0;
    for idx in 0..g.len() {
        let k2 = norm2(g.wavevector(idx));
        let m = u.mode(idx);
        acc += k2 * (p.nu() * (m[0].norm_sqr() + m[1].norm_sqr() + m[2].norm_sqr()) + p.nu_prime() * m[3].norm_sqr());
    }
    g.volume() * acc
}

pub fn simpson(h: f64, y: &[f64]) -> f64 {
    assert!(y.len() % 2 == 1);
    let n = y.len() - 1;
    let mut s = y[0] + y[n];
    for (i, v) in y.iter().enumerate().take(n).skip(1) {
        s += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    s * h / 3.0
}

/// Relative defect of `‖U(T)‖² + 2∫ dissipation = ‖U(0)‖²` along a PE run.
pub fn energy_balance_defect(g: &Grid, p: &PhysParams, seed: u64, rms: f64, dt: f64, t_end: f64) -> f64 {
    let s = TimeScheme::new(dt, t_end, Method::IfRk4).unwrap();
    let u = div_free(g, seed, rms);
    let e0 = u.l2_norm().powi(2);
    let mut diss = vec![dissipation(&u, p)];
    let mut run = RunState::new(u, *p, s, Model::Pe, 0.1).unwrap();
    run.run(|r| {
        diss.push(dissipation(r.state(), p));
        Ok(())
    })
    .unwrap();
    let balance = run.state().l2_norm().powi(2) + 2.0 * simpson(dt, &diss);
    (balance / e0 - 1.0).abs()
}

pub fn pe_solution(p: &PhysParams, u0: &SpectralField4, dt: f64, t_end: f64, method: Method) -> SpectralField4 {
    let s = TimeScheme::new(dt, t_end, method).unwrap();
    let mut run = RunState::new(u0.clone(), *p, s, Model::Pe, 0.1).unwrap();
    run.run(|_| Ok(())).unwrap();
    run.state().clone()
}

/// Self-convergence order from three runs at `dt`, `dt/2`, `dt/4`.
pub fn observed_order(g: &Grid, method: Method, dt: f64, rms: f64) -> f64 {
    let p = PhysParams::new(0.1, 0.6, 0.02, 0.04, 0.1, 0.2).unwrap();
    let u0 = div_free(g, 5, rms);
    let a = pe_solution(&p, &u0, dt, 0.4, method);
    let b = pe_solution(&p, &u0, dt / 2.0, 0.4, method);
    let c = pe_solution(&p, &u0, dt / 4.0, 0.4, method);
    ((&a - &b).l2_norm() / (&b - &c).l2_norm()).log2()
}

/// Evolves U alone and the `[Q, W, δ]` bundle; returns the worst relative gap
/// between `δ` and `U - Q - W`.
pub fn triple_solve(g: &Grid, p: &PhysParams, kind: InitKind, dt: f64, steps: usize, truncated: bool) -> f64 {
    let mut spec = InitSpec::new(kind, 11);
    spec.gamma = if kind == InitKind::MixedTheorem4 { 0.004 } else { 0.02 };
    spec.amplitude = 0.5;
    let data = build_initial(g, p, &spec).unwrap();
    let table = truncated.then(|| EigenTable::new(g, p).unwrap());
    let filter = table.as_ref().map_or(WaveFilter::Full, WaveFilter::Truncated);
    let prop = Arc::new(Propagator::new(PropagatorKind::FullPe, g, p, dt).unwrap());
    let scheme = TimeScheme::new(dt, dt * steps as f64, Method::IfRk4).unwrap();
    let mut pe = RunState::with_propagator(data.u0.clone(), 0.0, *p, scheme, Model::Pe, 0.1, prop.clone()).unwrap();
    let mut w0 = wave_initial(&data.osc, filter).unwrap();
    reproject(&mut w0);
    let mut d0 = delta_initial(&data.qg_part, &data.qg_limit, &data.osc, filter).unwrap();
    reproject(&mut d0);
    let mut bundle = vec![data.qg_limit.clone(), w0, d0];
    let mut worst = 0.0f64;
    let mut t = 0.0;
    for _ in 0..steps {
        pe.step().unwrap();
        bundle = step_bundle(Method::IfRk4, &prop, t, &bundle, filter).unwrap().0;
        t += dt;
        let gap = &(pe.state() - &bundle[0]) - &bundle[1];
        worst = worst.max((&gap - &bundle[2]).l2_norm() / bundle[2].l2_norm());
    }
    worst
}

pub fn smooth(k: f64) -> f64 {
    1.0 / (1.0 + k * k)
}

/// `‖M_s(f, g)‖_{L²} / (‖f‖_{Ḃ^{s1}_{∞,2}} ‖g‖_{Ḃ^{s2}_{2,∞}})`, `s1 + s2 = s`.
pub fn m_s_ratio(g: &Grid, seed: u64) -> f64 {
    let (s, s1, s2) = (0.5, 0.25, 0.25);
    let f = band_limited_field::<1>(g, 2 * seed, 3, smooth);
    let h = band_limited_field::<1>(g, 2 * seed + 1, 3, smooth);
    let m = m_s_operator(&f, &h, s).unwrap();
    m.l2_norm() / (besov_norm(&f, s1, f64::INFINITY, 2.0).unwrap() * besov_norm(&h, s2, 2.0, f64::INFINITY).unwrap())
}
