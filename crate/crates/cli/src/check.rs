//! Fast invariant suite, one group per library layer.

use qgpe::analysis::{bony_split, DyadicBlocks};
use qgpe::dynamics::{
    qg_profile, InitKind, LinearFlow, Method, Model, Propagator, PropagatorKind, RunState, TimeScheme, VorticityRun,
};
use qgpe::eigen::{build_b, exact_eigen, EigenTable, Pi};
use qgpe::experiments::{dyadic_values, run_sweep, SweepKind, SweepParameter, SweepPlan};
use qgpe::multipliers::{
    biot_savart, diffusion_apply, freq_truncate, gamma_apply, leray_project, norm_f2, osc_project,
    potential_vorticity, qg_from_potential, qg_project,
};
use qgpe::spectral::{norm2, scalar_product, seeded_field};
use qgpe::{Grid, PhysParams, SpectralField4};

use crate::config::RunConfig;

const SEEDS: u64 = 5;

pub struct GroupResult {
    pub name: &'static str,
    pub checks: usize,
    pub failures: Vec<String>,
}

struct Group {
    name: &'static str,
    checks: usize,
    failures: Vec<String>,
}

impl Group {
    fn new(name: &'static str) -> Self {
        Self { name, checks: 0, failures: Vec::new() }
    }

    fn expect(&mut self, what: &str, value: f64, tol: f64) {
        self.checks += 1;
        if !(value <= tol) {
            self.failures.push(format!("{what}: {value:.3e} exceeds {tol:.1e}"));
        }
    }

    fn expect_ok<T>(&mut self, what: &str, r: qgpe::Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.checks += 1;
                self.failures.push(format!("{what}: {e}"));
                None
            }
        }
    }

    fn done(self) -> GroupResult {
        GroupResult { name: self.name, checks: self.checks, failures: self.failures }
    }
}

fn rel(a: &SpectralField4, b: &SpectralField4) -> f64 {
    (a - b).l2_norm() / b.l2_norm().max(f64::MIN_POSITIVE)
}

fn spectral(g: &Grid) -> GroupResult {
    let mut r = Group::new("spectral");
    for seed in 0..SEEDS {
        let f = seeded_field::<4>(g, seed);
        let Some(phys) = r.expect_ok("synthesis", f.to_physical()) else { continue };
        let sum_sq: f64 = phys.data().iter().map(|x| x * x).sum();
        let parseval = sum_sq * g.volume() / g.len() as f64 / f.l2_norm().powi(2);
        r.expect("Parseval", (parseval - 1.0).abs(), 1e-12);
        r.expect("round trip", rel(&SpectralField4::from_physical(&phys).0, &f), 1e-13);
    }
    r.done()
}

fn multipliers(g: &Grid, p: &PhysParams) -> GroupResult {
    let mut r = Group::new("multipliers");
    let fr = p.froude();
    for seed in 0..SEEDS {
        let u = seeded_field::<4>(g, seed);
        let (q, o) = (qg_project(&u, fr), osc_project(&u, fr));
        r.expect("Q + P = Id", rel(&(&q + &o), &u), 1e-13);
        r.expect("Q idempotent", rel(&qg_project(&q, fr), &q), 1e-13);
        r.expect("leray Q = Q", rel(&leray_project(&q), &q), 1e-12);
        r.expect("Q leray = Q", rel(&qg_project(&leray_project(&u), fr), &q), 1e-12);
        let v = leray_project(&u);
        r.expect("(P U | Q U) = 0", osc_project(&v, fr).l2_inner(&qg_project(&v, fr)).abs() / v.l2_norm().powi(2), 1e-12);
        let w = qg_from_potential(&seeded_field::<1>(g, seed), fr);
        let gw = gamma_apply(&w, p);
        r.expect("Gamma U = Q L U", rel(&qg_project(&diffusion_apply(&w, p), fr), &gw), 1e-12);
        if let Some(back) = r.expect_ok("Biot-Savart", biot_savart(&potential_vorticity(&w, fr), fr)) {
            r.expect("QG inversion", rel(&back, &w), 1e-13);
        }
    }
    r.done()
}

fn eigen(g: &Grid, p: &PhysParams) -> GroupResult {
    let mut r = Group::new("eigen");
    let equal = p.with_viscosity(p.nu(), p.nu()).expect("validated viscosity");
    for idx in (1..g.len()).step_by(37) {
        let xi = g.wavevector(idx);
        let k2 = norm2(xi);
        let Some(b) = r.expect_ok("build_b", build_b(xi, &equal)) else { continue };
        let e = exact_eigen(&b);
        let w = norm_f2(xi, equal.froude()).sqrt() / (equal.epsilon() * equal.froude() * k2.sqrt());
        let d = -equal.nu() * k2;
        let tol = 1e-10 * (1.0 + w);
        r.expect("mu = -nu |xi|^2", (e.mu - d).abs(), tol);
        r.expect("lambda closed form", (e.lambda.re - d).abs().max((e.lambda.im - w).abs()), tol);
    }
    let unequal = if p.equal_viscosity() { p.with_viscosity(p.nu(), p.nu() / 3.0).expect("positive") } else { *p };
    let f = leray_project(&seeded_field::<4>(g, 1));
    let ft = freq_truncate(&f, unequal.r_eps(), unequal.big_r_eps());
    if let (Some(ft), Some(t)) = (r.expect_ok("truncate", ft), r.expect_ok("eigen table", EigenTable::new(g, &unequal))) {
        let two = r.expect_ok("P2", t.project(&f, Pi::Two));
        let waves = r.expect_ok("P3 + P4", t.project(&f, Pi::ThreeFour));
        if let (Some(a), Some(b)) = (two, waves) {
            r.expect("P2 + P3 + P4 = Id", rel(&(&a + &b), &ft), 1e-10);
        }
    }
    r.done()
}

fn analysis(g: &Grid) -> GroupResult {
    let mut r = Group::new("analysis");
    let blocks = DyadicBlocks::new(g);
    for seed in 0..SEEDS {
        let f = seeded_field::<4>(g, seed);
        let mut sum = SpectralField4::zeros(g);
        for b in 0..blocks.len() {
            if let Some(p) = blocks.apply(&f, b) {
                sum.add_scaled(1.0, &p);
            }
        }
        r.expect("dyadic partition", rel(&sum, &f), 1e-12);
        let (u, v) = (seeded_field::<1>(g, seed), seeded_field::<1>(g, seed + 100));
        if let Some((a, b, c)) = r.expect_ok("paraproducts", bony_split(&u, &v)) {
            let uv = scalar_product(&u, &v);
            r.expect("T_u v + T_v u + R = uv", (&(&(&a + &b) + &c) - &uv).l2_norm() / uv.l2_norm(), 1e-12);
        }
    }
    r.done()
}

fn dynamics(g: &Grid, p: &PhysParams) -> GroupResult {
    let mut r = Group::new("dynamics");
    let inviscid = PhysParams::inviscid(p.epsilon(), p.froude()).expect("validated");
    if let Some(prop) = r.expect_ok("inviscid propagator", Propagator::new(PropagatorKind::FullPe, g, &inviscid, 0.1)) {
        let u = leray_project(&seeded_field::<4>(g, 2));
        let mut w = u.clone();
        for _ in 0..100 {
            w = prop.exp_full(&w);
        }
        r.expect("inviscid isometry", (w.l2_norm() / u.l2_norm() - 1.0).abs(), 1e-10);
    }
    let Some(s) = r.expect_ok("scheme", TimeScheme::new(0.01, 0.05, Method::IfRk4)) else { return r.done() };
    let u0 = qg_profile(g, 7, p.froude());
    let vel = RunState::new(u0.clone(), *p, s, Model::QgVelocity, 0.1);
    let vor = VorticityRun::new(potential_vorticity(&u0, p.froude()), p, s);
    if let (Some(mut vel), Some(mut vor)) = (r.expect_ok("velocity run", vel), r.expect_ok("vorticity run", vor)) {
        for _ in 0..5 {
            let _ = r.expect_ok("velocity step", vel.step());
            let _ = r.expect_ok("vorticity step", vor.step());
        }
        if let Some(b) = r.expect_ok("inversion", biot_savart(vor.vorticity(), p.froude())) {
            r.expect("vorticity and velocity forms", rel(&b, vel.state()), 1e-8);
        }
    }
    r.done()
}

fn experiments(p: &PhysParams) -> GroupResult {
    let mut r = Group::new("experiments");
    let Ok(unequal) = p.with_viscosity(0.3, 0.1) else { return r.done() };
    let mut plan =
        SweepPlan::new(SweepKind::ProjectorSmallness, SweepParameter::Epsilon, dyadic_values(0.04, 3), InitKind::OscRandom, unequal);
    plan.n = 12;
    if let (Some(a), Some(b)) = (r.expect_ok("sweep", run_sweep(&plan)), r.expect_ok("sweep", run_sweep(&plan))) {
        r.expect("reports reproduce", if a.to_tsv() == b.to_tsv() { 0.0 } else { 1.0 }, 0.0);
        r.expect("slope present", if a.fits.iter().any(|f| f.fit.is_some()) { 0.0 } else { 1.0 }, 0.0);
    }
    r.done()
}

/// Runs every group on the configured grid and parameters.
pub fn run_checks(cfg: &RunConfig) -> Vec<GroupResult> {
    let g = cfg.grid();
    let p = cfg.params;
    vec![spectral(&g), multipliers(&g, &p), eigen(&g, &p), analysis(&g), dynamics(&g, &p), experiments(&p)]
}
