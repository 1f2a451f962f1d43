use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use super::nonlinear::{cfl_number, max_speed, pe_nonlinearity};
use super::propagator::{Propagator, PropagatorKind};
use super::qg::{qg3_rhs, require_qg, velocity_rhs, vorticity_rhs};
use super::scheme::{scheme_step, TimeScheme};
use crate::analysis::{sobolev_norm, EnergyAccumulator};
use crate::error::{Error, Result};
use crate::multipliers::{divergence, leray_project, qg_project, PhysParams};
use crate::spectral::{Snapshot, SpectralField4, SpectralScalar, HERMITIAN_TOL};

/// Growth of `‖U‖_{L²}` over its initial value that counts as blow-up.
pub const BLOWUP_GROWTH: f64 = 1e8;
/// Relative divergence accepted in initial data before re-projection.
pub const DIVERGENCE_TOL: f64 = 1e-8;

/// Leray projection, Hermitian symmetrization, zero mean and dealiasing.
pub fn reproject(u: &mut SpectralField4) {
    *u = leray_project(u);
    u.enforce_hermitian();
    u.zero_mean();
    u.apply_dealias();
}

/// Which evolution a [`RunState`] advances.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Model {
    /// The primitive system.
    Pe,
    /// Limit flow, velocity form, with the scalar `Γ` propagator.
    QgVelocity,
    /// Limit flow written around the full linear operator with the `G`
    /// forcing; stays QG up to time-stepping error.
    QgFull,
}

impl Model {
    pub fn propagator_kind(self) -> PropagatorKind {
        match self {
            Model::Pe | Model::QgFull => PropagatorKind::FullPe,
            Model::QgVelocity => PropagatorKind::QgGamma,
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Pe => "pe",
            Model::QgVelocity => "qg-velocity",
            Model::QgFull => "qg-full",
        })
    }
}

impl FromStr for Model {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "pe" => Ok(Model::Pe),
            "qg-velocity" => Ok(Model::QgVelocity),
            "qg-full" => Ok(Model::QgFull),
            other => Err(Error::InvalidParameter(format!("unknown model '{other}' (pe, qg-velocity, qg-full)"))),
        }
    }
}

/// One diagnostics record.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiagnosticRow {
    pub t: f64,
    pub l2: f64,
    pub hs_half: f64,
    pub hs_half_plus_delta: f64,
    /// Running `Ė^{1/2}` norm since the start of this run segment.
    pub e_s_running: f64,
    pub cfl: f64,
}

impl DiagnosticRow {
    pub const HEADER: &'static str = "t\tL2\tHs_half\tHs_half_plus_delta\tE_s_running\tCFL";

    pub fn to_line(&self) -> String {
        format!(
            "{:.15e}\t{:.15e}\t{:.15e}\t{:.15e}\t{:.15e}\t{:.15e}",
            self.t, self.l2, self.hs_half, self.hs_half_plus_delta, self.e_s_running, self.cfl
        )
    }
}

/// A running 4-component evolution.
#[derive(Clone)]
pub struct RunState {
    t: f64,
    t0: f64,
    steps: u64,
    u: SpectralField4,
    params: PhysParams,
    scheme: TimeScheme,
    model: Model,
    delta: f64,
    prop: Arc<Propagator>,
    energy: EnergyAccumulator,
    l2_initial: f64,
    diagnostics: Vec<DiagnosticRow>,
}

impl fmt::Debug for RunState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RunState")
            .field("t", &self.t)
            .field("steps", &self.steps)
            .field("model", &self.model)
            .field("scheme", &self.scheme)
            .finish_non_exhaustive()
    }
}

fn check_initial(u: &SpectralField4) -> Result<()> {
    if !u.is_finite() {
        return Err(Error::InvalidParameter("initial data is not finite".into()));
    }
    let h = u.hermitian_defect();
    if h > HERMITIAN_TOL {
        return Err(Error::HermitianViolation(h));
    }
    let scale = u.l2_norm();
    let mean = (0..4).map(|c| u.component(c)[0].norm()).fold(0.0, f64::max);
    if mean > 1e-12 * u.max_abs_coefficient().max(1e-300) {
        return Err(Error::NonzeroMean(format!("initial mode 0 has size {mean:.3e}")));
    }
    let div = divergence(u).l2_norm();
    if div > DIVERGENCE_TOL * scale.max(1e-300) && div > 0.0 {
        return Err(Error::InvalidParameter(format!("initial velocity is not divergence-free (residual {div:.3e})")));
    }
    Ok(())
}

impl RunState {
    /// `delta` sets the extra index of the `Ḣ^{1/2+δ}` diagnostic.
    pub fn new(u0: SpectralField4, params: PhysParams, scheme: TimeScheme, model: Model, delta: f64) -> Result<Self> {
        let prop = Arc::new(Propagator::new(model.propagator_kind(), u0.grid(), &params, scheme.dt)?);
        Self::with_propagator(u0, 0.0, params, scheme, model, delta, prop)
    }

    /// Shares a precomputed propagator; it must match `model`, the grid and `dt`.
    pub fn with_propagator(
        mut u0: SpectralField4,
        t0: f64,
        params: PhysParams,
        scheme: TimeScheme,
        model: Model,
        delta: f64,
        prop: Arc<Propagator>,
    ) -> Result<Self> {
        scheme.validate()?;
        if prop.kind() != model.propagator_kind() || prop.grid() != u0.grid() || prop.params() != &params {
            return Err(Error::InvalidParameter("propagator does not match the run".into()));
        }
        if !(delta >= 0.0 && delta.is_finite()) {
            return Err(Error::InvalidParameter(format!("delta must be >= 0, got {delta}")));
        }
        check_initial(&u0)?;
        reproject(&mut u0);
        if model != Model::Pe {
            require_qg(&u0, params.froude())?;
        }
        let mut s = Self {
            t: t0,
            t0,
            steps: 0,
            l2_initial: u0.l2_norm(),
            u: u0,
            params,
            scheme,
            model,
            delta,
            prop,
            energy: EnergyAccumulator::new(0.5, params.nu0()),
            diagnostics: Vec::new(),
        };
        let speed = max_speed(&s.u.to_physical()?);
        s.record(speed);
        Ok(s)
    }

    /// Restarts from a snapshot at the snapshot's time.
    pub fn resume(snapshot: &Snapshot, params: PhysParams, scheme: TimeScheme, model: Model, delta: f64) -> Result<Self> {
        let u = snapshot.to_spectral();
        let prop = Arc::new(Propagator::new(model.propagator_kind(), u.grid(), &params, scheme.dt)?);
        Self::with_propagator(u, snapshot.time, params, scheme, model, delta, prop)
    }

    pub fn snapshot(&self) -> Result<Snapshot> {
        Snapshot::from_spectral(self.t, &self.u)
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn steps_taken(&self) -> u64 {
        self.steps
    }

    pub fn state(&self) -> &SpectralField4 {
        &self.u
    }

    pub fn params(&self) -> &PhysParams {
        &self.params
    }

    pub fn scheme(&self) -> &TimeScheme {
        &self.scheme
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn propagator(&self) -> &Arc<Propagator> {
        &self.prop
    }

    pub fn diagnostics(&self) -> &[DiagnosticRow] {
        &self.diagnostics
    }

    /// Whether `t_end` has been reached.
    pub fn finished(&self) -> bool {
        self.t >= self.scheme.t_end - 1e-9 * self.scheme.dt
    }

    fn record(&mut self, speed: f64) {
        self.energy.push(self.t, &self.u);
        let row = DiagnosticRow {
            t: self.t,
            l2: self.u.l2_norm(),
            hs_half: sobolev_norm(&self.u, 0.5),
            hs_half_plus_delta: sobolev_norm(&self.u, 0.5 + self.delta),
            e_s_running: self.energy.value(),
            cfl: cfl_number(self.scheme.dt, speed, self.u.grid()),
        };
        self.diagnostics.push(row);
    }

    /// One time step with re-projection and a diagnostics record.
    pub fn step(&mut self) -> Result<()> {
        let params = self.params;
        let model = self.model;
        let mut speed = None;
        let next = scheme_step(self.scheme.method, self.prop.as_ref(), self.t, &self.u, |_, u: &SpectralField4| {
            let (n, v) = match model {
                Model::Pe => pe_nonlinearity(u),
                Model::QgVelocity => velocity_rhs(u, params.froude()),
                Model::QgFull => {
                    let (n, _, v) = qg3_rhs(u, &params);
                    (n, v)
                }
            };
            speed.get_or_insert(v);
            Ok(n)
        })?;
        let v0 = speed.unwrap_or(0.0);
        let cfl = cfl_number(self.scheme.dt, v0, self.u.grid());
        if cfl > self.scheme.cfl_safety {
            return Err(Error::Cfl { t: self.t, cfl, limit: self.scheme.cfl_safety });
        }
        let mut u = next;
        reproject(&mut u);
        if model != Model::Pe {
            u = qg_project(&u, params.froude());
        }
        let t_next = self.t0 + (self.steps + 1) as f64 * self.scheme.dt;
        let l2 = u.l2_norm();
        if !u.is_finite() || !l2.is_finite() {
            return Err(Error::BlowUp { t: t_next, what: "non-finite coefficients".into() });
        }
        if l2 > BLOWUP_GROWTH * self.l2_initial.max(f64::MIN_POSITIVE) {
            return Err(Error::BlowUp { t: t_next, what: format!("L2 norm grew to {l2:.3e}") });
        }
        self.u = u;
        self.steps += 1;
        self.t = t_next;
        // the speed at the new state is only known at the next step
        self.record(v0);
        Ok(())
    }

    /// Steps until `t_end`, calling `observer` after every step.
    pub fn run(&mut self, mut observer: impl FnMut(&RunState) -> Result<()>) -> Result<()> {
        while !self.finished() {
            self.step()?;
            observer(self)?;
        }
        Ok(())
    }
}

/// The limit flow in potential-vorticity form.
#[derive(Clone, Debug)]
pub struct VorticityRun {
    t: f64,
    omega: SpectralScalar,
    froude: f64,
    scheme: TimeScheme,
    prop: Arc<Propagator>,
}

impl VorticityRun {
    pub fn new(omega: SpectralScalar, params: &PhysParams, scheme: TimeScheme) -> Result<Self> {
        scheme.validate()?;
        let prop = Arc::new(Propagator::new(PropagatorKind::QgGamma, omega.grid(), params, scheme.dt)?);
        let mut omega = omega;
        omega.enforce_hermitian();
        omega.zero_mean();
        omega.apply_dealias();
        Ok(Self { t: 0.0, omega, froude: params.froude(), scheme, prop })
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn vorticity(&self) -> &SpectralScalar {
        &self.omega
    }

    pub fn step(&mut self) -> Result<()> {
        let f = self.froude;
        let mut speed = None;
        let next = scheme_step(self.scheme.method, self.prop.as_ref(), self.t, &self.omega, |_, w: &SpectralScalar| {
            let (n, v) = vorticity_rhs(w, f)?;
            speed.get_or_insert(v);
            Ok(n)
        })?;
        let cfl = cfl_number(self.scheme.dt, speed.unwrap_or(0.0), self.omega.grid());
        if cfl > self.scheme.cfl_safety {
            return Err(Error::Cfl { t: self.t, cfl, limit: self.scheme.cfl_safety });
        }
        let mut w = next;
        w.enforce_hermitian();
        w.zero_mean();
        w.apply_dealias();
        if !w.is_finite() {
            return Err(Error::BlowUp { t: self.t + self.scheme.dt, what: "non-finite vorticity".into() });
        }
        self.omega = w;
        self.t += self.scheme.dt;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::scheme::Method;
    use crate::multipliers::qg_from_potential;
    use crate::spectral::{seeded_field, Grid};
    use std::f64::consts::PI;

    fn setup() -> (Grid, PhysParams, TimeScheme) {
        let g = Grid::cubic(12, 2.0 * PI).unwrap();
        let p = PhysParams::new(0.1, 0.6, 0.02, 0.03, 0.1, 0.2).unwrap();
        (g, p, TimeScheme::new(0.01, 0.05, Method::IfRk4).unwrap())
    }

    #[test]
    fn zero_data_stays_zero() {
        let (g, p, s) = setup();
        let mut run = RunState::new(SpectralField4::zeros(&g), p, s, Model::Pe, 0.1).unwrap();
        run.run(|_| Ok(())).unwrap();
        assert_eq!(run.steps_taken(), 5);
        assert_eq!(run.state().max_abs_coefficient(), 0.0);
        assert_eq!(run.diagnostics().len(), 6);
    }

    #[test]
    fn invalid_initial_data_is_rejected() {
        let (g, p, s) = setup();
        let raw = seeded_field::<4>(&g, 1);
        assert!(RunState::new(raw, p, s, Model::Pe, 0.1).is_err());
        let u = leray_project(&seeded_field::<4>(&g, 1));
        assert!(matches!(RunState::new(u, p, s, Model::QgVelocity, 0.1), Err(Error::NotQuasiGeostrophic(_))));
    }

    #[test]
    fn cfl_violation_is_reported() {
        let (g, p, _) = setup();
        let s = TimeScheme::new(0.5, 1.0, Method::IfRk4).unwrap();
        let u = qg_from_potential(&seeded_field::<1>(&g, 2), p.froude()).dealiased().scaled(200.0);
        let mut run = RunState::new(u, p, s, Model::Pe, 0.1).unwrap();
        assert!(matches!(run.step(), Err(Error::Cfl { .. })));
    }

    #[test]
    fn diagnostics_line_has_six_columns() {
        let (g, p, s) = setup();
        let u = qg_from_potential(&seeded_field::<1>(&g, 2), p.froude()).dealiased();
        let mut run = RunState::new(u, p, s, Model::QgVelocity, 0.1).unwrap();
        run.step().unwrap();
        let line = run.diagnostics()[1].to_line();
        assert_eq!(line.split('\t').count(), DiagnosticRow::HEADER.split('\t').count());
        assert!(run.diagnostics()[1].e_s_running >= run.diagnostics()[1].hs_half);
    }
}
