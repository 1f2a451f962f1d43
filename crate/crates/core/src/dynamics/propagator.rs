use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;

use super::scheme::LinearFlow;
use crate::eigen::{build_b, expm_phi, Mat4};
use crate::error::{Error, Result};
use crate::multipliers::{gamma_symbol, PhysParams};
use crate::spectral::{norm2, Grid, SpectralField, SpectralField4};

/// Which linear operator the propagator exponentiates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PropagatorKind {
    /// `B(ξ) = L̂ - (1/ε) P̂ Â`, mode by mode.
    FullPe,
    /// The scalar limit dissipation `Γ`.
    QgGamma,
    /// The diagonal heat operator `L`.
    HeatL,
}

impl fmt::Display for PropagatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PropagatorKind::FullPe => "full-pe",
            PropagatorKind::QgGamma => "qg-gamma",
            PropagatorKind::HeatL => "heat-l",
        })
    }
}

impl FromStr for PropagatorKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "full-pe" | "pe" => Ok(PropagatorKind::FullPe),
            "qg-gamma" | "gamma" => Ok(PropagatorKind::QgGamma),
            "heat-l" | "heat" => Ok(PropagatorKind::HeatL),
            other => Err(Error::InvalidParameter(format!("unknown propagator '{other}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Op {
    Full,
    Half,
    Phi1,
    Phi2,
}

impl Op {
    fn slot(self) -> usize {
        self as usize
    }
}

/// `[e^{hB}, e^{hB/2}, φ1(hB), φ2(hB)]` at one mode.
type MatSet = [Mat4; 4];
/// The same four operators when they are diagonal: `[op][component]`.
type DiagSet = [[f64; 4]; 4];

#[derive(Clone, Debug)]
enum Tables {
    /// `slot[idx]` points into `mats`; `ξ` and `-ξ` share a slot since `B` is even.
    Matrix { slot: Vec<Option<u32>>, mats: Vec<MatSet> },
    Diagonal(Vec<DiagSet>),
}

/// Exact linear flow over one step `h` on the retained modes. The zero mode
/// and dealiased modes are mapped to zero; states are mean-free and
/// dealiased, so this is the identity on them apart from round-off.
#[derive(Clone, Debug)]
pub struct Propagator {
    kind: PropagatorKind,
    h: f64,
    grid: Grid,
    params: PhysParams,
    tables: Tables,
}

/// `φ1(z) = (e^z - 1)/z`, `φ2(z) = (e^z - 1 - z)/z²`, with a series near 0.
pub fn phi_scalar(z: f64) -> (f64, f64) {
    if z.abs() < 1e-2 {
        let phi1 = 1.0 + z * (0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z * (1.0 / 120.0 + z / 720.0))));
        let phi2 = 0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z * (1.0 / 120.0 + z * (1.0 / 720.0 + z / 5040.0))));
        (phi1, phi2)
    } else {
        let e = z.exp_m1();
        (e / z, (e - z) / (z * z))
    }
}

fn diag_set(rates: [f64; 4], h: f64) -> DiagSet {
    let mut out = [[0.0; 4]; 4];
    for (c, &r) in rates.iter().enumerate() {
        let z = h * r;
        let (p1, p2) = phi_scalar(z);
        out[Op::Full.slot()][c] = z.exp();
        out[Op::Half.slot()][c] = (0.5 * z).exp();
        out[Op::Phi1.slot()][c] = p1;
        out[Op::Phi2.slot()][c] = p2;
    }
    out
}

fn to_mat4(v: &[f64]) -> Mat4 {
    let mut m = [[0.0; 4]; 4];
    for (r, row) in m.iter_mut().enumerate() {
        row.copy_from_slice(&v[4 * r..4 * r + 4]);
    }
    m
}

fn mat_set(xi: [f64; 3], h: f64, p: &PhysParams) -> Result<MatSet> {
    let b = build_b(xi, p)?.b;
    let mut a = [0.0; 16];
    let mut a_half = [0.0; 16];
    for r in 0..4 {
        for c in 0..4 {
            a[4 * r + c] = h * b[r][c];
            a_half[4 * r + c] = 0.5 * h * b[r][c];
        }
    }
    let (e, p1, p2) = expm_phi(&a, 4);
    let (e_half, _, _) = expm_phi(&a_half, 4);
    Ok([to_mat4(&e), to_mat4(&e_half), to_mat4(&p1), to_mat4(&p2)])
}

impl Propagator {
    pub fn new(kind: PropagatorKind, grid: &Grid, params: &PhysParams, h: f64) -> Result<Self> {
        if !(h >= 0.0 && h.is_finite()) {
            return Err(Error::InvalidParameter(format!("propagator step must be finite and >= 0, got {h}")));
        }
        let retained = grid.dealias_mask();
        let tables = match kind {
            PropagatorKind::FullPe => {
                // one representative per ±ξ pair
                let reps: Vec<usize> = (0..grid.len())
                    .filter(|&i| i != 0 && retained[i] && i <= grid.conjugate_index(i))
                    .collect();
                let mats = reps
                    .par_iter()
                    .map(|&i| mat_set(grid.wavevector(i), h, params))
                    .collect::<Result<Vec<_>>>()?;
                let mut slot = vec![None; grid.len()];
                for (s, &i) in reps.iter().enumerate() {
                    slot[i] = Some(s as u32);
                    slot[grid.conjugate_index(i)] = Some(s as u32);
                }
                Tables::Matrix { slot, mats }
            }
            PropagatorKind::QgGamma | PropagatorKind::HeatL => {
                let (nu, nup) = (params.nu(), params.nu_prime());
                let diag = (0..grid.len())
                    .map(|i| {
                        if i == 0 || !retained[i] {
                            return [[0.0; 4]; 4];
                        }
                        let xi = grid.wavevector(i);
                        let rates = if kind == PropagatorKind::QgGamma {
                            [gamma_symbol(xi, params); 4]
                        } else {
                            let k2 = norm2(xi);
                            [-nu * k2, -nu * k2, -nu * k2, -nup * k2]
                        };
                        diag_set(rates, h)
                    })
                    .collect();
                Tables::Diagonal(diag)
            }
        };
        Ok(Self { kind, h, grid: grid.clone(), params: *params, tables })
    }

    pub fn kind(&self) -> PropagatorKind {
        self.kind
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn params(&self) -> &PhysParams {
        &self.params
    }

    fn apply4(&self, op: Op, f: &SpectralField4) -> SpectralField4 {
        assert_eq!(f.grid(), &self.grid, "propagator applied on a foreign grid");
        let o = op.slot();
        match &self.tables {
            Tables::Matrix { slot, mats } => f.map_modes(|idx, _, u| match slot[idx] {
                Some(s) => {
                    let m = &mats[s as usize][o];
                    let mut out = [Complex64::new(0.0, 0.0); 4];
                    for (r, row) in m.iter().enumerate() {
                        out[r] = u[0] * row[0] + u[1] * row[1] + u[2] * row[2] + u[3] * row[3];
                    }
                    out
                }
                None => [Complex64::new(0.0, 0.0); 4],
            }),
            Tables::Diagonal(d) => f.map_modes(|idx, _, u| {
                let w = &d[idx][o];
                [u[0] * w[0], u[1] * w[1], u[2] * w[2], u[3] * w[3]]
            }),
        }
    }

    fn apply_diag<const C: usize>(&self, op: Op, f: &SpectralField<C>) -> SpectralField<C> {
        assert_eq!(f.grid(), &self.grid, "propagator applied on a foreign grid");
        let Tables::Diagonal(d) = &self.tables else {
            panic!("the {} propagator only acts on 4-component fields", self.kind);
        };
        let o = op.slot();
        f.map_modes(|idx, _, u| {
            let w = &d[idx][o];
            let mut out = u;
            for (c, v) in out.iter_mut().enumerate() {
                *v *= w[c.min(3)];
            }
            out
        })
    }
}

impl LinearFlow<SpectralField4> for Propagator {
    fn step(&self) -> f64 {
        self.h
    }
    fn exp_full(&self, s: &SpectralField4) -> SpectralField4 {
        self.apply4(Op::Full, s)
    }
    fn exp_half(&self, s: &SpectralField4) -> SpectralField4 {
        self.apply4(Op::Half, s)
    }
    fn phi1(&self, s: &SpectralField4) -> SpectralField4 {
        self.apply4(Op::Phi1, s)
    }
    fn phi2(&self, s: &SpectralField4) -> SpectralField4 {
        self.apply4(Op::Phi2, s)
    }
}

/// Scalars use the first component's rate (`Γ`, or `νΔ`).
impl LinearFlow<SpectralField<1>> for Propagator {
    fn step(&self) -> f64 {
        self.h
    }
    fn exp_full(&self, s: &SpectralField<1>) -> SpectralField<1> {
        self.apply_diag(Op::Full, s)
    }
    fn exp_half(&self, s: &SpectralField<1>) -> SpectralField<1> {
        self.apply_diag(Op::Half, s)
    }
    fn phi1(&self, s: &SpectralField<1>) -> SpectralField<1> {
        self.apply_diag(Op::Phi1, s)
    }
    fn phi2(&self, s: &SpectralField<1>) -> SpectralField<1> {
        self.apply_diag(Op::Phi2, s)
    }
}

/// A bundle of states each advanced by its own linear flow.
pub struct BundleFlow<'a, L> {
    flows: Vec<&'a L>,
}

impl<'a, L> BundleFlow<'a, L> {
    pub fn new(flows: Vec<&'a L>) -> Self {
        assert!(!flows.is_empty(), "empty bundle");
        Self { flows }
    }

    /// The same flow for all `n` members.
    pub fn uniform(flow: &'a L, n: usize) -> Self {
        Self::new(vec![flow; n])
    }
}

impl<S: Clone, L: LinearFlow<S>> LinearFlow<Vec<S>> for BundleFlow<'_, L> {
    fn step(&self) -> f64 {
        self.flows[0].step()
    }
    fn exp_full(&self, s: &Vec<S>) -> Vec<S> {
        self.flows.iter().zip(s).map(|(l, x)| l.exp_full(x)).collect()
    }
    fn exp_half(&self, s: &Vec<S>) -> Vec<S> {
        self.flows.iter().zip(s).map(|(l, x)| l.exp_half(x)).collect()
    }
    fn phi1(&self, s: &Vec<S>) -> Vec<S> {
        self.flows.iter().zip(s).map(|(l, x)| l.phi1(x)).collect()
    }
    fn phi2(&self, s: &Vec<S>) -> Vec<S> {
        self.flows.iter().zip(s).map(|(l, x)| l.phi2(x)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipliers::leray_project;
    use crate::spectral::seeded_field;
    use std::f64::consts::PI;

    fn setup() -> (Grid, PhysParams, SpectralField4) {
        let g = Grid::cubic(8, 2.0 * PI).unwrap();
        let p = PhysParams::new(0.1, 0.5, 0.03, 0.07, 0.1, 0.2).unwrap();
        let mut f = leray_project(&seeded_field::<4>(&g, 1));
        f.apply_dealias();
        (g, p, f)
    }

    #[test]
    fn phi_series_joins_closed_form() {
        for z in [-1.1e-2, -0.9e-2, 0.9e-2, 1.1e-2] {
            let (a, b) = phi_scalar(z);
            let e = f64::exp_m1(z);
            assert!((a - e / z).abs() < 1e-13);
            assert!((b - (e - z) / (z * z)).abs() < 1e-10);
        }
        assert_eq!(phi_scalar(0.0), (1.0, 0.5));
    }

    #[test]
    fn zero_step_is_identity_and_semigroup_holds() {
        let (g, p, f) = setup();
        let id = Propagator::new(PropagatorKind::FullPe, &g, &p, 0.0).unwrap();
        assert!((&id.exp_full(&f) - &f).l2_norm() < 1e-14 * f.l2_norm());
        let one = Propagator::new(PropagatorKind::FullPe, &g, &p, 0.3).unwrap();
        let two = Propagator::new(PropagatorKind::FullPe, &g, &p, 0.6).unwrap();
        let a = one.exp_full(&one.exp_full(&f));
        let b = two.exp_full(&f);
        assert!((&a - &b).l2_norm() < 1e-11 * f.l2_norm());
        let c = one.exp_half(&one.exp_half(&f));
        assert!((&c - &one.exp_full(&f)).l2_norm() < 1e-11 * f.l2_norm());
    }

    #[test]
    fn diagonal_kinds_match_symbols() {
        let (g, p, f) = setup();
        let h = 0.4;
        let heat = Propagator::new(PropagatorKind::HeatL, &g, &p, h).unwrap();
        let e = heat.exp_full(&f);
        for idx in [1usize, 9, 70] {
            let k2 = norm2(g.wavevector(idx));
            let (u, v) = (f.mode(idx), e.mode(idx));
            assert!((v[0] - u[0] * (-h * p.nu() * k2).exp()).norm() < 1e-15);
            assert!((v[3] - u[3] * (-h * p.nu_prime() * k2).exp()).norm() < 1e-15);
        }
        let gam = Propagator::new(PropagatorKind::QgGamma, &g, &p, h).unwrap();
        let s = seeded_field::<1>(&g, 3).dealiased();
        let es = gam.exp_full(&s);
        let want = s.apply_symbol(|xi| (h * gamma_symbol(xi, &p)).exp());
        assert!((&es - &want).l2_norm() < 1e-14);
    }

    #[test]
    fn parse_kinds() {
        for k in [PropagatorKind::FullPe, PropagatorKind::QgGamma, PropagatorKind::HeatL] {
            assert_eq!(k.to_string().parse::<PropagatorKind>().unwrap(), k);
        }
        assert!("x".parse::<PropagatorKind>().is_err());
    }
}
