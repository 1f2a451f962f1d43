use super::norms::{sobolev_norm, weighted_lq, DyadicBlocks};
use crate::error::{Error, Result};
use crate::spectral::SpectralField;

pub(crate) fn check_series(times: &[f64], count: usize) -> Result<()> {
    if times.len() != count {
        return Err(Error::ShapeMismatch { expected: times.len(), got: count });
    }
    if times.len() < 2 {
        return Err(Error::InvalidParameter("a time norm needs at least 2 samples".into()));
    }
    if times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParameter("sample times must increase".into()));
    }
    Ok(())
}

/// Trapezoid rule.
pub fn trapezoid(times: &[f64], values: &[f64]) -> f64 {
    times.windows(2).zip(values.windows(2)).map(|(t, v)| 0.5 * (t[1] - t[0]) * (v[0] + v[1])).sum()
}

/// `‖a‖_{L^ρ(0,T)}` of sampled values (trapezoid on `|a|^ρ`, max for `ρ = ∞`).
pub fn time_lebesgue(times: &[f64], values: &[f64], rho: f64) -> f64 {
    if rho == f64::INFINITY {
        return values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    }
    let pow: Vec<f64> = values.iter().map(|v| v.abs().powf(rho)).collect();
    trapezoid(times, &pow).powf(1.0 / rho)
}

/// Chemin–Lerner norm from per-sample block norms `blocks[t][b] = (j, a)`.
pub fn chemin_lerner_from_blocks(times: &[f64], blocks: &[Vec<(i32, f64)>], rho: f64, s: f64, q: f64) -> Result<f64> {
    check_series(times, blocks.len())?;
    let nb = blocks[0].len();
    if blocks.iter().any(|b| b.len() != nb) {
        return Err(Error::InvalidParameter("block layout changes along the series".into()));
    }
    let per_block: Vec<(i32, f64)> = (0..nb)
        .map(|b| {
            let vals: Vec<f64> = blocks.iter().map(|row| row[b].1).collect();
            (blocks[0][b].0, time_lebesgue(times, &vals, rho))
        })
        .collect();
    Ok(weighted_lq(&per_block, s, q))
}

/// `‖u‖_{L̃^ρ_T Ḃ^s_{p,q}}`: time norm inside the dyadic sum.
pub fn chemin_lerner_norm<const C: usize>(
    times: &[f64],
    fields: &[SpectralField<C>],
    rho: f64,
    s: f64,
    p: f64,
    q: f64,
) -> Result<f64> {
    check_series(times, fields.len())?;
    let blocks = DyadicBlocks::new(fields[0].grid());
    let rows = fields.iter().map(|f| blocks.lp_norms(f, p)).collect::<Result<Vec<_>>>()?;
    chemin_lerner_from_blocks(times, &rows, rho, s, q)
}

/// `‖f‖_{Ė^s_T} = (sup_t ‖f‖²_{Ḣ^s} + ν0 ∫ ‖f‖²_{Ḣ^{s+1}})^{1/2}`.
pub fn energy_norm<const C: usize>(times: &[f64], fields: &[SpectralField<C>], s: f64, nu0: f64) -> Result<f64> {
    check_series(times, fields.len())?;
    let (sup, diss) = energy_parts(fields.iter(), s);
    Ok((sup + nu0 * trapezoid(times, &diss)).sqrt())
}

fn energy_parts<'a, const C: usize>(fields: impl Iterator<Item = &'a SpectralField<C>>, s: f64) -> (f64, Vec<f64>) {
    let mut sup = 0.0f64;
    let mut diss = Vec::new();
    for f in fields {
        sup = sup.max(sobolev_norm(f, s).powi(2));
        diss.push(sobolev_norm(f, s + 1.0).powi(2));
    }
    (sup, diss)
}

/// Streaming `Ė^s` accumulator for long runs.
#[derive(Clone, Debug)]
pub struct EnergyAccumulator {
    s: f64,
    nu0: f64,
    sup: f64,
    integral: f64,
    last: Option<(f64, f64)>,
}

impl EnergyAccumulator {
    pub fn new(s: f64, nu0: f64) -> Self {
        Self { s, nu0, sup: 0.0, integral: 0.0, last: None }
    }

    pub fn push<const C: usize>(&mut self, t: f64, f: &SpectralField<C>) {
        self.sup = self.sup.max(sobolev_norm(f, self.s).powi(2));
        let d = sobolev_norm(f, self.s + 1.0).powi(2);
        if let Some((t0, d0)) = self.last {
            self.integral += 0.5 * (t - t0) * (d0 + d);
        }
        self.last = Some((t, d));
    }

    pub fn value(&self) -> f64 {
        (self.sup + self.nu0 * self.integral).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::besov_norm;
    use crate::spectral::{Grid, PhysicalScalar, SpectralScalar};
    use std::f64::consts::PI;

    fn cosine(g: &Grid, amp: f64) -> SpectralScalar {
        let phys = PhysicalScalar::from_fn(g, |x| [amp * (2.0 * x[0]).cos()]);
        SpectralScalar::from_physical(&phys).0
    }

    #[test]
    fn constant_series_reduces_to_scaled_besov() {
        let g = Grid::cubic(16, 2.0 * PI).unwrap();
        let f = cosine(&g, 1.0);
        let times = [0.0, 0.5, 1.0, 1.5];
        let fields = vec![f.clone(); 4];
        let b = besov_norm(&f, 0.5, 2.0, 1.0).unwrap();
        let cl = chemin_lerner_norm(&times, &fields, 2.0, 0.5, 2.0, 1.0).unwrap();
        assert!((cl - 1.5f64.sqrt() * b).abs() < 1e-12 * b);
        let sup = chemin_lerner_norm(&times, &fields, f64::INFINITY, 0.5, 2.0, 1.0).unwrap();
        assert!((sup - b).abs() < 1e-12 * b);
        assert!(chemin_lerner_norm(&times[..1], &fields[..1], 2.0, 0.5, 2.0, 1.0).is_err());
    }

    #[test]
    fn decaying_field_matches_closed_form() {
        let g = Grid::cubic(16, 2.0 * PI).unwrap();
        let a = 1.3;
        let big_t = 2.0;
        let n = 2001;
        let times: Vec<f64> = (0..n).map(|i| big_t * i as f64 / (n - 1) as f64).collect();
        let fields: Vec<SpectralScalar> = times.iter().map(|t| cosine(&g, (-a * t).exp())).collect();
        let b0 = besov_norm(&fields[0], 0.0, 2.0, 2.0).unwrap();
        let cl = chemin_lerner_norm(&times, &fields, 2.0, 0.0, 2.0, 2.0).unwrap();
        let exact = b0 * ((1.0 - (-2.0 * a * big_t).exp()) / (2.0 * a)).sqrt();
        assert!((cl - exact).abs() < 1e-6 * exact);
    }

    #[test]
    fn energy_accumulator_matches_batch() {
        let g = Grid::cubic(8, 2.0 * PI).unwrap();
        let times: Vec<f64> = (0..11).map(|i| 0.1 * i as f64).collect();
        let fields: Vec<SpectralScalar> = times.iter().map(|t| cosine(&g, 1.0 + t)).collect();
        let batch = energy_norm(&times, &fields, 0.5, 0.1).unwrap();
        let mut acc = EnergyAccumulator::new(0.5, 0.1);
        for (t, f) in times.iter().zip(&fields) {
            acc.push(*t, f);
        }
        assert!((acc.value() - batch).abs() < 1e-12 * batch);
    }
}
