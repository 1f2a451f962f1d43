use crate::analysis::{
    chemin_lerner_from_blocks, time_lebesgue, DyadicBlocks, EnergyAccumulator, NormKind, NormSpec,
};
use crate::error::Result;
use crate::spectral::SpectralField4;

/// Accumulates one [`NormSpec`] along a trajectory sample by sample, so the
/// fields themselves need not be stored.
#[derive(Clone, Debug)]
pub struct NormRecorder {
    spec: NormSpec,
    times: Vec<f64>,
    values: Vec<f64>,
    blocks: Vec<Vec<(i32, f64)>>,
    energy: Option<EnergyAccumulator>,
}

impl NormRecorder {
    pub fn new(spec: NormSpec, nu0: f64) -> Result<Self> {
        spec.validate()?;
        let energy = (spec.kind == NormKind::EnergyE).then(|| EnergyAccumulator::new(spec.s, nu0));
        Ok(Self { spec, times: Vec::new(), values: Vec::new(), blocks: Vec::new(), energy })
    }

    pub fn spec(&self) -> &NormSpec {
        &self.spec
    }

    fn chemin_lerner(&self) -> bool {
        self.spec.kind == NormKind::BesovDot && self.spec.rho.is_some()
    }

    /// The block `L^p` exponent this recorder consumes, if it is a
    /// Chemin–Lerner norm.
    pub fn block_exponent(&self) -> Option<f64> {
        self.chemin_lerner().then_some(self.spec.p)
    }

    /// Pushes precomputed block norms of a Chemin–Lerner recorder.
    pub fn push_blocks(&mut self, t: f64, block_norms: Vec<(i32, f64)>) {
        debug_assert!(self.chemin_lerner());
        self.times.push(t);
        self.blocks.push(block_norms);
    }

    pub fn push(&mut self, t: f64, f: &SpectralField4, blocks: Option<&DyadicBlocks>) -> Result<()> {
        self.times.push(t);
        if let Some(acc) = &mut self.energy {
            acc.push(t, f);
        } else if self.chemin_lerner() {
            let owned;
            let b = match blocks {
                Some(b) => b,
                None => {
                    owned = DyadicBlocks::new(f.grid());
                    &owned
                }
            };
            self.blocks.push(b.lp_norms(f, self.spec.p)?);
        } else {
            self.values.push(NormSpec { rho: None, ..self.spec }.evaluate(f)?);
        }
        Ok(())
    }

    /// Time norm over the samples pushed so far; a sup in time when the
    /// spec carries no exponent.
    pub fn value(&self) -> Result<f64> {
        if let Some(acc) = &self.energy {
            return Ok(acc.value());
        }
        if self.chemin_lerner() {
            return chemin_lerner_from_blocks(&self.times, &self.blocks, self.spec.rho.unwrap(), self.spec.s, self.spec.q);
        }
        Ok(time_lebesgue(&self.times, &self.values, self.spec.rho.unwrap_or(f64::INFINITY)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipliers::leray_project;
    use crate::spectral::{seeded_field, Grid};
    use std::f64::consts::PI;

    #[test]
    fn streaming_matches_the_batch_series_norms() {
        let g = Grid::cubic(12, 2.0 * PI).unwrap();
        let fields: Vec<SpectralField4> =
            (0..5).map(|k| leray_project(&seeded_field::<4>(&g, k)).scaled(1.0 + k as f64)).collect();
        let times: Vec<f64> = (0..5).map(|k| 0.1 * k as f64).collect();
        let specs = [
            NormSpec::sobolev(0.5),
            NormSpec::lebesgue(f64::INFINITY).in_time(2.0),
            NormSpec::besov(0.0, 6.0, 2.0).in_time(2.0),
            NormSpec::energy(0.5),
        ];
        for spec in specs {
            let mut rec = NormRecorder::new(spec, 0.02).unwrap();
            for (t, f) in times.iter().zip(&fields) {
                rec.push(*t, f, None).unwrap();
            }
            let batch = spec.evaluate_series(&times, &fields, 0.02).unwrap();
            assert!((rec.value().unwrap() / batch - 1.0).abs() < 1e-12, "{spec}");
        }
    }
}
