//! Seeded random spectra for tests, sweeps and initial data.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::field::SpectralField;
use super::grid::{norm2, Grid};

/// Deterministic generator for a seed.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Gaussian coefficients scaled by `amplitude(|ξ|)` on retained nonzero modes,
/// made Hermitian. The mean and the dealiased band are zero.
pub fn random_spectral<const C: usize>(
    grid: &Grid,
    rng: &mut impl Rng,
    amplitude: impl Fn(f64) -> f64,
) -> SpectralField<C> {
    let mut f = SpectralField::<C>::from_fn(grid, |idx, xi| {
        let a = if grid.is_retained(idx) && norm2(xi) > 0.0 { amplitude(norm2(xi).sqrt()) } else { 0.0 };
        std::array::from_fn(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im) * a
        })
    });
    f.enforce_hermitian();
    f.zero_mean();
    f
}

/// Smooth random field with spectrum `(1 + |ξ|²)^{-1}`, unit `L²` norm.
pub fn seeded_field<const C: usize>(grid: &Grid, seed: u64) -> SpectralField<C> {
    let mut rng = rng_from_seed(seed);
    let mut f = random_spectral::<C>(grid, &mut rng, |k| 1.0 / (1.0 + k * k));
    let n = f.l2_norm();
    if n > 0.0 {
        f.scale(1.0 / n);
    }
    f
}

/// Random field on integer modes `0 < |k| ≤ kmax`, drawn in a fixed
/// lexicographic order so the same seed gives the same function on every grid
/// of the box that resolves the band. Unit `L²` norm.
pub fn band_limited_field<const C: usize>(
    grid: &Grid,
    seed: u64,
    kmax: i64,
    amplitude: impl Fn(f64) -> f64,
) -> SpectralField<C> {
    let mut rng = rng_from_seed(seed);
    let mut f = SpectralField::<C>::zeros(grid);
    let n = grid.len();
    let kmin = grid.kmin();
    for a in -kmax..=kmax {
        for b in -kmax..=kmax {
            for c in -kmax..=kmax {
                let draws: [Complex64; C] = std::array::from_fn(|_| {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = rng.sample(StandardNormal);
                    Complex64::new(re, im)
                });
                let k2 = (a * a + b * b + c * c) as f64;
                if k2 == 0.0 || k2 > (kmax * kmax) as f64 {
                    continue;
                }
                let Some(idx) = grid.index_of_mode([a, b, c]) else { continue };
                let w = amplitude(kmin * k2.sqrt());
                for (comp, d) in draws.iter().enumerate() {
                    f.data_mut()[comp * n + idx] = d * w;
                }
            }
        }
    }
    f.enforce_hermitian();
    f.apply_dealias();
    let nrm = f.l2_norm();
    if nrm > 0.0 {
        f.scale(1.0 / nrm);
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_fields_are_reproducible_and_real() {
        let g = Grid::new([8, 10, 12], 3.0).unwrap();
        let a = seeded_field::<4>(&g, 7);
        let b = seeded_field::<4>(&g, 7);
        assert_eq!(a, b);
        assert_ne!(a, seeded_field::<4>(&g, 8));
        let fine = Grid::new([16, 20, 24], 3.0).unwrap();
        let c = band_limited_field::<2>(&g, 1, 2, |_| 1.0);
        let d = band_limited_field::<2>(&fine, 1, 2, |_| 1.0);
        assert_eq!(c.resample(&fine).unwrap(), d);
        assert_eq!(a.hermitian_defect(), 0.0);
        assert!((a.l2_norm() - 1.0).abs() < 1e-14);
        for idx in 0..g.len() {
            if !g.is_retained(idx) {
                assert!(a.mode(idx).iter().all(|c| c.norm() == 0.0));
            }
        }
    }
}
