use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::fft;
use super::grid::Grid;
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Relative Hermitian defect tolerated by [`SpectralField::to_physical`].
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Fourier-series coefficients of a real `C`-component field.
///
/// Storage is component-major, each component in grid order. The physical
/// field is `u(x) = Σ_k c_k e^{iξ·x}`, so `‖u‖²_{L²} = L³ Σ |c_k|²`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField<const C: usize> {
    grid: Grid,
    data: Vec<Complex64>,
}

pub type SpectralField4 = SpectralField<4>;
pub type SpectralScalar = SpectralField<1>;

/// Real samples on the grid, component-major with `x3` fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct PhysicalField<const C: usize> {
    grid: Grid,
    data: Vec<f64>,
}

pub type PhysicalField4 = PhysicalField<4>;
pub type PhysicalScalar = PhysicalField<1>;

impl<const C: usize> SpectralField<C> {
    pub fn zeros(grid: &Grid) -> Self {
        Self { grid: grid.clone(), data: vec![ZERO; C * grid.len()] }
    }

    pub fn from_coefficients(grid: &Grid, data: Vec<Complex64>) -> Result<Self> {
        let expected = C * grid.len();
        if data.len() != expected {
            return Err(Error::ShapeMismatch { expected, got: data.len() });
        }
        Ok(Self { grid: grid.clone(), data })
    }

    /// Builds a field from a per-mode function of the wavevector.
    pub fn from_fn(grid: &Grid, mut f: impl FnMut(usize, [f64; 3]) -> [Complex64; C]) -> Self {
        let mut out = Self::zeros(grid);
        let n = grid.len();
        for idx in 0..n {
            let v = f(idx, grid.wavevector(idx));
            for c in 0..C {
                out.data[c * n + idx] = v[c];
            }
        }
        out
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<Complex64> {
        self.data
    }

    pub fn component(&self, c: usize) -> &[Complex64] {
        let n = self.grid.len();
        &self.data[c * n..(c + 1) * n]
    }

    pub fn component_mut(&mut self, c: usize) -> &mut [Complex64] {
        let n = self.grid.len();
        &mut self.data[c * n..(c + 1) * n]
    }

    #[inline]
    pub fn mode(&self, idx: usize) -> [Complex64; C] {
        let n = self.grid.len();
        std::array::from_fn(|c| self.data[c * n + idx])
    }

    #[inline]
    pub fn set_mode(&mut self, idx: usize, v: [Complex64; C]) {
        let n = self.grid.len();
        for (c, vc) in v.into_iter().enumerate() {
            self.data[c * n + idx] = vc;
        }
    }

    /// Replaces every mode `c(ξ)` by `f(idx, ξ, c(ξ))`.
    pub fn map_modes(&self, mut f: impl FnMut(usize, [f64; 3], [Complex64; C]) -> [Complex64; C]) -> Self {
        let mut out = Self::zeros(&self.grid);
        for idx in 0..self.grid.len() {
            let v = f(idx, self.grid.wavevector(idx), self.mode(idx));
            out.set_mode(idx, v);
        }
        out
    }

    /// Multiplies every component by a real scalar symbol.
    pub fn apply_symbol(&self, sym: impl Fn([f64; 3]) -> f64) -> Self {
        let n = self.grid.len();
        let weights: Vec<f64> = (0..n).map(|idx| sym(self.grid.wavevector(idx))).collect();
        let mut out = self.clone();
        for c in 0..C {
            for (v, w) in out.data[c * n..(c + 1) * n].iter_mut().zip(&weights) {
                *v *= *w;
            }
        }
        out
    }

    pub fn same_grid(&self, other: &Self) -> Result<()> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    /// `self += alpha * other`.
    pub fn add_scaled(&mut self, alpha: f64, other: &Self) {
        assert_eq!(self.data.len(), other.data.len(), "field size mismatch");
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b * alpha;
        }
    }

    pub fn scale(&mut self, alpha: f64) {
        for a in &mut self.data {
            *a *= alpha;
        }
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        let mut out = self.clone();
        out.scale(alpha);
        out
    }

    pub fn zero_mean(&mut self) {
        let n = self.grid.len();
        for c in 0..C {
            self.data[c * n] = ZERO;
        }
    }

    pub fn apply_dealias(&mut self) {
        let n = self.grid.len();
        for idx in 0..n {
            if !self.grid.is_retained(idx) {
                for c in 0..C {
                    self.data[c * n + idx] = ZERO;
                }
            }
        }
    }

    pub fn dealiased(&self) -> Self {
        let mut out = self.clone();
        out.apply_dealias();
        out
    }

    /// Projects onto Hermitian spectra: `c_k ← (c_k + conj c_{-k}) / 2`.
    pub fn enforce_hermitian(&mut self) {
        let n = self.grid.len();
        for c in 0..C {
            let comp = &mut self.data[c * n..(c + 1) * n];
            for idx in 0..n {
                let j = self.grid.conjugate_index(idx);
                if j < idx {
                    continue;
                }
                if j == idx {
                    comp[idx] = Complex64::new(comp[idx].re, 0.0);
                } else {
                    let avg = (comp[idx] + comp[j].conj()) * 0.5;
                    comp[idx] = avg;
                    comp[j] = avg.conj();
                }
            }
        }
    }

    /// `max |c_k - conj c_{-k}| / max |c_k|`, zero for the zero field.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.grid.len();
        let mut defect = 0.0f64;
        let mut scale = 0.0f64;
        for c in 0..C {
            let comp = &self.data[c * n..(c + 1) * n];
            for idx in 0..n {
                let j = self.grid.conjugate_index(idx);
                defect = defect.max((comp[idx] - comp[j].conj()).norm());
                scale = scale.max(comp[idx].norm());
            }
        }
        if scale == 0.0 {
            0.0
        } else {
            defect / scale
        }
    }

    pub fn max_abs_coefficient(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, c| m.max(c.norm()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// `Σ_k |c_k|²` over all components.
    pub fn coefficient_energy(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Real `L²` inner product `∫ u·v dx`.
    pub fn l2_inner(&self, other: &Self) -> f64 {
        assert_eq!(self.data.len(), other.data.len(), "field size mismatch");
        let s: f64 = self.data.iter().zip(&other.data).map(|(a, b)| (a.conj() * b).re).sum();
        self.grid.volume() * s
    }

    pub fn l2_norm(&self) -> f64 {
        (self.grid.volume() * self.coefficient_energy()).sqrt()
    }

    /// Synthesis to physical samples. Fails if the spectrum is not Hermitian.
    pub fn to_physical(&self) -> Result<PhysicalField<C>> {
        let defect = self.hermitian_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::HermitianViolation(defect));
        }
        Ok(self.to_physical_unchecked())
    }

    pub(crate) fn to_physical_unchecked(&self) -> PhysicalField<C> {
        let n = self.grid.len();
        let mut data = vec![0.0; C * n];
        let mut c = 0;
        while c < C {
            if c + 1 < C {
                let (a, b) = fft::inverse_pair(&self.grid, self.component(c), self.component(c + 1));
                data[c * n..(c + 1) * n].copy_from_slice(&a);
                data[(c + 1) * n..(c + 2) * n].copy_from_slice(&b);
                c += 2;
            } else {
                let a = fft::inverse_single(&self.grid, self.component(c));
                data[c * n..(c + 1) * n].copy_from_slice(&a);
                c += 1;
            }
        }
        PhysicalField { grid: self.grid.clone(), data }
    }

    /// Analysis of a physical field. The mean is removed from the spectrum
    /// and returned per component.
    pub fn from_physical(phys: &PhysicalField<C>) -> (Self, [f64; C]) {
        let grid = &phys.grid;
        let n = grid.len();
        let mut data = vec![ZERO; C * n];
        let mut c = 0;
        while c < C {
            if c + 1 < C {
                let (a, b) = fft::forward_pair(grid, phys.component(c), phys.component(c + 1));
                data[c * n..(c + 1) * n].copy_from_slice(&a);
                data[(c + 1) * n..(c + 2) * n].copy_from_slice(&b);
                c += 2;
            } else {
                let a = fft::forward_single(grid, phys.component(c));
                data[c * n..(c + 1) * n].copy_from_slice(&a);
                c += 1;
            }
        }
        let mut means = [0.0; C];
        for (c, m) in means.iter_mut().enumerate() {
            *m = data[c * n].re;
            data[c * n] = ZERO;
        }
        (Self { grid: grid.clone(), data }, means)
    }
}

impl<const C: usize> SpectralField<C> {
    /// Analysis keeping the mean in the zero mode.
    pub fn from_physical_with_mean(phys: &PhysicalField<C>) -> Self {
        let (mut f, means) = Self::from_physical(phys);
        let n = f.grid.len();
        for (c, m) in means.iter().enumerate() {
            f.data[c * n] = Complex64::new(*m, 0.0);
        }
        f
    }

    /// Copies coefficients onto another grid of the same box, dropping modes
    /// the target cannot represent.
    pub fn resample(&self, target: &Grid) -> Result<Self> {
        if (target.box_length() - self.grid.box_length()).abs() > 1e-12 * self.grid.box_length() {
            return Err(Error::GridMismatch);
        }
        let mut out = Self::zeros(target);
        let (n_src, n_dst) = (self.grid.len(), target.len());
        for idx in 0..n_src {
            if let Some(j) = target.index_of_mode(self.grid.integer_mode(idx)) {
                for c in 0..C {
                    out.data[c * n_dst + j] = self.data[c * n_src + idx];
                }
            }
        }
        out.enforce_hermitian();
        Ok(out)
    }
}

/// Dealiased pointwise product of two scalar spectra, mean included.
pub fn scalar_product(a: &SpectralScalar, b: &SpectralScalar) -> SpectralScalar {
    let pa = a.to_physical_unchecked();
    let pb = b.to_physical_unchecked();
    let data: Vec<f64> = pa.data.iter().zip(&pb.data).map(|(x, y)| x * y).collect();
    let prod = PhysicalField { grid: a.grid.clone(), data };
    let mut out = SpectralScalar::from_physical_with_mean(&prod);
    out.apply_dealias();
    out
}

impl<const C: usize> PhysicalField<C> {
    pub fn new(grid: &Grid, data: Vec<f64>) -> Result<Self> {
        let expected = C * grid.len();
        if data.len() != expected {
            return Err(Error::ShapeMismatch { expected, got: data.len() });
        }
        Ok(Self { grid: grid.clone(), data })
    }

    pub fn zeros(grid: &Grid) -> Self {
        Self { grid: grid.clone(), data: vec![0.0; C * grid.len()] }
    }

    pub fn from_fn(grid: &Grid, f: impl Fn([f64; 3]) -> [f64; C]) -> Self {
        let n = grid.len();
        let mut data = vec![0.0; C * n];
        for idx in 0..n {
            let v = f(grid.point(idx));
            for c in 0..C {
                data[c * n + idx] = v[c];
            }
        }
        Self { grid: grid.clone(), data }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn component(&self, c: usize) -> &[f64] {
        let n = self.grid.len();
        &self.data[c * n..(c + 1) * n]
    }

    /// Pointwise Euclidean norm of the vector at grid point `idx`.
    #[inline]
    pub fn magnitude_at(&self, idx: usize) -> f64 {
        let n = self.grid.len();
        (0..C).map(|c| self.data[c * n + idx].powi(2)).sum::<f64>().sqrt()
    }

    pub fn max_magnitude(&self) -> f64 {
        (0..self.grid.len()).fold(0.0f64, |m, idx| m.max(self.magnitude_at(idx)))
    }
}

/// Forward transform of a component-major sample array.
pub fn forward_transform<const C: usize>(grid: &Grid, samples: &[f64]) -> Result<(SpectralField<C>, [f64; C])> {
    let phys = PhysicalField::<C>::new(grid, samples.to_vec())?;
    Ok(SpectralField::from_physical(&phys))
}

pub fn inverse_transform<const C: usize>(field: &SpectralField<C>) -> Result<PhysicalField<C>> {
    field.to_physical()
}

impl<const C: usize> Add for &SpectralField<C> {
    type Output = SpectralField<C>;
    fn add(self, rhs: Self) -> SpectralField<C> {
        let mut out = self.clone();
        out.add_scaled(1.0, rhs);
        out
    }
}

impl<const C: usize> Sub for &SpectralField<C> {
    type Output = SpectralField<C>;
    fn sub(self, rhs: Self) -> SpectralField<C> {
        let mut out = self.clone();
        out.add_scaled(-1.0, rhs);
        out
    }
}

impl<const C: usize> Mul<f64> for &SpectralField<C> {
    type Output = SpectralField<C>;
    fn mul(self, rhs: f64) -> SpectralField<C> {
        self.scaled(rhs)
    }
}

impl<const C: usize> Neg for &SpectralField<C> {
    type Output = SpectralField<C>;
    fn neg(self) -> SpectralField<C> {
        self.scaled(-1.0)
    }
}
