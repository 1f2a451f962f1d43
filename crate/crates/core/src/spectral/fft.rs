//! Complex 3D FFTs built from batched 1D transforms, plus real-pair packing.

use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::grid::Grid;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Direction {
    Forward,
    Inverse,
}

fn planner() -> &'static Mutex<FftPlanner<f64>> {
    static PLANNER: OnceLock<Mutex<FftPlanner<f64>>> = OnceLock::new();
    PLANNER.get_or_init(|| Mutex::new(FftPlanner::new()))
}

fn plan(n: usize, dir: Direction) -> Arc<dyn Fft<f64>> {
    let mut p = planner().lock().expect("fft planner poisoned");
    match dir {
        Direction::Forward => p.plan_fft_forward(n),
        Direction::Inverse => p.plan_fft_inverse(n),
    }
}

/// Unnormalized in-place 3D transform of a single complex array.
pub(crate) fn fft3(grid: &Grid, data: &mut [Complex64], dir: Direction) {
    let [n1, n2, n3] = grid.dims();
    debug_assert_eq!(data.len(), n1 * n2 * n3);
    let mut tmp = vec![Complex64::new(0.0, 0.0); data.len()];

    let f3 = plan(n3, dir);
    let mut scratch = vec![Complex64::new(0.0, 0.0); f3.get_inplace_scratch_len()];
    f3.process_with_scratch(data, &mut scratch);

    // x2: transpose each (n2 x n3) plane.
    let f2 = plan(n2, dir);
    scratch.resize(f2.get_inplace_scratch_len(), Complex64::new(0.0, 0.0));
    let plane = n2 * n3;
    for (src, dst) in data.chunks_exact_mut(plane).zip(tmp.chunks_exact_mut(plane)) {
        transpose(src, dst, n2, n3);
        f2.process_with_scratch(dst, &mut scratch);
        transpose(dst, src, n3, n2);
    }

    // x1: view as (n1 x n2n3).
    let f1 = plan(n1, dir);
    scratch.resize(f1.get_inplace_scratch_len(), Complex64::new(0.0, 0.0));
    transpose(data, &mut tmp, n1, plane);
    f1.process_with_scratch(&mut tmp, &mut scratch);
    transpose(&tmp, data, plane, n1);
}

/// `dst[c * rows + r] = src[r * cols + c]`, blocked for cache reuse.
fn transpose(src: &[Complex64], dst: &mut [Complex64], rows: usize, cols: usize) {
    const B: usize = 16;
    for r0 in (0..rows).step_by(B) {
        for c0 in (0..cols).step_by(B) {
            for r in r0..(r0 + B).min(rows) {
                for c in c0..(c0 + B).min(cols) {
                    dst[c * rows + r] = src[r * cols + c];
                }
            }
        }
    }
}

/// Fourier-series coefficients of two real arrays with one complex FFT.
/// Output is normalized by `1/N`, so a coefficient of `1/2` at `±k` is `cos`.
pub(crate) fn forward_pair(grid: &Grid, a: &[f64], b: &[f64]) -> (Vec<Complex64>, Vec<Complex64>) {
    let n = grid.len();
    let mut z: Vec<Complex64> = a.iter().zip(b).map(|(&x, &y)| Complex64::new(x, y)).collect();
    fft3(grid, &mut z, Direction::Forward);
    let scale = 1.0 / n as f64;
    let mut fa = vec![Complex64::new(0.0, 0.0); n];
    let mut fb = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n {
        let zk = z[k];
        let zm = z[grid.conjugate_index(k)].conj();
        fa[k] = (zk + zm) * (0.5 * scale);
        // (zk - zm) / (2i)
        let d = zk - zm;
        fb[k] = Complex64::new(d.im, -d.re) * (0.5 * scale);
    }
    (fa, fb)
}

pub(crate) fn forward_single(grid: &Grid, a: &[f64]) -> Vec<Complex64> {
    let mut z: Vec<Complex64> = a.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    fft3(grid, &mut z, Direction::Forward);
    let scale = 1.0 / grid.len() as f64;
    let mut out = vec![Complex64::new(0.0, 0.0); z.len()];
    for k in 0..z.len() {
        out[k] = (z[k] + z[grid.conjugate_index(k)].conj()) * (0.5 * scale);
    }
    out
}

/// Synthesis of two Hermitian spectra with one complex FFT.
pub(crate) fn inverse_pair(grid: &Grid, fa: &[Complex64], fb: &[Complex64]) -> (Vec<f64>, Vec<f64>) {
    let mut z: Vec<Complex64> = fa
        .iter()
        .zip(fb)
        .map(|(&x, &y)| x + Complex64::new(-y.im, y.re))
        .collect();
    fft3(grid, &mut z, Direction::Inverse);
    (z.iter().map(|c| c.re).collect(), z.iter().map(|c| c.im).collect())
}

pub(crate) fn inverse_single(grid: &Grid, fa: &[Complex64]) -> Vec<f64> {
    let mut z = fa.to_vec();
    fft3(grid, &mut z, Direction::Inverse);
    z.iter().map(|c| c.re).collect()
}
