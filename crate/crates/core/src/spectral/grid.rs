use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Uniform periodic grid on the cube `[0, L)^3`.
///
/// Index layout is row-major with `x3` fastest: `idx = (i1 * n2 + i2) * n3 + i3`.
/// Wavenumber index `i` maps to the integer mode `i` for `i <= n/2` and `i - n`
/// otherwise, so the physical wavevector is `2π/L * k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    n: [usize; 3],
    box_length: f64,
    modes: [Vec<i64>; 3],
    wavenumbers: [Vec<f64>; 3],
}

impl Grid {
    pub fn new(n: [usize; 3], box_length: f64) -> Result<Self> {
        for (axis, &na) in n.iter().enumerate() {
            if na < 8 {
                return Err(Error::InvalidGrid(format!("n{} = {na} is too small (need >= 8)", axis + 1)));
            }
            if na % 2 != 0 {
                return Err(Error::InvalidGrid(format!("n{} = {na} must be even", axis + 1)));
            }
        }
        if !(box_length.is_finite() && box_length > 0.0) {
            return Err(Error::InvalidGrid(format!("box length {box_length} must be positive")));
        }
        let kmin = 2.0 * PI / box_length;
        let modes = n.map(|na| (0..na).map(|i| signed_mode(i, na)).collect::<Vec<_>>());
        let wavenumbers = [0, 1, 2].map(|a| modes[a].iter().map(|&k| kmin * k as f64).collect());
        Ok(Self { n, box_length, modes, wavenumbers })
    }

    pub fn cubic(n: usize, box_length: f64) -> Result<Self> {
        Self::new([n; 3], box_length)
    }

    pub fn dims(&self) -> [usize; 3] {
        self.n
    }

    pub fn len(&self) -> usize {
        self.n[0] * self.n[1] * self.n[2]
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn box_length(&self) -> f64 {
        self.box_length
    }

    /// Volume of the periodic box, `L^3`.
    pub fn volume(&self) -> f64 {
        self.box_length.powi(3)
    }

    /// Lowest nonzero wavenumber `2π/L`.
    pub fn kmin(&self) -> f64 {
        2.0 * PI / self.box_length
    }

    pub fn spacing(&self) -> [f64; 3] {
        self.n.map(|na| self.box_length / na as f64)
    }

    #[inline]
    pub fn index(&self, i: [usize; 3]) -> usize {
        (i[0] * self.n[1] + i[1]) * self.n[2] + i[2]
    }

    #[inline]
    pub fn unravel(&self, idx: usize) -> [usize; 3] {
        let i3 = idx % self.n[2];
        let rest = idx / self.n[2];
        [rest / self.n[1], rest % self.n[1], i3]
    }

    #[inline]
    pub fn integer_mode(&self, idx: usize) -> [i64; 3] {
        let i = self.unravel(idx);
        [self.modes[0][i[0]], self.modes[1][i[1]], self.modes[2][i[2]]]
    }

    #[inline]
    pub fn wavevector(&self, idx: usize) -> [f64; 3] {
        let i = self.unravel(idx);
        [self.wavenumbers[0][i[0]], self.wavenumbers[1][i[1]], self.wavenumbers[2][i[2]]]
    }

    /// Index of the mode `-k`.
    #[inline]
    pub fn conjugate_index(&self, idx: usize) -> usize {
        let i = self.unravel(idx);
        self.index([0, 1, 2].map(|a| (self.n[a] - i[a]) % self.n[a]))
    }

    /// Index of the integer mode `k`, if it is representable on this grid.
    pub fn index_of_mode(&self, k: [i64; 3]) -> Option<usize> {
        let mut i = [0usize; 3];
        for a in 0..3 {
            let na = self.n[a] as i64;
            if k[a] <= -na / 2 || k[a] > na / 2 {
                return None;
            }
            i[a] = k[a].rem_euclid(na) as usize;
        }
        Some(self.index(i))
    }

    /// Two-thirds rule with a strict inequality: mode `k` survives iff
    /// `3|k_j| < n_j` on every axis.
    #[inline]
    pub fn is_retained(&self, idx: usize) -> bool {
        let k = self.integer_mode(idx);
        (0..3).all(|a| 3 * k[a].unsigned_abs() < self.n[a] as u64)
    }

    pub fn dealias_mask(&self) -> Vec<bool> {
        (0..self.len()).map(|idx| self.is_retained(idx)).collect()
    }

    /// Retained nonzero modes, in storage order.
    pub fn retained_modes(&self) -> Vec<usize> {
        (1..self.len()).filter(|&idx| self.is_retained(idx)).collect()
    }

    /// Largest `|ξ|` among retained modes.
    pub fn k_max_retained(&self) -> f64 {
        let kc = self.n.map(|na| ((na as i64 - 1) / 3) as f64);
        self.kmin() * (kc[0] * kc[0] + kc[1] * kc[1] + kc[2] * kc[2]).sqrt()
    }

    /// Largest `|ξ|` on the full grid.
    pub fn k_max(&self) -> f64 {
        let kc = self.n.map(|na| (na / 2) as f64);
        self.kmin() * (kc[0] * kc[0] + kc[1] * kc[1] + kc[2] * kc[2]).sqrt()
    }

    /// Physical coordinates of grid point `idx`.
    pub fn point(&self, idx: usize) -> [f64; 3] {
        let i = self.unravel(idx);
        let h = self.spacing();
        [i[0] as f64 * h[0], i[1] as f64 * h[1], i[2] as f64 * h[2]]
    }
}

fn signed_mode(i: usize, n: usize) -> i64 {
    if i <= n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

#[inline]
pub fn norm2(xi: [f64; 3]) -> f64 {
    xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_odd_and_tiny() {
        assert!(matches!(Grid::cubic(15, 1.0), Err(Error::InvalidGrid(_))));
        assert!(matches!(Grid::new([16, 16, 6], 1.0), Err(Error::InvalidGrid(_))));
        assert!(Grid::cubic(16, 0.0).is_err());
    }

    #[test]
    fn wavenumber_ordering() {
        let g = Grid::cubic(8, 2.0 * PI).unwrap();
        let ks: Vec<i64> = (0..8).map(|i| g.integer_mode(g.index([0, 0, i]))[2]).collect();
        assert_eq!(ks, vec![0, 1, 2, 3, 4, -3, -2, -1]);
        assert_eq!(g.wavevector(g.index([1, 7, 0])), [1.0, -1.0, 0.0]);
    }

    #[test]
    fn conjugate_index_negates_modes() {
        let g = Grid::new([8, 10, 12], 3.0).unwrap();
        for idx in 0..g.len() {
            let k = g.integer_mode(idx);
            let kc = g.integer_mode(g.conjugate_index(idx));
            for a in 0..3 {
                let na = g.dims()[a] as i64;
                assert_eq!((k[a] + kc[a]).rem_euclid(na), 0);
            }
            assert_eq!(g.conjugate_index(g.conjugate_index(idx)), idx);
        }
    }

    #[test]
    fn strict_two_thirds_mask() {
        let g = Grid::cubic(48, 1.0).unwrap();
        assert!(g.is_retained(g.index_of_mode([15, 0, 0]).unwrap()));
        assert!(!g.is_retained(g.index_of_mode([16, 0, 0]).unwrap()));
        assert!(!g.is_retained(g.index_of_mode([0, -16, 0]).unwrap()));
        let g = Grid::cubic(16, 1.0).unwrap();
        assert!(g.is_retained(g.index_of_mode([5, -5, 5]).unwrap()));
        assert!(!g.is_retained(g.index_of_mode([6, 0, 0]).unwrap()));
    }

    #[test]
    fn index_round_trip() {
        let g = Grid::new([8, 10, 12], 1.0).unwrap();
        for idx in 0..g.len() {
            assert_eq!(g.index(g.unravel(idx)), idx);
            assert_eq!(g.index_of_mode(g.integer_mode(idx)), Some(idx));
        }
        assert_eq!(g.index_of_mode([5, 0, 0]), None);
        assert_eq!(g.index_of_mode([-4, 0, 0]), None);
    }
}
