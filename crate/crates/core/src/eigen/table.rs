use num_complex::Complex64;
use rayon::prelude::*;

use super::mode::{apply_cmat4, build_b, exact_eigen, ModeEigen};
use crate::error::{Error, Result};
use crate::multipliers::{freq_truncate, truncation_symbol, PhysParams};
use crate::spectral::{Grid, SpectralField4};

/// Which eigenprojector to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pi {
    Two,
    Three,
    Four,
    ThreeFour,
}

impl std::str::FromStr for Pi {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "2" => Ok(Pi::Two),
            "3" => Ok(Pi::Three),
            "4" => Ok(Pi::Four),
            "3+4" => Ok(Pi::ThreeFour),
            other => Err(Error::InvalidParameter(format!("unknown projector '{other}' (expected 2, 3, 4 or 3+4)"))),
        }
    }
}

/// Immutable eigen-structure of every grid mode in the support of
/// `P_{r_ε,R_ε}`.
#[derive(Clone, Debug)]
pub struct EigenTable {
    grid: Grid,
    params: PhysParams,
    entries: Vec<(usize, ModeEigen)>,
}

impl EigenTable {
    pub fn new(grid: &Grid, params: &PhysParams) -> Result<Self> {
        let (r, big_r) = (params.r_eps(), params.big_r_eps());
        let support: Vec<usize> = (0..grid.len())
            .filter(|&i| {
                let xi = grid.wavevector(i);
                xi != [0.0; 3] && truncation_symbol(r, big_r, xi) > 0.0
            })
            .collect();
        let entries = support
            .into_par_iter()
            .map(|i| build_b(grid.wavevector(i), params).map(|m| (i, exact_eigen(&m))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { grid: grid.clone(), params: *params, entries })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn params(&self) -> &PhysParams {
        &self.params
    }

    /// `(grid index, eigen-structure)` for each supported mode.
    pub fn entries(&self) -> &[(usize, ModeEigen)] {
        &self.entries
    }

    /// `ℙ_i P_{r_ε,R_ε} f`. `ℙ3` and `ℙ4` alone do not preserve real fields.
    pub fn project(&self, f: &SpectralField4, which: Pi) -> Result<SpectralField4> {
        if f.grid() != &self.grid {
            return Err(Error::GridMismatch);
        }
        let truncated = freq_truncate(f, self.params.r_eps(), self.params.big_r_eps())?;
        let mut out = SpectralField4::zeros(&self.grid);
        let mut missing = Vec::new();
        for (idx, e) in &self.entries {
            let u = truncated.mode(*idx);
            if u.iter().all(|c| c.norm() == 0.0) {
                continue;
            }
            let Some(ps) = &e.projectors else {
                missing.push(self.grid.integer_mode(*idx));
                continue;
            };
            let v = match which {
                Pi::Two => apply_cmat4(&ps[0], &u),
                Pi::Three => apply_cmat4(&ps[1], &u),
                Pi::Four => apply_cmat4(&ps[2], &u),
                Pi::ThreeFour => {
                    let a = apply_cmat4(&ps[1], &u);
                    let b = apply_cmat4(&ps[2], &u);
                    std::array::from_fn::<Complex64, 4, _>(|k| a[k] + b[k])
                }
            };
            out.set_mode(*idx, v);
        }
        if !missing.is_empty() {
            let shown: Vec<String> = missing.iter().take(8).map(|k| format!("{k:?}")).collect();
            return Err(Error::EigenFailure {
                xi: self.grid.wavevector(self.grid.index_of_mode(missing[0]).unwrap_or(0)),
                reason: format!(
                    "{} mode(s) lack eigenprojectors (not well separated): {}{}",
                    missing.len(),
                    shown.join(", "),
                    if missing.len() > 8 { ", ..." } else { "" }
                ),
            });
        }
        Ok(out)
    }
}

/// One-shot `ℙ_i` on `f`; builds a fresh table.
pub fn project_pi(f: &SpectralField4, which: Pi, params: &PhysParams) -> Result<SpectralField4> {
    EigenTable::new(f.grid(), params)?.project(f, which)
}
