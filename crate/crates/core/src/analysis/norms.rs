use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::multipliers::{dyadic_range, dyadic_symbol};
use crate::spectral::{norm2, Grid, PhysicalField, SpectralField};

/// `‖f‖_{Ḣ^s}`; the zero mode is ignored.
pub fn sobolev_norm<const C: usize>(f: &SpectralField<C>, s: f64) -> f64 {
    let g = f.grid();
    let n = g.len();
    let mut acc = 0.0;
    for idx in 1..n {
        let k2 = norm2(g.wavevector(idx));
        let w = if s == 0.0 { 1.0 } else { k2.powf(s) };
        for c in 0..C {
            acc += w * f.data()[c * n + idx].norm_sqr();
        }
    }
    (g.volume() * acc).sqrt()
}

fn check_exponent(p: f64, name: &str) -> Result<()> {
    if p >= 1.0 || p == f64::INFINITY {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must lie in [1, ∞], got {p}")))
    }
}

/// `L^p` norm of physical samples, by grid quadrature; vectors use the
/// pointwise Euclidean norm.
pub fn lebesgue_norm_physical<const C: usize>(f: &PhysicalField<C>, p: f64) -> Result<f64> {
    check_exponent(p, "p")?;
    let g = f.grid();
    if p == f64::INFINITY {
        return Ok(f.max_magnitude());
    }
    let cell = g.volume() / g.len() as f64;
    let sum: f64 = if p == 2.0 {
        f.data().iter().map(|x| x * x).sum()
    } else {
        (0..g.len()).map(|i| f.magnitude_at(i).powf(p)).sum()
    };
    Ok((cell * sum).powf(1.0 / p))
}

pub fn lebesgue_norm<const C: usize>(f: &SpectralField<C>, p: f64) -> Result<f64> {
    lebesgue_norm_physical(&f.to_physical()?, p)
}

/// Sparse symbols of the homogeneous dyadic blocks that touch the grid.
#[derive(Clone, Debug)]
pub struct DyadicBlocks {
    grid: Grid,
    blocks: Vec<(i32, Vec<(usize, f64)>)>,
}

impl DyadicBlocks {
    pub fn new(grid: &Grid) -> Self {
        let (jmin, jmax) = dyadic_range(grid);
        let blocks = (jmin..=jmax)
            .map(|j| {
                let w: Vec<(usize, f64)> = (1..grid.len())
                    .filter_map(|idx| {
                        let v = dyadic_symbol(j, norm2(grid.wavevector(idx)).sqrt());
                        (v > 0.0).then_some((idx, v))
                    })
                    .collect();
                (j, w)
            })
            .filter(|(_, w)| !w.is_empty())
            .collect();
        Self { grid: grid.clone(), blocks }
    }

    pub fn indices(&self) -> Vec<i32> {
        self.blocks.iter().map(|(j, _)| *j).collect()
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// `Δ̇_j f` for the `b`-th stored block, `None` if `f` vanishes there.
    pub fn apply<const C: usize>(&self, f: &SpectralField<C>, b: usize) -> Option<SpectralField<C>> {
        let n = self.grid.len();
        let mut out = SpectralField::<C>::zeros(&self.grid);
        let mut any = false;
        for &(idx, w) in &self.blocks[b].1 {
            for c in 0..C {
                let v = f.data()[c * n + idx];
                if v.norm_sqr() > 0.0 {
                    any = true;
                    out.data_mut()[c * n + idx] = v * w;
                }
            }
        }
        any.then_some(out)
    }

    /// `(j, ‖Δ̇_j f‖_{L^p})` for every stored block.
    pub fn lp_norms<const C: usize>(&self, f: &SpectralField<C>, p: f64) -> Result<Vec<(i32, f64)>> {
        Ok(self.lp_norms_multi(f, &[p])?.pop().unwrap_or_default())
    }

    /// [`Self::lp_norms`] for several exponents, transforming each block once.
    pub fn lp_norms_multi<const C: usize>(&self, f: &SpectralField<C>, ps: &[f64]) -> Result<Vec<Vec<(i32, f64)>>> {
        if f.grid() != &self.grid {
            return Err(Error::GridMismatch);
        }
        let mut out = vec![Vec::with_capacity(self.blocks.len()); ps.len()];
        for b in 0..self.blocks.len() {
            let j = self.blocks[b].0;
            let Some(blk) = self.apply(f, b) else {
                out.iter_mut().for_each(|o| o.push((j, 0.0)));
                continue;
            };
            let phys = if ps.iter().any(|p| *p != 2.0) { Some(blk.to_physical()?) } else { None };
            for (o, &p) in out.iter_mut().zip(ps) {
                let v = match &phys {
                    Some(ph) if p != 2.0 => lebesgue_norm_physical(ph, p)?,
                    _ => blk.l2_norm(),
                };
                o.push((j, v));
            }
        }
        Ok(out)
    }
}

/// `ℓ^q` sum of `2^{js} a_j`.
pub fn weighted_lq(blocks: &[(i32, f64)], s: f64, q: f64) -> f64 {
    let terms = blocks.iter().map(|&(j, a)| 2f64.powf(j as f64 * s) * a);
    if q == f64::INFINITY {
        terms.fold(0.0, f64::max)
    } else {
        terms.map(|t| t.powf(q)).sum::<f64>().powf(1.0 / q)
    }
}

/// `‖f‖_{Ḃ^s_{p,q}}` over the resolved blocks.
pub fn besov_norm<const C: usize>(f: &SpectralField<C>, s: f64, p: f64, q: f64) -> Result<f64> {
    check_exponent(p, "p")?;
    check_exponent(q, "q")?;
    let blocks = DyadicBlocks::new(f.grid()).lp_norms(f, p)?;
    Ok(weighted_lq(&blocks, s, q))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NormKind {
    SobolevDot,
    Lebesgue,
    BesovDot,
    EnergyE,
}

/// A norm to record. `rho` turns an instantaneous norm into a time norm:
/// `L^ρ_T` of the instantaneous value, or the Chemin–Lerner norm for Besov.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormSpec {
    pub kind: NormKind,
    pub s: f64,
    pub p: f64,
    pub q: f64,
    pub rho: Option<f64>,
}

impl NormSpec {
    pub fn sobolev(s: f64) -> Self {
        Self { kind: NormKind::SobolevDot, s, p: 2.0, q: 2.0, rho: None }
    }

    pub fn lebesgue(p: f64) -> Self {
        Self { kind: NormKind::Lebesgue, s: 0.0, p, q: p, rho: None }
    }

    pub fn besov(s: f64, p: f64, q: f64) -> Self {
        Self { kind: NormKind::BesovDot, s, p, q, rho: None }
    }

    pub fn energy(s: f64) -> Self {
        Self { kind: NormKind::EnergyE, s, p: 2.0, q: 2.0, rho: None }
    }

    pub fn in_time(mut self, rho: f64) -> Self {
        self.rho = Some(rho);
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_exponent(self.p, "p")?;
        check_exponent(self.q, "q")?;
        if let Some(r) = self.rho {
            check_exponent(r, "rho")?;
        }
        if self.kind == NormKind::EnergyE && self.rho.is_some() {
            return Err(Error::InvalidParameter("the energy norm is already a time norm".into()));
        }
        Ok(())
    }

    /// Value at one instant. Time norms are rejected.
    pub fn evaluate<const C: usize>(&self, f: &SpectralField<C>) -> Result<f64> {
        self.validate()?;
        if self.rho.is_some() || self.kind == NormKind::EnergyE {
            return Err(Error::InvalidParameter(format!("{self} needs a time series")));
        }
        match self.kind {
            NormKind::SobolevDot => Ok(sobolev_norm(f, self.s)),
            NormKind::Lebesgue => lebesgue_norm(f, self.p),
            NormKind::BesovDot => besov_norm(f, self.s, self.p, self.q),
            NormKind::EnergyE => unreachable!(),
        }
    }

    /// Value over a sampled trajectory. Without `rho` this is the sup in time.
    pub fn evaluate_series<const C: usize>(
        &self,
        times: &[f64],
        fields: &[SpectralField<C>],
        nu0: f64,
    ) -> Result<f64> {
        self.validate()?;
        super::time::check_series(times, fields.len())?;
        match (self.kind, self.rho) {
            (NormKind::EnergyE, _) => super::time::energy_norm(times, fields, self.s, nu0),
            (NormKind::BesovDot, Some(rho)) => {
                super::time::chemin_lerner_norm(times, fields, rho, self.s, self.p, self.q)
            }
            (_, rho) => {
                let inst = Self { rho: None, ..*self };
                let vals = fields.iter().map(|f| inst.evaluate(f)).collect::<Result<Vec<_>>>()?;
                Ok(super::time::time_lebesgue(times, &vals, rho.unwrap_or(f64::INFINITY)))
            }
        }
    }
}

fn fmt_exp(x: f64) -> String {
    if x == f64::INFINITY {
        "inf".into()
    } else {
        format!("{x}")
    }
}

impl fmt::Display for NormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = match self.kind {
            NormKind::SobolevDot => format!("hdot:{}", self.s),
            NormKind::Lebesgue => format!("lp:{}", fmt_exp(self.p)),
            NormKind::BesovDot => format!("besov:{},{},{}", self.s, fmt_exp(self.p), fmt_exp(self.q)),
            NormKind::EnergyE => format!("energy:{}", self.s),
        };
        match self.rho {
            Some(r) => write!(f, "{base}@{}", fmt_exp(r)),
            None => write!(f, "{base}"),
        }
    }
}

fn parse_exp(s: &str) -> Result<f64> {
    match s.trim() {
        "inf" | "∞" => Ok(f64::INFINITY),
        t => t.parse().map_err(|_| Error::InvalidParameter(format!("bad exponent '{t}'"))),
    }
}

/// `hdot:S`, `lp:P`, `besov:S,P,Q`, `energy:S`, each optionally followed by
/// `@RHO` for a time norm (e.g. `lp:inf@2`).
impl FromStr for NormSpec {
    type Err = Error;
    fn from_str(text: &str) -> Result<Self> {
        let (body, rho) = match text.split_once('@') {
            Some((b, r)) => (b, Some(parse_exp(r)?)),
            None => (text, None),
        };
        let (kind, args) = body
            .split_once(':')
            .ok_or_else(|| Error::InvalidParameter(format!("norm '{text}' lacks ':'")))?;
        let nums = args.split(',').map(parse_exp).collect::<Result<Vec<_>>>()?;
        let want = |n: usize| {
            if nums.len() == n {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("norm '{text}' expects {n} argument(s)")))
            }
        };
        let spec = match kind.trim() {
            "hdot" => {
                want(1)?;
                Self::sobolev(nums[0])
            }
            "lp" => {
                want(1)?;
                Self::lebesgue(nums[0])
            }
            "besov" => {
                want(3)?;
                Self::besov(nums[0], nums[1], nums[2])
            }
            "energy" => {
                want(1)?;
                Self::energy(nums[0])
            }
            other => return Err(Error::InvalidParameter(format!("unknown norm kind '{other}'"))),
        };
        let spec = Self { rho, ..spec };
        spec.validate()?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{PhysicalScalar, SpectralScalar};
    use std::f64::consts::PI;

    fn sine(g: &Grid, k: [f64; 3]) -> SpectralScalar {
        let phys = PhysicalScalar::from_fn(g, |x| [(k[0] * x[0] + k[1] * x[1] + k[2] * x[2]).sin()]);
        SpectralScalar::from_physical(&phys).0
    }

    #[test]
    fn sobolev_of_a_sine() {
        let g = Grid::cubic(16, 2.0 * PI).unwrap();
        let f = sine(&g, [2.0, 1.0, 0.0]);
        let l2 = f.l2_norm();
        assert!((sobolev_norm(&f, 0.0) - l2).abs() < 1e-13);
        for s in [0.5, 1.0, -0.5] {
            assert!((sobolev_norm(&f, s) - 5f64.powf(0.5 * s) * l2).abs() < 1e-12 * l2);
        }
    }

    #[test]
    fn lebesgue_of_a_sine() {
        let g = Grid::cubic(16, 2.0 * PI).unwrap();
        let f = sine(&g, [1.0, 0.0, 0.0]);
        assert!((lebesgue_norm(&f, f64::INFINITY).unwrap() - 1.0).abs() < 1e-12);
        let vol = g.volume();
        assert!((lebesgue_norm(&f, 2.0).unwrap() - (0.5 * vol).sqrt()).abs() < 1e-12);
        // ∫ sin⁴ = 3/8 of the volume
        assert!((lebesgue_norm(&f, 4.0).unwrap() - (0.375 * vol).powf(0.25)).abs() < 1e-12);
        assert!(lebesgue_norm(&f, 0.5).is_err());
    }

    #[test]
    fn single_block_besov_is_sobolev_up_to_annulus() {
        let g = Grid::cubic(32, 2.0 * PI).unwrap();
        let f = sine(&g, [3.0, 0.0, 0.0]);
        for s in [0.5, 1.0] {
            let h = sobolev_norm(&f, s);
            for q in [1.0, 2.0, f64::INFINITY] {
                let b = besov_norm(&f, s, 2.0, q).unwrap();
                let r = b / h;
                assert!(r >= 2f64.powf(-s) * 0.5 && r <= 2f64.powf(s) * 2.0, "q = {q}: {r}");
            }
        }
    }

    #[test]
    fn norm_spec_round_trip() {
        for t in ["hdot:0.5", "lp:inf@2", "besov:0.5,2,1", "energy:0.5", "besov:0,inf,2@inf"] {
            let n: NormSpec = t.parse().unwrap();
            assert_eq!(n.to_string(), t);
        }
        assert!("lp:0.5".parse::<NormSpec>().is_err());
        assert!("energy:0.5@2".parse::<NormSpec>().is_err());
        assert!("foo:1".parse::<NormSpec>().is_err());
        assert!("besov:1,2".parse::<NormSpec>().is_err());
    }
}
