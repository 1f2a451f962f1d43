use super::norms::{besov_norm, sobolev_norm, DyadicBlocks};
use crate::error::{Error, Result};
use crate::multipliers::{fractional_derivative, low_pass_symbol};
use crate::spectral::{norm2, scalar_product, SpectralScalar};

/// Paraproduct split `uv = T_u v + T_v u + R(u, v)` with
/// `T_u v = Σ_j S_{j-1}u Δ̇_j v` and `R(u, v) = Σ_{|j-j'| ≤ 1} Δ̇_j u Δ̇_{j'} v`.
/// All products are dealiased, so the three parts sum to the dealiased `uv`.
pub fn bony_split(u: &SpectralScalar, v: &SpectralScalar) -> Result<(SpectralScalar, SpectralScalar, SpectralScalar)> {
    u.same_grid(v)?;
    let g = u.grid();
    let blocks = DyadicBlocks::new(g);
    let js = blocks.indices();
    let du: Vec<Option<SpectralScalar>> = (0..blocks.len()).map(|b| blocks.apply(u, b)).collect();
    let dv: Vec<Option<SpectralScalar>> = (0..blocks.len()).map(|b| blocks.apply(v, b)).collect();
    let low = |f: &SpectralScalar, j: i32| f.apply_symbol(|xi| low_pass_symbol(j - 1, norm2(xi).sqrt()));

    let mut tuv = SpectralScalar::zeros(g);
    let mut tvu = SpectralScalar::zeros(g);
    let mut rem = SpectralScalar::zeros(g);
    for (b, &j) in js.iter().enumerate() {
        if let Some(dvj) = &dv[b] {
            tuv.add_scaled(1.0, &scalar_product(&low(u, j), dvj));
        }
        if let Some(duj) = &du[b] {
            tvu.add_scaled(1.0, &scalar_product(&low(v, j), duj));
            for (b2, &j2) in js.iter().enumerate() {
                if (j - j2).abs() <= 1 {
                    if let Some(dvj2) = &dv[b2] {
                        rem.add_scaled(1.0, &scalar_product(duj, dvj2));
                    }
                }
            }
        }
    }
    Ok((tuv, tvu, rem))
}

/// `M_s(f, g) = |D|^s(fg) - (|D|^s f) g - f |D|^s g`, the defect of the
/// Leibniz rule for `|D|^s`, from dealiased products.
pub fn m_s_operator(f: &SpectralScalar, g: &SpectralScalar, s: f64) -> Result<SpectralScalar> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::InvalidParameter(format!("M_s needs s in (0, 1), got {s}")));
    }
    f.same_grid(g)?;
    let mut out = fractional_derivative(&scalar_product(f, g), s);
    out.add_scaled(-1.0, &scalar_product(&fractional_derivative(f, s), g));
    out.add_scaled(-1.0, &scalar_product(f, &fractional_derivative(g, s)));
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InterpolationCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

/// Both sides of `‖u‖_{Ḃ^s_{2,1}} ≤ C ‖u‖^{β/(α+β)}_{Ḣ^{s-α}} ‖u‖^{α/(α+β)}_{Ḣ^{s+β}}`.
pub fn interpolation_check<const C: usize>(
    u: &crate::spectral::SpectralField<C>,
    s: f64,
    alpha: f64,
    beta: f64,
) -> Result<InterpolationCheck> {
    if !(alpha > 0.0 && beta > 0.0) {
        return Err(Error::InvalidParameter("interpolation needs alpha, beta > 0".into()));
    }
    let lhs = besov_norm(u, s, 2.0, 1.0)?;
    let th = alpha + beta;
    let rhs = sobolev_norm(u, s - alpha).powf(beta / th) * sobolev_norm(u, s + beta).powf(alpha / th);
    Ok(InterpolationCheck { lhs, rhs, ratio: if rhs > 0.0 { lhs / rhs } else { 0.0 } })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{Grid, PhysicalScalar};
    use num_complex::Complex64;
    use std::f64::consts::PI;

    fn cosine(g: &Grid, k: [f64; 3]) -> SpectralScalar {
        let phys = PhysicalScalar::from_fn(g, |x| [(k[0] * x[0] + k[1] * x[1] + k[2] * x[2]).cos()]);
        SpectralScalar::from_physical(&phys).0
    }

    fn max_abs(f: &SpectralScalar) -> f64 {
        f.max_abs_coefficient()
    }

    #[test]
    fn two_mode_leibniz_defect() {
        let g = Grid::cubic(16, 2.0 * PI).unwrap();
        let (k, kp) = ([1.0, 2.0, 0.0], [0.0, 1.0, -1.0]);
        let s = 0.4;
        let m = m_s_operator(&cosine(&g, k), &cosine(&g, kp), s).unwrap();
        let nrm = |v: [f64; 3]| norm2(v).sqrt().powf(s);
        let plus = [k[0] + kp[0], k[1] + kp[1], k[2] + kp[2]];
        let minus = [k[0] - kp[0], k[1] - kp[1], k[2] - kp[2]];
        let mut want = SpectralScalar::zeros(&g);
        for (q, sign) in [(plus, 1i64), (minus, 1), (plus, -1), (minus, -1)] {
            let w = 0.25 * (nrm(q) - nrm(k) - nrm(kp));
            let idx = g.index_of_mode([sign * q[0] as i64, sign * q[1] as i64, sign * q[2] as i64]).unwrap();
            want.data_mut()[idx] += Complex64::new(w, 0.0);
        }
        let d = &m - &want;
        assert!(max_abs(&d) < 1e-14);
        assert!(m_s_operator(&want, &want, 1.0).is_err());
    }

    #[test]
    fn leibniz_defect_is_symmetric() {
        let g = Grid::cubic(16, 2.0 * PI).unwrap();
        let f = crate::spectral::seeded_field::<1>(&g, 3);
        let h = crate::spectral::seeded_field::<1>(&g, 4);
        let a = m_s_operator(&f, &h, 0.5).unwrap();
        let b = m_s_operator(&h, &f, 0.5).unwrap();
        assert!(max_abs(&(&a - &b)) < 1e-15);
        let ff = m_s_operator(&f, &f, 0.5).unwrap();
        let mut want = fractional_derivative(&scalar_product(&f, &f), 0.5);
        want.add_scaled(-2.0, &scalar_product(&f, &fractional_derivative(&f, 0.5)));
        assert!(max_abs(&(&ff - &want)) < 1e-15);
    }

    #[test]
    fn bony_support_cases() {
        let g = Grid::cubic(48, 2.0 * PI).unwrap();
        let u = cosine(&g, [1.0, 0.0, 0.0]);
        let v = cosine(&g, [0.0, 12.0, 0.0]);
        let (tuv, tvu, r) = bony_split(&u, &v).unwrap();
        let prod = scalar_product(&u, &v);
        assert!(max_abs(&(&tuv - &prod)) < 1e-14);
        assert!(max_abs(&tvu) < 1e-14 && max_abs(&r) < 1e-14);
        let (a, b, r) = bony_split(&v, &v).unwrap();
        assert!(max_abs(&a) < 1e-14 && max_abs(&b) < 1e-14);
        assert!(max_abs(&(&r - &scalar_product(&v, &v))) < 1e-14);
    }

    #[test]
    fn bony_reconstructs_random_products() {
        let g = Grid::cubic(16, 2.0 * PI).unwrap();
        let u = crate::spectral::seeded_field::<1>(&g, 9);
        let v = crate::spectral::seeded_field::<1>(&g, 10);
        let (a, b, r) = bony_split(&u, &v).unwrap();
        let mut sum = a;
        sum.add_scaled(1.0, &b);
        sum.add_scaled(1.0, &r);
        let prod = scalar_product(&u, &v);
        assert!((&sum - &prod).l2_norm() <= 1e-11 * prod.l2_norm());
    }

    #[test]
    fn interpolation_single_mode_and_geometric_mean() {
        let g = Grid::cubic(32, 2.0 * PI).unwrap();
        let u = cosine(&g, [3.0, 0.0, 0.0]);
        let c = interpolation_check(&u, 0.5, 0.3, 0.3).unwrap();
        let gm = (sobolev_norm(&u, 0.2) * sobolev_norm(&u, 0.8)).sqrt();
        assert!((c.rhs - gm).abs() < 1e-12 * gm);
        assert!(c.ratio > 0.25 && c.ratio < 4.0);
        assert!(interpolation_check(&u, 0.5, 0.0, 1.0).is_err());
    }
}
