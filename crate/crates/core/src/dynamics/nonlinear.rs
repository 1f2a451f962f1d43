use num_complex::Complex64;

use crate::multipliers::leray_project;
use crate::spectral::{Grid, PhysicalField, PhysicalField4, PhysicalScalar, SpectralField, SpectralField4, SpectralScalar};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Physical samples of a state plus its largest velocity magnitude.
#[derive(Clone, Debug)]
pub struct Sampled {
    pub phys: PhysicalField4,
    pub max_speed: f64,
}

impl Sampled {
    pub fn new(f: &SpectralField4) -> Self {
        let phys = f.to_physical().unwrap_or_else(|_| {
            let mut g = f.clone();
            g.enforce_hermitian();
            g.to_physical().expect("hermitian after symmetrization")
        });
        let max_speed = max_speed(&phys);
        Self { phys, max_speed }
    }
}

/// Largest `|v|` over the grid, ignoring the temperature component.
pub fn max_speed(phys: &PhysicalField4) -> f64 {
    let (a, b, c) = (phys.component(0), phys.component(1), phys.component(2));
    a.iter().zip(b).zip(c).fold(0.0f64, |m, ((x, y), z)| m.max((x * x + y * y + z * z).sqrt()))
}

/// `dt max|v| k_max`, the advective CFL number on the retained modes.
pub fn cfl_number(dt: f64, speed: f64, grid: &Grid) -> f64 {
    dt * speed * grid.k_max_retained()
}

/// `-∂_j(a_j b)` for every component of `b`, dealiased. Equals `-(a·∇)b`
/// when `a` is divergence-free.
fn flux_divergence<const C: usize>(a: &PhysicalField4, b: &PhysicalField<C>) -> Vec<Complex64> {
    let grid = a.grid();
    let n = grid.len();
    let mut prod = vec![0.0; 3 * C * n];
    for j in 0..3 {
        let aj = a.component(j);
        for c in 0..C {
            let bc = b.component(c);
            let dst = &mut prod[(j * C + c) * n..(j * C + c + 1) * n];
            for ((d, x), y) in dst.iter_mut().zip(aj).zip(bc) {
                *d = x * y;
            }
        }
    }
    let mut out = vec![Complex64::new(0.0, 0.0); C * n];
    // transform the products two at a time through a 2-component field
    let mut spectra: Vec<Vec<Complex64>> = Vec::with_capacity(3 * C);
    for chunk in prod.chunks(2 * n) {
        if chunk.len() == 2 * n {
            let pf = PhysicalField::<2>::new(grid, chunk.to_vec()).expect("pair layout");
            let s = SpectralField::<2>::from_physical(&pf).0;
            spectra.push(s.component(0).to_vec());
            spectra.push(s.component(1).to_vec());
        } else {
            let pf = PhysicalField::<1>::new(grid, chunk.to_vec()).expect("single layout");
            spectra.push(SpectralField::<1>::from_physical(&pf).0.component(0).to_vec());
        }
    }
    let mask = grid.dealias_mask();
    for (idx, keep) in mask.iter().enumerate() {
        if !keep || idx == 0 {
            continue;
        }
        let xi = grid.wavevector(idx);
        for c in 0..C {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, x) in xi.iter().enumerate() {
                acc += spectra[j * C + c][idx] * *x;
            }
            out[c * n + idx] = -I * acc;
        }
    }
    out
}

/// `-ℙ((a·∇) b)` from physical samples.
pub fn advect_sampled(a: &PhysicalField4, b: &PhysicalField4) -> SpectralField4 {
    let data = flux_divergence(a, b);
    leray_project(&SpectralField4::from_coefficients(a.grid(), data).expect("layout"))
}

/// `-ℙ((a·∇) b)` for divergence-free `a`.
pub fn transport(a: &SpectralField4, b: &SpectralField4) -> SpectralField4 {
    advect_sampled(&Sampled::new(a).phys, &Sampled::new(b).phys)
}

/// `-ℙ((U·∇) U)` and the velocity maximum of `U`.
pub fn pe_nonlinearity(u: &SpectralField4) -> (SpectralField4, f64) {
    let s = Sampled::new(u);
    (advect_sampled(&s.phys, &s.phys), s.max_speed)
}

/// `-(v·∇) w` for a scalar `w` carried by the velocity of `a`.
pub fn scalar_advect(a: &PhysicalField4, w: &PhysicalScalar) -> SpectralScalar {
    let data = flux_divergence(a, w);
    SpectralScalar::from_coefficients(a.grid(), data).expect("layout")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipliers::leray_project;
    use crate::spectral::seeded_field;
    use std::f64::consts::PI;

    fn div_free(g: &Grid, seed: u64) -> SpectralField4 {
        let mut f = leray_project(&seeded_field::<4>(g, seed));
        f.apply_dealias();
        f
    }

    #[test]
    fn transport_is_energy_neutral() {
        let g = Grid::cubic(16, 2.0 * PI).unwrap();
        let a = div_free(&g, 1);
        let b = div_free(&g, 2);
        let t = transport(&a, &b);
        assert!(t.l2_inner(&b).abs() < 1e-13 * t.l2_norm() * b.l2_norm());
        let (n, _) = pe_nonlinearity(&a);
        assert!(n.l2_inner(&a).abs() < 1e-13 * n.l2_norm() * a.l2_norm());
    }

    #[test]
    fn shear_advection_oracle() {
        // a = (sin y, 0, 0, 0), b = (0, 0, 0, cos x): (a·∇)b = -sin y sin x on θ
        let g = Grid::cubic(16, 2.0 * PI).unwrap();
        let a = SpectralField4::from_physical(&PhysicalField4::from_fn(&g, |x| [x[1].sin(), 0.0, 0.0, 0.0])).0;
        let b = SpectralField4::from_physical(&PhysicalField4::from_fn(&g, |x| [0.0, 0.0, 0.0, x[0].cos()])).0;
        let got = transport(&a, &b).to_physical().unwrap();
        let want = PhysicalField4::from_fn(&g, |x| [0.0, 0.0, 0.0, x[1].sin() * x[0].sin()]);
        let err = got.data().iter().zip(want.data()).fold(0.0f64, |m, (p, q)| m.max((p - q).abs()));
        assert!(err < 1e-13, "{err}");
    }

    #[test]
    fn taylor_green_self_advection() {
        // v = (sin x cos y, -cos x sin y, 0): (v·∇)v = ½(sin 2x, sin 2y, 0), a pure
        // gradient, so the projected term vanishes
        let g = Grid::cubic(16, 2.0 * PI).unwrap();
        let tg = SpectralField4::from_physical(&PhysicalField4::from_fn(&g, |x| {
            [x[0].sin() * x[1].cos(), -x[0].cos() * x[1].sin(), 0.0, 0.0]
        }))
        .0;
        let (n, speed) = pe_nonlinearity(&tg);
        assert!(n.max_abs_coefficient() < 1e-14);
        assert!((speed - 1.0).abs() < 1e-12);
        // the unprojected flux divergence is -½(sin 2x, sin 2y)
        let s = Sampled::new(&tg);
        let raw = SpectralField4::from_coefficients(&g, flux_divergence(&s.phys, &s.phys)).unwrap();
        let want = PhysicalField4::from_fn(&g, |x| [-0.5 * (2.0 * x[0]).sin(), -0.5 * (2.0 * x[1]).sin(), 0.0, 0.0]);
        let got = raw.to_physical().unwrap();
        let err = got.data().iter().zip(want.data()).fold(0.0f64, |m, (p, q)| m.max((p - q).abs()));
        assert!(err < 1e-13, "{err}");
    }

    #[test]
    fn scalar_advection_matches_vector_component() {
        let g = Grid::cubic(12, 2.0 * PI).unwrap();
        let a = div_free(&g, 4);
        let b = div_free(&g, 5);
        let sa = Sampled::new(&a);
        let w = PhysicalScalar::new(&g, Sampled::new(&b).phys.component(3).to_vec()).unwrap();
        let s = scalar_advect(&sa.phys, &w);
        let v = transport(&a, &b);
        let d: f64 = s.component(0).iter().zip(v.component(3)).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        assert!(d < 1e-15);
        assert!(cfl_number(0.1, 2.0, &g) > 0.0);
    }
}
