use nalgebra::Matrix4;
use num_complex::Complex64;
use proptest::prelude::*;
use qgpe::eigen::{
    apply_cmat4, asymptotic_eigenvalues, build_b, exact_eigen, expm, project_pi, tau, EigenTable, Pi,
};
use qgpe::multipliers::{freq_truncate, gamma_symbol, leray_project, norm_f2, osc_project, qg_project};
use qgpe::spectral::{norm2, seeded_field};
use qgpe::{Grid, PhysParams};
use std::f64::consts::PI;

fn params(eps: f64, f: f64, nu: f64, nup: f64) -> PhysParams {
    PhysParams::new(eps, f, nu, nup, 0.1, 0.2).unwrap()
}

fn slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.log10()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.log10()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

#[test]
fn equal_viscosity_closed_form_on_grid_modes() {
    let g = Grid::cubic(16, 2.0 * PI).unwrap();
    let p = params(0.05, 0.7, 0.02, 0.02);
    let mut checked = 0;
    for idx in 0..g.len() {
        let xi = g.wavevector(idx);
        let k2 = norm2(xi);
        if k2 == 0.0 {
            continue;
        }
        let e = exact_eigen(&build_b(xi, &p).unwrap());
        let w = norm_f2(xi, p.froude()).sqrt() / (p.epsilon() * p.froude() * k2.sqrt());
        let d = -p.nu() * k2;
        let tol = 1e-10 * (1.0 + w);
        assert!((e.mu0 - d).abs() < tol && (e.mu - d).abs() < tol, "{xi:?}");
        assert!((e.lambda - Complex64::new(d, w)).norm() < tol, "{xi:?}");
        assert!((e.lambda_bar - Complex64::new(d, -w)).norm() < tol, "{xi:?}");
        checked += 1;
    }
    assert!(checked >= 1000);
}

#[test]
fn matches_general_eigensolver_for_unequal_viscosity() {
    let p = params(0.02, 0.6, 0.3, 0.05);
    let g = Grid::cubic(16, 2.0 * PI).unwrap();
    let table = EigenTable::new(&g, &p).unwrap();
    assert!(!table.entries().is_empty());
    for (_, e) in table.entries().iter().step_by(7) {
        let m = build_b(e.xi, &p).unwrap();
        let na = Matrix4::from_fn(|i, j| m.b[i][j]);
        let mut oracle: Vec<Complex64> = na.complex_eigenvalues().iter().copied().collect();
        let mut ours = e.eigenvalues().to_vec();
        let key = |z: &Complex64| (z.im, z.re);
        oracle.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
        ours.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
        for (a, b) in ours.iter().zip(&oracle) {
            assert!((a - b).norm() <= 1e-9 * (1.0 + b.norm()), "{:?}: {a} vs {b}", e.xi);
        }
        assert!(e.well_separated);
        assert!(e.diagonalizable());
    }
}

#[test]
fn remainder_gaps_scale_with_epsilon() {
    let xi = [1.0, 2.0, 1.0];
    let eps = [1e-2, 5e-3, 2e-3, 1e-3, 5e-4, 2e-4, 1e-4];
    let mut gl = Vec::new();
    let mut gm = Vec::new();
    for &e in &eps {
        let p = params(e, 0.5, 0.3, 0.1);
        let ex = exact_eigen(&build_b(xi, &p).unwrap());
        let lead = asymptotic_eigenvalues(xi, &p).unwrap();
        // the cancellation-free corrections agree with the direct differences
        let direct = ex.lambda - lead.lambda;
        assert!((direct - ex.lambda_correction).norm() <= 1e-9 * ex.lambda.norm());
        assert!(((ex.mu - lead.mu) - ex.mu_correction).abs() <= 1e-12 * ex.mu.abs());
        gl.push(ex.lambda_correction.norm());
        gm.push(ex.mu_correction.abs());
    }
    assert!(slope(&eps, &gl) >= 0.9, "lambda slope {}", slope(&eps, &gl));
    assert!(slope(&eps, &gm) >= 1.8, "mu slope {}", slope(&eps, &gm));
}

#[test]
fn mu_lead_is_the_gamma_symbol_and_tau_is_bounded_below() {
    let g = Grid::new([8, 10, 12], 2.0 * PI).unwrap();
    let p = params(0.1, 1.7, 0.2, 0.05);
    for idx in 1..g.len() {
        let xi = g.wavevector(idx);
        let a = asymptotic_eigenvalues(xi, &p).unwrap();
        assert_eq!(a.mu, gamma_symbol(xi, &p));
        assert!(tau(xi, &p) >= p.nu0() - 1e-15);
    }
}

#[test]
fn real_parts_are_damped_on_truncated_support() {
    let g = Grid::cubic(16, 2.0 * PI).unwrap();
    let p = params(0.01, 0.5, 0.3, 0.1);
    for (_, e) in EigenTable::new(&g, &p).unwrap().entries() {
        let k2 = norm2(e.xi);
        assert!(e.lambda.re <= -0.5 * p.nu0() * k2);
        assert!(e.mu <= -0.5 * p.nu0() * k2);
        let w = norm_f2(e.xi, p.froude()).sqrt() / (p.epsilon() * p.froude() * k2.sqrt());
        assert!((e.lambda.im - w).abs() <= 10.0 * p.epsilon() * k2 * k2);
        assert_eq!(e.lambda_bar.im, -e.lambda.im);
    }
}

#[test]
fn inviscid_propagator_is_unitary_on_divergence_free_data() {
    let p = PhysParams::inviscid(0.1, 0.8).unwrap();
    let xi = [0.5, -1.0, 2.0];
    let m = build_b(xi, &p).unwrap();
    // divergence-free data: velocity orthogonal to ξ
    let w = [2.0, 1.0, 0.0, -0.7];
    for t in [0.01, 0.3, 5.0] {
        let tb: Vec<f64> = m.b.iter().flatten().map(|x| x * t).collect();
        let e = expm(&tb, 4);
        let out: Vec<f64> = (0..4).map(|i| (0..4).map(|j| e[i * 4 + j] * w[j]).sum()).collect();
        let n0: f64 = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        let n1: f64 = out.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!((n1 - n0).abs() < 1e-12 * n0, "t = {t}");
    }
}

#[test]
fn equal_viscosity_projectors_are_the_qg_splitting() {
    let g = Grid::cubic(16, 2.0 * PI).unwrap();
    let p = PhysParams::new(0.01, 0.6, 0.05, 0.05, 0.1, 0.24).unwrap();
    let f = leray_project(&seeded_field::<4>(&g, 11));
    let ft = freq_truncate(&f, p.r_eps(), p.big_r_eps()).unwrap();
    assert!(ft.l2_norm() > 1e-3 * f.l2_norm());
    let p2 = project_pi(&f, Pi::Two, &p).unwrap();
    let p34 = project_pi(&f, Pi::ThreeFour, &p).unwrap();
    let q = qg_project(&ft, p.froude());
    let o = osc_project(&ft, p.froude());
    let d2: f64 = p2.data().iter().zip(q.data()).fold(0.0, |m, (a, b)| m.max((a - b).norm()));
    let d34: f64 = p34.data().iter().zip(o.data()).fold(0.0, |m, (a, b)| m.max((a - b).norm()));
    let scale = ft.max_abs_coefficient();
    assert!(d2 < 1e-11 * scale && d34 < 1e-11 * scale, "{d2} {d34}");
    // ℙ3 + ℙ4 by parts
    let p3 = project_pi(&f, Pi::Three, &p).unwrap();
    let p4 = project_pi(&f, Pi::Four, &p).unwrap();
    for i in 0..p34.data().len() {
        assert!((p3.data()[i] + p4.data()[i] - p34.data()[i]).norm() < 1e-14 * scale);
    }
}

#[test]
fn projectors_sum_to_identity_on_truncated_divergence_free_fields() {
    let g = Grid::cubic(16, 2.0 * PI).unwrap();
    let p = PhysParams::new(0.01, 0.6, 0.3, 0.05, 0.1, 0.24).unwrap();
    let f = leray_project(&seeded_field::<4>(&g, 5));
    let ft = freq_truncate(&f, p.r_eps(), p.big_r_eps()).unwrap();
    let t = EigenTable::new(&g, &p).unwrap();
    let mut sum = t.project(&f, Pi::Two).unwrap();
    sum.add_scaled(1.0, &t.project(&f, Pi::ThreeFour).unwrap());
    let d: f64 = sum.data().iter().zip(ft.data()).fold(0.0, |m, (a, b)| m.max((a - b).norm()));
    assert!(d < 1e-10 * ft.max_abs_coefficient());
    assert!(sum.hermitian_defect() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn projector_algebra_on_random_modes(
        x in -4.0f64..4.0, y in -4.0f64..4.0, z in 0.3f64..4.0,
        eps in 0.005f64..0.2, nu in 0.01f64..0.5, nup in 0.01f64..0.5,
    ) {
        let p = PhysParams::new(eps, 0.6, nu, nup, 0.1, 0.2).unwrap();
        let xi = [x, y, z];
        let m = build_b(xi, &p).unwrap();
        let e = exact_eigen(&m);
        prop_assume!(e.well_separated);
        let ps = e.projectors.as_ref().unwrap();
        let tol = 1e-11 * e.condition;
        let bn = m.b.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs()));
        let eig = [Complex64::new(e.mu, 0.0), e.lambda, e.lambda_bar];
        for i in 0..3 {
            for j in 0..3 {
                for c in 0..4 {
                    let col: [Complex64; 4] = std::array::from_fn(|r| ps[j][r][c]);
                    let pc = apply_cmat4(&ps[i], &col);
                    for r in 0..4 {
                        let want = if i == j { col[r] } else { Complex64::new(0.0, 0.0) };
                        prop_assert!((pc[r] - want).norm() <= tol);
                    }
                }
            }
            // B P_i = z_i P_i
            for c in 0..4 {
                let col: [Complex64; 4] = std::array::from_fn(|r| ps[i][r][c]);
                let bc = qgpe::eigen::apply_mat4(&m.b, &col);
                for r in 0..4 {
                    prop_assert!((bc[r] - eig[i] * col[r]).norm() <= tol * bn);
                }
            }
        }
        // sum is the identity on the divergence-free subspace
        let k = norm2(xi).sqrt();
        let w = [Complex64::new(-y / k, 0.0), Complex64::new(x / k, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.3, -1.0)];
        let mut s = [Complex64::new(0.0, 0.0); 4];
        for pm in ps.iter() {
            let v = apply_cmat4(pm, &w);
            for r in 0..4 { s[r] += v[r]; }
        }
        for r in 0..4 {
            prop_assert!((s[r] - w[r]).norm() <= 1e-10 * e.condition.max(1.0));
        }
        prop_assert!(e.mu.is_finite());
    }
}
