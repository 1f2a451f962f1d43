mod common;

use common::{advective, hs_inner, qg_field};
use proptest::prelude::*;
use qgpe::dynamics::{scalar_advect, transport};
use qgpe::multipliers::{
    diffusion_apply, dyadic_range, freq_truncate, gamma_apply, leray_project, lp_block, osc_project,
    potential_vorticity, qg_project,
};
use qgpe::spectral::{seeded_field, SpectralScalar};
use qgpe::{Grid, PhysParams, SpectralField4};
use std::f64::consts::PI;

fn grid() -> Grid {
    Grid::cubic(16, 2.0 * PI).unwrap()
}

fn rel(a: &SpectralField4, b: &SpectralField4, scale: f64) -> f64 {
    (a - b).l2_norm() / scale
}

#[test]
fn qg_form_fields_are_fixed_points() {
    let g = grid();
    for seed in 0..5 {
        let u = qg_field(&g, seed, 0.7);
        assert!(rel(&qg_project(&u, 0.7), &u, u.l2_norm()) < 1e-13);
        assert!(osc_project(&u, 0.7).l2_norm() < 1e-13 * u.l2_norm());
        assert!(potential_vorticity(&osc_project(&seeded_field::<4>(&g, seed), 0.7), 0.7).l2_norm() < 1e-13);
    }
}

#[test]
fn diagonal_multipliers_commute() {
    let g = grid();
    let p = PhysParams::new(0.1, 0.6, 0.3, 0.1, 0.1, 0.2).unwrap();
    let u = seeded_field::<4>(&g, 9);
    let a = qg_project(&freq_truncate(&u, 0.8, 4.0).unwrap(), 0.6);
    let b = freq_truncate(&qg_project(&u, 0.6), 0.8, 4.0).unwrap();
    assert!(rel(&a, &b, u.l2_norm()) < 1e-14);
    let (j0, j1) = dyadic_range(&g);
    for j in j0..=j1 {
        let a = gamma_apply(&lp_block(&u, j), &p);
        let b = lp_block(&gamma_apply(&u, &p), j);
        assert!(rel(&a, &b, gamma_apply(&u, &p).l2_norm()) < 1e-14);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn qg_and_osc_parts_decompose(seed in any::<u64>(), froude in 0.2f64..3.0) {
        prop_assume!((froude - 1.0).abs() > 1e-3);
        let g = grid();
        let u = seeded_field::<4>(&g, seed);
        let n = u.l2_norm();
        let (q, p) = (qg_project(&u, froude), osc_project(&u, froude));
        prop_assert!(rel(&(&q + &p), &u, n) < 1e-13);
        prop_assert!(rel(&qg_project(&q, froude), &q, n) < 1e-13);
        prop_assert!(rel(&osc_project(&p, froude), &p, n) < 1e-13);
        prop_assert!(qg_project(&p, froude).l2_norm() < 1e-13 * n);
        prop_assert!(osc_project(&q, froude).l2_norm() < 1e-13 * n);
    }

    #[test]
    fn qg_and_osc_parts_are_orthogonal(seed in any::<u64>(), froude in 0.2f64..3.0) {
        prop_assume!((froude - 1.0).abs() > 1e-3);
        let g = grid();
        let u = leray_project(&seeded_field::<4>(&g, seed));
        let (q, p) = (qg_project(&u, froude), osc_project(&u, froude));
        for s in [0.0, 0.5] {
            let scale = hs_inner(&u, &u, s);
            prop_assert!(hs_inner(&p, &q, s).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn leray_commutes_with_the_splitting(seed in any::<u64>(), froude in 0.2f64..3.0) {
        prop_assume!((froude - 1.0).abs() > 1e-3);
        let g = grid();
        let u = seeded_field::<4>(&g, seed);
        let n = u.l2_norm();
        prop_assert!(rel(&leray_project(&osc_project(&u, froude)), &osc_project(&leray_project(&u), froude), n) < 1e-12);
        let q = qg_project(&u, froude);
        prop_assert!(rel(&leray_project(&q), &q, n) < 1e-12);
        prop_assert!(rel(&qg_project(&leray_project(&u), froude), &q, n) < 1e-12);
    }

    #[test]
    fn gamma_is_the_qg_part_of_the_diffusion(
        seed in any::<u64>(), froude in 0.2f64..3.0, nu in 0.01f64..1.0, nup in 0.01f64..1.0,
    ) {
        prop_assume!((froude - 1.0).abs() > 1e-3);
        let p = PhysParams::new(0.1, froude, nu, nup, 0.1, 0.2).unwrap();
        let u = qg_field(&grid(), seed, froude);
        let lhs = gamma_apply(&u, &p);
        let rhs = qg_project(&diffusion_apply(&u, &p), froude);
        prop_assert!(rel(&lhs, &rhs, lhs.l2_norm()) < 1e-12);
    }

    #[test]
    fn potential_vorticity_is_transported(seed in any::<u64>(), froude in 0.2f64..3.0) {
        prop_assume!((froude - 1.0).abs() > 1e-3);
        let u = qg_field(&grid(), seed, froude);
        let omega = potential_vorticity(&u, froude);
        let lhs: SpectralScalar = advective(&u, &omega);
        let rhs = potential_vorticity(&advective(&u, &u), froude);
        let scale = lhs.l2_norm().max(rhs.l2_norm());
        prop_assert!((&lhs - &rhs).l2_norm() <= 1e-10 * scale);
        // the flux-form kernels of the solver obey the same identity
        let phys = u.to_physical().unwrap();
        let kernel_lhs = scalar_advect(&phys, &omega.to_physical().unwrap());
        let kernel_rhs = potential_vorticity(&transport(&u, &u), froude);
        prop_assert!((&kernel_lhs - &kernel_rhs).l2_norm() <= 1e-10 * scale);
        prop_assert!((&kernel_lhs + &lhs).l2_norm() <= 1e-10 * scale);
    }

    #[test]
    fn operators_preserve_conjugate_symmetry(seed in any::<u64>()) {
        let g = grid();
        let p = PhysParams::new(0.1, 0.6, 0.3, 0.1, 0.1, 0.2).unwrap();
        let u = seeded_field::<4>(&g, seed);
        for out in [
            leray_project(&u),
            qg_project(&u, 0.6),
            osc_project(&u, 0.6),
            gamma_apply(&u, &p),
            freq_truncate(&u, 0.8, 4.0).unwrap(),
        ] {
            prop_assert!(out.hermitian_defect() < 1e-14);
        }
        prop_assert!(potential_vorticity(&u, 0.6).hermitian_defect() < 1e-14);
    }
}
