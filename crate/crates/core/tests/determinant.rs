mod common;

use common::{antiperiodic, cx, free_dirac, growth_systems, random_bc, random_system, rng};
use dirac_spectra::determinant::{delta_q_integrated, residual_curve};
use dirac_spectra::{
    coefficient_table, delta_0, fit_leading_coefficient, fundamental_matrix, ray_scan,
    residual_slope, DiracSystem, HalfPlane, PolyFunc, DEFAULT_ODE_TOL, DEFAULT_T_GRID,
};
use num_complex::Complex64;
use rand::Rng;

/// 100 points with |Im λ| ≤ 40 and |Re λ| ≤ 20.
fn grid() -> Vec<Complex64> {
    (0..100)
        .map(|i| {
            let (a, b) = (i / 10, i % 10);
            cx(-20.0 + 40.0 * a as f64 / 9.0, -40.0 + 80.0 * b as f64 / 9.0)
        })
        .collect()
}

#[test]
fn integrated_free_matches_closed_form() {
    let tol = DEFAULT_ODE_TOL;
    let sys = DiracSystem::new(-1.3, 0.8, PolyFunc::zero(), PolyFunc::zero()).unwrap();
    let bc = random_bc(&mut rng(5));
    for l in grid() {
        let d0 = delta_0(&sys, &bc, l).to_complex();
        let dq = delta_q_integrated(&sys, &bc, l, tol).unwrap();
        let diff = (dq - dirac_spectra::ScaledComplex::from_complex(d0))
            .to_complex()
            .norm();
        assert!(diff <= 1e-9 * (1.0 + d0.norm()), "λ = {l}: {diff:e}");
    }
}

#[test]
fn abel_identity_on_random_systems() {
    let mut r = rng(9);
    for _ in 0..4 {
        let sys = random_system(&mut r);
        for _ in 0..10 {
            let l = cx(r.gen_range(-20.0..20.0), r.gen_range(-40.0..40.0));
            let fm = fundamental_matrix(&sys, l, DEFAULT_ODE_TOL).unwrap();
            assert!(
                fm.abel_residual(&sys, l) <= 10.0 * DEFAULT_ODE_TOL,
                "λ = {l}"
            );
        }
    }
}

#[test]
fn free_rays_tend_to_regularity_minors() {
    let t = [10.0, 20.0, 40.0];
    for (hp, want) in [(HalfPlane::Upper, 1.0), (HalfPlane::Lower, 1.0)] {
        let scan = ray_scan(&free_dirac(), &antiperiodic(), hp, &t, DEFAULT_ODE_TOL).unwrap();
        assert!((scan[2].1 - cx(want, 0.0)).norm() < 1e-12);
    }
}

#[test]
fn leading_coefficients_are_recovered() {
    for c in growth_systems() {
        let t = coefficient_table(&c.sys, &c.bc, 6, 1e-9).unwrap();
        assert_eq!(
            (t.k_plus, t.k_minus),
            (Some(c.k_plus), Some(c.k_minus)),
            "{}",
            c.name
        );
        for (hp, k, cs) in [
            (HalfPlane::Upper, c.k_plus, &t.c_plus),
            (HalfPlane::Lower, c.k_minus, &t.c_minus),
        ] {
            let fit =
                fit_leading_coefficient(&c.sys, &c.bc, hp, k, cs, &DEFAULT_T_GRID, DEFAULT_ODE_TOL)
                    .unwrap();
            let rel = (fit.estimate() - cs[k]).norm() / cs[k].norm();
            assert!(rel < 0.02, "{} {hp:?}: {rel:e}", c.name);
            let slope =
                residual_slope(&c.sys, &c.bc, hp, &cs[..=k], 80.0, DEFAULT_ODE_TOL).unwrap();
            assert!(
                slope <= -(k as f64 + 0.5),
                "{} {hp:?}: slope {slope}",
                c.name
            );
        }
    }
}

#[test]
fn truncating_below_k_leaves_the_leading_term() {
    // with c_k dropped the residual decays like t^{-k}
    let c = &growth_systems()[2];
    let t = coefficient_table(&c.sys, &c.bc, 2, 1e-9).unwrap();
    let grid = [20.0, 40.0, 80.0];
    let r = residual_curve(
        &c.sys,
        &c.bc,
        HalfPlane::Upper,
        &t.c_plus[..2],
        &grid,
        DEFAULT_ODE_TOL,
    )
    .unwrap();
    let slope = dirac_spectra::determinant::loglog_slope(&r);
    assert!((slope + 2.0).abs() < 0.1, "{slope}");
}
