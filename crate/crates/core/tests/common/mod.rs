//! Fixtures shared by the integration tests and the acceptance harness.
#![allow(dead_code)]

use dirac_spectra::{BoundarySpec, DiracSystem, PolyFunc};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn rows(r: [[f64; 4]; 2]) -> BoundarySpec {
    BoundarySpec::from_real(r).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Complex polynomial of degree at most `deg`, coefficients in the unit box.
pub fn random_poly(r: &mut impl Rng, deg: usize) -> PolyFunc {
    let d = r.gen_range(0..=deg);
    PolyFunc::new(
        (0..=d)
            .map(|_| cx(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)))
            .collect(),
    )
}

pub fn random_system(r: &mut impl Rng) -> DiracSystem {
    let b1 = -r.gen_range(0.5..2.0);
    let b2 = r.gen_range(0.5..2.0);
    DiracSystem::new(b1, b2, random_poly(r, 3), random_poly(r, 3)).unwrap()
}

pub fn random_bc(r: &mut impl Rng) -> BoundarySpec {
    loop {
        let mut a = [[cx(0.0, 0.0); 4]; 2];
        for row in a.iter_mut() {
            for v in row.iter_mut() {
                *v = cx(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0));
            }
        }
        if let Ok(bc) = BoundarySpec::new(a) {
            return bc;
        }
    }
}

/// y1(0) + y1(1) = 0, y2(0) + y2(1) = 0.
pub fn antiperiodic() -> BoundarySpec {
    rows([[1., 0., 1., 0.], [0., 1., 0., 1.]])
}

pub fn free_dirac() -> DiracSystem {
    DiracSystem::dirac(PolyFunc::zero(), PolyFunc::zero())
}

/// Q12 chosen so that P equals `p` for the given BC and Q21.
pub fn system_with_p(
    bc: &BoundarySpec,
    b1: f64,
    b2: f64,
    q21: PolyFunc,
    p: PolyFunc,
) -> DiracSystem {
    let ms = bc.minors();
    let rest = q21.reflect().scale(ms.j42 * b2);
    let q12 = p.sub(&rest).scale(1.0 / (ms.j13 * b1));
    DiracSystem::new(b1, b2, q12, q21).unwrap()
}

pub struct Crafted {
    pub name: &'static str,
    pub sys: DiracSystem,
    pub bc: BoundarySpec,
    pub k_plus: usize,
    pub k_minus: usize,
}

/// J32 = 0, J14 = J13 = J42 = 1.
pub fn j32_zero_bc() -> BoundarySpec {
    rows([[1., -1., 1., 0.], [0., -1., 1., 1.]])
}

/// J32 = J14 = 0, J13 = 2, J42 = -1.5.
pub fn j32_j14_zero_bc() -> BoundarySpec {
    rows([[1., 0., 0., -1.5], [0., 1., 2., 0.]])
}

/// Classical Dirac, J32 = 0, Q12(0) = Q21(1) so the first-order term at the
/// upper end cancels while the second does not.
pub fn second_order_cancellation() -> (DiracSystem, BoundarySpec) {
    let sys = DiracSystem::dirac(
        PolyFunc::from_real(&[1.0, 1.0]),
        PolyFunc::from_real(&[1.0]),
    );
    (sys, j32_zero_bc())
}

/// Systems with known growth orders `(k+, k-)` covering k+ = 0..3.
pub fn growth_systems() -> Vec<Crafted> {
    let generic = DiracSystem::new(
        -1.0,
        1.5,
        PolyFunc::new(vec![cx(0.6, 0.2), cx(-0.4, 0.3)]),
        PolyFunc::new(vec![cx(0.5, -0.1), cx(0.2, 0.0), cx(0.3, 0.4)]),
    )
    .unwrap();
    let (cancel, cancel_bc) = second_order_cancellation();
    let p = PolyFunc::from_real(&[0.0, 0.0, 1.0, 0.5]);
    let q21 = PolyFunc::new(vec![cx(0.3, 0.1), cx(-0.7, 0.0), cx(0.2, 0.4)]);
    vec![
        Crafted {
            name: "regular",
            sys: generic.clone(),
            bc: antiperiodic(),
            k_plus: 0,
            k_minus: 0,
        },
        Crafted {
            name: "j32-zero",
            sys: generic.clone(),
            bc: j32_zero_bc(),
            k_plus: 1,
            k_minus: 0,
        },
        Crafted {
            name: "j14-only",
            sys: DiracSystem::dirac(
                PolyFunc::from_real(&[1.0, 1.0]),
                PolyFunc::from_real(&[2.0, -1.0]),
            ),
            bc: rows([[1., 0., 0., 0.], [0., 0., 0., 1.]]),
            k_plus: 2,
            k_minus: 0,
        },
        Crafted {
            name: "cancelled-first-order",
            sys: cancel,
            bc: cancel_bc,
            k_plus: 2,
            k_minus: 0,
        },
        Crafted {
            name: "p-double-zero",
            sys: system_with_p(&j32_j14_zero_bc(), -1.0, 2.0, q21, p),
            bc: j32_j14_zero_bc(),
            k_plus: 3,
            k_minus: 1,
        },
    ]
}

/// P with P(0) ≠ 0, P(1) ≠ 0.
pub fn thm_case_i() -> (DiracSystem, BoundarySpec) {
    let bc = j32_j14_zero_bc();
    let q21 = PolyFunc::new(vec![cx(0.2, 0.1), cx(1.0, 0.0)]);
    (
        system_with_p(&bc, -1.0, 1.0, q21, PolyFunc::from_real(&[1.0, -0.3])),
        bc,
    )
}

/// P = (1 - x)^2 (1 + x): n0 = 0, n1 = 2.
pub fn thm_case_iii() -> (DiracSystem, BoundarySpec) {
    let bc = j32_j14_zero_bc();
    let q21 = PolyFunc::new(vec![cx(-0.4, 0.2), cx(0.9, -0.1)]);
    (
        system_with_p(
            &bc,
            -1.5,
            1.0,
            q21,
            PolyFunc::from_real(&[1.0, -1.0, -1.0, 1.0]),
        ),
        bc,
    )
}
