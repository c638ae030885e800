//! Characteristic determinant
//!
//! ```text
//! Δ(λ) = J12 + J34 e^{i(b1+b2)λ} + J32 φ11 + J13 φ12 + J42 φ21 + J14 φ22
//! ```
//! where `Φ(x, λ)` is the fundamental matrix with `Φ(0, λ) = I` and the
//! entries are taken at x = 1.
//!
//! Along the imaginary axis the determinant grows like `e^{|b_k| t}`; all
//! values are carried as [`ScaledComplex`]. The normalized ray values
//! `Δ(it) e^{b1 t}` and `Δ(-it) e^{-b2 t}` stay bounded and admit the
//! expansions
//!
//! ```text
//! upper: (J32 + Σ_k c_k^+ (cλ)^{-k} + …)(1 + o(1))
//! lower: (J14 - Σ_k c_k^- (cλ)^{-k} + …)(1 + o(1)),   c = i(b1 - b2)
//! ```

mod fit;
mod ode;
mod scaled;

pub use fit::{
    fit_leading_coefficient, loglog_slope, neville_at_zero, residual_curve, residual_slope,
    FitRecord, DEFAULT_T_GRID,
};
pub use ode::{H_MAX, H_MIN};
pub use scaled::ScaledComplex;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{q_pm, BoundarySpec, DiracSystem, MinorSet};

pub const DEFAULT_ODE_TOL: f64 = 1e-11;

// Per-step tolerance relative to the requested one. Global error over a few
// thousand steps is otherwise up to ~50x the local bound.
const LOCAL_SAFETY: f64 = 0.01;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HalfPlane {
    Upper,
    Lower,
}

impl HalfPlane {
    /// λ on the ray at height `t > 0`.
    pub fn lambda(self, t: f64) -> Complex64 {
        match self {
            HalfPlane::Upper => Complex64::new(0.0, t),
            HalfPlane::Lower => Complex64::new(0.0, -t),
        }
    }

    /// Real exponent removing the dominant growth of Δ on the ray.
    pub fn damping(self, sys: &DiracSystem, t: f64) -> f64 {
        match self {
            HalfPlane::Upper => sys.b1() * t,
            HalfPlane::Lower => -sys.b2() * t,
        }
    }

    /// `c·λ` on the ray, a real number.
    pub fn c_lambda(self, sys: &DiracSystem, t: f64) -> f64 {
        (sys.c() * self.lambda(t)).re
    }

    /// Sign in front of the sum in the expansion bracket.
    pub fn series_sign(self) -> f64 {
        match self {
            HalfPlane::Upper => 1.0,
            HalfPlane::Lower => -1.0,
        }
    }
}

/// `Φ(1, λ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FundamentalMatrix {
    pub phi: [[ScaledComplex; 2]; 2],
    pub steps: usize,
}

impl FundamentalMatrix {
    pub fn det(&self) -> ScaledComplex {
        self.phi[0][0] * self.phi[1][1] - self.phi[0][1] * self.phi[1][0]
    }

    /// Relative defect of the Abel identity `|det Φ(1,λ)| = e^{-(b1+b2) Im λ}`.
    ///
    /// Measured against the larger of the true value and the two products in
    /// the determinant, which is the scale cancellation leaves behind.
    pub fn abel_residual(&self, sys: &DiracSystem, lambda: Complex64) -> f64 {
        let expected = -(sys.b1() + sys.b2()) * lambda.im;
        let a = (self.phi[0][0] * self.phi[1][1]).ln_abs();
        let b = (self.phi[0][1] * self.phi[1][0]).ln_abs();
        let reference = expected.max(a).max(b);
        ((self.det().ln_abs() - reference).exp() - (expected - reference).exp()).abs()
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if (1e-13..=1e-6).contains(&tol) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "ODE tolerance {tol:e} outside [1e-13, 1e-6]"
        )))
    }
}

/// `Φ(1, λ)` by integrating each column in the rescaled variable
/// `z_k(x) = y(x) e^{-i b_k λ x}`.
pub fn fundamental_matrix(
    sys: &DiracSystem,
    lambda: Complex64,
    tol: f64,
) -> Result<FundamentalMatrix> {
    check_tol(tol)?;
    let (qp, qm) = q_pm(sys);
    let d = [I * lambda * sys.b1(), I * lambda * sys.b2()];
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let rate = (d[1] - d[0]).norm() + 1.0;
    let mut phi = [[ScaledComplex::ZERO; 2]; 2];
    let mut steps = 0;
    for col in 0..2 {
        let shift = d[col];
        let m = |x: f64| [[d[0] - shift, qp.eval(x)], [qm.eval(x), d[1] - shift]];
        let z0 = if col == 0 { [one, zero] } else { [zero, one] };
        let sol = ode::integrate(m, z0, tol * LOCAL_SAFETY, 0.1 / rate, lambda)?;
        steps += sol.steps;
        let factor = ScaledComplex::exp(shift + sol.log_scale);
        for (row, z) in phi.iter_mut().zip(sol.z) {
            row[col] = factor * ScaledComplex::from_complex(z);
        }
    }
    Ok(FundamentalMatrix { phi, steps })
}

/// Δ from a fundamental matrix.
pub fn assemble(
    ms: &MinorSet,
    sys: &DiracSystem,
    lambda: Complex64,
    phi: &[[ScaledComplex; 2]; 2],
) -> ScaledComplex {
    let e = ScaledComplex::exp(I * (sys.b1() + sys.b2()) * lambda);
    ScaledComplex::from_complex(ms.j12)
        + e.scale(ms.j34)
        + phi[0][0].scale(ms.j32)
        + phi[0][1].scale(ms.j13)
        + phi[1][0].scale(ms.j42)
        + phi[1][1].scale(ms.j14)
}

/// Δ_0 in closed form.
pub fn delta_0(sys: &DiracSystem, bc: &BoundarySpec, lambda: Complex64) -> ScaledComplex {
    let free = [
        [
            ScaledComplex::exp(I * sys.b1() * lambda),
            ScaledComplex::ZERO,
        ],
        [
            ScaledComplex::ZERO,
            ScaledComplex::exp(I * sys.b2() * lambda),
        ],
    ];
    assemble(&bc.minors(), sys, lambda, &free)
}

/// Δ by ODE integration, even when Q vanishes.
pub fn delta_q_integrated(
    sys: &DiracSystem,
    bc: &BoundarySpec,
    lambda: Complex64,
    tol: f64,
) -> Result<ScaledComplex> {
    let fm = fundamental_matrix(sys, lambda, tol)?;
    Ok(assemble(&bc.minors(), sys, lambda, &fm.phi))
}

/// Characteristic determinant. Uses the closed form when `Q ≡ 0`.
pub fn delta_q(
    sys: &DiracSystem,
    bc: &BoundarySpec,
    lambda: Complex64,
    tol: f64,
) -> Result<ScaledComplex> {
    if sys.is_free() {
        check_tol(tol)?;
        return Ok(delta_0(sys, bc, lambda));
    }
    delta_q_integrated(sys, bc, lambda, tol)
}

/// Normalized determinant on one ray.
pub fn normalized(
    sys: &DiracSystem,
    bc: &BoundarySpec,
    hp: HalfPlane,
    t: f64,
    tol: f64,
) -> Result<Complex64> {
    let d = delta_q(sys, bc, hp.lambda(t), tol)?;
    Ok(d.mul_exp(hp.damping(sys, t)).to_complex())
}

/// `(t, normalized(t))` for every `t`, computed in parallel.
pub fn ray_scan(
    sys: &DiracSystem,
    bc: &BoundarySpec,
    hp: HalfPlane,
    t_values: &[f64],
    tol: f64,
) -> Result<Vec<(f64, Complex64)>> {
    if t_values.iter().any(|&t| t <= 0.0 || !t.is_finite())
        || t_values.windows(2).any(|w| w[0] >= w[1])
    {
        return Err(Error::InvalidArgument(
            "t values must be positive and ascending".into(),
        ));
    }
    t_values
        .par_iter()
        .map(|&t| normalized(sys, bc, hp, t, tol).map(|v| (t, v)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::PolyFunc;

    fn cx(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn antiperiodic() -> BoundarySpec {
        BoundarySpec::from_real([[1., 0., 1., 0.], [0., 1., 0., 1.]]).unwrap()
    }

    fn sample() -> DiracSystem {
        DiracSystem::new(
            -1.0,
            2.0,
            PolyFunc::new(vec![cx(0.5, 0.2), cx(-1.0, 0.3), cx(0.4, 0.0)]),
            PolyFunc::new(vec![cx(1.2, -0.1), cx(0.0, 0.7)]),
        )
        .unwrap()
    }

    /// exp of a 2×2 matrix by scaling and squaring a Taylor series.
    fn expm(m: [[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
        let norm = m.iter().flatten().map(|z| z.norm()).sum::<f64>();
        let s = (norm.max(1.0).log2().ceil() as i32 + 4).max(0);
        let f = 0.5f64.powi(s);
        let a = m.map(|r| r.map(|z| z * f));
        let mul = |x: [[Complex64; 2]; 2], y: [[Complex64; 2]; 2]| {
            let mut o = [[cx(0., 0.); 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    o[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
                }
            }
            o
        };
        let mut sum = [[cx(1., 0.), cx(0., 0.)], [cx(0., 0.), cx(1., 0.)]];
        let mut term = sum;
        for n in 1..30 {
            term = mul(term, a).map(|r| r.map(|z| z / n as f64));
            for i in 0..2 {
                for j in 0..2 {
                    sum[i][j] += term[i][j];
                }
            }
        }
        for _ in 0..s {
            sum = mul(sum, sum);
        }
        sum
    }

    #[test]
    fn free_system_is_diagonal() {
        let sys = DiracSystem::new(-1.5, 0.5, PolyFunc::zero(), PolyFunc::zero()).unwrap();
        let lambda = cx(2.0, -3.0);
        let fm = fundamental_matrix(&sys, lambda, 1e-11).unwrap();
        assert!((fm.phi[0][0].to_complex() - (I * -1.5 * lambda).exp()).norm() < 1e-10);
        assert!((fm.phi[1][1].to_complex() - (I * 0.5 * lambda).exp()).norm() < 1e-10);
        assert!(fm.phi[0][1].is_zero() && fm.phi[1][0].is_zero());
    }

    #[test]
    fn lambda_zero_matches_matrix_exponential() {
        let sys = DiracSystem::new(
            -1.0,
            2.0,
            PolyFunc::constant(cx(0.7, -0.4)),
            PolyFunc::constant(cx(-1.3, 0.2)),
        )
        .unwrap();
        let (qp, qm) = q_pm(&sys);
        let want = expm([[cx(0., 0.), qp.eval(0.0)], [qm.eval(0.0), cx(0., 0.)]]);
        let fm = fundamental_matrix(&sys, cx(0.0, 0.0), 1e-12).unwrap();
        for (i, row) in want.iter().enumerate() {
            for (j, w) in row.iter().enumerate() {
                assert!((fm.phi[i][j].to_complex() - w).norm() < 1e-10, "{i}{j}");
            }
        }
        // Δ(0) from the same oracle
        let bc = BoundarySpec::new([
            [cx(1., 0.), cx(0.5, 0.5), cx(0.2, 0.), cx(-1., 0.)],
            [cx(0., 1.), cx(1., 0.), cx(0.3, -0.2), cx(0.4, 0.)],
        ])
        .unwrap();
        let ms = bc.minors();
        let want_delta = ms.j12
            + ms.j34
            + ms.j32 * want[0][0]
            + ms.j13 * want[0][1]
            + ms.j42 * want[1][0]
            + ms.j14 * want[1][1];
        let got = delta_q(&sys, &bc, cx(0.0, 0.0), 1e-12)
            .unwrap()
            .to_complex();
        assert!((got - want_delta).norm() < 1e-10);
    }

    #[test]
    fn free_delta_closed_form() {
        let sys = DiracSystem::dirac(PolyFunc::zero(), PolyFunc::zero());
        let bc = antiperiodic();
        for lambda in [cx(0.3, 0.2), cx(-2.0, 5.0), cx(7.0, -1.0)] {
            let want = (cx(1.0, 0.0) + (-I * lambda).exp()) * (cx(1.0, 0.0) + (I * lambda).exp());
            let got = delta_q(&sys, &bc, lambda, 1e-11).unwrap().to_complex();
            assert!((got - want).norm() < 1e-12 * (1.0 + want.norm()));
        }
        let at_pi = delta_q(&sys, &bc, cx(std::f64::consts::PI, 0.0), 1e-11).unwrap();
        assert!(at_pi.to_complex().norm() < 1e-15);
    }

    #[test]
    fn free_conjugation() {
        let sys = DiracSystem::new(-1.0, 2.5, PolyFunc::zero(), PolyFunc::zero()).unwrap();
        let bc = BoundarySpec::from_real([[1., 0.3, -2., 0.], [0.5, 1., 0., 0.7]]).unwrap();
        for lambda in [cx(0.3, 0.2), cx(-2.0, 5.0), cx(7.0, -1.0)] {
            let a = delta_0(&sys, &bc, lambda.conj()).to_complex();
            let b = delta_0(&sys, &bc, -lambda).to_complex().conj();
            assert!((a - b).norm() < 1e-12 * (1.0 + a.norm()));
        }
    }

    #[test]
    fn abel_identity() {
        let sys = sample();
        for lambda in [
            cx(0.0, 0.0),
            cx(3.0, 1.0),
            cx(-5.0, -2.0),
            cx(1.0, 8.0),
            cx(0.5, -12.0),
        ] {
            let fm = fundamental_matrix(&sys, lambda, 1e-11).unwrap();
            let r = fm.abel_residual(&sys, lambda);
            assert!(r < 1e-10, "lambda={lambda} residual={r:e}");
        }
    }

    #[test]
    fn integrated_free_matches_closed_form() {
        let sys = DiracSystem::dirac(PolyFunc::zero(), PolyFunc::zero());
        let bc = antiperiodic();
        for lambda in [cx(1.0, 35.0), cx(-3.0, -40.0)] {
            let a = delta_q_integrated(&sys, &bc, lambda, 1e-11).unwrap();
            let b = delta_0(&sys, &bc, lambda);
            let diff = (a - b).ln_abs();
            assert!(diff < (1e-9f64).ln() + b.ln_abs().max(0.0));
        }
    }

    #[test]
    fn mean_value_on_circle() {
        let sys = sample();
        let bc = BoundarySpec::from_real([[1., 0., 2., 0.], [0., 1., 0., 1.]]).unwrap();
        let center = cx(1.5, 0.5);
        let n = 32;
        let mut mean = cx(0.0, 0.0);
        for j in 0..n {
            let th = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
            let p = center + Complex64::from_polar(0.25, th);
            mean += delta_q(&sys, &bc, p, 1e-11).unwrap().to_complex();
        }
        mean /= n as f64;
        let at = delta_q(&sys, &bc, center, 1e-11).unwrap().to_complex();
        assert!(
            (mean - at).norm() < 1e-10 * (1.0 + at.norm()),
            "{mean} vs {at}"
        );
    }

    #[test]
    fn tolerance_range_enforced() {
        let sys = sample();
        assert!(fundamental_matrix(&sys, cx(0.0, 0.0), 1e-3).is_err());
        assert!(fundamental_matrix(&sys, cx(0.0, 0.0), 1e-14).is_err());
    }

    #[test]
    fn ray_scan_free() {
        let sys = DiracSystem::dirac(PolyFunc::zero(), PolyFunc::zero());
        let bc = antiperiodic();
        let up = ray_scan(&sys, &bc, HalfPlane::Upper, &[10.0, 20.0, 40.0], 1e-11).unwrap();
        assert!((up[2].1 - cx(1.0, 0.0)).norm() < 1e-15);
        let lo = ray_scan(&sys, &bc, HalfPlane::Lower, &[10.0, 20.0, 40.0], 1e-11).unwrap();
        assert!((lo[2].1 - cx(1.0, 0.0)).norm() < 1e-15);
        assert!(ray_scan(&sys, &bc, HalfPlane::Upper, &[2.0, 1.0], 1e-11).is_err());
    }
}
