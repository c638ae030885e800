//! Dormand–Prince 5(4) for `z' = M(x) z`, `z ∈ ℂ²`, with the vector
//! renormalized after every accepted step.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const H_MIN: f64 = 1e-8;
pub const H_MAX: f64 = 0.05;

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// 5th-order weights minus embedded 4th-order weights
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

pub type Vec2 = [Complex64; 2];
pub type Mat2 = [[Complex64; 2]; 2];

fn apply(m: &Mat2, z: &Vec2) -> Vec2 {
    [
        m[0][0] * z[0] + m[0][1] * z[1],
        m[1][0] * z[0] + m[1][1] * z[1],
    ]
}

fn inf_norm(z: &Vec2) -> f64 {
    z[0].norm().max(z[1].norm())
}

/// Solution at x = 1 as `z · e^{log_scale}`.
#[derive(Debug, Clone, Copy)]
pub struct Scaled2 {
    pub z: Vec2,
    pub log_scale: f64,
    pub steps: usize,
}

/// Integrates `z' = m(x) z` from 0 to 1 with relative local error `tol`.
///
/// `lambda` is only used in error reports.
pub fn integrate<F>(m: F, z0: Vec2, tol: f64, h0: f64, lambda: Complex64) -> Result<Scaled2>
where
    F: Fn(f64) -> Mat2,
{
    let mut z = z0;
    let mut log_scale = 0.0;
    let mut x = 0.0;
    let mut h = h0.clamp(H_MIN, H_MAX);
    let mut k = [[Complex64::new(0.0, 0.0); 2]; 7];
    k[0] = apply(&m(0.0), &z);
    let mut steps = 0usize;

    while x < 1.0 {
        let last = x + h >= 1.0;
        if last {
            h = 1.0 - x;
        }
        for s in 1..7 {
            let mut y = z;
            for (j, kj) in k.iter().enumerate().take(s) {
                let a = A[s][j] * h;
                if a != 0.0 {
                    y[0] += kj[0] * a;
                    y[1] += kj[1] * a;
                }
            }
            k[s] = apply(&m(x + C[s] * h), &y);
        }
        let mut z_new = z;
        let mut err = [Complex64::new(0.0, 0.0); 2];
        for (s, ks) in k.iter().enumerate() {
            let b = A[6].get(s).copied().unwrap_or(0.0) * h;
            let e = E[s] * h;
            for i in 0..2 {
                z_new[i] += ks[i] * b;
                err[i] += ks[i] * e;
            }
        }
        let scale = inf_norm(&z).max(inf_norm(&z_new));
        let ratio = inf_norm(&err) / (tol * scale);

        if ratio <= 1.0 || h <= H_MIN {
            if ratio > 1.0 {
                return Err(Error::StepFailure { lambda, x });
            }
            x = if last { 1.0 } else { x + h };
            steps += 1;
            let n = inf_norm(&z_new);
            if n == 0.0 || !n.is_finite() {
                return Err(Error::StepFailure { lambda, x });
            }
            z = [z_new[0] / n, z_new[1] / n];
            log_scale += n.ln();
            // FSAL: stage 7 is the derivative at the new point
            k[0] = [k[6][0] / n, k[6][1] / n];
        }
        let factor = if ratio == 0.0 {
            5.0
        } else {
            (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0)
        };
        h = (h * factor).clamp(H_MIN, H_MAX);
    }
    Ok(Scaled2 {
        z,
        log_scale,
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_growth() {
        let rate = Complex64::new(40.0, 3.0);
        let m = |_x: f64| {
            [
                [rate, Complex64::new(0.0, 0.0)],
                [Complex64::new(0.0, 0.0), -rate],
            ]
        };
        let one = Complex64::new(1.0, 0.0);
        let s = integrate(m, [one, one], 1e-11, 0.01, rate).unwrap();
        // first component carries e^{rate}, second is relatively negligible
        let got = s.z[0].ln() + s.log_scale;
        assert!((got - rate).norm() < 1e-9, "{got}");
    }

    #[test]
    fn rotation() {
        let w = 7.0;
        let m = |_x: f64| {
            [
                [Complex64::new(0.0, 0.0), Complex64::new(w, 0.0)],
                [Complex64::new(-w, 0.0), Complex64::new(0.0, 0.0)],
            ]
        };
        let s = integrate(
            m,
            [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            1e-11,
            0.01,
            Complex64::new(0.0, 0.0),
        )
        .unwrap();
        let f = s.log_scale.exp();
        assert!((s.z[0] * f - Complex64::new(w.cos(), 0.0)).norm() < 1e-9);
        assert!((s.z[1] * f - Complex64::new(-w.sin(), 0.0)).norm() < 1e-9);
    }
}
