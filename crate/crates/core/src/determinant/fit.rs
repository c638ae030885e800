//! Extraction of expansion coefficients from ray scans.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{ray_scan, HalfPlane};
use crate::error::{Error, Result};
use crate::model::{BoundarySpec, DiracSystem};

pub const DEFAULT_T_GRID: [f64; 5] = [20.0, 28.0, 40.0, 56.0, 80.0];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitRecord {
    #[serde(rename = "K")]
    pub k: usize,
    pub estimate_re: f64,
    pub estimate_im: f64,
    pub err_est: f64,
}

impl FitRecord {
    pub fn estimate(&self) -> Complex64 {
        Complex64::new(self.estimate_re, self.estimate_im)
    }
}

/// Polynomial extrapolation of `(h_i, v_i)` to `h = 0` (Neville).
///
/// Returns the tableau diagonal: entry `m` uses the first `m + 1` nodes.
pub fn neville_at_zero(h: &[f64], v: &[Complex64]) -> Vec<Vec<Complex64>> {
    let n = h.len();
    let mut p: Vec<Vec<Complex64>> = vec![v.to_vec()];
    for j in 1..n {
        let prev = &p[j - 1];
        let row = (j..n)
            .map(|i| {
                let (xi, xj) = (h[i], h[i - j]);
                (prev[i - j + 1] * xj - prev[i - j] * xi) / (xj - xi)
            })
            .collect();
        p.push(row);
    }
    p
}

/// Extracts c_K on one half-plane.
///
/// `known` holds c_0..c_{K-1} of the same half-plane (table convention, so
/// the lower-plane sign flip is applied here). The sequence
/// `(normalized(t) - Σ_{k<K} s_k (cλ)^{-k}) (cλ)^K` is extrapolated in `1/t`.
pub fn fit_leading_coefficient(
    sys: &DiracSystem,
    bc: &BoundarySpec,
    hp: HalfPlane,
    k: usize,
    known: &[Complex64],
    t_grid: &[f64],
    tol: f64,
) -> Result<FitRecord> {
    if known.len() < k {
        return Err(Error::InvalidArgument(format!(
            "need c_0..c_{} to fit c_{k}",
            k.saturating_sub(1)
        )));
    }
    if t_grid.len() < 3 {
        return Err(Error::InvalidArgument(
            "fit needs at least three t values".into(),
        ));
    }
    let sign = hp.series_sign();
    let scan = ray_scan(sys, bc, hp, t_grid, tol)?;
    let mut h = Vec::with_capacity(scan.len());
    let mut v = Vec::with_capacity(scan.len());
    for (t, norm) in scan {
        let cl = hp.c_lambda(sys, t);
        let mut rest = norm;
        for (j, cj) in known.iter().take(k).enumerate() {
            let s = if j == 0 { *cj } else { *cj * sign };
            rest -= s / cl.powi(j as i32);
        }
        h.push(1.0 / t);
        v.push(rest * cl.powi(k as i32));
    }
    let tab = neville_at_zero(&h, &v);
    let n = tab.len();
    let last = tab[n - 1][0];
    let prev = tab[n - 2][1];
    let err_est = (last - prev).norm();
    let prev_err = (tab[n - 2][1] - tab[n - 3][2]).norm();
    if err_est > 4.0 * prev_err && err_est > 0.1 * last.norm() {
        return Err(Error::NoConvergence {
            estimate: last,
            err_est,
        });
    }
    let estimate = if k == 0 { last } else { last * sign };
    Ok(FitRecord {
        k,
        estimate_re: estimate.re,
        estimate_im: estimate.im,
        err_est,
    })
}

/// `|normalized(t) - bracket truncated at n|` along a ray.
pub fn residual_curve(
    sys: &DiracSystem,
    bc: &BoundarySpec,
    hp: HalfPlane,
    coeffs: &[Complex64],
    t_values: &[f64],
    tol: f64,
) -> Result<Vec<(f64, f64)>> {
    let sign = hp.series_sign();
    let scan = ray_scan(sys, bc, hp, t_values, tol)?;
    Ok(scan
        .into_iter()
        .map(|(t, norm)| {
            let cl = hp.c_lambda(sys, t);
            let series: Complex64 = coeffs
                .iter()
                .enumerate()
                .map(|(j, c)| {
                    if j == 0 {
                        *c
                    } else {
                        *c * sign / cl.powi(j as i32)
                    }
                })
                .sum();
            (t, (norm - series).norm())
        })
        .collect())
}

/// Log-log slope of the truncated-series residual over `[t_max/10, t_max]`.
///
/// The expansion through `coeffs = c_0..c_n` holds when this is at most
/// `-(n + 0.5)`.
pub fn residual_slope(
    sys: &DiracSystem,
    bc: &BoundarySpec,
    hp: HalfPlane,
    coeffs: &[Complex64],
    t_max: f64,
    tol: f64,
) -> Result<f64> {
    let grid: Vec<f64> = (0..6)
        .map(|i| t_max * 10f64.powf(i as f64 / 5.0 - 1.0))
        .collect();
    Ok(loglog_slope(&residual_curve(
        sys, bc, hp, coeffs, &grid, tol,
    )?))
}

/// Least-squares slope of `ln r` against `ln t`.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(_, r)| *r > 0.0)
        .map(|(t, r)| (t.ln(), r.ln()))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neville_recovers_polynomial_limit() {
        let h: Vec<f64> = DEFAULT_T_GRID.iter().map(|t| 1.0 / t).collect();
        let v: Vec<Complex64> = h
            .iter()
            .map(|x| Complex64::new(2.0 + 3.0 * x - 5.0 * x * x + x.powi(4), -1.0 + x))
            .collect();
        let tab = neville_at_zero(&h, &v);
        assert!((tab[4][0] - Complex64::new(2.0, -1.0)).norm() < 1e-10);
    }

    #[test]
    fn slope_of_power_law() {
        let pts: Vec<(f64, f64)> = (1..10)
            .map(|i| (i as f64 * 8.0, 3.0 * (i as f64 * 8.0).powf(-2.5)))
            .collect();
        assert!((loglog_slope(&pts) + 2.5).abs() < 1e-12);
    }
}
