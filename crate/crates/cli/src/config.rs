//! Problem configuration, read from JSON.
//!
//! Complex numbers are `[re, im]` pairs. Unknown keys are rejected.

use std::path::Path;

use dirac_spectra::{
    BoundarySpec, DiracSystem, HalfPlane, PolyFunc, Rect, DEFAULT_N_MAX, DEFAULT_ODE_TOL,
    DEFAULT_ZERO_TOL,
};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub type Pair = [f64; 2];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub b1: f64,
    pub b2: f64,
    pub q12_coeffs: Vec<Pair>,
    pub q21_coeffs: Vec<Pair>,
    pub boundary_rows: [[Pair; 4]; 2],
    pub order_n: usize,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub scan: Option<ScanConfig>,
    #[serde(default)]
    pub rect: Option<RectConfig>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "default_zero_tol")]
    pub zero_tol: f64,
    #[serde(default = "default_ode_tol")]
    pub ode_tol: f64,
}

fn default_zero_tol() -> f64 {
    DEFAULT_ZERO_TOL
}

fn default_ode_tol() -> f64 {
    DEFAULT_ODE_TOL
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            zero_tol: DEFAULT_ZERO_TOL,
            ode_tol: DEFAULT_ODE_TOL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
    #[serde(default = "default_halfplane")]
    pub halfplane: HalfPlane,
}

fn default_halfplane() -> HalfPlane {
    HalfPlane::Upper
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RectConfig {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

/// A config that passed validation, with the model objects built.
#[derive(Debug, Clone)]
pub struct Problem {
    pub config: ProblemConfig,
    pub sys: DiracSystem,
    pub bc: BoundarySpec,
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn poly(c: &[Pair]) -> PolyFunc {
    PolyFunc::new(c.iter().map(|p| Complex64::new(p[0], p[1])).collect())
}

impl ProblemConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| invalid(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| invalid(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(self) -> Result<Problem, CliError> {
        let finite = |p: &Pair| p[0].is_finite() && p[1].is_finite();
        if !self.q12_coeffs.iter().chain(&self.q21_coeffs).all(finite)
            || !self.boundary_rows.iter().flatten().all(finite)
        {
            return Err(invalid("non-finite coefficient"));
        }
        if self.order_n == 0 || self.order_n > DEFAULT_N_MAX as usize {
            return Err(invalid(format!(
                "order_n must lie in 1..={DEFAULT_N_MAX}, got {}",
                self.order_n
            )));
        }
        let t = self.tolerances;
        if !(t.zero_tol > 0.0 && t.zero_tol < 1.0) {
            return Err(invalid(format!("zero_tol {} outside (0, 1)", t.zero_tol)));
        }
        if !(1e-13..=1e-6).contains(&t.ode_tol) {
            return Err(invalid(format!(
                "ode_tol {} outside [1e-13, 1e-6]",
                t.ode_tol
            )));
        }
        if let Some(s) = self.scan {
            if !(s.t_min > 0.0 && s.t_max > s.t_min && s.t_max.is_finite() && s.points >= 2) {
                return Err(invalid(
                    "scan needs 0 < t_min < t_max and at least two points",
                ));
            }
        }
        if let Some(r) = self.rect {
            Rect::new(r.re_min, r.re_max, r.im_min, r.im_max)
                .map_err(|e| invalid(e.to_string()))?;
        }
        let sys = DiracSystem::new(
            self.b1,
            self.b2,
            poly(&self.q12_coeffs),
            poly(&self.q21_coeffs),
        )
        .map_err(|e| invalid(e.to_string()))?;
        let rows = self
            .boundary_rows
            .map(|r| r.map(|p| Complex64::new(p[0], p[1])));
        let bc = BoundarySpec::new(rows).map_err(|e| invalid(e.to_string()))?;
        Ok(Problem {
            config: self,
            sys,
            bc,
        })
    }
}

impl Problem {
    pub fn tol(&self) -> Tolerances {
        self.config.tolerances
    }

    pub fn rect(&self) -> Option<Rect> {
        self.config
            .rect
            .map(|r| Rect::new(r.re_min, r.re_max, r.im_min, r.im_max).expect("validated"))
    }

    /// Geometric grid from `t_min` to `t_max`.
    pub fn scan_grid(&self) -> Option<(HalfPlane, Vec<f64>)> {
        let s = self.config.scan?;
        let ratio = (s.t_max / s.t_min).ln() / (s.points - 1) as f64;
        let mut t: Vec<f64> = (0..s.points)
            .map(|i| s.t_min * (ratio * i as f64).exp())
            .collect();
        t[s.points - 1] = s.t_max;
        Some((s.halfplane, t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"{
        "b1": -1, "b2": 1,
        "q12_coeffs": [[1, 0]], "q21_coeffs": [[0, 0], [1, 0]],
        "boundary_rows": [[[1,0],[0,0],[1,0],[0,0]], [[0,0],[1,0],[0,0],[1,0]]],
        "order_n": 3
    }"#;

    #[test]
    fn defaults_apply() {
        let c = ProblemConfig::from_json(BASE).unwrap();
        assert_eq!(c.tolerances, Tolerances::default());
        assert!(c.scan.is_none() && c.rect.is_none());
        assert!(c.validate().is_ok());
    }

    #[test]
    fn rejects_bad_fields() {
        let bad = BASE.replace("\"order_n\": 3", "\"order_n\": 3, \"extra\": 1");
        assert!(matches!(
            ProblemConfig::from_json(&bad),
            Err(CliError::Config(_))
        ));
        let big = BASE.replace("\"order_n\": 3", "\"order_n\": 13");
        assert!(ProblemConfig::from_json(&big).unwrap().validate().is_err());
        let signs = BASE.replace("\"b1\": -1", "\"b1\": 1");
        assert!(ProblemConfig::from_json(&signs)
            .unwrap()
            .validate()
            .is_err());
    }

    #[test]
    fn scan_grid_is_geometric() {
        let mut c = ProblemConfig::from_json(BASE).unwrap();
        c.scan = Some(ScanConfig {
            t_min: 10.0,
            t_max: 1000.0,
            points: 3,
            halfplane: HalfPlane::Lower,
        });
        let (hp, t) = c.validate().unwrap().scan_grid().unwrap();
        assert_eq!(hp, HalfPlane::Lower);
        assert!((t[1] - 100.0).abs() < 1e-9 && t[2] == 1000.0);
    }
}
