//! Zero-threshold policy.
//!
//! Exact conditions like `J32 = 0` or `Q12'(1) ≠ 0` are decided on floating
//! data. A quantity counts as nonzero when its magnitude exceeds `zero_tol`
//! times the scale of its peer group. For minors the peer group is the set
//! of all six minors. For derived quantities (derivative values, σ values,
//! expansion coefficients) the scale is carried along with the value as the
//! sum of magnitudes of everything that was added to produce it.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub const DEFAULT_ZERO_TOL: f64 = 1e-9;

/// A computed value with the magnitude of the terms that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Measured {
    pub value: Complex64,
    pub scale: f64,
}

impl Measured {
    pub const ZERO: Measured = Measured {
        value: Complex64::new(0.0, 0.0),
        scale: 0.0,
    };

    pub fn exact(value: Complex64) -> Self {
        Self {
            value,
            scale: value.norm(),
        }
    }

    pub fn new(value: Complex64, scale: f64) -> Self {
        Self {
            value,
            scale: scale.max(value.norm()),
        }
    }

    pub fn scaled(self, k: Complex64) -> Self {
        Self {
            value: self.value * k,
            scale: self.scale * k.norm(),
        }
    }

    pub fn is_nonzero(&self, zero_tol: f64) -> bool {
        self.scale > 0.0 && self.value.norm() > zero_tol * self.scale
    }
}

impl Add for Measured {
    type Output = Measured;
    fn add(self, o: Measured) -> Measured {
        Measured {
            value: self.value + o.value,
            scale: self.scale + o.scale,
        }
    }
}

impl Sub for Measured {
    type Output = Measured;
    fn sub(self, o: Measured) -> Measured {
        Measured {
            value: self.value - o.value,
            scale: self.scale + o.scale,
        }
    }
}

impl Neg for Measured {
    type Output = Measured;
    fn neg(self) -> Measured {
        Measured {
            value: -self.value,
            scale: self.scale,
        }
    }
}

impl Mul for Measured {
    type Output = Measured;
    fn mul(self, o: Measured) -> Measured {
        Measured {
            value: self.value * o.value,
            scale: self.scale * o.scale,
        }
    }
}

impl std::iter::Sum for Measured {
    fn sum<I: Iterator<Item = Measured>>(iter: I) -> Measured {
        iter.fold(Measured::ZERO, |a, b| a + b)
    }
}

/// Threshold for a peer group: `zero_tol · max |x|`.
pub fn peer_threshold(zero_tol: f64, peers: &[Complex64]) -> f64 {
    zero_tol * peers.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// First index whose entry is nonzero, if any.
pub fn first_nonzero(values: &[Measured], zero_tol: f64) -> Option<usize> {
    values.iter().position(|m| m.is_nonzero(zero_tol))
}
