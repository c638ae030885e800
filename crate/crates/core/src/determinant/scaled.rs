use std::f64::consts::LN_2;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// `mantissa · e^{exponent}` with `|mantissa| ∈ [1, 2)` or zero.
///
/// The exponent is kept on the grid `ℤ·ln 2`, which makes the representation
/// unique.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledComplex {
    mantissa: Complex64,
    exponent: f64,
}

impl ScaledComplex {
    pub const ZERO: ScaledComplex = ScaledComplex {
        mantissa: Complex64::new(0.0, 0.0),
        exponent: 0.0,
    };

    /// `m · e^{e}`, normalized.
    pub fn new(m: Complex64, e: f64) -> Self {
        let r = m.norm();
        if r == 0.0 || !r.is_finite() || !e.is_finite() {
            return if r == 0.0 {
                Self::ZERO
            } else {
                Self {
                    mantissa: m,
                    exponent: e,
                }
            };
        }
        let total = e / LN_2 + r.log2();
        let n = total.floor();
        let mut mantissa = m * ((e - n * LN_2).exp());
        let mut exponent = n * LN_2;
        // rounding at the interval edges
        let mr = mantissa.norm();
        if mr >= 2.0 {
            mantissa /= 2.0;
            exponent += LN_2;
        } else if mr < 1.0 {
            mantissa *= 2.0;
            exponent -= LN_2;
        }
        Self { mantissa, exponent }
    }

    pub fn from_complex(z: Complex64) -> Self {
        Self::new(z, 0.0)
    }

    /// `e^{z}` without overflow.
    pub fn exp(z: Complex64) -> Self {
        Self::new(Complex64::from_polar(1.0, z.im), z.re)
    }

    pub fn mantissa(&self) -> Complex64 {
        self.mantissa
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa == Complex64::new(0.0, 0.0)
    }

    /// May overflow to infinity or underflow to zero.
    pub fn to_complex(&self) -> Complex64 {
        if self.is_zero() {
            return self.mantissa;
        }
        self.mantissa * self.exponent.exp()
    }

    pub fn ln_abs(&self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.mantissa.norm().ln() + self.exponent
        }
    }

    pub fn arg(&self) -> f64 {
        self.mantissa.arg()
    }

    pub fn conj(&self) -> Self {
        Self {
            mantissa: self.mantissa.conj(),
            exponent: self.exponent,
        }
    }

    /// Multiplies by `e^{x}` for real `x`.
    pub fn mul_exp(&self, x: f64) -> Self {
        if self.is_zero() {
            return *self;
        }
        Self::new(self.mantissa, self.exponent + x)
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Self::new(self.mantissa * k, self.exponent)
    }

    pub fn div(&self, o: &Self) -> Self {
        Self::new(self.mantissa / o.mantissa, self.exponent - o.exponent)
    }
}

impl Mul for ScaledComplex {
    type Output = ScaledComplex;
    fn mul(self, o: Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::ZERO;
        }
        Self::new(self.mantissa * o.mantissa, self.exponent + o.exponent)
    }
}

impl Add for ScaledComplex {
    type Output = ScaledComplex;
    fn add(self, o: Self) -> Self {
        if self.is_zero() {
            return o;
        }
        if o.is_zero() {
            return self;
        }
        let (big, small) = if self.exponent >= o.exponent {
            (self, o)
        } else {
            (o, self)
        };
        let d = small.exponent - big.exponent;
        // below 2^-1100 the smaller term is invisible
        let m = if d < -760.0 {
            big.mantissa
        } else {
            big.mantissa + small.mantissa * d.exp()
        };
        Self::new(m, big.exponent)
    }
}

impl Neg for ScaledComplex {
    type Output = ScaledComplex;
    fn neg(self) -> Self {
        Self {
            mantissa: -self.mantissa,
            exponent: self.exponent,
        }
    }
}

impl Sub for ScaledComplex {
    type Output = ScaledComplex;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl std::iter::Sum for ScaledComplex {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for ScaledComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})·e^{}", self.mantissa, self.exponent)
    }
}
