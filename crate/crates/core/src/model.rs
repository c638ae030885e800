//! Systems, boundary conditions, minors and boundary-condition classes.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::PolyFunc;
use crate::error::{Error, Result};
use crate::threshold::peer_threshold;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `-i B^{-1} y' + Q y = λ y` on [0,1] with `B = diag(b1, b2)`, `b1 < 0 < b2`,
/// and off-diagonal polynomial `Q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiracSystem {
    b1: f64,
    b2: f64,
    q12: PolyFunc,
    q21: PolyFunc,
}

impl DiracSystem {
    pub fn new(b1: f64, b2: f64, q12: PolyFunc, q21: PolyFunc) -> Result<Self> {
        if !(b1.is_finite() && b2.is_finite() && b1 < 0.0 && b2 > 0.0) {
            return Err(Error::InvalidSystem(format!(
                "need b1 < 0 < b2, got b1={b1}, b2={b2}"
            )));
        }
        let finite = |p: &PolyFunc| {
            p.coeffs()
                .iter()
                .all(|z| z.re.is_finite() && z.im.is_finite())
        };
        if !finite(&q12) || !finite(&q21) {
            return Err(Error::InvalidSystem(
                "non-finite potential coefficient".into(),
            ));
        }
        Ok(Self { b1, b2, q12, q21 })
    }

    /// Classical Dirac weights b1 = -1, b2 = 1.
    pub fn dirac(q12: PolyFunc, q21: PolyFunc) -> Self {
        Self::new(-1.0, 1.0, q12, q21).expect("valid weights")
    }

    pub fn b1(&self) -> f64 {
        self.b1
    }

    pub fn b2(&self) -> f64 {
        self.b2
    }

    pub fn q12(&self) -> &PolyFunc {
        &self.q12
    }

    pub fn q21(&self) -> &PolyFunc {
        &self.q21
    }

    pub fn is_free(&self) -> bool {
        self.q12.is_zero() && self.q21.is_zero()
    }

    /// `c = i(b1 - b2)`, the scale of the large-λ expansion.
    pub fn c(&self) -> Complex64 {
        I * (self.b1 - self.b2)
    }

    /// Same weights, potential multiplied by `k`.
    pub fn with_scaled_potential(&self, k: Complex64) -> Self {
        Self {
            q12: self.q12.scale(k),
            q21: self.q21.scale(k),
            ..self.clone()
        }
    }
}

/// `(q+, q-) = (-i b1 Q12, -i b2 Q21)`.
pub fn q_pm(sys: &DiracSystem) -> (PolyFunc, PolyFunc) {
    (sys.q12.scale(-I * sys.b1), sys.q21.scale(-I * sys.b2))
}

/// Boundary matrix; row j holds the coefficients of
/// `a_j1 y1(0) + a_j2 y2(0) + a_j3 y1(1) + a_j4 y2(1) = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundarySpec {
    a: [[Complex64; 4]; 2],
}

impl BoundarySpec {
    pub fn new(a: [[Complex64; 4]; 2]) -> Result<Self> {
        if a.iter()
            .flatten()
            .any(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(Error::InvalidBoundary("non-finite entry".into()));
        }
        let norm = |r: &[Complex64; 4]| r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let (n1, n2) = (norm(&a[0]), norm(&a[1]));
        let bc = Self { a };
        let ms = bc.minors();
        let largest = ms.all().iter().map(|z| z.norm()).fold(0.0, f64::max);
        if n1 == 0.0 || n2 == 0.0 || largest <= 1e-12 * n1 * n2 {
            return Err(Error::InvalidBoundary(
                "boundary rows are linearly dependent".into(),
            ));
        }
        Ok(bc)
    }

    pub fn from_real(a: [[f64; 4]; 2]) -> Result<Self> {
        Self::new(a.map(|r| r.map(|x| Complex64::new(x, 0.0))))
    }

    pub fn rows(&self) -> &[[Complex64; 4]; 2] {
        &self.a
    }

    /// `M · a` for a 2×2 matrix `M`.
    pub fn left_multiply(&self, m: [[Complex64; 2]; 2]) -> Result<Self> {
        let mut out = [[Complex64::new(0.0, 0.0); 4]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (k, v) in row.iter_mut().enumerate() {
                *v = m[i][0] * self.a[0][k] + m[i][1] * self.a[1][k];
            }
        }
        Self::new(out)
    }

    /// `J_jk = a_1j a_2k - a_1k a_2j` with 1-based column indices.
    pub fn minor(&self, j: usize, k: usize) -> Complex64 {
        let (j, k) = (j - 1, k - 1);
        self.a[0][j] * self.a[1][k] - self.a[0][k] * self.a[1][j]
    }

    pub fn minors(&self) -> MinorSet {
        MinorSet {
            j12: self.minor(1, 2),
            j34: self.minor(3, 4),
            j32: self.minor(3, 2),
            j14: self.minor(1, 4),
            j13: self.minor(1, 3),
            j42: self.minor(4, 2),
        }
    }
}

/// The six minors that enter the characteristic determinant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinorSet {
    pub j12: Complex64,
    pub j34: Complex64,
    pub j32: Complex64,
    pub j14: Complex64,
    pub j13: Complex64,
    pub j42: Complex64,
}

impl MinorSet {
    pub fn all(&self) -> [Complex64; 6] {
        [self.j12, self.j34, self.j32, self.j14, self.j13, self.j42]
    }

    pub fn threshold(&self, zero_tol: f64) -> f64 {
        peer_threshold(zero_tol, &self.all())
    }

    pub fn largest(&self) -> f64 {
        self.all().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

pub fn minors(bc: &BoundarySpec) -> MinorSet {
    bc.minors()
}

#[allow(non_camel_case_types)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BcClass {
    Regular,
    NonRegular_J32zero,
    NonRegular_J14zero,
    NonRegular_bothZero,
    DegenerateDeltaZeroConstant,
}

/// Regular iff `J32 ≠ 0` and `J14 ≠ 0`. Degenerate when at most one of the
/// four exponential coefficients `J12, J34, J32, J14` of Δ_0 is nonzero, so
/// that Δ_0 is a single exponential or identically zero.
pub fn classify(ms: &MinorSet, zero_tol: f64) -> BcClass {
    let tau = ms.threshold(zero_tol);
    let nz = |z: Complex64| z.norm() > tau;
    classify_flags(nz(ms.j12), nz(ms.j34), nz(ms.j32), nz(ms.j14))
}

/// [`classify`] aware of the weights: when `b1 + b2 = 0` the `J12` and `J34`
/// exponentials coincide and only their sum matters.
pub fn classify_system(sys: &DiracSystem, ms: &MinorSet, zero_tol: f64) -> BcClass {
    let tau = ms.threshold(zero_tol);
    let nz = |z: Complex64| z.norm() > tau;
    if (sys.b1 + sys.b2).abs() <= 1e-14 * (sys.b2 - sys.b1) {
        let sum = ms.j12 + ms.j34;
        return classify_flags(nz(sum), false, nz(ms.j32), nz(ms.j14));
    }
    classify_flags(nz(ms.j12), nz(ms.j34), nz(ms.j32), nz(ms.j14))
}

fn classify_flags(j12: bool, j34: bool, j32: bool, j14: bool) -> BcClass {
    let count = [j12, j34, j32, j14].iter().filter(|&&b| b).count();
    match (j32, j14) {
        (true, true) => BcClass::Regular,
        _ if count <= 1 => BcClass::DegenerateDeltaZeroConstant,
        (false, true) => BcClass::NonRegular_J32zero,
        (true, false) => BcClass::NonRegular_J14zero,
        (false, false) => BcClass::NonRegular_bothZero,
    }
}

/// `P(x) = J13 b1 Q12(x) + J42 b2 Q21(1 - x)`.
pub fn p_function(sys: &DiracSystem, bc: &BoundarySpec) -> PolyFunc {
    let ms = bc.minors();
    sys.q12
        .scale(ms.j13 * sys.b1)
        .add(&sys.q21.reflect().scale(ms.j42 * sys.b2))
}
