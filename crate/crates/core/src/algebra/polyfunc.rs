use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::threshold::Measured;

/// Complex polynomial in x, monomial basis, lowest degree first.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PolyFunc {
    coeffs: Vec<Complex64>,
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

impl PolyFunc {
    /// Trailing exact zeros are dropped.
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs
            .last()
            .is_some_and(|z| *z == Complex64::new(0.0, 0.0))
        {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&x| c(x)).collect())
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(v: Complex64) -> Self {
        Self::new(vec![v])
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        self.coeffs.iter().rev().fold(c(0.0), |acc, &a| acc * x + a)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &a)| a * i as f64)
                .collect(),
        )
    }

    pub fn nth_derivative(&self, n: usize) -> Self {
        (0..n).fold(self.clone(), |p, _| p.derivative())
    }

    /// Antiderivative vanishing at 0.
    pub fn antiderivative(&self) -> Self {
        let mut out = Vec::with_capacity(self.coeffs.len() + 1);
        out.push(c(0.0));
        out.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, &a)| a / (i + 1) as f64),
        );
        Self::new(out)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let get = |v: &[Complex64], i: usize| v.get(i).copied().unwrap_or_default();
        Self::new(
            (0..n)
                .map(|i| get(&self.coeffs, i) + get(&o.coeffs, i))
                .collect(),
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(c(-1.0)))
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&a| a * k).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![c(0.0); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// p(1 - x), expanded binomially.
    pub fn reflect(&self) -> Self {
        let n = self.coeffs.len();
        let mut out = vec![c(0.0); n];
        for (k, &a) in self.coeffs.iter().enumerate() {
            // (1 - x)^k = Σ_j C(k,j) (-1)^j x^j
            let mut binom = 1.0;
            for (j, slot) in out.iter_mut().enumerate().take(k + 1) {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                *slot += a * (binom * sign);
                binom = binom * (k - j) as f64 / (j + 1) as f64;
            }
        }
        Self::new(out)
    }

    /// `n`-th derivative at `x` with the magnitude of its terms.
    pub fn derivative_measured(&self, n: usize, x: f64) -> Measured {
        let mut value = c(0.0);
        let mut scale = 0.0;
        for (i, &a) in self.coeffs.iter().enumerate().skip(n) {
            let falling: f64 = ((i - n + 1)..=i).map(|m| m as f64).product();
            let xp = x.powi((i - n) as i32);
            value += a * (falling * xp);
            scale += a.norm() * falling * xp.abs();
        }
        Measured::new(value, scale)
    }

    /// Values and term magnitudes of p, p', …, p^{(n-1)} at `x`.
    pub fn jet(&self, n: usize, x: f64) -> Vec<Measured> {
        (0..n).map(|k| self.derivative_measured(k, x)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn calculus_degrees() {
        let p = PolyFunc::from_real(&[1.0, 2.0, 3.0]);
        assert_eq!(p.derivative().degree(), Some(1));
        assert_eq!(p.antiderivative().degree(), Some(3));
        assert_eq!(p.antiderivative().eval(0.0), c(0.0));
        assert_eq!(p.antiderivative().derivative(), p);
        assert_eq!(PolyFunc::zero().derivative().degree(), None);
    }

    #[test]
    fn reflect_square() {
        // x^2 -> (1-x)^2 = 1 - 2x + x^2
        let p = PolyFunc::from_real(&[0.0, 0.0, 1.0]).reflect();
        assert_eq!(p, PolyFunc::from_real(&[1.0, -2.0, 1.0]));
    }

    #[test]
    fn measured_derivative_matches_symbolic() {
        let p = PolyFunc::new(vec![
            Complex64::new(0.5, -1.0),
            Complex64::new(2.0, 0.25),
            Complex64::new(-1.5, 3.0),
            Complex64::new(0.75, 0.0),
        ]);
        for n in 0..5 {
            for x in [0.0, 0.3, 1.0] {
                let m = p.derivative_measured(n, x);
                let direct = p.nth_derivative(n).eval(x);
                assert!((m.value - direct).norm() < 1e-13, "n={n} x={x}");
                assert!(m.scale >= m.value.norm());
            }
        }
    }

    #[test]
    fn mul_and_add() {
        let p = PolyFunc::from_real(&[1.0, 1.0]);
        assert_eq!(p.mul(&p), PolyFunc::from_real(&[1.0, 2.0, 1.0]));
        assert_eq!(p.sub(&p), PolyFunc::zero());
        assert!(p.mul(&PolyFunc::zero()).is_zero());
    }
}
