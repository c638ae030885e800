use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::symbol::{DerivSymbol, Monomial, Species};
use crate::error::{Error, Result};
use crate::threshold::Measured;

/// Integer-coefficient polynomial in derivative symbols.
///
/// Zero coefficients are never stored. Iteration and `Display` follow the
/// print order of [`Monomial`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DerivPolynomial {
    terms: BTreeMap<Monomial, BigInt>,
}

impl DerivPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::one(), c.into());
        p
    }

    pub fn symbol(s: DerivSymbol) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::single(s), BigInt::one());
        p
    }

    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c.into());
        }
        p
    }

    /// Builds from `(coefficient, "A1.A0.B0")` pairs. Panics on a bad monomial.
    pub fn parse_terms(terms: &[(i64, &str)]) -> Self {
        Self::from_terms(
            terms
                .iter()
                .map(|(c, m)| (m.parse::<Monomial>().expect("monomial"), BigInt::from(*c))),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn max_order(&self, species: Species) -> Option<u32> {
        self.terms
            .keys()
            .flat_map(|m| m.factors().iter())
            .filter(|s| s.species == species)
            .map(|s| s.order)
            .max()
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, k: impl Into<BigInt>) -> Self {
        let k = k.into();
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * &k);
        }
        out
    }

    pub fn multiply(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.times(m2), c1 * c2);
            }
        }
        out
    }

    /// Leibniz rule: one term per factor, with that factor's order raised by one.
    pub fn differentiate(&self, max_order: u32) -> Result<Self> {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let f = m.factors();
            for i in 0..f.len() {
                // Equal neighbours give the same monomial; merge them up front.
                if i > 0 && f[i] == f[i - 1] {
                    continue;
                }
                let mult = f[i..].iter().take_while(|s| **s == f[i]).count();
                let order = f[i].order + 1;
                if order > max_order {
                    return Err(Error::MaxOrderExceeded {
                        order,
                        max: max_order,
                    });
                }
                let mut g = f.to_vec();
                g[i].order = order;
                out.add_term(Monomial::new(g), c * BigInt::from(mult));
            }
        }
        Ok(out)
    }

    /// Substitutes `vals_a[j]` for `Aj` and `vals_b[j]` for `Bj`.
    pub fn evaluate(&self, vals_a: &[Complex64], vals_b: &[Complex64]) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut prod = Complex64::new(bigint_to_f64(c), 0.0);
            for s in m.factors() {
                prod *= lookup(s, vals_a, vals_b)?;
            }
            acc += prod;
        }
        Ok(acc)
    }

    /// Same as [`evaluate`](Self::evaluate) but tracks the term magnitudes.
    pub fn evaluate_measured(&self, vals_a: &[Measured], vals_b: &[Measured]) -> Result<Measured> {
        let mut acc = Measured::ZERO;
        for (m, c) in &self.terms {
            let mut prod = Measured::exact(Complex64::new(bigint_to_f64(c), 0.0));
            for s in m.factors() {
                prod = prod * lookup(s, vals_a, vals_b)?;
            }
            acc = acc + prod;
        }
        Ok(acc)
    }
}

fn lookup<T: Copy>(s: &DerivSymbol, a: &[T], b: &[T]) -> Result<T> {
    let vals = match s.species {
        Species::A => a,
        Species::B => b,
    };
    vals.get(s.order as usize)
        .copied()
        .ok_or(Error::MissingDerivative {
            species: s.species,
            order: s.order,
        })
}

fn bigint_to_f64(c: &BigInt) -> f64 {
    c.to_f64().unwrap_or(if c.is_negative() {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    })
}

impl fmt::Display for DerivPolynomial {
    /// `-1*A5 + 8*A3.A0.B0 + ...`; the zero polynomial prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i == 0 {
                write!(f, "{c}*{m}")?;
            } else if c.is_negative() {
                write!(f, " - {}*{m}", -c)?;
            } else {
                write!(f, " + {c}*{m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(j: u32) -> DerivPolynomial {
        DerivPolynomial::symbol(DerivSymbol::a(j))
    }

    fn b(j: u32) -> DerivPolynomial {
        DerivPolynomial::symbol(DerivSymbol::b(j))
    }

    #[test]
    fn differentiate_single() {
        assert_eq!(a(0).differentiate(12).unwrap(), a(1));
    }

    #[test]
    fn differentiate_triple() {
        let p = a(0).multiply(&a(0)).multiply(&b(0));
        let want = DerivPolynomial::parse_terms(&[(2, "A1.A0.B0"), (1, "A0.A0.B1")]);
        assert_eq!(p.differentiate(12).unwrap(), want);
    }

    #[test]
    fn differentiate_sigma3() {
        let s3 = DerivPolynomial::parse_terms(&[(1, "A2"), (-1, "A0.A0.B0")]);
        let want = DerivPolynomial::parse_terms(&[(1, "A3"), (-2, "A1.A0.B0"), (-1, "A0.A0.B1")]);
        assert_eq!(s3.differentiate(12).unwrap(), want);
    }

    #[test]
    fn differentiate_respects_cap() {
        assert_eq!(
            a(3).differentiate(3),
            Err(Error::MaxOrderExceeded { order: 4, max: 3 })
        );
    }

    #[test]
    fn multiply_examples() {
        assert_eq!(
            a(0).multiply(&a(0)),
            DerivPolynomial::parse_terms(&[(1, "A0.A0")])
        );
        let p = a(0).sub(&a(1)).multiply(&b(0));
        assert_eq!(
            p,
            DerivPolynomial::parse_terms(&[(1, "A0.B0"), (-1, "A1.B0")])
        );
        // σ1·σ2 = -A0·A1
        assert_eq!(
            a(0).multiply(&a(1).neg()),
            DerivPolynomial::parse_terms(&[(-1, "A1.A0")])
        );
    }

    #[test]
    fn cancellation_drops_terms() {
        let p = a(0).add(&b(1)).sub(&a(0));
        assert_eq!(p, b(1));
        assert!(a(2).sub(&a(2)).is_zero());
    }

    #[test]
    fn evaluate_examples() {
        let three = Complex64::new(3.0, 0.0);
        assert_eq!(a(0).evaluate(&[three], &[]).unwrap(), three);

        let s3 = DerivPolynomial::parse_terms(&[(1, "A2"), (-1, "A0.A0.B0")]);
        let va = [1.0, 0.0, 5.0].map(|x| Complex64::new(x, 0.0));
        let vb = [Complex64::new(2.0, 0.0)];
        assert_eq!(s3.evaluate(&va, &vb).unwrap(), Complex64::new(3.0, 0.0));
    }

    #[test]
    fn evaluate_missing() {
        let err = b(2).evaluate(&[], &[Complex64::new(1.0, 0.0)]).unwrap_err();
        assert_eq!(
            err,
            Error::MissingDerivative {
                species: Species::B,
                order: 2
            }
        );
    }

    #[test]
    fn display() {
        let p = DerivPolynomial::parse_terms(&[(-1, "A3"), (1, "A0.A0.B1"), (4, "A1.A0.B0")]);
        assert_eq!(p.to_string(), "-1*A3 + 4*A1.A0.B0 + 1*A0.A0.B1");
        assert_eq!(DerivPolynomial::zero().to_string(), "0");
    }
}
