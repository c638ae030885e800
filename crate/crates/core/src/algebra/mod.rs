//! Differential-polynomial algebra for the trace coefficients σ_k.
//!
//! σ_k is a polynomial with integer coefficients in the derivatives of two
//! functions, `A` and `B`. The same polynomial serves σ_k^+ (A = q_-,
//! B = q_+) and σ_k^- (A = q_+, B = q_-).

mod oracle;
mod poly;
mod polyfunc;
mod sigma;
mod symbol;

pub use oracle::oracle_sigma;
pub use poly::DerivPolynomial;
pub use polyfunc::PolyFunc;
pub use sigma::{sigma, SigmaTable, DEFAULT_N_MAX};
pub use symbol::{DerivSymbol, Monomial, ParseMonomialError, Species};

#[cfg(test)]
mod props {
    use super::*;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn symbol() -> impl Strategy<Value = DerivSymbol> {
        (prop::bool::ANY, 0u32..4).prop_map(|(a, o)| {
            if a {
                DerivSymbol::a(o)
            } else {
                DerivSymbol::b(o)
            }
        })
    }

    fn poly() -> impl Strategy<Value = DerivPolynomial> {
        prop::collection::vec((prop::collection::vec(symbol(), 0..4), -5i64..=5), 0..5).prop_map(
            |terms| {
                DerivPolynomial::from_terms(terms.into_iter().map(|(f, c)| (Monomial::new(f), c)))
            },
        )
    }

    proptest! {
        #[test]
        fn derivation_rule(p in poly(), q in poly()) {
            let lhs = p.multiply(&q).differentiate(12).unwrap();
            let rhs = p.differentiate(12).unwrap().multiply(&q)
                .add(&p.multiply(&q.differentiate(12).unwrap()));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn multiply_commutes(p in poly(), q in poly()) {
            prop_assert_eq!(p.multiply(&q), q.multiply(&p));
        }

        #[test]
        fn evaluate_is_ring_map(p in poly(), q in poly(),
                                va in prop::collection::vec(-2.0f64..2.0, 4),
                                vb in prop::collection::vec(-2.0f64..2.0, 4)) {
            let va: Vec<Complex64> = va.iter().map(|&x| Complex64::new(x, 0.5 * x)).collect();
            let vb: Vec<Complex64> = vb.iter().map(|&x| Complex64::new(-x, 1.0)).collect();
            let pq = p.multiply(&q).evaluate(&va, &vb).unwrap();
            let prod = p.evaluate(&va, &vb).unwrap() * q.evaluate(&va, &vb).unwrap();
            prop_assert!((pq - prod).norm() <= 1e-9 * (1.0 + prod.norm()));
        }
    }
}
