mod common;

use common::{random_poly, rng};
use dirac_spectra::{
    oracle_sigma, sigma, DerivPolynomial, DerivSymbol, Monomial, PolyFunc, Species,
};
use num_bigint::BigInt;
use num_complex::Complex64;
use proptest::prelude::*;

const GOLDEN: &str = include_str!("golden/sigma_k.txt");

/// `(k, text)` pairs from the golden file.
fn golden() -> Vec<(u32, &'static str)> {
    GOLDEN
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let (k, body) = l.split_once(": ").unwrap();
            (k.parse().unwrap(), body)
        })
        .collect()
}

/// `"-1*A5 + 8*A3.A0.B0"` back into a polynomial.
fn parse(text: &str) -> DerivPolynomial {
    let mut terms = Vec::new();
    let mut sign = 1i64;
    for tok in text.split(' ') {
        match tok {
            "+" => sign = 1,
            "-" => sign = -1,
            t => {
                let (c, m) = t.split_once('*').unwrap();
                terms.push((sign * c.parse::<i64>().unwrap(), m));
            }
        }
    }
    DerivPolynomial::parse_terms(&terms)
}

#[test]
fn golden_sigma_text_and_terms() {
    let g = golden();
    assert_eq!(g.len(), 6);
    for (k, text) in g {
        let s = sigma(k).unwrap();
        assert_eq!(s.to_string(), text, "sigma_{k}");
        assert_eq!(*s, parse(text), "sigma_{k}");
    }
}

#[test]
fn grading_leading_and_marker() {
    for j in 1..=10u32 {
        let s = sigma(j).unwrap();
        for (m, _) in s.terms() {
            let na = m.count(Species::A);
            let nb = m.count(Species::B);
            assert_eq!(na, nb + 1, "sigma_{j}: {m}");
            assert_eq!(
                m.total_order() as usize + 2 * nb + 1,
                j as usize,
                "sigma_{j}: {m}"
            );
        }
        let sign = if j % 2 == 1 { 1 } else { -1 };
        assert_eq!(
            s.coefficient(&Monomial::single(DerivSymbol::a(j - 1))),
            BigInt::from(sign)
        );
        if j >= 3 {
            let marker = Monomial::new(vec![
                DerivSymbol::a(0),
                DerivSymbol::a(0),
                DerivSymbol::b(j - 3),
            ]);
            assert_eq!(
                s.coefficient(&marker),
                BigInt::from(-sign),
                "marker in sigma_{j}"
            );
        }
    }
}

fn jets(p: &PolyFunc, x: f64, n: usize) -> Vec<Complex64> {
    p.jet(n, x).iter().map(|m| m.value).collect()
}

#[test]
fn oracle_agrees_on_random_pairs() {
    let mut r = rng(7);
    for pair in 0..20 {
        let qa = random_poly(&mut r, 3);
        let qb = random_poly(&mut r, 3);
        let oracle = oracle_sigma(&qa, &qb, 8);
        for i in 0..64 {
            let x = i as f64 / 63.0;
            let (va, vb) = (jets(&qa, x, 9), jets(&qb, x, 9));
            for k in 1..=8u32 {
                let got = sigma(k).unwrap().evaluate(&va, &vb).unwrap();
                let want = oracle[k as usize - 1].eval(x);
                assert!(
                    (got - want).norm() <= 1e-10 * (1.0 + want.norm()),
                    "pair {pair} k {k} x {x}"
                );
            }
        }
    }
}

fn small_poly() -> impl Strategy<Value = DerivPolynomial> {
    let sym = (any::<bool>(), 0u32..4).prop_map(|(a, o)| {
        if a {
            DerivSymbol::a(o)
        } else {
            DerivSymbol::b(o)
        }
    });
    let mono = prop::collection::vec(sym, 0..4).prop_map(Monomial::new);
    prop::collection::vec((mono, -5i64..6), 0..5).prop_map(DerivPolynomial::from_terms)
}

proptest! {
    #[test]
    fn differentiate_is_a_derivation(p in small_poly(), q in small_poly()) {
        let d = |x: &DerivPolynomial| x.differentiate(12).unwrap();
        let lhs = d(&p.multiply(&q));
        let rhs = d(&p).multiply(&q).add(&p.multiply(&d(&q)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn multiply_commutes(p in small_poly(), q in small_poly()) {
        prop_assert_eq!(p.multiply(&q), q.multiply(&p));
    }
}
