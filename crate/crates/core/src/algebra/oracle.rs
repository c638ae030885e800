//! σ_k as explicit polynomials in x via the a_k/b_k quotient recursion.
//!
//! a_0 = 0, b_0 = 1, a_k = q_A·b_{k-1} - a_{k-1}', b_k = ∫_0^x q_B·a_k,
//! σ_k = a_k - Σ_{j=1}^{k-1} b_j·σ_{k-j}.
//!
//! Shares nothing with the symbolic recursion beyond [`PolyFunc`].

use super::polyfunc::PolyFunc;

/// σ_1..σ_n for concrete `q_A`, `q_B`.
pub fn oracle_sigma(q_a: &PolyFunc, q_b: &PolyFunc, n: usize) -> Vec<PolyFunc> {
    let mut a = vec![PolyFunc::zero()];
    let mut b = vec![PolyFunc::constant(num_complex::Complex64::new(1.0, 0.0))];
    let mut sigma: Vec<PolyFunc> = Vec::with_capacity(n);
    for k in 1..=n {
        let ak = q_a.mul(&b[k - 1]).sub(&a[k - 1].derivative());
        let bk = q_b.mul(&ak).antiderivative();
        let mut s = ak.clone();
        for j in 1..k {
            s = s.sub(&b[j].mul(&sigma[k - j - 1]));
        }
        a.push(ak);
        b.push(bk);
        sigma.push(s);
    }
    sigma
}
