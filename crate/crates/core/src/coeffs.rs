//! Endpoint values of σ_k^± and the expansion coefficients c_k^± of the
//! characteristic determinant.
//!
//! ```text
//! c_k^+ = J13 (-1)^{k-1} σ_k^-(0) + J42 σ_k^+(1) - J14 Σ_{j=1}^{k-1} (-1)^j σ_j^-(0) σ_{k-j}^+(1)
//! c_k^- = J13 (-1)^{k-1} σ_k^-(1) + J42 σ_k^+(0) + J32 Σ_{j=1}^{k-1} (-1)^j σ_j^-(1) σ_{k-j}^+(0)
//! ```
//! with `c_0^+ = J32` and `c_0^- = J14`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{sigma, PolyFunc};
use crate::error::Result;
use crate::model::{q_pm, BoundarySpec, DiracSystem, MinorSet};
use crate::threshold::Measured;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Endpoint {
    Zero,
    One,
}

impl Endpoint {
    pub fn x(self) -> f64 {
        match self {
            Endpoint::Zero => 0.0,
            Endpoint::One => 1.0,
        }
    }
}

/// σ_k^±(x) for k = 1..=n at one endpoint, with term magnitudes.
pub fn sigma_values(
    sys: &DiracSystem,
    sign: Sign,
    n: usize,
    at: Endpoint,
) -> Result<Vec<Measured>> {
    let (qp, qm) = q_pm(sys);
    let (qa, qb): (&PolyFunc, &PolyFunc) = match sign {
        Sign::Plus => (&qm, &qp),
        Sign::Minus => (&qp, &qm),
    };
    let va = qa.jet(n, at.x());
    let vb = qb.jet(n, at.x());
    (1..=n as u32)
        .map(|k| sigma(k)?.evaluate_measured(&va, &vb))
        .collect()
}

/// σ_k^± at an endpoint.
pub fn sigma_endpoint(sys: &DiracSystem, sign: Sign, k: u32, at: Endpoint) -> Result<Complex64> {
    let (qp, qm) = q_pm(sys);
    let (qa, qb) = match sign {
        Sign::Plus => (&qm, &qp),
        Sign::Minus => (&qp, &qm),
    };
    let n = k as usize;
    let va: Vec<Complex64> = (0..n).map(|j| qa.nth_derivative(j).eval(at.x())).collect();
    let vb: Vec<Complex64> = (0..n).map(|j| qb.nth_derivative(j).eval(at.x())).collect();
    sigma(k)?.evaluate(&va, &vb)
}

/// Shared shape of both coefficient formulas.
///
/// `s_minus[j-1]`, `s_plus[j-1]` hold σ_j; `cross` is the minor in front of
/// the convolution, with its sign already applied.
pub fn combine(
    k: usize,
    j13: Complex64,
    j42: Complex64,
    cross: Complex64,
    s_minus: &[Measured],
    s_plus: &[Measured],
) -> Measured {
    let alt = |j: usize| if j % 2 == 0 { 1.0 } else { -1.0 };
    let mut conv = Measured::ZERO;
    for j in 1..k {
        conv = conv + (s_minus[j - 1] * s_plus[k - j - 1]).scaled(Complex64::new(alt(j), 0.0));
    }
    s_minus[k - 1].scaled(j13 * alt(k - 1)) + s_plus[k - 1].scaled(j42) + conv.scaled(cross)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientTable {
    pub n: usize,
    pub zero_tol: f64,
    pub c_plus: Vec<Complex64>,
    pub c_minus: Vec<Complex64>,
    /// Magnitude of the terms summed into each coefficient.
    pub scale_plus: Vec<f64>,
    pub scale_minus: Vec<f64>,
    pub k_plus: Option<usize>,
    pub k_minus: Option<usize>,
}

impl CoefficientTable {
    pub fn plus(&self, k: usize) -> Measured {
        Measured {
            value: self.c_plus[k],
            scale: self.scale_plus[k],
        }
    }

    pub fn minus(&self, k: usize) -> Measured {
        Measured {
            value: self.c_minus[k],
            scale: self.scale_minus[k],
        }
    }

    /// Leading coefficient of the chosen half-plane, if any.
    pub fn leading(&self, upper: bool) -> Option<(usize, Complex64)> {
        if upper {
            self.k_plus.map(|k| (k, self.c_plus[k]))
        } else {
            self.k_minus.map(|k| (k, self.c_minus[k]))
        }
    }
}

/// c_0^± … c_n^± with first-nonzero indices.
pub fn coefficient_table(
    sys: &DiracSystem,
    bc: &BoundarySpec,
    n: usize,
    zero_tol: f64,
) -> Result<CoefficientTable> {
    let ms = bc.minors();
    let sm0 = sigma_values(sys, Sign::Minus, n, Endpoint::Zero)?;
    let sp1 = sigma_values(sys, Sign::Plus, n, Endpoint::One)?;
    let sm1 = sigma_values(sys, Sign::Minus, n, Endpoint::One)?;
    let sp0 = sigma_values(sys, Sign::Plus, n, Endpoint::Zero)?;

    let mut plus = vec![Measured::exact(ms.j32)];
    let mut minus = vec![Measured::exact(ms.j14)];
    for k in 1..=n {
        plus.push(combine(k, ms.j13, ms.j42, -ms.j14, &sm0, &sp1));
        minus.push(combine(k, ms.j13, ms.j42, ms.j32, &sm1, &sp0));
    }
    let tau = ms.threshold(zero_tol);
    let first = |v: &[Measured]| {
        if v[0].value.norm() > tau {
            Some(0)
        } else {
            v.iter()
                .skip(1)
                .position(|m| m.is_nonzero(zero_tol))
                .map(|i| i + 1)
        }
    };
    Ok(CoefficientTable {
        n,
        zero_tol,
        k_plus: first(&plus),
        k_minus: first(&minus),
        c_plus: plus.iter().map(|m| m.value).collect(),
        c_minus: minus.iter().map(|m| m.value).collect(),
        scale_plus: plus.iter().map(|m| m.scale).collect(),
        scale_minus: minus.iter().map(|m| m.scale).collect(),
    })
}

/// One comparison of a table entry against its closed form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormEntry {
    pub k: usize,
    pub sign: Sign,
    pub table: Complex64,
    pub closed_form: Complex64,
    pub rel_err: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormReport {
    pub tolerance: f64,
    pub entries: Vec<ClosedFormEntry>,
}

impl ClosedFormReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.ok)
    }

    /// `(k, sign)` of every failing entry.
    pub fn mismatches(&self) -> Vec<(usize, Sign)> {
        self.entries
            .iter()
            .filter(|e| !e.ok)
            .map(|e| (e.k, e.sign))
            .collect()
    }
}

/// Closed forms of c_1^±, c_2^±, c_3^± in terms of q± and their derivatives.
pub fn closed_forms(sys: &DiracSystem, ms: &MinorSet) -> [[Measured; 2]; 3] {
    let (qp, qm) = q_pm(sys);
    let p0 = qp.jet(3, 0.0);
    let p1 = qp.jet(3, 1.0);
    let m0 = qm.jet(3, 0.0);
    let m1 = qm.jet(3, 1.0);
    let (j13, j42, j14, j32) = (ms.j13, ms.j42, ms.j14, ms.j32);

    let c1p = p0[0].scaled(j13) + m1[0].scaled(j42);
    let c1m = p1[0].scaled(j13) + m0[0].scaled(j42);

    let c2p = p0[1].scaled(j13) - m1[1].scaled(j42) + (p0[0] * m1[0]).scaled(j14);
    let c2m = p1[1].scaled(j13) - m0[1].scaled(j42) - (p1[0] * m0[0]).scaled(j32);

    let c3p = (p0[2] - p0[0] * p0[0] * m0[0]).scaled(j13)
        + (m1[2] - m1[0] * m1[0] * p1[0]).scaled(j42)
        + (p0[1] * m1[0] - p0[0] * m1[1]).scaled(j14);
    let c3m = (p1[2] - p1[0] * p1[0] * m1[0]).scaled(j13)
        + (m0[2] - m0[0] * m0[0] * p0[0]).scaled(j42)
        - (p1[1] * m0[0] - p1[0] * m0[1]).scaled(j32);

    [[c1p, c1m], [c2p, c2m], [c3p, c3m]]
}

/// Compares entries 1..=3 of `table` with [`closed_forms`].
pub fn check_table_against_closed_forms(
    table: &CoefficientTable,
    sys: &DiracSystem,
    bc: &BoundarySpec,
    tolerance: f64,
) -> ClosedFormReport {
    let closed = closed_forms(sys, &bc.minors());
    let mut entries = Vec::new();
    for k in 1..=3usize.min(table.n) {
        for (idx, sign) in [Sign::Plus, Sign::Minus].into_iter().enumerate() {
            let got = if sign == Sign::Plus {
                table.plus(k)
            } else {
                table.minus(k)
            };
            let want = closed[k - 1][idx];
            let scale = got.scale.max(want.scale);
            let diff = (got.value - want.value).norm();
            let rel_err = if scale > 0.0 { diff / scale } else { diff };
            entries.push(ClosedFormEntry {
                k,
                sign,
                table: got.value,
                closed_form: want.value,
                rel_err,
                ok: rel_err <= tolerance,
            });
        }
    }
    ClosedFormReport { tolerance, entries }
}

/// Checks c_1^±..c_3^± against their closed forms to 1e-12 relative.
pub fn lemma_c123_check(sys: &DiracSystem, bc: &BoundarySpec) -> Result<ClosedFormReport> {
    let table = coefficient_table(sys, bc, 3, crate::threshold::DEFAULT_ZERO_TOL)?;
    Ok(check_table_against_closed_forms(&table, sys, bc, 1e-12))
}
