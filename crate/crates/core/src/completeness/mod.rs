//! Completeness and minimality verdicts for the root vectors of a BVP.
//!
//! Decision order:
//! 1. the iff-criterion for `y2(1) = 0` type conditions (both directions);
//! 2. the incompleteness pattern `J14 = J32 = 0`, `P ≡ 0`;
//! 3. the general sufficient condition on `c_k^±`;
//! 4. the special-case catalogue in [`catalogue::RULES`] order.
//!
//! Without a witness the verdict is `Inconclusive`, never `Incomplete`.

pub mod catalogue;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::DEFAULT_N_MAX;
use crate::coeffs::{coefficient_table, CoefficientTable};
use crate::determinant::{
    fit_leading_coefficient, loglog_slope, ray_scan, HalfPlane, DEFAULT_T_GRID,
};
use crate::error::{Error, Result};
use crate::model::{BoundarySpec, DiracSystem};
use catalogue::{evaluate_rules, Context, RuleOutcome, COMPARISONS, RULES};

const N_MAX: usize = DEFAULT_N_MAX as usize;

pub const RULE_GENERAL: &str = "Thm-compl-gen-2x2";
pub const RULE_CRITERION: &str = "Cor-criterion";
pub const RULE_VANISHING_P: &str = "Rem-DiracVsSL";
pub const RULE_NONE: &str = "none";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    CompleteAndMinimal,
    Incomplete,
    Inconclusive,
}

/// A quantity a rule relied on, with the threshold it was compared to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub name: String,
    pub value: Complex64,
    pub magnitude: f64,
    pub threshold: f64,
}

impl Witness {
    pub fn new(name: &str, value: Complex64, threshold: f64) -> Self {
        Self {
            name: name.to_string(),
            value,
            magnitude: value.norm(),
            threshold,
        }
    }
}

/// First-nonzero and vanishing-prefix indices behind the rules.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Indices {
    /// First nonzero P^{(k)}(0), k ≤ n − 1.
    pub n0: Option<usize>,
    pub n1: Option<usize>,
    /// Vanishing prefix of Q12^{(j)}(0), Q21^{(j)}(1).
    pub m0: usize,
    /// Vanishing prefix of Q12^{(j)}(1), Q21^{(j)}(0).
    pub m1: usize,
    pub q12_at_0: Option<usize>,
    pub q12_at_1: Option<usize>,
    pub q21_at_0: Option<usize>,
    pub q21_at_1: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub zero_tol: f64,
    /// `zero_tol · max |J_jk|`.
    pub minor_threshold: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub rule: String,
    pub witnesses: Vec<Witness>,
    pub order_used: usize,
    /// `(k^+, k^−)`; taken from the table at the maximal order when the
    /// decision was made without it.
    pub predicted_growth: Option<(usize, usize)>,
    pub indices: Indices,
    pub thresholds: Thresholds,
    /// Comparison-only rules and whether they would apply.
    pub comparisons: Vec<RuleOutcome>,
    pub notes: Vec<String>,
}

fn check_order(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("order must be at least 1".into()));
    }
    if n > N_MAX {
        return Err(Error::MaxOrderExceeded {
            order: n as u32,
            max: DEFAULT_N_MAX,
        });
    }
    Ok(())
}

/// First applicable catalogue rule.
pub fn special_case_catalogue(
    sys: &DiracSystem,
    bc: &BoundarySpec,
    n: usize,
    zero_tol: f64,
) -> Result<Option<RuleOutcome>> {
    check_order(n)?;
    let ctx = Context::new(sys, bc, n, zero_tol);
    Ok(evaluate_rules(&ctx, &RULES).into_iter().find(|o| o.applies))
}

/// Every catalogue rule with its outcome, for audits.
pub fn catalogue_report(
    sys: &DiracSystem,
    bc: &BoundarySpec,
    n: usize,
    zero_tol: f64,
) -> Result<Vec<RuleOutcome>> {
    check_order(n)?;
    let ctx = Context::new(sys, bc, n, zero_tol);
    Ok(evaluate_rules(&ctx, &RULES))
}

fn growth(t: &CoefficientTable) -> Option<(usize, usize)> {
    Some((t.k_plus?, t.k_minus?))
}

fn coefficient_witness(t: &CoefficientTable, upper: bool, tau: f64) -> Option<Witness> {
    let (k, v) = t.leading(upper)?;
    let (sign, scale) = if upper {
        ('+', t.scale_plus[k])
    } else {
        ('-', t.scale_minus[k])
    };
    let threshold = if k == 0 { tau } else { t.zero_tol * scale };
    Some(Witness::new(&format!("c{k}{sign}"), v, threshold))
}

pub fn verdict(sys: &DiracSystem, bc: &BoundarySpec, n: usize, zero_tol: f64) -> Result<Verdict> {
    check_order(n)?;
    let ctx = Context::new(sys, bc, n, zero_tol);
    let table = coefficient_table(sys, bc, n, zero_tol)?;
    let full = if n == N_MAX {
        table.clone()
    } else {
        coefficient_table(sys, bc, N_MAX, zero_tol)?
    };
    let ms = &ctx.ms;
    let indices = Indices {
        n0: ctx.n_index(false),
        n1: ctx.n_index(true),
        m0: ctx.m_index(false),
        m1: ctx.m_index(true),
        q12_at_0: ctx.j12_index(false, n),
        q12_at_1: ctx.j12_index(true, n),
        q21_at_0: ctx.j21_index(false, n),
        q21_at_1: ctx.j21_index(true, n),
    };
    let mut v = Verdict {
        status: Status::Inconclusive,
        rule: RULE_NONE.to_string(),
        witnesses: Vec::new(),
        order_used: n,
        predicted_growth: growth(&table).or_else(|| growth(&full)),
        indices,
        thresholds: Thresholds {
            zero_tol,
            minor_threshold: ctx.tau,
        },
        comparisons: evaluate_rules(&ctx, &COMPARISONS),
        notes: Vec::new(),
    };
    let w_minor = |name: &str, z: Complex64| Witness::new(name, z, ctx.tau);

    // y2(1) = 0 together with a1 y1(0) + a2 y2(0) + a3 y1(1) = 0, a2 ≠ 0
    if !ctx.nz(ms.j12) && !ctx.nz(ms.j13) && !ctx.nz(ms.j32) && ctx.nz(ms.j42) {
        v.rule = RULE_CRITERION.to_string();
        v.witnesses.push(w_minor("J42", ms.j42));
        if ctx.q21_vanishes() {
            v.status = Status::Incomplete;
            v.predicted_growth = None;
            v.notes.push(
                "Q21 vanishes identically: every root vector has zero second component".into(),
            );
        } else {
            v.status = Status::CompleteAndMinimal;
            let j1 = (0..ctx.q21_1.len())
                .find(|&j| ctx.q21_nz(true, j))
                .expect("nonzero polynomial");
            let j0 = (0..ctx.q21_0.len())
                .find(|&j| ctx.q21_nz(false, j))
                .expect("nonzero polynomial");
            v.witnesses
                .push(ctx.w_q("Q21(1)", &ctx.q21_1[j1], j1, false));
            v.witnesses
                .push(ctx.w_q("Q21(0)", &ctx.q21_0[j0], j0, false));
        }
        return Ok(v);
    }

    if !ctx.nz(ms.j32) && !ctx.nz(ms.j14) && ctx.nz(ms.j13) && ctx.nz(ms.j42) && ctx.p_vanishes() {
        v.status = Status::Incomplete;
        v.rule = RULE_VANISHING_P.to_string();
        v.witnesses = vec![w_minor("J13", ms.j13), w_minor("J42", ms.j42)];
        v.predicted_growth = None;
        v.notes
            .push("P vanishes identically with J32 = J14 = 0".into());
        return Ok(v);
    }

    if let (Some(wp), Some(wm)) = (
        coefficient_witness(&table, true, ctx.tau),
        coefficient_witness(&table, false, ctx.tau),
    ) {
        v.status = Status::CompleteAndMinimal;
        v.rule = RULE_GENERAL.to_string();
        v.witnesses = vec![wp, wm];
        return Ok(v);
    }

    if let Some(hit) = evaluate_rules(&ctx, &RULES).into_iter().find(|o| o.applies) {
        v.status = Status::CompleteAndMinimal;
        v.rule = hit.rule;
        v.witnesses = hit.witnesses;
        return Ok(v);
    }

    let missing: Vec<&str> = [(table.k_plus, "c_k^+"), (table.k_minus, "c_k^-")]
        .iter()
        .filter(|(k, _)| k.is_none())
        .map(|(_, s)| *s)
        .collect();
    v.notes.push(format!(
        "no sufficient condition met at order {n}: all {} vanish for k <= {n}; a larger order may decide",
        missing.join(" and ")
    ));
    Ok(v)
}

/// Growth floor of one half-plane along the imaginary axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SideCorroboration {
    pub half_plane: HalfPlane,
    pub k: Option<usize>,
    /// `min_t |Δ(±it)| t^k e^{∓b t}` over the grid.
    pub floor: f64,
    /// Fitted `c_k`, when `k` is known.
    pub fitted: Option<Complex64>,
    pub fit_err: Option<f64>,
    /// `1e-3 · |c_k| / |c|^k`.
    pub required: Option<f64>,
    /// Log-log slope of `|Δ(±it)| e^{∓b t}` when no `k` is known.
    pub decay_slope: Option<f64>,
    pub suspect: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Corroboration {
    pub t_grid: Vec<f64>,
    pub upper: SideCorroboration,
    pub lower: SideCorroboration,
    pub suspect: bool,
}

pub const FLOOR_FRACTION: f64 = 1e-3;

fn side(
    sys: &DiracSystem,
    bc: &BoundarySpec,
    hp: HalfPlane,
    k: Option<usize>,
    t_grid: &[f64],
    zero_tol: f64,
    tol: f64,
) -> Result<SideCorroboration> {
    let scan = ray_scan(sys, bc, hp, t_grid, tol)?;
    let upper = hp == HalfPlane::Upper;
    let Some(k) = k else {
        let pts: Vec<(f64, f64)> = scan.iter().map(|(t, v)| (*t, v.norm())).collect();
        let floor = pts.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        let slope = if pts.iter().all(|p| p.1 > 0.0) {
            loglog_slope(&pts)
        } else {
            f64::NEG_INFINITY
        };
        return Ok(SideCorroboration {
            half_plane: hp,
            k: None,
            floor,
            fitted: None,
            fit_err: None,
            required: None,
            decay_slope: Some(slope),
            suspect: true,
        });
    };
    let floor = scan
        .iter()
        .map(|(t, v)| v.norm() * t.powi(k as i32))
        .fold(f64::INFINITY, f64::min);
    let table = coefficient_table(sys, bc, k, zero_tol)?;
    let known = if upper { &table.c_plus } else { &table.c_minus };
    let (fitted, fit_err) = match fit_leading_coefficient(sys, bc, hp, k, known, t_grid, tol) {
        Ok(r) => (Some(r.estimate()), Some(r.err_est)),
        Err(Error::NoConvergence { .. }) => (None, None),
        Err(e) => return Err(e),
    };
    let required = fitted.map(|c| FLOOR_FRACTION * c.norm() / sys.c().norm().powi(k as i32));
    let suspect = required.map_or(true, |r| floor.is_nan() || floor < r);
    Ok(SideCorroboration {
        half_plane: hp,
        k: Some(k),
        floor,
        fitted,
        fit_err,
        required,
        decay_slope: None,
        suspect,
    })
}

/// Checks the growth floors a verdict implies on the default t grid.
///
/// A `CompleteAndMinimal` verdict is suspect when either floor falls below
/// [`FLOOR_FRACTION`] of its fitted leading term. An `Incomplete` verdict is
/// suspect unless some half-plane decays faster than `t^{-n_max}`.
pub fn numeric_corroboration(
    sys: &DiracSystem,
    bc: &BoundarySpec,
    v: &Verdict,
    tol: f64,
) -> Result<Corroboration> {
    let (kp, km) = match v.predicted_growth {
        Some((a, b)) => (Some(a), Some(b)),
        None => {
            let t = coefficient_table(sys, bc, N_MAX, v.thresholds.zero_tol)?;
            (t.k_plus, t.k_minus)
        }
    };
    let grid = DEFAULT_T_GRID.to_vec();
    let z = v.thresholds.zero_tol;
    let (upper, lower) = rayon::join(
        || side(sys, bc, HalfPlane::Upper, kp, &grid, z, tol),
        || side(sys, bc, HalfPlane::Lower, km, &grid, z, tol),
    );
    let (upper, lower) = (upper?, lower?);
    let suspect = match v.status {
        Status::CompleteAndMinimal => upper.suspect || lower.suspect,
        Status::Incomplete => {
            let fast = -(N_MAX as f64);
            ![&upper, &lower]
                .iter()
                .any(|s| s.decay_slope.is_some_and(|d| d < fast))
        }
        Status::Inconclusive => false,
    };
    Ok(Corroboration {
        t_grid: grid,
        upper,
        lower,
        suspect,
    })
}
