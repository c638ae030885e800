//! Subcommands of the `dirac-spectra` binary as library functions.
//!
//! Each `cmd_*` takes a validated [`Problem`] and returns the text to emit.
//! JSON output goes through [`json::to_string`] and is byte-stable.

pub mod config;
pub mod json;

use dirac_spectra::completeness::Corroboration;
use dirac_spectra::determinant::residual_slope;
use dirac_spectra::{
    classify_system, coefficient_table, fit_leading_coefficient, lemma_c123_check, locate_zeros,
    numeric_corroboration, p_function, ray_scan, verdict, EigenvalueSet, Error, HalfPlane,
    MinorSet, SpectrumOptions, Status, Verdict, DEFAULT_T_GRID,
};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

pub use config::{Problem, ProblemConfig};

pub const EXIT_INVALID_CONFIG: i32 = 2;
pub const EXIT_NUMERIC_FAILURE: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error("numeric failure: {0}")]
    Numeric(#[from] Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_INVALID_CONFIG,
            CliError::Numeric(_) => EXIT_NUMERIC_FAILURE,
            CliError::Io(_) => 1,
        }
    }
}

/// Run information copied into every JSON document.
#[derive(Debug, Clone, Serialize)]
pub struct Metadata {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub seed: u64,
}

impl Metadata {
    pub fn new(command: &str, seed: u64) -> Self {
        Self {
            tool: "dirac-spectra",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            seed,
        }
    }
}

fn emit(meta: &Metadata, body: Value) -> Result<String, CliError> {
    let mut doc = body;
    doc["metadata"] = serde_json::to_value(meta).expect("plain struct");
    Ok(json::to_string(&doc).expect("values are finite"))
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn minors_json(ms: &MinorSet) -> Value {
    let names = ["J12", "J34", "J32", "J14", "J13", "J42"];
    let mut out = serde_json::Map::new();
    for (n, z) in names.iter().zip(ms.all()) {
        out.insert((*n).to_string(), json!(pair(z)));
    }
    Value::Object(out)
}

pub fn cmd_classify(p: &Problem, meta: &Metadata) -> Result<String, CliError> {
    let ms = p.bc.minors();
    let tol = p.tol();
    let class = classify_system(&p.sys, &ms, tol.zero_tol);
    let largest = ms.largest();
    let normalized = MinorSet {
        j12: ms.j12 / largest,
        j34: ms.j34 / largest,
        j32: ms.j32 / largest,
        j14: ms.j14 / largest,
        j13: ms.j13 / largest,
        j42: ms.j42 / largest,
    };
    let pf = p_function(&p.sys, &p.bc);
    let n = p.config.order_n;
    let jet = |x: f64| -> Vec<[f64; 2]> {
        (0..=n)
            .map(|k| pair(pf.nth_derivative(k).eval(x)))
            .collect()
    };
    emit(
        meta,
        json!({
            "class": class,
            "minors": minors_json(&ms),
            "minors_normalized": minors_json(&normalized),
            "p_derivatives": { "at_0": jet(0.0), "at_1": jet(1.0) },
            "thresholds": { "zero_tol": tol.zero_tol, "minor_threshold": ms.threshold(tol.zero_tol) },
        }),
    )
}

pub fn cmd_coefficients(p: &Problem, meta: &Metadata) -> Result<String, CliError> {
    let tol = p.tol();
    let table = coefficient_table(&p.sys, &p.bc, p.config.order_n, tol.zero_tol)?;
    let check = lemma_c123_check(&p.sys, &p.bc)?;
    emit(
        meta,
        json!({
            "table": table,
            "closed_form_check": { "passed": check.passed(), "report": check },
        }),
    )
}

/// CSV with header `t,re_norm,im_norm`.
pub fn cmd_scan(p: &Problem) -> Result<String, CliError> {
    let (hp, grid) = p
        .scan_grid()
        .ok_or_else(|| CliError::Config("scan section required".into()))?;
    let rows = ray_scan(&p.sys, &p.bc, hp, &grid, p.tol().ode_tol)?;
    let mut out = String::from("t,re_norm,im_norm\n");
    for (t, v) in rows {
        out.push_str(&format!(
            "{},{},{}\n",
            json::float(t),
            json::float(v.re),
            json::float(v.im)
        ));
    }
    Ok(out)
}

#[derive(Debug, Serialize)]
struct FitRow {
    #[serde(rename = "K")]
    k: usize,
    table: [f64; 2],
    fit: Option<[f64; 2]>,
    err_est: Option<f64>,
    abs_err: Option<f64>,
    rel_err: Option<f64>,
    error: Option<String>,
}

/// Fits `c_K` for `K ≤ min(order_n, k^±)` on both half-planes.
pub fn cmd_verify_asymptotics(p: &Problem, meta: &Metadata) -> Result<String, CliError> {
    let tol = p.tol();
    let n = p.config.order_n;
    let table = coefficient_table(&p.sys, &p.bc, n, tol.zero_tol)?;
    let mut sides = serde_json::Map::new();
    for (hp, k, cs) in [
        (HalfPlane::Upper, table.k_plus, &table.c_plus),
        (HalfPlane::Lower, table.k_minus, &table.c_minus),
    ] {
        let last = k.unwrap_or(n).min(n);
        let mut rows = Vec::new();
        for kk in 0..=last {
            let want = cs[kk];
            let row = match fit_leading_coefficient(
                &p.sys,
                &p.bc,
                hp,
                kk,
                cs,
                &DEFAULT_T_GRID,
                tol.ode_tol,
            ) {
                Ok(f) => {
                    let abs = (f.estimate() - want).norm();
                    FitRow {
                        k: kk,
                        table: pair(want),
                        fit: Some(pair(f.estimate())),
                        err_est: Some(f.err_est),
                        abs_err: Some(abs),
                        rel_err: (want.norm() > 0.0).then(|| abs / want.norm()),
                        error: None,
                    }
                }
                Err(e @ Error::NoConvergence { .. }) => FitRow {
                    k: kk,
                    table: pair(want),
                    fit: None,
                    err_est: None,
                    abs_err: None,
                    rel_err: None,
                    error: Some(e.to_string()),
                },
                Err(e) => return Err(e.into()),
            };
            rows.push(row);
        }
        let slope = match k {
            Some(k) if k <= n => Some(residual_slope(
                &p.sys,
                &p.bc,
                hp,
                &cs[..=k],
                80.0,
                tol.ode_tol,
            )?),
            _ => None,
        };
        let name = if hp == HalfPlane::Upper {
            "upper"
        } else {
            "lower"
        };
        sides.insert(
            name.to_string(),
            json!({
                "k": k,
                "fits": rows,
                "residual_slope": slope,
                "slope_bound": k.map(|k| -(k as f64 + 0.5)),
                "slope_ok": slope.zip(k).map(|(s, k)| s <= -(k as f64 + 0.5)),
            }),
        );
    }
    emit(
        meta,
        json!({ "t_grid": DEFAULT_T_GRID, "order_n": n, "halfplanes": sides }),
    )
}

pub fn eigenvalues(p: &Problem) -> Result<EigenvalueSet, CliError> {
    let rect = p
        .rect()
        .ok_or_else(|| CliError::Config("rect section required".into()))?;
    let opts = SpectrumOptions {
        ode_tol: p.tol().ode_tol,
        ..SpectrumOptions::default()
    };
    Ok(locate_zeros(&p.sys, &p.bc, &rect, &opts)?)
}

pub fn cmd_eigenvalues(p: &Problem, meta: &Metadata) -> Result<String, CliError> {
    let set = eigenvalues(p)?;
    emit(meta, json!({ "eigenvalues": set }))
}

/// Verdict plus numeric corroboration (omitted for `Inconclusive`).
pub fn report(p: &Problem) -> Result<(Verdict, Option<Corroboration>), CliError> {
    let tol = p.tol();
    let v = verdict(&p.sys, &p.bc, p.config.order_n, tol.zero_tol)?;
    let c = match v.status {
        Status::Inconclusive => None,
        _ => Some(numeric_corroboration(&p.sys, &p.bc, &v, tol.ode_tol)?),
    };
    Ok((v, c))
}

pub fn cmd_report(p: &Problem, meta: &Metadata) -> Result<String, CliError> {
    let (v, c) = report(p)?;
    emit(
        meta,
        json!({
            "verdict": v,
            "corroboration": c,
            "class": classify_system(&p.sys, &p.bc.minors(), p.tol().zero_tol),
            "tolerances": p.tol(),
        }),
    )
}

/// Loads, validates and runs one subcommand; returns the output text.
pub fn run(command: &str, config: &std::path::Path, seed: u64) -> Result<String, CliError> {
    let p = ProblemConfig::load(config)?.validate()?;
    let meta = Metadata::new(command, seed);
    match command {
        "classify" => cmd_classify(&p, &meta),
        "coefficients" => cmd_coefficients(&p, &meta),
        "scan" => cmd_scan(&p),
        "verify-asymptotics" => cmd_verify_asymptotics(&p, &meta),
        "eigenvalues" => cmd_eigenvalues(&p, &meta),
        "report" => cmd_report(&p, &meta),
        other => Err(CliError::Config(format!("unknown command {other}"))),
    }
}
