//! Spectral analysis of 2×2 Dirac-type boundary value problems
//!
//! ```text
//! -i B^{-1} y' + Q(x) y = λ y,   B = diag(b1, b2),  b1 < 0 < b2,
//! U_j(y) = a_j1 y1(0) + a_j2 y2(0) + a_j3 y1(1) + a_j4 y2(1) = 0,  j = 1, 2
//! ```
//! with polynomial off-diagonal `Q`.

pub mod algebra;
pub mod coeffs;
pub mod completeness;
pub mod determinant;
pub mod error;
pub mod model;
pub mod spectrum;
pub mod threshold;

pub use algebra::{
    oracle_sigma, sigma, DerivPolynomial, DerivSymbol, Monomial, PolyFunc, Species, DEFAULT_N_MAX,
};
pub use coeffs::{
    coefficient_table, lemma_c123_check, sigma_endpoint, CoefficientTable, Endpoint, Sign,
};
pub use completeness::{
    numeric_corroboration, special_case_catalogue, verdict, Corroboration, Status, Verdict, Witness,
};
pub use determinant::{
    delta_0, delta_q, fit_leading_coefficient, fundamental_matrix, ray_scan, residual_slope,
    FitRecord, FundamentalMatrix, HalfPlane, ScaledComplex, DEFAULT_ODE_TOL, DEFAULT_T_GRID,
};
pub use error::{Error, Result};
pub use model::{
    classify, classify_system, minors, p_function, q_pm, BcClass, BoundarySpec, DiracSystem,
    MinorSet,
};
pub use spectrum::{count_zeros, locate_zeros, Eigenvalue, EigenvalueSet, Rect, SpectrumOptions};
pub use threshold::{Measured, DEFAULT_ZERO_TOL};
