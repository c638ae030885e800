//! Fixed inputs for the benchmarks.

use dirac_spectra::{BoundarySpec, DiracSystem, PolyFunc};
use num_complex::Complex64;

pub fn system() -> DiracSystem {
    DiracSystem::new(
        -1.0,
        1.5,
        PolyFunc::new(vec![
            Complex64::new(0.6, 0.2),
            Complex64::new(-0.4, 0.3),
            Complex64::new(0.1, 0.0),
        ]),
        PolyFunc::new(vec![
            Complex64::new(0.5, -0.1),
            Complex64::new(0.2, 0.0),
            Complex64::new(0.3, 0.4),
        ]),
    )
    .expect("b1 < 0 < b2")
}

/// J32 = 0 with J14, J13, J42 nonzero.
pub fn nonregular() -> BoundarySpec {
    BoundarySpec::from_real([[1., -1., 1., 0.], [0., -1., 1., 1.]]).expect("rank 2")
}

pub fn antiperiodic() -> BoundarySpec {
    BoundarySpec::from_real([[1., 0., 1., 0.], [0., 1., 0., 1.]]).expect("rank 2")
}
