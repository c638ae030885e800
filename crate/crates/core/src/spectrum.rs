//! Zeros of the characteristic determinant in rectangles.
//!
//! Counting uses the argument principle: the phase of Δ is tracked along the
//! contour, bisecting until consecutive samples differ by less than π/4.
//! Location recursively splits rectangles, then refines each cluster by
//! Newton's method and checks its multiplicity on a small circle.

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::determinant::{delta_q, ScaledComplex, DEFAULT_ODE_TOL};
use crate::error::{Error, Result};
use crate::model::{BoundarySpec, DiracSystem};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Rect {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        let r = Self {
            re_min,
            re_max,
            im_min,
            im_max,
        };
        let finite = [re_min, re_max, im_min, im_max]
            .iter()
            .all(|x| x.is_finite());
        if !finite || re_min >= re_max || im_min >= im_max {
            return Err(Error::InvalidArgument(format!("empty rectangle {r:?}")));
        }
        Ok(r)
    }

    pub fn diameter(&self) -> f64 {
        (self.re_max - self.re_min).hypot(self.im_max - self.im_min)
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(
            0.5 * (self.re_min + self.re_max),
            0.5 * (self.im_min + self.im_max),
        )
    }

    pub fn inflate(&self, d: f64) -> Self {
        Self {
            re_min: self.re_min - d,
            re_max: self.re_max + d,
            im_min: self.im_min - d,
            im_max: self.im_max + d,
        }
    }

    pub fn contains(&self, z: Complex64) -> bool {
        (self.re_min..=self.re_max).contains(&z.re) && (self.im_min..=self.im_max).contains(&z.im)
    }

    /// Corners in counter-clockwise order starting bottom-left.
    fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.re_min, self.im_min),
            Complex64::new(self.re_max, self.im_min),
            Complex64::new(self.re_max, self.im_max),
            Complex64::new(self.re_min, self.im_max),
        ]
    }

    /// Four sub-rectangles split at the given fractions of each side.
    fn split(&self, fx: f64, fy: f64) -> [Rect; 4] {
        let xm = self.re_min + fx * (self.re_max - self.re_min);
        let ym = self.im_min + fy * (self.im_max - self.im_min);
        [
            Rect {
                re_max: xm,
                im_max: ym,
                ..*self
            },
            Rect {
                re_min: xm,
                im_max: ym,
                ..*self
            },
            Rect {
                re_max: xm,
                im_min: ym,
                ..*self
            },
            Rect {
                re_min: xm,
                im_min: ym,
                ..*self
            },
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Eigenvalue {
    pub lambda: Complex64,
    pub multiplicity: usize,
    /// Set when refinement stalled and the zero is only bracketed.
    pub bracket: Option<Rect>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenvalueSet {
    pub eigenvalues: Vec<Eigenvalue>,
    pub total_count: usize,
    /// The rectangle actually counted, after any inflation.
    pub rect: Rect,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumOptions {
    pub ode_tol: f64,
    /// Guard distance as a fraction of the rectangle diameter.
    pub guard: f64,
    pub max_retries: usize,
    pub max_depth: usize,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        Self {
            ode_tol: DEFAULT_ODE_TOL,
            guard: 1e-4,
            max_retries: 3,
            max_depth: 14,
        }
    }
}

/// An analytic function with a bound on how fast its phase turns.
pub struct Analytic<'a> {
    f: Box<dyn Fn(Complex64) -> Result<ScaledComplex> + Sync + 'a>,
    /// Samples per unit length before adaptive refinement.
    density: f64,
}

impl<'a> Analytic<'a> {
    pub fn new<F>(f: F, density: f64) -> Self
    where
        F: Fn(Complex64) -> Result<ScaledComplex> + Sync + 'a,
    {
        Self {
            f: Box::new(f),
            density,
        }
    }

    /// Δ_Q of a boundary value problem.
    pub fn determinant(sys: &'a DiracSystem, bc: &'a BoundarySpec, tol: f64) -> Self {
        let density = 2.0 * (sys.b2() - sys.b1());
        Self::new(move |z| delta_q(sys, bc, z, tol), density)
    }

    fn eval(&self, z: Complex64) -> Result<ScaledComplex> {
        let v = (self.f)(z)?;
        if v.is_zero() {
            return Err(Error::BoundaryZero { near: z });
        }
        Ok(v)
    }

    /// Phase increment from `a` to `b` with values `fa`, `fb`.
    fn refine(
        &self,
        a: Complex64,
        fa: ScaledComplex,
        b: Complex64,
        fb: ScaledComplex,
        delta: f64,
    ) -> Result<f64> {
        let d = (fb.mantissa() / fa.mantissa()).arg();
        if d.abs() < FRAC_PI_4 {
            return Ok(d);
        }
        if (b - a).norm() < delta {
            return Err(Error::BoundaryZero {
                near: 0.5 * (a + b),
            });
        }
        let m = 0.5 * (a + b);
        let fm = self.eval(m)?;
        Ok(self.refine(a, fa, m, fm, delta)? + self.refine(m, fm, b, fb, delta)?)
    }

    /// Total phase change along the closed polygon through `vertices`.
    fn polygon_phase(&self, vertices: &[Complex64], delta: f64) -> Result<f64> {
        let mut pts = Vec::new();
        let n = vertices.len();
        for i in 0..n {
            let (a, b) = (vertices[i], vertices[(i + 1) % n]);
            let k = ((b - a).norm() * self.density).ceil().max(4.0) as usize;
            pts.extend((0..k).map(|j| a + (b - a) * (j as f64 / k as f64)));
        }
        let vals: Vec<ScaledComplex> = pts
            .par_iter()
            .map(|&z| self.eval(z))
            .collect::<Result<_>>()?;
        let m = pts.len();
        let parts: Vec<f64> = (0..m)
            .into_par_iter()
            .map(|i| {
                let j = (i + 1) % m;
                self.refine(pts[i], vals[i], pts[j], vals[j], delta)
            })
            .collect::<Result<_>>()?;
        Ok(parts.iter().sum())
    }

    /// Winding number of the image of the rectangle boundary around 0.
    pub fn winding(&self, rect: &Rect, delta: f64) -> Result<usize> {
        let phase = self.polygon_phase(&rect.corners(), delta)?;
        to_count(phase, rect.center())
    }

    /// Winding number along a circle, approximated by a 32-gon.
    pub fn winding_circle(&self, center: Complex64, r: f64) -> Result<usize> {
        let v: Vec<Complex64> = (0..32)
            .map(|j| center + Complex64::from_polar(r, 2.0 * PI * j as f64 / 32.0))
            .collect();
        let phase = self.polygon_phase(&v, r * 1e-4)?;
        to_count(phase, center)
    }
}

fn to_count(phase: f64, near: Complex64) -> Result<usize> {
    let w = phase / (2.0 * PI);
    let n = w.round();
    if (w - n).abs() > 1e-6 || n < 0.0 {
        return Err(Error::BoundaryZero { near });
    }
    Ok(n as usize)
}

/// Count with up to `max_retries` inflations of the rectangle.
pub fn count_in(f: &Analytic, rect: &Rect, opts: &SpectrumOptions) -> Result<(usize, Rect)> {
    let delta = opts.guard * rect.diameter();
    let mut r = *rect;
    let mut last = None;
    for attempt in 0..=opts.max_retries {
        match f.winding(&r, delta) {
            Ok(n) => return Ok((n, r)),
            Err(e @ Error::BoundaryZero { .. }) => {
                last = Some(e);
                r = rect.inflate(10.0 * delta * (attempt + 1) as f64);
            }
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

/// Number of zeros of Δ_Q in `rect`, counted with multiplicity.
pub fn count_zeros(
    sys: &DiracSystem,
    bc: &BoundarySpec,
    rect: &Rect,
    opts: &SpectrumOptions,
) -> Result<usize> {
    let f = Analytic::determinant(sys, bc, opts.ode_tol);
    count_in(&f, rect, opts).map(|(n, _)| n)
}

/// Zeros of Δ_Q in `rect` with multiplicities.
pub fn locate_zeros(
    sys: &DiracSystem,
    bc: &BoundarySpec,
    rect: &Rect,
    opts: &SpectrumOptions,
) -> Result<EigenvalueSet> {
    let f = Analytic::determinant(sys, bc, opts.ode_tol);
    locate_in(&f, rect, opts)
}

pub fn locate_in(f: &Analytic, rect: &Rect, opts: &SpectrumOptions) -> Result<EigenvalueSet> {
    let (total, r) = count_in(f, rect, opts)?;
    let search = Search {
        f,
        opts,
        root_diameter: r.diameter(),
    };
    let mut eigenvalues = search.cell(r, total, 0)?;
    eigenvalues.sort_by(|a, b| {
        a.lambda
            .re
            .total_cmp(&b.lambda.re)
            .then(a.lambda.im.total_cmp(&b.lambda.im))
    });
    Ok(EigenvalueSet {
        eigenvalues,
        total_count: total,
        rect: r,
    })
}

// Off-centre split fractions keep split lines away from symmetric zero sets.
const SPLITS: [(f64, f64); 4] = [
    (0.5137, 0.4871),
    (0.4621, 0.5389),
    (0.5713, 0.4407),
    (0.4289, 0.5821),
];

struct Search<'a, 'f> {
    f: &'a Analytic<'f>,
    opts: &'a SpectrumOptions,
    root_diameter: f64,
}

impl Search<'_, '_> {
    fn cell(&self, rect: Rect, m: usize, depth: usize) -> Result<Vec<Eigenvalue>> {
        if m == 0 {
            return Ok(Vec::new());
        }
        let small = rect.diameter() < 0.05 * self.root_diameter;
        if m == 1 || small {
            let inside =
                |z: &Complex64| rect.inflate(self.opts.guard * rect.diameter()).contains(*z);
            if let Some(z) = self.refine(&rect, m).filter(inside) {
                let r = (0.25 * rect.diameter()).min(1e-3 * (1.0 + z.norm()));
                if self.f.winding_circle(z, r).ok() == Some(m) {
                    return Ok(vec![Eigenvalue {
                        lambda: z,
                        multiplicity: m,
                        bracket: None,
                    }]);
                }
            }
        }
        if depth >= self.opts.max_depth {
            return Ok(vec![Eigenvalue {
                lambda: rect.center(),
                multiplicity: m,
                bracket: Some(rect),
            }]);
        }
        let delta = self.opts.guard * rect.diameter();
        for (fx, fy) in SPLITS {
            let parts = rect.split(fx, fy);
            let counts: Result<Vec<usize>> =
                parts.par_iter().map(|p| self.f.winding(p, delta)).collect();
            match counts {
                Ok(c) if c.iter().sum::<usize>() == m => {
                    let found: Vec<Vec<Eigenvalue>> = parts
                        .par_iter()
                        .zip(c.par_iter())
                        .map(|(p, &k)| self.cell(*p, k, depth + 1))
                        .collect::<Result<_>>()?;
                    return Ok(found.into_iter().flatten().collect());
                }
                Ok(_) | Err(Error::BoundaryZero { .. }) => continue,
                Err(e) => return Err(e),
            }
        }
        Ok(vec![Eigenvalue {
            lambda: rect.center(),
            multiplicity: m,
            bracket: Some(rect),
        }])
    }

    /// Newton refinement of an `m`-fold cluster inside `rect`.
    fn refine(&self, rect: &Rect, m: usize) -> Option<Complex64> {
        let f = |z: Complex64| self.f.eval(z).ok();
        let box_ = rect.inflate(0.1 * rect.diameter());
        let mut z = rect.center();
        // multiplicity-weighted Newton on Δ
        for _ in 0..60 {
            let h = 1e-5 * (1.0 + z.norm());
            let fz = f(z)?;
            let d = (f(z + h)? - f(z - h)?).scale(Complex64::new(0.5 / h, 0.0));
            if d.is_zero() {
                return None;
            }
            let step = fz.div(&d).to_complex() * m as f64;
            z -= step;
            if !box_.contains(z) {
                return None;
            }
            if step.norm() <= 1e-13 * (1.0 + z.norm()) {
                break;
            }
        }
        if m == 1 {
            return Some(z);
        }
        // Newton on the (m-1)-th derivative, which has a simple zero there
        for _ in 0..20 {
            let h = 1e-5 * (1.0 + z.norm());
            let g = |w: Complex64| finite_derivative(&f, w, m - 1, h);
            let gz = g(z)?;
            let dg = (g(z + h)? - g(z - h)?).scale(Complex64::new(0.5 / h, 0.0));
            if dg.is_zero() {
                break;
            }
            let step = gz.div(&dg).to_complex();
            z -= step;
            if !box_.contains(z) {
                return None;
            }
            if step.norm() <= 1e-14 * (1.0 + z.norm()) {
                break;
            }
        }
        Some(z)
    }
}

/// Central difference for the `n`-th derivative with step `h`.
fn finite_derivative<F>(f: &F, z: Complex64, n: usize, h: f64) -> Option<ScaledComplex>
where
    F: Fn(Complex64) -> Option<ScaledComplex>,
{
    let mut acc = ScaledComplex::ZERO;
    let mut binom = 1.0;
    for j in 0..=n {
        let offset = (n as f64 / 2.0 - j as f64) * h;
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        acc = acc + f(z + offset)?.scale(Complex64::new(sign * binom, 0.0));
        binom = binom * (n - j) as f64 / (j + 1) as f64;
    }
    Some(acc.scale(Complex64::new(h.powi(-(n as i32)), 0.0)))
}
