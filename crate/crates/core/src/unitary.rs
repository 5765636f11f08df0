//! Parameterized unitaries whose rows serve as measurement bases.
//!
//! Two families are provided. The Hedemann forms for `d = 3` and `d = 4` are
//! built from complex pairs `(x, y)` with `|x|^2 + |y|^2 = 1`; the optimizer
//! drives them through [`PolarPair`] angles so the constraints hold by
//! construction. The general form maps `d^2` reals to an anti-Hermitian
//! matrix and exponentiates it, which works in any dimension.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{GuessworkError, Result};
use crate::quantum::ProjectiveMeasurement;

const CONSTRAINT_TOL: f64 = 1e-10;

type C = Complex64;

fn check_pair(x: C, y: C, nx: &'static str, ny: &'static str) -> Result<()> {
    let s = x.norm_sqr() + y.norm_sqr();
    if (s - 1.0).abs() > CONSTRAINT_TOL {
        return Err(GuessworkError::ConstraintViolation(nx, ny, s));
    }
    Ok(())
}

/// `(cos(alpha) e^{i phi1}, sin(alpha) e^{i phi2})`, a free parameterization
/// of a unit vector in `C^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarPair {
    pub alpha: f64,
    pub phi1: f64,
    pub phi2: f64,
}

impl PolarPair {
    pub fn from_slice(s: &[f64]) -> Self {
        Self { alpha: s[0], phi1: s[1], phi2: s[2] }
    }

    pub fn values(&self) -> (C, C) {
        (C::from_polar(self.alpha.cos(), self.phi1), C::from_polar(self.alpha.sin(), self.phi2))
    }
}

/// Six complex parameters of the 3x3 Hedemann unitary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HedemannParams3 {
    pub a: C,
    pub b: C,
    pub c: C,
    pub d: C,
    pub e: C,
    pub f: C,
}

impl HedemannParams3 {
    pub const N_ANGLES: usize = 9;

    pub fn new(a: C, b: C, c: C, d: C, e: C, f: C) -> Result<Self> {
        let p = Self { a, b, c, d, e, f };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        check_pair(self.a, self.b, "a", "b")?;
        check_pair(self.c, self.d, "c", "d")?;
        check_pair(self.e, self.f, "e", "f")
    }

    /// From 9 angles: three [`PolarPair`]s for `(a,b)`, `(c,d)`, `(e,f)`.
    pub fn from_angles(angles: &[f64]) -> Result<Self> {
        if angles.len() != Self::N_ANGLES {
            return Err(GuessworkError::ParameterCount { expected: Self::N_ANGLES, found: angles.len() });
        }
        let (a, b) = PolarPair::from_slice(&angles[0..3]).values();
        let (c, d) = PolarPair::from_slice(&angles[3..6]).values();
        let (e, f) = PolarPair::from_slice(&angles[6..9]).values();
        Ok(Self { a, b, c, d, e, f })
    }

    pub fn rows(&self) -> Vec<Vec<C>> {
        let Self { a, b, c, d, e, f } = *self;
        let (ac, bc, dc, ec, fc, cc) = (a.conj(), b.conj(), d.conj(), e.conj(), f.conj(), c.conj());
        vec![
            vec![a, b * c, b * d],
            vec![bc * e, -ac * c * e - dc * fc, -ac * d * e + cc * fc],
            vec![bc * f, -ac * c * f + dc * ec, -ac * d * f - cc * ec],
        ]
    }
}

/// Twelve complex parameters of the 4x4 extension, paired as `(a,b)`,
/// `(c,d)`, `(e,f)`, `(g,h)`, `(j,k)`, `(l,m)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HedemannParams4 {
    pub a: C,
    pub b: C,
    pub c: C,
    pub d: C,
    pub e: C,
    pub f: C,
    pub g: C,
    pub h: C,
    pub j: C,
    pub k: C,
    pub l: C,
    pub m: C,
}

impl HedemannParams4 {
    pub const N_ANGLES: usize = 18;

    pub fn from_pairs(pairs: [(C, C); 6]) -> Result<Self> {
        let [(a, b), (c, d), (e, f), (g, h), (j, k), (l, m)] = pairs;
        let p = Self { a, b, c, d, e, f, g, h, j, k, l, m };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        check_pair(self.a, self.b, "a", "b")?;
        check_pair(self.c, self.d, "c", "d")?;
        check_pair(self.e, self.f, "e", "f")?;
        check_pair(self.g, self.h, "g", "h")?;
        check_pair(self.j, self.k, "j", "k")?;
        check_pair(self.l, self.m, "l", "m")
    }

    pub fn from_angles(angles: &[f64]) -> Result<Self> {
        if angles.len() != Self::N_ANGLES {
            return Err(GuessworkError::ParameterCount { expected: Self::N_ANGLES, found: angles.len() });
        }
        let v: Vec<(C, C)> = angles.chunks(3).map(|s| PolarPair::from_slice(s).values()).collect();
        let [(a, b), (c, d), (e, f), (g, h), (j, k), (l, m)] = [v[0], v[1], v[2], v[3], v[4], v[5]];
        Ok(Self { a, b, c, d, e, f, g, h, j, k, l, m })
    }

    pub fn rows(&self) -> Vec<Vec<C>> {
        let Self { a, b, c, d, e, f, g, h, j, k, l, m } = *self;
        let (a_, b_, c_, d_, e_, f_) = (a.conj(), b.conj(), c.conj(), d.conj(), e.conj(), f.conj());
        let (g_, h_, j_, k_, l_, m_) = (g.conj(), h.conj(), j.conj(), k.conj(), l.conj(), m.conj());
        vec![
            vec![a, b_ * g, b_ * h_ * j, b_ * h_ * k],
            vec![
                b * c,
                -a_ * c * g + d_ * h * l,
                -a_ * c * h_ * j - d_ * g_ * j * l + d_ * k_ * m_,
                -a_ * c * h_ * k - d_ * g_ * k * l - d_ * j_ * m_,
            ],
            vec![
                b * d * e,
                -a_ * d * e * g - c_ * e * h * l + f_ * h * m,
                -a_ * d * e * h_ * j + c_ * e * g_ * j * l - c_ * e * k_ * m_ - f_ * g_ * j * m - f_ * k_ * l_,
                -a_ * d * e * h_ * k + c_ * e * g_ * k * l + c_ * e * j_ * m_ - f_ * g_ * k * m + f_ * j_ * l_,
            ],
            vec![
                b * d * f,
                -a_ * d * f * g - c_ * f * h * l - e_ * h * m,
                -a_ * d * f * h_ * j + c_ * f * g_ * j * l - c_ * f * k_ * m_ + e_ * g_ * j * m + e_ * k_ * l_,
                -a_ * d * f * h_ * k + c_ * f * g_ * k * l + c_ * f * j_ * m_ + e_ * g_ * k * m - e_ * j_ * l_,
            ],
        ]
    }
}

pub fn hedemann_unitary_3(p: &HedemannParams3) -> Result<ProjectiveMeasurement> {
    p.validate()?;
    ProjectiveMeasurement::new(p.rows())
}

pub fn hedemann_unitary_4(p: &HedemannParams4) -> Result<ProjectiveMeasurement> {
    p.validate()?;
    ProjectiveMeasurement::new(p.rows())
}

/// Number of real parameters [`general_unitary`] expects.
pub fn general_param_count(dim: usize) -> usize {
    dim * dim
}

/// Anti-Hermitian generator: the first `d` parameters are the diagonal
/// phases `A_kk = i p_k`; each pair `j < k` (row-major) then consumes two
/// parameters `(x, y)` with `A_jk = x + iy`, `A_kj = -x + iy`.
pub fn anti_hermitian(params: &[f64], dim: usize) -> Result<DMatrix<C>> {
    if params.len() != general_param_count(dim) {
        return Err(GuessworkError::ParameterCount { expected: general_param_count(dim), found: params.len() });
    }
    let mut a = DMatrix::<C>::zeros(dim, dim);
    for k in 0..dim {
        a[(k, k)] = C::new(0.0, params[k]);
    }
    let mut idx = dim;
    for j in 0..dim {
        for k in (j + 1)..dim {
            let (x, y) = (params[idx], params[idx + 1]);
            a[(j, k)] = C::new(x, y);
            a[(k, j)] = C::new(-x, y);
            idx += 2;
        }
    }
    Ok(a)
}

/// Rows of `exp(A(params))`, unvalidated.
pub fn general_rows(params: &[f64], dim: usize) -> Result<Vec<Vec<C>>> {
    let u = anti_hermitian(params, dim)?.exp();
    Ok((0..dim).map(|i| (0..dim).map(|j| u[(i, j)]).collect()).collect())
}

/// Measurement whose basis is the rows of `exp(A(params))`.
pub fn general_unitary(params: &[f64], dim: usize) -> Result<ProjectiveMeasurement> {
    ProjectiveMeasurement::new(general_rows(params, dim)?)
}

/// `diag(e^{i phi_0}, ..., e^{i phi_{d-1}})` as rows.
pub fn diag_phases(phases: &[f64]) -> Vec<Vec<C>> {
    let d = phases.len();
    (0..d)
        .map(|i| {
            let mut row = vec![C::new(0.0, 0.0); d];
            row[i] = C::from_polar(1.0, phases[i]);
            row
        })
        .collect()
}

/// Random unitary from Gram-Schmidt on a complex Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<Vec<C>> {
    loop {
        let raw: Vec<Vec<C>> = (0..dim)
            .map(|_| {
                (0..dim)
                    .map(|_| {
                        let re: f64 = StandardNormal.sample(rng);
                        let im: f64 = StandardNormal.sample(rng);
                        C::new(re, im)
                    })
                    .collect()
            })
            .collect();
        if let Ok(m) = ProjectiveMeasurement::orthonormalized(raw) {
            return m.rows();
        }
    }
}

/// Random constraint-satisfying angles for a Hedemann form.
pub fn random_angles<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    (0..n)
        .map(|i| if i % 3 == 0 { rng.random_range(0.0..FRAC_PI_2) } else { rng.random_range(0.0..2.0 * PI) })
        .collect()
}

/// Recovers Hedemann parameters reproducing a 3x3 unitary.
///
/// `a = U_00` and `|b| = sqrt(1 - |a|^2)` are fixed; the phase of `b` is the
/// one remaining freedom and is found by a scan followed by golden-section
/// refinement of the max-entry reconstruction error. Returns the parameters
/// and that error.
pub fn fit_hedemann_3(m: &ProjectiveMeasurement) -> Result<(HedemannParams3, f64)> {
    if m.dim() != 3 {
        return Err(GuessworkError::DimensionMismatch { expected: 3, found: m.dim() });
    }
    let u = m.rows();
    let a = u[0][0];
    let b_abs = (1.0 - a.norm_sqr()).max(0.0).sqrt();
    if b_abs < 1e-8 {
        return Err(GuessworkError::InvalidConfig("|U_00| = 1: parameters c..f are not identifiable".into()));
    }
    let build = |beta: f64| -> HedemannParams3 {
        let b = C::from_polar(b_abs, beta);
        let normalize = |x: C, y: C| {
            let n = (x.norm_sqr() + y.norm_sqr()).sqrt();
            (x / n, y / n)
        };
        let (c, d) = normalize(u[0][1] / b, u[0][2] / b);
        let (e, f) = normalize(u[1][0] / b.conj(), u[2][0] / b.conj());
        HedemannParams3 { a, b, c, d, e, f }
    };
    let err = |beta: f64| -> f64 {
        let rows = build(beta).rows();
        rows.iter().zip(&u).flat_map(|(r, t)| r.iter().zip(t).map(|(x, y)| (x - y).norm())).fold(0.0, f64::max)
    };
    const GRID: usize = 720;
    let step = 2.0 * PI / GRID as f64;
    let best = (0..GRID).map(|i| i as f64 * step).min_by(|x, y| err(*x).total_cmp(&err(*y))).unwrap();
    let (mut lo, mut hi) = (best - step, best + step);
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..80 {
        let x1 = hi - phi * (hi - lo);
        let x2 = lo + phi * (hi - lo);
        if err(x1) < err(x2) {
            hi = x2;
        } else {
            lo = x1;
        }
    }
    let beta = 0.5 * (lo + hi);
    Ok((build(beta), err(beta)))
}
