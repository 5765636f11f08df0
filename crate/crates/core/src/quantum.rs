//! Pure states, classical-quantum ensembles, projective measurements and the
//! Born-rule quantities derived from them.
//!
//! Everything here is dense and sized for small dimensions (d up to ~16).
//! All types are immutable once constructed and validate their invariants at
//! the boundary, so downstream code can assume normalized states and
//! orthonormal bases.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{GuessworkError, Result};

/// Amplitude vectors whose norm is off by more than this are rejected.
pub const NORM_REJECT_TOL: f64 = 1e-6;
/// Max-entry tolerance on `B B^dagger - I` for a measurement basis `B`.
pub const ORTHONORMAL_TOL: f64 = 1e-9;
/// Tolerance on the sum of priors.
pub const PRIOR_SUM_TOL: f64 = 1e-12;

/// `<a|b>`, conjugate-linear in the first argument.
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// A normalized vector in `C^d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Complex64>", into = "Vec<Complex64>")]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Builds a state, renormalizing small drifts and rejecting anything
    /// whose norm is further than [`NORM_REJECT_TOL`] from one.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(GuessworkError::InvalidDimension(0));
        }
        let n = norm(&amplitudes);
        if !n.is_finite() || (n - 1.0).abs() > NORM_REJECT_TOL {
            return Err(GuessworkError::NotNormalized { norm: n });
        }
        // leave exact-to-rounding input untouched so values round-trip
        if (n - 1.0).abs() <= 1e-14 {
            return Ok(Self { amplitudes });
        }
        let amplitudes = amplitudes.into_iter().map(|z| z / n).collect();
        Ok(Self { amplitudes })
    }

    /// Normalizes an arbitrary nonzero vector.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let n = norm(&amplitudes);
        if n == 0.0 || !n.is_finite() {
            return Err(GuessworkError::NotNormalized { norm: n });
        }
        Self::new(amplitudes.into_iter().map(|z| z / n).collect())
    }

    /// The computational basis vector `|k>`.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[k] = Complex64::new(1.0, 0.0);
        Self { amplitudes }
    }

    /// The Fourier state `|j~> = d^{-1/2} sum_k exp(2 pi i k j / d) |k>`.
    pub fn fourier(dim: usize, j: usize) -> Self {
        let scale = 1.0 / (dim as f64).sqrt();
        let amplitudes =
            (0..dim).map(|k| Complex64::from_polar(scale, 2.0 * PI * (k * j) as f64 / dim as f64)).collect();
        Self { amplitudes }
    }

    /// `cos(theta)|0> + sin(theta)|1>`.
    pub fn qubit_rotation(theta: f64) -> Self {
        Self { amplitudes: vec![Complex64::new(theta.cos(), 0.0), Complex64::new(theta.sin(), 0.0)] }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// `|<self|other>|^2`.
    pub fn overlap(&self, other: &PureState) -> f64 {
        inner(&self.amplitudes, &other.amplitudes).norm_sqr()
    }

    /// Applies `U` (row-major, `d x d`) to the state.
    pub fn transformed(&self, unitary: &[Vec<Complex64>]) -> Result<Self> {
        if unitary.len() != self.dim() {
            return Err(GuessworkError::DimensionMismatch { expected: self.dim(), found: unitary.len() });
        }
        let out = unitary.iter().map(|row| row.iter().zip(&self.amplitudes).map(|(u, a)| u * a).sum()).collect();
        Self::new(out)
    }
}

impl TryFrom<Vec<Complex64>> for PureState {
    type Error = GuessworkError;

    fn try_from(v: Vec<Complex64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<PureState> for Vec<Complex64> {
    fn from(s: PureState) -> Self {
        s.amplitudes
    }
}

/// A classical-quantum source: symbol `x` occurs with prior `p(x)` and the
/// guesser then holds the pure state attached to `x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawEnsemble", into = "RawEnsemble")]
pub struct Ensemble {
    dim: usize,
    states: Vec<PureState>,
    priors: Vec<f64>,
    labels: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct RawEnsemble {
    dim: usize,
    states: Vec<PureState>,
    priors: Vec<f64>,
    labels: Vec<String>,
}

impl TryFrom<RawEnsemble> for Ensemble {
    type Error = GuessworkError;

    fn try_from(raw: RawEnsemble) -> Result<Self> {
        let e = Ensemble::new(raw.states, raw.priors, raw.labels)?;
        if e.dim != raw.dim {
            return Err(GuessworkError::DimensionMismatch { expected: raw.dim, found: e.dim });
        }
        Ok(e)
    }
}

impl From<Ensemble> for RawEnsemble {
    fn from(e: Ensemble) -> Self {
        RawEnsemble { dim: e.dim, states: e.states, priors: e.priors, labels: e.labels }
    }
}

impl Ensemble {
    pub fn new(states: Vec<PureState>, priors: Vec<f64>, labels: Vec<String>) -> Result<Self> {
        if states.is_empty() {
            return Err(GuessworkError::InvalidEnsemble("no states".into()));
        }
        if states.len() != priors.len() || states.len() != labels.len() {
            return Err(GuessworkError::InvalidEnsemble(format!(
                "{} states, {} priors, {} labels",
                states.len(),
                priors.len(),
                labels.len()
            )));
        }
        let dim = states[0].dim();
        if let Some(s) = states.iter().find(|s| s.dim() != dim) {
            return Err(GuessworkError::DimensionMismatch { expected: dim, found: s.dim() });
        }
        if let Some(p) = priors.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(GuessworkError::InvalidEnsemble(format!("prior {p} outside [0, 1]")));
        }
        let total: f64 = priors.iter().sum();
        if (total - 1.0).abs() > PRIOR_SUM_TOL {
            return Err(GuessworkError::InvalidEnsemble(format!("priors sum to {total}")));
        }
        Ok(Self { dim, states, priors, labels })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of classical symbols.
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[PureState] {
        &self.states
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Relabels symbols so that new symbol `i` is old symbol `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        crate::guesswork::validate_permutation(perm, self.len())?;
        Ensemble::new(
            perm.iter().map(|&i| self.states[i].clone()).collect(),
            perm.iter().map(|&i| self.priors[i]).collect(),
            perm.iter().map(|&i| self.labels[i].clone()).collect(),
        )
    }

    /// Applies the same unitary to every state.
    pub fn transformed(&self, unitary: &[Vec<Complex64>]) -> Result<Self> {
        let states = self.states.iter().map(|s| s.transformed(unitary)).collect::<Result<_>>()?;
        Ensemble::new(states, self.priors.clone(), self.labels.clone())
    }
}

/// The `2d` states of two mutually unbiased bases: `|0>..|d-1>` followed by
/// the Fourier states `|0~>..|d-1~>`, all equally likely. Labels are `"k"`
/// and `"~k"`.
pub fn make_generalized_bb84(dim: usize) -> Result<Ensemble> {
    if dim < 2 {
        return Err(GuessworkError::InvalidDimension(dim));
    }
    let n = 2 * dim;
    let mut states = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for k in 0..dim {
        states.push(PureState::basis(dim, k));
        labels.push(k.to_string());
    }
    for j in 0..dim {
        states.push(PureState::fourier(dim, j));
        labels.push(format!("~{j}"));
    }
    Ensemble::new(states, vec![1.0 / n as f64; n], labels)
}

/// An orthonormal basis `{|psi_0>, ..., |psi_{d-1}>}`; outcome `k` is the
/// projection onto `|psi_k>`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<Complex64>>", into = "Vec<Vec<Complex64>>")]
pub struct ProjectiveMeasurement {
    basis: Vec<PureState>,
}

impl ProjectiveMeasurement {
    /// Validates that the rows form an orthonormal basis of `C^d`.
    pub fn new(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(GuessworkError::InvalidDimension(0));
        }
        let basis = rows
            .into_iter()
            .map(|r| {
                if r.len() != dim {
                    Err(GuessworkError::DimensionMismatch { expected: dim, found: r.len() })
                } else {
                    PureState::new(r)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let m = Self { basis };
        let residual = m.unitarity_residual();
        if residual > ORTHONORMAL_TOL {
            return Err(GuessworkError::NotOrthonormal { residual });
        }
        Ok(m)
    }

    /// Gram-Schmidt in row order. Used for bases printed to a few decimals,
    /// which are only approximately orthonormal.
    pub fn orthonormalized(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let dim = rows.len();
        let mut done: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
        for row in rows {
            if row.len() != dim {
                return Err(GuessworkError::DimensionMismatch { expected: dim, found: row.len() });
            }
            let mut v = row;
            // Two passes keep the residual at machine precision.
            for _ in 0..2 {
                for q in &done {
                    let c = inner(q, &v);
                    for (vi, qi) in v.iter_mut().zip(q) {
                        *vi -= c * qi;
                    }
                }
            }
            let n = norm(&v);
            if n < 1e-8 {
                return Err(GuessworkError::NotOrthonormal { residual: 1.0 });
            }
            done.push(v.into_iter().map(|z| z / n).collect());
        }
        Self::new(done)
    }

    /// The computational basis.
    pub fn standard(dim: usize) -> Self {
        Self { basis: (0..dim).map(|k| PureState::basis(dim, k)).collect() }
    }

    /// `{|psi(theta)>, |psi(theta + pi/2)>}` with `|psi(t)> = cos t|0> + sin t|1>`.
    pub fn qubit_rotation(theta: f64) -> Self {
        Self {
            basis: vec![
                PureState::qubit_rotation(theta),
                PureState::qubit_rotation(theta + std::f64::consts::FRAC_PI_2),
            ],
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[PureState] {
        &self.basis
    }

    /// Basis vectors as rows of a `d x d` matrix.
    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        self.basis.iter().map(|s| s.amplitudes().to_vec()).collect()
    }

    /// `max |B B^dagger - I|` over entries.
    pub fn unitarity_residual(&self) -> f64 {
        unitarity_residual(&self.rows())
    }

    /// Applies `U` to every basis vector.
    pub fn transformed(&self, unitary: &[Vec<Complex64>]) -> Result<Self> {
        let rows = self.basis.iter().map(|s| s.transformed(unitary).map(Vec::from)).collect::<Result<Vec<_>>>()?;
        Self::new(rows)
    }

    /// Multiplies each basis vector by a phase so that its largest-magnitude
    /// entry is real and positive. Outcome statistics are unchanged.
    pub fn canonical_phases(&self) -> Self {
        let basis = self
            .basis
            .iter()
            .map(|s| {
                let a = s.amplitudes();
                let pivot = a.iter().copied().fold(Complex64::new(0.0, 0.0), |best, z| {
                    if z.norm() > best.norm() + 1e-12 {
                        z
                    } else {
                        best
                    }
                });
                let phase = pivot.conj() / pivot.norm();
                PureState { amplitudes: a.iter().map(|z| z * phase).collect() }
            })
            .collect();
        Self { basis }
    }
}

impl TryFrom<Vec<Vec<Complex64>>> for ProjectiveMeasurement {
    type Error = GuessworkError;

    fn try_from(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        Self::new(rows)
    }
}

impl From<ProjectiveMeasurement> for Vec<Vec<Complex64>> {
    fn from(m: ProjectiveMeasurement) -> Self {
        m.rows()
    }
}

/// `max |M M^dagger - I|` over entries for a square row-major matrix.
pub fn unitarity_residual(rows: &[Vec<Complex64>]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, a) in rows.iter().enumerate() {
        for (j, b) in rows.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((inner(b, a) - target).norm());
        }
    }
    worst
}

/// Posterior over symbols given one measurement outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosteriorDistribution {
    pub outcome: usize,
    pub probs: Vec<f64>,
}

impl PosteriorDistribution {
    /// Wraps an arbitrary probability vector (checked for nonnegativity and
    /// unit sum within `1e-9`).
    pub fn from_probs(outcome: usize, probs: Vec<f64>) -> Result<Self> {
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(GuessworkError::InvalidEnsemble("negative posterior entry".into()));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(GuessworkError::InvalidEnsemble(format!("posterior sums to {total}")));
        }
        Ok(Self { outcome, probs })
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

fn check_dims(e: &Ensemble, m: &ProjectiveMeasurement) -> Result<()> {
    if e.dim() != m.dim() {
        return Err(GuessworkError::DimensionMismatch { expected: e.dim(), found: m.dim() });
    }
    Ok(())
}

fn check_outcome(m: &ProjectiveMeasurement, k: usize) -> Result<()> {
    if k >= m.dim() {
        return Err(GuessworkError::OutcomeOutOfRange { outcome: k, dim: m.dim() });
    }
    Ok(())
}

/// Born probability of outcome `k`: `sum_x p(x) |<psi_k|phi_x>|^2`.
pub fn outcome_probability(e: &Ensemble, m: &ProjectiveMeasurement, k: usize) -> Result<f64> {
    check_dims(e, m)?;
    check_outcome(m, k)?;
    let psi = &m.basis()[k];
    Ok(e.states().iter().zip(e.priors()).map(|(s, p)| p * psi.overlap(s)).sum())
}

/// Joint weights `p(x) |<psi_k|phi_x>|^2` for one outcome, indexed by symbol.
pub fn joint_weights(e: &Ensemble, m: &ProjectiveMeasurement, k: usize) -> Result<Vec<f64>> {
    check_dims(e, m)?;
    check_outcome(m, k)?;
    let psi = &m.basis()[k];
    Ok(e.states().iter().zip(e.priors()).map(|(s, p)| p * psi.overlap(s)).collect())
}

/// Bayes update of the prior after observing outcome `k`.
pub fn posterior(e: &Ensemble, m: &ProjectiveMeasurement, k: usize) -> Result<PosteriorDistribution> {
    let joint = joint_weights(e, m, k)?;
    let total: f64 = joint.iter().sum();
    if total <= 0.0 {
        return Err(GuessworkError::UndefinedPosterior(k));
    }
    Ok(PosteriorDistribution { outcome: k, probs: joint.into_iter().map(|w| w / total).collect() })
}

/// `n x d` table of `|<psi_k|phi_x>|^2`; row `x` is a probability vector.
pub fn overlap_table(e: &Ensemble, m: &ProjectiveMeasurement) -> Result<Vec<Vec<f64>>> {
    check_dims(e, m)?;
    Ok(e.states().iter().map(|s| m.basis().iter().map(|psi| psi.overlap(s)).collect()).collect())
}

/// `n x d` table whose column `k` is the posterior after outcome `k`
/// (zero column for impossible outcomes).
pub fn posterior_table(e: &Ensemble, m: &ProjectiveMeasurement) -> Result<Vec<Vec<f64>>> {
    check_dims(e, m)?;
    let cols: Vec<Option<PosteriorDistribution>> = (0..m.dim()).map(|k| posterior(e, m, k).ok()).collect();
    Ok((0..e.len()).map(|x| cols.iter().map(|c| c.as_ref().map_or(0.0, |p| p.probs[x])).collect()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn bb84_qubit_states() {
        let e = make_generalized_bb84(2).unwrap();
        assert_eq!(e.len(), 4);
        assert_eq!(e.labels(), ["0", "1", "~0", "~1"]);
        let s = 1.0 / 2f64.sqrt();
        let minus = e.states()[3].amplitudes();
        assert!((minus[0] - c(s, 0.0)).norm() < 1e-15);
        assert!((minus[1] - c(-s, 0.0)).norm() < 1e-15);
        assert!(e.priors().iter().all(|p| *p == 0.25));
    }

    #[test]
    fn bb84_halves_are_mutually_unbiased() {
        for d in 2..=8 {
            let e = make_generalized_bb84(d).unwrap();
            let (std, fou) = e.states().split_at(d);
            for i in 0..d {
                for j in 0..d {
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((std[i].overlap(&std[j]) - want).abs() < 1e-12);
                    assert!((fou[i].overlap(&fou[j]) - want).abs() < 1e-12);
                    assert!((std[i].overlap(&fou[j]) - 1.0 / d as f64).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn rejects_small_dimension() {
        assert_eq!(make_generalized_bb84(1), Err(GuessworkError::InvalidDimension(1)));
        assert_eq!(make_generalized_bb84(0), Err(GuessworkError::InvalidDimension(0)));
    }

    #[test]
    fn normalization_policy() {
        assert!(PureState::new(vec![c(1.0 + 1e-8, 0.0), c(0.0, 0.0)]).is_ok());
        let drift = PureState::new(vec![c(1.0 + 1e-8, 0.0), c(0.0, 0.0)]).unwrap();
        assert!((drift.amplitudes()[0].re - 1.0).abs() < 1e-15);
        assert!(matches!(
            PureState::new(vec![c(1.0 + 1e-5, 0.0), c(0.0, 0.0)]),
            Err(GuessworkError::NotNormalized { .. })
        ));
    }

    #[test]
    fn rejects_non_orthonormal_basis() {
        let s = 1.0 / 2f64.sqrt();
        let rows = vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(s, 0.0), c(s, 0.0)]];
        assert!(matches!(ProjectiveMeasurement::new(rows), Err(GuessworkError::NotOrthonormal { .. })));
    }

    #[test]
    fn uniform_outcomes_for_bb84() {
        for d in 2..=5 {
            let e = make_generalized_bb84(d).unwrap();
            let m = ProjectiveMeasurement::standard(d);
            for k in 0..d {
                assert!((outcome_probability(&e, &m, k).unwrap() - 1.0 / d as f64).abs() < 1e-12);
            }
        }
        let e = make_generalized_bb84(2).unwrap();
        let m = ProjectiveMeasurement::qubit_rotation(0.3);
        for k in 0..2 {
            assert!((outcome_probability(&e, &m, k).unwrap() - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn single_state_ensemble_is_certain() {
        let e = Ensemble::new(vec![PureState::basis(3, 0)], vec![1.0], vec!["0".into()]).unwrap();
        let m = ProjectiveMeasurement::standard(3);
        assert_eq!(outcome_probability(&e, &m, 0).unwrap(), 1.0);
        assert_eq!(outcome_probability(&e, &m, 1).unwrap(), 0.0);
        assert_eq!(posterior(&e, &m, 1), Err(GuessworkError::UndefinedPosterior(1)));
    }

    #[test]
    fn qubit_standard_posteriors() {
        let e = make_generalized_bb84(2).unwrap();
        let m = ProjectiveMeasurement::standard(2);
        let p0 = posterior(&e, &m, 0).unwrap().probs;
        let p1 = posterior(&e, &m, 1).unwrap().probs;
        for (got, want) in p0.iter().zip([0.5, 0.0, 0.25, 0.25]) {
            assert!((got - want).abs() < 1e-12);
        }
        for (got, want) in p1.iter().zip([0.0, 0.5, 0.25, 0.25]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn qutrit_standard_posterior_shape() {
        let d = 3;
        let e = make_generalized_bb84(d).unwrap();
        let m = ProjectiveMeasurement::standard(d);
        for k in 0..d {
            let p = posterior(&e, &m, k).unwrap().probs;
            for x in 0..d {
                let want = if x == k { 0.5 } else { 0.0 };
                assert!((p[x] - want).abs() < 1e-12);
                assert!((p[d + x] - 1.0 / (2.0 * d as f64)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn standard_overlap_table() {
        let d = 4;
        let e = make_generalized_bb84(d).unwrap();
        let t = overlap_table(&e, &ProjectiveMeasurement::standard(d)).unwrap();
        for (x, row) in t.iter().enumerate() {
            for (k, v) in row.iter().enumerate() {
                let want = if x == k { 1.0 } else if x < d { 0.0 } else { 0.25 };
                assert!((v - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let e = make_generalized_bb84(3).unwrap();
        let m = ProjectiveMeasurement::standard(2);
        assert_eq!(outcome_probability(&e, &m, 0), Err(GuessworkError::DimensionMismatch { expected: 3, found: 2 }));
        assert!(overlap_table(&e, &m).is_err());
        assert!(matches!(
            outcome_probability(&e, &ProjectiveMeasurement::standard(3), 3),
            Err(GuessworkError::OutcomeOutOfRange { .. })
        ));
    }

    #[test]
    fn canonical_phases_make_pivot_real() {
        let m =
            ProjectiveMeasurement::standard(3).transformed(&crate::unitary::diag_phases(&[1.0, -2.0, 0.5])).unwrap();
        let canon = m.canonical_phases();
        for row in canon.rows() {
            let pivot = row.iter().max_by(|a, b| a.norm().total_cmp(&b.norm())).unwrap();
            assert!(pivot.im.abs() < 1e-15 && pivot.re > 0.0);
        }
    }

    #[test]
    fn json_schema() {
        let m = ProjectiveMeasurement::standard(2);
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(json, "[[[1.0,0.0],[0.0,0.0]],[[0.0,0.0],[1.0,0.0]]]");
        let back: ProjectiveMeasurement = serde_json::from_str(&json).unwrap();
        assert_eq!(back, m);
        assert!(serde_json::from_str::<ProjectiveMeasurement>("[[[1,0],[1,0]],[[0,0],[1,0]]]").is_err());

        let e = make_generalized_bb84(2).unwrap();
        let v: serde_json::Value = serde_json::to_value(&e).unwrap();
        assert_eq!(v["dim"], 2);
        assert_eq!(v["labels"][2], "~0");
        assert_eq!(v["states"].as_array().unwrap().len(), 4);
        let back: Ensemble = serde_json::from_value(v).unwrap();
        assert_eq!(back, e);
    }
}
