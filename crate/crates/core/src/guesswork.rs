//! Guessing orders and guesswork.
//!
//! After measuring outcome `k`, the guesser asks "is it x?" for symbols in a
//! fixed order until the answer is yes. The expected number of questions is
//! minimized by asking in non-increasing posterior order (Massey). The
//! guesswork of a measurement is the outcome-weighted average of those
//! per-outcome expectations.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{GuessworkError, Result};
use crate::quantum::{inner, outcome_probability, posterior, Ensemble, PosteriorDistribution, ProjectiveMeasurement};

/// Largest alphabet [`brute_force_best_plan`] will enumerate (9! orders).
pub const BRUTE_FORCE_LIMIT: usize = 9;

/// One guessing order (a permutation of symbol indices) per outcome.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GuessingPlan {
    pub orders: Vec<Vec<usize>>,
}

impl GuessingPlan {
    pub fn new(orders: Vec<Vec<usize>>, n: usize) -> Result<Self> {
        for o in &orders {
            validate_permutation(o, n)?;
        }
        Ok(Self { orders })
    }

    /// 1-based position of `symbol` in the order for `outcome`.
    pub fn guesses_needed(&self, outcome: usize, symbol: usize) -> usize {
        self.orders[outcome].iter().position(|&s| s == symbol).map_or(usize::MAX, |p| p + 1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GuessworkReport {
    pub guesswork: f64,
    pub per_outcome: Vec<f64>,
    pub outcome_probs: Vec<f64>,
    pub plan: GuessingPlan,
    pub measurement: ProjectiveMeasurement,
}

pub(crate) fn validate_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(GuessworkError::MalformedPermutation(format!("length {} for {} symbols", perm.len(), n)));
    }
    let mut seen = vec![false; n];
    for &i in perm {
        if i >= n || seen[i] {
            return Err(GuessworkError::MalformedPermutation(format!("index {i} out of range or repeated")));
        }
        seen[i] = true;
    }
    Ok(())
}

/// Posteriors closer than this are treated as tied.
pub const TIE_RESOLUTION: f64 = 1e-12;

/// How equal posteriors are ordered. Any choice is Massey-optimal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TieBreak {
    /// Lower symbol index first.
    #[default]
    Ascending,
    /// Lower index first for even outcomes, higher index first for odd ones.
    Alternating,
}

/// Symbol indices sorted by non-increasing posterior; ties (within
/// [`TIE_RESOLUTION`]) go to the lower index.
pub fn massey_order(p: &PosteriorDistribution) -> Vec<usize> {
    massey_order_with(p, TieBreak::Ascending)
}

pub fn massey_order_with(p: &PosteriorDistribution, ties: TieBreak) -> Vec<usize> {
    let descending_ties = ties == TieBreak::Alternating && p.outcome % 2 == 1;
    // quantized keys keep the comparator a total order
    let key = |x: usize| (p.probs[x] / TIE_RESOLUTION).round() as i64;
    let mut order: Vec<usize> = (0..p.len()).collect();
    order.sort_by(|&a, &b| {
        let by_index = if descending_ties { b.cmp(&a) } else { a.cmp(&b) };
        key(b).cmp(&key(a)).then(by_index)
    });
    order
}

/// `sum_g (g + 1) p[order[g]]`.
pub fn expected_guesses(p: &PosteriorDistribution, order: &[usize]) -> Result<f64> {
    validate_permutation(order, p.len())?;
    Ok(weighted_position_sum(&p.probs, order))
}

fn weighted_position_sum(weights: &[f64], order: &[usize]) -> f64 {
    order.iter().enumerate().map(|(g, &x)| (g + 1) as f64 * weights[x]).sum()
}

/// Guesswork with the Massey-optimal plan for `m`.
pub fn guesswork_for_measurement(e: &Ensemble, m: &ProjectiveMeasurement) -> Result<GuessworkReport> {
    guesswork_with_ties(e, m, TieBreak::Ascending)
}

/// As [`guesswork_for_measurement`] with an explicit tie convention. The
/// guesswork value does not depend on it; the plan does.
pub fn guesswork_with_ties(e: &Ensemble, m: &ProjectiveMeasurement, ties: TieBreak) -> Result<GuessworkReport> {
    build_report(e, m, |p| massey_order_with(p, ties))
}

/// Guesswork when the guesser follows `plan` regardless of optimality.
pub fn evaluate_plan(e: &Ensemble, m: &ProjectiveMeasurement, plan: &GuessingPlan) -> Result<GuessworkReport> {
    if plan.orders.len() != m.dim() {
        return Err(GuessworkError::DimensionMismatch { expected: m.dim(), found: plan.orders.len() });
    }
    for o in &plan.orders {
        validate_permutation(o, e.len())?;
    }
    build_report(e, m, |p| plan.orders[p.outcome].clone())
}

fn build_report<F>(e: &Ensemble, m: &ProjectiveMeasurement, order_for: F) -> Result<GuessworkReport>
where
    F: Fn(&PosteriorDistribution) -> Vec<usize>,
{
    let d = m.dim();
    let n = e.len();
    let mut outcome_probs = Vec::with_capacity(d);
    let mut per_outcome = Vec::with_capacity(d);
    let mut orders = Vec::with_capacity(d);
    for k in 0..d {
        let pk = outcome_probability(e, m, k)?;
        outcome_probs.push(pk);
        if pk > 0.0 {
            let post = posterior(e, m, k)?;
            let order = order_for(&post);
            per_outcome.push(weighted_position_sum(&post.probs, &order));
            orders.push(order);
        } else {
            // impossible outcome: never observed, carries no weight
            per_outcome.push(0.0);
            orders.push((0..n).collect());
        }
    }
    let guesswork = outcome_probs.iter().zip(&per_outcome).map(|(p, g)| p * g).sum();
    Ok(GuessworkReport { guesswork, per_outcome, outcome_probs, plan: GuessingPlan { orders }, measurement: m.clone() })
}

/// Massey guesswork for an unvalidated basis given as matrix rows.
///
/// Sums `(g + 1) p(x) |<psi_k|phi_x>|^2` over outcomes with the joint weights
/// sorted descending, which avoids dividing by the outcome probability. This
/// is the optimizer's objective; it assumes `rows` is `d x d`.
pub fn guesswork_of_rows(e: &Ensemble, rows: &[Vec<Complex64>]) -> f64 {
    let mut joint = vec![0.0; e.len()];
    let mut total = 0.0;
    for row in rows {
        for ((w, s), p) in joint.iter_mut().zip(e.states()).zip(e.priors()) {
            *w = p * inner(row, s.amplitudes()).norm_sqr();
        }
        joint.sort_by(|a, b| b.total_cmp(a));
        total += joint.iter().enumerate().map(|(g, w)| (g + 1) as f64 * w).sum::<f64>();
    }
    total
}

/// `(d + 5) / 4`: guesswork of the generalized BB84 ensemble measured in the
/// computational basis.
pub fn standard_basis_guesswork_formula(dim: usize) -> Result<f64> {
    if dim < 2 {
        return Err(GuessworkError::InvalidDimension(dim));
    }
    Ok((dim as f64 + 5.0) / 4.0)
}

/// Exhaustive search over all `n!` guessing orders for each outcome.
///
/// Independent of the sorting argument behind [`massey_order`]; used to
/// check it.
pub fn brute_force_best_plan(e: &Ensemble, m: &ProjectiveMeasurement) -> Result<GuessworkReport> {
    let n = e.len();
    if n > BRUTE_FORCE_LIMIT {
        return Err(GuessworkError::TooManySymbols { n, limit: BRUTE_FORCE_LIMIT });
    }
    // validates dimensions up front
    outcome_probability(e, m, 0)?;
    let orders: Vec<Vec<usize>> = (0..m.dim())
        .into_par_iter()
        .map(|k| -> Result<Vec<usize>> {
            if outcome_probability(e, m, k)? <= 0.0 {
                return Ok((0..n).collect());
            }
            let post = posterior(e, m, k)?;
            Ok(best_order_exhaustive(&post.probs))
        })
        .collect::<Result<_>>()?;
    evaluate_plan(e, m, &GuessingPlan { orders })
}

fn best_order_exhaustive(probs: &[f64]) -> Vec<usize> {
    let mut best = (f64::INFINITY, Vec::new());
    for_each_permutation(probs.len(), |perm| {
        let v = weighted_position_sum(probs, perm);
        if v < best.0 {
            best = (v, perm.to_vec());
        }
    });
    best.1
}

/// Visits every permutation of `0..n` (Heap's algorithm, starting from the
/// identity).
pub fn for_each_permutation<F: FnMut(&[usize])>(n: usize, mut visit: F) {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut counters = vec![0usize; n];
    visit(&perm);
    let mut i = 1;
    while i < n {
        if counters[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(counters[i], i);
            }
            visit(&perm);
            counters[i] += 1;
            i = 1;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
}
