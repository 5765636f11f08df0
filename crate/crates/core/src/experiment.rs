//! Finite-shot replay of the optical guessing game.
//!
//! For every input symbol the simulated receiver projects onto each basis
//! vector `shots` times (multinomial sampling over outcomes), optionally
//! confused by a detector crosstalk matrix, and then plays its predecided
//! guessing plan. A trial averages the resulting guess counts over symbols
//! with their priors; an experiment repeats independent trials.

use std::io::{Read, Write};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{GuessworkError, Result};
use crate::guesswork::{guesswork_with_ties, GuessingPlan, TieBreak};
use crate::quantum::{Ensemble, ProjectiveMeasurement};

const STOCHASTIC_TOL: f64 = 1e-9;

/// `entries[detected][sent]`: probability that a photon sent in mode `sent`
/// is registered in mode `detected`. Columns sum to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrosstalkMatrix {
    entries: Vec<Vec<f64>>,
    mode_labels: Vec<i64>,
}

impl CrosstalkMatrix {
    pub fn new(entries: Vec<Vec<f64>>, mode_labels: Vec<i64>) -> Result<Self> {
        let d = entries.len();
        if d == 0 {
            return Err(GuessworkError::InvalidCrosstalk("empty matrix".into()));
        }
        if mode_labels.len() != d {
            return Err(GuessworkError::InvalidCrosstalk(format!("{} labels for {d} modes", mode_labels.len())));
        }
        for (i, row) in entries.iter().enumerate() {
            if row.len() != d {
                return Err(GuessworkError::InvalidCrosstalk(format!(
                    "row {i} has {} entries, expected {d}",
                    row.len()
                )));
            }
            for (j, v) in row.iter().enumerate() {
                if !(0.0..=1.0).contains(v) {
                    return Err(GuessworkError::InvalidCrosstalk(format!("entry ({i}, {j}) = {v} outside [0, 1]")));
                }
            }
        }
        for j in 0..d {
            let s: f64 = entries.iter().map(|r| r[j]).sum();
            if (s - 1.0).abs() > STOCHASTIC_TOL {
                return Err(GuessworkError::InvalidCrosstalk(format!("column {j} sums to {s}")));
            }
        }
        Ok(Self { entries, mode_labels })
    }

    pub fn identity(dim: usize) -> Self {
        let entries = (0..dim).map(|i| (0..dim).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
        Self { entries, mode_labels: (0..dim as i64).collect() }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Vec<f64>] {
        &self.entries
    }

    pub fn mode_labels(&self) -> &[i64] {
        &self.mode_labels
    }

    /// Largest off-diagonal entry.
    pub fn max_leakage(&self) -> f64 {
        let mut m: f64 = 0.0;
        for (i, row) in self.entries.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if i != j {
                    m = m.max(*v);
                }
            }
        }
        m
    }

    /// `C q`.
    pub fn apply(&self, q: &[f64]) -> Vec<f64> {
        self.entries.iter().map(|row| row.iter().zip(q).map(|(c, x)| c * x).sum()).collect()
    }

    /// Reads the CSV layout: a header of mode labels, then `d` rows of `d`
    /// numbers (row = detected mode, column = sent mode).
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
        let headers = rdr.headers().map_err(|e| GuessworkError::InvalidCrosstalk(format!("header: {e}")))?.clone();
        let mode_labels = headers
            .iter()
            .enumerate()
            .map(|(j, h)| {
                h.parse::<i64>().map_err(|_| {
                    GuessworkError::InvalidCrosstalk(format!("header column {j}: {h:?} is not an integer"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut entries = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| GuessworkError::InvalidCrosstalk(format!("row {i}: {e}")))?;
            let row = rec
                .iter()
                .enumerate()
                .map(|(j, v)| {
                    v.parse::<f64>().map_err(|_| {
                        GuessworkError::InvalidCrosstalk(format!("row {i}, column {j}: {v:?} is not a number"))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            entries.push(row);
        }
        Self::new(entries, mode_labels)
    }

    pub fn to_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let ser = |e: csv::Error| GuessworkError::Serialization(e.to_string());
        w.write_record(self.mode_labels.iter().map(|l| l.to_string())).map_err(ser)?;
        for row in &self.entries {
            w.write_record(row.iter().map(|v| v.to_string())).map_err(ser)?;
        }
        w.flush().map_err(|e| GuessworkError::Serialization(e.to_string()))
    }
}

/// Leakage model for OAM modes: each sent mode `j` leaks `leak / |l_i - l_j|`
/// into every other mode `i`, then each column is renormalized.
pub fn synthetic_crosstalk(dim: usize, ell_values: &[i64], leak: f64) -> Result<CrosstalkMatrix> {
    if ell_values.len() != dim {
        return Err(GuessworkError::InvalidCrosstalk(format!("{} mode labels for d = {dim}", ell_values.len())));
    }
    if !(0.0..1.0).contains(&leak) {
        return Err(GuessworkError::InvalidCrosstalk(format!("leak {leak} outside [0, 1)")));
    }
    for (i, a) in ell_values.iter().enumerate() {
        if ell_values[..i].contains(a) {
            return Err(GuessworkError::InvalidCrosstalk(format!("duplicate mode label {a}")));
        }
    }
    let mut entries = vec![vec![0.0; dim]; dim];
    for j in 0..dim {
        for i in 0..dim {
            entries[i][j] = if i == j { 1.0 } else { leak / (ell_values[i] - ell_values[j]).unsigned_abs() as f64 };
        }
        let total: f64 = (0..dim).map(|i| entries[i][j]).sum();
        for row in entries.iter_mut() {
            row[j] /= total;
        }
    }
    CrosstalkMatrix::new(entries, ell_values.to_vec())
}

/// The OAM quantum numbers used for each dimension in the optical setup.
pub fn default_ell_values(dim: usize) -> Vec<i64> {
    match dim {
        2 => vec![-3, 3],
        3 => vec![-3, 0, 3],
        4 => vec![-3, -1, 1, 3],
        d => {
            // spaced by two, centred on zero
            (0..d as i64).map(|i| 2 * i - (d as i64 - 1)).collect()
        }
    }
}

/// How a receiver turns per-projection counts into guesses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutcomeRule {
    /// Guess counts are weighted by the relative rate of each outcome.
    #[default]
    RelativeRate,
    /// Only the most frequent outcome is used (ties to the lowest index).
    Modal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialConfig {
    pub shots: u64,
    pub trials: usize,
    pub seed: u64,
    pub crosstalk: Option<CrosstalkMatrix>,
    #[serde(default)]
    pub rule: OutcomeRule,
    /// Tie convention for the predecided plan.
    #[serde(default)]
    pub ties: TieBreak,
}

impl Default for TrialConfig {
    fn default() -> Self {
        Self {
            shots: 10_000,
            trials: 10,
            seed: 0,
            crosstalk: None,
            rule: OutcomeRule::RelativeRate,
            ties: TieBreak::Ascending,
        }
    }
}

impl TrialConfig {
    pub fn validate(&self) -> Result<()> {
        if self.shots == 0 {
            return Err(GuessworkError::InvalidConfig("shots must be at least 1".into()));
        }
        if self.trials == 0 {
            return Err(GuessworkError::InvalidConfig("trials must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalGuessworkReport {
    pub mean: f64,
    /// Unbiased sample deviation; 0 when only one trial was run.
    pub std: f64,
    /// Set when `std` is not defined (fewer than two trials).
    pub degenerate_std: bool,
    pub per_trial: Vec<f64>,
    /// Noiseless guesswork of the same measurement.
    pub ideal: f64,
    pub shots: u64,
    pub trials: usize,
    pub seed: u64,
}

/// Outcome distribution seen for symbol `x`: `|<psi_k|phi_x>|^2`, pushed
/// through `crosstalk` when given.
pub fn effective_outcome_probs(
    e: &Ensemble,
    m: &ProjectiveMeasurement,
    crosstalk: Option<&CrosstalkMatrix>,
    x: usize,
) -> Result<Vec<f64>> {
    if e.dim() != m.dim() {
        return Err(GuessworkError::DimensionMismatch { expected: e.dim(), found: m.dim() });
    }
    let state = e.states().get(x).ok_or_else(|| GuessworkError::InvalidEnsemble(format!("no symbol {x}")))?;
    let q: Vec<f64> = m.basis().iter().map(|psi| psi.overlap(state)).collect();
    let Some(c) = crosstalk else {
        return Ok(q);
    };
    if c.dim() != m.dim() {
        return Err(GuessworkError::DimensionMismatch { expected: m.dim(), found: c.dim() });
    }
    // re-check in case the matrix was built by deserialization
    CrosstalkMatrix::new(c.entries.clone(), c.mode_labels.clone())?;
    let out = c.apply(&q);
    let total: f64 = out.iter().sum();
    Ok(out.into_iter().map(|v| v / total).collect())
}

/// Multinomial counts over outcomes for `shots` projections.
pub fn sample_counts<R: rand::Rng + ?Sized>(probs: &[f64], shots: u64, rng: &mut R) -> Vec<u64> {
    let mut counts = vec![0; probs.len()];
    let mut remaining = shots;
    let mut mass: f64 = probs.iter().sum();
    for (k, &p) in probs.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        if k + 1 == probs.len() {
            counts[k] = remaining;
            break;
        }
        let frac = if mass > 0.0 { (p / mass).clamp(0.0, 1.0) } else { 0.0 };
        let n = Binomial::new(remaining, frac).expect("valid binomial").sample(rng);
        counts[k] = n;
        remaining -= n;
        mass -= p;
    }
    counts
}

/// Index of the largest count, lowest index on ties.
pub fn modal_outcome(counts: &[u64]) -> usize {
    let mut best = 0;
    for (k, &c) in counts.iter().enumerate() {
        if c > counts[best] {
            best = k;
        }
    }
    best
}

fn trial_rng(seed: u64, trial_index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial_index as u64);
    rng
}

/// One play of the game over all symbols; returns the prior-weighted mean
/// number of guesses.
pub fn run_guessing_game_trial(
    e: &Ensemble,
    m: &ProjectiveMeasurement,
    plan: &GuessingPlan,
    cfg: &TrialConfig,
    trial_index: usize,
) -> Result<f64> {
    cfg.validate()?;
    if plan.orders.len() != m.dim() {
        return Err(GuessworkError::DimensionMismatch { expected: m.dim(), found: plan.orders.len() });
    }
    let plan = GuessingPlan::new(plan.orders.clone(), e.len())?;
    let mut rng = trial_rng(cfg.seed, trial_index);
    let mut total = 0.0;
    for (x, prior) in e.priors().iter().enumerate() {
        let probs = effective_outcome_probs(e, m, cfg.crosstalk.as_ref(), x)?;
        let counts = sample_counts(&probs, cfg.shots, &mut rng);
        let guesses = match cfg.rule {
            OutcomeRule::Modal => plan.guesses_needed(modal_outcome(&counts), x) as f64,
            OutcomeRule::RelativeRate => counts
                .iter()
                .enumerate()
                .map(|(k, &c)| c as f64 / cfg.shots as f64 * plan.guesses_needed(k, x) as f64)
                .sum(),
        };
        total += prior * guesses;
    }
    Ok(total)
}

fn mean_std(values: &[f64]) -> (f64, f64, bool) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0, true);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt(), false)
}

/// Runs `cfg.trials` independent trials with the plan fixed from noiseless
/// posteriors.
pub fn run_experiment(e: &Ensemble, m: &ProjectiveMeasurement, cfg: &TrialConfig) -> Result<EmpiricalGuessworkReport> {
    cfg.validate()?;
    let ideal = guesswork_with_ties(e, m, cfg.ties)?;
    let per_trial = (0..cfg.trials)
        .into_par_iter()
        .map(|t| run_guessing_game_trial(e, m, &ideal.plan, cfg, t))
        .collect::<Result<Vec<_>>>()?;
    let (mean, std, degenerate_std) = mean_std(&per_trial);
    Ok(EmpiricalGuessworkReport {
        mean,
        std,
        degenerate_std,
        per_trial,
        ideal: ideal.guesswork,
        shots: cfg.shots,
        trials: cfg.trials,
        seed: cfg.seed,
    })
}

/// Expected guesses under crosstalk with a fixed plan, no sampling noise.
pub fn expected_guesswork_with_crosstalk(
    e: &Ensemble,
    m: &ProjectiveMeasurement,
    plan: &GuessingPlan,
    crosstalk: Option<&CrosstalkMatrix>,
) -> Result<f64> {
    let mut total = 0.0;
    for (x, prior) in e.priors().iter().enumerate() {
        let probs = effective_outcome_probs(e, m, crosstalk, x)?;
        total += prior * probs.iter().enumerate().map(|(k, p)| p * plan.guesses_needed(k, x) as f64).sum::<f64>();
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{make_generalized_bb84, overlap_table, PureState};

    #[test]
    fn identity_crosstalk_reproduces_overlaps() {
        let e = make_generalized_bb84(3).unwrap();
        let m = ProjectiveMeasurement::standard(3);
        let table = overlap_table(&e, &m).unwrap();
        let c = CrosstalkMatrix::identity(3);
        for (x, row) in table.iter().enumerate() {
            let q = effective_outcome_probs(&e, &m, Some(&c), x).unwrap();
            for (a, b) in q.iter().zip(row) {
                assert!((a - b).abs() < 1e-15);
            }
        }
        let e2 = make_generalized_bb84(2).unwrap();
        let q = effective_outcome_probs(&e2, &ProjectiveMeasurement::standard(2), None, 0).unwrap();
        assert_eq!(q, vec![1.0, 0.0]);
    }

    #[test]
    fn synthetic_crosstalk_shape() {
        let c = synthetic_crosstalk(2, &[0, 1], 0.0).unwrap();
        assert_eq!(c.entries(), CrosstalkMatrix::identity(2).entries());

        let c = synthetic_crosstalk(4, &[-3, -1, 1, 3], 0.02).unwrap();
        for j in 0..4 {
            let s: f64 = c.entries().iter().map(|r| r[j]).sum();
            assert!((s - 1.0).abs() < 1e-12);
        }
        // farther modes leak less
        assert!(c.entries()[1][0] > c.entries()[2][0] && c.entries()[2][0] > c.entries()[3][0]);

        let wide = synthetic_crosstalk(2, &[-3, 3], 0.05).unwrap();
        let narrow = synthetic_crosstalk(2, &[-1, 0], 0.05).unwrap();
        assert!(wide.max_leakage() < narrow.max_leakage());

        assert!(synthetic_crosstalk(2, &[1, 1], 0.01).is_err());
        assert!(synthetic_crosstalk(2, &[1, 2], 1.0).is_err());
    }

    #[test]
    fn rejects_non_stochastic_columns() {
        let err = CrosstalkMatrix::new(vec![vec![0.9, 0.0], vec![0.0, 1.0]], vec![-3, 3]).unwrap_err();
        assert!(err.to_string().contains("column 0"));
    }

    #[test]
    fn csv_roundtrip_and_errors() {
        let c = synthetic_crosstalk(3, &[-3, 0, 3], 0.03).unwrap();
        let mut buf = Vec::new();
        c.to_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("-3,0,3\n"));
        assert_eq!(CrosstalkMatrix::from_csv(&buf[..]).unwrap(), c);

        let bad = "-3,3\n1.0,0.0\n0.0,abc\n";
        let err = CrosstalkMatrix::from_csv(bad.as_bytes()).unwrap_err().to_string();
        assert!(err.contains("row 1, column 1"), "{err}");
        let bad = "-3,x\n1,0\n0,1\n";
        assert!(CrosstalkMatrix::from_csv(bad.as_bytes()).unwrap_err().to_string().contains("header column 1"));
    }

    #[test]
    fn counts_sum_to_shots() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for probs in [vec![1.0, 0.0], vec![0.2, 0.3, 0.5], vec![0.0, 0.0, 1.0], vec![0.25; 4]] {
            let c = sample_counts(&probs, 1000, &mut rng);
            assert_eq!(c.iter().sum::<u64>(), 1000);
            for (k, p) in probs.iter().enumerate() {
                if *p == 0.0 {
                    assert_eq!(c[k], 0);
                }
            }
        }
    }

    #[test]
    fn single_state_needs_one_guess() {
        let e = Ensemble::new(vec![PureState::basis(2, 0)], vec![1.0], vec!["0".into()]).unwrap();
        let m = ProjectiveMeasurement::standard(2);
        let plan = GuessingPlan::new(vec![vec![0], vec![0]], 1).unwrap();
        for rule in [OutcomeRule::Modal, OutcomeRule::RelativeRate] {
            let cfg = TrialConfig { shots: 100, trials: 1, rule, ..Default::default() };
            assert_eq!(run_guessing_game_trial(&e, &m, &plan, &cfg, 0).unwrap(), 1.0);
        }
    }

    #[test]
    fn single_trial_flags_degenerate_std() {
        let e = make_generalized_bb84(2).unwrap();
        let cfg = TrialConfig { trials: 1, shots: 100, ..Default::default() };
        let r = run_experiment(&e, &ProjectiveMeasurement::standard(2), &cfg).unwrap();
        assert!(r.degenerate_std);
        assert_eq!(r.std, 0.0);
        assert_eq!(r.per_trial.len(), 1);
    }

    #[test]
    fn qubit_standard_simulation() {
        let e = make_generalized_bb84(2).unwrap();
        let cfg = TrialConfig::default();
        let r = run_experiment(&e, &ProjectiveMeasurement::standard(2), &cfg).unwrap();
        assert!((r.mean - 1.75).abs() < 0.01);
        assert!((r.ideal - 1.75).abs() < 1e-12);
        assert!((r.mean - r.per_trial.iter().sum::<f64>() / 10.0).abs() < 1e-12);
    }

    #[test]
    fn invalid_trial_config() {
        let e = make_generalized_bb84(2).unwrap();
        let m = ProjectiveMeasurement::standard(2);
        assert!(run_experiment(&e, &m, &TrialConfig { shots: 0, ..Default::default() }).is_err());
        assert!(run_experiment(&e, &m, &TrialConfig { trials: 0, ..Default::default() }).is_err());
    }
}
