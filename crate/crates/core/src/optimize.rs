//! Multi-start Nelder-Mead search for guesswork-minimizing projective
//! measurements.
//!
//! The objective is the exact Massey guesswork, which is continuous but only
//! piecewise smooth (guessing orders change discretely), so the local search
//! is derivative-free. Restart 0 always starts from the computational basis;
//! every other restart draws its start from a private ChaCha stream keyed by
//! `(seed, restart index)`, so results do not depend on thread scheduling.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{GuessworkError, Result};
use crate::guesswork::{guesswork_for_measurement, guesswork_of_rows, GuessworkReport};
use crate::quantum::{Ensemble, ProjectiveMeasurement};
use crate::unitary::{general_param_count, general_rows, random_angles, HedemannParams3, HedemannParams4};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parameterization {
    /// Polar-angle Hedemann forms, `d = 3` or `4` only.
    Hedemann,
    /// `exp` of an anti-Hermitian generator, any `d`.
    General,
}

impl fmt::Display for Parameterization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parameterization::Hedemann => "hedemann",
            Parameterization::General => "general",
        })
    }
}

impl FromStr for Parameterization {
    type Err = GuessworkError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hedemann" => Ok(Parameterization::Hedemann),
            "general" => Ok(Parameterization::General),
            other => Err(GuessworkError::InvalidConfig(format!("unknown parameterization {other:?}"))),
        }
    }
}

impl Parameterization {
    pub fn param_count(&self, dim: usize) -> Result<usize> {
        match (self, dim) {
            (Parameterization::General, _) => Ok(general_param_count(dim)),
            (Parameterization::Hedemann, 3) => Ok(HedemannParams3::N_ANGLES),
            (Parameterization::Hedemann, 4) => Ok(HedemannParams4::N_ANGLES),
            (Parameterization::Hedemann, d) => Err(GuessworkError::UnsupportedParameterization(d)),
        }
    }

    /// Basis rows for a parameter vector. Always unitary up to rounding.
    pub fn rows(&self, params: &[f64], dim: usize) -> Result<Vec<Vec<Complex64>>> {
        match (self, dim) {
            (Parameterization::General, _) => general_rows(params, dim),
            (Parameterization::Hedemann, 3) => Ok(HedemannParams3::from_angles(params)?.rows()),
            (Parameterization::Hedemann, 4) => Ok(HedemannParams4::from_angles(params)?.rows()),
            (Parameterization::Hedemann, d) => Err(GuessworkError::UnsupportedParameterization(d)),
        }
    }

    fn random_start<R: Rng>(&self, n: usize, rng: &mut R) -> Vec<f64> {
        match self {
            Parameterization::General => {
                (0..n).map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI)).collect()
            }
            Parameterization::Hedemann => random_angles(n, rng),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationConfig {
    pub restarts: usize,
    pub seed: u64,
    /// Nelder-Mead iterations per local run.
    pub max_iterations: usize,
    /// A restart stops once a fresh simplex improves the objective by less
    /// than this.
    pub convergence_tol: f64,
    pub parameterization: Parameterization,
}

impl Default for OptimizationConfig {
    fn default() -> Self {
        Self {
            restarts: 64,
            seed: 0,
            max_iterations: 2000,
            convergence_tol: 1e-10,
            parameterization: Parameterization::General,
        }
    }
}

impl OptimizationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(GuessworkError::InvalidConfig("restarts must be at least 1".into()));
        }
        if self.max_iterations == 0 {
            return Err(GuessworkError::InvalidConfig("max_iterations must be at least 1".into()));
        }
        if self.convergence_tol.is_nan() || self.convergence_tol <= 0.0 {
            return Err(GuessworkError::InvalidConfig("convergence_tol must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    pub dim: usize,
    pub parameterization: Parameterization,
    pub seed: u64,
    pub restarts: usize,
    pub best: GuessworkReport,
    /// Best value reached by each restart, in restart order.
    pub objective_history: Vec<f64>,
    /// Parameter vector of the best restart.
    pub wall_parameters: Vec<f64>,
}

/// Local minimum reported by [`nelder_mead`].
#[derive(Debug, Clone, PartialEq)]
pub struct LocalMinimum {
    pub x: Vec<f64>,
    pub f: f64,
    pub iterations: usize,
}

/// Nelder-Mead with dimension-adapted coefficients (Gao and Han).
///
/// Terminates when both the spread of simplex values and the simplex
/// diameter fall below `tol`, or after `max_iterations`.
pub fn nelder_mead<F>(f: F, x0: &[f64], step: f64, max_iterations: usize, tol: f64) -> LocalMinimum
where
    F: Fn(&[f64]) -> f64,
{
    let n = x0.len();
    let nf = n as f64;
    let (alpha, gamma, rho, sigma) = (1.0, 1.0 + 2.0 / nf, 0.75 - 1.0 / (2.0 * nf), 1.0 - 1.0 / nf);

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), f(x0)));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += step;
        let fx = f(&x);
        simplex.push((x, fx));
    }

    let lerp = |a: &[f64], b: &[f64], t: f64| -> Vec<f64> { a.iter().zip(b).map(|(a, b)| a + t * (b - a)).collect() };

    let mut iterations = 0;
    while iterations < max_iterations {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread = simplex[n].1 - simplex[0].1;
        let diameter = simplex[1..]
            .iter()
            .flat_map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if spread <= tol && diameter <= tol {
            break;
        }
        iterations += 1;

        let mut centroid = vec![0.0; n];
        for (x, _) in &simplex[..n] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / nf;
            }
        }
        let worst = simplex[n].clone();
        let reflected = lerp(&centroid, &worst.0, -alpha);
        let fr = f(&reflected);

        if fr < simplex[0].1 {
            let expanded = lerp(&centroid, &worst.0, -gamma);
            let fe = f(&expanded);
            simplex[n] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
            continue;
        }
        if fr < simplex[n - 1].1 {
            simplex[n] = (reflected, fr);
            continue;
        }
        let (contracted, fc) = if fr < worst.1 {
            let c = lerp(&centroid, &reflected, rho);
            let fc = f(&c);
            (c, fc)
        } else {
            let c = lerp(&centroid, &worst.0, rho);
            let fc = f(&c);
            (c, fc)
        };
        if fc < fr.min(worst.1) {
            simplex[n] = (contracted, fc);
            continue;
        }
        let best = simplex[0].0.clone();
        for (x, fx) in simplex.iter_mut().skip(1) {
            *x = lerp(&best, x, sigma);
            *fx = f(x);
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, fx) = simplex.swap_remove(0);
    LocalMinimum { x, f: fx, iterations }
}

const INITIAL_STEP: f64 = 0.5;
const MAX_ROUNDS: usize = 8;

/// Repeated Nelder-Mead from a single start: each round rebuilds the simplex
/// around the incumbent with a smaller step until a round stops paying off.
fn local_search<F>(f: &F, x0: Vec<f64>, cfg: &OptimizationConfig) -> LocalMinimum
where
    F: Fn(&[f64]) -> f64,
{
    let mut best = LocalMinimum { f: f(&x0), x: x0, iterations: 0 };
    let mut step = INITIAL_STEP;
    for _ in 0..MAX_ROUNDS {
        let run = nelder_mead(f, &best.x, step, cfg.max_iterations, cfg.convergence_tol);
        let gain = best.f - run.f;
        let iterations = best.iterations + run.iterations;
        if run.f < best.f {
            best = LocalMinimum { iterations, ..run };
        } else {
            best.iterations = iterations;
        }
        if gain < cfg.convergence_tol {
            break;
        }
        step *= 0.5;
    }
    best
}

/// Minimizes the guesswork of `e` over projective measurements.
pub fn optimize_measurement(e: &Ensemble, cfg: &OptimizationConfig) -> Result<OptimizationResult> {
    cfg.validate()?;
    let dim = e.dim();
    let param = cfg.parameterization;
    let n_params = param.param_count(dim)?;
    let objective = |x: &[f64]| match param.rows(x, dim) {
        Ok(rows) => guesswork_of_rows(e, &rows),
        Err(_) => f64::INFINITY,
    };

    let runs: Vec<LocalMinimum> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| {
            let x0 = if r == 0 {
                vec![0.0; n_params]
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                rng.set_stream(r as u64);
                param.random_start(n_params, &mut rng)
            };
            local_search(&objective, x0, cfg)
        })
        .collect();

    let objective_history: Vec<f64> = runs.iter().map(|r| r.f).collect();
    let winner = runs
        .iter()
        .enumerate()
        .min_by(|(i, a), (j, b)| a.f.total_cmp(&b.f).then(i.cmp(j)))
        .map(|(_, r)| r)
        .expect("at least one restart");
    let measurement = ProjectiveMeasurement::new(param.rows(&winner.x, dim)?)?.canonical_phases();
    let best = guesswork_for_measurement(e, &measurement)?;
    Ok(OptimizationResult {
        dim,
        parameterization: param,
        seed: cfg.seed,
        restarts: cfg.restarts,
        best,
        objective_history,
        wall_parameters: winner.x.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::make_generalized_bb84;

    #[test]
    fn nelder_mead_finds_quadratic_minimum() {
        let f = |x: &[f64]| (x[0] - 1.0).powi(2) + 10.0 * (x[1] + 2.0).powi(2) + x[2].powi(2);
        let r = nelder_mead(f, &[0.0, 0.0, 0.0], 0.5, 5000, 1e-12);
        assert!((r.x[0] - 1.0).abs() < 1e-5 && (r.x[1] + 2.0).abs() < 1e-5 && r.x[2].abs() < 1e-5);
    }

    #[test]
    fn nelder_mead_handles_rosenbrock() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let r = nelder_mead(f, &[-1.2, 1.0], 0.5, 10_000, 1e-14);
        assert!((r.x[0] - 1.0).abs() < 1e-4 && (r.x[1] - 1.0).abs() < 1e-4, "{:?}", r.x);
    }

    #[test]
    fn config_validation() {
        let e = make_generalized_bb84(2).unwrap();
        let bad = OptimizationConfig { restarts: 0, ..Default::default() };
        assert!(matches!(optimize_measurement(&e, &bad), Err(GuessworkError::InvalidConfig(_))));
        let bad = OptimizationConfig { convergence_tol: 0.0, ..Default::default() };
        assert!(optimize_measurement(&e, &bad).is_err());
        let hed = OptimizationConfig { parameterization: Parameterization::Hedemann, ..Default::default() };
        assert_eq!(optimize_measurement(&e, &hed).unwrap_err(), GuessworkError::UnsupportedParameterization(2));
    }

    #[test]
    fn single_restart_is_never_worse_than_standard() {
        let e = make_generalized_bb84(2).unwrap();
        let cfg = OptimizationConfig { restarts: 1, ..Default::default() };
        let r = optimize_measurement(&e, &cfg).unwrap();
        assert!(r.best.guesswork <= 1.75 + 1e-12);
        assert_eq!(r.objective_history.len(), 1);
    }

    #[test]
    fn qubit_optimum_is_reached() {
        let e = make_generalized_bb84(2).unwrap();
        let cfg = OptimizationConfig { restarts: 32, seed: 5, ..Default::default() };
        let r = optimize_measurement(&e, &cfg).unwrap();
        let target = (10.0 - 10f64.sqrt()) / 4.0;
        assert!(r.best.guesswork <= 1.7095, "{}", r.best.guesswork);
        assert!(r.best.guesswork >= target - 1e-9);
        let min = r.objective_history.iter().copied().fold(f64::INFINITY, f64::min);
        assert!((r.best.guesswork - min).abs() < 1e-12);
    }

    #[test]
    fn parameterization_parsing() {
        assert_eq!("hedemann".parse::<Parameterization>().unwrap(), Parameterization::Hedemann);
        assert_eq!(Parameterization::General.to_string(), "general");
        assert!("polar".parse::<Parameterization>().is_err());
        assert_eq!(serde_json::to_string(&Parameterization::Hedemann).unwrap(), "\"hedemann\"");
    }
}
