//! Guesswork of classical-quantum ensembles under projective measurements.
//!
//! The crate evaluates the expected number of guesses needed to identify a
//! classical symbol from a measured quantum side-information state, searches
//! for guesswork-minimizing measurements, and replays a finite-shot optical
//! version of the guessing game with detector crosstalk.

pub mod error;
pub mod experiment;
pub mod guesswork;
pub mod optimize;
pub mod quantum;
pub mod reference;
pub mod unitary;

pub use error::{GuessworkError, Result};
pub use experiment::{
    effective_outcome_probs, run_experiment, run_guessing_game_trial, synthetic_crosstalk, CrosstalkMatrix,
    EmpiricalGuessworkReport, OutcomeRule, TrialConfig,
};
pub use guesswork::{
    brute_force_best_plan, expected_guesses, guesswork_for_measurement, guesswork_with_ties, massey_order,
    massey_order_with, standard_basis_guesswork_formula, GuessingPlan, GuessworkReport, TieBreak,
};
pub use optimize::{optimize_measurement, OptimizationConfig, OptimizationResult, Parameterization};
pub use quantum::{
    make_generalized_bb84, outcome_probability, overlap_table, posterior, posterior_table, Ensemble,
    PosteriorDistribution, ProjectiveMeasurement, PureState,
};
pub use unitary::{general_unitary, hedemann_unitary_3, hedemann_unitary_4, HedemannParams3, HedemannParams4};

pub use num_complex::Complex64;
