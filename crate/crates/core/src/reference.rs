//! Published reference values for the generalized BB84 ensembles.
//!
//! The optimal bases were printed to about four decimals, so they are only
//! approximately orthonormal; [`published_optimal_measurement`] restores
//! orthonormality with Gram-Schmidt in printed order.

use num_complex::Complex64;

use crate::error::{GuessworkError, Result};
use crate::quantum::ProjectiveMeasurement;

/// Printed optimal basis for `d = 3` (rows are `psi_0, psi_1, psi_2`).
pub const OPTIMAL_BASIS_D3: [[(f64, f64); 3]; 3] = [
    [(0.7413, -0.6421), (0.0118, 0.1221), (-0.1085, -0.1067)],
    [(-0.0919, 0.1244), (0.0688, -0.0060), (-0.8069, -0.5659)],
    [(0.0676, 0.0985), (0.9847, 0.1023), (0.0634, 0.0389)],
];

/// Printed optimal basis for `d = 4`.
///
/// Entry `[1][2]` is printed as `-0.081 + 0.0104i`; the basis has a
/// `0<->2, 1<->3` magnitude symmetry that forces `|psi_1[2]| = |psi_3[0]|
/// = 0.0131`, so the stored value is `-0.0081 + 0.0104i`.
pub const OPTIMAL_BASIS_D4: [[(f64, f64); 4]; 4] = [
    [(-0.1116, -0.04115), (-0.0015, 0.0131), (0.1336, -0.0510), (0.0069, 0.9824)],
    [(-0.6943, 0.6951), (0.05941, 0.1301), (-0.0081, 0.0104), (-0.1084, -0.0490)],
    [(-0.1347, 0.0481), (0.0138, -0.9824), (0.1107, 0.0435), (0.0018, -0.0130)],
    [(-0.0104, 0.0080), (-0.0484, 0.1086), (0.6991, 0.6902), (0.1298, -0.0602)],
];

/// Printed posterior table for `d = 3` (rows `|0>,|1>,|2>,|0~>,|1~>,|2~>`,
/// columns `psi_0..psi_2`).
pub const POSTERIOR_TABLE_D3: [[f64; 3]; 6] = [
    [0.4809, 0.0120, 0.0071],
    [0.0075, 0.0024, 0.4901],
    [0.0116, 0.4857, 0.0028],
    [0.2574, 0.1170, 0.1257],
    [0.1347, 0.1482, 0.2171],
    [0.1079, 0.2348, 0.1572],
];

/// Printed per-outcome expected guesses for the `d = 3` optimum.
pub const PER_OUTCOME_D3: [f64; 3] = [1.9344, 1.9423, 1.951];

/// One row of the results table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PublishedRow {
    pub dim: usize,
    pub optimal: bool,
    pub theory: f64,
    pub experiment_mean: f64,
    pub experiment_std: f64,
}

pub const PUBLISHED_TABLE: [PublishedRow; 6] = [
    PublishedRow { dim: 2, optimal: false, theory: 1.75, experiment_mean: 1.7505, experiment_std: 0.0017 },
    PublishedRow { dim: 3, optimal: false, theory: 2.0, experiment_mean: 1.9996, experiment_std: 0.0087 },
    PublishedRow { dim: 4, optimal: false, theory: 2.25, experiment_mean: 2.2547, experiment_std: 0.0029 },
    PublishedRow { dim: 2, optimal: true, theory: 1.709, experiment_mean: 1.7062, experiment_std: 0.0089 },
    PublishedRow { dim: 3, optimal: true, theory: 1.9425, experiment_mean: 1.9439, experiment_std: 0.0084 },
    PublishedRow { dim: 4, optimal: true, theory: 2.1429, experiment_mean: 2.1411, experiment_std: 0.0025 },
];

/// `theta* = arctan(1/3) / 2`, the optimal qubit rotation.
pub fn qubit_optimal_angle() -> f64 {
    0.5 * (1.0f64 / 3.0).atan()
}

fn to_rows<const D: usize>(m: &[[(f64, f64); D]; D]) -> Vec<Vec<Complex64>> {
    m.iter().map(|r| r.iter().map(|&(re, im)| Complex64::new(re, im)).collect()).collect()
}

/// Published optimal measurement for `d = 2, 3, 4`, orthonormalized.
pub fn published_optimal_measurement(dim: usize) -> Result<ProjectiveMeasurement> {
    match dim {
        2 => Ok(ProjectiveMeasurement::qubit_rotation(qubit_optimal_angle())),
        3 => ProjectiveMeasurement::orthonormalized(to_rows(&OPTIMAL_BASIS_D3)),
        4 => ProjectiveMeasurement::orthonormalized(to_rows(&OPTIMAL_BASIS_D4)),
        d => Err(GuessworkError::InvalidConfig(format!("no published optimum for d = {d}"))),
    }
}

/// The printed rows exactly as stored, without orthonormalization.
pub fn published_rows(dim: usize) -> Option<Vec<Vec<Complex64>>> {
    match dim {
        3 => Some(to_rows(&OPTIMAL_BASIS_D3)),
        4 => Some(to_rows(&OPTIMAL_BASIS_D4)),
        _ => None,
    }
}
