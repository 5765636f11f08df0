use std::fs::{self, File};
use std::path::{Path, PathBuf};

use guesswork_core::experiment::default_ell_values;
use guesswork_core::reference::PUBLISHED_TABLE;
use guesswork_core::*;
use serde::Serialize;
use serde_json::Value;

use crate::error::CliError;
use crate::output::{emit, Table};
use crate::{MeasurementKind, OptimizerArgs, OutputArgs, ScenarioArgs, SimArgs, MAX_DIM};

const DEFAULT_LEAK: f64 = 0.02;

type Result<T, E = CliError> = std::result::Result<T, E>;

fn check_dim(dim: usize) -> Result<()> {
    if dim < 2 {
        return Err(GuessworkError::InvalidDimension(dim).into());
    }
    if dim > MAX_DIM {
        return Err(CliError::Validation(format!("dimension {dim} exceeds the supported maximum of {MAX_DIM}")));
    }
    Ok(())
}

fn cache_path(dir: &Path, dim: usize, opt: &OptimizerArgs) -> PathBuf {
    dir.join(format!("optimum-d{dim}-{}-seed{}-restarts{}.json", opt.parameterization, opt.seed, opt.restarts))
}

/// Optimizer result for `dim`, read from the cache when one matches.
fn optimum(dim: usize, opt: &OptimizerArgs, cache: Option<&Path>) -> Result<OptimizationResult> {
    let path = cache.map(|dir| cache_path(dir, dim, opt));
    if let Some(p) = &path {
        if let Ok(text) = fs::read_to_string(p) {
            if let Ok(r) = serde_json::from_str::<OptimizationResult>(&text) {
                return Ok(r);
            }
            eprintln!("warning: ignoring unreadable cache entry {}", p.display());
        }
    }
    let e = make_generalized_bb84(dim)?;
    let cfg = OptimizationConfig {
        restarts: opt.restarts,
        seed: opt.seed,
        parameterization: opt.parameterization,
        ..Default::default()
    };
    let result = optimize_measurement(&e, &cfg)?;
    if let Some(p) = &path {
        let stored = fs::create_dir_all(cache.unwrap())
            .and_then(|_| fs::write(p, serde_json::to_string_pretty(&result).expect("serializable")));
        if let Err(err) = stored {
            eprintln!("warning: could not write cache entry {}: {err}", p.display());
        }
    }
    Ok(result)
}

/// Reads a bare basis, an `optimize` result, or an `evaluate` report.
pub fn read_measurement_file(path: &Path) -> Result<ProjectiveMeasurement> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let bad = |e: serde_json::Error| CliError::Validation(format!("{}: {e}", path.display()));
    let value: Value = serde_json::from_str(&text).map_err(bad)?;
    let inner = match &value {
        Value::Object(obj) if obj.contains_key("best") => &obj["best"]["measurement"],
        Value::Object(obj) if obj.contains_key("measurement") => &obj["measurement"],
        v => v,
    };
    serde_json::from_value(inner.clone()).map_err(bad)
}

fn measurement(s: &ScenarioArgs, opt: &OptimizerArgs, cache: Option<&Path>) -> Result<(ProjectiveMeasurement, String)> {
    check_dim(s.dim)?;
    if s.path.is_some() && s.measurement != MeasurementKind::File {
        return Err(CliError::Validation("--path requires --measurement file".into()));
    }
    match s.measurement {
        MeasurementKind::Standard => Ok((ProjectiveMeasurement::standard(s.dim), "standard".into())),
        MeasurementKind::Optimal => {
            let r = optimum(s.dim, opt, cache)?;
            Ok((
                r.best.measurement,
                format!("optimal ({}, seed {}, {} restarts)", opt.parameterization, opt.seed, opt.restarts),
            ))
        }
        MeasurementKind::File => {
            let path =
                s.path.as_ref().ok_or_else(|| CliError::Validation("--measurement file requires --path".into()))?;
            let m = read_measurement_file(path)?;
            if m.dim() != s.dim {
                return Err(GuessworkError::DimensionMismatch { expected: s.dim, found: m.dim() }.into());
            }
            Ok((m, path.display().to_string()))
        }
    }
}

fn crosstalk(sim: &SimArgs, dim: usize) -> Result<Option<CrosstalkMatrix>> {
    let spec = match (&sim.crosstalk, sim.leak) {
        (None, None) => return Ok(None),
        (None, Some(_)) => "synthetic",
        (Some(s), _) => s.as_str(),
    };
    if sim.leak.is_some() && spec != "synthetic" {
        return Err(CliError::Validation("--leak applies only to synthetic crosstalk".into()));
    }
    let c = match spec {
        "identity" => CrosstalkMatrix::identity(dim),
        "synthetic" => synthetic_crosstalk(dim, &default_ell_values(dim), sim.leak.unwrap_or(DEFAULT_LEAK))?,
        path => {
            let path = Path::new(path);
            let c = CrosstalkMatrix::from_csv(File::open(path).map_err(|e| CliError::io(path, e))?)
                .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
            if c.dim() != dim {
                return Err(GuessworkError::DimensionMismatch { expected: dim, found: c.dim() }.into());
            }
            c
        }
    };
    Ok(Some(c))
}

fn trial_config(sim: &SimArgs, seed: u64, dim: usize, default_ties: TieBreak) -> Result<TrialConfig> {
    let cfg = TrialConfig {
        shots: sim.shots,
        trials: sim.trials,
        seed,
        crosstalk: crosstalk(sim, dim)?,
        rule: sim.rule.into(),
        ties: sim.ties.map(Into::into).unwrap_or(default_ties),
    };
    cfg.validate()?;
    Ok(cfg)
}

pub fn evaluate(s: &ScenarioArgs, opt: &OptimizerArgs, out: &OutputArgs, cache: Option<&Path>) -> Result<()> {
    let (m, source) = measurement(s, opt, cache)?;
    let e = make_generalized_bb84(s.dim)?;
    let r = guesswork_for_measurement(&e, &m)?;
    let mut table = Table::new(["outcome", "probability", "expected_guesses", "order"]);
    for k in 0..s.dim {
        let order: Vec<&str> = r.plan.orders[k].iter().map(|&x| e.labels()[x].as_str()).collect();
        table.push([
            k.to_string(),
            format!("{:.6}", r.outcome_probs[k]),
            format!("{:.6}", r.per_outcome[k]),
            order.join(" "),
        ]);
    }
    let text = format!("d = {}, measurement: {source}\nguesswork {:.10}\n\n{}", s.dim, r.guesswork, table.text());
    emit(out, &r, text, &table)
}

pub fn optimize(dim: usize, opt: &OptimizerArgs, out: &OutputArgs, cache: Option<&Path>) -> Result<()> {
    check_dim(dim)?;
    let r = optimum(dim, opt, cache)?;
    let mut table = Table::new(["restart", "guesswork"]);
    for (i, v) in r.objective_history.iter().enumerate() {
        table.push([i.to_string(), format!("{v:.12}")]);
    }
    let text = format!(
        "d = {dim}, {} parameterization, seed {}, {} restarts\nbest guesswork {:.10}",
        opt.parameterization, opt.seed, opt.restarts, r.best.guesswork
    );
    emit(out, &r, text, &table)
}

pub fn simulate(
    s: &ScenarioArgs,
    opt: &OptimizerArgs,
    sim: &SimArgs,
    out: &OutputArgs,
    cache: Option<&Path>,
) -> Result<()> {
    let (m, source) = measurement(s, opt, cache)?;
    let e = make_generalized_bb84(s.dim)?;
    let cfg = trial_config(sim, opt.seed, s.dim, TieBreak::Ascending)?;
    let r = run_experiment(&e, &m, &cfg)?;
    let mut table = Table::new(["trial", "guesswork"]);
    for (i, v) in r.per_trial.iter().enumerate() {
        table.push([i.to_string(), format!("{v:.10}")]);
    }
    let mut text = format!(
        "d = {}, measurement: {source}\n{} trials x {} shots, seed {}\nsimulated {:.4} ± {:.4}\ntheory    {:.4}",
        s.dim, r.trials, r.shots, r.seed, r.mean, r.std, r.ideal
    );
    if r.degenerate_std {
        text.push_str("\nstd undefined for a single trial (reported as 0)");
    }
    emit(out, &r, text, &table)
}

#[derive(Debug, Serialize)]
struct Table1Row {
    dim: usize,
    measurement: &'static str,
    theory: f64,
    experiment_mean: f64,
    experiment_std: f64,
    published_theory: f64,
    published_experiment_mean: f64,
    published_experiment_std: f64,
}

pub fn table1(opt: &OptimizerArgs, sim: &SimArgs, out: &OutputArgs, cache: Option<&Path>) -> Result<()> {
    let mut rows = Vec::new();
    for p in PUBLISHED_TABLE {
        let s = ScenarioArgs {
            dim: p.dim,
            measurement: if p.optimal { MeasurementKind::Optimal } else { MeasurementKind::Standard },
            path: None,
        };
        let (m, _) = measurement(&s, opt, cache)?;
        let e = make_generalized_bb84(p.dim)?;
        let cfg = trial_config(sim, opt.seed, p.dim, TieBreak::Alternating)?;
        let r = run_experiment(&e, &m, &cfg)?;
        rows.push(Table1Row {
            dim: p.dim,
            measurement: if p.optimal { "optimal" } else { "standard" },
            theory: r.ideal,
            experiment_mean: r.mean,
            experiment_std: r.std,
            published_theory: p.theory,
            published_experiment_mean: p.experiment_mean,
            published_experiment_std: p.experiment_std,
        });
    }
    let mut csv = Table::new([
        "dim",
        "measurement",
        "theory",
        "experiment_mean",
        "experiment_std",
        "published_theory",
        "published_experiment_mean",
        "published_experiment_std",
    ]);
    let mut pretty =
        Table::new(["d", "measurement", "theory", "simulated", "published theory", "published experiment"]);
    for r in &rows {
        csv.push([
            r.dim.to_string(),
            r.measurement.to_string(),
            format!("{:.10}", r.theory),
            format!("{:.10}", r.experiment_mean),
            format!("{:.10}", r.experiment_std),
            r.published_theory.to_string(),
            r.published_experiment_mean.to_string(),
            r.published_experiment_std.to_string(),
        ]);
        pretty.push([
            r.dim.to_string(),
            r.measurement.to_string(),
            format!("{:.4}", r.theory),
            format!("{:.4} ± {:.4}", r.experiment_mean, r.experiment_std),
            r.published_theory.to_string(),
            format!("{} ± {}", r.published_experiment_mean, r.published_experiment_std),
        ]);
    }
    let text =
        format!("{} trials x {} shots per scenario, seed {}\n\n{}", sim.trials, sim.shots, opt.seed, pretty.text());
    emit(out, &rows, text, &csv)
}
