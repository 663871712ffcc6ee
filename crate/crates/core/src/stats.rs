//! Bootstrap intervals and replication sweeps.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::benchmarks::{generate_stream, BenchmarkError, BenchmarkSpec};
use crate::dataset::Dataset;

#[derive(Debug, Error)]
pub enum StatsError {
    #[error("invalid resampling plan: {0}")]
    InvalidPlan(String),
    #[error("estimator failed on the original data: {0}")]
    Point(String),
    #[error("bootstrap resample {resample} failed {failures} times in a row; last error: {last}")]
    Retries {
        resample: usize,
        failures: usize,
        last: String,
    },
    #[error("replication {rep}: {message}")]
    Replication { rep: usize, message: String },
    #[error("estimator returned {got} values, expected {expected}")]
    Arity { expected: usize, got: usize },
    #[error(transparent)]
    Benchmark(#[from] BenchmarkError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResamplingPlan {
    pub bootstrap_samples: usize,
    pub replications: usize,
    pub samples_per_replication: usize,
    pub ci_level: f64,
    pub seed: u64,
    /// Redraws allowed for one bootstrap resample before giving up.
    pub max_retries: usize,
}

impl Default for ResamplingPlan {
    fn default() -> Self {
        ResamplingPlan {
            bootstrap_samples: 10_000,
            replications: 1,
            samples_per_replication: 500,
            ci_level: 0.95,
            seed: 42,
            max_retries: 20,
        }
    }
}

impl ResamplingPlan {
    pub fn validate(&self) -> Result<(), StatsError> {
        if self.bootstrap_samples == 0 {
            return Err(StatsError::InvalidPlan(
                "bootstrap_samples must be positive".into(),
            ));
        }
        if self.replications == 0 {
            return Err(StatsError::InvalidPlan(
                "replications must be positive".into(),
            ));
        }
        if self.samples_per_replication == 0 {
            return Err(StatsError::InvalidPlan(
                "samples_per_replication must be positive".into(),
            ));
        }
        if !(self.ci_level > 0.0 && self.ci_level < 1.0) {
            return Err(StatsError::InvalidPlan(format!(
                "ci_level {} is not in (0, 1)",
                self.ci_level
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub point: f64,
    pub lo: f64,
    pub hi: f64,
    pub level: f64,
    /// Resamples on which the estimator failed and was redrawn.
    pub redraws: usize,
}

impl Interval {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Linear-interpolation quantile of sorted data (Hyndman-Fan type 7).
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of empty data");
    let h = (sorted.len() - 1) as f64 * q.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

fn percentile_bounds(mut values: Vec<f64>, level: f64) -> (f64, f64) {
    values.sort_by(f64::total_cmp);
    let alpha = (1.0 - level) / 2.0;
    (
        quantile_sorted(&values, alpha),
        quantile_sorted(&values, 1.0 - alpha),
    )
}

fn resample_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Percentile bootstrap for a vector-valued estimator. Rows are resampled
/// jointly (inputs with their output), and the estimator is re-run in full on
/// each resample. Resample `b` draws from stream `b` of `plan.seed`.
pub fn bootstrap_ci<E, F>(
    ds: &Dataset,
    estimator: F,
    plan: &ResamplingPlan,
) -> Result<Vec<Interval>, StatsError>
where
    F: Fn(&Dataset) -> Result<Vec<f64>, E> + Sync,
    E: std::fmt::Display,
{
    plan.validate()?;
    let point = estimator(ds).map_err(|e| StatsError::Point(e.to_string()))?;
    let n = ds.n_samples();
    let draws: Vec<Result<(Vec<f64>, usize), StatsError>> = (0..plan.bootstrap_samples)
        .into_par_iter()
        .map(|b| {
            let mut rng = resample_rng(plan.seed, b as u64);
            let mut failures = 0;
            loop {
                let rows: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
                match estimator(&ds.select_rows(&rows)) {
                    Ok(v) if v.len() == point.len() => return Ok((v, failures)),
                    Ok(v) => {
                        return Err(StatsError::Arity {
                            expected: point.len(),
                            got: v.len(),
                        })
                    }
                    Err(e) => {
                        failures += 1;
                        if failures > plan.max_retries {
                            return Err(StatsError::Retries {
                                resample: b,
                                failures,
                                last: e.to_string(),
                            });
                        }
                    }
                }
            }
        })
        .collect();
    let mut columns = vec![Vec::with_capacity(plan.bootstrap_samples); point.len()];
    let mut redraws = 0;
    for d in draws {
        let (v, f) = d?;
        redraws += f;
        for (col, x) in columns.iter_mut().zip(v) {
            col.push(x);
        }
    }
    Ok(point
        .iter()
        .zip(columns)
        .map(|(&p, col)| {
            let (lo, hi) = percentile_bounds(col, plan.ci_level);
            Interval {
                point: p,
                lo,
                hi,
                level: plan.ci_level,
                redraws,
            }
        })
        .collect())
}

/// Scalar form of [`bootstrap_ci`].
pub fn bootstrap_ci_scalar<E, F>(
    ds: &Dataset,
    estimator: F,
    plan: &ResamplingPlan,
) -> Result<Interval, StatsError>
where
    F: Fn(&Dataset) -> Result<f64, E> + Sync,
    E: std::fmt::Display,
{
    let v = bootstrap_ci(ds, |d| estimator(d).map(|x| vec![x]), plan)?;
    Ok(v[0])
}

/// Percentile bootstrap interval for the mean of a set of values, e.g. the
/// per-replication estimates of a simulation study.
pub fn bootstrap_mean_ci(
    values: &[f64],
    plan: &ResamplingPlan,
    stream: u64,
) -> Result<Interval, StatsError> {
    plan.validate()?;
    if values.is_empty() {
        return Err(StatsError::InvalidPlan("no values to resample".into()));
    }
    let n = values.len();
    let point = values.iter().sum::<f64>() / n as f64;
    let mut rng = resample_rng(plan.seed, stream);
    let means: Vec<f64> = (0..plan.bootstrap_samples)
        .map(|_| (0..n).map(|_| values[rng.random_range(0..n)]).sum::<f64>() / n as f64)
        .collect();
    let (lo, hi) = percentile_bounds(means, plan.ci_level);
    Ok(Interval {
        point,
        lo,
        hi,
        level: plan.ci_level,
        redraws: 0,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Replicated {
    pub mean: Vec<f64>,
    /// Standard error of the mean; absent with a single replication.
    pub std_error: Option<Vec<f64>>,
    pub per_rep: Vec<Vec<f64>>,
}

impl Replicated {
    /// Values of component `k` across replications.
    pub fn column(&self, k: usize) -> Vec<f64> {
        self.per_rep.iter().map(|r| r[k]).collect()
    }
}

/// Runs `estimator` on `plan.replications` independent datasets drawn like
/// `spec` but with `plan.samples_per_replication` rows and seed `plan.seed`.
/// Replication `r` uses stream `r`, so results do not depend on scheduling.
pub fn replicate<E, F>(
    spec: &BenchmarkSpec,
    estimator: F,
    plan: &ResamplingPlan,
) -> Result<Replicated, StatsError>
where
    F: Fn(&Dataset) -> Result<Vec<f64>, E> + Sync,
    E: std::fmt::Display,
{
    plan.validate()?;
    let spec = BenchmarkSpec {
        n_samples: plan.samples_per_replication,
        seed: plan.seed,
        ..*spec
    };
    let per_rep: Vec<Vec<f64>> = (0..plan.replications)
        .into_par_iter()
        .map(|rep| {
            let ds = generate_stream(&spec, rep as u64)?;
            estimator(&ds).map_err(|e| StatsError::Replication {
                rep,
                message: e.to_string(),
            })
        })
        .collect::<Result<_, _>>()?;
    summarize(per_rep)
}

/// Mean and standard error per component of already computed replication values.
pub fn summarize(per_rep: Vec<Vec<f64>>) -> Result<Replicated, StatsError> {
    let r = per_rep.len();
    if r == 0 {
        return Err(StatsError::InvalidPlan("no replications".into()));
    }
    let k = per_rep[0].len();
    if let Some(bad) = per_rep.iter().find(|v| v.len() != k) {
        return Err(StatsError::Arity {
            expected: k,
            got: bad.len(),
        });
    }
    let mean: Vec<f64> = (0..k)
        .map(|j| per_rep.iter().map(|v| v[j]).sum::<f64>() / r as f64)
        .collect();
    let std_error = (r > 1).then(|| {
        (0..k)
            .map(|j| {
                let ss: f64 = per_rep.iter().map(|v| (v[j] - mean[j]).powi(2)).sum();
                (ss / (r - 1) as f64).sqrt() / (r as f64).sqrt()
            })
            .collect()
    });
    Ok(Replicated {
        mean,
        std_error,
        per_rep,
    })
}
