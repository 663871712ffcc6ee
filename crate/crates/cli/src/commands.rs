//! `analyze`, `benchmark` and `plot`.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use gsa_pce_core::basis::{basis_size, PartitionKind, Permutation};
use gsa_pce_core::benchmarks::{
    analytic_example1_indices, analytic_example3_totals, generate_stream, BenchmarkSpec, Example,
    TABLE1_REFERENCE, TABLE2_REFERENCE, TABLE3_REFERENCE,
};
use gsa_pce_core::dataset::{read_csv, CsvSelection, Dataset, DatasetError};
use gsa_pce_core::indices::{
    screen_interactions, AnalysisOptions, Analyzer, BasisCache, Denominator, Fitted, IndexError,
};
use gsa_pce_core::ortho::OrthoError;
use gsa_pce_core::stats::{bootstrap_ci, bootstrap_mean_ci, replicate, ResamplingPlan, StatsError};
use thiserror::Error;

use crate::config::{AnalysisConfig, ConfigError};
use crate::plot::{render, PlotKind};
use crate::report::{
    display, parse_report, Diagnostics, IndexRecord, IntervalRecord, Report, Table, TableRow,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => 2,
            CliError::Data(_) => 3,
            CliError::Numerical(_) => 4,
        }
    }
}

impl From<IndexError> for CliError {
    fn from(e: IndexError) -> Self {
        match &e {
            IndexError::Fit {
                source: OrthoError::InsufficientSamples { samples, terms },
                ..
            } => CliError::Data(format!(
                "insufficient samples: {samples} rows, at least {terms} required for this degree and input count"
            )),
            IndexError::InvalidGroup(_) | IndexError::InputOutOfRange { .. } | IndexError::ZeroDegree => {
                CliError::Usage(e.to_string())
            }
            IndexError::Basis(_) => CliError::Data(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<StatsError> for CliError {
    fn from(e: StatsError) -> Self {
        match e {
            StatsError::InvalidPlan(m) => CliError::Usage(m),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

fn data_err(path: &Path, e: DatasetError) -> CliError {
    CliError::Data(format!("{}: {e}", path.display()))
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Data(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Reads the configured CSV and resolves group names to column indices.
pub fn load_dataset(cfg: &AnalysisConfig) -> Result<(Dataset, Vec<Vec<usize>>), CliError> {
    let (path, output) = cfg.require_input()?;
    let file =
        fs::File::open(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    let sel = CsvSelection {
        output: output.to_string(),
        inputs: cfg.input_columns.clone(),
    };
    let ds = read_csv(file, &sel).map_err(|e| data_err(path, e))?;
    let groups = cfg
        .groups
        .iter()
        .map(|g| {
            g.iter()
                .map(|name| {
                    ds.input_names()
                        .iter()
                        .position(|n| n == name)
                        .ok_or_else(|| {
                            CliError::Usage(format!("groups: '{name}' is not an input column"))
                        })
                })
                .collect()
        })
        .collect::<Result<_, _>>()?;
    Ok((ds, groups))
}

/// Runs the configured analysis and returns the report.
pub fn analyze(cfg: &AnalysisConfig) -> Result<Report, CliError> {
    let (ds, groups) = load_dataset(cfg)?;
    let opts = cfg.analysis_options();
    let cache = BasisCache::new();
    let analyzer = Analyzer::new(&ds, opts)?;
    let analyzer = if cfg.reuse_basis {
        analyzer.recording(&cache)
    } else {
        analyzer
    };
    let result = analyzer.all_indices(&cfg.families, &groups, cfg.screen_threshold)?;

    let d = &result.diagnostics;
    let mut warnings = d.warnings.clone();
    if cfg.reuse_basis && cfg.resampling.is_some() {
        warnings.push(
            "resampling.reuse_basis: bases are frozen on the original sample; intervals omit basis estimation error"
                .into(),
        );
    }
    let diag = Diagnostics {
        n_samples: d.n_samples,
        n_inputs: d.n_inputs,
        degree: d.degree,
        basis_size: d.basis_size,
        r_squared: d.r_squared,
        sample_variance: Some(d.sample_variance),
        pce_variance: Some(d.pce_variance),
        dropped_terms: d.dropped_terms,
        replications: None,
        seed: cfg.seed,
        warnings,
    };
    let mut report = Report::new("analyze", cfg.echo.clone(), diag);
    report.absorb(&result, None);

    if let Some(plan) = &cfg.resampling {
        let families = &cfg.families;
        let threshold = cfg.screen_threshold;
        let estimate = |d: &Dataset| -> Result<Vec<f64>, IndexError> {
            let a = if cfg.reuse_basis {
                Analyzer::frozen(d, opts, &cache)?
            } else {
                Analyzer::new(d, opts)?
            };
            Ok(a.all_indices(families, &groups, threshold)?
                .entries
                .iter()
                .map(|e| e.raw_value)
                .collect())
        };
        let intervals = bootstrap_ci(&ds, estimate, plan)?;
        report.intervals = result
            .entries
            .iter()
            .zip(&intervals)
            .map(|(e, iv)| {
                IntervalRecord::new(&e.name, e.target.clone(), iv, "row_bootstrap", None)
            })
            .collect();
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkOptions {
    /// 1, 2 or 3.
    pub example: u8,
    /// Example 1 correlations; all reference settings when `None`.
    pub rho: Option<[f64; 3]>,
    pub theta: [f64; 3],
    pub reps: usize,
    pub samples: usize,
    pub degree: u32,
    pub seed: u64,
    /// Bootstrap resamples of the replication mean; 0 skips intervals.
    pub bootstrap: usize,
    pub denominator: Denominator,
}

impl BenchmarkOptions {
    pub fn defaults(example: u8) -> Self {
        BenchmarkOptions {
            example,
            rho: None,
            theta: Example::MIXED_DEFAULT_THETA,
            reps: 500,
            samples: if example == 3 { 5000 } else { 500 },
            degree: if example == 2 { 3 } else { 2 },
            seed: 42,
            bootstrap: 10_000,
            denominator: Denominator::Sample,
        }
    }

    fn echo(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        m.insert("example".into(), self.example.to_string());
        if self.example == 1 {
            if let Some(r) = self.rho {
                m.insert("rho".into(), triple(r));
            }
        }
        if self.example == 3 {
            m.insert("theta".into(), triple(self.theta));
        }
        m.insert("reps".into(), self.reps.to_string());
        m.insert("samples".into(), self.samples.to_string());
        m.insert("degree".into(), self.degree.to_string());
        m.insert("seed".into(), self.seed.to_string());
        m.insert("bootstrap".into(), self.bootstrap.to_string());
        m.insert("denominator".into(), self.denominator.name().into());
        m
    }
}

fn triple(v: [f64; 3]) -> String {
    format!("({},{},{})", v[0], v[1], v[2])
}

/// Rows a benchmark estimator reports, parallel to its output vector.
struct Quantity {
    name: &'static str,
    target: Vec<String>,
    partition: PartitionKind,
    permutation: Permutation,
    /// Row in the reference table with its reference and exact values.
    row: Option<(usize, f64, Option<f64>)>,
}

fn xs(cols: &[usize]) -> Vec<String> {
    cols.iter().map(|c| format!("X{}", c + 1)).collect()
}

struct Setting {
    label: Option<String>,
    title: String,
    example: Example,
    quantities: Vec<Quantity>,
    tolerance: f64,
}

/// `S̄, ST̄, S^u, ST^u` for every input, in the layout `pair_estimates` returns.
fn pair_quantities(n: usize) -> Vec<Quantity> {
    let mut out = Vec::with_capacity(4 * n);
    for i in 0..n {
        for (name, partition) in [
            ("first_order_full", PartitionKind::Full),
            ("alt_total_full", PartitionKind::Full),
            ("alt_first_order_uncorrelated", PartitionKind::Uncorrelated),
            ("total_uncorrelated", PartitionKind::Uncorrelated),
        ] {
            out.push(Quantity {
                name,
                target: xs(&[i]),
                partition,
                permutation: Permutation::cyclic(n, i),
                row: None,
            });
        }
    }
    out
}

fn example1_setting(rho: [f64; 3]) -> Result<Setting, CliError> {
    let exact = analytic_example1_indices(rho)
        .map_err(|e| CliError::Usage(format!("rho {}: {e}", triple(rho))))?;
    let published = TABLE1_REFERENCE.iter().find(|(r, _, _)| *r == rho);
    let mut quantities = pair_quantities(3);
    for i in 0..3 {
        let (s_ref, st_ref) = match published {
            Some((_, s, st)) => (s[i], st[i]),
            None => exact[i],
        };
        quantities[4 * i].row = Some((2 * i, s_ref, Some(exact[i].0)));
        quantities[4 * i + 3].row = Some((2 * i + 1, st_ref, Some(exact[i].1)));
    }
    Ok(Setting {
        label: Some(format!("rho={}", triple(rho))),
        title: format!("Example 1, rho = {}", triple(rho)),
        example: Example::Linear { rho },
        quantities,
        tolerance: 0.01,
    })
}

/// Exact triangle values in table order.
const EXAMPLE2_EXACT: [f64; 6] = [1.0 / 30.0, 1.0 / 15.0, 0.1, 7.0 / 30.0, 2.0 / 3.0, 0.9];

fn example2_setting() -> Setting {
    let row = |k: usize| Some((k, TABLE2_REFERENCE[k].1, Some(EXAMPLE2_EXACT[k])));
    let mut quantities = pair_quantities(4);
    quantities[0].row = row(0);
    quantities[4 + 3].row = row(1);
    quantities[8].row = row(3);
    quantities[12 + 3].row = row(4);
    for (cols, first, k) in [([0, 1], 0, 2), ([2, 3], 2, 5)] {
        quantities.push(Quantity {
            name: "group_total",
            target: xs(&cols),
            partition: PartitionKind::Full,
            permutation: Permutation::cyclic(4, first),
            row: row(k),
        });
    }
    Setting {
        label: None,
        title: "Example 2".into(),
        example: Example::Triangles,
        quantities,
        tolerance: 0.01,
    }
}

fn example3_setting(theta: [f64; 3]) -> Setting {
    let exact = analytic_example3_totals(theta);
    let published = theta == Example::MIXED_DEFAULT_THETA;
    let quantities = (0..3)
        .map(|g| Quantity {
            name: "group_total",
            target: xs(&[2 * g, 2 * g + 1]),
            partition: PartitionKind::Full,
            permutation: Permutation::identity(6),
            row: Some((
                g,
                if published {
                    TABLE3_REFERENCE[g].1
                } else {
                    exact[g]
                },
                Some(exact[g]),
            )),
        })
        .collect();
    Setting {
        label: Some(format!("theta={}", triple(theta))),
        title: format!("Example 3, theta = {}", triple(theta)),
        example: Example::Mixed { theta },
        quantities,
        tolerance: 0.005,
    }
}

/// One full and one uncorrelated fit per input in cyclic order. Returns the
/// four indices per input and the full fits, indexed by leading input.
fn pair_estimates(a: &Analyzer) -> Result<(Vec<f64>, Vec<Fitted>), IndexError> {
    let n = a.n_inputs();
    let mut out = Vec::with_capacity(4 * n);
    let mut fits = Vec::with_capacity(n);
    for i in 0..n {
        let f = a.fit_partition(PartitionKind::Full, &Permutation::cyclic(n, i))?;
        let (s, st) = f.first_and_total();
        let (su, stu) = a.uncorrelated_pair(i)?;
        out.extend([s, st, su, stu]);
        fits.push(f);
    }
    Ok((out, fits))
}

fn leading_pair_total(f: &Fitted) -> f64 {
    let sweep = f.conditional_totals();
    sweep[0].value + sweep[1].value
}

/// Per-replication estimates for a setting, followed by the R² of the identity full fit.
fn estimate(example: &Example, a: &Analyzer) -> Result<Vec<f64>, IndexError> {
    match example {
        Example::Linear { .. } => {
            let (mut out, fits) = pair_estimates(a)?;
            out.push(fits[0].model.r_squared());
            Ok(out)
        }
        Example::Triangles => {
            let (mut out, fits) = pair_estimates(a)?;
            out.extend([
                leading_pair_total(&fits[0]),
                leading_pair_total(&fits[2]),
                fits[0].model.r_squared(),
            ]);
            Ok(out)
        }
        Example::Mixed { .. } => {
            let f = a.fit_partition(PartitionKind::Full, &Permutation::identity(a.n_inputs()))?;
            let s = f.conditional_totals();
            Ok(vec![
                s[0].value + s[1].value,
                s[2].value + s[3].value,
                s[4].value + s[5].value,
                f.model.r_squared(),
            ])
        }
    }
}

/// Stream for the single large-sample order analysis of the mixed example,
/// clear of the replication streams.
pub const ORDER_ANALYSIS_STREAM: u64 = 1 << 32;
pub const ORDER_ANALYSIS_SAMPLES: usize = 10_000;
pub const ORDER_ANALYSIS_DEGREE: u32 = 3;

/// Runs a benchmark study and returns its report.
pub fn benchmark(o: &BenchmarkOptions) -> Result<Report, CliError> {
    let settings = match o.example {
        1 => match o.rho {
            Some(r) => vec![example1_setting(r)?],
            None => TABLE1_REFERENCE
                .iter()
                .map(|(r, _, _)| example1_setting(*r))
                .collect::<Result<_, _>>()?,
        },
        2 => vec![example2_setting()],
        3 => vec![example3_setting(o.theta)],
        other => {
            return Err(CliError::Usage(format!(
                "unknown example {other}; expected 1, 2 or 3"
            )))
        }
    };
    if o.reps == 0 {
        return Err(CliError::Usage("reps must be positive".into()));
    }
    let opts = AnalysisOptions {
        degree: o.degree,
        denominator: o.denominator,
        ..AnalysisOptions::with_degree(o.degree)
    };
    let n_inputs = settings[0].example.n_inputs();
    let size = basis_size(n_inputs, o.degree).map_err(|e| CliError::Usage(e.to_string()))?;
    if o.samples < size {
        return Err(CliError::Data(format!(
            "insufficient samples: {} rows, at least {size} required for this degree and input count",
            o.samples
        )));
    }
    let plan = ResamplingPlan {
        bootstrap_samples: o.bootstrap.max(1),
        replications: o.reps,
        samples_per_replication: o.samples,
        seed: o.seed,
        ..ResamplingPlan::default()
    };

    let mut report = Report::new("benchmark", o.echo(), Diagnostics::default());
    let mut r2_sum = 0.0;
    for (si, setting) in settings.iter().enumerate() {
        let spec = BenchmarkSpec {
            example: setting.example,
            n_samples: o.samples,
            seed: o.seed,
        };
        let example = setting.example;
        let rep = replicate(
            &spec,
            |d| Analyzer::new(d, opts).and_then(|a| estimate(&example, &a)),
            &plan,
        )?;
        let k = rep.mean.len() - 1;
        r2_sum += rep.mean[k];
        let mut rows = Vec::new();
        for (j, q) in setting.quantities.iter().enumerate() {
            let mean = rep.mean[j];
            let interval = if o.bootstrap > 0 {
                let stream = (si * 1000 + j) as u64;
                Some(bootstrap_mean_ci(&rep.column(j), &plan, stream)?)
            } else {
                None
            };
            report.indices.push(IndexRecord {
                name: q.name.into(),
                target: q.target.clone(),
                given: vec![],
                value: mean.clamp(0.0, 1.0),
                raw_value: mean,
                display: display(mean),
                partition: q.partition.name().into(),
                permutation: q.permutation.one_based(),
                denominator: o.denominator.name().into(),
                setting: setting.label.clone(),
            });
            if let Some(iv) = &interval {
                report.intervals.push(IntervalRecord::new(
                    q.name,
                    q.target.clone(),
                    iv,
                    "replication_mean",
                    setting.label.clone(),
                ));
            }
            if let Some((pos, reference, analytic)) = q.row {
                let mut row = TableRow::new(
                    format!("{} {}", q.name, q.target.join(",")),
                    mean,
                    reference,
                    setting.tolerance,
                );
                row.std_error = rep.std_error.as_ref().map(|s| s[j]);
                row.ci_lo = interval.map(|iv| iv.lo);
                row.ci_hi = interval.map(|iv| iv.hi);
                row.analytic = analytic;
                rows.push((pos, row));
            }
        }
        rows.sort_by_key(|(pos, _)| *pos);
        report.tables.push(Table {
            title: setting.title.clone(),
            rows: rows.into_iter().map(|(_, r)| r).collect(),
        });
    }

    if let Example::Mixed { .. } = settings[0].example {
        let spec = BenchmarkSpec {
            example: settings[0].example,
            n_samples: ORDER_ANALYSIS_SAMPLES,
            seed: o.seed,
        };
        let ds = generate_stream(&spec, ORDER_ANALYSIS_STREAM)
            .map_err(|e| CliError::Numerical(e.to_string()))?;
        let a = Analyzer::new(
            &ds,
            AnalysisOptions {
                degree: ORDER_ANALYSIS_DEGREE,
                ..opts
            },
        )?;
        let sweep = a.order_based_sweep()?;
        let screening = screen_interactions(&sweep, 0.99);
        report.set_order(&sweep, Some(&screening));
        report.set_coefficients(&a.interaction_coefficient_report(2)?);
    }

    report.diagnostics = Diagnostics {
        n_samples: o.samples,
        n_inputs,
        degree: o.degree,
        basis_size: size,
        r_squared: r2_sum / settings.len() as f64,
        sample_variance: None,
        pce_variance: None,
        dropped_terms: 0,
        replications: Some(o.reps),
        seed: o.seed,
        warnings: Vec::new(),
    };
    Ok(report)
}

pub fn run_analyze(cfg: &AnalysisConfig) -> Result<(), CliError> {
    let report = analyze(cfg)?;
    write_output(cfg.out.as_deref(), &report.to_json())
}

pub fn run_benchmark(o: &BenchmarkOptions, out: Option<&Path>) -> Result<(), CliError> {
    let report = benchmark(o)?;
    write_output(out, &report.to_json())
}

pub fn run_plot(report_path: &Path, kind: PlotKind, out: &PathBuf) -> Result<(), CliError> {
    let text = fs::read_to_string(report_path)
        .map_err(|e| CliError::Data(format!("{}: {e}", report_path.display())))?;
    let report = parse_report(&text)
        .map_err(|e| CliError::Data(format!("{}: {e}", report_path.display())))?;
    let svg = render(&report, kind).map_err(CliError::Data)?;
    write_output(Some(out), &svg)
}
