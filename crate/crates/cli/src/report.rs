//! The JSON report written by `analyze` and `benchmark`.

use std::collections::BTreeMap;

use gsa_pce_core::indices::{CoefficientEntry, IndexEntry, IndexReport, OrderSweep, Screening};
use gsa_pce_core::stats::Interval;
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: &str = "1.0";
pub const TOOL_NAME: &str = "gsa-pce";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tool {
    pub name: String,
    pub version: String,
}

impl Default for Tool {
    fn default() -> Self {
        Tool {
            name: TOOL_NAME.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Diagnostics {
    pub n_samples: usize,
    pub n_inputs: usize,
    pub degree: u32,
    pub basis_size: usize,
    /// Mean over replications for benchmark reports.
    pub r_squared: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_variance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pce_variance: Option<f64>,
    #[serde(default)]
    pub dropped_terms: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub replications: Option<usize>,
    pub seed: u64,
    #[serde(default)]
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IndexRecord {
    pub name: String,
    pub target: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub given: Vec<String>,
    pub value: f64,
    pub raw_value: f64,
    pub display: String,
    pub partition: String,
    pub permutation: Vec<usize>,
    pub denominator: String,
    /// Benchmark setting the value belongs to, e.g. a correlation triple.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub setting: Option<String>,
}

impl IndexRecord {
    pub fn from_entry(e: &IndexEntry, setting: Option<String>) -> Self {
        IndexRecord {
            name: e.name.clone(),
            target: e.target.clone(),
            given: e.given.clone(),
            value: e.value,
            raw_value: e.raw_value,
            display: display(e.value),
            partition: e.partition.clone(),
            permutation: e.permutation.clone(),
            denominator: e.denominator.name().to_string(),
            setting,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntervalRecord {
    pub name: String,
    pub target: Vec<String>,
    pub point: f64,
    pub lo: f64,
    pub hi: f64,
    pub level: f64,
    /// `row_bootstrap` (rows of one dataset) or `replication_mean` (bootstrap
    /// of the mean over replications).
    pub method: String,
    pub display: String,
    #[serde(default)]
    pub redraws: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub setting: Option<String>,
}

impl IntervalRecord {
    pub fn new(
        name: &str,
        target: Vec<String>,
        iv: &Interval,
        method: &str,
        setting: Option<String>,
    ) -> Self {
        IntervalRecord {
            name: name.to_string(),
            target,
            point: iv.point,
            lo: iv.lo,
            hi: iv.hi,
            level: iv.level,
            method: method.to_string(),
            display: format!(
                "{} ({}, {})",
                display(iv.point),
                display(iv.lo),
                display(iv.hi)
            ),
            redraws: iv.redraws,
            setting,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableRow {
    pub label: String,
    pub estimate: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub std_error: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ci_lo: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ci_hi: Option<f64>,
    pub reference: f64,
    /// Exact value where a closed form is available.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub analytic: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    pub display: String,
}

impl TableRow {
    pub fn new(label: impl Into<String>, estimate: f64, reference: f64, tolerance: f64) -> Self {
        TableRow {
            label: label.into(),
            estimate,
            std_error: None,
            ci_lo: None,
            ci_hi: None,
            reference,
            analytic: None,
            tolerance,
            pass: (estimate - reference).abs() <= tolerance,
            display: display(estimate),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Table {
    pub title: String,
    pub rows: Vec<TableRow>,
}

impl Table {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrderRecord {
    pub order: usize,
    pub value: f64,
    pub cumulative: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScreeningRecord {
    pub threshold: f64,
    pub max_order: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientRecord {
    pub label: String,
    pub exponents: Vec<u32>,
    pub coefficient: f64,
    pub display: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub schema_version: String,
    pub tool: Tool,
    pub command: String,
    pub config: BTreeMap<String, String>,
    pub diagnostics: Diagnostics,
    pub indices: Vec<IndexRecord>,
    #[serde(default)]
    pub intervals: Vec<IntervalRecord>,
    #[serde(default)]
    pub tables: Vec<Table>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub order_sweep: Vec<OrderRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub screening: Option<ScreeningRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub interaction_coefficients: Vec<CoefficientRecord>,
}

impl Report {
    pub fn new(command: &str, config: BTreeMap<String, String>, diagnostics: Diagnostics) -> Self {
        Report {
            schema_version: SCHEMA_VERSION.to_string(),
            tool: Tool::default(),
            command: command.to_string(),
            config,
            diagnostics,
            indices: Vec::new(),
            intervals: Vec::new(),
            tables: Vec::new(),
            order_sweep: Vec::new(),
            screening: None,
            interaction_coefficients: Vec::new(),
        }
    }

    /// Copies entries, order sweep, screening and coefficients from an index report.
    pub fn absorb(&mut self, r: &IndexReport, setting: Option<&str>) {
        self.indices.extend(
            r.entries
                .iter()
                .map(|e| IndexRecord::from_entry(e, setting.map(String::from))),
        );
        if let Some(s) = &r.order_sweep {
            self.set_order(s, r.screening.as_ref());
        }
        if !r.interaction_coefficients.is_empty() {
            self.set_coefficients(&r.interaction_coefficients);
        }
    }

    pub fn set_order(&mut self, sweep: &OrderSweep, screening: Option<&Screening>) {
        self.order_sweep = sweep
            .shares
            .iter()
            .map(|s| OrderRecord {
                order: s.order,
                value: s.value,
                cumulative: s.cumulative,
            })
            .collect();
        self.screening = screening.map(|s| ScreeningRecord {
            threshold: s.threshold,
            max_order: s.max_order,
            warning: s.warning.clone(),
        });
    }

    pub fn set_coefficients(&mut self, coefs: &[CoefficientEntry]) {
        self.interaction_coefficients = coefs
            .iter()
            .map(|c| CoefficientRecord {
                label: c.label.clone(),
                exponents: c.exponents.clone(),
                coefficient: c.coefficient,
                display: format!("{:.4}", c.coefficient),
            })
            .collect();
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Parses and checks a report document.
pub fn parse_report(text: &str) -> Result<Report, String> {
    let r: Report = serde_json::from_str(text).map_err(|e| format!("invalid report JSON: {e}"))?;
    if r.schema_version.split('.').next() != SCHEMA_VERSION.split('.').next() {
        return Err(format!(
            "unsupported schema_version '{}' (expected {SCHEMA_VERSION})",
            r.schema_version
        ));
    }
    Ok(r)
}

/// Four-decimal rendering used in `display` fields.
pub fn display(v: f64) -> String {
    format!("{v:.4}")
}
