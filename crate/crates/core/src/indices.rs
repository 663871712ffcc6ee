//! Sensitivity indices as block shares of `Σθ²`.
//!
//! Every index is one block sum of squared coefficients divided by a variance
//! denominator. What differs between families is the ordered partition and
//! the input order the orthogonalization runs in:
//!
//! | index | partition | input order | numerator |
//! |---|---|---|---|
//! | `first_order_full` | full | target first | `St_11` |
//! | `alt_total_full` | full | target first | `St_11 ∪ St_1-St_11` |
//! | `conditional_total` | full | given order | `St_i` |
//! | `total_uncorrelated` | uncorrelated | target first | `St_11 ∪ St_1-St_11` |
//! | `alt_first_order_uncorrelated` | uncorrelated | target first | `St_11` |
//! | `order_conditional` | order-based | any | `Sc_k` |

use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::basis::{
    enumerate_monomials, partition, BasisError, BlockRole, MonomialSet, OrderedBasis,
    PartitionKind, Permutation,
};
use crate::dataset::Dataset;
use crate::ortho::{
    modified_gram_schmidt_with, MonomialTable, OrthoError, OrthoOptions, OrthonormalBasis,
};
use crate::pce::{fit, PceError, PceModel};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IndexError {
    #[error(transparent)]
    Basis(#[from] BasisError),
    #[error("{context}: {source}")]
    Fit { context: String, source: OrthoError },
    #[error(transparent)]
    Pce(#[from] PceError),
    #[error("input index {index} out of range for {n} inputs")]
    InputOutOfRange { index: usize, n: usize },
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error("no stored basis for the {kind} partition in order {order:?}")]
    NotCached { kind: String, order: Vec<usize> },
}

/// Variance used to normalize every index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Denominator {
    /// Population variance of the observed output.
    #[default]
    Sample,
    /// `Σθ²` of the fitted expansion.
    Pce,
}

impl Denominator {
    pub fn name(self) -> &'static str {
        match self {
            Denominator::Sample => "sample",
            Denominator::Pce => "pce",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnalysisOptions {
    pub degree: u32,
    pub ortho: OrthoOptions,
    pub denominator: Denominator,
}

impl AnalysisOptions {
    pub fn with_degree(degree: u32) -> Self {
        AnalysisOptions {
            degree,
            ortho: OrthoOptions::default(),
            denominator: Denominator::Sample,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Full,
    Uncorrelated,
    Conditional,
    Order,
    Groups,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::Full,
        Family::Uncorrelated,
        Family::Conditional,
        Family::Order,
        Family::Groups,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Full => "full",
            Family::Uncorrelated => "uncorrelated",
            Family::Conditional => "conditional",
            Family::Order => "order",
            Family::Groups => "groups",
        }
    }

    pub fn parse(s: &str) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.name() == s)
    }
}

/// A fitted model together with the normalization its indices use.
#[derive(Debug, Clone)]
pub struct Fitted {
    pub model: PceModel,
    pub denominator: f64,
}

impl Fitted {
    /// Block sum divided by the denominator; zero for constant output.
    pub fn share(&self, pick: impl Fn(usize) -> bool) -> f64 {
        if self.model.is_degenerate() || self.denominator <= 0.0 {
            return 0.0;
        }
        self.model.block_sum(pick) / self.denominator
    }

    fn share_of_roles(&self, keep: impl Fn(&BlockRole) -> bool) -> f64 {
        let blocks = self.model.basis().basis().blocks();
        self.share(|b| keep(&blocks[b].role))
    }

    /// `(St_11 share, St_1 share)`: `(S̄, ST̄)` for a full fit and
    /// `(S^u, ST^u)` for an uncorrelated fit, both for the leading input.
    pub fn first_and_total(&self) -> (f64, f64) {
        full_pair_of(self)
    }

    /// Conditional totals in the fit's input order.
    pub fn conditional_totals(&self) -> Vec<SweepEntry> {
        let order = self.model.basis().basis().permutation().clone();
        sweep_of(self, &order)
    }
}

/// One conditional order share `S̃_k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderShare {
    pub order: usize,
    pub value: f64,
    pub cumulative: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderSweep {
    pub shares: Vec<OrderShare>,
    /// Share of all non-constant terms; equals `r_squared` under the sample denominator.
    pub total: f64,
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Screening {
    pub threshold: f64,
    pub max_order: usize,
    pub warning: Option<String>,
}

/// Smallest interaction order whose cumulative share reaches `threshold` of
/// the total explained share.
pub fn screen_interactions(sweep: &OrderSweep, threshold: f64) -> Screening {
    if sweep.degenerate || sweep.total <= 0.0 {
        return Screening {
            threshold,
            max_order: 0,
            warning: Some("output is constant; no interaction order carries variance".into()),
        };
    }
    let target = threshold * sweep.total;
    let max_order = sweep
        .shares
        .iter()
        .find(|s| s.cumulative >= target)
        .map_or(sweep.shares.len(), |s| s.order);
    Screening {
        threshold,
        max_order,
        warning: None,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientEntry {
    pub label: String,
    pub exponents: Vec<u32>,
    pub coefficient: f64,
}

/// Conditional total of one input in a sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepEntry {
    /// Dataset column.
    pub input: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndexEntry {
    pub name: String,
    pub target: Vec<String>,
    /// Inputs ahead of the target in the orthogonalization order, for conditional indices.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub given: Vec<String>,
    pub value: f64,
    pub raw_value: f64,
    pub partition: String,
    pub permutation: Vec<usize>,
    pub denominator: Denominator,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    pub n_samples: usize,
    pub n_inputs: usize,
    pub degree: u32,
    pub basis_size: usize,
    pub r_squared: f64,
    pub sample_variance: f64,
    pub pce_variance: f64,
    pub dropped_terms: usize,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndexReport {
    pub entries: Vec<IndexEntry>,
    pub diagnostics: Diagnostics,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order_sweep: Option<OrderSweep>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub screening: Option<Screening>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub interaction_coefficients: Vec<CoefficientEntry>,
}

impl IndexReport {
    /// First entry with this name whose target is exactly `target`.
    pub fn get(&self, name: &str, target: &[&str]) -> Option<&IndexEntry> {
        self.entries.iter().find(|e| {
            e.name == name
                && e.target
                    .iter()
                    .map(String::as_str)
                    .eq(target.iter().copied())
        })
    }
}

/// Clamps into `[0, 1]` for reporting.
pub fn clamp_unit(v: f64) -> f64 {
    v.clamp(0.0, 1.0)
}

type CacheKey = (PartitionKind, Vec<usize>);

/// Orthonormal bases keyed by partition kind and input order. An analyzer
/// can record into it, and a frozen analyzer replays the stored bases on
/// other data instead of re-orthogonalizing.
#[derive(Debug, Default)]
pub struct BasisCache {
    map: Mutex<BTreeMap<CacheKey, Arc<OrthonormalBasis>>>,
}

impl BasisCache {
    pub fn new() -> Self {
        BasisCache::default()
    }

    pub fn len(&self) -> usize {
        self.map.lock().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn insert(&self, ob: &OrderedBasis, onb: Arc<OrthonormalBasis>) {
        let key = (ob.kind(), ob.permutation().as_slice().to_vec());
        self.map.lock().expect("cache lock").insert(key, onb);
    }

    fn get(&self, ob: &OrderedBasis) -> Option<Arc<OrthonormalBasis>> {
        let key = (ob.kind(), ob.permutation().as_slice().to_vec());
        self.map.lock().expect("cache lock").get(&key).cloned()
    }
}

enum Source<'a> {
    Build {
        table: MonomialTable,
        record: Option<&'a BasisCache>,
    },
    Frozen(&'a BasisCache),
}

/// Runs index computations on one dataset, sharing monomial evaluations
/// across every input ordering.
pub struct Analyzer<'a> {
    ds: &'a Dataset,
    opts: AnalysisOptions,
    monomials: MonomialSet,
    source: Source<'a>,
}

impl<'a> Analyzer<'a> {
    pub fn new(ds: &'a Dataset, opts: AnalysisOptions) -> Result<Self, IndexError> {
        if opts.degree == 0 {
            return Err(IndexError::ZeroDegree);
        }
        let monomials = enumerate_monomials(ds.n_inputs(), opts.degree)?;
        if ds.n_samples() < monomials.len() {
            return Err(IndexError::Fit {
                context: "basis construction".into(),
                source: OrthoError::InsufficientSamples {
                    samples: ds.n_samples(),
                    terms: monomials.len(),
                },
            });
        }
        let table =
            MonomialTable::new(ds.inputs(), opts.degree).map_err(|source| IndexError::Fit {
                context: "monomial evaluation".into(),
                source,
            })?;
        Ok(Analyzer {
            ds,
            opts,
            monomials,
            source: Source::Build {
                table,
                record: None,
            },
        })
    }

    /// Stores every basis this analyzer builds in `cache`.
    pub fn recording(mut self, cache: &'a BasisCache) -> Self {
        if let Source::Build { record, .. } = &mut self.source {
            *record = Some(cache);
        }
        self
    }

    /// Analyzer that reuses the bases in `cache` (built on other data) and
    /// only re-projects the output of `ds` onto them.
    pub fn frozen(
        ds: &'a Dataset,
        opts: AnalysisOptions,
        cache: &'a BasisCache,
    ) -> Result<Self, IndexError> {
        if opts.degree == 0 {
            return Err(IndexError::ZeroDegree);
        }
        Ok(Analyzer {
            ds,
            opts,
            monomials: enumerate_monomials(ds.n_inputs(), opts.degree)?,
            source: Source::Frozen(cache),
        })
    }

    pub fn dataset(&self) -> &Dataset {
        self.ds
    }

    pub fn options(&self) -> &AnalysisOptions {
        &self.opts
    }

    pub fn n_inputs(&self) -> usize {
        self.ds.n_inputs()
    }

    fn check_input(&self, i: usize) -> Result<(), IndexError> {
        if i >= self.n_inputs() {
            return Err(IndexError::InputOutOfRange {
                index: i,
                n: self.n_inputs(),
            });
        }
        Ok(())
    }

    /// Orthogonalizes and fits an arbitrary ordered basis.
    pub fn fit_basis(&self, ob: &OrderedBasis) -> Result<Fitted, IndexError> {
        let context = || {
            format!(
                "{} partition, order {:?}",
                ob.kind().name(),
                ob.permutation().one_based()
            )
        };
        let onb =
            match &self.source {
                Source::Build { table, record } => {
                    let onb = modified_gram_schmidt_with(table, ob, &self.opts.ortho).map_err(
                        |source| IndexError::Fit {
                            context: context(),
                            source,
                        },
                    )?;
                    let onb = Arc::new(onb);
                    if let Some(cache) = record {
                        cache.insert(ob, Arc::clone(&onb));
                    }
                    onb
                }
                Source::Frozen(cache) => {
                    let stored = cache.get(ob).ok_or_else(|| IndexError::NotCached {
                        kind: ob.kind().name().to_string(),
                        order: ob.permutation().one_based(),
                    })?;
                    Arc::new(stored.reevaluate(self.ds.inputs()).map_err(|source| {
                        IndexError::Fit {
                            context: context(),
                            source,
                        }
                    })?)
                }
            };
        let model = fit(self.ds, onb)?;
        let denominator = match self.opts.denominator {
            Denominator::Sample => model.sample_variance(),
            Denominator::Pce => model.pce_variance(),
        };
        Ok(Fitted { model, denominator })
    }

    pub fn fit_partition(
        &self,
        kind: PartitionKind,
        order: &Permutation,
    ) -> Result<Fitted, IndexError> {
        self.fit_basis(&partition(kind, &self.monomials, order)?)
    }

    /// `(S̄, ST̄)` for input `i` from one fit.
    pub fn full_pair(&self, i: usize) -> Result<(f64, f64), IndexError> {
        self.check_input(i)?;
        let f = self.fit_partition(
            PartitionKind::Full,
            &Permutation::cyclic(self.n_inputs(), i),
        )?;
        Ok(full_pair_of(&f))
    }

    /// `(S^u, ST^u)` for input `i` from one fit.
    pub fn uncorrelated_pair(&self, i: usize) -> Result<(f64, f64), IndexError> {
        self.check_input(i)?;
        let f = self.fit_partition(
            PartitionKind::Uncorrelated,
            &Permutation::cyclic(self.n_inputs(), i),
        )?;
        Ok(full_pair_of(&f))
    }

    pub fn first_order_full(&self, i: usize) -> Result<f64, IndexError> {
        Ok(self.full_pair(i)?.0)
    }

    pub fn total_full(&self, i: usize) -> Result<f64, IndexError> {
        Ok(self.full_pair(i)?.1)
    }

    pub fn total_uncorrelated(&self, i: usize) -> Result<f64, IndexError> {
        Ok(self.uncorrelated_pair(i)?.1)
    }

    pub fn first_order_uncorrelated(&self, i: usize) -> Result<f64, IndexError> {
        Ok(self.uncorrelated_pair(i)?.0)
    }

    /// Total of the first input, then each later input's conditional total
    /// given all earlier ones, under the full partition in `order`.
    pub fn conditional_total_sweep(
        &self,
        order: &Permutation,
    ) -> Result<Vec<SweepEntry>, IndexError> {
        let f = self.fit_partition(PartitionKind::Full, order)?;
        Ok(sweep_of(&f, order))
    }

    /// Sum of the leading `d` conditional totals. The caller asserts the
    /// leading inputs are independent of, and do not interact with, the rest.
    pub fn group_total(&self, order: &Permutation, d: usize) -> Result<f64, IndexError> {
        if d == 0 || d > order.len() {
            return Err(IndexError::InvalidGroup(format!(
                "group size {d} for {} inputs",
                order.len()
            )));
        }
        let sweep = self.conditional_total_sweep(order)?;
        Ok(sweep[..d].iter().map(|e| e.value).sum())
    }

    /// Splits one sweep into consecutive segments of the given sizes and sums each.
    pub fn segmented_totals(
        &self,
        order: &Permutation,
        sizes: &[usize],
    ) -> Result<Vec<f64>, IndexError> {
        if sizes.iter().sum::<usize>() > order.len() || sizes.contains(&0) {
            return Err(IndexError::InvalidGroup(format!(
                "segment sizes {sizes:?} for {} inputs",
                order.len()
            )));
        }
        let sweep = self.conditional_total_sweep(order)?;
        let mut start = 0;
        Ok(sizes
            .iter()
            .map(|&s| {
                let v = sweep[start..start + s].iter().map(|e| e.value).sum();
                start += s;
                v
            })
            .collect())
    }

    pub fn order_based_sweep(&self) -> Result<OrderSweep, IndexError> {
        let f = self.fit_partition(
            PartitionKind::OrderBased,
            &Permutation::identity(self.n_inputs()),
        )?;
        Ok(order_sweep_of(
            &f,
            self.n_inputs().min(self.opts.degree as usize),
        ))
    }

    /// Coefficients of every term whose pivot has exactly `k` active inputs,
    /// largest magnitude first.
    pub fn interaction_coefficient_report(
        &self,
        k: usize,
    ) -> Result<Vec<CoefficientEntry>, IndexError> {
        let f = self.fit_partition(
            PartitionKind::OrderBased,
            &Permutation::identity(self.n_inputs()),
        )?;
        Ok(coefficients_of(&f, k, self.ds.input_names()))
    }

    /// Computes the requested families. `groups` lists dataset columns of
    /// each group for [`Family::Groups`].
    pub fn all_indices(
        &self,
        families: &BTreeSet<Family>,
        groups: &[Vec<usize>],
        screen_threshold: f64,
    ) -> Result<IndexReport, IndexError> {
        let n = self.n_inputs();
        let names = self.ds.input_names();
        let denom = self.opts.denominator;
        let mut entries = Vec::new();
        let mut warnings = Vec::new();
        let base = self.fit_partition(PartitionKind::Full, &Permutation::identity(n))?;
        if base.model.is_degenerate() {
            warnings.push("output is constant; every index is reported as 0".to_string());
        }

        let entry = |name: &str,
                     target: Vec<String>,
                     given: Vec<String>,
                     raw: f64,
                     kind: PartitionKind,
                     perm: &Permutation| IndexEntry {
            name: name.to_string(),
            target,
            given,
            value: clamp_unit(raw),
            raw_value: raw,
            partition: kind.name().to_string(),
            permutation: perm.one_based(),
            denominator: denom,
        };

        for (family, kind) in [
            (Family::Full, PartitionKind::Full),
            (Family::Uncorrelated, PartitionKind::Uncorrelated),
        ] {
            if !families.contains(&family) {
                continue;
            }
            let pairs: Vec<Result<(f64, f64), IndexError>> = (0..n)
                .into_par_iter()
                .map(|i| {
                    self.fit_partition(kind, &Permutation::cyclic(n, i))
                        .map(|f| full_pair_of(&f))
                })
                .collect();
            let (first, second) = match family {
                Family::Full => ("first_order_full", "alt_total_full"),
                _ => ("alt_first_order_uncorrelated", "total_uncorrelated"),
            };
            for (i, pair) in pairs.into_iter().enumerate() {
                let (a, b) = pair?;
                let perm = Permutation::cyclic(n, i);
                entries.push(entry(first, vec![names[i].clone()], vec![], a, kind, &perm));
                entries.push(entry(
                    second,
                    vec![names[i].clone()],
                    vec![],
                    b,
                    kind,
                    &perm,
                ));
            }
        }

        if families.contains(&Family::Conditional) {
            let perm = Permutation::identity(n);
            for (k, e) in sweep_of(&base, &perm).into_iter().enumerate() {
                let given = perm.as_slice()[..k]
                    .iter()
                    .map(|&c| names[c].clone())
                    .collect();
                entries.push(entry(
                    "conditional_total",
                    vec![names[e.input].clone()],
                    given,
                    e.value,
                    PartitionKind::Full,
                    &perm,
                ));
            }
        }

        if families.contains(&Family::Groups) {
            if groups.is_empty() {
                warnings.push("groups family requested but no groups were given".into());
            }
            validate_groups(groups, n)?;
            let totals: Vec<Result<f64, IndexError>> = groups
                .par_iter()
                .map(|g| self.group_total(&Permutation::leading(n, g)?, g.len()))
                .collect();
            for (g, total) in groups.iter().zip(totals) {
                let perm = Permutation::leading(n, g)?;
                entries.push(entry(
                    "group_total",
                    g.iter().map(|&c| names[c].clone()).collect(),
                    vec![],
                    total?,
                    PartitionKind::Full,
                    &perm,
                ));
            }
        }

        let mut order_sweep = None;
        let mut screening = None;
        let mut interaction_coefficients = Vec::new();
        if families.contains(&Family::Order) {
            let perm = Permutation::identity(n);
            let f = self.fit_partition(PartitionKind::OrderBased, &perm)?;
            let sweep = order_sweep_of(&f, n.min(self.opts.degree as usize));
            for s in &sweep.shares {
                entries.push(entry(
                    "order_conditional",
                    vec![format!("order {}", s.order)],
                    vec![],
                    s.value,
                    PartitionKind::OrderBased,
                    &perm,
                ));
            }
            let scr = screen_interactions(&sweep, screen_threshold);
            if let Some(w) = &scr.warning {
                warnings.push(w.clone());
            }
            if n >= 2 && self.opts.degree >= 2 {
                interaction_coefficients = coefficients_of(&f, 2, names);
            }
            order_sweep = Some(sweep);
            screening = Some(scr);
        }

        let m = &base.model;
        Ok(IndexReport {
            entries,
            diagnostics: Diagnostics {
                n_samples: self.ds.n_samples(),
                n_inputs: n,
                degree: self.opts.degree,
                basis_size: self.monomials.len(),
                r_squared: m.r_squared(),
                sample_variance: m.sample_variance(),
                pce_variance: m.pce_variance(),
                dropped_terms: m.basis().dropped().len(),
                warnings,
            },
            order_sweep,
            screening,
            interaction_coefficients,
        })
    }
}

fn validate_groups(groups: &[Vec<usize>], n: usize) -> Result<(), IndexError> {
    let mut seen = BTreeSet::new();
    for g in groups {
        if g.is_empty() {
            return Err(IndexError::InvalidGroup("empty group".into()));
        }
        for &c in g {
            if c >= n {
                return Err(IndexError::InputOutOfRange { index: c, n });
            }
            if !seen.insert(c) {
                return Err(IndexError::InvalidGroup(format!(
                    "input {} appears in more than one group",
                    c + 1
                )));
            }
        }
    }
    Ok(())
}

/// `(St_11 share, St_1 share)` of a full or uncorrelated fit.
fn full_pair_of(f: &Fitted) -> (f64, f64) {
    let first = f.share_of_roles(|r| matches!(r, BlockRole::PurePowers { .. }));
    let total = f.share_of_roles(|r| {
        matches!(
            r,
            BlockRole::PurePowers { .. } | BlockRole::Interactions { .. }
        )
    });
    (first, total)
}

fn sweep_of(f: &Fitted, order: &Permutation) -> Vec<SweepEntry> {
    (0..order.len())
        .map(|l| {
            let value = f.share_of_roles(|r| match *r {
                BlockRole::PurePowers { input } | BlockRole::Interactions { input } => input == l,
                BlockRole::Conditional { input } => input == l,
                _ => false,
            });
            SweepEntry {
                input: order.column(l),
                value,
            }
        })
        .collect()
}

fn order_sweep_of(f: &Fitted, k_max: usize) -> OrderSweep {
    let mut cumulative = 0.0;
    let shares = (1..=k_max)
        .map(|k| {
            let value = f.share_of_roles(
                |r| matches!(*r, BlockRole::Order { interactions, .. } if interactions == k),
            );
            cumulative += value;
            OrderShare {
                order: k,
                value,
                cumulative,
            }
        })
        .collect();
    OrderSweep {
        shares,
        total: cumulative,
        degenerate: f.model.is_degenerate(),
    }
}

fn coefficients_of(f: &Fitted, k: usize, names: &[String]) -> Vec<CoefficientEntry> {
    let onb = f.model.basis();
    let ob = onb.basis();
    let mut out: Vec<CoefficientEntry> = onb
        .terms()
        .iter()
        .zip(f.model.coefficients())
        .filter(|(t, _)| t.monomial.interaction_order() == k)
        .map(|(t, &c)| {
            let d = ob.dataset_exponents(&t.monomial);
            CoefficientEntry {
                label: d.label(names),
                exponents: d.exponents().to_vec(),
                coefficient: c,
            }
        })
        .collect();
    out.sort_by(|a, b| b.coefficient.abs().total_cmp(&a.coefficient.abs()));
    out
}

/// `S̄_{X_i}` on a dataset.
pub fn first_order_full(ds: &Dataset, opts: AnalysisOptions, i: usize) -> Result<f64, IndexError> {
    Analyzer::new(ds, opts)?.first_order_full(i)
}

/// `ST̄_{X_i}` on a dataset.
pub fn total_full(ds: &Dataset, opts: AnalysisOptions, i: usize) -> Result<f64, IndexError> {
    Analyzer::new(ds, opts)?.total_full(i)
}

/// `ST^u_{X_i}` on a dataset.
pub fn total_uncorrelated(
    ds: &Dataset,
    opts: AnalysisOptions,
    i: usize,
) -> Result<f64, IndexError> {
    Analyzer::new(ds, opts)?.total_uncorrelated(i)
}

/// `S^u_{X_i}` on a dataset.
pub fn first_order_uncorrelated(
    ds: &Dataset,
    opts: AnalysisOptions,
    i: usize,
) -> Result<f64, IndexError> {
    Analyzer::new(ds, opts)?.first_order_uncorrelated(i)
}
