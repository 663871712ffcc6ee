//! Projection of the output onto an orthonormal basis.

use std::collections::BTreeMap;
use std::sync::Arc;

use ndarray::{Array1, ArrayView1, ArrayView2};
use serde::Serialize;
use thiserror::Error;

use crate::basis::BlockRole;
use crate::dataset::Dataset;
use crate::ortho::{evaluate_basis, OrthoError, OrthonormalBasis};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PceError {
    #[error("basis was built on {basis} samples but the dataset has {data}")]
    SampleMismatch { basis: usize, data: usize },
    #[error(transparent)]
    Ortho(#[from] OrthoError),
}

/// Output variances at or below this fraction of `max(1, mean²)` count as constant.
const DEGENERATE_RELATIVE_VARIANCE: f64 = 1e-28;

/// A fitted expansion `Y ≈ Σ θ_t ψ_t`.
#[derive(Debug, Clone)]
pub struct PceModel {
    coefficients: Vec<f64>,
    basis: Arc<OrthonormalBasis>,
    sample_mean: f64,
    sample_variance: f64,
    r_squared: f64,
    degenerate: bool,
}

/// Variance carried by one block of the ordered basis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockShare {
    pub label: String,
    pub contribution: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockVariance {
    pub per_block: Vec<BlockShare>,
}

impl BlockVariance {
    pub fn total(&self) -> f64 {
        self.per_block.iter().map(|b| b.contribution).sum()
    }
}

/// `θ_t = ⟨Y, ψ_t⟩` under the empirical measure.
pub fn fit(ds: &Dataset, onb: impl Into<Arc<OrthonormalBasis>>) -> Result<PceModel, PceError> {
    let onb = onb.into();
    if onb.n_samples() != ds.n_samples() {
        return Err(PceError::SampleMismatch {
            basis: onb.n_samples(),
            data: ds.n_samples(),
        });
    }
    let y = ds.output();
    let n = y.len() as f64;
    let coefficients: Vec<f64> = (0..onb.n_terms())
        .map(|t| {
            let psi = onb.psi(t);
            let psi = psi.as_slice().expect("contiguous basis rows");
            psi.iter().zip(y).map(|(a, b)| a * b).sum::<f64>() / n
        })
        .collect();
    let (sample_mean, sample_variance) = ds.output_moments();
    let degenerate = sample_variance <= DEGENERATE_RELATIVE_VARIANCE * sample_mean.powi(2).max(1.0);
    let mut model = PceModel {
        coefficients,
        basis: onb,
        sample_mean,
        sample_variance,
        r_squared: 1.0,
        degenerate,
    };
    if !degenerate {
        model.r_squared = model.pce_variance() / sample_variance;
    }
    Ok(model)
}

impl PceModel {
    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn basis(&self) -> &OrthonormalBasis {
        &self.basis
    }

    pub fn sample_mean(&self) -> f64 {
        self.sample_mean
    }

    /// Population variance of the training output (`1/N`).
    pub fn sample_variance(&self) -> f64 {
        self.sample_variance
    }

    /// `Σθ²` over non-constant terms divided by the sample variance; 1 for constant output.
    pub fn r_squared(&self) -> f64 {
        self.r_squared
    }

    /// True when the training output is constant.
    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    fn is_constant_term(&self, t: usize) -> bool {
        self.basis.terms()[t].monomial.is_constant()
    }

    /// `Σ θ_t²` over every non-constant term.
    pub fn pce_variance(&self) -> f64 {
        self.coefficients
            .iter()
            .enumerate()
            .filter(|(t, _)| !self.is_constant_term(*t))
            .map(|(_, c)| c * c)
            .sum()
    }

    /// Mean `θ_0` and variance `Σ_{t≥1} θ_t²`.
    pub fn moments(&self) -> (f64, f64) {
        let mean = self
            .coefficients
            .iter()
            .enumerate()
            .filter(|(t, _)| self.is_constant_term(*t))
            .map(|(_, c)| *c)
            .sum();
        (mean, self.pce_variance())
    }

    /// `Σ θ_t²` for each block; the constant block contributes nothing.
    pub fn block_variances(&self) -> BlockVariance {
        let blocks = self.basis.basis().blocks();
        let mut sums = vec![0.0; blocks.len()];
        for (t, term) in self.basis.terms().iter().enumerate() {
            if !term.monomial.is_constant() {
                sums[term.block] += self.coefficients[t].powi(2);
            }
        }
        BlockVariance {
            per_block: blocks
                .iter()
                .zip(sums)
                .map(|(b, contribution)| BlockShare {
                    label: b.label.clone(),
                    contribution: if b.role == BlockRole::Constant {
                        0.0
                    } else {
                        contribution
                    },
                })
                .collect(),
        }
    }

    /// Sum of `θ_t²` over the blocks selected by `pick`.
    pub fn block_sum(&self, pick: impl Fn(usize) -> bool) -> f64 {
        self.basis
            .terms()
            .iter()
            .zip(&self.coefficients)
            .filter(|(term, _)| !term.monomial.is_constant() && pick(term.block))
            .map(|(_, c)| c * c)
            .sum()
    }

    /// Surrogate predictions at new input rows.
    pub fn predict(&self, new_inputs: ArrayView2<'_, f64>) -> Result<Array1<f64>, PceError> {
        let psi = evaluate_basis(&self.basis, new_inputs)?;
        Ok(psi.dot(&ArrayView1::from(&self.coefficients)))
    }

    /// Training-set residual `Y - Σ θ_t ψ_t`.
    pub fn residuals(&self, ds: &Dataset) -> Array1<f64> {
        let fitted = self
            .basis
            .evaluations()
            .dot(&ArrayView1::from(&self.coefficients));
        Array1::from(ds.output().to_vec()) - fitted
    }

    /// Normalized `θ²` grouped by the dataset-column support of each pivot
    /// monomial. Empty when the output is constant.
    pub fn group_by_support(&self) -> BTreeMap<Vec<usize>, f64> {
        let mut out = BTreeMap::new();
        if self.degenerate {
            return out;
        }
        let ob = self.basis.basis();
        for (term, c) in self.basis.terms().iter().zip(&self.coefficients) {
            if term.monomial.is_constant() {
                continue;
            }
            let support = ob.dataset_exponents(&term.monomial).support();
            *out.entry(support).or_insert(0.0) += c * c / self.sample_variance;
        }
        out
    }
}
