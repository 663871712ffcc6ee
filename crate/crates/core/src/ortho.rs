//! Empirical inner product and modified Gram-Schmidt over an ordered basis.

use std::collections::HashMap;

use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis};
use serde::Serialize;
use thiserror::Error;

use crate::basis::{enumerate_monomials, MultiIndex, OrderedBasis};
use crate::dataset::Dataset;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OrthoError {
    #[error("{samples} samples cannot support {terms} basis terms; need at least {terms}")]
    InsufficientSamples { samples: usize, terms: usize },
    #[error("monomial {monomial} (position {position}) is numerically dependent on earlier terms (relative norm {relative_norm:.3e})")]
    LinearDependence {
        monomial: String,
        position: usize,
        relative_norm: f64,
    },
    #[error("non-finite value while evaluating {0}")]
    NonFinite(String),
    #[error("monomial {0} is not in the evaluation table")]
    MissingMonomial(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// `(1/N) Σ f_k g_k`, summed in index order.
pub fn empirical_inner(f: ArrayView1<'_, f64>, g: ArrayView1<'_, f64>) -> Result<f64, OrthoError> {
    if f.len() != g.len() {
        return Err(OrthoError::DimensionMismatch {
            expected: f.len(),
            got: g.len(),
        });
    }
    let s: f64 = f.iter().zip(g.iter()).map(|(a, b)| a * b).sum();
    Ok(s / f.len() as f64)
}

#[inline]
fn slice_dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
fn mean_dot(a: &[f64], b: &[f64]) -> f64 {
    slice_dot(a, b) / a.len() as f64
}

/// Evaluations of one monomial (dataset coordinates) at every row of `inputs`.
fn monomial_values(inputs: ArrayView2<'_, f64>, exps: &[u32]) -> Vec<f64> {
    let mut out = vec![1.0; inputs.nrows()];
    for (col, &e) in exps.iter().enumerate() {
        if e == 0 {
            continue;
        }
        let column = inputs.column(col);
        for (o, &x) in out.iter_mut().zip(column.iter()) {
            *o *= x.powi(e as i32);
        }
    }
    out
}

/// `N × (P+1)` matrix of monomial evaluations in the basis order, with the
/// basis permutation applied.
pub fn evaluate_monomials(ds: &Dataset, ob: &OrderedBasis) -> Result<Array2<f64>, OrthoError> {
    evaluate_monomials_at(ds.inputs(), ob)
}

/// As [`evaluate_monomials`] on a raw input matrix.
pub fn evaluate_monomials_at(
    inputs: ArrayView2<'_, f64>,
    ob: &OrderedBasis,
) -> Result<Array2<f64>, OrthoError> {
    if inputs.ncols() != ob.n_inputs() {
        return Err(OrthoError::DimensionMismatch {
            expected: ob.n_inputs(),
            got: inputs.ncols(),
        });
    }
    let mut out = Array2::zeros((inputs.nrows(), ob.len()));
    for (i, (_, m)) in ob.iter().enumerate() {
        let d = ob.dataset_exponents(m);
        let vals = monomial_values(inputs, d.exponents());
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(OrthoError::NonFinite(d.to_string()));
        }
        out.column_mut(i).assign(&Array1::from(vals));
    }
    Ok(out)
}

/// Precomputed monomial evaluations keyed by dataset-coordinate exponents.
/// The total-degree set is closed under input permutations, so one table
/// serves every ordering of the same inputs.
#[derive(Debug, Clone)]
pub struct MonomialTable {
    n_samples: usize,
    index: HashMap<MultiIndex, usize>,
    values: Array2<f64>,
}

impl MonomialTable {
    /// Evaluates every monomial of total degree `≤ degree`.
    pub fn new(inputs: ArrayView2<'_, f64>, degree: u32) -> Result<Self, OrthoError> {
        let n = inputs.ncols();
        let ms = enumerate_monomials(n, degree).map_err(|_| OrthoError::DimensionMismatch {
            expected: 1,
            got: n,
        })?;
        let mut values = Array2::zeros((ms.len(), inputs.nrows()));
        let mut index = HashMap::with_capacity(ms.len());
        for (k, m) in ms.members().iter().enumerate() {
            let vals = monomial_values(inputs, m.exponents());
            if vals.iter().any(|v| !v.is_finite()) {
                return Err(OrthoError::NonFinite(m.to_string()));
            }
            values.row_mut(k).assign(&Array1::from(vals));
            index.insert(m.clone(), k);
        }
        Ok(MonomialTable {
            n_samples: inputs.nrows(),
            index,
            values,
        })
    }

    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    fn get(&self, m: &MultiIndex) -> Option<&[f64]> {
        self.index
            .get(m)
            .map(|&k| self.values.row(k).to_slice().expect("rows are contiguous"))
    }
}

/// Orthogonalization switches.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrthoOptions {
    /// Run the projection loop a second time against the updated residual.
    pub reorthogonalize: bool,
    /// Skip numerically dependent monomials instead of failing.
    pub drop_dependent: bool,
    /// Threshold on `‖φ_i‖ / ‖e_i‖` below which a monomial counts as dependent.
    pub drop_tolerance: f64,
}

impl Default for OrthoOptions {
    fn default() -> Self {
        OrthoOptions {
            reorthogonalize: true,
            drop_dependent: false,
            drop_tolerance: 1e-10,
        }
    }
}

/// One orthonormal polynomial: its pivot monomial and where it sits in the basis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Term {
    pub block: usize,
    /// Position of the pivot in the full ordered basis.
    pub position: usize,
    /// Pivot monomial in analysis coordinates.
    pub monomial: MultiIndex,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DroppedTerm {
    pub block: usize,
    pub position: usize,
    pub monomial: MultiIndex,
    pub relative_norm: f64,
}

/// Polynomials orthonormal under the empirical measure of the construction data.
///
/// `transform` has one row per monomial of the ordered basis and one column
/// per kept term; column `t` holds the coefficients of `ψ_t` on the monomials
/// up to its pivot. Without drops it is square upper triangular.
#[derive(Debug, Clone)]
pub struct OrthonormalBasis {
    basis: OrderedBasis,
    terms: Vec<Term>,
    transform: Array2<f64>,
    norms: Vec<f64>,
    dropped: Vec<DroppedTerm>,
    /// Training evaluations, one row per term.
    values: Array2<f64>,
}

impl OrthonormalBasis {
    pub fn basis(&self) -> &OrderedBasis {
        &self.basis
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn transform(&self) -> ArrayView2<'_, f64> {
        self.transform.view()
    }

    /// Norm of each residual `φ_i` before normalization.
    pub fn norms(&self) -> &[f64] {
        &self.norms
    }

    pub fn dropped(&self) -> &[DroppedTerm] {
        &self.dropped
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn n_samples(&self) -> usize {
        self.values.ncols()
    }

    /// Training evaluations of `ψ_t`.
    pub fn psi(&self, t: usize) -> ArrayView1<'_, f64> {
        self.values.row(t)
    }

    /// `N × terms` matrix of training evaluations.
    pub fn evaluations(&self) -> ArrayView2<'_, f64> {
        self.values.t()
    }

    /// Same polynomials with their evaluations replaced by those at `inputs`.
    /// The result is generally not orthonormal under the new rows' empirical
    /// measure; projections on it are not least-squares fits.
    pub fn reevaluate(&self, inputs: ArrayView2<'_, f64>) -> Result<OrthonormalBasis, OrthoError> {
        let psi = evaluate_basis(self, inputs)?;
        Ok(OrthonormalBasis {
            values: psi.t().as_standard_layout().into_owned(),
            ..self.clone_without_values()
        })
    }

    fn clone_without_values(&self) -> OrthonormalBasis {
        OrthonormalBasis {
            basis: self.basis.clone(),
            terms: self.terms.clone(),
            transform: self.transform.clone(),
            norms: self.norms.clone(),
            dropped: self.dropped.clone(),
            values: Array2::zeros((0, 0)),
        }
    }

    /// Empirical Gram matrix of the training evaluations.
    pub fn gram(&self) -> Array2<f64> {
        let k = self.n_terms();
        let mut g = Array2::zeros((k, k));
        for i in 0..k {
            for j in 0..=i {
                let v = mean_dot(
                    self.values.row(i).to_slice().unwrap(),
                    self.values.row(j).to_slice().unwrap(),
                );
                g[[i, j]] = v;
                g[[j, i]] = v;
            }
        }
        g
    }
}

/// Builds the orthonormal basis by modified Gram-Schmidt.
pub fn modified_gram_schmidt(
    ds: &Dataset,
    ob: &OrderedBasis,
    opts: &OrthoOptions,
) -> Result<OrthonormalBasis, OrthoError> {
    let degree = ob.iter().map(|(_, m)| m.degree()).max().unwrap_or(0);
    let table = MonomialTable::new(ds.inputs(), degree)?;
    modified_gram_schmidt_with(&table, ob, opts)
}

/// As [`modified_gram_schmidt`], reading monomial evaluations from a shared table.
pub fn modified_gram_schmidt_with(
    table: &MonomialTable,
    ob: &OrderedBasis,
    opts: &OrthoOptions,
) -> Result<OrthonormalBasis, OrthoError> {
    let n_samples = table.n_samples();
    let m = ob.len();
    if n_samples < m {
        return Err(OrthoError::InsufficientSamples {
            samples: n_samples,
            terms: m,
        });
    }
    let passes = if opts.reorthogonalize { 2 } else { 1 };

    let mut values = Array2::<f64>::zeros((m, n_samples));
    let mut transform = Array2::<f64>::zeros((m, m));
    let mut terms = Vec::with_capacity(m);
    let mut norms = Vec::with_capacity(m);
    let mut dropped = Vec::new();
    let mut phi = vec![0.0; n_samples];
    let mut coef = vec![0.0; m];

    for (position, (block, mono)) in ob.iter().enumerate() {
        let dmono = ob.dataset_exponents(mono);
        let e = table
            .get(&dmono)
            .ok_or_else(|| OrthoError::MissingMonomial(dmono.to_string()))?;
        phi.copy_from_slice(e);
        coef.iter_mut().for_each(|c| *c = 0.0);
        coef[position] = 1.0;
        let k = terms.len();
        for _ in 0..passes {
            for t in 0..k {
                let psi_t = values.row(t);
                let psi_t = psi_t.to_slice().unwrap();
                let r = mean_dot(&phi, psi_t);
                for (p, &q) in phi.iter_mut().zip(psi_t) {
                    *p -= r * q;
                }
                for (c, &tc) in coef
                    .iter_mut()
                    .zip(transform.column(t).iter())
                    .take(position)
                {
                    *c -= r * tc;
                }
            }
        }
        let e_norm = mean_dot(e, e).sqrt();
        let norm = mean_dot(&phi, &phi).sqrt();
        if !norm.is_finite() || !e_norm.is_finite() {
            return Err(OrthoError::NonFinite(dmono.to_string()));
        }
        let relative = if e_norm > 0.0 { norm / e_norm } else { 0.0 };
        if relative < opts.drop_tolerance {
            if opts.drop_dependent {
                dropped.push(DroppedTerm {
                    block,
                    position,
                    monomial: mono.clone(),
                    relative_norm: relative,
                });
                continue;
            }
            return Err(OrthoError::LinearDependence {
                monomial: dmono.to_string(),
                position,
                relative_norm: relative,
            });
        }
        let inv = 1.0 / norm;
        for (dst, &p) in values.row_mut(k).iter_mut().zip(&phi) {
            *dst = p * inv;
        }
        for (dst, &c) in transform.column_mut(k).iter_mut().zip(&coef) {
            *dst = c * inv;
        }
        norms.push(norm);
        terms.push(Term {
            block,
            position,
            monomial: mono.clone(),
        });
    }

    let k = terms.len();
    let values = values.slice_axis(Axis(0), (0..k).into()).to_owned();
    let transform = transform.slice_axis(Axis(1), (0..k).into()).to_owned();
    Ok(OrthonormalBasis {
        basis: ob.clone(),
        terms,
        transform,
        norms,
        dropped,
        values,
    })
}

/// Evaluates every `ψ_t` at new input rows, `M × terms`.
pub fn evaluate_basis(
    onb: &OrthonormalBasis,
    new_inputs: ArrayView2<'_, f64>,
) -> Result<Array2<f64>, OrthoError> {
    if new_inputs.iter().any(|v| !v.is_finite()) {
        return Err(OrthoError::NonFinite("new inputs".into()));
    }
    let e = evaluate_monomials_at(new_inputs, &onb.basis)?;
    Ok(e.dot(&onb.transform))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{enumerate_monomials, partition_full, Block, BlockRole, Permutation};
    use ndarray::array;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_dataset(n: usize, rows: usize, seed: u64) -> Dataset {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = Array2::from_shape_fn((rows, n), |_| rng.random_range(-1.0..2.0));
        let y = vec![0.0; rows];
        Dataset::with_default_names(x, y).unwrap()
    }

    fn max_gram_error(onb: &OrthonormalBasis) -> f64 {
        let g = onb.gram();
        let k = g.nrows();
        let mut worst: f64 = 0.0;
        for i in 0..k {
            for j in 0..k {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g[[i, j]] - target).abs());
            }
        }
        worst
    }

    fn custom(n: usize, blocks: Vec<Vec<Vec<u32>>>) -> OrderedBasis {
        let blocks = blocks
            .into_iter()
            .enumerate()
            .map(|(i, ms)| Block {
                label: format!("B{i}"),
                role: BlockRole::Other,
                members: ms.into_iter().map(MultiIndex::new).collect(),
            })
            .collect();
        OrderedBasis::from_blocks(blocks, Permutation::identity(n), 3).unwrap()
    }

    #[test]
    fn inner_product_examples() {
        let ones = array![1.0, 1.0, 1.0];
        assert_eq!(empirical_inner(ones.view(), ones.view()).unwrap(), 1.0);
        let f = array![1.0, -1.0];
        let g = array![1.0, 1.0];
        assert_eq!(empirical_inner(f.view(), g.view()).unwrap(), 0.0);
        let h = array![-1.0, 0.0, 1.0];
        assert!((empirical_inner(h.view(), h.view()).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!(matches!(
            empirical_inner(f.view(), h.view()),
            Err(OrthoError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn monomial_evaluation_examples() {
        let ds = Dataset::with_default_names(array![[2.0]], vec![0.0]).unwrap();
        let ob = partition_full(&enumerate_monomials(1, 2).unwrap());
        assert_eq!(
            evaluate_monomials(&ds, &ob).unwrap(),
            array![[1.0, 2.0, 4.0]]
        );

        let ds = Dataset::with_default_names(array![[2.0, 3.0]], vec![0.0]).unwrap();
        let ob = custom(2, vec![vec![vec![0, 0]], vec![vec![1, 1]]]);
        assert_eq!(evaluate_monomials(&ds, &ob).unwrap(), array![[1.0, 6.0]]);
    }

    #[test]
    fn symmetric_three_point_example() {
        let ds = Dataset::with_default_names(array![[-1.0], [0.0], [1.0]], vec![0.0; 3]).unwrap();
        let ob = partition_full(&enumerate_monomials(1, 1).unwrap());
        let onb = modified_gram_schmidt(&ds, &ob, &OrthoOptions::default()).unwrap();
        let s = (1.5f64).sqrt();
        for (a, b) in onb.psi(0).iter().zip([1.0, 1.0, 1.0]) {
            assert!((a - b).abs() < 1e-14);
        }
        for (a, b) in onb.psi(1).iter().zip([-s, 0.0, s]) {
            assert!((a - b).abs() < 1e-14);
        }
        assert!((onb.norms()[1] - (2.0f64 / 3.0).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn duplicate_monomial_is_rejected_at_second_copy() {
        let ds = random_dataset(2, 50, 1);
        let ob = custom(
            2,
            vec![
                vec![vec![0, 0]],
                vec![vec![1, 0], vec![0, 1]],
                vec![vec![1, 0]],
            ],
        );
        match modified_gram_schmidt(&ds, &ob, &OrthoOptions::default()) {
            Err(OrthoError::LinearDependence {
                position, monomial, ..
            }) => {
                assert_eq!(position, 3);
                assert_eq!(monomial, "x1");
            }
            other => panic!("expected dependence error, got {other:?}"),
        }
        let opts = OrthoOptions {
            drop_dependent: true,
            ..OrthoOptions::default()
        };
        let onb = modified_gram_schmidt(&ds, &ob, &opts).unwrap();
        assert_eq!(onb.n_terms(), 3);
        assert_eq!(onb.dropped().len(), 1);
        assert_eq!(onb.dropped()[0].position, 3);
        assert!(max_gram_error(&onb) < 1e-8);
    }

    #[test]
    fn too_few_samples() {
        let ds = random_dataset(2, 5, 2);
        let ob = partition_full(&enumerate_monomials(2, 2).unwrap());
        assert_eq!(
            modified_gram_schmidt(&ds, &ob, &OrthoOptions::default()).unwrap_err(),
            OrthoError::InsufficientSamples {
                samples: 5,
                terms: 6
            }
        );
    }

    #[test]
    fn transform_is_upper_triangular_with_positive_diagonal() {
        let ds = random_dataset(3, 80, 3);
        let ob = partition_full(&enumerate_monomials(3, 3).unwrap());
        let onb = modified_gram_schmidt(&ds, &ob, &OrthoOptions::default()).unwrap();
        let t = onb.transform();
        for i in 0..t.nrows() {
            assert!(t[[i, i]] > 0.0);
            for j in 0..i {
                assert_eq!(t[[i, j]], 0.0);
            }
        }
        // E · T reproduces the stored evaluations.
        let e = evaluate_monomials(&ds, &ob).unwrap();
        let diff = &e.dot(&t) - &onb.evaluations();
        assert!(diff.iter().all(|d| d.abs() < 1e-8));
    }

    #[test]
    fn training_point_evaluation_matches_row() {
        let ds = random_dataset(2, 40, 4);
        let ob = partition_full(&enumerate_monomials(2, 3).unwrap());
        let onb = modified_gram_schmidt(&ds, &ob, &OrthoOptions::default()).unwrap();
        let row = ds.inputs().slice(ndarray::s![7..8, ..]).to_owned();
        let ev = evaluate_basis(&onb, row.view()).unwrap();
        for t in 0..onb.n_terms() {
            assert!((ev[[0, t]] - onb.psi(t)[7]).abs() < 1e-9);
            if t == 0 {
                assert!((ev[[0, 0]] - 1.0).abs() < 1e-12);
            }
        }
        let bad = array![[1.0, 2.0, 3.0]];
        assert!(evaluate_basis(&onb, bad.view()).is_err());
    }

    // Classical Gram-Schmidt: projections use the original vector.
    fn classical_gram_error(cols: &[Vec<f64>]) -> f64 {
        let mut q: Vec<Vec<f64>> = Vec::new();
        for e in cols {
            let mut v = e.clone();
            let rs: Vec<f64> = q.iter().map(|qk| mean_dot(e, qk)).collect();
            for (qk, r) in q.iter().zip(rs) {
                for (a, b) in v.iter_mut().zip(qk) {
                    *a -= r * b;
                }
            }
            let n = mean_dot(&v, &v).sqrt();
            q.push(v.iter().map(|a| a / n).collect());
        }
        let mut worst: f64 = 0.0;
        for i in 0..q.len() {
            for j in 0..q.len() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((mean_dot(&q[i], &q[j]) - target).abs());
            }
        }
        worst
    }

    #[test]
    fn modified_is_no_worse_than_classical_on_ill_conditioned_powers() {
        // Powers of a positive variable on [1, 2] form a Hilbert-like Gram matrix.
        let rows = 200;
        let x = Array2::from_shape_fn((rows, 1), |(k, _)| 1.0 + k as f64 / rows as f64);
        let ds = Dataset::with_default_names(x, vec![0.0; rows]).unwrap();
        let ob = partition_full(&enumerate_monomials(1, 9).unwrap());
        let opts = OrthoOptions {
            reorthogonalize: false,
            ..OrthoOptions::default()
        };
        let modified = max_gram_error(&modified_gram_schmidt(&ds, &ob, &opts).unwrap());
        let e = evaluate_monomials(&ds, &ob).unwrap();
        let cols: Vec<Vec<f64>> = e.columns().into_iter().map(|c| c.to_vec()).collect();
        let classical = classical_gram_error(&cols);
        assert!(
            modified <= classical,
            "modified {modified:e} vs classical {classical:e}"
        );
        let twice =
            max_gram_error(&modified_gram_schmidt(&ds, &ob, &OrthoOptions::default()).unwrap());
        assert!(twice < 1e-8);
    }

    #[test]
    fn shared_table_matches_direct_construction() {
        let ds = random_dataset(3, 60, 5);
        let ms = enumerate_monomials(3, 2).unwrap();
        let table = MonomialTable::new(ds.inputs(), 2).unwrap();
        for first in 0..3 {
            let ob = crate::basis::partition(
                crate::basis::PartitionKind::Full,
                &ms,
                &Permutation::cyclic(3, first),
            )
            .unwrap();
            let a = modified_gram_schmidt(&ds, &ob, &OrthoOptions::default()).unwrap();
            let b = modified_gram_schmidt_with(&table, &ob, &OrthoOptions::default()).unwrap();
            assert_eq!(a.evaluations(), b.evaluations());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn gram_is_identity(n in 1usize..4, p in 0u32..4, extra in 0usize..40, seed in any::<u64>()) {
            let ms = enumerate_monomials(n, p).unwrap();
            let rows = 2 * ms.len() + extra;
            let ds = random_dataset(n, rows, seed);
            let onb = modified_gram_schmidt(&ds, &partition_full(&ms), &OrthoOptions::default()).unwrap();
            prop_assert!(max_gram_error(&onb) <= 1e-8);
            prop_assert!(onb.psi(0).iter().all(|v| (v - 1.0).abs() < 1e-12));
        }

        #[test]
        fn prefix_spans_agree(n in 1usize..4, p in 1u32..4, seed in any::<u64>()) {
            let ms = enumerate_monomials(n, p).unwrap();
            let ds = random_dataset(n, 3 * ms.len(), seed);
            let ob = partition_full(&ms);
            let onb = modified_gram_schmidt(&ds, &ob, &OrthoOptions::default()).unwrap();
            let e = evaluate_monomials(&ds, &ob).unwrap();
            for m in 0..ob.len() {
                let em = e.column(m);
                let mut recon = Array1::<f64>::zeros(em.len());
                for t in 0..=m {
                    let c = empirical_inner(em, onb.psi(t)).unwrap();
                    recon.scaled_add(c, &onb.psi(t));
                }
                let err = (&recon - &em).mapv(|v| v * v).sum().sqrt();
                let scale = em.mapv(|v| v * v).sum().sqrt();
                prop_assert!(err <= 1e-8 * scale);
            }
        }

        #[test]
        fn scaling_an_input_only_rescales_terms(c in 0.1f64..10.0, col in 0usize..3, seed in any::<u64>()) {
            let ms = enumerate_monomials(3, 2).unwrap();
            let ds = random_dataset(3, 60, seed);
            let scaled = ds.map_input_column(col, |x| c * x).unwrap();
            let ob = partition_full(&ms);
            let a = modified_gram_schmidt(&ds, &ob, &OrthoOptions::default()).unwrap();
            let b = modified_gram_schmidt(&scaled, &ob, &OrthoOptions::default()).unwrap();
            // Cross Gram of the two bases is diagonal with unit-magnitude entries.
            for i in 0..a.n_terms() {
                for j in 0..b.n_terms() {
                    let g = empirical_inner(a.psi(i), b.psi(j)).unwrap();
                    let target = if i == j { 1.0 } else { 0.0 };
                    prop_assert!((g.abs() - target).abs() < 1e-8);
                }
            }
        }
    }
}
