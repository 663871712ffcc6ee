//! Variance-based sensitivity indices for models with dependent inputs,
//! estimated from polynomial chaos expansions whose basis is orthonormalized
//! against the empirical measure of the observed samples.
//!
//! The pipeline is: enumerate monomials ([`basis`]), order them into labeled
//! blocks, orthonormalize with modified Gram-Schmidt ([`ortho`]), project the
//! output ([`pce`]), and read indices off block sums of squared coefficients
//! ([`indices`]).

pub mod basis;
pub mod benchmarks;
pub mod dataset;
pub mod indices;
pub mod ortho;
pub mod pce;
pub mod stats;

pub use basis::{
    basis_size, enumerate_monomials, partition, partition_full, partition_order_based,
    partition_uncorrelated, permute_inputs, BasisError, MultiIndex, OrderedBasis, PartitionKind,
    Permutation,
};
pub use dataset::{read_csv, CsvSelection, Dataset, DatasetError};
pub use indices::{AnalysisOptions, Analyzer, Denominator, Family, IndexError, IndexReport};
pub use ortho::{modified_gram_schmidt, OrthoError, OrthoOptions, OrthonormalBasis};
pub use pce::{fit, PceError, PceModel};
