//! Synthetic benchmark problems with known sensitivity indices.
//!
//! * Linear: `Y = X1 + X2 + X3` with standard normal inputs and a given
//!   correlation triple `(ρ12, ρ13, ρ23)`.
//! * Triangles: `Y = X1X2 + X3X4`, `(X1, X2)` uniform on `x1 + x2 ≤ 1`,
//!   `(X3, X4)` uniform on `x3 + x4 ≥ 1`.
//! * Mixed: `Y = X1X2 + X3X4 + X5X6`, `(X1..X4)` zero-mean unit normals with
//!   `corr(X3, X4) = 0.3`, `X5 = θ1 U + U'`, `X6 = θ2 U + θ3 U² + U''`.
//!
//! Randomness comes from ChaCha8 seeded with `seed`; replication `r` reads
//! stream `r` of that seed, so replications are independent and can be
//! generated in any order.

use std::collections::BTreeMap;

use ndarray::Array2;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;
use thiserror::Error;

use crate::dataset::{Dataset, DatasetError};

#[derive(Debug, Error)]
pub enum BenchmarkError {
    #[error("correlation matrix {0:?} is not positive definite")]
    NotPositiveDefinite(Vec<Vec<f64>>),
    #[error("sample count must be positive")]
    NoSamples,
    #[error(transparent)]
    Dataset(#[from] DatasetError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "example", rename_all = "lowercase")]
pub enum Example {
    Linear { rho: [f64; 3] },
    Triangles,
    Mixed { theta: [f64; 3] },
}

impl Example {
    pub const MIXED_DEFAULT_THETA: [f64; 3] = [0.4, 0.6, 1.0];

    pub fn id(&self) -> u8 {
        match self {
            Example::Linear { .. } => 1,
            Example::Triangles => 2,
            Example::Mixed { .. } => 3,
        }
    }

    pub fn n_inputs(&self) -> usize {
        match self {
            Example::Linear { .. } => 3,
            Example::Triangles => 4,
            Example::Mixed { .. } => 6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BenchmarkSpec {
    pub example: Example,
    pub n_samples: usize,
    pub seed: u64,
}

/// Cholesky factor (lower) of a symmetric matrix, or `None` if it is not
/// positive definite.
pub fn cholesky(a: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = a.len();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
            if i == j {
                let d = a[i][i] - s;
                if d <= 0.0 || !d.is_finite() {
                    return None;
                }
                l[i][i] = d.sqrt();
            } else {
                l[i][j] = (a[i][j] - s) / l[j][j];
            }
        }
    }
    Some(l)
}

fn correlation3(rho: [f64; 3]) -> Vec<Vec<f64>> {
    let [r12, r13, r23] = rho;
    vec![
        vec![1.0, r12, r13],
        vec![r12, 1.0, r23],
        vec![r13, r23, 1.0],
    ]
}

fn linear_factor(rho: [f64; 3]) -> Result<Vec<Vec<f64>>, BenchmarkError> {
    let c = correlation3(rho);
    cholesky(&c).ok_or(BenchmarkError::NotPositiveDefinite(c))
}

/// Uniform point on `{u, v ≥ 0, u + v ≤ 1}` by reflecting the unit square.
fn lower_triangle(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let u: f64 = rng.random();
    let v: f64 = rng.random();
    if u + v > 1.0 {
        (1.0 - u, 1.0 - v)
    } else {
        (u, v)
    }
}

/// Uniform point on `{u, v ≤ 1, u + v ≥ 1}`.
fn upper_triangle(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let (u, v) = lower_triangle(rng);
    (1.0 - u, 1.0 - v)
}

pub fn generate(spec: &BenchmarkSpec) -> Result<Dataset, BenchmarkError> {
    generate_stream(spec, 0)
}

/// Dataset for replication `rep`, drawn from stream `rep` of the spec seed.
pub fn generate_stream(spec: &BenchmarkSpec, rep: u64) -> Result<Dataset, BenchmarkError> {
    if spec.n_samples == 0 {
        return Err(BenchmarkError::NoSamples);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(rep);
    let n = spec.example.n_inputs();
    let rows = spec.n_samples;
    let mut x = Array2::<f64>::zeros((rows, n));
    let mut y = Vec::with_capacity(rows);
    match spec.example {
        Example::Linear { rho } => {
            let l = linear_factor(rho)?;
            for mut r in x.rows_mut() {
                let z: [f64; 3] = std::array::from_fn(|_| rng.sample(StandardNormal));
                for i in 0..3 {
                    r[i] = (0..=i).map(|k| l[i][k] * z[k]).sum();
                }
                y.push(r[0] + r[1] + r[2]);
            }
        }
        Example::Triangles => {
            for mut r in x.rows_mut() {
                let (a, b) = lower_triangle(&mut rng);
                let (c, d) = upper_triangle(&mut rng);
                r[0] = a;
                r[1] = b;
                r[2] = c;
                r[3] = d;
                y.push(a * b + c * d);
            }
        }
        Example::Mixed { theta } => {
            let rho = 0.3f64;
            let tail = (1.0 - rho * rho).sqrt();
            for mut r in x.rows_mut() {
                let z: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
                let u: [f64; 3] = std::array::from_fn(|_| rng.random());
                r[0] = z[0];
                r[1] = z[1];
                r[2] = z[2];
                r[3] = rho * z[2] + tail * z[3];
                r[4] = theta[0] * u[0] + u[1];
                r[5] = theta[1] * u[0] + theta[2] * u[0] * u[0] + u[2];
                y.push(r[0] * r[1] + r[2] * r[3] + r[4] * r[5]);
            }
        }
    }
    Ok(Dataset::with_default_names(x, y)?)
}

/// `Var(X1 X2)` for bivariate normal factors.
pub fn analytic_var_product_normal(mu1: f64, mu2: f64, sigma1: f64, sigma2: f64, rho: f64) -> f64 {
    let (s1, s2) = (sigma1 * sigma1, sigma2 * sigma2);
    mu1 * mu1 * s2
        + mu2 * mu2 * s1
        + s1 * s2
        + 2.0 * mu1 * mu2 * rho * sigma1 * sigma2
        + rho * rho * s1 * s2
}

/// Polynomial in independent `U(0,1)` variables, keyed by exponent vectors.
#[derive(Debug, Clone, Default)]
struct UniformPoly(BTreeMap<[u32; 3], f64>);

impl UniformPoly {
    fn term(c: f64, e: [u32; 3]) -> Self {
        UniformPoly([(e, c)].into_iter().collect())
    }

    fn add(mut self, other: &UniformPoly) -> Self {
        for (e, c) in &other.0 {
            *self.0.entry(*e).or_insert(0.0) += c;
        }
        self
    }

    fn mul(&self, other: &UniformPoly) -> Self {
        let mut out = UniformPoly::default();
        for (ea, ca) in &self.0 {
            for (eb, cb) in &other.0 {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                *out.0.entry(e).or_insert(0.0) += ca * cb;
            }
        }
        out
    }

    /// `E U^k = 1/(k+1)` per independent factor.
    fn expectation(&self) -> f64 {
        self.0
            .iter()
            .map(|(e, c)| c / e.iter().map(|&k| (k + 1) as f64).product::<f64>())
            .sum()
    }
}

/// `Var(X5 X6)` with `X5 = θ1 U1 + U2`, `X6 = θ2 U1 + θ3 U1² + U3`.
pub fn analytic_var_x5x6(theta: [f64; 3]) -> f64 {
    let x5 = UniformPoly::term(theta[0], [1, 0, 0]).add(&UniformPoly::term(1.0, [0, 1, 0]));
    let x6 = UniformPoly::term(theta[1], [1, 0, 0])
        .add(&UniformPoly::term(theta[2], [2, 0, 0]))
        .add(&UniformPoly::term(1.0, [0, 0, 1]));
    let prod = x5.mul(&x6);
    let m1 = prod.expectation();
    prod.mul(&prod).expectation() - m1 * m1
}

/// `(ST_{X1,X2}, ST_{X3,X4}, ST_{X5,X6})` for the mixed example. The three
/// pairs are mutually independent, so their product variances add.
pub fn analytic_example3_totals(theta: [f64; 3]) -> [f64; 3] {
    let v12 = analytic_var_product_normal(0.0, 0.0, 1.0, 1.0, 0.0);
    let v34 = analytic_var_product_normal(0.0, 0.0, 1.0, 1.0, 0.3);
    let v56 = analytic_var_x5x6(theta);
    let total = v12 + v34 + v56;
    [v12 / total, v34 / total, v56 / total]
}

/// Per-input `(S̄, ST^u)` for `Y = X1 + X2 + X3` with unit-variance normal inputs.
///
/// `S̄_i = Cov(X_i, Y)² / Var(Y)` and `ST^u_i = Var(X_i | X_{-i}) / Var(Y)`,
/// where the conditional variance of a Gaussian is `1 / (Σ⁻¹)_ii`.
pub fn analytic_example1_indices(rho: [f64; 3]) -> Result<[(f64, f64); 3], BenchmarkError> {
    let c = correlation3(rho);
    let l = linear_factor(rho)?;
    let var_y: f64 = c.iter().flatten().sum();
    // Diagonal of Σ⁻¹ = L⁻ᵀ L⁻¹ from the columns of L⁻¹.
    let mut linv = [[0.0; 3]; 3];
    for j in 0..3 {
        for i in j..3 {
            let rhs = if i == j { 1.0 } else { 0.0 };
            let s: f64 = (j..i).map(|k| l[i][k] * linv[k][j]).sum();
            linv[i][j] = (rhs - s) / l[i][i];
        }
    }
    Ok(std::array::from_fn(|i| {
        let cov_iy: f64 = c[i].iter().sum();
        let prec_ii: f64 = (0..3).map(|k| linv[k][i] * linv[k][i]).sum();
        (cov_iy * cov_iy / var_y, 1.0 / prec_ii / var_y)
    }))
}

/// Published reference values for the linear example: `(ρ, S̄, ST^u)`.
pub const TABLE1_REFERENCE: [([f64; 3], [f64; 3], [f64; 3]); 3] = [
    ([0.5, 0.8, 0.0], [0.94, 0.40, 0.58], [0.02, 0.05, 0.03]),
    ([-0.5, 0.2, -0.7], [0.49, 0.04, 0.25], [0.71, 0.37, 0.48]),
    (
        [-0.49, -0.49, -0.49],
        [0.01, 0.01, 0.01],
        [0.97, 0.97, 0.97],
    ),
];

/// Published reference values for the triangles example, in the order
/// `S̄_{X1}, ST^u_{X2}, ST_{X1,X2}, S̄_{X3}, ST^u_{X4}, ST_{X3,X4}`.
pub const TABLE2_REFERENCE: [(&str, f64); 6] = [
    ("first_order_full X1", 0.033),
    ("total_uncorrelated X2", 0.067),
    ("group_total X1,X2", 0.100),
    ("first_order_full X3", 0.233),
    ("total_uncorrelated X4", 0.666),
    ("group_total X3,X4", 0.900),
];

/// Published analytical group totals for the mixed example at the default θ.
pub const TABLE3_REFERENCE: [(&str, f64); 3] = [
    ("group_total X1,X2", 0.4020),
    ("group_total X3,X4", 0.4382),
    ("group_total X5,X6", 0.1598),
];

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(example: Example, n: usize, seed: u64) -> BenchmarkSpec {
        BenchmarkSpec {
            example,
            n_samples: n,
            seed,
        }
    }

    fn mean(v: impl Iterator<Item = f64>) -> f64 {
        let (s, c) = v.fold((0.0, 0usize), |(s, c), x| (s + x, c + 1));
        s / c as f64
    }

    fn corr(a: &[f64], b: &[f64]) -> f64 {
        let (ma, mb) = (mean(a.iter().copied()), mean(b.iter().copied()));
        let cov: f64 = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum();
        let va: f64 = a.iter().map(|x| (x - ma).powi(2)).sum();
        let vb: f64 = b.iter().map(|y| (y - mb).powi(2)).sum();
        cov / (va * vb).sqrt()
    }

    #[test]
    fn lemma_examples() {
        assert_eq!(analytic_var_product_normal(0.0, 0.0, 1.0, 1.0, 0.0), 1.0);
        assert!((analytic_var_product_normal(0.0, 0.0, 1.0, 1.0, 0.3) - 1.09).abs() < 1e-15);
    }

    #[test]
    fn lemma_matches_monte_carlo() {
        let (mu1, mu2, s1, s2, rho) = (1.0, 2.0, 0.5, 1.5, -0.4);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let draws: Vec<f64> = (0..1_000_000)
            .map(|_| {
                let a: f64 = rng.sample(StandardNormal);
                let b: f64 = rng.sample(StandardNormal);
                let x1 = mu1 + s1 * a;
                let x2 = mu2 + s2 * (rho * a + (1.0 - rho * rho).sqrt() * b);
                x1 * x2
            })
            .collect();
        let m = mean(draws.iter().copied());
        let v = mean(draws.iter().map(|d| (d - m).powi(2)));
        let exact = analytic_var_product_normal(mu1, mu2, s1, s2, rho);
        assert!((v / exact - 1.0).abs() < 0.01, "{v} vs {exact}");
    }

    #[test]
    fn var_x5x6_closed_forms() {
        // Independent uniforms: E(U²)² - E(U)⁴ = 1/9 - 1/16.
        assert!((analytic_var_x5x6([0.0, 0.0, 0.0]) - 7.0 / 144.0).abs() < 1e-15);
        // Exact rational at the default θ, expanded by hand.
        assert!((analytic_var_x5x6([0.4, 0.6, 1.0]) - 313057.0 / 787500.0).abs() < 1e-14);
    }

    #[test]
    fn example3_totals_match_reference_values() {
        let t = analytic_example3_totals(Example::MIXED_DEFAULT_THETA);
        for (got, (_, want)) in t.iter().zip(TABLE3_REFERENCE) {
            assert!((got - want).abs() < 5e-5, "{got} vs {want}");
        }
        let sum: f64 = t.iter().sum();
        assert!((sum - 1.0).abs() < 1e-14);
    }

    #[test]
    fn var_x5x6_matches_monte_carlo() {
        let ds = generate(&spec(
            Example::Mixed {
                theta: Example::MIXED_DEFAULT_THETA,
            },
            2_000_000,
            3,
        ))
        .unwrap();
        let p: Vec<f64> = ds
            .inputs()
            .rows()
            .into_iter()
            .map(|r| r[4] * r[5])
            .collect();
        let m = mean(p.iter().copied());
        let v = mean(p.iter().map(|x| (x - m).powi(2)));
        assert!((v / analytic_var_x5x6(Example::MIXED_DEFAULT_THETA) - 1.0).abs() < 0.005);
    }

    #[test]
    fn example1_analytic_matches_reference_table() {
        for (rho, s_bar, st_u) in TABLE1_REFERENCE {
            let a = analytic_example1_indices(rho).unwrap();
            for i in 0..3 {
                assert!(
                    (a[i].0 - s_bar[i]).abs() <= 0.006,
                    "{rho:?} S̄{i}: {}",
                    a[i].0
                );
                assert!(
                    (a[i].1 - st_u[i]).abs() <= 0.006,
                    "{rho:?} STu{i}: {}",
                    a[i].1
                );
            }
        }
        let ind = analytic_example1_indices([0.0; 3]).unwrap();
        assert!(ind
            .iter()
            .all(|(s, t)| (s - 1.0 / 3.0).abs() < 1e-15 && (t - 1.0 / 3.0).abs() < 1e-15));
        assert!(matches!(
            analytic_example1_indices([0.9, 0.9, -0.9]),
            Err(BenchmarkError::NotPositiveDefinite(_))
        ));
    }

    #[test]
    fn example2_reference_matches_exact_fractions() {
        // Exact values from the triangle densities: marginals 2(1-x) and 2x,
        // E(X2|X1) = (1-X1)/2, Var(X2|X1) = (1-X1)²/12 and their mirror images.
        let exact = [1.0 / 30.0, 1.0 / 15.0, 0.1, 7.0 / 30.0, 2.0 / 3.0, 0.9];
        for ((_, published), e) in TABLE2_REFERENCE.iter().zip(exact) {
            assert!((published - e).abs() < 1e-3);
        }
    }

    #[test]
    fn example2_monte_carlo_cross_check() {
        let ds = generate(&spec(Example::Triangles, 400_000, 5)).unwrap();
        let col = |c: usize| -> Vec<f64> { ds.input_column(c).to_vec() };
        let (x1, x3) = (col(0), col(2));
        let var = |v: &[f64]| {
            let m = mean(v.iter().copied());
            mean(v.iter().map(|x| (x - m).powi(2)))
        };
        let vy = var(ds.output());
        let e12: Vec<f64> = x1.iter().map(|x| x * (1.0 - x) / 2.0).collect();
        let s1 = var(&e12) / vy;
        let st2 = mean(x1.iter().map(|x| x * x * (1.0 - x) * (1.0 - x) / 12.0)) / vy;
        let e34: Vec<f64> = x3.iter().map(|x| x * (2.0 - x) / 2.0).collect();
        let s3 = var(&e34) / vy;
        let st4 = mean(x3.iter().map(|x| x.powi(4) / 12.0)) / vy;
        let p12: Vec<f64> = (0..ds.n_samples())
            .map(|k| x1[k] * ds.inputs()[[k, 1]])
            .collect();
        let st12 = var(&p12) / vy;
        let got = [s1, st2, st12, s3, st4, 1.0 - st12];
        for (g, (name, want)) in got.iter().zip(TABLE2_REFERENCE) {
            assert!((g - want).abs() < 0.01, "{name}: {g} vs {want}");
        }
    }

    #[test]
    fn triangles_respect_constraints_and_centroids() {
        let ds = generate(&spec(Example::Triangles, 10_000, 7)).unwrap();
        for r in ds.inputs().rows() {
            assert!(r[0] + r[1] <= 1.0 && r[2] + r[3] >= 1.0);
            assert!(r.iter().all(|v| (0.0..=1.0).contains(v)));
        }
        assert!((mean(ds.input_column(0).iter().copied()) - 1.0 / 3.0).abs() < 0.01);
        assert!((mean(ds.input_column(2).iter().copied()) - 2.0 / 3.0).abs() < 0.01);
    }

    #[test]
    fn triangle_marginal_passes_ks_test() {
        let ds = generate(&spec(Example::Triangles, 10_000, 8)).unwrap();
        let mut x: Vec<f64> = ds.input_column(0).to_vec();
        x.sort_by(f64::total_cmp);
        let n = x.len() as f64;
        // CDF of density 2(1-x) on [0, 1].
        let cdf = |t: f64| 1.0 - (1.0 - t).powi(2);
        let d = x
            .iter()
            .enumerate()
            .map(|(k, &t)| {
                let f = cdf(t);
                (f - k as f64 / n).abs().max(((k + 1) as f64 / n - f).abs())
            })
            .fold(0.0, f64::max);
        // Asymptotic 1% critical value.
        assert!(d < 1.628 / n.sqrt(), "KS statistic {d}");
    }

    #[test]
    fn linear_sample_correlation_converges() {
        let rho = [0.5, 0.8, 0.0];
        let ds = generate(&spec(Example::Linear { rho }, 10_000, 9)).unwrap();
        let c = correlation3(rho);
        for i in 0..3 {
            for j in 0..3 {
                let r = corr(&ds.input_column(i).to_vec(), &ds.input_column(j).to_vec());
                assert!((r - c[i][j]).abs() <= 0.05);
            }
        }
        assert!(matches!(
            generate(&spec(
                Example::Linear {
                    rho: [0.99, -0.99, 0.99]
                },
                10,
                0
            )),
            Err(BenchmarkError::NotPositiveDefinite(_))
        ));
    }

    #[test]
    fn mixed_x3_x4_correlation() {
        let ds = generate(&spec(
            Example::Mixed {
                theta: Example::MIXED_DEFAULT_THETA,
            },
            10_000,
            10,
        ))
        .unwrap();
        let r = corr(&ds.input_column(2).to_vec(), &ds.input_column(3).to_vec());
        assert!((r - 0.3).abs() < 0.03);
    }

    #[test]
    fn generation_is_reproducible_and_streams_differ() {
        let s = spec(Example::Triangles, 100, 11);
        assert_eq!(generate(&s).unwrap(), generate(&s).unwrap());
        assert_eq!(
            generate_stream(&s, 3).unwrap(),
            generate_stream(&s, 3).unwrap()
        );
        assert_ne!(
            generate_stream(&s, 3).unwrap(),
            generate_stream(&s, 4).unwrap()
        );
        assert!(generate(&spec(Example::Triangles, 0, 1)).is_err());
    }
}
