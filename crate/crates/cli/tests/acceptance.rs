//! Acceptance criteria AC1 to AC7. Each test prints one `[PASS]` or `[FAIL]`
//! line, then asserts. Lines go straight to stdout so they show without
//! `--nocapture`.

use std::collections::BTreeSet;
use std::io::Write;
use std::process::Command;

use gsa_pce_cli::commands::{
    benchmark, BenchmarkOptions, ORDER_ANALYSIS_SAMPLES, ORDER_ANALYSIS_STREAM,
};
use gsa_pce_cli::report::Report;
use gsa_pce_core::basis::{enumerate_monomials, partition, PartitionKind, Permutation};
use gsa_pce_core::benchmarks::{
    analytic_example3_totals, generate_stream, BenchmarkSpec, Example, TABLE1_REFERENCE,
};
use gsa_pce_core::dataset::Dataset;
use gsa_pce_core::indices::{screen_interactions, AnalysisOptions, Analyzer, Family};
use gsa_pce_core::ortho::{modified_gram_schmidt, OrthoOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn verdict(id: &str, pass: bool, detail: &str) {
    let tag = if pass { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "[{tag}] {id} {detail}");
    assert!(pass, "{id} failed: {detail}");
}

fn row<'a>(r: &'a Report, table: usize, label: &str) -> &'a gsa_pce_cli::report::TableRow {
    r.tables[table]
        .rows
        .iter()
        .find(|x| x.label == label)
        .unwrap_or_else(|| panic!("row {label} missing"))
}

#[test]
fn ac1_table1_linear_gaussian() {
    let o = BenchmarkOptions {
        reps: 500,
        samples: 500,
        degree: 2,
        ..BenchmarkOptions::defaults(1)
    };
    let r = benchmark(&o).unwrap();
    assert_eq!(r.tables.len(), 3);
    let mut worst = 0.0f64;
    let mut misses = Vec::new();
    let mut cells = 0;
    for (t, (rho, s_bar, st_u)) in TABLE1_REFERENCE.iter().enumerate() {
        for i in 0..3 {
            for (label, want) in [
                (format!("first_order_full X{}", i + 1), s_bar[i]),
                (format!("total_uncorrelated X{}", i + 1), st_u[i]),
            ] {
                let got = row(&r, t, &label).estimate;
                let err = (got - want).abs();
                worst = worst.max(err);
                cells += 1;
                if err > 0.01 {
                    misses.push(format!("rho={rho:?} {label}: {got:.4} vs {want}"));
                }
            }
        }
    }
    verdict(
        "AC1",
        cells == 18 && misses.is_empty(),
        &format!("Table 1, 18 cells within 0.01 (cells {cells}, max error {worst:.4}) {misses:?}"),
    );
}

#[test]
fn ac2_table2_triangles() {
    let o = BenchmarkOptions {
        reps: 500,
        samples: 500,
        degree: 3,
        ..BenchmarkOptions::defaults(2)
    };
    let r = benchmark(&o).unwrap();
    let want = [
        ("first_order_full X1", 0.033),
        ("total_uncorrelated X2", 0.067),
        ("group_total X1,X2", 0.100),
        ("first_order_full X3", 0.233),
        ("total_uncorrelated X4", 0.666),
        ("group_total X3,X4", 0.900),
    ];
    let mut misses = Vec::new();
    let mut widest = 0.0f64;
    for (label, v) in want {
        let x = row(&r, 0, label);
        if (x.estimate - v).abs() > 0.01 {
            misses.push(format!("{label}: {:.4} vs {v}", x.estimate));
        }
        let w = x.ci_hi.unwrap() - x.ci_lo.unwrap();
        widest = widest.max(w);
        if w > 0.01 {
            misses.push(format!("{label}: CI width {w:.4}"));
        }
    }
    verdict(
        "AC2",
        misses.is_empty(),
        &format!(
            "Table 2, 6 cells within 0.01 and CI width <= 0.01 (widest {widest:.4}) {misses:?}"
        ),
    );
}

#[test]
fn ac3_table3_mixed() {
    let o = BenchmarkOptions {
        reps: 100,
        samples: 5000,
        degree: 2,
        ..BenchmarkOptions::defaults(3)
    };
    let r = benchmark(&o).unwrap();
    let want = [
        ("group_total X1,X2", 0.4020),
        ("group_total X3,X4", 0.4382),
        ("group_total X5,X6", 0.1598),
    ];
    let exact = analytic_example3_totals([0.4, 0.6, 1.0]);
    let mut misses = Vec::new();
    for (k, (label, v)) in want.into_iter().enumerate() {
        let x = row(&r, 0, label);
        if (x.estimate - v).abs() > 0.005 {
            misses.push(format!("{label}: {:.4} vs {v}", x.estimate));
        }
        if format!("{:.4}", exact[k]) != format!("{v:.4}") {
            misses.push(format!("oracle {label}: {:.6} vs {v}", exact[k]));
        }
    }
    verdict(
        "AC3",
        misses.is_empty(),
        &format!("Table 3, 3 group totals within 0.005, oracle to 4 decimals {misses:?}"),
    );
}

#[test]
fn ac4_order_screening() {
    let spec = BenchmarkSpec {
        example: Example::Mixed {
            theta: Example::MIXED_DEFAULT_THETA,
        },
        n_samples: ORDER_ANALYSIS_SAMPLES,
        seed: 42,
    };
    let ds = generate_stream(&spec, ORDER_ANALYSIS_STREAM).unwrap();
    assert_eq!(ds.n_samples(), 10_000);
    let a = Analyzer::new(&ds, AnalysisOptions::with_degree(3)).unwrap();
    let sweep = a.order_based_sweep().unwrap();
    let s12 = sweep.shares[0].value + sweep.shares[1].value;
    let d = screen_interactions(&sweep, 0.99).max_order;
    let coefs = a.interaction_coefficient_report(2).unwrap();
    let top: BTreeSet<&str> = coefs.iter().take(3).map(|c| c.label.as_str()).collect();
    let expected: BTreeSet<&str> = ["X1*X2", "X3*X4", "X5*X6"].into_iter().collect();
    verdict(
        "AC4",
        s12 >= 0.995 && d == 2 && top == expected,
        &format!("S1+S2|1 = {s12:.6} (>= 0.995), d = {d} (== 2), top-3 pivots {top:?}"),
    );
}

fn linear_data(rho: [f64; 3], n: usize, rep: u64) -> Dataset {
    let spec = BenchmarkSpec {
        example: Example::Linear { rho },
        n_samples: n,
        seed: 7,
    };
    generate_stream(&spec, rep).unwrap()
}

fn with_model(ds: &Dataset, f: impl Fn(&[f64]) -> f64) -> Dataset {
    let y = ds
        .inputs()
        .rows()
        .into_iter()
        .map(|r| f(&r.to_vec()))
        .collect();
    ds.with_output(y).unwrap()
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

#[test]
fn ac5_property_suite() {
    let nonlinear = |x: &[f64]| x[0] * x[1] + (2.0 * x[2]).sin() + x[0].powi(3);
    let families: BTreeSet<Family> = Family::ALL.into_iter().collect();
    let mut worst = [0.0f64; 5];
    let mut r2_min = 1.0f64;
    for rep in 0..12u64 {
        let rho = [[0.5, 0.8, 0.0], [-0.5, 0.2, -0.7], [0.3, -0.2, 0.1]][rep as usize % 3];
        let p = 1 + (rep % 3) as u32;
        let ds = with_model(&linear_data(rho, 300, rep), nonlinear);
        let opts = AnalysisOptions::with_degree(p);
        let ms = enumerate_monomials(3, p).unwrap();

        // Gram identity.
        let ob = partition(
            PartitionKind::Full,
            &ms,
            &Permutation::cyclic(3, rep as usize % 3),
        )
        .unwrap();
        let g = modified_gram_schmidt(&ds, &ob, &OrthoOptions::default())
            .unwrap()
            .gram();
        for ((i, j), v) in g.indexed_iter() {
            let e = if i == j { 1.0 } else { 0.0 };
            worst[0] = worst[0].max((v - e).abs());
        }

        // In-span recovery.
        let poly = |x: &[f64]| match p {
            1 => 1.0 + 2.0 * x[0] - x[2],
            2 => 0.5 - x[0] * x[1] + 3.0 * x[2] * x[2],
            _ => x[0] * x[1] * x[2] - x[1].powi(3) + x[0],
        };
        let span = with_model(&ds, poly);
        let r2 = Analyzer::new(&span, opts)
            .unwrap()
            .fit_partition(PartitionKind::Full, &Permutation::identity(3))
            .unwrap()
            .model
            .r_squared();
        r2_min = r2_min.min(r2);

        // Conditional-total budget.
        let a = Analyzer::new(&ds, opts).unwrap();
        let perm = Permutation::cyclic(3, (rep as usize + 1) % 3);
        let sweep: f64 = a
            .conditional_total_sweep(&perm)
            .unwrap()
            .iter()
            .map(|e| e.value)
            .sum();
        let f = a.fit_partition(PartitionKind::Full, &perm).unwrap();
        worst[1] = worst[1].max((sweep - f.model.r_squared()).abs());

        // Within-block shuffle.
        for kind in [
            PartitionKind::Full,
            PartitionKind::Uncorrelated,
            PartitionKind::OrderBased,
        ] {
            let ob = partition(kind, &ms, &perm).unwrap();
            let mut shuffled = ob.clone();
            for members in shuffled.blocks_mut() {
                members.reverse();
                if members.len() > 2 {
                    members.swap(0, 1);
                }
            }
            let x = a.fit_basis(&ob).unwrap().model.block_variances();
            let y = a.fit_basis(&shuffled).unwrap().model.block_variances();
            for (u, v) in x.per_block.iter().zip(&y.per_block) {
                worst[2] = worst[2].max((u.contribution - v.contribution).abs());
            }
        }

        // Positive scaling of an input, then affine map of the output and inputs.
        let base = a.all_indices(&families, &[vec![1, 2]], 0.99).unwrap();
        let vals = |r: &gsa_pce_core::IndexReport| {
            r.entries.iter().map(|e| e.raw_value).collect::<Vec<_>>()
        };
        let scaled = ds.map_input_column(rep as usize % 3, |x| 3.5 * x).unwrap();
        let rs = Analyzer::new(&scaled, opts)
            .unwrap()
            .all_indices(&families, &[vec![1, 2]], 0.99)
            .unwrap();
        worst[3] = worst[3].max(max_abs_diff(&vals(&base), &vals(&rs)));

        let mut moved = ds.clone();
        for c in 0..3 {
            moved = moved.map_input_column(c, |x| -2.0 * x + 1.5).unwrap();
        }
        let moved = moved
            .with_output(ds.output().iter().map(|y| 4.0 * y - 7.0).collect())
            .unwrap();
        let am = Analyzer::new(&moved, opts).unwrap();
        for i in 0..3 {
            worst[4] = worst[4]
                .max((a.first_order_full(i).unwrap() - am.first_order_full(i).unwrap()).abs());
        }
    }
    let pass = worst[0] <= 1e-8
        && r2_min >= 1.0 - 1e-10
        && worst[1] <= 1e-10
        && worst[2] <= 1e-8
        && worst[3] <= 1e-8
        && worst[4] <= 1e-8;
    verdict(
        "AC5",
        pass,
        &format!(
            "gram {:.1e}, min r2 1-{:.1e}, budget {:.1e}, shuffle {:.1e}, scaling {:.1e}, affine S-bar {:.1e}",
            worst[0],
            1.0 - r2_min,
            worst[1],
            worst[2],
            worst[3],
            worst[4]
        ),
    );
}

/// Double-loop Monte Carlo over independent standard normal inputs: the
/// outer loop draws `X_u`, the inner loop the rest. Returns
/// `(Var(E(Y | X_u)), E(Var(Y | X_u)))`, each divided by `var_y`.
fn double_loop(
    f: &dyn Fn(&[f64]) -> f64,
    n: usize,
    u: &[usize],
    outer: usize,
    inner: usize,
    seed: u64,
    var_y: f64,
) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = vec![0.0; n];
    let mut means = Vec::with_capacity(outer);
    let mut within = 0.0;
    for _ in 0..outer {
        for &c in u {
            x[c] = rng.sample(StandardNormal);
        }
        let mut ys = Vec::with_capacity(inner);
        for _ in 0..inner {
            for c in (0..n).filter(|c| !u.contains(c)) {
                x[c] = rng.sample(StandardNormal);
            }
            ys.push(f(&x));
        }
        let m = ys.iter().sum::<f64>() / inner as f64;
        within += ys.iter().map(|y| (y - m).powi(2)).sum::<f64>() / (inner - 1) as f64;
        means.push(m);
    }
    let expected_within = within / outer as f64;
    // The spread of inner means overstates Var(E(Y|X_u)) by E(Var(Y|X_u)) / inner.
    let between = sample_var(&means) - expected_within / inner as f64;
    (between / var_y, expected_within / var_y)
}

fn sample_var(v: &[f64]) -> f64 {
    let m = v.iter().sum::<f64>() / v.len() as f64;
    v.iter().map(|y| (y - m).powi(2)).sum::<f64>() / (v.len() - 1) as f64
}

/// Plain Monte Carlo `Var(Y)` from iid standard normal inputs.
fn plain_var(f: &dyn Fn(&[f64]) -> f64, n: usize, draws: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ys: Vec<f64> = (0..draws)
        .map(|_| {
            let x: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
            f(&x)
        })
        .collect();
    sample_var(&ys)
}

#[test]
fn ac6_double_loop_oracle() {
    let models: [(&str, Box<dyn Fn(&[f64]) -> f64>); 2] = [
        ("X1+X2^2", Box::new(|x: &[f64]| x[0] + x[1] * x[1])),
        ("X1*X2", Box::new(|x: &[f64]| x[0] * x[1])),
    ];
    let mut worst = 0.0f64;
    let mut misses = Vec::new();
    for (m, (name, f)) in models.iter().enumerate() {
        let ds = with_model(&linear_data([0.0, 0.0, 0.0], 5000, 100 + m as u64), f);
        let a = Analyzer::new(&ds, AnalysisOptions::with_degree(2)).unwrap();
        let var_y = plain_var(f.as_ref(), 3, 2_000_000, 9000 + m as u64);
        for i in 0..3 {
            let (first, total) = a.full_pair(i).unwrap();
            let others: Vec<usize> = (0..3).filter(|&c| c != i).collect();
            let seed = 1000 * m as u64 + i as u64;
            let oracle_first = double_loop(f.as_ref(), 3, &[i], 200_000, 20, seed, var_y).0;
            let oracle_total =
                double_loop(f.as_ref(), 3, &others, 200_000, 20, seed + 500, var_y).1;
            for (kind, got, want) in [
                ("first", first, oracle_first),
                ("total", total, oracle_total),
            ] {
                let err = (got - want).abs();
                worst = worst.max(err);
                if err > 0.02 {
                    misses.push(format!("{name} X{} {kind}: {got:.4} vs {want:.4}", i + 1));
                }
            }
        }
    }
    verdict(
        "AC6",
        misses.is_empty(),
        &format!("first-order and total vs double-loop oracle within 0.02 (max error {worst:.4}) {misses:?}"),
    );
}

fn run_benchmark(args: &[&str], threads: Option<&str>) -> Vec<u8> {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_gsa-pce"));
    cmd.arg("benchmark")
        .args(args)
        .env_remove("GSA_PCE_THREADS");
    if let Some(t) = threads {
        cmd.env("GSA_PCE_THREADS", t);
    }
    let out = cmd.output().unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    out.stdout
}

#[test]
fn ac7_determinism() {
    let mut misses = Vec::new();
    for args in [
        &["--example", "1", "--reps", "40", "--bootstrap", "500"][..],
        &["--example", "2", "--reps", "20", "--bootstrap", "500"][..],
        &[
            "--example",
            "3",
            "--reps",
            "10",
            "--samples",
            "1000",
            "--bootstrap",
            "500",
        ][..],
    ] {
        let a = run_benchmark(args, None);
        let b = run_benchmark(args, None);
        let c = run_benchmark(args, Some("1"));
        if a != b || a != c || a.is_empty() {
            misses.push(args.join(" "));
        }
    }
    verdict(
        "AC7",
        misses.is_empty(),
        &format!("byte-identical benchmark reports across runs and GSA_PCE_THREADS=1 {misses:?}"),
    );
}
