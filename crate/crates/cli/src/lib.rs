//! Command-line front end: `gsa-pce analyze | benchmark | plot`.
//!
//! Exit codes: 0 success, 2 usage or configuration error, 3 data or IO
//! error (including too few samples for the basis), 4 numerical failure.

pub mod commands;
pub mod config;
pub mod plot;
pub mod report;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{value_parser, Arg, ArgMatches, Command};
use gsa_pce_core::indices::Denominator;

use crate::commands::{BenchmarkOptions, CliError};
use crate::config::{parse_denominator, AnalysisConfig, KEYS};
use crate::plot::PlotKind;

pub const THREADS_ENV: &str = "GSA_PCE_THREADS";

fn cli() -> Command {
    let mut analyze = Command::new("analyze")
        .about("Sensitivity indices for a CSV dataset")
        .arg(
            Arg::new("config")
                .long("config")
                .value_name("FILE")
                .help("key = value configuration file"),
        );
    for key in KEYS {
        analyze = analyze.arg(Arg::new(key).long(key).value_name("VALUE"));
    }
    let triple = |name: &'static str| {
        Arg::new(name)
            .long(name)
            .value_name("A,B,C")
            .help("three comma-separated numbers")
    };
    let benchmark = Command::new("benchmark")
        .about("Replicated study on a built-in example")
        .arg(
            Arg::new("example")
                .long("example")
                .required(true)
                .value_parser(value_parser!(u8).range(1..=3)),
        )
        .arg(triple("rho"))
        .arg(triple("theta"))
        .arg(
            Arg::new("reps")
                .long("reps")
                .value_parser(value_parser!(usize)),
        )
        .arg(
            Arg::new("samples")
                .long("samples")
                .value_parser(value_parser!(usize)),
        )
        .arg(
            Arg::new("degree")
                .long("degree")
                .value_parser(value_parser!(u32)),
        )
        .arg(
            Arg::new("seed")
                .long("seed")
                .value_parser(value_parser!(u64)),
        )
        .arg(
            Arg::new("bootstrap")
                .long("bootstrap")
                .value_parser(value_parser!(usize))
                .help("resamples of the replication mean; 0 disables intervals"),
        )
        .arg(
            Arg::new("denominator")
                .long("denominator")
                .value_name("sample|pce"),
        )
        .arg(Arg::new("out").long("out").value_name("FILE"));
    let plot = Command::new("plot")
        .about("SVG chart from a report")
        .arg(
            Arg::new("report")
                .long("report")
                .required(true)
                .value_name("FILE"),
        )
        .arg(
            Arg::new("kind")
                .long("kind")
                .required(true)
                .value_parser(["index_decomposition", "interaction_coefficients"]),
        )
        .arg(
            Arg::new("out")
                .long("out")
                .required(true)
                .value_name("FILE"),
        );
    Command::new("gsa-pce")
        .version(env!("CARGO_PKG_VERSION"))
        .about("Global sensitivity analysis with dependent inputs via polynomial chaos")
        .subcommand_required(true)
        .arg_required_else_help(true)
        .subcommand(analyze)
        .subcommand(benchmark)
        .subcommand(plot)
        .disable_help_subcommand(true)
}

fn parse_triple(name: &str, v: &str) -> Result<[f64; 3], CliError> {
    let parts: Vec<f64> = v
        .trim_matches(|c| c == '(' || c == ')')
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Usage(format!("--{name}: cannot parse '{v}'")))?;
    <[f64; 3]>::try_from(parts)
        .map_err(|_| CliError::Usage(format!("--{name}: expected three values, got '{v}'")))
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::Usage(format!(
            "{THREADS_ENV} must be a positive integer, found '{v}'"
        ))
    })?;
    // A second call in the same process keeps the first pool.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
    Ok(())
}

fn analyze_config(m: &ArgMatches) -> Result<AnalysisConfig, CliError> {
    let text = match m.get_one::<String>("config") {
        Some(p) => {
            Some(std::fs::read_to_string(p).map_err(|e| CliError::Data(format!("{p}: {e}")))?)
        }
        None => None,
    };
    let flags: Vec<(String, String)> = KEYS
        .iter()
        .filter_map(|k| m.get_one::<String>(k).map(|v| (k.to_string(), v.clone())))
        .collect();
    AnalysisConfig::from_sources(text.as_deref(), &flags).map_err(|e| {
        match (&text, m.get_one::<String>("config")) {
            (Some(_), Some(p)) => CliError::Usage(format!("{p}: {e}")),
            _ => CliError::Config(e),
        }
    })
}

fn benchmark_options(m: &ArgMatches) -> Result<(BenchmarkOptions, Option<PathBuf>), CliError> {
    let example = *m.get_one::<u8>("example").expect("required");
    let mut o = BenchmarkOptions::defaults(example);
    if let Some(v) = m.get_one::<String>("rho") {
        if example != 1 {
            return Err(CliError::Usage("--rho applies to example 1 only".into()));
        }
        o.rho = Some(parse_triple("rho", v)?);
    }
    if let Some(v) = m.get_one::<String>("theta") {
        if example != 3 {
            return Err(CliError::Usage("--theta applies to example 3 only".into()));
        }
        o.theta = parse_triple("theta", v)?;
    }
    if let Some(&v) = m.get_one::<usize>("reps") {
        o.reps = v;
    }
    if let Some(&v) = m.get_one::<usize>("samples") {
        o.samples = v;
    }
    if let Some(&v) = m.get_one::<u32>("degree") {
        o.degree = v;
    }
    if let Some(&v) = m.get_one::<u64>("seed") {
        o.seed = v;
    }
    if let Some(&v) = m.get_one::<usize>("bootstrap") {
        o.bootstrap = v;
    }
    if let Some(v) = m.get_one::<String>("denominator") {
        o.denominator = parse_denominator("denominator", v)?;
    } else {
        o.denominator = Denominator::Sample;
    }
    Ok((o, m.get_one::<String>("out").map(PathBuf::from)))
}

fn dispatch(m: &ArgMatches) -> Result<(), CliError> {
    configure_threads()?;
    match m.subcommand() {
        Some(("analyze", sub)) => commands::run_analyze(&analyze_config(sub)?),
        Some(("benchmark", sub)) => {
            let (o, out) = benchmark_options(sub)?;
            commands::run_benchmark(&o, out.as_deref())
        }
        Some(("plot", sub)) => {
            let kind = PlotKind::parse(sub.get_one::<String>("kind").expect("required"))
                .expect("validated by clap");
            commands::run_plot(
                &PathBuf::from(sub.get_one::<String>("report").expect("required")),
                kind,
                &PathBuf::from(sub.get_one::<String>("out").expect("required")),
            )
        }
        _ => Err(CliError::Usage("missing subcommand".into())),
    }
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = match cli().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(&matches) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
