mod envelope;
mod instance;
mod real;
mod solve;

use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use transopt_core::jeep::compare_methods;
use transopt_core::JeepParams;

use envelope::{raw, Envelope, Outcome, Status};
use real::Real;
use solve::{Algo, Settings};

#[derive(Parser)]
#[command(name = "transopt", version, about = "Tree routing, fuel, jeep and polygon path solvers")]
struct Cli {
    /// Default epsilon for real-valued searches.
    #[arg(long, global = true, env = "TRANSOPT_EPS", default_value_t = 1e-6)]
    eps: f64,
    /// Worker threads for batch files (one instance per JSON document).
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve every instance in a file ("-" reads stdin).
    Solve {
        file: PathBuf,
        /// Defaults to a sensible solver for the instance's problem.
        #[arg(long, value_enum)]
        algo: Option<Algo>,
    },
    /// Run the brute-force oracle for every instance.
    Oracle { file: PathBuf },
    /// Run solver and oracle and report whether they agree.
    Check {
        file: PathBuf,
        #[arg(long, value_enum)]
        algo: Option<Algo>,
    },
    /// Compare the exact and fast jeep evaluators on equal subdivisions.
    BenchJeep {
        #[arg(long, default_value_t = 10.0)]
        x: f64,
        #[arg(long, default_value_t = 1.0)]
        m: f64,
        #[arg(long, default_value_t = 1.0)]
        g: f64,
        #[arg(long, value_delimiter = ',', default_value = "1000,10000,100000,1000000")]
        k_list: Vec<u64>,
        /// Timing budget per method and k, in milliseconds.
        #[arg(long, default_value_t = 200)]
        budget_ms: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn main() -> ExitCode {
    // clap exits with 2 on usage errors, which here means "infeasible"
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    if !(cli.eps > 0.0 && cli.eps.is_finite()) {
        bail!("epsilon must be positive and finite, got {}", cli.eps);
    }
    let settings = Settings { eps: cli.eps };
    let jobs = cli.jobs.max(1);
    match cli.command {
        Command::Solve { file, algo } => batch(&file, jobs, |doc| run_solve(doc, algo, settings)),
        Command::Oracle { file } => batch(&file, jobs, |doc| run_oracle(doc, settings)),
        Command::Check { file, algo } => batch(&file, jobs, |doc| run_check(doc, algo, settings)),
        Command::BenchJeep { x, m, g, k_list, budget_ms, format } => {
            bench_jeep(x, JeepParams::new(m, g)?, &k_list, Duration::from_millis(budget_ms), format)
        }
    }
}

fn read_documents(path: &Path) -> Result<Vec<serde_json::Value>> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        io::stdin().read_to_string(&mut text)?;
    } else {
        text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    }
    let docs = serde_json::Deserializer::from_str(&text)
        .into_iter::<serde_json::Value>()
        .collect::<Result<Vec<_>, _>>()
        .with_context(|| format!("{} is not a JSON document or JSON lines", path.display()))?;
    if docs.is_empty() {
        bail!("{} holds no instances", path.display());
    }
    Ok(docs)
}

/// Runs `each` over every document, prints one envelope per line in input
/// order, and folds the statuses into an exit code.
fn batch(path: &Path, jobs: usize, each: impl Fn(serde_json::Value) -> Envelope + Sync) -> Result<u8> {
    let docs = read_documents(path)?;
    let envelopes: Vec<Envelope> = if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?;
        pool.install(|| docs.into_par_iter().map(&each).collect())
    } else {
        docs.into_iter().map(&each).collect()
    };
    let mut out = io::stdout().lock();
    for env in &envelopes {
        serde_json::to_writer(&mut out, env)?;
        writeln!(out)?;
    }
    Ok(exit_code(envelopes.iter().map(|e| e.status)))
}

/// Any error gives 1, otherwise any infeasible instance gives 2.
fn exit_code(statuses: impl Iterator<Item = Status>) -> u8 {
    statuses.map(Status::exit_code).fold(0, |acc, c| if acc == 1 || c == 1 { 1 } else { acc.max(c) })
}

/// The instance name, read before validation so errors can carry it too.
fn doc_name(doc: &serde_json::Value) -> Option<String> {
    doc.get("name").and_then(|n| n.as_str()).map(str::to_string)
}

fn with_seed(outcome: Outcome, file: &instance::InstanceFile) -> Outcome {
    match file.seed {
        Some(seed) => outcome.diag("seed", &seed),
        None => outcome,
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64() * 1e3)
}

fn run_solve(doc: serde_json::Value, algo: Option<Algo>, settings: Settings) -> Envelope {
    let name = doc_name(&doc);
    let file = match instance::parse(doc) {
        Ok(file) => file,
        Err(e) => return Envelope::error(name, algo.map_or("unknown", Algo::name), format!("{e:#}")),
    };
    let name = file.name.clone();
    let algo = algo.unwrap_or_else(|| Algo::default_for(&file.problem));
    let (result, ms) = timed(|| solve::solve(&file, algo, settings));
    match result {
        Ok(outcome) => Envelope::finish(name, algo.name(), ms, with_seed(outcome, &file)),
        Err(e) => Envelope::error(name, algo.name(), format!("{e:#}")),
    }
}

fn run_oracle(doc: serde_json::Value, settings: Settings) -> Envelope {
    let name = doc_name(&doc);
    let file = match instance::parse(doc) {
        Ok(file) => file,
        Err(e) => return Envelope::error(name, "oracle", format!("{e:#}")),
    };
    let name = file.name.clone();
    let (result, ms) = timed(|| solve::oracle(&file, None, settings));
    match result {
        Ok(reference) => Envelope::finish(name, reference.solver, ms, with_seed(reference.outcome, &file)),
        Err(e) => Envelope::error(name, "oracle", format!("{e:#}")),
    }
}

fn run_check(doc: serde_json::Value, algo: Option<Algo>, settings: Settings) -> Envelope {
    let name = doc_name(&doc);
    let file = match instance::parse(doc) {
        Ok(file) => file,
        Err(e) => return Envelope::error(name, algo.map_or("unknown", Algo::name), format!("{e:#}")),
    };
    let name = file.name.clone();
    let algo = algo.unwrap_or_else(|| Algo::default_for(&file.problem));
    let (result, ms) = timed(|| solve::check(&file, algo, settings));
    let checked = match result {
        Ok(checked) => checked,
        Err(e) => return Envelope::error(name, algo.name(), format!("{e:#}")),
    };
    let solver_value = checked.solved.objective.unwrap_or(f64::INFINITY);
    let reference = &checked.reference;
    let mut outcome = with_seed(checked.solved, &file)
        .diag("agreement", &checked.agreement)
        .diag("oracle", &reference.solver)
        .diag("oracle_objective", &Real(reference.value))
        .diag("solver_objective", &Real(solver_value))
        .diag("tolerance", &reference.tolerance);
    if !checked.agreement {
        let message = format!(
            "{} gives {}, {} gives {}",
            algo.name(),
            Real(solver_value),
            reference.solver,
            Real(reference.value)
        );
        outcome.message = Some(message);
        let mut env = Envelope::finish(name, algo.name(), ms, outcome);
        env.status = Status::Error;
        env.objective = None;
        return env;
    }
    Envelope::finish(name, algo.name(), ms, outcome)
}

#[derive(Serialize)]
struct BenchRow {
    k: u64,
    exact: Real,
    fast: Real,
    value_ratio: Real,
    points_touched: u64,
    exact_secs: Real,
    fast_secs: Real,
    time_ratio: Real,
}

fn bench_jeep(x: f64, params: JeepParams, k_list: &[u64], budget: Duration, format: Format) -> Result<u8> {
    let mut out = io::stdout().lock();
    if format == Format::Text {
        writeln!(
            out,
            "{:>10} {:>20} {:>20} {:>10} {:>10} {:>12} {:>12} {:>8}",
            "k", "f(0,d)", "g(0,d)", "g/f", "touched", "R1 (s)", "R2 (s)", "R2/R1"
        )?;
    }
    for &k in k_list {
        let c = compare_methods(x, k, &params, budget)?;
        match format {
            Format::Text => writeln!(
                out,
                "{:>10} {:>20} {:>20} {:>10.6} {:>10} {:>12.3e} {:>12.3e} {:>8.3}",
                c.k,
                Real(c.exact).to_string(),
                Real(c.fast).to_string(),
                c.value_ratio,
                c.points_touched,
                c.exact_secs,
                c.fast_secs,
                c.time_ratio
            )?,
            Format::Json => {
                let row = BenchRow {
                    k: c.k,
                    exact: Real(c.exact),
                    fast: Real(c.fast),
                    value_ratio: Real(c.value_ratio),
                    points_touched: c.points_touched,
                    exact_secs: Real(c.exact_secs),
                    fast_secs: Real(c.fast_secs),
                    time_ratio: Real(c.time_ratio),
                };
                writeln!(out, "{}", raw(&row).get())?;
            }
        }
    }
    Ok(0)
}
