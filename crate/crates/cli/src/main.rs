//! `eigenflow`: solve, sample start systems, benchmark step counts and run
//! the verification suite.
//!
//! Exit codes: 0 success, 1 input error, 2 partial solve failure,
//! 3 verification failure.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use eigenflow::experiments::{
    exp_step_scaling, reports_to_csv, reports_to_json, run_suite, Algorithm, ExperimentReport,
    SuiteConfig, Verdict,
};
use eigenflow::homotopy::{StepConstants, TrackConfig, DEFAULT_MAX_STEPS};
use eigenflow::linalg::io::parse_matrix;
use eigenflow::solvers::{
    algorithm_a, algorithm_b, complex_value, phi_n, sample_omega, vector_value,
};
use eigenflow::{Error, RngHandle, SolveOutput};

const EXIT_INPUT: u8 = 1;
const EXIT_PARTIAL: u8 = 2;
const EXIT_VERIFY: u8 = 3;

#[derive(Parser)]
#[command(name = "eigenflow", version, about = "Certified homotopy eigensolver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute eigenpairs of the matrix in --input.
    Solve(SolveArgs),
    /// Draw a random start system and print it.
    SampleStart(SampleArgs),
    /// Measure tracker steps on random Gaussian inputs.
    Bench(BenchArgs),
    /// Run the Monte Carlo verification suite.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct Common {
    /// Root seed; drawn from system entropy when omitted.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct Tracking {
    #[arg(long, alias = "algo", value_enum, default_value = "a")]
    algorithm: AlgorithmArg,
    #[arg(long, default_value_t = 1.0 / 16.0)]
    eps: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
    max_steps: u64,
}

impl Tracking {
    fn config(&self) -> anyhow::Result<TrackConfig> {
        Ok(TrackConfig {
            constants: StepConstants::new(self.eps)?,
            max_steps: self.max_steps,
            record_trace: false,
        })
    }
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    tracking: Tracking,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct BenchArgs {
    /// An order `4` or an inclusive range `2..6`.
    #[arg(long, default_value = "2..6")]
    n: String,
    #[arg(long, default_value_t = 10)]
    trials: u64,
    /// Also check steps against 1000·∫μ² (slow).
    #[arg(long)]
    check_bound: bool,
    #[command(flatten)]
    tracking: Tracking,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct VerifyArgs {
    /// Comma-separated experiment names.
    #[arg(long, value_delimiter = ',')]
    experiments: Option<Vec<String>>,
    /// Scalar-moment samples per experiment; eigensolver-backed experiments
    /// use a tenth of this.
    #[arg(long)]
    trials: Option<u64>,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    A,
    B,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

/// Failure carrying its exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

fn input_error(e: impl Into<anyhow::Error>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        error: e.into(),
    }
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        Failure {
            code: EXIT_INPUT,
            error,
        }
    }
}

fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let s = rand::random::<u64>();
        eprintln!("seed: {s}");
        s
    })
}

fn emit(common: &Common, text: &str) -> anyhow::Result<()> {
    match &common.output {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn is_input_error(e: &Error) -> bool {
    matches!(e, Error::Dimension(_) | Error::Domain(_) | Error::Parse(_))
}

fn solve_json(out: &SolveOutput, n: usize, algorithm: &str, seed: u64, eps: f64) -> Value {
    let pairs: Vec<Value> = out
        .pairs
        .iter()
        .map(|p| {
            json!({
                "lambda": complex_value(p.triple.lambda),
                "v": vector_value(&p.triple.v),
                "mu": p.mu,
                "steps": p.steps,
            })
        })
        .collect();
    let failures: Vec<Value> = out
        .failures
        .iter()
        .map(|f| json!({"path": f.path, "error": f.error.to_string()}))
        .collect();
    json!({
        "pairs": pairs,
        "failures": failures,
        "metadata": {
            "n": n,
            "algorithm": algorithm,
            "seed": seed,
            "eps": eps,
            "wall_ms": out.wall_time.as_secs_f64() * 1e3,
        },
    })
}

fn cmd_solve(args: &SolveArgs) -> Result<u8, Failure> {
    let text = fs::read_to_string(&args.input)
        .with_context(|| format!("cannot read {}", args.input.display()))
        .map_err(input_error)?;
    let a = parse_matrix(&text).map_err(input_error)?;
    let config = args.tracking.config()?;
    let seed = resolve_seed(args.common.seed);
    let (name, result) = match args.tracking.algorithm {
        AlgorithmArg::A => ("a", algorithm_a(&a, &config)),
        AlgorithmArg::B => ("b", algorithm_b(&a, RngHandle::new(seed), &config)),
    };
    let out = match result {
        Ok(out) => out,
        Err(e) if is_input_error(&e) => return Err(input_error(e)),
        Err(e) => {
            return Err(Failure {
                code: EXIT_PARTIAL,
                error: e.into(),
            })
        }
    };
    let body = match args.common.format.unwrap_or(Format::Json) {
        Format::Json => pretty(&solve_json(&out, a.rows(), name, seed, args.tracking.eps)),
        Format::Csv => {
            let mut s = String::from("lambda_re,lambda_im,mu,steps\n");
            for p in &out.pairs {
                s.push_str(&format!(
                    "{},{},{},{}\n",
                    p.triple.lambda.re, p.triple.lambda.im, p.mu, p.steps
                ));
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for p in &out.pairs {
                s.push_str(&format!(
                    "lambda = {:+.15e} {:+.15e}i  mu = {:.4e}  steps = {}\n",
                    p.triple.lambda.re, p.triple.lambda.im, p.mu, p.steps
                ));
            }
            for f in &out.failures {
                s.push_str(&format!("path {} failed: {}\n", f.path, f.error));
            }
            s
        }
    };
    emit(&args.common, &body)?;
    if out.is_complete() && !out.pairs.is_empty() {
        Ok(0)
    } else {
        for f in &out.failures {
            eprintln!("path {} failed: {}", f.path, f.error);
        }
        Ok(EXIT_PARTIAL)
    }
}

fn cmd_sample_start(args: &SampleArgs) -> Result<u8, Failure> {
    if args.n < 2 {
        return Err(input_error(anyhow!(
            "--n must be at least 2, got {}",
            args.n
        )));
    }
    if args.common.format.is_some_and(|f| f != Format::Json) {
        return Err(input_error(anyhow!("sample-start only writes JSON")));
    }
    let seed = resolve_seed(args.common.seed);
    let mut rng = RngHandle::new(seed).generator();
    let omega = sample_omega(args.n, &mut rng).map_err(anyhow::Error::from)?;
    let start = phi_n(&omega).map_err(anyhow::Error::from)?;
    let (z, e1) = &start.pairs[0];
    let body = json!({
        "n": args.n,
        "seed": seed,
        "rejections": omega.rejections,
        "pinv_frobenius": omega.pinv_frobenius,
        "omega": omega.to_json(),
        "a0": start.to_json()["a0"],
        "z": complex_value(*z),
        "e1": vector_value(e1),
    });
    emit(&args.common, &pretty(&body))?;
    Ok(0)
}

fn parse_orders(s: &str) -> anyhow::Result<Vec<usize>> {
    let parse = |t: &str| {
        t.trim()
            .parse::<usize>()
            .with_context(|| format!("bad order '{t}'"))
    };
    let orders: Vec<usize> = match s.split_once("..") {
        Some((lo, hi)) => {
            let hi = hi.strip_prefix('=').unwrap_or(hi);
            (parse(lo)?..=parse(hi)?).collect()
        }
        None => s.split(',').map(parse).collect::<anyhow::Result<_>>()?,
    };
    if orders.is_empty() || orders.iter().any(|&n| n < 2) {
        bail!("orders must be at least 2, got '{s}'");
    }
    Ok(orders)
}

fn report_body(reports: &[ExperimentReport], format: Format) -> String {
    match format {
        Format::Json => reports_to_json(reports) + "\n",
        Format::Csv => reports_to_csv(reports),
        Format::Text => reports.iter().map(|r| r.summary_line() + "\n").collect(),
    }
}

fn cmd_bench(args: &BenchArgs) -> Result<u8, Failure> {
    let orders = parse_orders(&args.n).map_err(input_error)?;
    let config = args.tracking.config()?;
    let seed = resolve_seed(args.common.seed);
    let algo = match args.tracking.algorithm {
        AlgorithmArg::A => Algorithm::A,
        AlgorithmArg::B => Algorithm::B,
    };
    let table = exp_step_scaling(
        algo,
        &orders,
        args.trials,
        RngHandle::new(seed),
        &config,
        args.check_bound,
    )
    .map_err(anyhow::Error::from)?;
    emit(
        &args.common,
        &report_body(&table.reports, args.common.format.unwrap_or(Format::Csv)),
    )?;
    if table.failures > 0 {
        eprintln!("{} path failures", table.failures);
        return Ok(EXIT_PARTIAL);
    }
    if table.reports.iter().any(|r| r.verdict == Verdict::Fail) {
        return Ok(EXIT_VERIFY);
    }
    Ok(0)
}

fn cmd_verify(args: &VerifyArgs) -> Result<u8, Failure> {
    let seed = resolve_seed(args.common.seed);
    let mut config = SuiteConfig::new(seed);
    if let Some(t) = args.trials {
        if t < 20 {
            return Err(input_error(anyhow!("--trials must be at least 20")));
        }
        config.scalar_samples = t;
        config.eig_samples = (t / 10).max(20);
    }
    let reports = run_suite(&config, args.experiments.as_deref()).map_err(input_error)?;
    emit(
        &args.common,
        &report_body(&reports, args.common.format.unwrap_or(Format::Text)),
    )?;
    let failed: Vec<&ExperimentReport> = reports
        .iter()
        .filter(|r| r.verdict == Verdict::Fail)
        .collect();
    if failed.is_empty() {
        return Ok(0);
    }
    eprintln!("{} of {} checks failed:", failed.len(), reports.len());
    for r in failed {
        eprintln!("  {}", r.summary_line());
    }
    Ok(EXIT_VERIFY)
}

fn configure_threads() -> anyhow::Result<()> {
    let Ok(v) = std::env::var("EIGENFLOW_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .with_context(|| format!("EIGENFLOW_THREADS must be a positive integer, got '{v}'"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()?;
    Ok(())
}

fn main() -> ExitCode {
    // clap's own usage-error code (2) would collide with partial failure
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = configure_threads()
        .map_err(input_error)
        .and_then(|()| match &cli.command {
            Command::Solve(a) => cmd_solve(a),
            Command::SampleStart(a) => cmd_sample_start(a),
            Command::Bench(a) => cmd_bench(a),
            Command::Verify(a) => cmd_verify(a),
        });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
