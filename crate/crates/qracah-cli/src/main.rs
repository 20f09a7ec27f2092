//! `qracah`: evaluate multivariable q-Racah type polynomials, write value
//! tables, and certify orthogonality relations.
//!
//! Exit status: 0 when every check passes, 1 when a check fails, 2 for
//! configuration and evaluation errors.

mod config;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use qracah::multivar::{eval_norm_mv, eval_poly_mv, eval_weight_mv, FamilyMV, LatticePoint, MultiIndex, ParamSetMV};
use qracah::scalar::Num;
use qracah::verify::{check_identity, check_limit, enumerate_lattice, family_indices, gram, GramOptions, Limit};

use config::{Backend, Job, JobConfig};
use report::{Check, Report};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("{0}")]
    Lib(#[from] qracah::Error),
    #[error("i/o: {0}")]
    Io(String),
}

#[derive(Parser)]
#[command(
    name = "qracah",
    version,
    about = "Evaluate and certify multivariable q-Racah polynomials and their limit families"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON job file (all numbers as strings).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    backend: Option<BackendArg>,
    /// Float precision in bits.
    #[arg(long, global = true)]
    precision: Option<u32>,
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Tolerance for float checks, e.g. 1e-20.
    #[arg(long, global = true)]
    tol: Option<String>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Record wall-clock times in reports.
    #[arg(long, global = true)]
    timing: bool,
    /// Double every norm before comparing (test hook).
    #[arg(long, global = true, hide = true)]
    corrupt_norms: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Exact,
    Float,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum Quantity {
    #[default]
    Poly,
    Weight,
    Norm,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one polynomial, weight or norm.
    Eval {
        /// Degree vector, e.g. "1,1".
        #[arg(long, default_value = "")]
        n: String,
        /// Lattice point, e.g. "1,2".
        #[arg(long, default_value = "")]
        x: String,
        #[arg(long, value_enum, default_value_t)]
        quantity: Quantity,
    },
    /// Write every P_n(x) over the index set and lattice as CSV.
    Table,
    /// Check the orthogonality relation of the configured family.
    Gram,
    /// Run the suites listed in the config (gram, identities, limits).
    Verify,
    /// Run the limit suite.
    Limits,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn merged_config(cli: &Cli) -> Result<JobConfig, CliError> {
    let path = cli.config.as_ref().ok_or_else(|| CliError::Config("--config is required".into()))?;
    let mut c = JobConfig::load(path)?;
    if let Some(b) = cli.backend {
        c.backend = Some(match b {
            BackendArg::Exact => "exact".into(),
            BackendArg::Float => "float".into(),
        });
    }
    if let Some(p) = cli.precision {
        c.precision = Some(p.to_string());
    }
    if let Some(t) = cli.threads {
        c.threads = Some(t.to_string());
    }
    if let Some(t) = &cli.tol {
        c.tol = Some(t.clone());
    }
    if cli.timing {
        c.timing = Some("true".into());
    }
    if let Some(o) = &cli.out {
        c.out = Some(o.display().to_string());
    }
    Ok(c)
}

fn emit(job: &Job, text: &str) -> Result<(), CliError> {
    match &job.config.out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{path}: {e}"))),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string())),
    }
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    let job = Job::new(merged_config(cli)?)?;
    match &cli.command {
        Command::Eval { n, x, quantity } => {
            let text = match job.backend {
                Backend::Exact => eval(&family(&job, job.exact_params()?)?, n, x, *quantity)?,
                Backend::Float => eval(&family(&job, job.float_params()?)?, n, x, *quantity)?,
            };
            if job.backend == Backend::Float {
                eprintln!("note: {}-bit binary float", job.precision);
            }
            emit(&job, &format!("{text}\n"))?;
            Ok(true)
        }
        Command::Table => {
            let text = match job.backend {
                Backend::Exact => table(&job, &family(&job, job.exact_params()?)?)?,
                Backend::Float => table(&job, &family(&job, job.float_params()?)?)?,
            };
            emit(&job, &text)?;
            Ok(true)
        }
        Command::Gram => {
            finish(&job, Report::new("gram", job.config.clone(), vec![gram_run(&job, cli.corrupt_norms)?]))
        }
        Command::Verify => {
            let mut checks = Vec::new();
            for suite in job.suites() {
                match suite.as_str() {
                    "gram" => checks.push(gram_run(&job, cli.corrupt_norms)?),
                    "identities" => checks.extend(identities(&job)?),
                    "limits" => checks.extend(limits(&job)?),
                    other => return Err(CliError::Config(format!("unknown suite {other:?}"))),
                }
            }
            finish(&job, Report::new("verify", job.config.clone(), checks))
        }
        Command::Limits => finish(&job, Report::new("limits", job.config.clone(), limits(&job)?)),
    }
}

fn finish(job: &Job, report: Report) -> Result<bool, CliError> {
    emit(job, &report.to_json())?;
    for c in report.checks.iter().filter(|c| c.status == report::Status::Fail) {
        eprintln!("FAIL {}: {}", c.name, c.witness.as_deref().unwrap_or("check failed"));
    }
    Ok(report.passed)
}

fn family<T: Num>(job: &Job, p: ParamSetMV<T>) -> Result<FamilyMV<T>, CliError> {
    Ok(FamilyMV::new(job.family, p)?.with_variants(job.variants))
}

fn parse_list(what: &str, s: &str) -> Result<Vec<usize>, CliError> {
    s.split([',', ' '])
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| CliError::Config(format!("{what}: not a nonnegative integer: {t:?}"))))
        .collect()
}

fn eval<T: Num>(f: &FamilyMV<T>, n: &str, x: &str, quantity: Quantity) -> Result<String, CliError> {
    let n = MultiIndex(parse_list("n", n)?);
    let x = LatticePoint(parse_list("x", x)?);
    let v = match quantity {
        Quantity::Poly => eval_poly_mv(f, &n, &x)?,
        Quantity::Weight => eval_weight_mv(f, &x)?,
        Quantity::Norm => eval_norm_mv(f, &n)?,
    };
    Ok(v.to_text())
}

fn table<T: Num>(job: &Job, f: &FamilyMV<T>) -> Result<String, CliError> {
    let lattice = enumerate_lattice(f, job.lattice_cap)?;
    let idx = family_indices(f, job.degree_cap);
    let backend = if T::EXACT { "exact".to_string() } else { format!("float{}", job.precision) };
    let params = f.params.describe();
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(["family", "backend", "params", "n", "x", "value"]).map_err(io)?;
    for n in &idx {
        for x in &lattice {
            let v = eval_poly_mv(f, n, x).map_err(|e| e.context(format!("P_{n}({x})")))?;
            w.write_record([f.id.name(), &backend, &params, &n.to_string(), &x.to_string(), &v.to_text()])
                .map_err(io)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
}

fn gram_run(job: &Job, corrupt_norms: bool) -> Result<Check, CliError> {
    let opts = GramOptions {
        threads: job.threads,
        tol: job.tol,
        degree_cap: job.degree_cap,
        timing: job.timing,
        corrupt_norms,
    };
    let r = match job.backend {
        Backend::Exact => gram(&family(job, job.exact_params()?)?, &opts)?,
        Backend::Float => gram(&family(job, job.float_params()?)?, &opts)?,
    };
    Ok(report::gram_check(r))
}

fn identities(job: &Job) -> Result<Vec<Check>, CliError> {
    let p = job.exact_params()?;
    let p = p.as_q()?;
    let mut out = Vec::new();
    for which in job.identities()? {
        let t = Instant::now();
        let r = check_identity(which, p).map_err(|e| e.context(which.name()))?;
        out.push(report::identity_check(which, r, job.timing.then(|| t.elapsed().as_millis())));
    }
    Ok(out)
}

fn limits(job: &Job) -> Result<Vec<Check>, CliError> {
    let p = job.float_params()?;
    let p = p.as_q()?;
    let eps = job.epsilons()?;
    let mut out = Vec::new();
    for which in job.limits()? {
        let need = if which == Limit::BetaToZero { p.s } else { p.s + 1 };
        if p.a.len() < need {
            return Err(CliError::Config(format!("{} needs {need} values of a", which.name())));
        }
        let t = Instant::now();
        let r = check_limit(which, p, &eps).map_err(|e| e.context(which.name()))?;
        out.push(report::limit_check(which, r, job.timing.then(|| t.elapsed().as_millis())));
    }
    Ok(out)
}
