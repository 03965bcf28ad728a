//! Command line for Dirichlet series with periodic coefficients.
//!
//! Sequences are read from JSON files of the form
//! `{"q": 4, "values": [[1,0],[0,0],[-1,0],[0,0]]}`; results are written to
//! stdout as JSON (floats at 15 significant digits) or CSV for tables.
//!
//! Exit codes: 0 success, 2 parse error, 3 infeasible configuration,
//! 4 certification failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use periodic_dirichlet::offzero::{certified_zero_search, SolveError, SolverConfig};
use periodic_dirichlet::*;

mod emit;

#[derive(Parser)]
#[command(
    name = "periodic-dirichlet",
    about = "Evaluation, decomposition, zero counting, and off-line zero search for Dirichlet series with periodic coefficients",
    version
)]
struct Cli {
    /// Absolute error target for the evaluation kernels.
    #[arg(long, global = true, default_value_t = 1e-12)]
    prec: f64,
    /// Output format (CSV applies to tabular results).
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Run seed, echoed into reproducibility-sensitive reports. All sampling
    /// in this tool is deterministic, so identical configurations reproduce
    /// identical bytes.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose a sequence into primitive components (ψ, P_ψ).
    Decompose {
        /// Sequence file: `{"q": int, "values": [[re,im], ...]}`.
        #[arg(long)]
        input: PathBuf,
    },
    /// Evaluate the continuation F_a at a point s.
    Eval {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        re: f64,
        #[arg(long, default_value_t = 0.0)]
        im: f64,
    },
    /// Count zeros in a rectangle, with locations and multiplicities.
    Count {
        #[arg(long)]
        input: PathBuf,
        /// Rectangle as sigma1,sigma2,t1,t2.
        #[arg(long)]
        rect: String,
        /// Separation scale for distinct-zero resolution.
        #[arg(long, default_value_t = 1e-6)]
        sep: f64,
    },
    /// Zero-density table over (sigma1, sigma2) x [0, T] for each T.
    Scan {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        sigma1: f64,
        #[arg(long)]
        sigma2: f64,
        /// Increasing list of T values, comma separated.
        #[arg(long = "T", value_delimiter = ',')]
        t: Vec<f64>,
    },
    /// Second moment of |F_a| against its main term.
    Moment {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        sigma: f64,
        #[arg(long = "T")]
        t: f64,
    },
    /// Half-plane density ratio N(1/2+u, cap, T)·u/(T·log(1/u)).
    T3ratio {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        u: f64,
        #[arg(long = "T")]
        t: f64,
    },
    /// Search for certified zeros of Σ L_ψ over the primitive characters
    /// inducing the characters mod q, in 1 < sigma1 < Re s < sigma2.
    Offzero {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        sigma1: f64,
        #[arg(long)]
        sigma2: f64,
        /// t-range scanned for aligning shifts.
        #[arg(long)]
        budget: f64,
        /// Largest prime in sums and products.
        #[arg(long, default_value_t = 10_000_000)]
        pmax: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

#[derive(Debug)]
enum CliError {
    Parse(String),
    Infeasible(String),
    Certification(String),
    Other(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Parse(m)
            | CliError::Infeasible(m)
            | CliError::Certification(m)
            | CliError::Other(m) => write!(f, "{m}"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Infeasible(_) => 3,
            CliError::Certification(_) => 4,
            CliError::Other(_) => 1,
        }
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        CliError::Other(e.to_string())
    }
}

impl From<CountError> for CliError {
    fn from(e: CountError) -> Self {
        match e {
            CountError::InvalidRectangle(m) => CliError::Parse(m),
            other => CliError::Other(other.to_string()),
        }
    }
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::InfeasibleRadius { .. }
            | SolveError::SplitUnattainable { .. }
            | SolveError::NoSolution { .. }
            | SolveError::TooFewCharacters { .. }
            | SolveError::Config(_) => CliError::Infeasible(e.to_string()),
            SolveError::CertificationFailed { .. } | SolveError::NoPositiveGamma => {
                CliError::Certification(e.to_string())
            }
            other => CliError::Other(other.to_string()),
        }
    }
}

fn parse_sequence_file(path: &PathBuf) -> Result<PeriodicSequence, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn eval_options(prec: f64) -> Result<EvalOptions, CliError> {
    EvalOptions::with_target(prec).map_err(|e| CliError::Parse(e.to_string()))
}

fn require_json(format: Format, what: &str) -> Result<(), CliError> {
    if format == Format::Csv {
        return Err(CliError::Parse(format!(
            "{what} has no CSV form; use --format json"
        )));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let opts = eval_options(cli.prec)?;
    match cli.command {
        Command::Decompose { input } => {
            require_json(cli.format, "decompose output")?;
            let a = parse_sequence_file(&input)?;
            let comps = primitive_components(&a);
            println!("{}", emit::decomposition_json(&comps));
        }
        Command::Eval { input, re, im } => {
            require_json(cli.format, "eval output")?;
            let a = parse_sequence_file(&input)?;
            let s = Complex64::new(re, im);
            let value = f_eval(&a, s, &opts)?;
            println!(
                "{}",
                emit::to_json(&serde_json::json!({
                    "s": [s.re, s.im],
                    "value": [value.re, value.im],
                    "residueAtOne": [residue_at_one(&a).re, residue_at_one(&a).im],
                }))
            );
        }
        Command::Count { input, rect, sep } => {
            require_json(cli.format, "count output")?;
            let a = parse_sequence_file(&input)?;
            let parts: Vec<f64> = rect
                .split(',')
                .map(|x| x.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|e| CliError::Parse(format!("--rect: {e}")))?;
            if parts.len() != 4 {
                return Err(CliError::Parse(
                    "--rect needs sigma1,sigma2,t1,t2".into(),
                ));
            }
            let rect = Rectangle::new(parts[0], parts[1], parts[2], parts[3])?;
            let report = distinct_zeros(&a, &rect, sep, &opts)?;
            println!("{}", emit::to_json_value(&report)?);
        }
        Command::Scan {
            input,
            sigma1,
            sigma2,
            t,
        } => {
            let a = parse_sequence_file(&input)?;
            let rows = density_table(&a, sigma1, sigma2, &t, &opts)?;
            match cli.format {
                Format::Csv => print!("{}", emit::density_csv(&rows)),
                Format::Json => println!("{}", emit::to_json_value(&rows)?),
            }
        }
        Command::Moment { input, sigma, t } => {
            require_json(cli.format, "moment output")?;
            let a = parse_sequence_file(&input)?;
            let m = second_moment(&a, sigma, t, &opts)?;
            println!("{}", emit::to_json_value(&m)?);
        }
        Command::T3ratio { input, u, t } => {
            require_json(cli.format, "t3ratio output")?;
            let a = parse_sequence_file(&input)?;
            let r = halfplane_ratio(&a, u, t, &opts)?;
            println!("{}", emit::to_json_value(&r)?);
        }
        Command::Offzero {
            q,
            sigma1,
            sigma2,
            budget,
            pmax,
        } => {
            require_json(cli.format, "offzero output")?;
            let mut seen = Vec::new();
            let mut set = Vec::new();
            for chi in enumerate_characters(q) {
                let desc = primitive_inducer(&chi);
                let key = (desc.conductor, desc.inducer.label().to_vec());
                if !seen.contains(&key) {
                    seen.push(key);
                    set.push((desc.inducer, DirichletPolynomial::one()));
                }
            }
            let mut cfg = SolverConfig::new(q, 0.5 * (sigma1 + sigma2));
            cfg.p_max = pmax;
            let report = certified_zero_search(&set, sigma1, sigma2, budget, Some(cfg), &opts)?;
            println!("{}", emit::demo_json(&report, cli.seed));
            if !report.certified() {
                return Ok(ExitCode::from(4));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
