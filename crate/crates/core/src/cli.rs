//! Command-line front end.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 invalid input or arguments,
//! 3 fit failure (the partial report is still written).

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::divergence::Lambda;
use crate::sim::{
    builtin_scenarios, default_p_grid, parse_real, run_simulation_with_workers, Coupling, Sidedness, SimScenario,
    SimSpec, TestId,
};
use crate::table::{parse_table, InputFormat};
use crate::trend::{analyze, Alternative, AnalyzeOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_FIT: i32 = 3;

/// Environment variable capping simulation workers (0 = automatic).
pub const THREADS_ENV: &str = "MONOTREND_THREADS";

#[derive(Debug, Parser)]
#[command(name = "monotrend", version, about = "Tests for monotone trend in dose-response proportions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analyze one dose-response table.
    Analyze(AnalyzeArgs),
    /// Estimate size or power by simulation.
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Json,
    Text,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Table with columns dose,n,successes (CSV) or a {"rows": [...]} document (JSON).
    #[arg(long)]
    pub input: PathBuf,
    /// Input format; inferred from the file extension when omitted.
    #[arg(long, value_enum)]
    pub input_format: Option<TableFormat>,
    /// Destination file; standard output when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Comma-separated λ values; fractions such as 2/3 are accepted.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, value_parser = parse_lambda,
          default_value = "-1,-0.5,0,2/3,1,1.5,2")]
    pub lambdas: Vec<Lambda>,
    /// increasing, decreasing or two_sided.
    #[arg(long, default_value = "two_sided")]
    pub alternative: Alternative,
    /// Level for the goodness-of-fit flag.
    #[arg(long, default_value_t = 0.05)]
    pub level: f64,
    #[arg(long, value_enum, default_value = "json")]
    pub format: ReportFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Sided {
    One,
    Two,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Built-in scenario 1, 2 or 3, or a JSON file with name, doses and group_sizes.
    #[arg(long, conflicts_with = "config")]
    pub scenario: Option<String>,
    /// Full simulation spec as JSON; flags given explicitly override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Comma-separated tests: ca, pd:<lambda>.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub tests: Option<Vec<TestId>>,
    #[arg(long)]
    pub reps: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub sided: Option<Sided>,
    /// Number of equally spaced null probabilities k/(m+1).
    #[arg(long)]
    pub grid_points: Option<usize>,
    /// Logit slope per unit dose; 0 estimates size.
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub level: Option<f64>,
    /// Share random streams between p and 1-p.
    #[arg(long)]
    pub coupled: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: ReportFormat,
}

fn parse_lambda(s: &str) -> Result<Lambda, String> {
    Lambda::new(parse_real(s)?).map_err(|e| e.to_string())
}

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }

    fn io(path: &Path, err: io::Error) -> Self {
        Self {
            code: EXIT_IO,
            message: format!("{}: {err}", path.display()),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    let outcome = match cli.command {
        Command::Analyze(a) => cmd_analyze(&a),
        Command::Simulate(s) => cmd_simulate(&s),
    };
    match outcome {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn emit(output: Option<&Path>, body: &str) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(path, body).map_err(|e| Failure::io(path, e)),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(body.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure::io(Path::new("<stdout>"), e))
        }
    }
}

pub fn cmd_analyze(args: &AnalyzeArgs) -> Result<i32, Failure> {
    if !(args.level > 0.0 && args.level < 1.0) {
        return Err(Failure::invalid(format!("level {} outside (0, 1)", args.level)));
    }
    let format = match args.input_format {
        Some(TableFormat::Csv) => InputFormat::Csv,
        Some(TableFormat::Json) => InputFormat::Json,
        None => InputFormat::from_path(&args.input),
    };
    let file = fs::File::open(&args.input).map_err(|e| Failure::io(&args.input, e))?;
    let parsed = parse_table(io::BufReader::new(file), format)
        .map_err(|e| Failure::invalid(format!("{}: {e}", args.input.display())))?;
    if parsed.reordered {
        eprintln!("warning: rows were reordered by increasing dose");
    }
    let opts = AnalyzeOptions { gof_level: args.level };
    let report = analyze(&parsed.table, &args.lambdas, args.alternative, &opts)
        .map_err(|e| Failure::invalid(e.to_string()))?;
    let body = match args.format {
        ReportFormat::Json => report.to_json() + "\n",
        ReportFormat::Text => report.to_text(),
        ReportFormat::Csv => return Err(Failure::invalid("analyze writes json or text")),
    };
    emit(args.output.as_deref(), &body)?;
    if report.is_complete() {
        Ok(EXIT_OK)
    } else {
        for e in &report.errors {
            eprintln!("fit failure: {e}");
        }
        Ok(EXIT_FIT)
    }
}

fn load_scenario(reference: &str) -> Result<SimScenario, Failure> {
    if let Ok(k) = reference.parse::<usize>() {
        return builtin_scenarios()
            .into_iter()
            .nth(k.wrapping_sub(1))
            .ok_or_else(|| Failure::invalid(format!("unknown scenario {k} (expected 1, 2 or 3)")));
    }
    let path = Path::new(reference);
    let text = fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Failure::invalid(format!("{reference}: {e}")))
}

/// Builds the spec from the config file or the built-in defaults, then
/// applies explicit flags.
pub fn build_spec(args: &SimulateArgs) -> Result<SimSpec, Failure> {
    let mut spec = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
            serde_json::from_str(&text).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?
        }
        None => SimSpec {
            scenario: load_scenario(args.scenario.as_deref().unwrap_or("1"))?,
            tests: vec![
                TestId::Ca,
                TestId::Pd {
                    lambda: Lambda::CRESSIE_READ,
                },
                TestId::Pd {
                    lambda: Lambda::KULLBACK,
                },
            ],
            sidedness: Sidedness::TwoSided,
            nominal_level: 0.05,
            p_grid: default_p_grid(29),
            beta: 0.0,
            replications: 10_000,
            master_seed: 1,
            coupling: Coupling::Independent,
        },
    };
    if let Some(tests) = &args.tests {
        spec.tests = tests.clone();
    }
    if let Some(reps) = args.reps {
        spec.replications = reps;
    }
    if let Some(seed) = args.seed {
        spec.master_seed = seed;
    }
    if let Some(sided) = args.sided {
        spec.sidedness = match sided {
            Sided::One => Sidedness::OneSided,
            Sided::Two => Sidedness::TwoSided,
        };
    }
    if let Some(points) = args.grid_points {
        if points == 0 {
            return Err(Failure::invalid("grid points must be positive"));
        }
        spec.p_grid = default_p_grid(points);
    }
    if let Some(beta) = args.beta {
        spec.beta = beta;
    }
    if let Some(level) = args.level {
        spec.nominal_level = level;
    }
    if args.coupled {
        spec.coupling = Coupling::Mirror;
    }
    spec.validate().map_err(|e| Failure::invalid(e.to_string()))?;
    Ok(spec)
}

fn worker_count() -> Result<usize, Failure> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::invalid(format!("{THREADS_ENV}={v} is not a non-negative integer"))),
        Err(_) => Ok(0),
    }
}

pub fn cmd_simulate(args: &SimulateArgs) -> Result<i32, Failure> {
    let spec = build_spec(args)?;
    let workers = worker_count()?;
    let result = run_simulation_with_workers(&spec, workers).map_err(|e| Failure::invalid(e.to_string()))?;
    let body = match args.format {
        ReportFormat::Csv => result.to_csv(),
        ReportFormat::Json => serde_json::to_string_pretty(&result).expect("result serializes") + "\n",
        ReportFormat::Text => return Err(Failure::invalid("simulate writes csv or json")),
    };
    emit(args.output.as_deref(), &body)?;
    Ok(EXIT_OK)
}
