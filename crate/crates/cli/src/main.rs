//! `entangle`: measure, generate and parse pure states from the command line.
//!
//! Results go to stdout, diagnostics to stderr. Exit status is 0 on success,
//! 1 for input errors and 2 when a solver fails to converge.

mod report;

use std::f64::consts::TAU;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use entanglement::{io, ket, make_named_state, make_perm_phase_state, random, Dims, Error, Method, NamedState, State};
use rand::seq::SliceRandom;
use rand::Rng;

#[derive(Parser, Debug)]
#[command(
    name = "entangle",
    version,
    about = "Entanglement of pure states via the closest product state"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Measure the entanglement of a state.
    Measure(MeasureArgs),
    /// Write a named or permutation-phase state file.
    Generate(GenerateArgs),
    /// Write a seeded random state file.
    Random(RandomArgs),
    /// Validate ket text and print it as a state file.
    Parse(ParseArgs),
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct Source {
    /// State file (`-` for stdin).
    #[arg(long)]
    file: Option<PathBuf>,
    /// Inline ket expression, e.g. "(|+-> - |-+>)/sqrt(2)".
    #[arg(long)]
    ket: Option<String>,
    /// bell_singlet, bell_phi_plus, ghz or w (the latter two with --n).
    #[arg(long)]
    named: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Auto,
    Bipartite,
    Multipartite,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    #[value(alias = "structured")]
    Json,
}

#[derive(Args, Debug)]
struct MeasureArgs {
    #[command(flatten)]
    source: Source,
    /// Qubit count for --named ghz / w.
    #[arg(long)]
    n: Option<usize>,
    /// Comma-separated subsystem indices of the left group.
    #[arg(long, value_parser = parse_index_list)]
    split: Option<IndexList>,
    #[arg(long, value_enum, default_value_t = Mode::Auto)]
    mode: Mode,
    #[arg(long, value_enum, default_value_t = MethodArg::Jacobi)]
    method: MethodArg,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Power-iteration budget.
    #[arg(long, default_value_t = 10_000)]
    max_iters: usize,
    #[arg(long, default_value_t = 500)]
    max_sweeps: usize,
    #[arg(long, default_value_t = 16)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Include the optimal product factors in the output.
    #[arg(long)]
    factors: bool,
    /// Measure the state as given instead of rescaling it to unit norm.
    #[arg(long)]
    no_normalize: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Jacobi,
    Power,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Jacobi => Method::Jacobi,
            MethodArg::Power => Method::Power,
        }
    }
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[arg(long, conflicts_with = "perm_phase", required_unless_present = "perm_phase")]
    named: Option<String>,
    /// Maximally entangled n×n state δ(k, π_j)·exp(iφ_jk)/√n.
    #[arg(long)]
    perm_phase: bool,
    /// Qubit count for ghz / w, or n for --perm-phase.
    #[arg(long)]
    n: Option<usize>,
    /// Explicit permutation for --perm-phase (random from --seed otherwise).
    #[arg(long, value_parser = parse_index_list, requires = "perm_phase")]
    perm: Option<IndexList>,
    /// Seed for the random permutation and phases.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RandomArgs {
    /// Comma-separated subsystem dimensions.
    #[arg(long, value_parser = parse_index_list)]
    dims: IndexList,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ParseArgs {
    #[arg(long)]
    ket: String,
    #[arg(long)]
    no_normalize: bool,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Clone, Debug)]
struct IndexList(Vec<usize>);

fn parse_index_list(s: &str) -> Result<IndexList, String> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| format!("`{p}` is not a non-negative integer"))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(IndexList)
}

/// Failure carrying its exit status.
#[derive(Debug)]
pub(crate) struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    pub(crate) fn input(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }

    pub(crate) fn solver(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NoConvergence { .. } | Error::NoRestartConverged { .. } => Failure::solver(e.to_string()),
            Error::Parse(p) => Failure::input(format!("parse error: {p}")),
            other => Failure::input(other.to_string()),
        }
    }
}

fn named_state(name: &str, n: Option<usize>) -> Result<State, Failure> {
    let named = if name.contains('(') {
        name.parse::<NamedState>()?
    } else {
        NamedState::from_name(name, n)?
    };
    Ok(make_named_state(named)?)
}

fn load_state(source: &Source, n: Option<usize>, normalize: bool) -> Result<State, Failure> {
    if let Some(path) = &source.file {
        let text = if path.as_os_str() == "-" {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| Failure::input(format!("reading stdin: {e}")))?;
            buf
        } else {
            std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?
        };
        return io::state_from_json(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())));
    }
    if let Some(text) = &source.ket {
        let expr = ket::parse(text).map_err(|e| Failure::input(format!("parse error: {e}")))?;
        return Ok(ket::evaluate(&expr, normalize)?);
    }
    let name = source.named.as_deref().expect("clap enforces one source");
    named_state(name, n)
}

fn emit(output: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match output {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::input(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn generate(args: &GenerateArgs) -> Result<(), Failure> {
    let state = if args.perm_phase {
        let n = args.n.ok_or_else(|| Failure::input("--perm-phase needs --n"))?;
        let mut rng = random::rng_from_seed(args.seed);
        let perm = match &args.perm {
            Some(p) => p.0.clone(),
            None => {
                let mut p: Vec<usize> = (0..n).collect();
                p.shuffle(&mut rng);
                p
            }
        };
        let phases: Vec<f64> = (0..n * n).map(|_| rng.random_range(0.0..TAU)).collect();
        make_perm_phase_state(n, &perm, &phases)?
    } else {
        named_state(args.named.as_deref().expect("clap enforces a source"), args.n)?
    };
    emit(&args.output, &io::state_to_json(&state))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Measure(args) => report::measure(&args),
        Command::Generate(args) => generate(&args),
        Command::Random(args) => {
            let dims = Dims::new(args.dims.0.clone())?;
            let state: State = random::random_state(&dims, args.seed);
            emit(&args.output, &io::state_to_json(&state))
        }
        Command::Parse(args) => {
            let expr = ket::parse(&args.ket).map_err(|e| Failure::input(format!("parse error: {e}")))?;
            let state: State = ket::evaluate(&expr, !args.no_normalize)?;
            emit(&args.output, &io::state_to_json(&state))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
