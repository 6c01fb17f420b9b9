use std::io::Read;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use torus_tame::cli::{
    emit, parse_input, run, CliError, CommandKind, ErrorInfo, Format, JobSpec, Options, Range, Report, SidonSource,
    ToolInfo,
};

/// Decide tameness of affine torus maps x -> Ax + b and probe their dynamics.
#[derive(Parser, Debug)]
#[command(name = "tame", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON map description; `-` reads standard input.
    #[arg(long, global = true, value_name = "FILE")]
    input: Option<String>,

    #[arg(long, global = true, value_enum, default_value = "json")]
    format: FormatArg,

    /// Grid points per axis.
    #[arg(long, global = true)]
    grid: Option<usize>,

    #[arg(long, global = true)]
    iters: Option<usize>,

    #[arg(long, global = true)]
    tol: Option<f64>,

    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Escape bound for frequency orbits (arbitrary precision).
    #[arg(long, global = true)]
    bound: Option<BigInt>,

    /// Entry range for `sweep`, as LO..HI.
    #[arg(long, global = true, allow_hyphen_values = true, value_name = "LO..HI")]
    range: Option<String>,

    /// Matrix size for `sweep`; vector dimension for `--generator moment`.
    #[arg(long, global = true)]
    dim: Option<usize>,

    /// Number of frequencies `sidon` extracts.
    #[arg(long, global = true)]
    count: Option<usize>,

    /// Random trials for the Sidon ratio estimate.
    #[arg(long, global = true)]
    trials: Option<usize>,

    /// Frequency stream file for `sidon`, one vector per line.
    #[arg(long, global = true, value_name = "FILE")]
    stream: Option<String>,

    /// Built-in frequency stream for `sidon`.
    #[arg(long, global = true, value_enum)]
    generator: Option<Generator>,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Decide tameness of the semicascade {phi^n : n >= 0}.
    Semicascade,
    /// Decide tameness of the cascade {phi^n : n in Z} (needs |det A| = 1).
    Cascade,
    /// Cross-check the decider against brute force and verify any claim.
    Certify,
    /// Iterate the map and look for a pointwise-convergent subsequence.
    Simulate,
    /// Frequency orbit of u under A^T and its escape behaviour.
    Frequencies,
    /// Greedy Sidon-type extraction from a frequency stream.
    Sidon,
    /// Run decider, oracle and checker on every small integer matrix.
    Sweep,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum FormatArg {
    Json,
    Text,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum Generator {
    Moment,
}

impl Command {
    fn kind(self) -> CommandKind {
        match self {
            Command::Semicascade => CommandKind::Semicascade,
            Command::Cascade => CommandKind::Cascade,
            Command::Certify => CommandKind::Certify,
            Command::Simulate => CommandKind::Simulate,
            Command::Frequencies => CommandKind::Frequencies,
            Command::Sidon => CommandKind::Sidon,
            Command::Sweep => CommandKind::Sweep,
        }
    }
}

fn read_source(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::Io(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))
    }
}

fn build_job(cli: &Cli) -> Result<JobSpec, CliError> {
    let input = cli.input.as_deref().map(read_source).transpose()?.map(|t| parse_input(&t)).transpose()?;
    let range = cli.range.as_deref().map(str::parse::<Range>).transpose()?;
    let options = Options {
        grid: cli.grid,
        iters: cli.iters,
        tol: cli.tol,
        seed: cli.seed,
        bound: cli.bound.clone(),
        range,
        dim: cli.dim,
        count: cli.count,
        trials: cli.trials,
    };
    let (source, stream_text) = match (&cli.stream, cli.generator) {
        (Some(_), Some(_)) => {
            return Err(CliError::InvalidOption("--stream and --generator are mutually exclusive".into()))
        }
        (Some(path), None) => (Some(SidonSource::File { path: path.clone() }), Some(read_source(path)?)),
        (None, Some(Generator::Moment)) => (Some(SidonSource::Moment), None),
        (None, None) => (None, None),
    };
    JobSpec::new(cli.command.kind(), input, source, stream_text, options)
}

fn main() -> ExitCode {
    let start = Instant::now();
    let cli = Cli::parse();
    let format = match cli.format {
        FormatArg::Json => Format::Json,
        FormatArg::Text => Format::Text,
    };
    let report = match build_job(&cli) {
        Ok(job) => run(&job),
        Err(e) => Report {
            tool: ToolInfo::current(),
            command: cli.command.kind(),
            input: None,
            options: Options::default(),
            sidon_source: None,
            exit_code: e.exit_code(),
            result: None,
            error: Some(ErrorInfo::from(&e)),
            elapsed_us: u64::try_from(start.elapsed().as_micros()).unwrap_or(u64::MAX),
        },
    };
    let out = emit(&report, format);
    if report.is_ok() || format == Format::Json {
        print!("{out}");
    } else {
        eprint!("{out}");
    }
    ExitCode::from(u8::try_from(report.exit_code).unwrap_or(1))
}
