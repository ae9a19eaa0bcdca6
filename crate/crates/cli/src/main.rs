//! `negbeta`: thresholds, spectra and inverse constructions for ordinal
//! patterns of the negative beta transformation.

mod commands;
mod render;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use negbeta::search::AlphabetBounds;
use negbeta::{BetaValue, Error, Precision};
use serde::Serialize;
use serde_json::{json, Value};

use commands::Outcome;

const SCHEMA: &str = "negbeta/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "negbeta", version, about = "Ordinal patterns of the negative beta transformation")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,

    /// Maximum interval precision in bits for algebraic bases.
    #[arg(long, global = true, env = "NEGBETA_PRECISION", default_value_t = 4096)]
    precision: u32,

    /// Worker threads for enumeration and search (0 picks the core count).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,

    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Include wall-clock time in the JSON envelope.
    #[arg(long, global = true)]
    timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Landmarks, digits, threshold word and B- of a permutation.
    Analyze { perm: String },
    /// All of S_n grouped by B-.
    Spectrum {
        n: usize,
        /// Merge lengths 2 through n into one table.
        #[arg(long)]
        upto: bool,
    },
    /// Number of permutations with B- = 1 for each length up to nmax.
    CountB1 { nmax: usize },
    /// The largest B- over S_n and the permutations using the full alphabet.
    Extremal {
        n: usize,
        /// Report only the predicted families without enumerating S_n.
        #[arg(long)]
        skip_exhaustive: bool,
    },
    /// A permutation whose threshold word is the given expansion of 1.
    Invert { word: String },
    /// Expansion of 1 in base -beta.
    Expansion {
        #[arg(long)]
        beta: String,
        #[arg(long, default_value_t = 64)]
        digits: usize,
    },
    /// Whether an eventually periodic word lies in the shift space of -beta.
    Member {
        word: String,
        #[arg(long)]
        beta: String,
        /// Digit budget for a non-periodic expansion of 1.
        #[arg(long, default_value_t = 1024)]
        digits: usize,
    },
    /// Ordinal pattern of the first n shifts of a word.
    Pat { word: String, n: usize },
    /// Smallest alphabet whose shift realizes the permutation, by search.
    Realize {
        perm: String,
        #[arg(long)]
        max_prefix: Option<usize>,
        #[arg(long)]
        max_period: Option<usize>,
        #[arg(long)]
        max_alphabet: Option<usize>,
    },
    /// Realizability just above, just below and at the threshold.
    Verify {
        perm: String,
        #[arg(long, default_value = "0.05")]
        margin: String,
    },
    /// Randomized spot checks of the core invariants.
    Check {
        #[arg(long, default_value_t = 200)]
        cases: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Analyze { .. } => "analyze",
            Command::Spectrum { .. } => "spectrum",
            Command::CountB1 { .. } => "count-b1",
            Command::Extremal { .. } => "extremal",
            Command::Invert { .. } => "invert",
            Command::Expansion { .. } => "expansion",
            Command::Member { .. } => "member",
            Command::Pat { .. } => "pat",
            Command::Realize { .. } => "realize",
            Command::Verify { .. } => "verify",
            Command::Check { .. } => "check",
        }
    }
}

#[derive(Serialize)]
struct PrecisionEcho {
    start_bits: u32,
    max_bits: u32,
}

#[derive(Serialize)]
struct ErrorBody {
    reason: &'static str,
    message: String,
    exit_code: u8,
}

#[derive(Serialize)]
struct Envelope<'a> {
    schema: &'static str,
    command: &'a str,
    inputs: Value,
    precision: PrecisionEcho,
    #[serde(skip_serializing_if = "Option::is_none")]
    result: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<ErrorBody>,
    #[serde(skip_serializing_if = "Option::is_none")]
    timing_ms: Option<u128>,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::UndecidableAtPrecision { .. } => 3,
        Error::SearchInconclusive(_) => 4,
        _ => 2,
    }
}

fn precision(bits: u32) -> Result<Precision, Error> {
    if bits < 32 {
        return Err(Error::InvalidArgument(format!("precision must be at least 32 bits, got {bits}")));
    }
    Ok(Precision { start_bits: bits.min(128), max_bits: bits })
}

fn beta(s: &str) -> Result<BetaValue, Error> {
    s.parse()
}

fn run(command: &Command, precision: Precision, seed: u64) -> Result<Outcome, Error> {
    match command {
        Command::Analyze { perm } => commands::analyze_cmd(&commands::parse_perm(perm)?),
        Command::Spectrum { n, upto } => commands::spectrum_cmd(*n, *upto),
        Command::CountB1 { nmax } => commands::count_b1_cmd(*nmax),
        Command::Extremal { n, skip_exhaustive } => commands::extremal_cmd(*n, !skip_exhaustive),
        Command::Invert { word } => commands::invert_cmd(&commands::parse_word(word)?, precision),
        Command::Expansion { beta: b, digits } => commands::expansion_cmd(&beta(b)?, *digits, precision),
        Command::Member { word, beta: b, digits } => {
            commands::member_cmd(&commands::parse_word(word)?, &beta(b)?, *digits, precision)
        }
        Command::Pat { word, n } => commands::pat_cmd(&commands::parse_word(word)?, *n),
        Command::Realize { perm, max_prefix, max_period, max_alphabet } => {
            let pi = commands::parse_perm(perm)?;
            let d = AlphabetBounds::for_length(pi.len());
            let bounds = AlphabetBounds {
                max_prefix: max_prefix.unwrap_or(d.max_prefix),
                max_period: max_period.unwrap_or(d.max_period),
                max_alphabet: max_alphabet.unwrap_or(d.max_alphabet),
            };
            commands::realize_cmd(&pi, bounds)
        }
        Command::Verify { perm, margin } => {
            commands::verify_cmd(&commands::parse_perm(perm)?, &commands::parse_rational(margin)?, precision)
        }
        Command::Check { cases } => commands::check_cmd(*cases, seed, precision),
    }
}

/// Canonical inputs for the error envelope, when the arguments did not parse.
fn raw_inputs(command: &Command) -> Value {
    match command {
        Command::Analyze { perm } | Command::Realize { perm, .. } | Command::Verify { perm, .. } => {
            json!({ "pi": perm })
        }
        Command::Invert { word } | Command::Pat { word, .. } | Command::Member { word, .. } => json!({ "word": word }),
        Command::Expansion { beta, .. } => json!({ "beta": beta }),
        Command::Spectrum { n, .. } | Command::Extremal { n, .. } => json!({ "n": n }),
        Command::CountB1 { nmax } => json!({ "nmax": nmax }),
        Command::Check { cases } => json!({ "cases": cases }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.jobs > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global() {
            eprintln!("error: cannot start {} workers: {e}", cli.jobs);
            return ExitCode::from(2);
        }
    }
    let start = Instant::now();
    let name = cli.command.name();
    let prec = precision(cli.precision);
    let outcome = prec.clone().and_then(|p| run(&cli.command, p, cli.seed));
    let elapsed = cli.timing.then(|| start.elapsed().as_millis());
    let echo = prec.map_or(PrecisionEcho { start_bits: 0, max_bits: cli.precision }, |p| PrecisionEcho {
        start_bits: p.start_bits,
        max_bits: p.max_bits,
    });

    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let code = match outcome {
        Ok(o) => {
            let rendered = match cli.format {
                Format::Json => {
                    let env = Envelope {
                        schema: SCHEMA,
                        command: name,
                        inputs: o.inputs,
                        precision: echo,
                        result: Some(o.result),
                        error: None,
                        timing_ms: elapsed,
                    };
                    serde_json::to_string_pretty(&env).expect("serializable envelope") + "\n"
                }
                Format::Csv => o.table.to_csv(),
                Format::Text => o.text,
            };
            if out.write_all(rendered.as_bytes()).is_err() {
                return ExitCode::from(2);
            }
            o.status as u8
        }
        Err(e) => {
            let code = exit_code(&e);
            if cli.format == Format::Json {
                let env = Envelope {
                    schema: SCHEMA,
                    command: name,
                    inputs: raw_inputs(&cli.command),
                    precision: echo,
                    result: None,
                    error: Some(ErrorBody { reason: e.reason(), message: e.to_string(), exit_code: code }),
                    timing_ms: elapsed,
                };
                let _ = writeln!(out, "{}", serde_json::to_string_pretty(&env).expect("serializable envelope"));
            }
            eprintln!("error[{}]: {e}", e.reason());
            code
        }
    };
    ExitCode::from(code)
}
