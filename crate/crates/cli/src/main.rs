//! `kbonacci`: generate k-generalized Fibonacci numbers, their dominant-root
//! approximations and error terms, and check the rounding formula.

mod commands;
mod output;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kbonacci::QuadraticSurd;

use output::Format;

#[derive(Debug, Parser)]
#[command(name = "kbonacci", version, about = "k-generalized Fibonacci numbers with certified rounding")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    global: Global,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,

    /// Working precision in bits (starting precision for certified rounding).
    #[arg(
        long,
        global = true,
        env = "KBONACCI_PRECISION",
        value_parser = clap::value_parser!(u32).range(32..=1 << 20)
    )]
    pub precision: Option<u32>,

    /// Decimal places for approximate values.
    #[arg(long, global = true)]
    pub decimals: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sequence values F_n for n in a range.
    Gen {
        #[arg(value_parser = order)]
        k: usize,
        /// `n` or `lo..hi` (inclusive).
        #[arg(value_parser = range, allow_hyphen_values = true)]
        range: (i64, i64),
        #[arg(long, value_enum, default_value_t = Method::Iter)]
        method: Method,
    },
    /// Dominant root enclosure, its bounds, and optionally every root.
    Roots {
        #[arg(value_parser = order)]
        k: usize,
        #[arg(long)]
        all: bool,
    },
    /// Exact terms, dominant terms and the error between them.
    Errors {
        #[arg(value_parser = order)]
        k: usize,
        #[arg(value_parser = range, allow_hyphen_values = true)]
        range: (i64, i64),
    },
    /// Sweep every check over k <= K and n <= N.
    Verify {
        #[arg(long, default_value_t = 10, value_parser = order)]
        k_max: usize,
        #[arg(long, default_value_t = 300, value_parser = clap::value_parser!(i64).range(1..))]
        n_max: i64,
    },
    /// First index from which rounding c * b^n reproduces a sequence.
    Threshold(ThresholdArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Iter,
    Matrix,
    Round,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    ScaledFib,
    Gn,
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    #[arg(long, value_enum, conflicts_with_all = ["coeff", "base", "seq", "n_start"], required_unless_present = "seq")]
    pub preset: Option<Preset>,

    /// Coefficient c, as a decimal.
    #[arg(long, value_parser = decimal, allow_hyphen_values = true, requires_all = ["base", "seq"])]
    pub coeff: Option<QuadraticSurd>,

    /// Base b, as a decimal greater than 1.
    #[arg(long, value_parser = decimal, requires_all = ["coeff", "seq"])]
    pub base: Option<QuadraticSurd>,

    /// File with one integer per line; the first line is index n-start.
    #[arg(long, requires_all = ["coeff", "base"])]
    pub seq: Option<PathBuf>,

    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub n_start: i64,

    /// Last index tested (presets default to 40).
    #[arg(long)]
    pub n_max: Option<i64>,
}

fn order(s: &str) -> Result<usize, String> {
    let k: usize = s.parse().map_err(|_| format!("`{s}` is not a non-negative integer"))?;
    if k < 2 {
        return Err(format!("order must be at least 2, got {k}"));
    }
    Ok(k)
}

fn range(s: &str) -> Result<(i64, i64), String> {
    let parse = |t: &str| t.trim().parse::<i64>().map_err(|_| format!("`{t}` is not an integer"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let n = parse(s)?;
            (n, n)
        }
    };
    if lo > hi {
        return Err(format!("empty range {lo}..{hi}"));
    }
    Ok((lo, hi))
}

fn decimal(s: &str) -> Result<QuadraticSurd, String> {
    QuadraticSurd::parse_decimal(s).ok_or_else(|| format!("`{s}` is not a decimal number"))
}

/// A failure after argument parsing, with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn check(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }
}

impl From<kbonacci::Error> for Failure {
    fn from(e: kbonacci::Error) -> Self {
        match e {
            kbonacci::Error::InvalidInput(_) | kbonacci::Error::MalformedRange(_) => Failure::usage(e.to_string()),
            _ => Failure::check(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let g = &cli.global;
    let result = match cli.command {
        Command::Gen { k, range, method } => commands::gen(g, k, range, method),
        Command::Roots { k, all } => commands::roots(g, k, all),
        Command::Errors { k, range } => commands::errors(g, k, range),
        Command::Verify { k_max, n_max } => commands::verify(g, k_max, n_max),
        Command::Threshold(args) => commands::threshold(g, &args),
    };
    // A record may come back together with a failure (verify found mismatches).
    let (record, failure) = match result {
        Ok(r) => (Some(r), None),
        Err(commands::Outcome { record, failure }) => (record, Some(failure)),
    };
    if let Some(record) = record {
        let stdout = io::stdout();
        let mut out = stdout.lock();
        if let Err(e) = record.write(g.format, &mut out).and_then(|_| out.flush()) {
            if e.kind() != io::ErrorKind::BrokenPipe {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
        }
    }
    match failure {
        None => ExitCode::SUCCESS,
        Some(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn ranges() {
        assert_eq!(range("1..9"), Ok((1, 9)));
        assert_eq!(range("1..=9"), Ok((1, 9)));
        assert_eq!(range("-1..0"), Ok((-1, 0)));
        assert_eq!(range("7"), Ok((7, 7)));
        assert!(range("9..1").is_err());
        assert!(range("a..b").is_err());
    }

    #[test]
    fn orders() {
        assert_eq!(order("2"), Ok(2));
        assert!(order("1").is_err());
        assert!(order("-3").is_err());
    }
}
