//! `qdcomp`: entropies, optimal code lengths and dynamical entropy rates of
//! quantum sources from the command line.
//!
//! Exit codes: 0 success, 1 golden-value mismatch, 2 usage or input error,
//! 3 resource cap exceeded.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qdcomp_core::numkit::{Caps, Tolerances};

mod commands;
mod error;
mod format;
pub mod golden;

pub use error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "qdcomp",
    version,
    about = "Quantum data compression rates of stochastic ensembles"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Von Neumann entropy of the k-symbol ensemble state.
    Entropy,
    /// Optimal length-eigenstate code length for the k-symbol ensemble state.
    OptimalLength,
    /// S(ρ_k), S(ρ_k)/k and EL*_k for k = 1..kmax.
    DynamicalEntropy {
        /// Number of trailing values whose maximum estimates the limsup.
        #[arg(long, default_value_t = 3)]
        tail: usize,
        /// Skip the optimal code lengths.
        #[arg(long)]
        no_lengths: bool,
    },
    /// Recompute a built-in example and compare it with its golden values.
    Reproduce {
        #[arg(value_parser = ["bell", "trine", "iid-demo"])]
        name: String,
    },
    /// Kraft sums, decodability and canonical prefix codes.
    Kraft {
        /// Comma-separated codeword lengths.
        #[arg(long, value_delimiter = ',', conflicts_with = "code")]
        lengths: Option<Vec<usize>>,
        /// Classical code file, `{"0": "0", "1": "10", …}`.
        #[arg(long)]
        code: Option<PathBuf>,
    },
    /// Huffman code of a probability vector.
    Huffman {
        /// Comma-separated probabilities.
        #[arg(long, value_delimiter = ',', conflicts_with = "pmf_file")]
        pmf: Option<Vec<f64>>,
        /// JSON array of probabilities.
        #[arg(long)]
        pmf_file: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Table,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Model file (JSON).
    #[arg(long, global = true)]
    pub model: Option<PathBuf>,
    /// String length k.
    #[arg(long, global = true, conflicts_with = "kmax")]
    pub k: Option<usize>,
    /// Largest string length.
    #[arg(long, global = true)]
    pub kmax: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Largest matrix dimension.
    #[arg(long, global = true)]
    pub max_dim: Option<usize>,
    /// Largest number of explicitly enumerated symbol strings.
    #[arg(long, global = true)]
    pub max_enum: Option<usize>,
    /// Tolerance override, `NAME=VALUE` with NAME one of norm, herm, trace,
    /// psd, eig, zero, ent, stat.
    #[arg(long = "tol", global = true, value_name = "NAME=VALUE")]
    pub tolerances: Vec<String>,
}

/// Validated settings shared by every command.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub model: Option<PathBuf>,
    pub k: Option<usize>,
    pub format: Format,
    pub caps: Caps,
    pub tol: Tolerances,
}

impl RunConfig {
    pub fn from_args(args: &CommonArgs) -> Result<Self, CliError> {
        let k = args.k.or(args.kmax);
        if k == Some(0) {
            return Err(CliError::Usage("k must be at least 1".into()));
        }
        let mut caps = Caps::DEFAULT;
        for (value, slot, flag) in [
            (args.max_dim, &mut caps.max_dim, "--max-dim"),
            (args.max_enum, &mut caps.max_enum, "--max-enum"),
        ] {
            if let Some(v) = value {
                if v == 0 {
                    return Err(CliError::Usage(format!("{flag} must be at least 1")));
                }
                *slot = v;
            }
        }
        let mut tol = Tolerances::DEFAULT;
        for spec in &args.tolerances {
            let (name, value) = spec.split_once('=').ok_or_else(|| {
                CliError::Usage(format!("--tol expects NAME=VALUE, got {spec:?}"))
            })?;
            let value: f64 = value
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite() && *v >= 0.0)
                .ok_or_else(|| CliError::Usage(format!("invalid tolerance value in {spec:?}")))?;
            let slot = match name {
                "norm" => &mut tol.norm,
                "herm" => &mut tol.herm,
                "trace" => &mut tol.trace,
                "psd" => &mut tol.psd,
                "eig" => &mut tol.eig,
                "zero" => &mut tol.zero,
                "ent" => &mut tol.ent,
                "stat" => &mut tol.stat,
                _ => return Err(CliError::Usage(format!("unknown tolerance {name:?}"))),
            };
            *slot = value;
        }
        Ok(Self {
            model: args.model.clone(),
            k,
            format: args.format,
            caps,
            tol,
        })
    }
}

/// Runs one command, writing its result to `out`.
pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let config = RunConfig::from_args(&cli.common)?;
    match &cli.command {
        Command::Entropy => commands::entropy(&config, out),
        Command::OptimalLength => commands::optimal_length(&config, out),
        Command::DynamicalEntropy { tail, no_lengths } => {
            commands::dynamical_entropy(&config, *tail, !no_lengths, out)
        }
        Command::Reproduce { name } => commands::reproduce(&config, name, out),
        Command::Kraft { lengths, code } => {
            commands::kraft(&config, lengths.as_deref(), code.as_deref(), out)
        }
        Command::Huffman { pmf, pmf_file } => {
            commands::huffman(&config, pmf.as_deref(), pmf_file.as_deref(), out)
        }
    }
}

/// Parses `args`, runs the command and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    let mut buffer = Vec::new();
    let result = execute(&cli, &mut buffer);
    // partial output (a table before a golden mismatch) is still written
    let written = match &cli.common.out {
        Some(path) => std::fs::write(path, &buffer)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(&buffer)
            .map_err(|e| CliError::Usage(format!("cannot write output: {e}"))),
    };
    match result.and(written) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("qdcomp: {e}");
            e.exit_code()
        }
    }
}
