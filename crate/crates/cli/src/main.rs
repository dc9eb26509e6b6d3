//! Command-line front end for the `jacobi-spectra` toolkit.
//!
//! Every command prints one JSON document to stdout (or `--output`),
//! with a fixed field order and floats at 17 significant digits, so
//! repeated runs with the same flags are byte-identical.  `--pretty`
//! adds a human summary on stderr without touching the JSON.
//!
//! Exit codes: `0` success, `1` verification failure, `2` input error,
//! `3` numerical failure, `4` I/O error.

// `!(x > 0.0)`-style guards deliberately treat NaN as invalid input;
// the direct comparison `x <= 0.0` would let NaN through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod report;
mod svg;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::CliError;

#[derive(Parser, Debug)]
#[command(
    name = "jacobi-spectra",
    version,
    about = "Band structure, density of states, and spectral-measure bounds for periodic Jacobi operators",
    after_help = "Exit codes: 0 success, 1 verification failure, 2 input error, 3 numerical failure, 4 I/O error.\n\
                  Set JACOBI_SPECTRA_THREADS to cap suite parallelism (output order is fixed either way)."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Model selection shared by the commands that need an operator.
#[derive(Args, Clone, Debug)]
struct ModelArgs {
    /// Builder name (`free`, `constant`, `two-value`), a path to a model
    /// JSON file, or an inline JSON object
    /// `{"period": q, "a": [...], "b": [...], "label": "..."}`.
    #[arg(long)]
    model: Option<String>,

    /// Period for the `free` and `constant` builders.
    #[arg(long)]
    q: Option<usize>,

    /// Off-diagonal value for the `constant` builder (must be positive).
    #[arg(long)]
    a: Option<f64>,

    /// Diagonal value for the `constant` builder.
    #[arg(long, allow_negative_numbers = true)]
    b: Option<f64>,

    /// Upper diagonal level for the `two-value` builder.
    #[arg(long = "R", allow_negative_numbers = true)]
    r: Option<f64>,

    /// Number of zero-diagonal sites per period for `two-value` [default: 1].
    #[arg(long)]
    m: Option<usize>,

    /// Number of R-level sites per period for `two-value` [default: 1].
    #[arg(long)]
    l: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Band decomposition of the spectrum with per-band length caps.
    Bands {
        #[command(flatten)]
        model: ModelArgs,
        /// Tolerance for the cap and equality checks.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Also print a human summary to stderr.
        #[arg(long, default_value_t = false)]
        pretty: bool,
    },

    /// Integrated density of states sampled over an energy window.
    Ids {
        #[command(flatten)]
        model: ModelArgs,
        /// Energy window "left,right" (defaults to the spectral hull).
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        /// Number of grid points.
        #[arg(long, default_value_t = 201)]
        grid: usize,
        /// Use the n-site truncation counting method instead of the
        /// exact band formula (n must be at least the period).
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = false)]
        pretty: bool,
    },

    /// Window bounds on the spectral measure over deepening sections.
    Bound {
        #[command(flatten)]
        model: ModelArgs,
        /// Energy window "left,right"; `inf` and `-inf` are accepted
        /// (default: the whole line).
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        /// Evaluate sections of n = q, 2q, ..., tq sites.
        #[arg(long, default_value_t = 4)]
        t: usize,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = false)]
        pretty: bool,
    },

    /// Run verification suites (seeded, deterministic).
    Verify {
        /// Restrict the checks to this model instead of the random
        /// families (only suites that make sense per-model are allowed).
        #[command(flatten)]
        model: ModelArgs,
        /// Seed for the randomized families.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Comma-separated suite names, or `all`.
        #[arg(long, default_value = "all")]
        suites: String,
        /// Tolerance for model-scoped cap/equality checks.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = false)]
        pretty: bool,
    },

    /// Plot the discriminant with band segments as a standalone SVG.
    Plot {
        #[command(flatten)]
        model: ModelArgs,
        /// Energy range "left,right" to draw (defaults to the padded hull).
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        /// Number of curve sample points (at least 2).
        #[arg(long, default_value_t = 800)]
        grid: usize,
        /// Path of the SVG file to write.
        #[arg(long)]
        output: PathBuf,
        #[arg(long, default_value_t = false)]
        pretty: bool,
    },

    /// List the built-in model builders and the flags they take.
    Models {
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = false)]
        pretty: bool,
    },
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Bands {
            model,
            tol,
            output,
            pretty,
        } => commands::cmd_bands(&model, tol, output.as_deref(), pretty),
        Command::Ids {
            model,
            window,
            grid,
            n,
            output,
            pretty,
        } => commands::cmd_ids(
            &model,
            window.as_deref(),
            grid,
            n,
            output.as_deref(),
            pretty,
        ),
        Command::Bound {
            model,
            window,
            t,
            output,
            pretty,
        } => commands::cmd_bound(&model, window.as_deref(), t, output.as_deref(), pretty),
        Command::Verify {
            model,
            seed,
            suites,
            tol,
            output,
            pretty,
        } => commands::cmd_verify(&model, seed, &suites, tol, output.as_deref(), pretty),
        Command::Plot {
            model,
            window,
            grid,
            output,
            pretty,
        } => commands::cmd_plot(&model, window.as_deref(), grid, &output, pretty),
        Command::Models { output, pretty } => commands::cmd_models(output.as_deref(), pretty),
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(err.exit_code());
        }
    }
}
