//! Command-line interface definition.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "poa", version, about = "Pseudo-observable algebra toolkit")]
pub struct Cli {
    /// Override the Hermitian-test threshold.
    #[arg(long, global = true)]
    pub tol_hermitian: Option<f64>,

    /// Override the eigenvalue clustering gap.
    #[arg(long, global = true)]
    pub tol_cluster: Option<f64>,

    /// Override the projector idempotency threshold.
    #[arg(long, global = true)]
    pub tol_idempotent: Option<f64>,

    /// Override the unitarity threshold.
    #[arg(long, global = true)]
    pub tol_unitary: Option<f64>,

    /// Override the zero threshold.
    #[arg(long, global = true)]
    pub tol_zero: Option<f64>,

    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub output: OutputFormat,

    /// Largest accepted matrix dimension.
    #[arg(long, global = true, default_value_t = 64)]
    pub max_dim: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Spectral decomposition of an observable.
    Decompose {
        file: PathBuf,
        /// Also apply a named function (identity, square, sqrt, abs,
        /// indicator:V) through the decomposition.
        #[arg(long)]
        apply: Option<String>,
    },
    /// Commutator [A, B] of two matrices.
    Commutator { a: PathBuf, b: PathBuf },
    /// Compatibility test of two observables.
    Compat { a: PathBuf, b: PathBuf },
    /// Joint refinement of the bases of compatible observables.
    Refine {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Build a complete set of compatible observables, or report why the
    /// inputs fall short.
    CompleteSet {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Express an observable as a function of a complete set.
    Express {
        a: PathBuf,
        #[arg(long = "set", required = true, num_args = 1..)]
        set: Vec<PathBuf>,
    },
    /// Dyad basis operations.
    Dyads {
        #[command(subcommand)]
        command: DyadsCommand,
    },
    /// Unitary change between two dyad bases.
    ChangeBasis { from: PathBuf, to: PathBuf },
    /// Swap unitary exchanging two projectors of a dyad basis.
    Swap {
        dyads: PathBuf,
        j0: usize,
        j1: usize,
    },
    /// Phase unitary over a dyad basis.
    Phase {
        dyads: PathBuf,
        #[arg(long, required = true, value_delimiter = ',', num_args = 1..)]
        phases: Vec<f64>,
    },
    /// Sample simultaneous outcomes of compatible observables.
    Simulate {
        model: PathBuf,
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(short = 'n', long = "draws", default_value_t = 10_000)]
        draws: usize,
        /// Overrides the model file's seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run the invariant suite against the inputs.
    Verify {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Seed for the randomized checks.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum DyadsCommand {
    /// Construct a normalized dyad basis over an elementary projector basis.
    Build {
        basis: PathBuf,
        /// Optional pool of seed-core matrices.
        #[arg(long = "cores", num_args = 1..)]
        cores: Vec<PathBuf>,
    },
    /// Components of a pseudo-observable over a dyad basis.
    Components {
        matrix: PathBuf,
        #[arg(long)]
        dyads: PathBuf,
    },
}
