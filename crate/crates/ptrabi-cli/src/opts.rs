//! Argument surface. Every numeric flag is validated again by the library
//! preconditions before any work happens; clap only enforces shape.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "ptrabi",
    version,
    about = "Quasi-exact solutions and Floquet verification for a driven two-level system with balanced gain and loss",
    propagate_version = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format; each subcommand has a natural default (tables emit
    /// csv, reports emit json).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Worker threads for grid evaluation (curve and figures).
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=1024))]
    pub threads: u32,

    /// Integrator tolerance for the verification subcommands.
    #[arg(long, global = true, default_value_t = 1e-12, allow_negative_numbers = true)]
    pub tol: f64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Exact integer Sturm bisection, refined to full f64 precision.
    #[default]
    Sturm,
    /// Balanced companion-matrix eigenvalues of the square-free part.
    Companion,
}

impl From<Method> for ptrabi_core::spectrum::RootMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::Sturm => ptrabi_core::spectrum::RootMethod::SturmExact,
            Method::Companion => ptrabi_core::spectrum::RootMethod::CompanionEigen,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the exactly normalized constraint polynomial in X = nu1^2/omega^2
    /// and G = gamma^2/omega^2 for resonance index n.
    Constraint {
        #[arg(long)]
        n: u32,
        /// Shorthand for --format json.
        #[arg(long, conflicts_with_all = ["pretty", "format"])]
        json: bool,
        /// Shorthand for --format pretty.
        #[arg(long, conflicts_with = "format")]
        pretty: bool,
    },

    /// Real nonnegative roots of a constraint slice at fixed g (roots in x)
    /// or fixed x (roots in g).
    Roots {
        #[arg(long)]
        n: u32,
        /// Fix g = gamma^2/omega^2 and solve for x.
        #[arg(long, conflicts_with = "x", allow_negative_numbers = true)]
        g: Option<f64>,
        /// Fix x = nu1^2/omega^2 and solve for g.
        #[arg(long, allow_negative_numbers = true)]
        x: Option<f64>,
        #[arg(long, value_enum, default_value_t)]
        method: Method,
    },

    /// Exactly degenerate gain/loss values at zero drive amplitude.
    Degeneracies {
        #[arg(long)]
        n: u32,
        /// Shorthand for --format json.
        #[arg(long, conflicts_with_all = ["pretty", "format"])]
        json: bool,
        /// Shorthand for --format pretty.
        #[arg(long, conflicts_with = "format")]
        pretty: bool,
    },

    /// Solve the finite block at an on-variety point for its null-space
    /// coefficients.
    Solve {
        #[arg(long)]
        n: u32,
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
        #[arg(long, allow_negative_numbers = true)]
        g: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        omega: f64,
    },

    /// Verify quasi-exact solutions against direct integration: ODE residual,
    /// Floquet multiplier, and monodromy trace per branch.
    Verify {
        #[arg(long)]
        n: u32,
        #[arg(long, allow_negative_numbers = true)]
        g: f64,
        /// Verify a single branch; all real nonnegative branches at g when
        /// omitted.
        #[arg(long, allow_negative_numbers = true)]
        x: Option<f64>,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        omega: f64,
    },

    /// Trace the branch-tagged constraint curves x(g) over a uniform grid.
    Curve {
        #[arg(long)]
        n: u32,
        #[arg(long, allow_negative_numbers = true)]
        gmax: f64,
        #[arg(long)]
        samples: u32,
    },

    /// One-period monodromy of the driven system at explicit physical
    /// parameters (no resonance condition required).
    Floquet {
        #[arg(long, allow_negative_numbers = true)]
        nu0: f64,
        #[arg(long, allow_negative_numbers = true)]
        nu1: f64,
        #[arg(long, allow_negative_numbers = true)]
        gamma: f64,
        #[arg(long, allow_negative_numbers = true)]
        omega: f64,
    },

    /// Check the commutation relations of the spin representation exactly,
    /// for every block size up to n.
    Sl2Check {
        #[arg(long)]
        n: u32,
    },

    /// Emit plot-data bundles: one constraint-curve CSV per n plus a
    /// manifest, with zero-drive degeneracy markers as branch=-1 rows.
    Figures {
        /// Comma-separated resonance indices.
        #[arg(long, value_delimiter = ',', required = true)]
        ns: Vec<u32>,
        #[arg(long, allow_negative_numbers = true)]
        gmax: f64,
        #[arg(long)]
        samples: u32,
        /// Directory receiving the CSV files and manifest.json.
        #[arg(long, value_name = "DIR")]
        out_dir: PathBuf,
        /// Overlay exactly two indices in a single CSV with an extra n
        /// column.
        #[arg(long)]
        doublet: bool,
    },
}
