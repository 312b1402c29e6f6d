//! Command-line surface. Every parsed struct is also serialized back into the
//! report as the resolved configuration.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug, Serialize)]
#[command(name = "refspline", version, about = "Refinability of box splines under algebraic dilations")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Working precision of ball arithmetic, in bits.
    #[arg(long, global = true, default_value_t = 128, value_parser = clap::value_parser!(u32).range(32..=4096))]
    pub prec: u32,
    /// Seed for sampled evaluation points.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Either an instance file or inline parameters.
#[derive(Args, Debug, Serialize, Clone, Default)]
pub struct InstanceArgs {
    /// JSON instance file (as written by `mask`).
    #[arg(long, conflicts_with_all = ["field", "lambda", "columns"])]
    pub instance: Option<PathBuf>,
    /// Field Q(t) with t^k = n, given as `n,k`.
    #[arg(long)]
    pub field: Option<String>,
    /// Dilation as a field element, e.g. `t` or `3/2`.
    #[arg(long)]
    pub lambda: Option<String>,
    /// Columns separated by `;`, vector entries by `,`.
    #[arg(long, allow_hyphen_values = true)]
    pub columns: Option<String>,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Decide refinability of an instance.
    Check {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Check the instance's claimed mask against the exact identity.
        #[arg(long)]
        verify_mask: bool,
    },
    /// Print the mask, its translations and coefficients.
    Mask {
        #[command(flatten)]
        instance: InstanceArgs,
    },
    /// Integer-dilation divisibility test for Q(z) = (z-1)^(d+1) P(z).
    Lawton {
        /// Coefficients p_0,...,p_K of P, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        m: u64,
    },
    /// Construct and verify a nested-interval certificate.
    Erdos {
        #[arg(long)]
        field: Option<String>,
        #[arg(long)]
        lambda: String,
        /// Target residues, `;` separated.
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        targets: String,
        #[arg(long, default_value_t = 8)]
        depth: u32,
        /// A constant smaller than the default one.
        #[arg(long)]
        c: Option<String>,
        /// Also check this many exponents past the guaranteed depth.
        #[arg(long, default_value_t = 0)]
        extra: i64,
    },
    /// Solve the refinement equation on a grid.
    Cascade {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, default_value_t = 4096)]
        grid: usize,
        #[arg(long, default_value_t = 25)]
        iters: usize,
    },
    /// Compare the truncated Fourier product with the closed-form transform.
    Ftprobe {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, default_value_t = 40)]
        jmax: usize,
        #[arg(long, default_value_t = 100)]
        points: usize,
        /// Sample frequencies from [-range, range].
        #[arg(long, default_value_t = 50)]
        range: u32,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Certify a lower bound on the mask along a dilation orbit.
    Decay {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, default_value_t = 200)]
        jmax: usize,
    },
    /// Decide refinability of a multivariate instance.
    Mvcheck {
        #[command(flatten)]
        instance: InstanceArgs,
    },
    /// Reproduce the irrational-dilation counterexample.
    Counterexample,
    /// Compare the spline with the scaled convolution of dilated refinable factors.
    FactorizeCheck {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, default_value_t = 4096)]
        grid: usize,
        #[arg(long, default_value_t = 25)]
        iters: usize,
        #[arg(long, default_value_t = 1e-2)]
        tol: f64,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Check { .. } => "check",
            Command::Mask { .. } => "mask",
            Command::Lawton { .. } => "lawton",
            Command::Erdos { .. } => "erdos",
            Command::Cascade { .. } => "cascade",
            Command::Ftprobe { .. } => "ftprobe",
            Command::Decay { .. } => "decay",
            Command::Mvcheck { .. } => "mvcheck",
            Command::Counterexample => "counterexample",
            Command::FactorizeCheck { .. } => "factorize-check",
        }
    }
}
