//! `witten`: command-line driver for the witten-core library.

mod commands;
mod report;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use report::Format;

#[derive(Parser, Debug)]
#[command(name = "witten", version, about = "Eisenstein series, Witten classes, regularized Pfaffians and localization checks")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Number of q-coefficients kept in every series.
    #[arg(long, global = true, default_value_t = 10)]
    pub q_order: i64,
    /// Lattice truncation bound.
    #[arg(long, global = true, default_value_t = 50)]
    pub shell_bound: u64,
    /// Modular parameter as real and imaginary part.
    #[arg(long, global = true, num_args = 2, value_names = ["RE", "IM"], default_values = ["0", "2"], allow_hyphen_values = true)]
    pub tau: Vec<String>,
    /// Lattice ordering: shells, z2plus or row-major (default: row-major for k = 1, shells otherwise).
    #[arg(long, global = true)]
    pub ordering: Option<String>,
    /// Scalars used for the numeric product table.
    #[arg(long, global = true, value_enum, default_value_t = ScalarMode::Float)]
    pub scalar_mode: ScalarMode,
    /// Numeric tolerance for identity checks.
    #[arg(long, global = true, default_value_t = 1e-6)]
    pub tolerance: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum ScalarMode {
    /// Exact Gaussian rationals in pi.
    Exact,
    /// Double-precision complex numbers.
    Float,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// q-expansion, lattice value and transformation residuals of E_2k.
    Eisenstein {
        #[arg(long)]
        k: u32,
        /// Fail when the normalized lattice value misses the q-series by more than the tolerance.
        #[arg(long)]
        check: bool,
    },
    /// Witten class of a splitting-principle model.
    WittenClass {
        #[arg(long, default_value_t = 1)]
        rank: usize,
        #[arg(long, default_value_t = 8)]
        dim: u32,
    },
    /// Witten genus of a manifold given by its Pontryagin numbers.
    Genus {
        /// Descriptor JSON: {"dim": 8, "pontryagin_numbers": {"1,1": "0", "2": "1"}}
        descriptor: String,
    },
    /// Write a q-series in E2, E4, E6.
    Decompose {
        /// Series JSON: {"weight": 4, "min_exp": 0, "coeffs": ["1", "240"], "order": 2}
        series: Option<String>,
        /// Comma-separated coefficients from q^0, used instead of a file.
        #[arg(long, conflicts_with = "series", allow_hyphen_values = true)]
        coeffs: Option<String>,
        #[arg(long, requires = "coeffs")]
        weight: Option<i32>,
    },
    /// Convergence of the regularized mode product with the truncation bound.
    PfaffianProduct {
        #[arg(long, default_value_t = 1)]
        rank: usize,
        #[arg(long, default_value_t = 8)]
        dim: u32,
    },
    /// Check delta(Wit) = dA for a model.
    Anomaly {
        #[arg(long, default_value_t = 1)]
        rank: usize,
        #[arg(long, default_value_t = 8)]
        dim: u32,
    },
    /// Fixed-point localization on the sphere.
    Localize {
        /// Problem JSON: {"alpha0": "z", "g": "-1", "s": "1", "grid": 512}
        problem: String,
        /// Also run the exponential family exp(t alpha) at these t.
        #[arg(long, value_delimiter = ',')]
        t: Vec<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (output, status) = commands::run(&cli);
    print!("{output}");
    match status {
        commands::Status::Ok => ExitCode::SUCCESS,
        commands::Status::InputError(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        commands::Status::VerificationFailed(msg) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(2)
        }
    }
}
