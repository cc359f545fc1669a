//! Command-line grammar and the validated run configuration.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use phizeta::series::DEFAULT_MAX_TERMS;
use phizeta::{Precision, Real};

use crate::CliError;

pub const DEFAULT_SEED: u64 = 20240611;

#[derive(Debug, Parser)]
#[command(name = "phizeta", version, about = "Verify Fibonacci/Lucas zeta series identities to high precision")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Working precision P in decimal digits (at least 30).
    #[arg(long, global = true, default_value_t = 50, env = "PHIZETA_DIGITS")]
    pub digits: u32,
    /// Identity tolerance is 10^(−TOL_EXP); defaults to P − 20.
    #[arg(long, global = true, env = "PHIZETA_TOL_EXP", allow_negative_numbers = true)]
    pub tol_exp: Option<i32>,
    /// Cap on directly summed series terms.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_TERMS, env = "PHIZETA_MAX_TERMS")]
    pub max_terms: usize,
    /// Seed for random functional-equation points.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED, env = "PHIZETA_SEED")]
    pub seed: u64,
    /// Emit a structured JSON report instead of text.
    #[arg(long, global = true, env = "PHIZETA_JSON")]
    pub json: bool,
    /// Write output to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE", env = "PHIZETA_OUT")]
    pub out: Option<PathBuf>,
    /// Worker threads for verification (default: available cores).
    #[arg(long, global = true, env = "PHIZETA_JOBS")]
    pub jobs: Option<usize>,
    #[arg(long, global = true, hide = true, env = "PHIZETA_INJECT_FAULT")]
    pub inject_fault: Option<Fault>,
}

/// Harness self-test faults.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Fault {
    /// Flip the sign of one Bernoulli number.
    BernoulliSign,
    /// Corrupt one worked-example constant in the catalog.
    ExampleConstant,
}

#[derive(Debug, Args, Default)]
pub struct Filter {
    /// Restrict to one family (e.g. EXAMPLE, COR3_F).
    #[arg(long)]
    pub family: Option<String>,
    /// Only entries whose series diverges.
    #[arg(long, conflicts_with = "convergent")]
    pub divergent: bool,
    /// Only entries whose series converges.
    #[arg(long)]
    pub convergent: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the identity catalog.
    List {
        #[command(flatten)]
        filter: Filter,
    },
    /// Verify catalog identities.
    Verify {
        /// Identity id; may be repeated.
        #[arg(long = "id", value_name = "ID")]
        ids: Vec<String>,
        /// Verify every entry that passes the filters.
        #[arg(long, conflicts_with = "ids")]
        all: bool,
        #[command(flatten)]
        filter: Filter,
    },
    /// Sum an F or L series directly and through polygamma values.
    Sum {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        m: u32,
        #[arg(long, allow_negative_numbers = true)]
        r: i64,
        /// Rational argument, e.g. 1/3 or -0.25.
        #[arg(long, allow_negative_numbers = true)]
        z: String,
    },
    /// Evaluate a single kernel.
    Eval {
        #[command(subcommand)]
        kernel: Kernel,
    },
    /// Build a new instance of a generating family.
    Generate {
        #[arg(long)]
        family: String,
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 3, allow_negative_numbers = true)]
        r: i64,
        /// Also verify the generated identity.
        #[arg(long)]
        verify: bool,
    },
    /// Run every residual grid, oracle check and catalog verification.
    Selftest,
}

/// A point a + b√5 given as two rational literals.
#[derive(Debug, Args)]
pub struct Point {
    /// Rational part.
    #[arg(long, allow_negative_numbers = true)]
    pub x: String,
    /// Coefficient of √5.
    #[arg(long = "x-sqrt5", default_value = "0", allow_negative_numbers = true)]
    pub x_sqrt5: String,
}

#[derive(Debug, Subcommand)]
pub enum Kernel {
    /// ψ⁽ᵐ⁾(x)
    Polygamma {
        #[arg(long)]
        m: u32,
        #[command(flatten)]
        point: Point,
    },
    /// ζ(k) for integer k ≥ 2
    Zeta {
        #[arg(long)]
        k: u32,
    },
    /// dᵐ/dxᵐ cot(πx)
    Cot {
        #[arg(long)]
        m: u32,
        #[command(flatten)]
        point: Point,
    },
    /// Bernoulli number B_n
    Bernoulli {
        #[arg(long)]
        n: usize,
    },
    /// Fibonacci and Lucas numbers F_n, L_n
    Fib {
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
    },
}

/// Validated settings shared by every command.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub precision: Precision,
    /// Identity tolerance 10^(−tol_exp).
    pub tol_exp: i32,
    pub max_terms: usize,
    pub seed: u64,
    pub json: bool,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub fault: Option<Fault>,
}

impl RunConfig {
    pub fn from_args(g: &GlobalArgs) -> Result<RunConfig, CliError> {
        let precision = Precision::new(g.digits).map_err(|_| {
            CliError::Usage(format!("--digits must be at least {}, got {}", Precision::MIN_DIGITS, g.digits))
        })?;
        let p = g.digits as i32;
        let tol_exp = g.tol_exp.unwrap_or(p - 20);
        if tol_exp >= p - 10 {
            return Err(CliError::Usage(format!(
                "tolerance exponent must be below P - 10 = {}, got {tol_exp}",
                p - 10
            )));
        }
        if g.jobs == Some(0) {
            return Err(CliError::Usage("--jobs must be positive".into()));
        }
        Ok(RunConfig {
            precision,
            tol_exp,
            max_terms: g.max_terms,
            seed: g.seed,
            json: g.json,
            out: g.out.clone(),
            jobs: g.jobs,
            fault: g.inject_fault,
        })
    }

    pub fn tolerance(&self) -> Real {
        Real::pow10(-self.tol_exp, self.precision.working_bits())
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            precision: Precision::DEFAULT,
            tol_exp: Precision::DEFAULT.digits() as i32 - 20,
            max_terms: DEFAULT_MAX_TERMS,
            seed: DEFAULT_SEED,
            json: false,
            out: None,
            jobs: None,
            fault: None,
        }
    }
}
