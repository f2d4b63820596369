use anyhow::{bail, Result};
use causal_product::{ComplexParam, Interval};
use clap::{Args, ValueEnum};

/// Largest `s_max` the brute-force coefficient table accepts.
pub const S_MAX_CAP: u32 = 8;
/// Largest path length the path listing accepts.
pub const PATH_S_CAP: u32 = 12;
/// Largest dimension accepted by `converge`.
pub const N_CAP: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Left end of the interval.
    #[arg(
        long,
        global = true,
        default_value_t = 0.0,
        allow_negative_numbers = true
    )]
    pub a: f64,
    /// Right end of the interval.
    #[arg(
        long,
        global = true,
        default_value_t = 1.0,
        allow_negative_numbers = true
    )]
    pub b: f64,
    /// Real part of the parameter.
    #[arg(
        long,
        global = true,
        default_value_t = 1.0,
        allow_negative_numbers = true
    )]
    pub lambda: f64,
    /// Imaginary part of the parameter.
    #[arg(
        long,
        global = true,
        default_value_t = 0.5,
        allow_negative_numbers = true
    )]
    pub mu: f64,
    /// Matrix dimension or grid size.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Comma-separated increasing list of dimensions.
    #[arg(long, global = true, value_delimiter = ',')]
    pub n_list: Option<Vec<usize>>,
    /// Largest degree (coefficients) or path length (paths).
    #[arg(long, global = true, default_value_t = 6)]
    pub s_max: u32,
    /// Pass/fail tolerance.
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol: f64,
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the artifact here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<std::path::PathBuf>,
    /// Seed for randomized orderings.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

/// Validated run parameters.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub interval: Interval,
    pub nu: ComplexParam,
    pub n: Option<usize>,
    pub n_list: Option<Vec<usize>>,
    pub s_max: u32,
    pub tol: f64,
    pub format: Option<Format>,
    pub out: Option<std::path::PathBuf>,
    pub seed: u64,
}

impl RunConfig {
    pub fn from_args(args: &GlobalArgs) -> Result<Self> {
        let interval = Interval::new(args.a, args.b)?;
        let nu = ComplexParam::new(args.lambda, args.mu)?;
        if !(args.tol > 0.0 && args.tol.is_finite()) {
            bail!("--tol must be positive (got {})", args.tol);
        }
        if args.s_max == 0 {
            bail!("--s-max must be at least 1");
        }
        Ok(Self {
            interval,
            nu,
            n: args.n,
            n_list: args.n_list.clone(),
            s_max: args.s_max,
            tol: args.tol,
            format: args.format,
            out: args.out.clone(),
            seed: args.seed,
        })
    }

    pub fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }
}
