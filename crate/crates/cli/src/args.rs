use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "oscint", version, about = "Oscillatory integrals on (0, inf) by continued-fraction continuation of the Fourier-Laplace transform")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate catalog integrals and report errors against closed forms
    Run(RunArgs),
    /// Repeat a run over a list of values of one parameter
    Sweep(SweepArgs),
    /// List the catalog
    List(ListArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodChoice {
    Hyperfunction,
    Euler,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Axis {
    Digits,
    N,
    #[value(name = "zeta0-im")]
    Zeta0Im,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::Digits => "digits",
            Axis::N => "n",
            Axis::Zeta0Im => "zeta0-im",
        }
    }
}

/// Expansion centre written `a+bi`, `a-bi`, `bi` or `i`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Zeta0 {
    pub re: f64,
    pub im: f64,
}

impl FromStr for Zeta0 {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || format!("cannot parse `{s}` as a complex number a+bi");
        let body = t.strip_suffix('i').ok_or_else(bad)?;
        // split before the last sign that is not a leading sign or part of an exponent
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
        let (re, im) = match split {
            Some(i) => (&body[..i], &body[i..]),
            None => ("0", body),
        };
        let im = match im {
            "" | "+" => "1",
            "-" => "-1",
            other => other,
        };
        let re: f64 = re.parse().map_err(|_| bad())?;
        let im: f64 = im.parse().map_err(|_| bad())?;
        if !re.is_finite() || !im.is_finite() {
            return Err(bad());
        }
        Ok(Zeta0 { re, im })
    }
}

fn integral_id(s: &str) -> Result<u32, String> {
    let id: u32 = s.parse().map_err(|_| format!("`{s}` is not an integral id"))?;
    if oscint::catalog::IDS.contains(&id) {
        Ok(id)
    } else {
        Err(format!("unknown integral {id}; valid ids are 1..=8"))
    }
}

#[derive(Clone, Debug, Args)]
pub struct RunArgs {
    /// Catalog integral ids (repeat or comma-separate)
    #[arg(long = "integral", value_name = "ID", value_delimiter = ',', value_parser = integral_id,
          required_unless_present = "all", conflicts_with = "all")]
    pub integrals: Vec<u32>,

    /// Run every catalog integral
    #[arg(long)]
    pub all: bool,

    #[arg(long, value_enum, default_value_t = MethodChoice::Hyperfunction)]
    pub method: MethodChoice,

    /// Decimal digits of working precision (at least 16)
    #[arg(long, env = "OSCINT_DIGITS", default_value_t = 100)]
    pub digits: u32,

    /// Number N of Taylor coefficients beyond c_0
    #[arg(long = "n-coeffs", default_value_t = 100)]
    pub n_coeffs: usize,

    /// Expansion centre in the upper half plane
    #[arg(long, default_value = "0+1i", allow_hyphen_values = true)]
    pub zeta0: Zeta0,

    /// Panels K for the Euler baseline
    #[arg(long, default_value_t = 50)]
    pub panels: usize,

    /// Gauss-Legendre points per panel
    #[arg(long = "gl-points", default_value_t = 100)]
    pub gl_points: usize,

    /// Convergent stopping tolerance (default 10^-(digits-15))
    #[arg(long)]
    pub tol: Option<String>,

    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Write the report here instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,

    /// Integrals evaluated concurrently
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
}

#[derive(Clone, Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub run: RunArgs,

    #[arg(long, value_enum)]
    pub axis: Axis,

    /// Comma-separated axis values
    #[arg(long, value_delimiter = ',', num_args = 1, required = true)]
    pub values: Vec<String>,
}

#[derive(Clone, Debug, Args)]
pub struct ListArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Digits shown for reference values
    #[arg(long, env = "OSCINT_DIGITS", default_value_t = 30)]
    pub digits: u32,
}
