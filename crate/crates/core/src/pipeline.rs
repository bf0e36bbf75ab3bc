//! End-to-end evaluation `I = F(0)`: Taylor coefficients about `zeta0`,
//! QD conversion, continued fraction evaluated on the real axis.

use std::fmt;
use std::str::FromStr;

use rug::{Complex, Float};

use crate::continued_fraction::{cf_eval, qd_transform, CfValue, ContinuedFraction, QdTableau};
use crate::defining_function::{taylor_coefficients, Integrand, TaylorSeries};
use crate::error::{Error, Result};
use crate::mp::{ten_pow, PrecisionContext};
use crate::quadrature::DeRule;

/// Default number of Taylor coefficients beyond `c_0`.
pub const DEFAULT_N_COEFFS: usize = 100;

/// `tol = 10^-(decimal_digits - TOL_SLACK_DIGITS)`
const TOL_SLACK_DIGITS: i32 = 15;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Hyperfunction,
    Euler,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Hyperfunction => "hyperfunction",
            Method::Euler => "euler",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hyperfunction" => Ok(Method::Hyperfunction),
            "euler" => Ok(Method::Euler),
            other => Err(Error::InvalidArgument(format!("unknown method `{other}`"))),
        }
    }
}

/// Outcome of one method on one integrand.
#[derive(Clone, Debug)]
pub struct IntegralResult {
    pub method: Method,
    pub value: Float,
    /// `|im F(0)|`; the integral is real, so this should sit below `err_estimate`.
    pub imag_residue: Float,
    pub err_estimate: Float,
    /// Convergent index used (hyperfunction only).
    pub k_used: Option<usize>,
    /// Panels summed (Euler only).
    pub panels_used: Option<usize>,
    /// Integrand evaluations spent on the quadrature itself.
    pub eval_count: u64,
    /// Extra evaluations spent locating sign changes (Euler only).
    pub scan_count: u64,
}

#[derive(Clone, Debug)]
pub struct HyperfunctionConfig {
    pub zeta0: (f64, f64),
    pub n_coeffs: usize,
    pub ctx: PrecisionContext,
    /// Successive-convergent tolerance; `None` means `10^-(digits - 15)`.
    pub tol: Option<Float>,
}

impl Default for HyperfunctionConfig {
    fn default() -> Self {
        Self::new(PrecisionContext::default())
    }
}

impl HyperfunctionConfig {
    pub fn new(ctx: PrecisionContext) -> Self {
        Self {
            zeta0: (0.0, 1.0),
            n_coeffs: DEFAULT_N_COEFFS,
            ctx,
            tol: None,
        }
    }

    pub fn tolerance(&self) -> Float {
        match &self.tol {
            Some(t) => Float::with_val(self.ctx.bits(), t),
            None => ten_pow(
                -(self.ctx.decimal_digits() as i32) + TOL_SLACK_DIGITS,
                self.ctx.bits(),
            ),
        }
    }

    pub fn zeta0(&self) -> Complex {
        self.ctx.complex(self.zeta0)
    }

    fn validate(&self) -> Result<()> {
        let (re, im) = self.zeta0;
        if !(re.is_finite() && im.is_finite() && im > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "zeta0 = {re}+{im}i must lie in the upper half plane"
            )));
        }
        if self.n_coeffs < 2 {
            return Err(Error::InvalidArgument(format!(
                "need N >= 2 coefficients, got {}",
                self.n_coeffs
            )));
        }
        if let Some(t) = &self.tol {
            if *t <= 0 {
                return Err(Error::InvalidArgument("tolerance must be positive".into()));
            }
        }
        Ok(())
    }
}

/// Every intermediate of one hyperfunction evaluation.
#[derive(Clone, Debug)]
pub struct HyperfunctionRun {
    pub result: IntegralResult,
    pub series: TaylorSeries,
    pub rule: DeRule,
    pub tableau: QdTableau,
    pub fraction: ContinuedFraction,
    /// `F(0)` before taking the real part.
    pub boundary_value: Complex,
}

pub fn hyperfunction_value(f: &Integrand, config: &HyperfunctionConfig) -> Result<IntegralResult> {
    hyperfunction_run(f, config).map(|run| run.result)
}

pub fn hyperfunction_run(f: &Integrand, config: &HyperfunctionConfig) -> Result<HyperfunctionRun> {
    config.validate()?;
    let ctx = &config.ctx;
    let before = f.eval_count();
    let (series, rule) = taylor_coefficients(f, &config.zeta0(), config.n_coeffs, ctx)?;
    let eval_count = f.eval_count() - before;
    let (tableau, fraction) = qd_transform(&series, ctx)?;
    let CfValue {
        value,
        err_estimate,
        k_used,
    } = cf_eval(&fraction, &ctx.complex(0), &config.tolerance())?;
    log::debug!(
        "{}: {} nodes, {} CF terms, k = {k_used}",
        f.name(),
        rule.len(),
        fraction.len()
    );

    let result = IntegralResult {
        method: Method::Hyperfunction,
        value: value.real().clone(),
        imag_residue: value.imag().clone().abs(),
        err_estimate,
        k_used: Some(k_used),
        panels_used: None,
        eval_count,
        scan_count: 0,
    };
    Ok(HyperfunctionRun {
        result,
        series,
        rule,
        tableau,
        fraction,
        boundary_value: value,
    })
}

/// `F(i 10^-m)` for `m = 1 ..= max_m`, approaching the boundary value from
/// above. The sequence should settle onto `F(0)`.
pub fn boundary_sweep(
    fraction: &ContinuedFraction,
    max_m: u32,
    tol: &Float,
) -> Result<Vec<(u32, Complex)>> {
    let prec = fraction.prec();
    (1..=max_m)
        .map(|m| {
            let eps = ten_pow(-(m as i32), prec);
            let zeta = Complex::with_val(prec, (Float::new(prec), eps));
            cf_eval(fraction, &zeta, tol).map(|v| (m, v.value))
        })
        .collect()
}
