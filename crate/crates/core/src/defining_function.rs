//! Taylor expansion of the Fourier-Laplace transform
//! `F(zeta) = int_0^inf f(x) e^(i zeta x) dx` about a centre `zeta0` in the
//! upper half plane.
//!
//! The coefficients are
//! `c_n = (1/n!) int_0^inf (i x)^n f(x) e^(i zeta0 x) dx`.
//! For `im(zeta0) > 0` every one of these integrals decays exponentially, and
//! with `zeta0 = i` the kernel `(i x)^n e^(-x) / n!` is free of oscillation:
//! the only oscillation left is the one already present in `f`.
//!
//! All coefficients share one DE rule: `f` is evaluated once per node and the
//! factor `(i x)^n / n!` is built up incrementally across `n`.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use rug::{Complex, Float};

use crate::error::{Error, Result};
use crate::mp::{abs, log10_abs, PrecisionContext};
use crate::quadrature::{de_integrate_components, DeRule};

type EvalFn = dyn Fn(&Float) -> Float + Send + Sync;

/// A real function on (0, inf) that counts its own evaluations.
pub struct Integrand {
    name: String,
    singular_at_zero: bool,
    func: Arc<EvalFn>,
    evals: AtomicU64,
}

impl Integrand {
    /// `func` must return its value at the precision of its argument.
    pub fn new<F>(name: impl Into<String>, singular_at_zero: bool, func: F) -> Self
    where
        F: Fn(&Float) -> Float + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            singular_at_zero,
            func: Arc::new(func),
            evals: AtomicU64::new(0),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn singular_at_zero(&self) -> bool {
        self.singular_at_zero
    }

    pub fn eval(&self, x: &Float) -> Float {
        self.evals.fetch_add(1, Ordering::Relaxed);
        (self.func)(x)
    }

    pub fn eval_count(&self) -> u64 {
        self.evals.load(Ordering::Relaxed)
    }

    pub fn reset_count(&self) {
        self.evals.store(0, Ordering::Relaxed);
    }

    /// Same function with a fresh counter.
    pub fn fresh(&self) -> Self {
        Self {
            name: self.name.clone(),
            singular_at_zero: self.singular_at_zero,
            func: Arc::clone(&self.func),
            evals: AtomicU64::new(0),
        }
    }
}

impl fmt::Debug for Integrand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Integrand")
            .field("name", &self.name)
            .field("singular_at_zero", &self.singular_at_zero)
            .field("eval_count", &self.eval_count())
            .finish()
    }
}

/// `sum_{n=0}^{N} c_n (zeta - zeta0)^n`
#[derive(Clone, Debug, PartialEq)]
pub struct TaylorSeries {
    center: Complex,
    coefficients: Vec<Complex>,
}

impl TaylorSeries {
    pub fn new(center: Complex, coefficients: Vec<Complex>) -> Result<Self> {
        if *center.imag() <= 0 {
            return Err(Error::InvalidArgument(
                "expansion centre must lie in the upper half plane".into(),
            ));
        }
        if coefficients.len() < 3 {
            return Err(Error::InvalidArgument(format!(
                "need at least c_0, c_1, c_2; got {} coefficients",
                coefficients.len()
            )));
        }
        Ok(Self {
            center,
            coefficients,
        })
    }

    pub fn center(&self) -> &Complex {
        &self.center
    }

    pub fn coefficients(&self) -> &[Complex] {
        &self.coefficients
    }

    /// Highest index N.
    pub fn order(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Drops coefficients above `order`.
    pub fn truncated(&self, order: usize) -> Result<Self> {
        let keep = (order + 1).min(self.coefficients.len());
        Self::new(self.center.clone(), self.coefficients[..keep].to_vec())
    }

    /// Horner evaluation at `zeta`.
    pub fn eval(&self, zeta: &Complex) -> Complex {
        series_eval(self, zeta)
    }
}

pub fn series_eval(series: &TaylorSeries, zeta: &Complex) -> Complex {
    let prec = series.coefficients[0].prec();
    let dz = Complex::with_val(prec, zeta - &series.center);
    let mut acc = Complex::new(prec);
    for c in series.coefficients.iter().rev() {
        acc *= &dz;
        acc += c;
    }
    acc
}

/// Taylor coefficients `c_0 .. c_order` of the defining function of `f` about
/// `zeta0`, together with the DE rule they were computed on.
///
/// `f.eval_count()` grows by exactly `rule.len()`.
pub fn taylor_coefficients(
    f: &Integrand,
    zeta0: &Complex,
    order: usize,
    ctx: &PrecisionContext,
) -> Result<(TaylorSeries, DeRule)> {
    if *zeta0.imag() <= 0 {
        return Err(Error::InvalidArgument(
            "expansion centre must lie in the upper half plane".into(),
        ));
    }
    if order < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least three coefficients, got order {order}"
        )));
    }
    let prec = ctx.bits();
    let zeta0 = Complex::with_val(prec, zeta0);
    let decay_rate = zeta0.imag().to_f64();
    let i_zeta0 = Complex::with_val(prec, &zeta0 * Complex::with_val(prec, (0, 1)));
    let poly_order = u32::try_from(order).map_err(|_| Error::InvalidArgument("order too large".into()))?;

    let out = de_integrate_components(order + 1, decay_rate, poly_order, ctx, |x| {
        let fx = f.eval(x);
        let kernel = Complex::with_val(prec, &i_zeta0 * x).exp();
        let mut term = kernel * fx;
        let mut column = Vec::with_capacity(order + 1);
        for n in 0..=order {
            // term <- term * (i x) / (n + 1)
            let scale = Float::with_val(prec, x / (n as u32 + 1));
            let (re, im) = (term.real(), term.imag());
            let next = Complex::with_val(
                prec,
                (
                    -Float::with_val(prec, im * &scale),
                    Float::with_val(prec, re * &scale),
                ),
            );
            column.push(std::mem::replace(&mut term, next));
        }
        column
    })
    .map_err(|e| match e {
        Error::NotConverged {
            estimate,
            last_correction,
            step,
        } => Error::NotConverged {
            estimate: format!("c_0 = {estimate}"),
            last_correction,
            step,
        },
        other => other,
    })?;

    warn_on_fast_growth(f.name(), &out.values, decay_rate);
    let series = TaylorSeries::new(zeta0, out.values)?;
    Ok((series, out.rule))
}

/// The Taylor series of a function analytic in `im(zeta) > 0` has radius at
/// least `im(zeta0)`, so `|c_n|^(1/n)` should stay near `1/im(zeta0)`. An
/// isolated large ratio `|c_(n+1)/c_n|` only means `c_n` is near a zero;
/// sustained growth points at a quadrature problem.
fn warn_on_fast_growth(name: &str, coefficients: &[Complex], radius: f64) {
    let lead = log10_abs(&abs(&coefficients[0]));
    let n = coefficients.len() - 1;
    let last = log10_abs(&abs(&coefficients[n]));
    if !lead.is_finite() || !last.is_finite() {
        return;
    }
    let rate = (last - lead) / n as f64;
    if rate > 1.0 - radius.log10() {
        log::warn!("{name}: |c_{n}/c_0|^(1/{n}) = 1e{rate:.1} exceeds 10 / im(zeta0)");
    }
}
