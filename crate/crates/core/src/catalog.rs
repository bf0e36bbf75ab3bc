//! Built-in test integrands on (0, inf) with closed-form values.
//!
//! | id | integrand                          | value              |
//! |----|------------------------------------|--------------------|
//! | 1  | (cos(x/2) - cos x) / x             | log 2              |
//! | 2  | log x cos x                        | -pi/2              |
//! | 3  | J0(x)                              | 1                  |
//! | 4  | x J0(x) / (x^2 + 1)                | K0(1)              |
//! | 5  | J0(x) / sqrt(x^2 + 1)              | K0(1/2) I0(1/2)    |
//! | 6  | log x J0(x)                        | -gamma - log 2     |
//! | 7  | x J1(sqrt(x^2+1)) / sqrt(x^2 + 1)  | J0(1)              |
//! | 8  | Y0(x) / (x^2 + 1)                  | -K0(1)             |

use rug::float::Special;
use rug::Float;

use crate::bessel::{i0, j0, j1, k0, y0};
use crate::defining_function::Integrand;
use crate::error::{Error, Result};
use crate::mp::{ConstantName, PrecisionContext};

pub const IDS: std::ops::RangeInclusive<u32> = 1..=8;

/// Below this, entry 1 switches to its Maclaurin series.
const SERIES_SWITCH: f64 = 1e-2;

pub struct CatalogEntry {
    pub id: u32,
    pub integrand: Integrand,
    pub description: &'static str,
    /// Closed form of the integral, as printed in the listing.
    pub closed_form: &'static str,
}

impl CatalogEntry {
    pub fn reference(&self, ctx: &PrecisionContext) -> Float {
        reference_value(self.id, ctx).expect("catalog ids are valid")
    }
}

impl std::fmt::Debug for CatalogEntry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CatalogEntry")
            .field("id", &self.id)
            .field("description", &self.description)
            .finish()
    }
}

fn nan_on_error(x: &Float, r: Result<Float>) -> Float {
    r.unwrap_or_else(|_| Float::with_val(x.prec(), Special::Nan))
}

fn hypot1(x: &Float) -> Float {
    let mut s = Float::with_val(x.prec(), x.square_ref());
    s += 1;
    s.sqrt()
}

/// `(cos(x/2) - cos x) / x`, by series near 0 where the difference cancels.
fn cos_difference_quotient(x: &Float) -> Float {
    let prec = x.prec();
    if x.cmp_abs(&Float::with_val(prec, SERIES_SWITCH)) == Some(std::cmp::Ordering::Less) {
        // sum_{k>=1} (-1)^k (4^-k - 1) x^(2k-1) / (2k)!
        let x2 = Float::with_val(prec, x.square_ref());
        let mut power = Float::with_val(prec, x);
        let mut quarter = Float::with_val(prec, 0.25);
        let mut sum = Float::new(prec);
        let mut k = 1u32;
        let mut fact = Float::with_val(prec, 2);
        loop {
            let mut coeff = Float::with_val(prec, &quarter - 1u32);
            if k % 2 == 1 {
                coeff = -coeff;
            }
            let term = Float::with_val(prec, &coeff * &power) / &fact;
            if term.is_zero() || term.get_exp().unwrap_or(0) < sum.get_exp().unwrap_or(0) - prec as i32 - 2 {
                break;
            }
            sum += &term;
            power *= &x2;
            quarter /= 4u32;
            fact *= (2 * k + 1) * (2 * k + 2);
            k += 1;
        }
        return sum;
    }
    let half = Float::with_val(prec, x / 2u32).cos();
    let full = Float::with_val(prec, x.cos_ref());
    Float::with_val(prec, half - full) / x
}

fn build(id: u32) -> Result<CatalogEntry> {
    let (description, closed_form, integrand): (_, _, Integrand) = match id {
        1 => (
            "(cos(x/2) - cos x) / x",
            "log 2",
            Integrand::new("(cos(x/2)-cos(x))/x", false, cos_difference_quotient),
        ),
        2 => (
            "log x cos x",
            "-pi/2",
            Integrand::new("log(x)*cos(x)", true, |x: &Float| {
                Float::with_val(x.prec(), x.ln_ref()) * Float::with_val(x.prec(), x.cos_ref())
            }),
        ),
        3 => (
            "J0(x)",
            "1",
            Integrand::new("J0(x)", false, |x: &Float| nan_on_error(x, j0(x))),
        ),
        4 => (
            "x J0(x) / (x^2 + 1)",
            "K0(1)",
            Integrand::new("x*J0(x)/(x^2+1)", false, |x: &Float| {
                let mut d = Float::with_val(x.prec(), x.square_ref());
                d += 1;
                nan_on_error(x, j0(x)) * x / d
            }),
        ),
        5 => (
            "J0(x) / sqrt(x^2 + 1)",
            "K0(1/2) I0(1/2)",
            Integrand::new("J0(x)/sqrt(x^2+1)", false, |x: &Float| {
                nan_on_error(x, j0(x)) / hypot1(x)
            }),
        ),
        6 => (
            "log x J0(x)",
            "-gamma - log 2",
            Integrand::new("log(x)*J0(x)", true, |x: &Float| {
                nan_on_error(x, j0(x)) * Float::with_val(x.prec(), x.ln_ref())
            }),
        ),
        7 => (
            "x J1(sqrt(x^2 + 1)) / sqrt(x^2 + 1)",
            "J0(1)",
            Integrand::new("x*J1(sqrt(x^2+1))/sqrt(x^2+1)", false, |x: &Float| {
                let r = hypot1(x);
                nan_on_error(x, j1(&r)) * x / r
            }),
        ),
        8 => (
            "Y0(x) / (x^2 + 1)",
            "-K0(1)",
            Integrand::new("Y0(x)/(x^2+1)", true, |x: &Float| {
                let mut d = Float::with_val(x.prec(), x.square_ref());
                d += 1;
                nan_on_error(x, y0(x)) / d
            }),
        ),
        other => return Err(Error::UnknownIntegral(other)),
    };
    Ok(CatalogEntry {
        id,
        integrand,
        description,
        closed_form,
    })
}

pub fn get(id: u32) -> Result<CatalogEntry> {
    build(id)
}

pub fn all() -> Vec<CatalogEntry> {
    IDS.map(|id| build(id).expect("catalog ids are valid")).collect()
}

/// Exact value of integral `id` at the working precision of `ctx`.
pub fn reference_value(id: u32, ctx: &PrecisionContext) -> Result<Float> {
    let prec = ctx.bits();
    let one = ctx.real(1);
    let half = ctx.real(0.5);
    let v = match id {
        1 => ctx.constant(ConstantName::Log2),
        2 => -ctx.constant(ConstantName::Pi) / 2u32,
        3 => one,
        4 => k0(&one)?,
        5 => k0(&half)? * i0(&half)?,
        6 => -Float::with_val(prec, ctx.constant(ConstantName::EulerGamma) + ctx.constant(ConstantName::Log2)),
        7 => j0(&one)?,
        8 => -k0(&one)?,
        other => return Err(Error::UnknownIntegral(other)),
    };
    Ok(v)
}
