//! Multiprecision scalars, elementary functions and constants.
//!
//! Real and complex values are MPFR/MPC numbers (`rug::Float`,
//! `rug::Complex`). Every value carries its own precision in bits; functions
//! here return results at the precision of their argument. A
//! [`PrecisionContext`] turns a decimal digit request into a bit count and
//! is the only place where guard digits are decided.

use std::f64::consts::LOG2_10;

use rug::float::{Constant as MpConstant, Round};
use rug::ops::Pow;
use rug::{Assign, Complex, Float};

use crate::error::{Error, Result};

pub type BigReal = Float;
pub type BigComplex = Complex;

pub const MIN_DECIMAL_DIGITS: u32 = 16;
pub const DEFAULT_DECIMAL_DIGITS: u32 = 100;
pub const DEFAULT_GUARD_DIGITS: u32 = 20;

/// Converts a decimal digit count to an MPFR precision, with a few spare bits.
pub fn digits_to_bits(digits: u32) -> u32 {
    (f64::from(digits) * LOG2_10).ceil() as u32 + 4
}

pub fn bits_to_digits(bits: u32) -> u32 {
    (f64::from(bits) / LOG2_10).floor() as u32
}

/// Working precision for a computation: `decimal_digits` is what the caller
/// wants to be correct, `guard_digits` is carried on top of it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionContext {
    decimal_digits: u32,
    guard_digits: u32,
}

impl Default for PrecisionContext {
    fn default() -> Self {
        Self {
            decimal_digits: DEFAULT_DECIMAL_DIGITS,
            guard_digits: DEFAULT_GUARD_DIGITS,
        }
    }
}

impl PrecisionContext {
    pub fn new(decimal_digits: u32) -> Result<Self> {
        Self::with_guard(decimal_digits, DEFAULT_GUARD_DIGITS)
    }

    pub fn with_guard(decimal_digits: u32, guard_digits: u32) -> Result<Self> {
        if decimal_digits < MIN_DECIMAL_DIGITS {
            return Err(Error::InvalidArgument(format!(
                "decimal_digits must be at least {MIN_DECIMAL_DIGITS}, got {decimal_digits}"
            )));
        }
        Ok(Self {
            decimal_digits,
            guard_digits,
        })
    }

    pub fn decimal_digits(&self) -> u32 {
        self.decimal_digits
    }

    pub fn guard_digits(&self) -> u32 {
        self.guard_digits
    }

    pub fn working_digits(&self) -> u32 {
        self.decimal_digits + self.guard_digits
    }

    pub fn bits(&self) -> u32 {
        digits_to_bits(self.working_digits())
    }

    /// Same target, `extra` more guard digits.
    pub fn with_extra_guard(&self, extra: u32) -> Self {
        Self {
            decimal_digits: self.decimal_digits,
            guard_digits: self.guard_digits + extra,
        }
    }

    /// Context whose working digit count is `num/den` times this one.
    pub fn scaled(&self, num: u32, den: u32) -> Self {
        let working = (self.working_digits() * num).div_ceil(den);
        Self {
            decimal_digits: self.decimal_digits,
            guard_digits: working.saturating_sub(self.decimal_digits),
        }
    }

    pub fn real<T>(&self, value: T) -> Float
    where
        Float: Assign<T>,
    {
        Float::with_val(self.bits(), value)
    }

    pub fn complex<T>(&self, value: T) -> Complex
    where
        Complex: Assign<T>,
    {
        Complex::with_val(self.bits(), value)
    }

    /// `10^-decimal_digits` at working precision.
    pub fn epsilon(&self) -> Float {
        ten_pow(-(self.decimal_digits as i32), self.bits())
    }

    pub fn parse(&self, s: &str) -> Result<Float> {
        parse_decimal(s, self.bits())
    }

    pub fn constant(&self, name: ConstantName) -> Float {
        constant(name, self.bits())
    }
}

pub fn ten_pow(exp: i32, prec: u32) -> Float {
    Float::with_val(prec, Float::i_pow_u(10, exp.unsigned_abs())).pow(exp.signum())
}

#[derive(Clone, Debug, PartialEq)]
pub enum Elementary {
    Exp,
    Log,
    Sin,
    Cos,
    Sqrt,
    /// `x^exponent`
    Pow(Float),
}

impl Elementary {
    fn name(&self) -> &'static str {
        match self {
            Elementary::Exp => "exp",
            Elementary::Log => "log",
            Elementary::Sin => "sin",
            Elementary::Cos => "cos",
            Elementary::Sqrt => "sqrt",
            Elementary::Pow(_) => "pow",
        }
    }
}

fn domain_error(function: &'static str, x: &Float) -> Error {
    Error::Domain {
        function,
        argument: to_decimal(x),
    }
}

/// Real branch of an elementary function, at the precision of `x`.
pub fn elem(name: &Elementary, x: &Float) -> Result<Float> {
    if x.is_nan() {
        return Err(domain_error(name.name(), x));
    }
    let prec = x.prec();
    let y = match name {
        Elementary::Exp => x.clone().exp(),
        Elementary::Log => {
            if *x <= 0 {
                return Err(domain_error("log", x));
            }
            x.clone().ln()
        }
        Elementary::Sin => x.clone().sin(),
        Elementary::Cos => x.clone().cos(),
        Elementary::Sqrt => {
            if *x < 0 {
                return Err(domain_error("sqrt", x));
            }
            x.clone().sqrt()
        }
        Elementary::Pow(e) => {
            if *x < 0 && !e.is_integer() {
                return Err(domain_error("pow", x));
            }
            if x.is_zero() && *e < 0 {
                return Err(domain_error("pow", x));
            }
            Float::with_val(prec, x.pow(e))
        }
    };
    Ok(y)
}

/// Principal branch of an elementary function on complex arguments.
pub fn elem_complex(name: &Elementary, z: &Complex) -> Result<Complex> {
    let is_zero = z.real().is_zero() && z.imag().is_zero();
    let w = match name {
        Elementary::Exp => z.clone().exp(),
        Elementary::Log => {
            if is_zero {
                return Err(domain_error("log", z.real()));
            }
            z.clone().ln()
        }
        Elementary::Sin => z.clone().sin(),
        Elementary::Cos => z.clone().cos(),
        Elementary::Sqrt => z.clone().sqrt(),
        Elementary::Pow(e) => {
            if is_zero {
                if *e < 0 {
                    return Err(domain_error("pow", z.real()));
                }
                if e.is_zero() {
                    return Ok(Complex::with_val(z.prec(), 1));
                }
                return Ok(Complex::new(z.prec()));
            }
            Complex::with_val(z.prec(), z.pow(e))
        }
    };
    Ok(w)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstantName {
    Pi,
    EulerGamma,
    Log2,
}

pub fn constant(name: ConstantName, prec: u32) -> Float {
    let c = match name {
        ConstantName::Pi => MpConstant::Pi,
        ConstantName::EulerGamma => MpConstant::Euler,
        ConstantName::Log2 => MpConstant::Log2,
    };
    Float::with_val(prec, c)
}

/// Decimal form that parses back to the same value at the same precision:
/// one leading digit, trailing zeros dropped, lowercase `e` exponent.
pub fn to_decimal(x: &Float) -> String {
    if x.is_zero() {
        return if x.is_sign_negative() { "-0e0" } else { "0e0" }.to_string();
    }
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x.is_sign_negative() { "-inf" } else { "inf" }.to_string();
    }
    let (negative, digits, exp) = x.to_sign_string_exp_round(10, None, Round::Nearest);
    // value = 0.d1d2d3... * 10^exp
    let exp = exp.expect("finite nonzero value has an exponent") - 1;
    let digits = digits.trim_end_matches('0');
    let (lead, rest) = digits.split_at(1);
    let mut out = String::with_capacity(digits.len() + 8);
    if negative {
        out.push('-');
    }
    out.push_str(lead);
    if !rest.is_empty() {
        out.push('.');
        out.push_str(rest);
    }
    out.push('e');
    out.push_str(&exp.to_string());
    out
}

/// Short scientific form, `sig` significant digits, e.g. `5.42e-26`.
pub fn to_sci(x: &Float, sig: usize) -> String {
    if x.is_zero() || !x.is_finite() {
        return to_decimal(x);
    }
    let (negative, digits, exp) = x.to_sign_string_exp_round(10, Some(sig.max(1)), Round::Nearest);
    let exp = exp.expect("finite nonzero value has an exponent") - 1;
    let (lead, rest) = digits.split_at(1);
    let sign = if negative { "-" } else { "" };
    if rest.is_empty() {
        format!("{sign}{lead}e{exp}")
    } else {
        format!("{sign}{lead}.{rest}e{exp}")
    }
}

pub fn parse_decimal(s: &str, prec: u32) -> Result<Float> {
    let parsed = Float::parse(s.trim()).map_err(|_| Error::Parse(s.to_string()))?;
    Ok(Float::with_val(prec, parsed))
}

/// `|z|` as a real at the precision of `z`.
pub fn abs(z: &Complex) -> Float {
    Float::with_val(z.prec().0, z.abs_ref())
}

/// Rough base-10 magnitude, for logging and scale comparisons.
pub fn log10_abs(x: &Float) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let (m, e) = x.to_f64_exp();
    m.abs().log10() + f64::from(e) * std::f64::consts::LOG10_2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    fn close(a: &Float, b: &Float, digits: i32) -> bool {
        let diff = Float::with_val(a.prec(), a - b).abs();
        let scale = Float::with_val(a.prec(), b.abs_ref()).max(&Float::with_val(a.prec(), 1));
        diff <= scale * ten_pow(-digits, a.prec())
    }

    #[test]
    fn context_rejects_low_precision() {
        assert!(PrecisionContext::new(15).is_err());
        let c = PrecisionContext::new(16).unwrap();
        assert_eq!(c.working_digits(), 36);
    }

    #[test]
    fn scaled_context_has_more_digits() {
        let c = ctx().scaled(3, 2);
        assert_eq!(c.working_digits(), 180);
        assert_eq!(c.decimal_digits(), 100);
    }

    #[test]
    fn identities() {
        let c = ctx();
        assert_eq!(elem(&Elementary::Exp, &c.real(0)).unwrap(), 1);
        assert_eq!(elem(&Elementary::Cos, &c.real(0)).unwrap(), 1);
        assert_eq!(elem(&Elementary::Sin, &c.real(0)).unwrap(), 0);
        assert_eq!(elem(&Elementary::Sqrt, &c.real(4)).unwrap(), 2);
        assert_eq!(elem(&Elementary::Pow(c.real(10)), &c.real(2)).unwrap(), 1024);
    }

    #[test]
    fn log2_matches_series() {
        // log 2 = sum_{k>=1} 1 / (k 2^k)
        let c = ctx();
        let mut sum = c.real(0);
        let mut pow = c.real(1);
        for k in 1..450u32 {
            pow /= 2;
            sum += Float::with_val(c.bits(), &pow / k);
        }
        let log2 = elem(&Elementary::Log, &c.real(2)).unwrap();
        assert!(close(&log2, &sum, 110));
        assert!(close(&constant(ConstantName::Log2, c.bits()), &sum, 110));
        assert!(to_decimal(&log2).starts_with("6.9314718055994530941723"));
    }

    #[test]
    fn constants_match_known_digits() {
        let c = ctx();
        let pi = c.constant(ConstantName::Pi);
        assert!(to_decimal(&pi).starts_with("3.14159265358979323846"));
        let g = c.constant(ConstantName::EulerGamma) + c.constant(ConstantName::Log2);
        assert_eq!(to_sci(&g, 5), "1.2704e0");
        let half_pi = pi / 2;
        assert_eq!(to_sci(&half_pi, 6), "1.57080e0");
    }

    #[test]
    fn domain_errors() {
        let c = ctx();
        assert!(matches!(
            elem(&Elementary::Log, &c.real(0)),
            Err(Error::Domain { function: "log", .. })
        ));
        assert!(elem(&Elementary::Log, &c.real(-1)).is_err());
        assert!(elem(&Elementary::Sqrt, &c.real(-1)).is_err());
        assert!(elem(&Elementary::Pow(c.real(0.5)), &c.real(-2)).is_err());
        assert!(elem_complex(&Elementary::Log, &c.complex(0)).is_err());
        // the complex branch accepts negative reals
        let z = elem_complex(&Elementary::Sqrt, &c.complex(-4)).unwrap();
        assert!(z.real().is_zero());
        assert_eq!(*z.imag(), 2);
    }

    #[test]
    fn decimal_format() {
        let c = ctx();
        assert_eq!(to_decimal(&c.real(0)), "0e0");
        assert_eq!(to_decimal(&c.real(1)), "1e0");
        assert_eq!(to_decimal(&c.real(-1250)), "-1.25e3");
        let milli = c.parse("0.001").unwrap();
        assert_eq!(c.parse(&to_decimal(&milli)).unwrap(), milli);
        assert!(to_decimal(&c.real(1.0e-30)).contains("e-30"));
        assert_eq!(to_sci(&c.parse("5.4213e-26").unwrap(), 3), "5.42e-26");
    }

    #[test]
    fn exp_log_identity_on_fixed_points() {
        let c = ctx();
        for s in ["1e-5", "0.37", "1", "2.5", "977.25", "1e5"] {
            let x = c.parse(s).unwrap();
            let y = elem(&Elementary::Exp, &elem(&Elementary::Log, &x).unwrap()).unwrap();
            let rel = Float::with_val(c.bits(), &y - &x).abs() / &x;
            assert!(rel < ten_pow(-97, c.bits()), "{s}");
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn decimal_round_trip(m in -1.0e6f64..1.0e6, e in -300i32..300) {
                let c = PrecisionContext::default();
                let x = c.real(m) * ten_pow(e, c.bits()) / 3;
                let back = c.parse(&to_decimal(&x)).unwrap();
                prop_assert_eq!(back, x);
            }

            #[test]
            fn exp_log_inverse(u in -5.0f64..5.0, frac in 0.0f64..1.0) {
                let c = PrecisionContext::default();
                // x in (1e-5, 1e5) with a full-precision mantissa
                let x = ten_pow(1, c.bits()).pow(c.real(u)) * (c.real(1) + c.real(frac) / 7);
                let y = elem(&Elementary::Exp, &elem(&Elementary::Log, &x).unwrap()).unwrap();
                let rel = Float::with_val(c.bits(), &y - &x).abs() / &x;
                prop_assert!(rel < ten_pow(-(c.decimal_digits() as i32 - 3), c.bits()));
            }

            #[test]
            fn complex_field_axioms(a in -50.0f64..50.0, b in -50.0f64..50.0, p in -50.0f64..50.0, q in 0.5f64..50.0) {
                let c = PrecisionContext::default();
                let z = c.complex((a, b)) / 3;
                let w = c.complex((p, q)) / 7;
                let back = Complex::with_val(c.bits(), &z * &w) / &w;
                let diff = abs(&Complex::with_val(c.bits(), &back - &z));
                let scale = abs(&z).max(&c.real(1));
                prop_assert!(diff <= scale * ten_pow(-110, c.bits()));
                let s1 = Complex::with_val(c.bits(), &z + &w);
                let s2 = Complex::with_val(c.bits(), &w + &z);
                prop_assert_eq!(s1, s2);
            }
        }
    }
}
