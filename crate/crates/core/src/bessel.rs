//! Bessel functions J0, J1, Y0, I0 and K0 of real argument.
//!
//! Small and moderate arguments use the ascending power series, carried at
//! enough extra precision to absorb its cancellation (about `0.434 x`
//! decimal digits for the oscillating functions, twice that for K0). Past
//! [`asymptotic_threshold`] the Hankel expansions are summed up to their
//! smallest term; their truncation error is of order `e^-2x`, so the switch
//! point is raised with the requested precision.

use std::cmp::Ordering;
use std::f64::consts::{LN_10, LOG10_E, LOG2_10};

use rug::float::Constant;
use rug::Float;

use crate::error::{Error, Result};
use crate::mp::{bits_to_digits, to_decimal};

/// Bits carried beyond the argument precision inside every evaluation.
const INTERNAL_GUARD_BITS: u32 = 40;

/// Lowest switch point between the series and the asymptotic expansions.
pub const MIN_ASYMPTOTIC_SWITCH: f64 = 120.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BesselKind {
    J0,
    J1,
    Y0,
    I0,
    K0,
}

impl BesselKind {
    fn name(self) -> &'static str {
        match self {
            BesselKind::J0 => "J0",
            BesselKind::J1 => "J1",
            BesselKind::Y0 => "Y0",
            BesselKind::I0 => "I0",
            BesselKind::K0 => "K0",
        }
    }
}

/// Argument above which the Hankel expansion is accurate to `prec` bits.
pub fn asymptotic_threshold(prec: u32) -> f64 {
    let digits = f64::from(bits_to_digits(prec + INTERNAL_GUARD_BITS));
    MIN_ASYMPTOTIC_SWITCH.max((digits + 5.0) * LN_10 / 2.0)
}

/// Evaluates the Bessel function `kind` at `x`, returning a value with the
/// precision of `x`.
pub fn bessel(kind: BesselKind, x: &Float) -> Result<Float> {
    let domain_ok = match kind {
        BesselKind::Y0 | BesselKind::K0 => *x > 0,
        _ => *x >= 0,
    };
    if !domain_ok || !x.is_finite() {
        return Err(Error::Domain {
            function: kind.name(),
            argument: to_decimal(x),
        });
    }
    let prec = x.prec();
    let xf = x.to_f64();
    let asymptotic = xf > asymptotic_threshold(prec);
    let value = match kind {
        BesselKind::J0 | BesselKind::J1 | BesselKind::Y0 if asymptotic => {
            let order = u32::from(kind == BesselKind::J1);
            let (j, y) = hankel(order, x);
            if kind == BesselKind::Y0 {
                y
            } else {
                j
            }
        }
        BesselKind::J0 => j_series(0, x),
        BesselKind::J1 => j_series(1, x),
        BesselKind::Y0 => y0_series(x),
        BesselKind::I0 => i0_series(x),
        BesselKind::K0 if asymptotic => k0_asymptotic(x),
        BesselKind::K0 => k0_series(x),
    };
    Ok(Float::with_val(prec, value))
}

pub fn j0(x: &Float) -> Result<Float> {
    bessel(BesselKind::J0, x)
}

pub fn j1(x: &Float) -> Result<Float> {
    bessel(BesselKind::J1, x)
}

pub fn y0(x: &Float) -> Result<Float> {
    bessel(BesselKind::Y0, x)
}

pub fn i0(x: &Float) -> Result<Float> {
    bessel(BesselKind::I0, x)
}

pub fn k0(x: &Float) -> Result<Float> {
    bessel(BesselKind::K0, x)
}

/// Precision for a series whose largest term exceeds the result by roughly
/// `cancel_digits` decimal digits.
fn series_prec(prec: u32, cancel_digits: f64) -> u32 {
    prec + INTERNAL_GUARD_BITS + (cancel_digits.max(0.0) * LOG2_10).ceil() as u32
}

/// True once the series is past its peak and `term` is negligible at `wp` bits.
fn negligible(term: &Float, peak: &Float, wp: u32) -> bool {
    term.is_zero() || term.get_exp().unwrap_or(i32::MIN) < peak.get_exp().unwrap_or(0) - wp as i32
}

/// J_n(x) = sum_k (-1)^k (x/2)^(2k+n) / (k! (k+n)!)
fn j_series(order: u32, x: &Float) -> Float {
    let wp = series_prec(x.prec(), LOG10_E * x.to_f64());
    let half = Float::with_val(wp, x / 2u32);
    let y = Float::with_val(wp, half.square_ref());
    let mut term = if order == 0 {
        Float::with_val(wp, 1)
    } else {
        half.clone()
    };
    let mut sum = term.clone();
    let mut peak = term.clone().abs();
    for k in 1u32.. {
        term *= &y;
        term /= k * (k + order);
        term = -term;
        sum += &term;
        if term.cmp_abs(&peak) == Some(Ordering::Greater) {
            peak = term.clone().abs();
        } else if negligible(&term, &peak, wp) {
            break;
        }
    }
    sum
}

/// Y0(x) = (2/pi) [(ln(x/2) + gamma) J0(x) + sum_{k>=1} (-1)^(k+1) H_k (x/2)^(2k) / (k!)^2]
fn y0_series(x: &Float) -> Float {
    let wp = series_prec(x.prec(), LOG10_E * x.to_f64());
    let half = Float::with_val(wp, x / 2u32);
    let y = Float::with_val(wp, half.square_ref());
    let mut j0 = Float::with_val(wp, 1);
    let mut tail = Float::new(wp);
    let mut term = Float::with_val(wp, 1);
    let mut harmonic = Float::new(wp);
    let mut peak = Float::with_val(wp, 1);
    for k in 1u32.. {
        term *= &y;
        term /= k * k;
        term = -term;
        harmonic += Float::with_val(wp, 1) / k;
        j0 += &term;
        // (-1)^(k+1) = -(-1)^k, and `term` already carries (-1)^k
        tail -= Float::with_val(wp, &term * &harmonic);
        let mag = Float::with_val(wp, &term * &harmonic).abs();
        if mag > peak {
            peak = mag;
        } else if negligible(&mag, &peak, wp) {
            break;
        }
    }
    let log_term = half.ln() + Float::with_val(wp, Constant::Euler);
    let two_over_pi = Float::with_val(wp, 2) / Float::with_val(wp, Constant::Pi);
    (log_term * j0 + tail) * two_over_pi
}

/// I0(x) = sum_k (x/2)^(2k) / (k!)^2; all terms positive.
fn i0_series(x: &Float) -> Float {
    let wp = series_prec(x.prec(), 0.0);
    let half = Float::with_val(wp, x / 2u32);
    let y = Float::with_val(wp, half.square_ref());
    let mut term = Float::with_val(wp, 1);
    let mut sum = term.clone();
    for k in 1u32.. {
        term *= &y;
        term /= k * k;
        sum += &term;
        if negligible(&term, &sum, wp) {
            break;
        }
    }
    sum
}

/// K0(x) = -(ln(x/2) + gamma) I0(x) + sum_{k>=1} H_k (x/2)^(2k) / (k!)^2
fn k0_series(x: &Float) -> Float {
    // I0 ~ e^x while K0 ~ e^-x
    let wp = series_prec(x.prec(), 2.0 * LOG10_E * x.to_f64());
    let half = Float::with_val(wp, x / 2u32);
    let y = Float::with_val(wp, half.square_ref());
    let mut i0 = Float::with_val(wp, 1);
    let mut tail = Float::new(wp);
    let mut term = Float::with_val(wp, 1);
    let mut harmonic = Float::new(wp);
    for k in 1u32.. {
        term *= &y;
        term /= k * k;
        harmonic += Float::with_val(wp, 1) / k;
        i0 += &term;
        let contrib = Float::with_val(wp, &term * &harmonic);
        tail += &contrib;
        if negligible(&contrib, &tail, wp) && negligible(&term, &i0, wp) {
            break;
        }
    }
    let log_term = half.ln() + Float::with_val(wp, Constant::Euler);
    tail - log_term * i0
}

/// Terms t_k = prod_{j<=k} (mu - (2j-1)^2) / (k! (8x)^k) of the Hankel
/// expansions, up to the first negligible or first growing term.
fn hankel_terms(order: u32, x: &Float, wp: u32) -> Vec<Float> {
    let mu = 4 * order * order;
    let eight_x = Float::with_val(wp, x * 8u32);
    let mut terms = vec![Float::with_val(wp, 1)];
    for k in 1u32.. {
        let odd = 2 * k - 1;
        let factor = i64::from(mu) - i64::from(odd) * i64::from(odd);
        let prev = terms.last().expect("nonempty");
        let next = Float::with_val(wp, prev * factor) / k / &eight_x;
        if next.is_zero() || next.cmp_abs(prev) != Some(Ordering::Less) {
            break;
        }
        let done = negligible(&next, &terms[0], wp);
        terms.push(next);
        if done {
            break;
        }
    }
    terms
}

/// (J_n(x), Y_n(x)) for n = 0, 1 from the Hankel expansion.
fn hankel(order: u32, x: &Float) -> (Float, Float) {
    let wp = x.prec() + INTERNAL_GUARD_BITS;
    let terms = hankel_terms(order, x, wp);
    let mut p = Float::new(wp);
    let mut q = Float::new(wp);
    for (k, t) in terms.iter().enumerate() {
        let negative = (k / 2) % 2 == 1;
        let target = if k % 2 == 0 { &mut p } else { &mut q };
        if negative {
            *target -= t;
        } else {
            *target += t;
        }
    }
    let pi = Float::with_val(wp, Constant::Pi);
    let chi = Float::with_val(wp, x - Float::with_val(wp, &pi * (2 * order + 1)) / 4u32);
    let (sin, cos) = chi.sin_cos(Float::new(wp));
    let amp = (Float::with_val(wp, 2) / (pi * x)).sqrt();
    let j = Float::with_val(wp, &p * &cos) - Float::with_val(wp, &q * &sin);
    let y = Float::with_val(wp, &p * &sin) + Float::with_val(wp, &q * &cos);
    (j * &amp, y * amp)
}

/// K0(x) ~ sqrt(pi/(2x)) e^-x sum_k t_k
fn k0_asymptotic(x: &Float) -> Float {
    let wp = x.prec() + INTERNAL_GUARD_BITS;
    let sum = hankel_terms(0, x, wp)
        .iter()
        .fold(Float::new(wp), |acc, t| acc + t);
    let pi = Float::with_val(wp, Constant::Pi);
    let amp = (pi / Float::with_val(wp, x * 2u32)).sqrt();
    let decay = Float::with_val(wp, -x).exp();
    sum * amp * decay
}
