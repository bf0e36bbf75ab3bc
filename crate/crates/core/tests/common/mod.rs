#![allow(dead_code)]

use oscint::continued_fraction::{convergent_value, ContinuedFraction};
use oscint::mp::abs;
use oscint::Result;
use rug::float::Constant;
use rug::{Complex, Float};

pub fn rel_err(value: &Float, reference: &Float) -> Float {
    let prec = value.prec().max(reference.prec());
    Float::with_val(prec, value - reference).abs() / Float::with_val(prec, reference.abs_ref())
}

pub fn log10(x: &Float) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    Float::with_val(x.prec(), x.abs_ref()).log10().to_f64()
}

/// Taylor coefficients `0..=k` of the convergent `P_k/Q_k` about the centre,
/// from `m` samples on the circle of radius `rho`:
/// `c_n ~ (1/m) sum_j R(zeta0 + rho w^j) w^(-jn) / rho^n`, `w = e^(2 pi i/m)`.
/// Aliasing contributes `c_(n+m) rho^m`.
pub fn circle_moments(
    cf: &ContinuedFraction,
    k: usize,
    m: usize,
    rho: &Float,
    prec: u32,
) -> Result<Vec<Complex>> {
    let center = Complex::with_val(prec, cf.center());
    let two_pi = Float::with_val(prec, Constant::Pi) * 2u32;
    let samples: Vec<Complex> = (0..m)
        .map(|j| {
            let angle = Float::with_val(prec, &two_pi * j as u32) / m as u32;
            let w = Complex::with_val(prec, (angle.clone().cos(), angle.sin()));
            let zeta = Complex::with_val(prec, &w * rho) + &center;
            convergent_value(cf, &zeta, k)
        })
        .collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(k + 1);
    let mut rho_n = Float::with_val(prec, 1);
    for n in 0..=k {
        let mut acc = Complex::new(prec);
        for (j, r) in samples.iter().enumerate() {
            let angle = -Float::with_val(prec, &two_pi * (j * n) as u32) / m as u32;
            let w = Complex::with_val(prec, (angle.clone().cos(), angle.sin()));
            acc += Complex::with_val(prec, r * &w);
        }
        acc /= m as u32;
        acc /= &rho_n;
        out.push(acc);
        rho_n *= rho;
    }
    Ok(out)
}

/// `log10` of the largest `|a_n - b_n| / |b_n|` over the common prefix.
pub fn max_log10_rel_diff(a: &[Complex], b: &[Complex]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let prec = x.prec().0.max(y.prec().0);
            let d = abs(&Complex::with_val(prec, x - y));
            log10(&(d / abs(y)))
        })
        .fold(f64::NEG_INFINITY, f64::max)
}
