//! Quotient-difference conversion of a Taylor series into the corresponding
//! continued fraction
//!
//! ```text
//! F(zeta) = a_0 / (1 + a_1 z / (1 + a_2 z / (1 + ...))),   z = zeta - zeta0
//! ```
//!
//! and evaluation of its convergents `P_k / Q_k`.
//!
//! The QD rhombus rules are
//!
//! ```text
//! e_0^(n) = 0,  q_1^(n) = c_{n+1} / c_n
//! e_k^(n)     = q_k^(n+1) - q_k^(n) + e_{k-1}^(n+1)
//! q_{k+1}^(n) = e_k^(n+1) / e_k^(n) * q_k^(n+1)
//! ```
//!
//! and the fraction is read off the top row with a sign flip:
//! `a_1 = -q_1^(0)`, `a_2 = -e_1^(0)`, `a_3 = -q_2^(0)`, ...
//!
//! The recurrences lose accuracy quickly, so the tableau is built at 1.5
//! times the working digit count and the partial numerators are rounded back.

use rug::{Complex, Float};

use crate::defining_function::TaylorSeries;
use crate::error::{Error, Result};
use crate::mp::{abs, ten_pow, PrecisionContext};

/// Offset, in decimal digits, of the pivot breakdown threshold from the
/// nominal precision.
const BREAKDOWN_SLACK_DIGITS: i32 = 5;

/// Rescale `P_k, Q_k` once `|Q_k|` leaves `[10^-50, 10^50]`.
const RESCALE_LOG2: i64 = 166;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PivotKind {
    /// `c_n` while forming `q_1`
    Coefficient,
    /// `e_k^(n)` while forming `q_{k+1}`
    Difference,
}

/// Where a vanishing pivot stopped a column.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Breakdown {
    /// `k` of the pivot `e_k^(n)`; 0 for a coefficient pivot `c_n`.
    pub column: usize,
    pub row: usize,
    pub kind: PivotKind,
}

#[derive(Clone, Debug)]
pub struct QdTableau {
    /// `e[k][n] = e_k^(n)`, including the zero column `k = 0`.
    e: Vec<Vec<Complex>>,
    /// `q[k - 1][n] = q_k^(n)`.
    q: Vec<Vec<Complex>>,
    breakdown_at: Option<Breakdown>,
}

impl QdTableau {
    pub fn e(&self, k: usize, n: usize) -> Option<&Complex> {
        self.e.get(k)?.get(n)
    }

    pub fn q(&self, k: usize, n: usize) -> Option<&Complex> {
        self.q.get(k.checked_sub(1)?)?.get(n)
    }

    /// Length of column `e_k`.
    pub fn e_len(&self, k: usize) -> usize {
        self.e.get(k).map_or(0, Vec::len)
    }

    /// Length of column `q_k`.
    pub fn q_len(&self, k: usize) -> usize {
        k.checked_sub(1)
            .and_then(|i| self.q.get(i))
            .map_or(0, Vec::len)
    }

    /// Number of `q` columns produced.
    pub fn depth(&self) -> usize {
        self.q.len()
    }

    /// First pivot that vanished, if any.
    pub fn breakdown_at(&self) -> Option<Breakdown> {
        self.breakdown_at
    }
}

/// `a_0 / (1 + a_1 z / (1 + a_2 z / ...))` with `z = zeta - center`.
#[derive(Clone, Debug, PartialEq)]
pub struct ContinuedFraction {
    center: Complex,
    coefficients: Vec<Complex>,
}

impl ContinuedFraction {
    pub fn new(center: Complex, coefficients: Vec<Complex>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::InvalidArgument("continued fraction needs a_0".into()));
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

    /// Number of partial numerators, `a_0` included.
    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn prec(&self) -> u32 {
        self.coefficients[0].prec().0
    }
}

/// Values of `P_k(zeta)` and `Q_k(zeta)`, possibly sharing a power-of-two
/// factor `2^-rescale_exponent` with the unscaled recurrence.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergentPair {
    pub p: Complex,
    pub q: Complex,
    pub rescale_exponent: i64,
}

impl ConvergentPair {
    pub fn value(&self) -> Complex {
        Complex::with_val(self.p.prec(), &self.p / &self.q)
    }
}

fn is_zero(z: &Complex) -> bool {
    z.real().is_zero() && z.imag().is_zero()
}

/// True when `|value| < threshold * scale` (and always for an exact zero).
fn negligible(value: &Complex, scale: &Float, threshold: &Float) -> bool {
    is_zero(value) || abs(value) < Float::with_val(threshold.prec(), scale * threshold)
}

fn max_abs<'a>(prec: u32, values: impl IntoIterator<Item = &'a Complex>) -> Float {
    values
        .into_iter()
        .fold(Float::new(prec), |m, v| m.max(&abs(v)))
}

fn note(slot: &mut Option<Breakdown>, b: Breakdown) {
    if slot.is_none() {
        log::debug!("QD breakdown at {b:?}");
        *slot = Some(b);
    }
}

/// Runs the QD algorithm on `series` and reads off the continued fraction.
///
/// A pivot that is zero to within `10^-(decimal_digits - 5)` of the entries
/// that produced it stops its column; entries depending on it are not formed
/// and the fraction ends where the top row runs out. A vanishing `e_k^(0)`
/// marks a terminating fraction, so `a_{2k}` is dropped.
pub fn qd_transform(
    series: &TaylorSeries,
    ctx: &PrecisionContext,
) -> Result<(QdTableau, ContinuedFraction)> {
    let qd_ctx = ctx.scaled(3, 2);
    let qp = qd_ctx.bits();
    let threshold = ten_pow(-(ctx.decimal_digits() as i32) + BREAKDOWN_SLACK_DIGITS, qp);
    let c: Vec<Complex> = series
        .coefficients()
        .iter()
        .map(|v| Complex::with_val(qp, v))
        .collect();

    if is_zero(&c[0]) || negligible(&c[0], &abs(&c[1]), &threshold) {
        return Err(Error::DegenerateSeries);
    }

    let mut breakdown_at = None;

    let mut q1 = Vec::with_capacity(c.len() - 1);
    for n in 0..c.len() - 1 {
        if n > 0 {
            let scale = max_abs(qp, [&c[n - 1], &c[n + 1]]);
            if negligible(&c[n], &scale, &threshold) {
                note(&mut breakdown_at, Breakdown {
                    column: 0,
                    row: n,
                    kind: PivotKind::Coefficient,
                });
                break;
            }
        }
        q1.push(Complex::with_val(qp, &c[n + 1] / &c[n]));
    }

    let mut e_cols: Vec<Vec<Complex>> = vec![vec![Complex::new(qp); q1.len() + 1]];
    let mut q_cols: Vec<Vec<Complex>> = vec![q1];
    // whether e_k^(0) vanished, i.e. the fraction terminates before a_{2k}
    let mut terminal_e = false;

    loop {
        let qk = q_cols.last().expect("q_1 exists");
        let e_prev = e_cols.last().expect("e_0 exists");
        if qk.len() < 2 {
            break;
        }
        let mut ek = Vec::with_capacity(qk.len() - 1);
        let mut scales = Vec::with_capacity(qk.len() - 1);
        for n in 0..qk.len() - 1 {
            let mut v = Complex::with_val(qp, &qk[n + 1] - &qk[n]);
            v += &e_prev[n + 1];
            scales.push(max_abs(qp, [&qk[n + 1], &qk[n], &e_prev[n + 1]]));
            ek.push(v);
        }
        let k = e_cols.len();
        let mut next_q = Vec::with_capacity(ek.len().saturating_sub(1));
        for n in 0..ek.len().saturating_sub(1) {
            if negligible(&ek[n], &scales[n], &threshold) {
                note(&mut breakdown_at, Breakdown {
                    column: k,
                    row: n,
                    kind: PivotKind::Difference,
                });
                break;
            }
            let ratio = Complex::with_val(qp, &ek[n + 1] / &ek[n]);
            next_q.push(ratio * &qk[n + 1]);
        }
        if negligible(&ek[0], &scales[0], &threshold) {
            terminal_e = true;
            note(
                &mut breakdown_at,
                Breakdown {
                    column: k,
                    row: 0,
                    kind: PivotKind::Difference,
                },
            );
        }
        e_cols.push(ek);
        if terminal_e || next_q.is_empty() {
            break;
        }
        q_cols.push(next_q);
    }

    let wp = ctx.bits();
    let mut coefficients = vec![Complex::with_val(wp, &c[0])];
    for k in 1..=q_cols.len() {
        match q_cols[k - 1].first() {
            Some(q) => coefficients.push(Complex::with_val(wp, -q)),
            None => break,
        }
        let last_e = k == e_cols.len() - 1 && terminal_e;
        match e_cols.get(k).and_then(|col| col.first()) {
            Some(e) if !last_e => coefficients.push(Complex::with_val(wp, -e)),
            _ => break,
        }
    }
    if coefficients.len() < 2 {
        return Err(Error::SeriesTooShort);
    }

    let cf = ContinuedFraction::new(Complex::with_val(wp, series.center()), coefficients)?;
    let tableau = QdTableau {
        e: e_cols,
        q: q_cols,
        breakdown_at,
    };
    Ok((tableau, cf))
}

/// Convergent pairs `(P_k, Q_k)` for `k = 0 .. cf.len() - 1` at `zeta`.
pub fn convergents(cf: &ContinuedFraction, zeta: &Complex, rescale: bool) -> Result<Vec<ConvergentPair>> {
    let prec = cf.prec().max(zeta.prec().0);
    let z = Complex::with_val(prec, zeta - &cf.center);
    let a = &cf.coefficients;

    let mut p_prev = Complex::new(prec);
    let mut q_prev = Complex::with_val(prec, 1);
    let mut p = Complex::with_val(prec, &a[0]);
    let mut q = Complex::with_val(prec, 1);
    let mut exponent = 0i64;
    let mut out = Vec::with_capacity(a.len());
    out.push(ConvergentPair {
        p: p.clone(),
        q: q.clone(),
        rescale_exponent: 0,
    });

    for (k, ak) in a.iter().enumerate().skip(1) {
        let az = Complex::with_val(prec, ak * &z);
        let p_next = Complex::with_val(prec, &az * &p_prev) + &p;
        let q_next = Complex::with_val(prec, &az * &q_prev) + &q;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
        if is_zero(&q) {
            return Err(Error::Pole { k });
        }
        if rescale {
            let mag = abs(&q);
            let e = i64::from(mag.get_exp().unwrap_or(0));
            if e.abs() > RESCALE_LOG2 {
                let shift = i32::try_from(e).expect("exponent fits in i32");
                for v in [&mut p, &mut q, &mut p_prev, &mut q_prev] {
                    *v >>= shift;
                }
                exponent += e;
            }
        }
        out.push(ConvergentPair {
            p: p.clone(),
            q: q.clone(),
            rescale_exponent: exponent,
        });
    }
    Ok(out)
}

/// `P_k(zeta) / Q_k(zeta)`.
pub fn convergent_value(cf: &ContinuedFraction, zeta: &Complex, k: usize) -> Result<Complex> {
    if k >= cf.len() {
        return Err(Error::InvalidArgument(format!(
            "convergent {k} requested from a fraction with {} terms",
            cf.len()
        )));
    }
    let truncated = ContinuedFraction::new(cf.center.clone(), cf.coefficients[..=k].to_vec())?;
    let pairs = convergents(&truncated, zeta, true)?;
    Ok(pairs[k].value())
}

#[derive(Clone, Debug)]
pub struct CfValue {
    pub value: Complex,
    /// `|P_k/Q_k - P_{k-1}/Q_{k-1}|` at the returned `k`.
    pub err_estimate: Float,
    pub k_used: usize,
}

/// Evaluates the fraction at `zeta`, stopping at the first convergent that
/// moved by at most `tol` relative to its own size, or at the last one.
pub fn cf_eval(cf: &ContinuedFraction, zeta: &Complex, tol: &Float) -> Result<CfValue> {
    cf_eval_with(cf, zeta, tol, true)
}

pub fn cf_eval_with(cf: &ContinuedFraction, zeta: &Complex, tol: &Float, rescale: bool) -> Result<CfValue> {
    if cf.len() < 2 {
        return Err(Error::InvalidArgument(
            "continued fraction needs at least two coefficients".into(),
        ));
    }
    if *tol <= 0 {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let pairs = convergents(cf, zeta, rescale)?;
    let prec = pairs[0].p.prec().0;
    let mut previous = pairs[0].value();
    let mut last_diff = Float::with_val(prec, f64::INFINITY);
    for (k, pair) in pairs.iter().enumerate().skip(1) {
        let value = pair.value();
        let diff = abs(&Complex::with_val(prec, &value - &previous));
        if diff <= Float::with_val(prec, abs(&value) * tol) {
            return Ok(CfValue {
                value,
                err_estimate: diff,
                k_used: k,
            });
        }
        last_diff = diff;
        previous = value;
    }
    Ok(CfValue {
        value: previous,
        err_estimate: last_diff,
        k_used: pairs.len() - 1,
    })
}
