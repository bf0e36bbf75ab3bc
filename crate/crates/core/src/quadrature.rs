//! Double-exponential quadrature on (0, inf) and Gauss-Legendre panel rules.
//!
//! The DE rule substitutes `x = phi(t) = exp(t - exp(-t))` and applies the
//! trapezoidal rule in `t`. The map decays double exponentially at both ends
//! for integrands of the form `g(x) e^(-a x)`, and squeezes the `x -> 0` end
//! hard enough that logarithmic endpoint singularities need no special
//! treatment. Step halving starts at `h = 1/2`; every level keeps the nodes of
//! the previous one and only evaluates the interleaved new ones.

use std::f64::consts::LN_10;

use rug::float::Constant;
use rug::{Complex, Float};

use crate::error::{Error, Result};
use crate::mp::{abs, digits_to_bits, log10_abs, ten_pow, to_decimal, PrecisionContext};

pub const INITIAL_STEP: f64 = 0.5;
/// Step halving gives up once `h < 2^-MAX_HALVINGS`.
pub const MAX_HALVINGS: u32 = 20;

/// Trapezoidal rule in the DE variable `t`, recorded at its final step size.
#[derive(Clone, Debug)]
pub struct DeRule {
    step: Float,
    t_lo: Float,
    t_hi: Float,
    nodes: Vec<Float>,
    weights: Vec<Float>,
}

impl DeRule {
    pub fn step(&self) -> &Float {
        &self.step
    }

    pub fn t_range(&self) -> (&Float, &Float) {
        (&self.t_lo, &self.t_hi)
    }

    /// Abscissae `x_j = phi(t_j)`, strictly increasing.
    pub fn nodes(&self) -> &[Float] {
        &self.nodes
    }

    /// `w_j = phi'(t_j) h`.
    pub fn weights(&self) -> &[Float] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Applies the frozen rule to another integrand, summing in node order.
    pub fn integrate<G>(&self, mut g: G) -> Complex
    where
        G: FnMut(&Float) -> Complex,
    {
        let prec = self.step.prec();
        let mut acc = Complex::new(prec);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += g(x) * w;
        }
        acc
    }
}

/// Smallest `x` with `decay_rate x - n ln x >= (target_digits + 10) ln 10`
/// beyond the maximum of `x^n e^(-decay_rate x)`. Past it, `x^n e^(-decay_rate x)`
/// (and so also `x^n e^(-decay_rate x) / n!`) stays below `10^-(target_digits + 10)`.
pub fn truncation_point(decay_rate: f64, max_poly_order: u32, target_digits: u32) -> f64 {
    assert!(decay_rate > 0.0, "decay_rate must be positive");
    let n = f64::from(max_poly_order);
    let rhs = (f64::from(target_digits) + 10.0) * LN_10;
    let excess = |x: f64| decay_rate * x - n * x.ln() - rhs;
    // the left side increases for x > n / decay_rate
    let mut lo = (n / decay_rate).max(f64::MIN_POSITIVE);
    if excess(lo) >= 0.0 {
        return lo;
    }
    let mut hi = lo.max(1.0) * 2.0;
    while excess(hi) < 0.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if excess(mid) >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-12 * hi {
            break;
        }
    }
    hi
}

fn phi_f64(t: f64) -> f64 {
    (t - (-t).exp()).exp()
}

/// Solves `phi(t) = x` for `t` by bisection; `phi` is increasing.
fn phi_inverse_ln(ln_x: f64) -> f64 {
    let g = |t: f64| t - (-t).exp() - ln_x;
    let (mut lo, mut hi) = (-50.0, 50.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Truncated `t` interval for a DE rule, rounded outward to multiples of the
/// initial step so every halving level covers the same interval.
pub fn de_t_range(decay_rate: f64, max_poly_order: u32, ctx: &PrecisionContext) -> (f64, f64) {
    let digits = f64::from(ctx.decimal_digits()) + 10.0;
    // int_0^x_lo |ln x| dx ~ x_lo (|ln x_lo| + 1)
    let ln_x_lo = -digits * LN_10 - (digits * LN_10 + 1.0).ln();
    let x_hi = truncation_point(decay_rate, max_poly_order, ctx.decimal_digits());
    let t_lo = phi_inverse_ln(ln_x_lo);
    let t_hi = phi_inverse_ln(x_hi.ln());
    debug_assert!(phi_f64(t_hi) >= x_hi * (1.0 - 1e-9));
    (
        (t_lo / INITIAL_STEP).floor() * INITIAL_STEP,
        (t_hi / INITIAL_STEP).ceil() * INITIAL_STEP,
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DeOptions {
    /// Give up once the step falls below `INITIAL_STEP / 2^max_halvings`.
    pub max_halvings: u32,
}

impl Default for DeOptions {
    fn default() -> Self {
        Self {
            max_halvings: MAX_HALVINGS,
        }
    }
}

/// Outcome of a vector-valued DE integration.
#[derive(Clone, Debug)]
pub struct DeIntegration {
    pub values: Vec<Complex>,
    pub rule: DeRule,
    /// Size of the last step-halving correction of component 0.
    pub last_correction: Float,
    pub halvings: u32,
}

/// Integrates several functions of `x` on one shared node set.
///
/// `g(x)` returns all components at `x`; it is called exactly once per node.
/// Halving stops when component 0 changes by at most
/// `10^-(decimal_digits + 5)` times its absolute-value integral.
pub fn de_integrate_components<G>(
    components: usize,
    decay_rate: f64,
    max_poly_order: u32,
    ctx: &PrecisionContext,
    g: G,
) -> Result<DeIntegration>
where
    G: FnMut(&Float) -> Vec<Complex>,
{
    de_integrate_components_with(DeOptions::default(), components, decay_rate, max_poly_order, ctx, g)
}

pub fn de_integrate_components_with<G>(
    options: DeOptions,
    components: usize,
    decay_rate: f64,
    max_poly_order: u32,
    ctx: &PrecisionContext,
    mut g: G,
) -> Result<DeIntegration>
where
    G: FnMut(&Float) -> Vec<Complex>,
{
    if decay_rate <= 0.0 || !decay_rate.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "decay rate must be positive, got {decay_rate}"
        )));
    }
    if components == 0 {
        return Err(Error::InvalidArgument("no components to integrate".into()));
    }
    let prec = ctx.bits();
    let (t_lo, t_hi) = de_t_range(decay_rate, max_poly_order, ctx);
    let tol = ten_pow(-(ctx.decimal_digits() as i32) - 5, prec);

    // nodes are identified by their index k on the finest grid seen so far;
    // indices are doubled when the step halves
    let mut visited: Vec<(i64, Float, Float)> = Vec::new();
    let mut sums = vec![Complex::new(prec); components];
    let mut abs_sum = Float::new(prec);
    let mut previous: Option<Complex> = None;
    let mut last_correction = Float::with_val(prec, f64::INFINITY);

    for level in 0..=options.max_halvings {
        let step_f = INITIAL_STEP / f64::from(1u32 << level);
        let k_lo = (t_lo / step_f).round() as i64;
        let k_hi = (t_hi / step_f).round() as i64;
        if level > 0 {
            for entry in visited.iter_mut() {
                entry.0 *= 2;
            }
        }
        let stride = if level == 0 { 1 } else { 2 };
        let first = if level == 0 {
            k_lo
        } else if k_lo.rem_euclid(2) == 0 {
            k_lo + 1
        } else {
            k_lo
        };
        let step = Float::with_val(prec, Float::with_val(prec, INITIAL_STEP) >> level);
        let mut k = first;
        while k <= k_hi {
            let t = Float::with_val(prec, &step * k);
            let emt = Float::with_val(prec, -&t).exp();
            let x = (Float::with_val(prec, &t - &emt)).exp();
            let dphi = Float::with_val(prec, &x * Float::with_val(prec, &emt + 1u32));
            let values = g(&x);
            debug_assert_eq!(values.len(), components);
            for (sum, v) in sums.iter_mut().zip(values.iter()) {
                *sum += Complex::with_val(prec, v * &dphi);
            }
            abs_sum += abs(&values[0]) * &dphi;
            visited.push((k, x, dphi));
            k += stride;
        }
        let estimate = Complex::with_val(prec, &sums[0] * &step);
        if let Some(prev) = previous.as_ref() {
            last_correction = abs(&Complex::with_val(prec, &estimate - prev));
            let scale = Float::with_val(prec, &abs_sum * &step);
            if last_correction <= Float::with_val(prec, &scale * &tol) {
                return Ok(finish(visited, sums, step, t_lo, t_hi, last_correction, level));
            }
        }
        log::debug!(
            "DE level {level}: {} nodes, correction 1e{:.1}",
            visited.len(),
            log10_abs(&last_correction)
        );
        previous = Some(estimate);
    }

    let estimate = previous.expect("at least one level");
    Err(Error::NotConverged {
        estimate: format!(
            "{}{:+}i",
            to_decimal(estimate.real()),
            to_decimal(estimate.imag())
        ),
        last_correction: last_correction.to_f64(),
        step: INITIAL_STEP / f64::from(1u32 << options.max_halvings),
    })
}

fn finish(
    mut visited: Vec<(i64, Float, Float)>,
    sums: Vec<Complex>,
    step: Float,
    t_lo: f64,
    t_hi: f64,
    last_correction: Float,
    halvings: u32,
) -> DeIntegration {
    let prec = step.prec();
    visited.sort_by_key(|entry| entry.0);
    let (nodes, weights): (Vec<Float>, Vec<Float>) = visited
        .into_iter()
        .map(|(_, x, dphi)| (x, dphi * &step))
        .unzip();
    let values = sums
        .into_iter()
        .map(|s| Complex::with_val(prec, s * &step))
        .collect();
    DeIntegration {
        values,
        rule: DeRule {
            t_lo: Float::with_val(prec, t_lo),
            t_hi: Float::with_val(prec, t_hi),
            step,
            nodes,
            weights,
        },
        last_correction,
        halvings,
    }
}

/// `int_0^inf g(x) dx` for `g(x) e^(decay_rate x)` bounded by a polynomial of
/// degree `max_poly_order`.
pub fn de_integrate<G>(
    mut g: G,
    decay_rate: f64,
    max_poly_order: u32,
    ctx: &PrecisionContext,
) -> Result<(Complex, DeRule)>
where
    G: FnMut(&Float) -> Complex,
{
    let out = de_integrate_components(1, decay_rate, max_poly_order, ctx, |x| vec![g(x)])?;
    let value = out.values.into_iter().next().expect("one component");
    Ok((value, out.rule))
}

#[derive(Clone, Debug)]
pub struct GaussLegendreRule {
    nodes: Vec<Float>,
    weights: Vec<Float>,
}

impl GaussLegendreRule {
    pub fn n(&self) -> usize {
        self.nodes.len()
    }

    /// Nodes in (-1, 1), increasing.
    pub fn nodes(&self) -> &[Float] {
        &self.nodes
    }

    pub fn weights(&self) -> &[Float] {
        &self.weights
    }

    pub fn prec(&self) -> u32 {
        self.weights[0].prec()
    }
}

/// P_n(x) and P_n'(x) by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: &Float) -> (Float, Float) {
    let prec = x.prec();
    let mut p_prev = Float::with_val(prec, 1);
    let mut p = x.clone();
    for k in 2..=n {
        let k = k as u32;
        let next = (Float::with_val(prec, x * &p) * (2 * k - 1) - Float::with_val(prec, &p_prev * (k - 1))) / k;
        p_prev = std::mem::replace(&mut p, next);
    }
    if n == 0 {
        return (Float::with_val(prec, 1), Float::new(prec));
    }
    // (x^2 - 1) P_n' = n (x P_n - P_{n-1})
    let num = Float::with_val(prec, x * &p) - &p_prev;
    let den = Float::with_val(prec, x.square_ref()) - 1u32;
    let dp = num * n as u32 / den;
    (p, dp)
}

/// n-point Gauss-Legendre rule on [-1, 1] at the context's working precision.
pub fn gauss_legendre(n: usize, ctx: &PrecisionContext) -> Result<GaussLegendreRule> {
    if n == 0 {
        return Err(Error::InvalidArgument("Gauss-Legendre needs n >= 1".into()));
    }
    let prec = ctx.bits();
    let newton_prec = prec + digits_to_bits(5);
    let tol = Float::with_val(newton_prec, Float::i_exp(1, -(prec as i32) - 2));
    let pi = Float::with_val(newton_prec, Constant::Pi);
    let half = n / 2;
    let mut upper: Vec<(Float, Float)> = Vec::with_capacity(half + 1);
    // roots in (0, 1), largest first: x_i ~ cos(pi (i - 1/4) / (n + 1/2))
    for i in 1..=half {
        let angle = Float::with_val(newton_prec, &pi * (4 * i as u32 - 1)) / (4 * n as u32 + 2);
        let mut x = angle.cos();
        let mut converged = false;
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, &x);
            let dx = p / &dp;
            x -= &dx;
            if dx.abs() <= tol {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::Internal(format!(
                "Newton iteration for Legendre root {i} of {n} did not converge"
            )));
        }
        let (_, dp) = legendre_with_derivative(n, &x);
        let one_minus = Float::with_val(newton_prec, 1) - Float::with_val(newton_prec, x.square_ref());
        let w = Float::with_val(newton_prec, 2) / (one_minus * dp.square());
        upper.push((Float::with_val(prec, x), Float::with_val(prec, w)));
    }
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for (x, w) in upper.iter() {
        nodes.push(Float::with_val(prec, -x));
        weights.push(w.clone());
    }
    if n % 2 == 1 {
        let zero = Float::with_val(newton_prec, 0);
        let (_, dp) = legendre_with_derivative(n, &zero);
        nodes.push(Float::new(prec));
        weights.push(Float::with_val(prec, Float::with_val(newton_prec, 2) / dp.square()));
    }
    for (x, w) in upper.into_iter().rev() {
        nodes.push(x);
        weights.push(w);
    }
    Ok(GaussLegendreRule { nodes, weights })
}

/// `int_a^b g(x) dx` with the rule mapped affinely onto `[a, b]`.
pub fn panel_integrate<G>(mut g: G, a: &Float, b: &Float, rule: &GaussLegendreRule) -> Float
where
    G: FnMut(&Float) -> Float,
{
    let prec = rule.prec().max(a.prec()).max(b.prec());
    let mid = Float::with_val(prec, a + b) / 2u32;
    let half = Float::with_val(prec, b - a) / 2u32;
    let mut acc = Float::new(prec);
    for (u, w) in rule.nodes.iter().zip(&rule.weights) {
        let x = Float::with_val(prec, &half * u) + &mid;
        acc += g(&x) * w;
    }
    acc * half
}
