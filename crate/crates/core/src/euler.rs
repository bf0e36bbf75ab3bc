//! Baseline: split the integral at sign changes of the integrand,
//!
//! ```text
//! I = sum_k (-1)^k |int_{a_k}^{a_{k+1}} f|,   0 = a_0 < a_1 < ...
//! ```
//!
//! integrate each panel by Gauss-Legendre and sum the alternating series with
//! the Euler transformation.

use std::cmp::Ordering;

use rug::ops::Pow;
use rug::Float;

use crate::defining_function::Integrand;
use crate::error::{Error, Result};
use crate::mp::{to_sci, ten_pow, ConstantName, PrecisionContext};
use crate::pipeline::{IntegralResult, Method};
use crate::quadrature::{gauss_legendre, panel_integrate, GaussLegendreRule};

pub const DEFAULT_PANELS: usize = 50;
pub const DEFAULT_GL_POINTS: usize = 100;

/// Sign changes are bracketed to this many digits.
const BRACKET_DIGITS: i32 = 30;

/// Scan at most this many steps per requested panel.
const SCAN_STEPS_PER_PANEL: usize = 200;

/// On a panel starting at 0, `x = a_1 u^12` flattens a logarithmic
/// singularity into a smooth integrand in `u`.
const SINGULAR_MAP_POWER: u32 = 12;

#[derive(Clone, Debug)]
pub struct Partition {
    /// `a_0 = 0 < a_1 < ... < a_K`
    pub points: Vec<Float>,
    /// Signed panel integrals, strictly alternating.
    pub panel_values: Vec<Float>,
}

impl Partition {
    pub fn panels(&self) -> usize {
        self.panel_values.len()
    }
}

/// `(-1)^k`-weighted Euler transform `sum_j (-1)^j Delta^j t_0 / 2^(j+1)` of
/// `sum_k (-1)^k t_k`, using every term.
pub fn euler_sum(terms: &[Float]) -> Float {
    euler_sum_with_tail(terms).0
}

/// Euler transform together with the magnitude of its last term.
fn euler_sum_with_tail(terms: &[Float]) -> (Float, Float) {
    let prec = terms.first().map_or(64, Float::prec);
    let mut diffs: Vec<Float> = terms.to_vec();
    let mut sum = Float::new(prec);
    let mut last = Float::new(prec);
    let mut scale = Float::with_val(prec, 0.5);
    for j in 0..terms.len() {
        let mut term = Float::with_val(prec, &diffs[0] * &scale);
        if j % 2 == 1 {
            term = -term;
        }
        sum += &term;
        last = term.abs();
        for i in 0..diffs.len() - 1 {
            let d = Float::with_val(prec, &diffs[i + 1] - &diffs[i]);
            diffs[i] = d;
        }
        diffs.pop();
        scale /= 2u32;
    }
    (sum, last)
}

fn sign(x: &Float) -> Ordering {
    x.cmp0().unwrap_or(Ordering::Equal)
}

/// Locates sign changes of `f` by stepping from `scan_step / 2`, refining each
/// bracket by bisection.
struct Scanner<'a> {
    f: &'a Integrand,
    step: Float,
    x: Float,
    last_sign: Ordering,
    steps: usize,
    max_steps: usize,
}

impl<'a> Scanner<'a> {
    fn new(f: &'a Integrand, step: &Float, max_steps: usize) -> Self {
        let x = Float::with_val(step.prec(), step / 2u32);
        let last_sign = sign(&f.eval(&x));
        Self {
            f,
            step: step.clone(),
            x,
            last_sign,
            steps: 0,
            max_steps,
        }
    }

    fn next_root(&mut self) -> Option<Float> {
        while self.steps < self.max_steps {
            let lo = self.x.clone();
            self.x += &self.step;
            self.steps += 1;
            let s = sign(&self.f.eval(&self.x));
            if s == Ordering::Equal {
                continue;
            }
            if self.last_sign != Ordering::Equal && s != self.last_sign {
                self.last_sign = s;
                return Some(self.bisect(lo, self.x.clone(), s));
            }
            self.last_sign = s;
        }
        None
    }

    fn bisect(&self, mut lo: Float, mut hi: Float, hi_sign: Ordering) -> Float {
        let prec = lo.prec();
        let rel = ten_pow(-BRACKET_DIGITS, prec);
        loop {
            let width = Float::with_val(prec, &hi - &lo);
            if width <= Float::with_val(prec, &hi * &rel) {
                break;
            }
            let mid = Float::with_val(prec, &lo + &hi) / 2u32;
            let s = sign(&self.f.eval(&mid));
            if s == Ordering::Equal {
                return mid;
            }
            if s == hi_sign {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Float::with_val(prec, &lo + &hi) / 2u32
    }
}

fn integrate_panel(f: &Integrand, a: &Float, b: &Float, rule: &GaussLegendreRule) -> Float {
    if a.is_zero() && f.singular_at_zero() {
        let prec = rule.prec().max(b.prec());
        let zero = Float::new(prec);
        let one = Float::with_val(prec, 1);
        return panel_integrate(
            |u| {
                let u11 = Float::with_val(prec, u.pow(SINGULAR_MAP_POWER - 1));
                let x = Float::with_val(prec, &u11 * u) * b;
                let jac = u11 * b * SINGULAR_MAP_POWER;
                f.eval(&x) * jac
            },
            &zero,
            &one,
            rule,
        );
    }
    panel_integrate(|x| f.eval(x), a, b, rule)
}

/// Partition into `k` panels whose integrals alternate strictly in sign.
///
/// Adjacent panels with equal signs are merged and the scan continues, so
/// the points only need to bracket sign changes.
pub fn find_partition(
    f: &Integrand,
    k: usize,
    scan_step: &Float,
    rule: &GaussLegendreRule,
    ctx: &PrecisionContext,
) -> Result<Partition> {
    if k < 4 {
        return Err(Error::InvalidArgument(format!("need at least 4 panels, got {k}")));
    }
    if *scan_step <= 0 {
        return Err(Error::InvalidArgument("scan step must be positive".into()));
    }
    let prec = ctx.bits();
    let step = Float::with_val(prec, scan_step);
    let mut scanner = Scanner::new(f, &step, SCAN_STEPS_PER_PANEL * k);
    let mut points = vec![Float::new(prec)];
    let mut values: Vec<Float> = Vec::with_capacity(k);

    let not_enough = |found: usize, scanner: &Scanner| Error::Partition {
        found,
        wanted: k,
        limit: to_sci(&scanner.x, 6),
    };

    while values.len() < k {
        let b = scanner.next_root().ok_or_else(|| not_enough(values.len(), &scanner))?;
        let a = points.last().expect("a_0 present").clone();
        let v = integrate_panel(f, &a, &b, rule);
        points.push(b);
        values.push(v);
        // merge until the tail alternates
        while values.len() >= 2 {
            let n = values.len();
            let (s_prev, s_last) = (sign(&values[n - 2]), sign(&values[n - 1]));
            if s_last != Ordering::Equal && s_prev != Ordering::Equal && s_last != s_prev {
                break;
            }
            log::debug!("merging panels {} and {} of {}", n - 2, n - 1, f.name());
            points.remove(n - 1);
            values.truncate(n - 2);
            let (a, b) = (&points[n - 2], &points[n - 1]);
            let merged = integrate_panel(f, a, b, rule);
            values.push(merged);
        }
    }
    Ok(Partition {
        points,
        panel_values: values,
    })
}

/// Plain partial sum of the first `k` panels.
pub fn partial_sum(partition: &Partition, k: usize) -> Float {
    let prec = partition.points[0].prec();
    partition.panel_values[..k]
        .iter()
        .fold(Float::new(prec), |acc, v| acc + v)
}

/// Sums `k` panels: the first `k / 3` directly, the rest by Euler transform.
///
/// Transforming from the first panel on spends the high differences on the
/// irregular start of the sequence and loses about eight digits.
pub fn accelerated_sum(partition: &Partition, k: usize) -> (Float, Float) {
    let direct = k / 3;
    let prec = partition.points[0].prec();
    let head = partial_sum(partition, direct);
    let tail: Vec<Float> = partition.panel_values[direct..k]
        .iter()
        .map(|v| Float::with_val(prec, v.abs_ref()))
        .collect();
    let (mut t, last) = euler_sum_with_tail(&tail);
    if sign(&partition.panel_values[direct]) == Ordering::Less {
        t = -t;
    }
    (head + t, last)
}

#[derive(Clone, Debug)]
pub struct EulerConfig {
    pub panels: usize,
    pub gl_points: usize,
    pub ctx: PrecisionContext,
    /// Sign-change scan step; `None` means pi/8.
    pub scan_step: Option<Float>,
}

impl EulerConfig {
    pub fn new(ctx: PrecisionContext) -> Self {
        Self {
            panels: DEFAULT_PANELS,
            gl_points: DEFAULT_GL_POINTS,
            ctx,
            scan_step: None,
        }
    }

    pub fn scan_step(&self) -> Float {
        match &self.scan_step {
            Some(s) => Float::with_val(self.ctx.bits(), s),
            None => self.ctx.constant(ConstantName::Pi) / 8u32,
        }
    }
}

impl Default for EulerConfig {
    fn default() -> Self {
        Self::new(PrecisionContext::default())
    }
}

/// Euler-accelerated value with `k` panels and the default scan step.
pub fn euler_value(
    f: &Integrand,
    k: usize,
    rule: &GaussLegendreRule,
    ctx: &PrecisionContext,
) -> Result<IntegralResult> {
    let step = ctx.constant(ConstantName::Pi) / 8u32;
    euler_run(f, k, &step, rule, ctx).map(|(r, _)| r)
}

/// Builds the rule from `config` and runs the baseline.
pub fn euler_value_with(f: &Integrand, config: &EulerConfig) -> Result<(IntegralResult, Partition)> {
    let rule = gauss_legendre(config.gl_points, &config.ctx)?;
    euler_run(f, config.panels, &config.scan_step(), &rule, &config.ctx)
}

pub fn euler_run(
    f: &Integrand,
    k: usize,
    scan_step: &Float,
    rule: &GaussLegendreRule,
    ctx: &PrecisionContext,
) -> Result<(IntegralResult, Partition)> {
    let before = f.eval_count();
    let partition = find_partition(f, k, scan_step, rule, ctx)?;
    let total = f.eval_count() - before;
    let panel_evals = (k * rule.n()) as u64;
    let (value, err_estimate) = accelerated_sum(&partition, k);
    let result = IntegralResult {
        method: Method::Euler,
        value,
        imag_residue: Float::new(ctx.bits()),
        err_estimate,
        k_used: None,
        panels_used: Some(k),
        eval_count: panel_evals,
        scan_count: total - panel_evals,
    };
    Ok((result, partition))
}
