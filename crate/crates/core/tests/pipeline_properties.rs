mod common;

use std::sync::OnceLock;

use common::{circle_moments, log10, max_log10_rel_diff, rel_err};
use oscint::catalog;
use oscint::continued_fraction::{cf_eval_with, qd_transform, ContinuedFraction};
use oscint::defining_function::{taylor_coefficients, Integrand};
use oscint::mp::{abs, ten_pow};
use oscint::pipeline::{boundary_sweep, hyperfunction_run, HyperfunctionConfig, HyperfunctionRun};
use oscint::PrecisionContext;
use proptest::prelude::*;
use rug::{Complex, Float};

fn catalog_runs() -> &'static Vec<(u32, HyperfunctionRun)> {
    static RUNS: OnceLock<Vec<(u32, HyperfunctionRun)>> = OnceLock::new();
    RUNS.get_or_init(|| {
        let config = HyperfunctionConfig::default();
        catalog::all()
            .into_iter()
            .map(|e| (e.id, hyperfunction_run(&e.integrand, &config).unwrap()))
            .collect()
    })
}

#[test]
fn imaginary_residue_is_within_estimate() {
    for (id, run) in catalog_runs() {
        let r = &run.result;
        let bound = Float::with_val(r.err_estimate.prec(), &r.err_estimate * 10u32);
        assert!(r.imag_residue <= bound, "integral {id}");
    }
}

#[test]
fn rescaling_policy_does_not_change_values() {
    let config = HyperfunctionConfig::default();
    let tol = config.tolerance();
    let zero = config.ctx.complex(0);
    for (id, run) in catalog_runs() {
        let a = cf_eval_with(&run.fraction, &zero, &tol, true).unwrap();
        let b = cf_eval_with(&run.fraction, &zero, &tol, false).unwrap();
        assert_eq!(a.k_used, b.k_used, "integral {id}");
        let d = abs(&Complex::with_val(config.ctx.bits(), &a.value - &b.value));
        assert!(d <= abs(&b.value) * ten_pow(-95, config.ctx.bits()), "integral {id}");
    }
}

#[test]
fn coefficients_are_shared_and_linear() {
    // c_n[f + 2g] = c_n[f] + 2 c_n[g] on one node set
    let ctx = PrecisionContext::default();
    let zeta0 = ctx.complex((0, 1));
    let f = catalog::get(3).unwrap().integrand;
    let g = catalog::get(4).unwrap().integrand;
    let (f2, g2) = (f.fresh(), g.fresh());
    let h = Integrand::new("f + 2g", false, move |x: &Float| f2.eval(x) + g2.eval(x) * 2u32);
    let (sf, rf) = taylor_coefficients(&f, &zeta0, 30, &ctx).unwrap();
    let (sg, rg) = taylor_coefficients(&g, &zeta0, 30, &ctx).unwrap();
    let (sh, rh) = taylor_coefficients(&h, &zeta0, 30, &ctx).unwrap();
    assert_eq!(f.eval_count() as usize, rf.len());
    assert_eq!(g.eval_count() as usize, rg.len());
    assert_eq!(h.eval_count() as usize, rh.len());
    let combined: Vec<Complex> = sf
        .coefficients()
        .iter()
        .zip(sg.coefficients())
        .map(|(a, b)| Complex::with_val(ctx.bits(), b * 2u32) + a)
        .collect();
    assert!(max_log10_rel_diff(sh.coefficients(), &combined) < -90.0);
}

#[test]
fn convergents_correspond_to_taylor_coefficients() {
    let ctx = PrecisionContext::default();
    let prec = ctx.scaled(3, 1).bits();
    let rho = ten_pow(-10, prec);
    for (id, run) in catalog_runs() {
        for k in 1..=8 {
            let moments = circle_moments(&run.fraction, k, k + 14, &rho, prec).unwrap();
            let err = max_log10_rel_diff(&moments, &run.series.coefficients()[..=k]);
            assert!(err < -90.0, "integral {id}, k = {k}: 1e{err:.1}");
        }
    }
}

#[test]
fn boundary_sweep_settles_on_the_axis_value() {
    let (_, run) = &catalog_runs()[2];
    let config = HyperfunctionConfig::default();
    let sweep = boundary_sweep(&run.fraction, 10, &config.tolerance()).unwrap();
    let mut last = f64::INFINITY;
    for (m, v) in sweep {
        let d = abs(&Complex::with_val(config.ctx.bits(), &v - &run.boundary_value));
        let d = log10(&d);
        assert!(d < last, "m = {m}");
        last = d;
    }
    assert!(last < -9.0);
}

#[test]
fn lower_precision_is_measurably_worse() {
    let e = catalog::get(3).unwrap();
    let low = HyperfunctionConfig::new(PrecisionContext::new(30).unwrap());
    let r30 = hyperfunction_run(&e.integrand, &low).unwrap().result;
    let (_, r100) = &catalog_runs()[2];
    let ref30 = e.reference(&low.ctx);
    let ref100 = e.reference(&PrecisionContext::default());
    let e30 = log10(&rel_err(&r30.value, &ref30));
    let e100 = log10(&rel_err(&r100.result.value, &ref100));
    assert!(e30 - e100 >= 10.0, "{e30} vs {e100}");
    let gap = Float::with_val(ref100.prec(), &r30.value - &r100.result.value).abs();
    assert!(gap > ten_pow(-25, ref100.prec()));
}

fn fraction_from(coeffs: &[(f64, f64)], ctx: &PrecisionContext) -> ContinuedFraction {
    let c = coeffs.iter().map(|&v| ctx.complex(v)).collect();
    ContinuedFraction::new(ctx.complex((0, 1)), c).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn geometric_series_give_one_step_fractions(
        re in -0.9f64..0.9, im in -0.9f64..0.9, c0 in 0.1f64..10.0,
    ) {
        prop_assume!(re.abs() + im.abs() > 1e-3);
        let ctx = PrecisionContext::new(40).unwrap();
        let r = ctx.complex((re, im));
        let mut coeffs = vec![ctx.complex(c0)];
        for n in 1..12 {
            let next = Complex::with_val(ctx.bits(), &coeffs[n - 1] * &r);
            coeffs.push(next);
        }
        let series = oscint::defining_function::TaylorSeries::new(ctx.complex((0, 1)), coeffs).unwrap();
        let (_, cf) = qd_transform(&series, &ctx).unwrap();
        prop_assert_eq!(cf.len(), 2);
        let d = abs(&Complex::with_val(ctx.bits(), &cf.coefficients()[1] + &r));
        prop_assert!(d < ten_pow(-50, ctx.bits()));
    }

    #[test]
    fn rescaling_is_value_neutral(
        coeffs in prop::collection::vec((-1e3f64..1e3, -1e3f64..1e3), 2..40),
        zre in -5.0f64..5.0, zim in -5.0f64..5.0,
    ) {
        let ctx = PrecisionContext::new(40).unwrap();
        let cf = fraction_from(&coeffs, &ctx);
        let zeta = ctx.complex((zre, zim));
        let tol = ten_pow(-30, ctx.bits());
        let a = cf_eval_with(&cf, &zeta, &tol, true);
        let b = cf_eval_with(&cf, &zeta, &tol, false);
        if let (Ok(a), Ok(b)) = (a, b) {
            prop_assert_eq!(a.k_used, b.k_used);
            let d = abs(&Complex::with_val(ctx.bits(), &a.value - &b.value));
            prop_assert!(d <= abs(&b.value) * ten_pow(-40, ctx.bits()));
        }
    }
}
