use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use oscint::catalog;
use oscint::euler::{euler_value_with, EulerConfig};
use oscint::mp::{parse_decimal, to_decimal};
use oscint::pipeline::{hyperfunction_value, HyperfunctionConfig, IntegralResult, Method};
use oscint::PrecisionContext;

use crate::args::{Axis, MethodChoice, RunArgs, Zeta0};
use crate::report::{relative_error, ReportRow};

/// Validated parameters of one evaluation.
#[derive(Clone, Debug)]
pub struct Settings {
    pub digits: u32,
    pub n_coeffs: usize,
    pub zeta0: Zeta0,
    pub panels: usize,
    pub gl_points: usize,
    pub tol: Option<String>,
}

impl Settings {
    pub fn from_args(args: &RunArgs) -> Result<Self, String> {
        let s = Self {
            digits: args.digits,
            n_coeffs: args.n_coeffs,
            zeta0: args.zeta0,
            panels: args.panels,
            gl_points: args.gl_points,
            tol: args.tol.clone(),
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), String> {
        PrecisionContext::new(self.digits).map_err(|e| e.to_string())?;
        if !(self.zeta0.im.is_finite() && self.zeta0.im > 0.0) {
            return Err(format!("zeta0 must have positive imaginary part, got {}", self.zeta0.im));
        }
        if self.n_coeffs < 2 {
            return Err(format!("--n-coeffs must be at least 2, got {}", self.n_coeffs));
        }
        if self.panels < 4 {
            return Err(format!("--panels must be at least 4, got {}", self.panels));
        }
        if self.gl_points == 0 {
            return Err("--gl-points must be positive".into());
        }
        if let Some(t) = &self.tol {
            let v = parse_decimal(t, 64).map_err(|e| e.to_string())?;
            if v.is_nan() || v <= 0 {
                return Err(format!("--tol must be positive, got {t}"));
            }
        }
        Ok(())
    }

    /// Copy with one sweep axis set to `value`.
    pub fn with_axis(&self, axis: Axis, value: &str) -> Result<Self, String> {
        let mut s = self.clone();
        let bad = || format!("invalid {} value `{value}`", axis.name());
        match axis {
            Axis::Digits => s.digits = value.trim().parse().map_err(|_| bad())?,
            Axis::N => s.n_coeffs = value.trim().parse().map_err(|_| bad())?,
            Axis::Zeta0Im => s.zeta0.im = value.trim().parse().map_err(|_| bad())?,
        }
        s.validate()?;
        Ok(s)
    }
}

pub fn methods(choice: MethodChoice) -> Vec<Method> {
    match choice {
        MethodChoice::Hyperfunction => vec![Method::Hyperfunction],
        MethodChoice::Euler => vec![Method::Euler],
        MethodChoice::Both => vec![Method::Hyperfunction, Method::Euler],
    }
}

pub fn selected_ids(args: &RunArgs) -> Vec<u32> {
    if args.all {
        catalog::IDS.collect()
    } else {
        let mut ids = args.integrals.clone();
        ids.sort_unstable();
        ids.dedup();
        ids
    }
}

#[derive(Clone, Debug)]
pub struct Job {
    pub id: u32,
    pub method: Method,
    pub settings: Settings,
    pub axis: Option<(Axis, String)>,
}

fn evaluate(job: &Job, ctx: &PrecisionContext) -> oscint::Result<IntegralResult> {
    let entry = catalog::get(job.id)?;
    let s = &job.settings;
    match job.method {
        Method::Hyperfunction => {
            let tol = s.tol.as_deref().map(|t| ctx.parse(t)).transpose()?;
            let config = HyperfunctionConfig {
                zeta0: (s.zeta0.re, s.zeta0.im),
                n_coeffs: s.n_coeffs,
                ctx: *ctx,
                tol,
            };
            hyperfunction_value(&entry.integrand, &config)
        }
        Method::Euler => {
            let config = EulerConfig {
                panels: s.panels,
                gl_points: s.gl_points,
                ctx: *ctx,
                scan_step: None,
            };
            euler_value_with(&entry.integrand, &config).map(|(r, _)| r)
        }
    }
}

pub fn execute(job: &Job) -> ReportRow {
    let ctx = PrecisionContext::new(job.settings.digits).expect("settings validated");
    let reference = catalog::reference_value(job.id, &ctx)
        .map(|r| to_decimal(&r))
        .unwrap_or_default();
    let start = Instant::now();
    let outcome = evaluate(job, &ctx);
    let wall_time_ms = start.elapsed().as_millis() as u64;
    let (axis, axis_value) = match &job.axis {
        Some((a, v)) => (Some(a.name().to_string()), Some(v.clone())),
        None => (None, None),
    };
    let mut row = ReportRow {
        axis,
        axis_value,
        id: job.id,
        method: job.method.to_string(),
        value: None,
        reference,
        relative_error: None,
        err_estimate: None,
        eval_count: None,
        k_used: None,
        panels_used: None,
        wall_time_ms,
        error: None,
    };
    match outcome {
        Ok(r) => {
            let value = to_decimal(&r.value);
            row.relative_error = relative_error(&value, &row.reference, ctx.bits());
            row.value = Some(value);
            row.err_estimate = Some(to_decimal(&r.err_estimate));
            row.eval_count = Some(r.eval_count);
            row.k_used = r.k_used;
            row.panels_used = r.panels_used;
            if r.scan_count > 0 {
                log::info!("({}) {}: {} scan evaluations", job.id, job.method, r.scan_count);
            }
        }
        Err(e) => {
            log::warn!("({}) {}: {e}", job.id, job.method);
            row.error = Some(e.to_string());
        }
    }
    row
}

/// Runs `jobs` on up to `workers` threads; rows come back in job order.
pub fn run_jobs(jobs: &[Job], workers: usize) -> Vec<ReportRow> {
    let workers = workers.clamp(1, jobs.len().max(1));
    if workers == 1 {
        return jobs.iter().map(execute).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<ReportRow>>> = Mutex::new(vec![None; jobs.len()]);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(job) = jobs.get(i) else { break };
                let row = execute(job);
                slots.lock().expect("no worker panicked holding the lock")[i] = Some(row);
            });
        }
    });
    slots
        .into_inner()
        .expect("workers joined")
        .into_iter()
        .map(|r| r.expect("every job ran"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn settings() -> Settings {
        Settings {
            digits: 30,
            n_coeffs: 30,
            zeta0: Zeta0 { re: 0.0, im: 1.0 },
            panels: 10,
            gl_points: 20,
            tol: None,
        }
    }

    #[test]
    fn validation() {
        assert!(settings().validate().is_ok());
        let mut s = settings();
        s.digits = 15;
        assert!(s.validate().is_err());
        let mut s = settings();
        s.zeta0.im = 0.0;
        assert!(s.validate().is_err());
        let mut s = settings();
        s.n_coeffs = 1;
        assert!(s.validate().is_err());
        let mut s = settings();
        s.tol = Some("-1e-5".into());
        assert!(s.validate().is_err());
        assert!(settings().with_axis(Axis::N, "x").is_err());
        assert_eq!(settings().with_axis(Axis::Zeta0Im, "2").unwrap().zeta0.im, 2.0);
    }

    #[test]
    fn parallel_rows_keep_job_order() {
        let jobs: Vec<Job> = [4u32, 3, 1]
            .iter()
            .map(|&id| Job {
                id,
                method: Method::Hyperfunction,
                settings: settings(),
                axis: None,
            })
            .collect();
        let rows = run_jobs(&jobs, 3);
        assert_eq!(rows.iter().map(|r| r.id).collect::<Vec<_>>(), vec![4, 3, 1]);
        assert!(rows.iter().all(|r| r.ok()));
    }

    #[test]
    fn stage_errors_become_row_errors() {
        let job = Job {
            id: 9,
            method: Method::Euler,
            settings: settings(),
            axis: Some((Axis::Digits, "30".into())),
        };
        let row = execute(&job);
        assert!(!row.ok());
        assert!(row.value.is_none() && row.relative_error.is_none());
        assert_eq!(row.axis.as_deref(), Some("digits"));
    }
}
