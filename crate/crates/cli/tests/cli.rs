use std::process::{Command, Output};

use oscint_cli::report::ReportRow;
use serde_json::Value;

fn oscint(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oscint"))
        .args(args)
        .env_remove("OSCINT_DIGITS")
        .output()
        .expect("binary runs")
}

fn json_rows(args: &[&str]) -> Vec<ReportRow> {
    let out = oscint(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON report")
}

fn log10_err(row: &ReportRow) -> f64 {
    row.relative_error
        .as_deref()
        .expect("relative error present")
        .parse::<f64>()
        .unwrap()
        .log10()
}

#[test]
fn all_integrals_meet_the_table_one_bound() {
    let rows = json_rows(&["run", "--all", "--method", "hyperfunction", "--digits", "100", "--format", "json"]);
    assert_eq!(rows.len(), 8);
    for (i, r) in rows.iter().enumerate() {
        assert_eq!(r.id, i as u32 + 1);
        assert!(log10_err(r) <= -20.0, "integral {}", r.id);
        assert!(r.eval_count.unwrap() <= 2000);
        assert!(r.k_used.is_some() && r.panels_used.is_none());
    }
}

#[test]
fn euler_run_counts_panel_evaluations() {
    let rows = json_rows(&["run", "--integral", "3", "--method", "euler", "--panels", "50", "--format", "json"]);
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].eval_count, Some(5000));
    assert_eq!(rows[0].panels_used, Some(50));
    assert!(log10_err(&rows[0]) <= -20.0);
}

#[test]
fn both_methods_give_two_objects_with_the_documented_fields() {
    let out = oscint(&["run", "--integral", "3", "--method", "both", "--format", "json"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let arr = v.as_array().unwrap();
    assert_eq!(arr.len(), 2);
    let mut keys: Vec<&str> = arr[0].as_object().unwrap().keys().map(String::as_str).collect();
    keys.sort_unstable();
    assert_eq!(
        keys,
        [
            "err_estimate", "error", "eval_count", "id", "k_used", "method", "panels_used",
            "reference", "relative_error", "value", "wall_time_ms"
        ]
    );
    assert_eq!(arr[0]["method"], "hyperfunction");
    assert_eq!(arr[1]["method"], "euler");
    assert!(arr[0]["value"].is_string());
}

#[test]
fn json_report_round_trips() {
    let out = oscint(&["run", "--integral", "4,5", "--digits", "40", "--format", "json"]);
    let rows: Vec<ReportRow> = serde_json::from_slice(&out.stdout).unwrap();
    let printed = serde_json::to_string_pretty(&rows).unwrap();
    assert_eq!(printed.trim(), String::from_utf8(out.stdout).unwrap().trim());
}

#[test]
fn formats_carry_identical_numbers() {
    let base = ["run", "--integral", "2", "--method", "both", "--digits", "40"];
    let rows = json_rows(&[&base[..], &["--format", "json"]].concat());
    let text = String::from_utf8(oscint(&[&base[..], &["--format", "text"]].concat()).stdout).unwrap();
    let csv = String::from_utf8(oscint(&[&base[..], &["--format", "csv"]].concat()).stdout).unwrap();
    for r in &rows {
        for s in [r.value.as_ref().unwrap(), &r.reference, r.relative_error.as_ref().unwrap(), r.err_estimate.as_ref().unwrap()] {
            assert!(text.contains(s.as_str()), "text lacks {s}");
            assert!(csv.contains(s.as_str()), "csv lacks {s}");
        }
    }
    let header = csv.lines().next().unwrap();
    assert_eq!(
        header,
        "id,method,value,reference,relative_error,err_estimate,eval_count,k_used,panels_used,wall_time_ms,error"
    );
}

#[test]
fn sweep_over_n_improves() {
    let rows = json_rows(&[
        "sweep", "--integral", "4", "--axis", "n", "--values", "20,40,60,80,100", "--format", "json",
    ]);
    assert_eq!(rows.len(), 5);
    let errs: Vec<f64> = rows.iter().map(log10_err).collect();
    assert!(errs[4] <= errs[0], "{errs:?}");
    assert_eq!(rows[0].axis.as_deref(), Some("n"));
    assert_eq!(rows[2].axis_value.as_deref(), Some("60"));
}

#[test]
fn sweep_over_digits_shows_the_precision_requirement() {
    let rows = json_rows(&["sweep", "--integral", "3", "--axis", "digits", "--values", "30,100", "--format", "json"]);
    assert_eq!(rows.len(), 2);
    assert!(log10_err(&rows[0]) - log10_err(&rows[1]) >= 10.0);
}

#[test]
fn sweep_csv_has_axis_columns() {
    let out = oscint(&["sweep", "--integral", "1", "--axis", "zeta0-im", "--values", "1,2", "--digits", "30", "--format", "csv"]);
    assert!(out.status.success());
    let csv = String::from_utf8(out.stdout).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("axis,axis_value,id,method"));
    assert!(lines.next().unwrap().starts_with("zeta0-im,1,1,hyperfunction"));
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["sweep", "--integral", "3", "--axis", "digits", "--values", ""][..],
        &["run", "--integral", "3", "--digits", "10"],
        &["run", "--integral", "3", "--zeta0", "0-1i"],
        &["run", "--integral", "9"],
        &["run"],
        &["run", "--integral", "3", "--n-coeffs", "1"],
        &["sweep", "--integral", "3", "--axis", "n", "--values", "ten"],
    ] {
        let out = oscint(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn digits_default_comes_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_oscint"))
        .args(["run", "--integral", "3", "--format", "json"])
        .env("OSCINT_DIGITS", "30")
        .output()
        .unwrap();
    let rows: Vec<ReportRow> = serde_json::from_slice(&out.stdout).unwrap();
    let e = log10_err(&rows[0]);
    assert!(e > -30.0 && e < -10.0, "{e}");
}

#[test]
fn report_can_go_to_a_file_and_workers_keep_order() {
    let path = std::env::temp_dir().join(format!("oscint-report-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let out = oscint(&["run", "--integral", "5,1,3", "--digits", "30", "--workers", "3", "--format", "json", "--output", p]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let rows: Vec<ReportRow> = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(rows.iter().map(|r| r.id).collect::<Vec<_>>(), vec![1, 3, 5]);
}

#[test]
fn list_shows_the_catalog() {
    let out = oscint(&["list", "--format", "json"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let arr = v.as_array().unwrap();
    assert_eq!(arr.len(), 8);
    assert_eq!(arr[3]["closed_form"], "K0(1)");
    assert!(arr[0]["reference"].as_str().unwrap().starts_with("6.9314718055994530941"));
    let text = String::from_utf8(oscint(&["list"]).stdout).unwrap();
    assert_eq!(text.lines().count(), 8);
}
