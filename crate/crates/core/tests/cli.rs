use std::fs;
use std::path::Path;

use epinowcast::cli::{run, EXIT_DATA, EXIT_OK, EXIT_USAGE};
use epinowcast::lag_sweep::read_sweep_csv;
use epinowcast::report::FitReport;
use serde_json::Value;

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("epinowcast").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err, false);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn ok(args: &[&str]) -> String {
    let (code, out, err) = cli(args);
    assert_eq!(code, EXIT_OK, "stderr: {err}");
    out
}

fn write(path: &Path, body: &str) -> String {
    fs::write(path, body).unwrap();
    path.to_str().unwrap().to_string()
}

fn error_json(stderr: &str) -> Value {
    serde_json::from_str(stderr.trim()).expect("structured error on stderr")
}

#[test]
fn fit_json_reports_jhu_model() {
    let out = ok(&[
        "fit",
        "--fixture",
        "--predictor",
        "jhu",
        "--lag",
        "0",
        "--from",
        "2020-03-03",
        "--to",
        "2020-03-28",
        "--format",
        "json",
    ]);
    let v: Value = serde_json::from_str(&out).unwrap();
    for key in [
        "spec",
        "coefficients",
        "r2",
        "adj_r2",
        "mae_log",
        "mape_original",
        "weekend_effect",
        "f",
        "n",
    ] {
        assert!(v.get(key).is_some(), "missing key {key}");
    }
    let coef = &v["coefficients"]["ln_JHU"];
    assert!((coef["estimate"].as_f64().unwrap() - 0.799).abs() < 5e-4);
    assert!((coef["se"].as_f64().unwrap() - 0.059).abs() < 5e-4);
    assert_eq!(coef["stars"], "***");
    assert_eq!(v["coefficients"]["weekend"]["stars"], "**");
    assert_eq!(v["n"], 26);
    assert_eq!(v["f"]["df1"], 2);
    assert_eq!(v["f"]["df2"], 23);
    assert!((v["f"]["value"].as_f64().unwrap() - 94.688).abs() < 5e-4);
    assert!(v.get("generated_at").is_none());
}

#[test]
fn fit_json_round_trips_at_full_precision() {
    let out = ok(&[
        "fit",
        "--fixture",
        "--predictor",
        "google",
        "--lag",
        "3",
        "--format",
        "json",
    ]);
    let report = FitReport::from_json(&out).unwrap();
    assert_eq!(report.to_json() + "\n", out);
    let f = epinowcast::ingest::load_fixture().unwrap();
    let model = epinowcast::nowcast::fit_nowcast(&epinowcast::nowcast::NowcastSpec::new(
        &f.rki,
        &f.google,
        3,
        epinowcast::cli::default_window(),
    ))
    .unwrap();
    assert_eq!(report, FitReport::from_model(&model));
}

#[test]
fn fit_text_renders_table_with_stars() {
    let out = ok(&["fit", "--fixture", "--predictor", "jhu", "--format", "text"]);
    assert!(out.contains("0.799*** (0.059)"), "{out}");
    assert!(out.contains("-0.482** (0.206)"));
    assert!(out.contains("1.176*** (0.413)"));
    assert!(out.contains("Residual Std. Error (df = 23)"));
    assert!(out.contains("94.688***"));
    assert!(out.contains("-38.2%"));
    assert!(!out.contains('\x1b'));
}

#[test]
fn fit_csv_lists_terms() {
    let out = ok(&[
        "fit",
        "--fixture",
        "--predictor",
        "twitter",
        "--lag",
        "3",
        "--format",
        "csv",
    ]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "term,estimate,se,t,p,stars");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("intercept,"));
}

#[test]
fn fit_on_zero_target_is_a_data_error() {
    let (code, out, err) = cli(&["fit", "--fixture", "--from", "2020-02-20", "--to", "2020-03-28"]);
    assert_eq!(code, EXIT_DATA);
    assert!(out.is_empty());
    let e = error_json(&err);
    assert_eq!(e["error"], "NonPositiveValue");
    assert_eq!(e["date"], "2020-02-20");
}

#[test]
fn fit_with_files() {
    let dir = tempfile::tempdir().unwrap();
    let target = write(
        &dir.path().join("rki.csv"),
        "date,value\n2020-03-01,10\n2020-03-02,20\n2020-03-03,15\n2020-03-04,40\n2020-03-05,35\n",
    );
    let pred = write(
        &dir.path().join("searches.csv"),
        "date,value\n2020-03-01,3\n2020-03-02,5\n2020-03-03,4\n2020-03-04,9\n2020-03-05,8\n",
    );
    let out = ok(&[
        "fit",
        "--target",
        &target,
        "--predictor-file",
        &pred,
        "--no-weekend",
        "--format",
        "json",
    ]);
    let report = FitReport::from_json(&out).unwrap();
    assert_eq!(report.n, 5);
    assert_eq!(report.spec.predictor, "searches");
    assert!(!report.spec.weekend_dummy);
    assert!(report.coefficients.contains_key("ln_searches"));
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(cli(&[]).0, EXIT_USAGE);
    assert_eq!(cli(&["fit", "--bogus"]).0, EXIT_USAGE);
    assert_eq!(cli(&["fit"]).0, EXIT_USAGE);
    assert_eq!(cli(&["fit", "--fixture", "--predictor", "weather"]).0, EXIT_USAGE);
    assert_eq!(
        cli(&["fit", "--fixture", "--from", "2020-03-28", "--to", "2020-03-03"]).0,
        EXIT_USAGE
    );
    assert_eq!(cli(&["sweep", "--fixture", "--rule", "best"]).0, EXIT_USAGE);
    assert_eq!(cli(&["frobnicate"]).0, EXIT_USAGE);
    let (code, out, _) = cli(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("sweep"));
}

#[test]
fn sweep_google_table_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let plot = dir.path().join("google_sweep.csv");
    let out = ok(&[
        "sweep",
        "--fixture",
        "--predictor",
        "google",
        "--max-lag",
        "10",
        "--emit-plot",
        plot.to_str().unwrap(),
    ]);
    assert!(out.contains("Selected lag: 2"));
    let csv = fs::read_to_string(&plot).unwrap();
    assert!(csv.starts_with("predictor,lag,metric,value\n"));
    assert!(!csv.contains('\r'));
    let rows = read_sweep_csv(csv.as_bytes()).unwrap();
    assert_eq!(rows.len(), 22);
    for metric in ["adj_r_squared", "mae"] {
        assert_eq!(rows.iter().filter(|r| r.metric == metric).count(), 11);
    }
    assert_eq!((rows[0].lag, rows[0].metric.as_str()), (0, "adj_r_squared"));
    assert_eq!((rows[1].lag, rows[1].metric.as_str()), (0, "mae"));
    assert!(csv.contains("Google,2,adj_r_squared,0.799528\n"));
}

#[test]
fn sweep_combined_notes_disagreement() {
    let out = ok(&["sweep", "--fixture", "--predictor", "google", "--rule", "combined"]);
    assert!(out.contains("adjusted R2 favours lag 2, MAE favours lag 1"), "{out}");
}

#[test]
fn sweep_single_lag() {
    let out = ok(&[
        "sweep",
        "--fixture",
        "--predictor",
        "google",
        "--max-lag",
        "0",
        "--format",
        "json",
    ]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["per_lag"].as_array().unwrap().len(), 1);
    assert_eq!(v["selected_lag"], 0);
}

#[test]
fn sweep_twitter_selects_three() {
    let out = ok(&["sweep", "--fixture", "--predictor", "twitter", "--format", "json"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["selected_lag"], 3);
    assert_eq!(v["selection_rule"], "max_adj_r2");
    let csv = ok(&["sweep", "--fixture", "--predictor", "twitter", "--format", "csv"]);
    assert_eq!(csv.lines().count(), 1 + 11 * 4);
}

#[test]
fn compare_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let plot = dir.path().join("comparison.csv");
    let out = ok(&[
        "compare",
        "--fixture",
        "--from",
        "2020-03-03",
        "--to",
        "2020-03-28",
        "--format",
        "json",
        "--emit-plot",
        plot.to_str().unwrap(),
    ]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!((v["mape"].as_f64().unwrap() - 0.790).abs() < 5e-4);
    assert_eq!(v["rows"].as_array().unwrap().len(), 26);
    let csv = fs::read_to_string(plot).unwrap();
    assert!(csv.starts_with("date,truth,other,ape,signed_diff\n"));
    assert_eq!(csv.lines().count(), 27);
    let text = ok(&["compare", "--fixture"]);
    assert!(text.contains("MAPE: 0.790 over 26 days"));
}

#[test]
fn compare_series_with_itself() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(&dir.path().join("a.csv"), "date,value\n2020-03-01,5\n2020-03-02,7\n");
    let out = ok(&["compare", "--truth", &a, "--other", &a, "--format", "json"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["mape"], 0.0);
}

#[test]
fn compare_outside_data_is_empty_intersection() {
    let (code, _, err) = cli(&["compare", "--fixture", "--from", "2021-01-01", "--to", "2021-01-31"]);
    assert_eq!(code, EXIT_DATA);
    assert_eq!(error_json(&err)["error"], "EmptyIntersection");
}

fn snapshot_store(dir: &Path) {
    // values as published on Mar 30 and Mar 31 for the last reporting days
    write(
        &dir.join("2020-03-30.csv"),
        "date,value\n2020-03-27,2949\n2020-03-28,1703\n2020-03-29,3380\n",
    );
    write(
        &dir.join("2020-03-31.csv"),
        "date,value\n2020-03-27,2949\n2020-03-28,2212\n2020-03-29,10000\n2020-03-30,1500\n",
    );
    write(&dir.join("README.txt"), "not a snapshot");
}

#[test]
fn revisions_profile_from_store() {
    let dir = tempfile::tempdir().unwrap();
    snapshot_store(dir.path());
    let store = dir.path().to_str().unwrap();
    let out = ok(&[
        "revisions",
        "--store",
        store,
        "--old",
        "2020-03-30",
        "--new",
        "2020-03-31",
        "--format",
        "csv",
    ]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "reporting_date,share");
    assert_eq!(lines.len(), 5);
    assert_eq!(lines[1], "2020-03-27,0");
    let share28: f64 = lines[2].split(',').nth(1).unwrap().parse().unwrap();
    assert!((share28 - 0.230).abs() < 5e-4);
    assert_eq!(lines[3], "2020-03-29,0.662");
    assert_eq!(lines[4], "2020-03-30,1");
    let text = ok(&[
        "revisions",
        "--store",
        store,
        "--old",
        "2020-03-30",
        "--new",
        "2020-03-31",
    ]);
    assert!(text.contains("66.2%"));
}

#[test]
fn revisions_identical_snapshots_and_missing_date() {
    let dir = tempfile::tempdir().unwrap();
    let body = "date,value\n2020-03-27,2949\n2020-03-28,2212\n";
    write(&dir.path().join("2020-04-01.csv"), body);
    write(&dir.path().join("2020-04-02.csv"), body);
    let store = dir.path().to_str().unwrap();
    let out = ok(&[
        "revisions",
        "--store",
        store,
        "--old",
        "2020-04-01",
        "--new",
        "2020-04-02",
        "--format",
        "json",
    ]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!(v["rows"].as_array().unwrap().iter().all(|r| r["share"] == 0.0));

    let (code, _, err) = cli(&[
        "revisions",
        "--store",
        store,
        "--old",
        "2020-03-30",
        "--new",
        "2020-04-02",
    ]);
    assert_eq!(code, EXIT_DATA);
    let e = error_json(&err);
    assert_eq!(e["error"], "SnapshotNotFound");
    assert_eq!(e["date"], "2020-03-30");
}

#[test]
fn revisions_undefined_share_is_empty_cell() {
    let dir = tempfile::tempdir().unwrap();
    write(&dir.path().join("2020-04-01.csv"), "date,value\n2020-03-31,3\n");
    write(&dir.path().join("2020-04-02.csv"), "date,value\n2020-03-31,0\n");
    let out = ok(&[
        "revisions",
        "--store",
        dir.path().to_str().unwrap(),
        "--old",
        "2020-04-01",
        "--new",
        "2020-04-02",
        "--format",
        "csv",
    ]);
    assert_eq!(out, "reporting_date,share\n2020-03-31,\n");
}

fn saved_model(dir: &Path, predictor: &str, lag: &str) -> String {
    let path = dir.join(format!("{predictor}.json"));
    ok(&[
        "fit",
        "--fixture",
        "--predictor",
        predictor,
        "--lag",
        lag,
        "--format",
        "json",
        "--output",
        path.to_str().unwrap(),
    ]);
    path.to_str().unwrap().to_string()
}

#[test]
fn predict_three_days_ahead_from_google() {
    let dir = tempfile::tempdir().unwrap();
    let model = saved_model(dir.path(), "google", "3");
    let out = ok(&["predict", "--model", &model, "--fixture", "--format", "csv"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "date,predicted,actual");
    // Google ends 2020-03-28, so predictions run to 2020-03-31
    assert!(lines.last().unwrap().starts_with("2020-03-31,"));
    let report = FitReport::from_json(&fs::read_to_string(&model).unwrap()).unwrap();
    let c = report.coefficients().unwrap();
    // Mar 28 (a Saturday) uses the Google value of Mar 25 (61)
    let want = (c.intercept + c.slope * 61f64.ln() + c.weekend).exp();
    let row = lines.iter().find(|l| l.starts_with("2020-03-28,")).unwrap();
    let got: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
    assert!((got - want).abs() < 1e-9 * want);
    assert!(row.ends_with(",2212"));
}

#[test]
fn predict_from_file_values() {
    let dir = tempfile::tempdir().unwrap();
    let model = saved_model(dir.path(), "jhu", "0");
    let pred = write(
        &dir.path().join("jhu.csv"),
        "date,value\n2020-03-30,4790\n2020-03-31,1\n2020-04-04,1\n",
    );
    let out = ok(&[
        "predict",
        "--model",
        &model,
        "--predictor-file",
        &pred,
        "--format",
        "json",
    ]);
    let v: Value = serde_json::from_str(&out).unwrap();
    let rows = v["predictions"].as_array().unwrap();
    let p0 = rows[0]["predicted"].as_f64().unwrap();
    assert!((p0 - 2832.0).abs() / 2832.0 < 0.01, "{p0}");
    let report = FitReport::from_json(&fs::read_to_string(&model).unwrap()).unwrap();
    let c = report.coefficients().unwrap();
    assert!((rows[1]["predicted"].as_f64().unwrap() - c.intercept.exp()).abs() < 1e-9);
    // 2020-04-04 is a Saturday
    assert!((rows[2]["predicted"].as_f64().unwrap() - (c.intercept + c.weekend).exp()).abs() < 1e-9);
    assert!(rows[0]["actual"].is_null());
}

#[test]
fn predict_reference_curves() {
    let out = ok(&["predict", "--fixture", "--reference-curves"]);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("date,series,value"));
    let series: std::collections::BTreeSet<&str> = out.lines().skip(1).map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(
        series.into_iter().collect::<Vec<_>>(),
        vec!["JHU", "RKI", "predicted_Google", "predicted_JHU", "predicted_Twitter"]
    );
    assert!(out.contains("2020-03-31,predicted_Twitter,"));
    assert!(!out.contains("2020-04-01,predicted_Twitter,"));
    assert!(out.contains("2020-04-04,predicted_JHU,"));
    assert_eq!(cli(&["predict", "--reference-curves"]).0, EXIT_USAGE);
}

#[test]
fn index_command() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(
        &dir.path().join("searches.csv"),
        "date,value\n2020-03-01,3\n2020-03-02,9\n",
    );
    assert_eq!(
        ok(&["index", "--input", &input]),
        "date,value\n2020-03-01,33\n2020-03-02,100\n"
    );
    let zeros = write(&dir.path().join("zeros.csv"), "date,value\n2020-03-01,0\n");
    let (code, _, err) = cli(&["index", "--input", &zeros]);
    assert_eq!(code, EXIT_DATA);
    assert_eq!(error_json(&err)["error"], "AllZero");
}

#[test]
fn convert_command() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(
        &dir.path().join("confirmed.csv"),
        "Province/State,Country/Region,Lat,Long,3/28/20,3/29/20,3/30/20\n,Germany,51,9,57298,62095,61000\n",
    );
    let (code, out, err) = cli(&["convert", "--input", &input, "--country", "Germany"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "date,value\n2020-03-29,4797\n2020-03-30,-1095\n");
    assert!(err.contains("warning: cumulative count decreased on 2020-03-30"));
    let (code, _, err) = cli(&["convert", "--input", &input, "--country", "Atlantis"]);
    assert_eq!(code, EXIT_DATA);
    assert_eq!(error_json(&err)["error"], "CountryNotFound");
}

#[test]
fn missing_input_file_is_data_error() {
    let (code, _, err) = cli(&["index", "--input", "/nonexistent/x.csv"]);
    assert_eq!(code, EXIT_DATA);
    assert_eq!(error_json(&err)["error"], "Io");
}

#[test]
fn commands_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    snapshot_store(dir.path());
    let model = saved_model(dir.path(), "twitter", "3");
    let store = dir.path().to_str().unwrap().to_string();
    let invocations: Vec<Vec<&str>> = vec![
        vec!["fit", "--fixture", "--predictor", "jhu", "--format", "json"],
        vec!["fit", "--fixture", "--predictor", "google", "--lag", "3"],
        vec!["sweep", "--fixture", "--predictor", "twitter", "--format", "csv"],
        vec!["compare", "--fixture", "--format", "json"],
        vec![
            "revisions",
            "--store",
            &store,
            "--old",
            "2020-03-30",
            "--new",
            "2020-03-31",
            "--format",
            "json",
        ],
        vec!["predict", "--model", &model, "--fixture", "--format", "csv"],
        vec!["predict", "--fixture", "--reference-curves"],
    ];
    for args in invocations {
        assert_eq!(ok(&args), ok(&args), "{args:?}");
    }
}

#[test]
fn stamp_is_opt_in() {
    let out = ok(&["fit", "--fixture", "--format", "json", "--stamp"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!(v["generated_at"].as_str().unwrap().ends_with('Z'));
    let out = ok(&["compare", "--fixture", "--format", "json", "--stamp"]);
    assert!(serde_json::from_str::<Value>(&out)
        .unwrap()
        .get("generated_at")
        .is_some());
    assert!(ok(&["compare", "--fixture", "--stamp"]).contains("Generated at"));
}

#[test]
fn color_only_on_terminals_without_opt_out() {
    assert!(!epinowcast::cli::color_enabled(false));
    let mut out = Vec::new();
    let mut err = Vec::new();
    run(["epinowcast", "compare", "--fixture"], &mut out, &mut err, true);
    assert!(String::from_utf8(out).unwrap().starts_with("\x1b[1m"));
}
