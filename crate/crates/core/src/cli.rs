//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 data or domain error. Data errors
//! are written to stderr as a single JSON object.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::error::Error;
use crate::ingest::{load_fixture, parse_jhu_wide_cumulative, parse_long_daily, write_long_daily};
use crate::lag_sweep::{self, emit_sweep_table, format_sig, write_sweep_csv, LagOutcome, SelectionRule};
use crate::nowcast::{compare_raw, fit_nowcast_with, NowcastModel, NowcastOptions, NowcastSpec};
use crate::report::FitReport;
use crate::revisions::{revision_profile, SnapshotStore};
use crate::series::{index_to_100, DailySeries, DateWindow};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

/// Environment variable that disables ANSI styling of text output.
pub const NO_COLOR_ENV: &str = "EPINOWCAST_NO_COLOR";

pub fn default_window() -> DateWindow {
    DateWindow::new(
        NaiveDate::from_ymd_opt(2020, 3, 3).expect("valid date"),
        NaiveDate::from_ymd_opt(2020, 3, 28).expect("valid date"),
    )
    .expect("ordered window")
}

#[derive(Debug, Parser)]
#[command(
    name = "epinowcast",
    version,
    about = "Nowcast official daily infection counts from alternative data sources"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit one log-log nowcast model and print its regression table.
    Fit(FitArgs),
    /// Fit the model at every lag from 0 to --max-lag and select the best.
    Sweep(SweepArgs),
    /// Compare two series directly (mean absolute percentage error).
    Compare(CompareArgs),
    /// Late-reporting shares between two snapshots of the official series.
    Revisions(RevisionArgs),
    /// Predict the target from a saved fit report and a predictor series.
    Predict(PredictArgs),
    /// Rescale a series so its maximum is 100.
    Index(IndexArgs),
    /// Convert a JHU wide cumulative file to daily `date,value` rows.
    Convert(ConvertArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Include a generation timestamp in the output.
    #[arg(long)]
    pub stamp: bool,
}

#[derive(Debug, Args)]
pub struct WindowArgs {
    #[arg(long)]
    pub from: Option<NaiveDate>,
    #[arg(long)]
    pub to: Option<NaiveDate>,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Use the embedded reference dataset (RKI target).
    #[arg(long)]
    pub fixture: bool,
    /// Target series as a `date,value` CSV.
    #[arg(long, conflicts_with = "fixture")]
    pub target: Option<PathBuf>,
    /// Predictor name: jhu, google or twitter with --fixture; a label otherwise.
    #[arg(long)]
    pub predictor: Option<String>,
    /// Predictor series as a `date,value` CSV.
    #[arg(long, conflicts_with = "fixture")]
    pub predictor_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub window: WindowArgs,
    #[arg(long, default_value_t = 0)]
    pub lag: u32,
    /// Leave the weekend dummy out of the model.
    #[arg(long)]
    pub no_weekend: bool,
    /// Apply a smearing correction to back-transformed predictions.
    #[arg(long)]
    pub smearing: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub window: WindowArgs,
    #[arg(long, default_value_t = lag_sweep::DEFAULT_MAX_LAG)]
    pub max_lag: u32,
    /// max-adj-r2, min-mae or combined.
    #[arg(long, default_value = "max-adj-r2")]
    pub rule: SelectionRule,
    /// Also write the tidy adjusted-R² and MAE table to this CSV file.
    #[arg(long)]
    pub emit_plot: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Compare JHU against RKI from the embedded dataset.
    #[arg(long)]
    pub fixture: bool,
    /// Reference series (denominator) as a `date,value` CSV.
    #[arg(long, conflicts_with = "fixture")]
    pub truth: Option<PathBuf>,
    /// Series compared against the reference.
    #[arg(long, conflicts_with = "fixture")]
    pub other: Option<PathBuf>,
    #[command(flatten)]
    pub window: WindowArgs,
    /// Also write the per-date differences to this CSV file.
    #[arg(long)]
    pub emit_plot: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct RevisionArgs {
    /// Directory of `YYYY-MM-DD.csv` snapshots.
    #[arg(long)]
    pub store: PathBuf,
    #[arg(long)]
    pub old: NaiveDate,
    #[arg(long)]
    pub new: NaiveDate,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    /// Fit report JSON written by `fit --format json`.
    #[arg(long, required_unless_present = "reference_curves")]
    pub model: Option<PathBuf>,
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub window: WindowArgs,
    /// Fit the three reference models on the embedded data and emit every curve as tidy CSV.
    #[arg(long, requires = "fixture")]
    pub reference_curves: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct IndexArgs {
    /// `date,value` CSV to rescale.
    #[arg(long)]
    pub input: PathBuf,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ConvertArgs {
    /// JHU time_series_covid19_confirmed_global-style CSV.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value = "Germany")]
    pub country: String,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Data(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Data(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Data(e.into())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write, color: bool) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(&cli.command, stdout, stderr, color) {
        Ok(()) => EXIT_OK,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Data(e)) => {
            let mut obj = json!({ "error": e.kind(), "message": e.to_string() });
            if let Some(date) = e.date() {
                obj["date"] = json!(date.to_string());
            }
            let _ = writeln!(stderr, "{obj}");
            EXIT_DATA
        }
    }
}

/// Whether text output to the terminal should be styled.
pub fn color_enabled(is_terminal: bool) -> bool {
    is_terminal && std::env::var_os(NO_COLOR_ENV).is_none()
}

fn dispatch(cmd: &Command, stdout: &mut dyn Write, stderr: &mut dyn Write, color: bool) -> CliResult<()> {
    match cmd {
        Command::Fit(a) => cmd_fit(a, stdout, color),
        Command::Sweep(a) => cmd_sweep(a, stdout, color),
        Command::Compare(a) => cmd_compare(a, stdout, color),
        Command::Revisions(a) => cmd_revisions(a, stdout, color),
        Command::Predict(a) => cmd_predict(a, stdout),
        Command::Index(a) => cmd_index(a, stdout),
        Command::Convert(a) => cmd_convert(a, stdout, stderr),
    }
}

fn emit(out: &OutputArgs, stdout: &mut dyn Write, body: &str) -> CliResult<()> {
    match &out.output {
        Some(path) => fs::write(path, body)?,
        None => stdout.write_all(body.as_bytes())?,
    }
    Ok(())
}

fn stamp() -> String {
    chrono::Utc::now().format("%Y-%m-%dT%H:%M:%SZ").to_string()
}

fn json_body(mut value: serde_json::Value, out: &OutputArgs) -> String {
    if out.stamp {
        if let Some(obj) = value.as_object_mut() {
            obj.insert("generated_at".into(), json!(stamp()));
        }
    }
    let mut s = serde_json::to_string_pretty(&value).expect("json value serializes");
    s.push('\n');
    s
}

fn text_body(mut body: String, out: &OutputArgs, title: &str, color: bool) -> String {
    let heading = if color && out.output.is_none() {
        format!("\x1b[1m{title}\x1b[0m\n")
    } else {
        format!("{title}\n")
    };
    body.insert_str(0, &heading);
    if out.stamp {
        let _ = writeln!(body, "Generated at {}", stamp());
    }
    body
}

fn read_series(path: &Path, name: Option<&str>) -> CliResult<DailySeries> {
    let label = name
        .map(str::to_string)
        .or_else(|| path.file_stem().and_then(|s| s.to_str()).map(str::to_string))
        .unwrap_or_else(|| "series".into());
    let file = fs::File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok(parse_long_daily(file, &label)?)
}

struct Inputs {
    target: DailySeries,
    predictor: DailySeries,
    fixture: bool,
}

fn resolve_inputs(input: &InputArgs, default_predictor: &str) -> CliResult<Inputs> {
    if input.fixture {
        let fixture = load_fixture()?;
        let name = input.predictor.as_deref().unwrap_or(default_predictor);
        let predictor = match name.to_ascii_lowercase().as_str() {
            "jhu" | "google" | "twitter" => fixture.series(name).cloned(),
            _ => None,
        }
        .ok_or_else(|| {
            CliError::Usage(format!(
                "unknown fixture predictor '{name}' (expected jhu, google or twitter)"
            ))
        })?;
        return Ok(Inputs {
            target: fixture.rki,
            predictor,
            fixture: true,
        });
    }
    let (Some(target), Some(pred)) = (&input.target, &input.predictor_file) else {
        return Err(CliError::Usage(
            "provide --fixture, or both --target and --predictor-file".into(),
        ));
    };
    Ok(Inputs {
        target: read_series(target, None)?,
        predictor: read_series(pred, input.predictor.as_deref())?,
        fixture: false,
    })
}

fn resolve_window(w: &WindowArgs, fixture: bool, span_of: &DailySeries) -> CliResult<DateWindow> {
    let (default_start, default_end) = if fixture {
        let d = default_window();
        (Some(d.start()), Some(d.end()))
    } else {
        (span_of.first().map(|f| f.0), span_of.last().map(|l| l.0))
    };
    let start = w.from.or(default_start);
    let end = w.to.or(default_end);
    match (start, end) {
        (Some(s), Some(e)) => DateWindow::new(s, e).map_err(|e| CliError::Usage(e.to_string())),
        _ => Err(CliError::Data(Error::EmptySeries(span_of.source_name().to_string()))),
    }
}

fn cmd_fit(a: &FitArgs, stdout: &mut dyn Write, color: bool) -> CliResult<()> {
    let inputs = resolve_inputs(&a.input, "jhu")?;
    let window = resolve_window(&a.window, inputs.fixture, &inputs.target)?;
    let spec = NowcastSpec {
        target: &inputs.target,
        predictor: &inputs.predictor,
        lag_days: a.lag,
        weekend_dummy: !a.no_weekend,
        window,
    };
    let model = fit_nowcast_with(&spec, &NowcastOptions { smearing: a.smearing })?;
    let mut report = FitReport::from_model(&model);
    if a.out.stamp {
        report.generated_at = Some(stamp());
    }
    let body = match a.out.format {
        Format::Json => {
            let mut s = report.to_json();
            s.push('\n');
            s
        }
        Format::Text => {
            let title = format!(
                "Nowcast fit: ln({}) ~ ln({}) [lag {}]",
                report.spec.target, report.spec.predictor, a.lag
            );
            let heading = if color && a.out.output.is_none() {
                format!("\x1b[1m{title}\x1b[0m\n")
            } else {
                format!("{title}\n")
            };
            heading + &report.render_text()
        }
        Format::Csv => {
            let mut s = String::from("term,estimate,se,t,p,stars\n");
            for c in &model.fit.coefficients {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{}",
                    c.name,
                    c.estimate,
                    c.std_error,
                    c.t_stat,
                    c.p_value,
                    c.stars()
                );
            }
            s
        }
    };
    emit(&a.out, stdout, &body)
}

fn cmd_sweep(a: &SweepArgs, stdout: &mut dyn Write, color: bool) -> CliResult<()> {
    let inputs = resolve_inputs(&a.input, "google")?;
    let window = resolve_window(&a.window, inputs.fixture, &inputs.target)?;
    let result = lag_sweep::sweep(&inputs.target, &inputs.predictor, &window, a.max_lag, a.rule)?;

    if let Some(path) = &a.emit_plot {
        let rows = emit_sweep_table(&result, &lag_sweep::PLOT_METRICS);
        let file = fs::File::create(path)?;
        write_sweep_csv(&rows, file)?;
    }

    let body = match a.out.format {
        Format::Json => json_body(serde_json::to_value(&result).expect("sweep serializes"), &a.out),
        Format::Csv => {
            let rows = emit_sweep_table(&result, &lag_sweep::ALL_METRICS);
            let mut buf = Vec::new();
            write_sweep_csv(&rows, &mut buf)?;
            String::from_utf8(buf).expect("csv is utf-8")
        }
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "{:>4}  {:>10}  {:>10}  {:>10}  {:>10}",
                "lag", "adj R2", "MAE", "MAPE", "R2"
            );
            for row in &result.per_lag {
                let mark = if row.lag == result.selected_lag { " *" } else { "" };
                match &row.outcome {
                    LagOutcome::Fitted(m) => {
                        let _ = writeln!(
                            s,
                            "{:>4}  {:>10.4}  {:>10.4}  {:>10.4}  {:>10.4}{mark}",
                            row.lag, m.adj_r_squared, m.mae_log, m.mape_original, m.r_squared
                        );
                    }
                    LagOutcome::Infeasible { reason } => {
                        let _ = writeln!(s, "{:>4}  infeasible: {reason}", row.lag);
                    }
                }
            }
            let _ = writeln!(
                s,
                "Selected lag: {} (rule {})",
                result.selected_lag, result.selection_rule
            );
            if result.rules_disagree() {
                let _ = writeln!(
                    s,
                    "Note: adjusted R2 favours lag {}, MAE favours lag {}",
                    result.best_by_adj_r2, result.best_by_mae
                );
            }
            let title = format!(
                "Lag sweep: ln({}) ~ ln({}) over lags 0..={}",
                inputs.target.source_name(),
                result.predictor,
                a.max_lag
            );
            text_body(s, &a.out, &title, color)
        }
    };
    emit(&a.out, stdout, &body)
}

fn comparison_csv(cmp: &crate::nowcast::RawComparison) -> String {
    let mut s = String::from("date,truth,other,ape,signed_diff\n");
    for r in &cmp.rows {
        let _ = writeln!(s, "{},{},{},{},{}", r.date, r.truth, r.other, r.ape, r.signed_diff);
    }
    s
}

fn cmd_compare(a: &CompareArgs, stdout: &mut dyn Write, color: bool) -> CliResult<()> {
    let (truth, other, fixture) = if a.fixture {
        let f = load_fixture()?;
        (f.rki, f.jhu, true)
    } else {
        let (Some(t), Some(o)) = (&a.truth, &a.other) else {
            return Err(CliError::Usage("provide --fixture, or both --truth and --other".into()));
        };
        (read_series(t, None)?, read_series(o, None)?, false)
    };
    let window = resolve_window(&a.window, fixture, &truth)?;
    let cmp = compare_raw(&truth, &other, &window)?;
    if let Some(path) = &a.emit_plot {
        fs::write(path, comparison_csv(&cmp))?;
    }
    let body = match a.out.format {
        Format::Json => json_body(serde_json::to_value(&cmp).expect("comparison serializes"), &a.out),
        Format::Csv => comparison_csv(&cmp),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "MAPE: {:.3} over {} days", cmp.mape, cmp.rows.len());
            let _ = writeln!(s, "{:<12}{:>10}{:>10}{:>12}", "date", cmp.truth, cmp.other, "diff %");
            for r in &cmp.rows {
                let _ = writeln!(
                    s,
                    "{:<12}{:>10}{:>10}{:>11.1}%",
                    r.date.to_string(),
                    r.truth,
                    r.other,
                    100.0 * r.signed_diff
                );
            }
            text_body(
                s,
                &a.out,
                &format!("Raw comparison: {} vs {}", cmp.other, cmp.truth),
                color,
            )
        }
    };
    emit(&a.out, stdout, &body)
}

fn cmd_revisions(a: &RevisionArgs, stdout: &mut dyn Write, color: bool) -> CliResult<()> {
    let store = SnapshotStore::load_dir(&a.store)?;
    let profile = revision_profile(&store, a.new, a.old)?;
    let body = match a.out.format {
        Format::Json => json_body(
            json!({ "old": a.old.to_string(), "new": a.new.to_string(), "rows": profile }),
            &a.out,
        ),
        Format::Csv => {
            let mut s = String::from("reporting_date,share\n");
            for r in &profile {
                let v = r.share.value().map(|v| v.to_string()).unwrap_or_default();
                let _ = writeln!(s, "{},{v}", r.reporting_date);
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for r in &profile {
                let v = r
                    .share
                    .value()
                    .map_or_else(|| "undefined".to_string(), |v| format!("{:.1}%", 100.0 * v));
                let _ = writeln!(s, "{:<12}{v:>12}", r.reporting_date.to_string());
            }
            text_body(
                s,
                &a.out,
                &format!("Share of daily total added between {} and {}", a.old, a.new),
                color,
            )
        }
    };
    emit(&a.out, stdout, &body)
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
struct PredictionRow {
    date: NaiveDate,
    predicted: f64,
    actual: Option<f64>,
}

fn predictions(
    coefs: &crate::nowcast::LogLinearCoefficients,
    lag: u32,
    predictor: &DailySeries,
    actual: Option<&DailySeries>,
    window: Option<DateWindow>,
) -> crate::error::Result<Vec<PredictionRow>> {
    let shift = chrono::Duration::days(i64::from(lag));
    let mut rows = Vec::new();
    for (source_date, value) in predictor.iter() {
        let date = source_date + shift;
        if value <= 0.0 || window.is_some_and(|w| !w.contains(date)) {
            continue;
        }
        rows.push(PredictionRow {
            date,
            predicted: coefs.predict(value, date)?,
            actual: actual.and_then(|s| s.get(date)),
        });
    }
    Ok(rows)
}

fn explicit_window(w: &WindowArgs) -> CliResult<Option<DateWindow>> {
    match (w.from, w.to) {
        (None, None) => Ok(None),
        (from, to) => {
            let start = from.unwrap_or(NaiveDate::MIN);
            let end = to.unwrap_or(NaiveDate::MAX);
            DateWindow::new(start, end)
                .map(Some)
                .map_err(|e| CliError::Usage(e.to_string()))
        }
    }
}

fn cmd_predict(a: &PredictArgs, stdout: &mut dyn Write) -> CliResult<()> {
    if a.reference_curves {
        return emit(&a.out, stdout, &reference_curves_csv()?);
    }
    let path = a
        .model
        .as_ref()
        .ok_or_else(|| CliError::Usage("--model is required".into()))?;
    let report = FitReport::from_json(&fs::read_to_string(path)?)?;
    let coefs = report.coefficients()?;

    let (predictor, actual) = if a.input.fixture {
        let f = load_fixture()?;
        let name = a.input.predictor.as_deref().unwrap_or(&report.spec.predictor);
        let p = f
            .series(name)
            .cloned()
            .ok_or_else(|| CliError::Usage(format!("unknown fixture predictor '{name}'")))?;
        (p, Some(f.rki))
    } else {
        let p = a
            .input
            .predictor_file
            .as_ref()
            .ok_or_else(|| CliError::Usage("provide --fixture or --predictor-file".into()))?;
        let actual = a.input.target.as_ref().map(|t| read_series(t, None)).transpose()?;
        (read_series(p, a.input.predictor.as_deref())?, actual)
    };
    let rows = predictions(
        &coefs,
        report.spec.lag_days,
        &predictor,
        actual.as_ref(),
        explicit_window(&a.window)?,
    )?;

    let body = match a.out.format {
        Format::Json => json_body(json!({ "spec": report.spec, "predictions": rows }), &a.out),
        Format::Csv => {
            let mut s = String::from("date,predicted,actual\n");
            for r in &rows {
                let actual = r.actual.map(|v| v.to_string()).unwrap_or_default();
                let _ = writeln!(s, "{},{},{actual}", r.date, r.predicted);
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "{:<12}{:>12}{:>12}", "date", "predicted", "actual");
            for r in &rows {
                let actual = r.actual.map(|v| format!("{v:.0}")).unwrap_or_default();
                let _ = writeln!(s, "{:<12}{:>12.0}{actual:>12}", r.date.to_string(), r.predicted);
            }
            text_body(
                s,
                &a.out,
                &format!(
                    "Predictions from ln({}) with lag {}",
                    report.spec.predictor, report.spec.lag_days
                ),
                false,
            )
        }
    };
    emit(&a.out, stdout, &body)
}

/// The three reference models fitted on the embedded data.
pub fn reference_models() -> crate::error::Result<Vec<NowcastModel>> {
    let f = load_fixture()?;
    let window = default_window();
    [(&f.jhu, 0), (&f.google, 3), (&f.twitter, 3)]
        .into_iter()
        .map(|(p, lag)| crate::nowcast::fit_nowcast(&NowcastSpec::new(&f.rki, p, lag, window)))
        .collect()
}

/// Tidy `date,series,value` table with actual RKI and JHU counts plus each
/// reference model's predictions, from the window start onward.
pub fn reference_curves_csv() -> crate::error::Result<String> {
    let f = load_fixture()?;
    let start = default_window().start();
    let mut rows: Vec<(NaiveDate, String, f64)> = Vec::new();
    for s in [&f.rki, &f.jhu] {
        rows.extend(
            s.iter()
                .filter(|(d, _)| *d >= start)
                .map(|(d, v)| (d, s.source_name().to_string(), v)),
        );
    }
    for model in reference_models()? {
        let predictor = f.series(&model.spec.predictor).expect("reference predictor");
        let label = format!("predicted_{}", model.spec.predictor);
        for r in predictions(&model.coefficients(), model.spec.lag_days, predictor, None, None)? {
            if r.date >= start {
                rows.push((r.date, label.clone(), r.predicted));
            }
        }
    }
    rows.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
    let mut s = String::from("date,series,value\n");
    for (d, name, v) in rows {
        let _ = writeln!(s, "{d},{name},{}", format_sig(v, 6));
    }
    Ok(s)
}

fn cmd_index(a: &IndexArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let series = read_series(&a.input, None)?;
    let indexed = index_to_100(&series)?;
    let body = match a.out.format {
        Format::Json => json_body(
            json!({ "source": indexed.source_name(), "values": indexed.iter().map(|(d, v)| json!({"date": d.to_string(), "value": v})).collect::<Vec<_>>() }),
            &a.out,
        ),
        Format::Csv | Format::Text => {
            let mut buf = Vec::new();
            write_long_daily(&indexed, &mut buf)?;
            String::from_utf8(buf).expect("csv is utf-8")
        }
    };
    emit(&a.out, stdout, &body)
}

fn cmd_convert(a: &ConvertArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    let file = fs::File::open(&a.input).map_err(|e| Error::Io(format!("{}: {e}", a.input.display())))?;
    let (daily, warnings) = parse_jhu_wide_cumulative(file, &a.country)?;
    for w in &warnings {
        let _ = writeln!(
            stderr,
            "warning: cumulative count decreased on {} ({})",
            w.date, w.value
        );
    }
    let mut buf = Vec::new();
    write_long_daily(&daily, &mut buf)?;
    emit(&a.out, stdout, &String::from_utf8(buf).expect("csv is utf-8"))
}
