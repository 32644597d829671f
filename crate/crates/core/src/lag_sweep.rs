//! Lead-indicator lag selection.
//!
//! Every lag from 0 to `max_lag` is fitted over the same window of target
//! dates, so the per-lag statistics share one `n` and are directly comparable.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nowcast::{fit_nowcast, NowcastSpec};
use crate::series::{DailySeries, DateWindow};

pub const DEFAULT_MAX_LAG: u32 = 10;

/// Two metric values closer than this are a tie; ties go to the smaller lag.
pub const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectionRule {
    MaxAdjR2,
    MinMae,
    Combined,
}

impl fmt::Display for SelectionRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SelectionRule::MaxAdjR2 => "max_adj_r2",
            SelectionRule::MinMae => "min_mae",
            SelectionRule::Combined => "combined",
        })
    }
}

impl FromStr for SelectionRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.replace('-', "_").as_str() {
            "max_adj_r2" => Ok(SelectionRule::MaxAdjR2),
            "min_mae" => Ok(SelectionRule::MinMae),
            "combined" => Ok(SelectionRule::Combined),
            other => Err(format!("unknown selection rule '{other}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LagMetrics {
    pub adj_r_squared: f64,
    pub mae_log: f64,
    pub mape_original: f64,
    pub r_squared: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum LagOutcome {
    Fitted(LagMetrics),
    Infeasible { reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LagRow {
    pub lag: u32,
    #[serde(flatten)]
    pub outcome: LagOutcome,
}

impl LagRow {
    pub fn metrics(&self) -> Option<&LagMetrics> {
        match &self.outcome {
            LagOutcome::Fitted(m) => Some(m),
            LagOutcome::Infeasible { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LagSweepResult {
    pub predictor: String,
    pub per_lag: Vec<LagRow>,
    pub selected_lag: u32,
    pub selection_rule: SelectionRule,
    pub best_by_adj_r2: u32,
    pub best_by_mae: u32,
}

impl LagSweepResult {
    /// True when the adjusted-R² and MAE rules pick different lags.
    pub fn rules_disagree(&self) -> bool {
        self.best_by_adj_r2 != self.best_by_mae
    }

    pub fn metrics(&self, lag: u32) -> Option<&LagMetrics> {
        self.per_lag.iter().find(|r| r.lag == lag).and_then(LagRow::metrics)
    }
}

/// Lag of the best fitted row. A later row only wins by more than [`TIE_TOLERANCE`].
fn select(rows: &[LagRow], key: impl Fn(&LagMetrics) -> f64, maximize: bool) -> Option<u32> {
    let mut best: Option<(u32, f64)> = None;
    for row in rows {
        let Some(m) = row.metrics() else { continue };
        let v = key(m);
        if v.is_nan() {
            continue;
        }
        let wins = match best {
            None => true,
            Some((_, b)) if maximize => v > b + TIE_TOLERANCE,
            Some((_, b)) => v < b - TIE_TOLERANCE,
        };
        if wins {
            best = Some((row.lag, v));
        }
    }
    best.map(|(lag, _)| lag)
}

pub fn sweep(
    target: &DailySeries,
    predictor: &DailySeries,
    window: &DateWindow,
    max_lag: u32,
    rule: SelectionRule,
) -> Result<LagSweepResult> {
    let per_lag: Vec<LagRow> = (0..=max_lag)
        .map(|lag| {
            let spec = NowcastSpec::new(target, predictor, lag, *window);
            let outcome = match fit_nowcast(&spec) {
                Ok(model) => LagOutcome::Fitted(LagMetrics {
                    adj_r_squared: model.fit.adj_r_squared,
                    mae_log: model.mae_log,
                    mape_original: model.mape_original,
                    r_squared: model.fit.r_squared,
                }),
                Err(e) => LagOutcome::Infeasible { reason: e.to_string() },
            };
            LagRow { lag, outcome }
        })
        .collect();

    let best_by_adj_r2 = select(&per_lag, |m| m.adj_r_squared, true);
    let best_by_mae = select(&per_lag, |m| m.mae_log, false);
    let (Some(best_by_adj_r2), Some(best_by_mae)) = (best_by_adj_r2, best_by_mae) else {
        return Err(Error::AllLagsInfeasible { max_lag });
    };
    let selected_lag = match rule {
        SelectionRule::MaxAdjR2 | SelectionRule::Combined => best_by_adj_r2,
        SelectionRule::MinMae => best_by_mae,
    };
    Ok(LagSweepResult {
        predictor: predictor.source_name().to_string(),
        per_lag,
        selected_lag,
        selection_rule: rule,
        best_by_adj_r2,
        best_by_mae,
    })
}

/// Long-format row of the sweep table.
#[derive(Debug, Clone, PartialEq)]
pub struct TidyRow {
    pub predictor: String,
    pub lag: u32,
    pub metric: String,
    pub value: Option<f64>,
    pub reason: Option<String>,
}

pub const PLOT_METRICS: [&str; 2] = ["adj_r_squared", "mae"];
pub const ALL_METRICS: [&str; 4] = ["adj_r_squared", "mae", "mape", "r_squared"];

fn metric_value(m: &LagMetrics, name: &str) -> Option<f64> {
    match name {
        "adj_r_squared" => Some(m.adj_r_squared),
        "mae" => Some(m.mae_log),
        "mape" => Some(m.mape_original),
        "r_squared" => Some(m.r_squared),
        _ => None,
    }
}

/// Tidy rows for `metrics`, ordered by lag then metric name. Values are
/// rounded to six significant digits, the precision of the CSV form.
pub fn emit_sweep_table(result: &LagSweepResult, metrics: &[&str]) -> Vec<TidyRow> {
    let mut names: Vec<&str> = metrics.to_vec();
    names.sort_unstable();
    names.dedup();
    let mut rows = Vec::with_capacity(result.per_lag.len() * names.len());
    for lag_row in &result.per_lag {
        for name in &names {
            let (value, reason) = match &lag_row.outcome {
                LagOutcome::Fitted(m) => (metric_value(m, name).map(|v| parse_sig(&format_sig(v, 6))), None),
                LagOutcome::Infeasible { reason } => (None, Some(reason.clone())),
            };
            rows.push(TidyRow {
                predictor: result.predictor.clone(),
                lag: lag_row.lag,
                metric: name.to_string(),
                value,
                reason,
            });
        }
    }
    rows
}

fn parse_sig(s: &str) -> f64 {
    s.parse().expect("formatted number parses")
}

/// Formats `v` in plain decimal notation with `digits` significant digits.
pub fn format_sig(v: f64, digits: usize) -> String {
    if !v.is_finite() {
        return String::new();
    }
    if v == 0.0 {
        return "0".to_string();
    }
    let magnitude = v.abs().log10().floor() as i32;
    let decimals = digits as i32 - 1 - magnitude;
    if decimals >= 0 {
        let s = format!("{:.*}", decimals as usize, v);
        // rounding can carry into a new leading digit (9.999995 -> 10.00000)
        let rounded: f64 = s.parse().unwrap_or(v);
        if rounded != 0.0 && rounded.abs().log10().floor() as i32 > magnitude && decimals > 0 {
            return format!("{:.*}", decimals as usize - 1, v);
        }
        s
    } else {
        let scale = 10f64.powi(-decimals);
        format!("{}", (v / scale).round() * scale)
    }
}

pub const SWEEP_CSV_HEADER: [&str; 4] = ["predictor", "lag", "metric", "value"];

/// Writes rows as `predictor,lag,metric,value`; infeasible rows have an empty value.
pub fn write_sweep_csv<W: Write>(rows: &[TidyRow], writer: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(writer);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(SWEEP_CSV_HEADER).map_err(io)?;
    for r in rows {
        let value = r.value.map(|v| format_sig(v, 6)).unwrap_or_default();
        w.write_record([r.predictor.as_str(), &r.lag.to_string(), &r.metric, &value])
            .map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

/// Parses a sweep CSV. Reasons of infeasible rows are not part of the CSV and come back as `None`.
pub fn read_sweep_csv<R: Read>(reader: R) -> Result<Vec<TidyRow>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let header = rdr.headers().map_err(|e| Error::Parse {
        line: 1,
        reason: e.to_string(),
    })?;
    if header.iter().collect::<Vec<_>>() != SWEEP_CSV_HEADER {
        return Err(Error::Parse {
            line: 1,
            reason: format!("expected header {}", SWEEP_CSV_HEADER.join(",")),
        });
    }
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line()),
            reason: e.to_string(),
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        let bad = |reason: String| Error::Parse { line, reason };
        let lag = rec[1].parse().map_err(|_| bad(format!("invalid lag '{}'", &rec[1])))?;
        let value = if rec[3].is_empty() {
            None
        } else {
            Some(
                rec[3]
                    .parse()
                    .map_err(|_| bad(format!("invalid value '{}'", &rec[3])))?,
            )
        };
        rows.push(TidyRow {
            predictor: rec[0].to_string(),
            lag,
            metric: rec[2].to_string(),
            value,
            reason: None,
        });
    }
    Ok(rows)
}
