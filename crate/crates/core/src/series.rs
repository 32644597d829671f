//! Calendar-aware daily series.
//!
//! A [`DailySeries`] maps plain calendar dates (no timezone) to values. A date
//! that is absent from the map is *missing*, which is a different state from an
//! observed zero.

use std::collections::BTreeMap;

use chrono::{Datelike, Duration, NaiveDate, Weekday};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// True iff `date` falls on a Saturday or Sunday.
pub fn is_weekend(date: NaiveDate) -> bool {
    matches!(date.weekday(), Weekday::Sat | Weekday::Sun)
}

/// Inclusive range of calendar dates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DateWindow {
    start: NaiveDate,
    end: NaiveDate,
}

impl DateWindow {
    pub fn new(start: NaiveDate, end: NaiveDate) -> Result<Self> {
        if start > end {
            return Err(Error::InvalidWindow { start, end });
        }
        Ok(Self { start, end })
    }

    pub fn start(&self) -> NaiveDate {
        self.start
    }

    pub fn end(&self) -> NaiveDate {
        self.end
    }

    pub fn contains(&self, date: NaiveDate) -> bool {
        self.start <= date && date <= self.end
    }

    /// Number of calendar days covered, both ends included.
    pub fn len_days(&self) -> usize {
        (self.end - self.start).num_days() as usize + 1
    }

    pub fn dates(&self) -> impl Iterator<Item = NaiveDate> + '_ {
        self.start.iter_days().take_while(move |d| *d <= self.end)
    }
}

/// Date-indexed daily observations from one named source.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DailySeries {
    source_name: String,
    observations: BTreeMap<NaiveDate, f64>,
}

impl DailySeries {
    /// Builds a series, rejecting non-finite values and duplicate dates.
    pub fn new(
        source_name: impl Into<String>,
        observations: impl IntoIterator<Item = (NaiveDate, f64)>,
    ) -> Result<Self> {
        let source_name = source_name.into();
        let mut map = BTreeMap::new();
        for (date, value) in observations {
            if !value.is_finite() {
                return Err(Error::NonFiniteValue {
                    date,
                    source_name: source_name.clone(),
                });
            }
            if map.insert(date, value).is_some() {
                return Err(Error::DuplicateDate(date));
            }
        }
        Ok(Self {
            source_name,
            observations: map,
        })
    }

    pub fn empty(source_name: impl Into<String>) -> Self {
        Self {
            source_name: source_name.into(),
            observations: BTreeMap::new(),
        }
    }

    /// Convenience constructor for consecutive days starting at `start`.
    pub fn from_values(source_name: impl Into<String>, start: NaiveDate, values: &[f64]) -> Result<Self> {
        Self::new(
            source_name,
            values
                .iter()
                .enumerate()
                .map(|(i, v)| (start + Duration::days(i as i64), *v)),
        )
    }

    pub fn source_name(&self) -> &str {
        &self.source_name
    }

    pub fn with_source_name(mut self, name: impl Into<String>) -> Self {
        self.source_name = name.into();
        self
    }

    pub fn get(&self, date: NaiveDate) -> Option<f64> {
        self.observations.get(&date).copied()
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (NaiveDate, f64)> + '_ {
        self.observations.iter().map(|(d, v)| (*d, *v))
    }

    pub fn dates(&self) -> impl DoubleEndedIterator<Item = NaiveDate> + '_ {
        self.observations.keys().copied()
    }

    pub fn values(&self) -> impl DoubleEndedIterator<Item = f64> + '_ {
        self.observations.values().copied()
    }

    pub fn first(&self) -> Option<(NaiveDate, f64)> {
        self.observations.iter().next().map(|(d, v)| (*d, *v))
    }

    pub fn last(&self) -> Option<(NaiveDate, f64)> {
        self.observations.iter().next_back().map(|(d, v)| (*d, *v))
    }

    /// Restricts the series to dates inside `window`.
    pub fn restrict(&self, window: &DateWindow) -> DailySeries {
        DailySeries {
            source_name: self.source_name.clone(),
            observations: self
                .observations
                .range(window.start()..=window.end())
                .map(|(d, v)| (*d, *v))
                .collect(),
        }
    }

    /// Multiplies every value by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<DailySeries> {
        DailySeries::new(self.source_name.clone(), self.iter().map(|(d, v)| (d, v * factor)))
    }

    /// Moves every observation `days` later (negative values move it earlier).
    pub fn shift(&self, days: i64) -> DailySeries {
        let offset = Duration::days(days);
        DailySeries {
            source_name: self.source_name.clone(),
            observations: self.iter().map(|(d, v)| (d + offset, v)).collect(),
        }
    }
}

/// The series lagged by `days`: the result at date `d` is the input at `d - days`.
pub fn lag(series: &DailySeries, days: u32) -> DailySeries {
    if days == 0 {
        return series.clone();
    }
    let name = format!("{}[lag {days}]", series.source_name());
    series.shift(i64::from(days)).with_source_name(name)
}

/// One row of an [`AlignedTable`].
#[derive(Debug, Clone, PartialEq)]
pub struct AlignedRow {
    pub date: NaiveDate,
    pub weekend: bool,
    pub values: Vec<f64>,
}

/// Dates on which every input series is observed, with one value column per series.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignedTable {
    pub columns: Vec<String>,
    pub rows: Vec<AlignedRow>,
}

impl AlignedTable {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column(&self, index: usize) -> impl Iterator<Item = f64> + '_ {
        self.rows.iter().map(move |r| r.values[index])
    }
}

/// Inner join of `series` on the dates in `window`.
pub fn align(series: &[&DailySeries], window: &DateWindow) -> Result<AlignedTable> {
    let rows: Vec<AlignedRow> = window
        .dates()
        .filter_map(|date| {
            let values: Option<Vec<f64>> = series.iter().map(|s| s.get(date)).collect();
            values.map(|values| AlignedRow {
                date,
                weekend: is_weekend(date),
                values,
            })
        })
        .collect();
    if rows.is_empty() || series.is_empty() {
        return Err(Error::EmptyIntersection);
    }
    Ok(AlignedTable {
        columns: series.iter().map(|s| s.source_name().to_string()).collect(),
        rows,
    })
}

/// Rounds to the nearest integer with ties away from zero.
///
/// Values within 1e-9 of a tie are treated as ties so that ratios computed from
/// rescaled inputs round the same way.
pub(crate) fn round_half_away(x: f64) -> f64 {
    let frac = x.abs().fract();
    if (frac - 0.5).abs() < 1e-9 {
        x.trunc() + x.signum()
    } else {
        x.round()
    }
}

/// Rescales the series so its maximum is 100, rounding every point to an integer.
pub fn index_to_100(series: &DailySeries) -> Result<DailySeries> {
    let max = series
        .values()
        .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.max(v))))
        .ok_or_else(|| Error::EmptySeries(series.source_name().to_string()))?;
    if max <= 0.0 {
        return Err(Error::AllZero(series.source_name().to_string()));
    }
    DailySeries::new(
        series.source_name(),
        series.iter().map(|(d, v)| (d, round_half_away(100.0 * v / max))),
    )
}

/// A day whose difference from the previous cumulative total was negative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NegativeDifference {
    pub date: NaiveDate,
    pub value: f64,
}

/// Differences a cumulative series into daily increments.
///
/// The first date is dropped. Downward revisions are kept as negative days and
/// reported in the returned warning list.
pub fn cumulative_to_daily(series: &DailySeries) -> (DailySeries, Vec<NegativeDifference>) {
    let mut warnings = Vec::new();
    let mut out = BTreeMap::new();
    let mut prev: Option<f64> = None;
    for (date, value) in series.iter() {
        if let Some(p) = prev {
            let diff = value - p;
            if diff < 0.0 {
                warnings.push(NegativeDifference { date, value: diff });
            }
            out.insert(date, diff);
        }
        prev = Some(value);
    }
    (
        DailySeries {
            source_name: series.source_name().to_string(),
            observations: out,
        },
        warnings,
    )
}
