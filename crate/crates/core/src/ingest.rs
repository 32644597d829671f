//! CSV readers and writers, plus the embedded reference dataset.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use chrono::NaiveDate;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::series::{cumulative_to_daily, is_weekend, DailySeries, NegativeDifference};

/// Supported input layouts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesFormat {
    /// `date,value` with ISO dates.
    LongDaily,
    /// JHU CSSE time-series layout: `Province/State,Country/Region,Lat,Long,M/D/YY...`, cumulative.
    JhuWideCumulative,
    /// The embedded reference table.
    Fixture,
}

impl SeriesFormat {
    /// Infers the format from a CSV header line. Never looks at the file name.
    pub fn from_header(header: &str) -> Option<Self> {
        let fields: Vec<&str> = header.trim_end_matches(['\r', '\n']).split(',').collect();
        match fields.as_slice() {
            ["date", "value"] => Some(SeriesFormat::LongDaily),
            ["Province/State", "Country/Region", "Lat", "Long", ..] => Some(SeriesFormat::JhuWideCumulative),
            ["date", "weekend", "rki", "jhu", "google", "twitter"] => Some(SeriesFormat::Fixture),
            _ => None,
        }
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::Parse {
        line: e.position().map_or(0, |p| p.line()),
        reason: e.to_string(),
    }
}

fn parse_iso_date(s: &str, line: u64) -> Result<NaiveDate> {
    NaiveDate::parse_from_str(s, "%Y-%m-%d").map_err(|_| Error::Parse {
        line,
        reason: format!("invalid date '{s}', expected YYYY-MM-DD"),
    })
}

/// Parses a `date,value` CSV. Rows may come in any order; duplicates, negative
/// values, extra columns and thousands separators are rejected.
pub fn parse_long_daily<R: Read>(reader: R, source_name: &str) -> Result<DailySeries> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let header = rdr.headers().map_err(csv_error)?;
    if header.iter().collect::<Vec<_>>() != ["date", "value"] {
        return Err(Error::Parse {
            line: 1,
            reason: format!(
                "expected header 'date,value', found '{}'",
                header.iter().collect::<Vec<_>>().join(",")
            ),
        });
    }
    let mut obs = BTreeMap::new();
    for rec in rdr.records() {
        let rec = rec.map_err(csv_error)?;
        let line = rec.position().map_or(0, |p| p.line());
        let date = parse_iso_date(rec[0].trim(), line)?;
        let raw = rec[1].trim();
        let value: f64 = raw.parse().map_err(|_| Error::Parse {
            line,
            reason: format!("invalid value '{raw}'"),
        })?;
        if !value.is_finite() {
            return Err(Error::Parse {
                line,
                reason: format!("non-finite value '{raw}'"),
            });
        }
        if value < 0.0 {
            return Err(Error::NegativeValue(date));
        }
        if obs.insert(date, value).is_some() {
            return Err(Error::DuplicateDate(date));
        }
    }
    DailySeries::new(source_name, obs)
}

/// Writes `date,value` rows with LF line endings. Values use the shortest
/// representation that parses back to the same float.
pub fn write_long_daily<W: Write>(series: &DailySeries, mut writer: W) -> Result<()> {
    let mut out = String::from("date,value\n");
    for (date, value) in series.iter() {
        out.push_str(&format!("{date},{value}\n"));
    }
    writer.write_all(out.as_bytes())?;
    Ok(())
}

/// Daily new cases for `country` from a JHU wide cumulative file, plus any
/// negative-difference warnings. Rows for several provinces are summed first.
pub fn parse_jhu_wide_cumulative<R: Read>(reader: R, country: &str) -> Result<(DailySeries, Vec<NegativeDifference>)> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let header = rdr.headers().map_err(csv_error)?.clone();
    let fixed = ["Province/State", "Country/Region", "Lat", "Long"];
    if header.len() < 4 || header.iter().take(4).ne(fixed) {
        return Err(Error::Parse {
            line: 1,
            reason: "expected header 'Province/State,Country/Region,Lat,Long,<dates>'".into(),
        });
    }
    let dates = header
        .iter()
        .skip(4)
        .map(|h| {
            NaiveDate::parse_from_str(h.trim(), "%m/%d/%y").map_err(|_| Error::Parse {
                line: 1,
                reason: format!("invalid date column '{h}', expected M/D/YY"),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut totals: Option<Vec<f64>> = None;
    for rec in rdr.records() {
        let rec = rec.map_err(csv_error)?;
        if &rec[1] != country {
            continue;
        }
        let line = rec.position().map_or(0, |p| p.line());
        let acc = totals.get_or_insert_with(|| vec![0.0; dates.len()]);
        for (slot, raw) in acc.iter_mut().zip(rec.iter().skip(4)) {
            let raw = raw.trim();
            let v: f64 = if raw.is_empty() {
                0.0
            } else {
                raw.parse().map_err(|_| Error::Parse {
                    line,
                    reason: format!("invalid count '{raw}'"),
                })?
            };
            *slot += v;
        }
    }
    let totals = totals.ok_or_else(|| Error::CountryNotFound(country.to_string()))?;
    let cumulative = DailySeries::new(country, dates.into_iter().zip(totals))?;
    Ok(cumulative_to_daily(&cumulative))
}

const FIXTURE_CSV: &str = include_str!("../data/fixture.csv");
const FIXTURE_SHA256: &str = "52c0d679657d83d63eeed49b32f358dcf15385a272fdaa394e0733bb5b1e160d";

pub const RKI: &str = "RKI";
pub const JHU: &str = "JHU";
pub const GOOGLE: &str = "Google";
pub const TWITTER: &str = "Twitter";

/// The reference dataset: daily new infections in Germany by the Robert Koch
/// Institute and Johns Hopkins University, with indexed Google search and
/// Twitter volumes for "corona", 2020-01-19 through 2020-04-04.
#[derive(Debug, Clone, PartialEq)]
pub struct PaperFixture {
    pub rki: DailySeries,
    pub jhu: DailySeries,
    pub google: DailySeries,
    pub twitter: DailySeries,
    pub weekend: BTreeMap<NaiveDate, bool>,
}

impl PaperFixture {
    /// Looks a predictor up by case-insensitive name (`rki`, `jhu`, `google`, `twitter`).
    pub fn series(&self, name: &str) -> Option<&DailySeries> {
        match name.to_ascii_lowercase().as_str() {
            "rki" => Some(&self.rki),
            "jhu" => Some(&self.jhu),
            "google" => Some(&self.google),
            "twitter" => Some(&self.twitter),
            _ => None,
        }
    }

    pub fn dates(&self) -> impl Iterator<Item = NaiveDate> + '_ {
        self.weekend.keys().copied()
    }

    /// Dates where the table's weekend column disagrees with the calendar.
    pub fn weekend_mismatches(&self) -> Vec<NaiveDate> {
        self.weekend
            .iter()
            .filter(|(d, flag)| is_weekend(**d) != **flag)
            .map(|(d, _)| *d)
            .collect()
    }

    pub fn raw_csv() -> &'static str {
        FIXTURE_CSV
    }
}

pub fn fixture_checksum() -> String {
    hex::encode(Sha256::digest(FIXTURE_CSV.as_bytes()))
}

/// Parses the embedded dataset after verifying its checksum.
pub fn load_fixture() -> Result<PaperFixture> {
    let actual = fixture_checksum();
    if actual != FIXTURE_SHA256 {
        return Err(Error::CorruptFixture {
            expected: FIXTURE_SHA256.to_string(),
            actual,
        });
    }
    parse_fixture(FIXTURE_CSV.as_bytes())
}

fn parse_fixture<R: Read>(reader: R) -> Result<PaperFixture> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let mut columns: [Vec<(NaiveDate, f64)>; 4] = Default::default();
    let mut weekend = BTreeMap::new();
    for rec in rdr.records() {
        let rec = rec.map_err(csv_error)?;
        let line = rec.position().map_or(0, |p| p.line());
        let date = parse_iso_date(&rec[0], line)?;
        let flag = match &rec[1] {
            "TRUE" => true,
            "FALSE" => false,
            other => {
                return Err(Error::Parse {
                    line,
                    reason: format!("invalid weekend flag '{other}'"),
                })
            }
        };
        if weekend.insert(date, flag).is_some() {
            return Err(Error::DuplicateDate(date));
        }
        for (col, raw) in columns.iter_mut().zip(rec.iter().skip(2)) {
            if raw.is_empty() {
                continue;
            }
            let v = raw.parse().map_err(|_| Error::Parse {
                line,
                reason: format!("invalid value '{raw}'"),
            })?;
            col.push((date, v));
        }
    }
    let [rki, jhu, google, twitter] = columns;
    Ok(PaperFixture {
        rki: DailySeries::new(RKI, rki)?,
        jhu: DailySeries::new(JHU, jhu)?,
        google: DailySeries::new(GOOGLE, google)?,
        twitter: DailySeries::new(TWITTER, twitter)?,
        weekend,
    })
}
