//! Late-reporting analysis across retrieval-dated snapshots ("vintages") of an
//! official series.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use chrono::NaiveDate;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ingest::parse_long_daily;
use crate::series::{is_weekend, DailySeries, DateWindow};

/// The official series as published on one retrieval date.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    retrieved_on: NaiveDate,
    series: DailySeries,
}

impl Snapshot {
    pub fn new(retrieved_on: NaiveDate, series: DailySeries) -> Result<Self> {
        if let Some((last, _)) = series.last() {
            if last > retrieved_on {
                return Err(Error::FutureReportingDate {
                    retrieved_on,
                    date: last,
                });
            }
        }
        Ok(Self { retrieved_on, series })
    }

    pub fn retrieved_on(&self) -> NaiveDate {
        self.retrieved_on
    }

    pub fn series(&self) -> &DailySeries {
        &self.series
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Snapshot::new(self.retrieved_on, self.series.scaled(factor)?)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SnapshotStore {
    snapshots: BTreeMap<NaiveDate, Snapshot>,
}

impl SnapshotStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, snapshot: Snapshot) -> Result<()> {
        let date = snapshot.retrieved_on();
        if self.snapshots.contains_key(&date) {
            return Err(Error::DuplicateSnapshot(date));
        }
        self.snapshots.insert(date, snapshot);
        Ok(())
    }

    pub fn get(&self, retrieved_on: NaiveDate) -> Result<&Snapshot> {
        self.snapshots
            .get(&retrieved_on)
            .ok_or(Error::SnapshotNotFound(retrieved_on))
    }

    pub fn retrieval_dates(&self) -> impl Iterator<Item = NaiveDate> + '_ {
        self.snapshots.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }

    /// Loads every `YYYY-MM-DD.csv` in `dir`; each file holds `date,value` rows
    /// as published on the date in its name. Other files are ignored.
    pub fn load_dir(dir: impl AsRef<Path>) -> Result<Self> {
        let mut entries: Vec<_> = fs::read_dir(dir.as_ref())?
            .collect::<std::io::Result<Vec<_>>>()?
            .into_iter()
            .map(|e| e.path())
            .filter(|p| p.extension().is_some_and(|ext| ext == "csv"))
            .collect();
        entries.sort();
        let mut store = SnapshotStore::new();
        for path in entries {
            let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default();
            let retrieved_on = NaiveDate::parse_from_str(stem, "%Y-%m-%d").map_err(|_| Error::Parse {
                line: 0,
                reason: format!("snapshot file name '{}' is not YYYY-MM-DD.csv", path.display()),
            })?;
            let file = fs::File::open(&path)?;
            let series = parse_long_daily(file, stem)?;
            store.insert(Snapshot::new(retrieved_on, series)?)?;
        }
        Ok(store)
    }

    /// Writes each snapshot to `dir/YYYY-MM-DD.csv`.
    pub fn save_dir(&self, dir: impl AsRef<Path>) -> Result<()> {
        fs::create_dir_all(dir.as_ref())?;
        for (date, snap) in &self.snapshots {
            let path = dir.as_ref().join(format!("{date}.csv"));
            let file = fs::File::create(path)?;
            crate::ingest::write_long_daily(&snap.series, file)?;
        }
        Ok(())
    }
}

/// Share of the newer value that was added since the older snapshot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RevisionShare {
    Share(f64),
    /// The newer value is zero, so no share is defined.
    Undefined,
}

impl RevisionShare {
    pub fn value(&self) -> Option<f64> {
        match self {
            RevisionShare::Share(v) => Some(*v),
            RevisionShare::Undefined => None,
        }
    }
}

impl Serialize for RevisionShare {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.value().serialize(s)
    }
}

/// `(v_new − v_old) / v_new`.
pub fn share_from_values(v_old: f64, v_new: f64) -> RevisionShare {
    if v_new == 0.0 {
        RevisionShare::Undefined
    } else {
        RevisionShare::Share((v_new - v_old) / v_new)
    }
}

/// Revision share of one reporting date between two snapshots. A date absent
/// from the older snapshot counts as 0 there, i.e. it was reported entirely late.
pub fn revision_share(older: &Snapshot, newer: &Snapshot, reporting_date: NaiveDate) -> Result<RevisionShare> {
    if older.retrieved_on() >= newer.retrieved_on() {
        return Err(Error::SnapshotOrder {
            older: older.retrieved_on(),
            newer: newer.retrieved_on(),
        });
    }
    let v_new = newer
        .series()
        .get(reporting_date)
        .ok_or(Error::MissingDate(reporting_date))?;
    let v_old = older.series().get(reporting_date).unwrap_or(0.0);
    Ok(share_from_values(v_old, v_new))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RevisionRow {
    pub reporting_date: NaiveDate,
    pub share: RevisionShare,
}

pub fn revision_profile(
    store: &SnapshotStore,
    newer_retrieval: NaiveDate,
    older_retrieval: NaiveDate,
) -> Result<Vec<RevisionRow>> {
    let newer = store.get(newer_retrieval)?;
    let older = store.get(older_retrieval)?;
    newer
        .series()
        .dates()
        .map(|reporting_date| {
            Ok(RevisionRow {
                reporting_date,
                share: revision_share(older, newer, reporting_date)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeekendGap {
    pub weekend_mean: f64,
    pub weekday_mean: f64,
    /// `weekend_mean / weekday_mean − 1`
    pub ratio: f64,
}

/// Model-free weekend-vs-weekday comparison of mean daily values in `window`.
pub fn weekend_gap(series: &DailySeries, window: &DateWindow) -> Result<WeekendGap> {
    let (mut we_sum, mut we_n, mut wd_sum, mut wd_n) = (0.0, 0usize, 0.0, 0usize);
    for (date, v) in series.restrict(window).iter() {
        if is_weekend(date) {
            we_sum += v;
            we_n += 1;
        } else {
            wd_sum += v;
            wd_n += 1;
        }
    }
    if we_n == 0 {
        return Err(Error::EmptyGroup("weekend"));
    }
    if wd_n == 0 {
        return Err(Error::EmptyGroup("weekday"));
    }
    let weekend_mean = we_sum / we_n as f64;
    let weekday_mean = wd_sum / wd_n as f64;
    Ok(WeekendGap {
        weekend_mean,
        weekday_mean,
        ratio: weekend_mean / weekday_mean - 1.0,
    })
}
