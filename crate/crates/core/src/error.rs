use chrono::NaiveDate;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid date window: start {start} is after end {end}")]
    InvalidWindow { start: NaiveDate, end: NaiveDate },

    #[error("non-finite value on {date} in series '{source_name}'")]
    NonFiniteValue { date: NaiveDate, source_name: String },

    #[error("no date in the window has a value in every series")]
    EmptyIntersection,

    #[error("cannot index series '{0}': every value is zero")]
    AllZero(String),

    #[error("series '{0}' is empty")]
    EmptySeries(String),

    #[error("too few observations: n = {n} but the design has k = {k} columns")]
    TooFewObservations { n: usize, k: usize },

    #[error("design matrix is rank deficient (column '{column}')")]
    RankDeficient { column: String },

    #[error("invalid design: {0}")]
    InvalidDesign(String),

    #[error("non-positive value {value} on {date} in series '{source_name}'")]
    NonPositiveValue {
        date: NaiveDate,
        source_name: String,
        value: f64,
    },

    #[error("missing value on {date} in series '{source_name}'")]
    MissingValue { date: NaiveDate, source_name: String },

    #[error("invalid nowcast spec: {0}")]
    InvalidSpec(String),

    #[error("every lag from 0 to {max_lag} is infeasible")]
    AllLagsInfeasible { max_lag: u32 },

    #[error("reporting date {0} is missing from the newer snapshot")]
    MissingDate(NaiveDate),

    #[error("snapshot retrieved on {0} not found")]
    SnapshotNotFound(NaiveDate),

    #[error("duplicate snapshot for retrieval date {0}")]
    DuplicateSnapshot(NaiveDate),

    #[error("snapshot retrieved on {retrieved_on} contains future reporting date {date}")]
    FutureReportingDate { retrieved_on: NaiveDate, date: NaiveDate },

    #[error("older snapshot ({older}) must be retrieved before newer snapshot ({newer})")]
    SnapshotOrder { older: NaiveDate, newer: NaiveDate },

    #[error("window contains no {0} observations")]
    EmptyGroup(&'static str),

    #[error("parse error at line {line}: {reason}")]
    Parse { line: u64, reason: String },

    #[error("duplicate date {0}")]
    DuplicateDate(NaiveDate),

    #[error("negative value on {0}")]
    NegativeValue(NaiveDate),

    #[error("country '{0}' not found")]
    CountryNotFound(String),

    #[error("embedded fixture is corrupt: expected sha256 {expected}, got {actual}")]
    CorruptFixture { expected: String, actual: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl Error {
    /// Stable machine-readable name of the variant, used in structured CLI errors.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidWindow { .. } => "InvalidWindow",
            Error::NonFiniteValue { .. } => "NonFiniteValue",
            Error::EmptyIntersection => "EmptyIntersection",
            Error::AllZero(_) => "AllZero",
            Error::EmptySeries(_) => "EmptySeries",
            Error::TooFewObservations { .. } => "TooFewObservations",
            Error::RankDeficient { .. } => "RankDeficient",
            Error::InvalidDesign(_) => "InvalidDesign",
            Error::NonPositiveValue { .. } => "NonPositiveValue",
            Error::MissingValue { .. } => "MissingValue",
            Error::InvalidSpec(_) => "InvalidSpec",
            Error::AllLagsInfeasible { .. } => "AllLagsInfeasible",
            Error::MissingDate(_) => "MissingDate",
            Error::SnapshotNotFound(_) => "SnapshotNotFound",
            Error::DuplicateSnapshot(_) => "DuplicateSnapshot",
            Error::FutureReportingDate { .. } => "FutureReportingDate",
            Error::SnapshotOrder { .. } => "SnapshotOrder",
            Error::EmptyGroup(_) => "EmptyGroup",
            Error::Parse { .. } => "ParseError",
            Error::DuplicateDate(_) => "DuplicateDate",
            Error::NegativeValue(_) => "NegativeValue",
            Error::CountryNotFound(_) => "CountryNotFound",
            Error::CorruptFixture { .. } => "CorruptFixture",
            Error::Io(_) => "Io",
        }
    }

    /// The date a data error points at, if any.
    pub fn date(&self) -> Option<NaiveDate> {
        match self {
            Error::NonFiniteValue { date, .. }
            | Error::NonPositiveValue { date, .. }
            | Error::MissingValue { date, .. }
            | Error::FutureReportingDate { date, .. } => Some(*date),
            Error::MissingDate(d)
            | Error::SnapshotNotFound(d)
            | Error::DuplicateSnapshot(d)
            | Error::DuplicateDate(d)
            | Error::NegativeValue(d) => Some(*d),
            _ => None,
        }
    }
}
