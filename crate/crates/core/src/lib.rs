//! Nowcasting official daily infection counts from timelier proxy series.
//!
//! The crate fits log-log regressions of an official daily count on one proxy
//! (another case count, a search-volume index, a tweet-count index) plus a
//! weekend dummy, selects the proxy's lead by sweeping lags, compares series
//! directly, and measures how much official numbers are revised after first
//! publication. A reference dataset for Germany (January to April 2020) is
//! embedded; see [`ingest::load_fixture`].
//!
//! ```
//! use epinowcast::ingest::load_fixture;
//! use epinowcast::nowcast::{fit_nowcast, NowcastSpec};
//! use epinowcast::series::DateWindow;
//! use chrono::NaiveDate;
//!
//! let data = load_fixture().unwrap();
//! let window = DateWindow::new(
//!     NaiveDate::from_ymd_opt(2020, 3, 3).unwrap(),
//!     NaiveDate::from_ymd_opt(2020, 3, 28).unwrap(),
//! ).unwrap();
//! let model = fit_nowcast(&NowcastSpec::new(&data.rki, &data.jhu, 0, window)).unwrap();
//! assert_eq!(model.n(), 26);
//! ```

pub mod cli;
pub mod dist;
pub mod error;
pub mod ingest;
pub mod lag_sweep;
pub mod linalg;
pub mod nowcast;
pub mod ols;
pub mod report;
pub mod revisions;
pub mod series;

pub use error::{Error, Result};
pub use series::{DailySeries, DateWindow};
