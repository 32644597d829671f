//! Log-log nowcasting of an official daily count from one proxy series.
//!
//! The model regresses `ln(target_t)` on an intercept, `ln(predictor_{t-lag})`
//! and (optionally) a Saturday/Sunday dummy, all over a fixed window of target
//! dates. A lagged predictor reaches back before the window instead of shrinking it.

use chrono::{Duration, NaiveDate};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ols::{self, DesignMatrix, OlsFit, INTERCEPT};
use crate::series::{align, is_weekend, DailySeries, DateWindow};

pub const WEEKEND: &str = "weekend";
pub const MAX_LAG_DAYS: u32 = 30;

/// Model declaration over borrowed series.
#[derive(Debug, Clone, Copy)]
pub struct NowcastSpec<'a> {
    pub target: &'a DailySeries,
    pub predictor: &'a DailySeries,
    pub lag_days: u32,
    pub weekend_dummy: bool,
    pub window: DateWindow,
}

impl<'a> NowcastSpec<'a> {
    pub fn new(target: &'a DailySeries, predictor: &'a DailySeries, lag_days: u32, window: DateWindow) -> Self {
        Self {
            target,
            predictor,
            lag_days,
            weekend_dummy: true,
            window,
        }
    }

    pub fn summary(&self) -> ModelSpec {
        ModelSpec {
            target: self.target.source_name().to_string(),
            predictor: self.predictor.source_name().to_string(),
            lag_days: self.lag_days,
            weekend_dummy: self.weekend_dummy,
            window: self.window,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.lag_days > MAX_LAG_DAYS {
            return Err(Error::InvalidSpec(format!(
                "lag of {} days exceeds the maximum of {MAX_LAG_DAYS}",
                self.lag_days
            )));
        }
        Ok(())
    }
}

/// Owned, serializable description of a fitted model's inputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub target: String,
    pub predictor: String,
    pub lag_days: u32,
    pub weekend_dummy: bool,
    pub window: DateWindow,
}

impl ModelSpec {
    pub fn predictor_column(&self) -> String {
        predictor_column(&self.predictor)
    }
}

pub fn predictor_column(predictor: &str) -> String {
    format!("ln_{predictor}")
}

/// Design matrix plus the per-row raw values it was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct NowcastDesign {
    pub design: DesignMatrix,
    pub dates: Vec<NaiveDate>,
    pub target: Vec<f64>,
    /// Predictor values as used, i.e. observed `lag_days` before each row's date.
    pub predictor: Vec<f64>,
}

pub fn build_design(spec: &NowcastSpec<'_>) -> Result<NowcastDesign> {
    spec.validate()?;
    let lag = Duration::days(i64::from(spec.lag_days));
    let target_name = spec.target.source_name();
    let predictor_name = spec.predictor.source_name();

    let mut dates = Vec::with_capacity(spec.window.len_days());
    let mut target = Vec::with_capacity(dates.capacity());
    let mut predictor = Vec::with_capacity(dates.capacity());
    for date in spec.window.dates() {
        let source_date = date - lag;
        let y = spec.target.get(date).ok_or_else(|| Error::MissingValue {
            date,
            source_name: target_name.to_string(),
        })?;
        let x = spec.predictor.get(source_date).ok_or_else(|| Error::MissingValue {
            date: source_date,
            source_name: predictor_name.to_string(),
        })?;
        if y <= 0.0 {
            return Err(Error::NonPositiveValue {
                date,
                source_name: target_name.to_string(),
                value: y,
            });
        }
        if x <= 0.0 {
            return Err(Error::NonPositiveValue {
                date: source_date,
                source_name: predictor_name.to_string(),
                value: x,
            });
        }
        dates.push(date);
        target.push(y);
        predictor.push(x);
    }

    let mut regressors = vec![(
        predictor_column(predictor_name),
        predictor.iter().map(|v| v.ln()).collect(),
    )];
    if spec.weekend_dummy {
        regressors.push((
            WEEKEND.to_string(),
            dates.iter().map(|d| if is_weekend(*d) { 1.0 } else { 0.0 }).collect(),
        ));
    }
    let design = DesignMatrix::new(target.iter().map(|v| v.ln()).collect(), regressors, true)?;
    Ok(NowcastDesign {
        design,
        dates,
        target,
        predictor,
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct NowcastOptions {
    /// Multiply back-transformed predictions by the mean of `exp(residual)`.
    pub smearing: bool,
}

/// The three coefficients needed to produce a prediction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogLinearCoefficients {
    pub intercept: f64,
    pub slope: f64,
    pub weekend: f64,
    /// Multiplicative back-transform correction; 1 when smearing is off.
    pub smearing_factor: f64,
}

impl LogLinearCoefficients {
    pub fn predict(&self, predictor_value: f64, date: NaiveDate) -> Result<f64> {
        if predictor_value.is_nan() || predictor_value <= 0.0 {
            return Err(Error::NonPositiveValue {
                date,
                source_name: "predictor".into(),
                value: predictor_value,
            });
        }
        let weekend = if is_weekend(date) { self.weekend } else { 0.0 };
        Ok(self.smearing_factor * (self.intercept + self.slope * predictor_value.ln() + weekend).exp())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NowcastModel {
    pub spec: ModelSpec,
    pub fit: OlsFit,
    pub dates: Vec<NaiveDate>,
    pub target: Vec<f64>,
    pub predictor: Vec<f64>,
    pub mae_log: f64,
    pub mape_original: f64,
    /// `exp(β_weekend) − 1`; `None` when the model has no weekend dummy.
    pub weekend_effect: Option<f64>,
    pub smearing_factor: Option<f64>,
}

impl NowcastModel {
    pub fn coefficients(&self) -> LogLinearCoefficients {
        let get = |name: &str| self.fit.coefficient(name).map_or(0.0, |c| c.estimate);
        LogLinearCoefficients {
            intercept: get(INTERCEPT),
            slope: get(&self.spec.predictor_column()),
            weekend: get(WEEKEND),
            smearing_factor: self.smearing_factor.unwrap_or(1.0),
        }
    }

    /// Predicted target for `date`, given the predictor observed `lag_days` earlier.
    pub fn predict(&self, predictor_value: f64, date: NaiveDate) -> Result<f64> {
        self.coefficients().predict(predictor_value, date)
    }

    /// Back-transformed in-sample predictions, one per fitted row.
    pub fn in_sample_predictions(&self) -> Vec<f64> {
        let factor = self.smearing_factor.unwrap_or(1.0);
        self.fit.fitted.iter().map(|f| factor * f.exp()).collect()
    }

    pub fn n(&self) -> usize {
        self.fit.n
    }
}

pub fn fit_nowcast(spec: &NowcastSpec<'_>) -> Result<NowcastModel> {
    fit_nowcast_with(spec, &NowcastOptions::default())
}

pub fn fit_nowcast_with(spec: &NowcastSpec<'_>, options: &NowcastOptions) -> Result<NowcastModel> {
    let built = build_design(spec)?;
    let fit = ols::fit(&built.design)?;
    let n = fit.n as f64;

    let mae_log = fit.residuals.iter().map(|r| r.abs()).sum::<f64>() / n;
    let smearing_factor = options
        .smearing
        .then(|| fit.residuals.iter().map(|r| r.exp()).sum::<f64>() / n);
    let factor = smearing_factor.unwrap_or(1.0);
    let mape_original = fit
        .fitted
        .iter()
        .zip(&built.target)
        .map(|(f, y)| (factor * f.exp() - y).abs() / y)
        .sum::<f64>()
        / n;
    let weekend_effect = fit.coefficient(WEEKEND).map(|c| weekend_effect(c.estimate));

    Ok(NowcastModel {
        spec: spec.summary(),
        fit,
        dates: built.dates,
        target: built.target,
        predictor: built.predictor,
        mae_log,
        mape_original,
        weekend_effect,
        smearing_factor,
    })
}

/// Multiplicative weekend under- (negative) or over-reporting implied by a
/// log-scale dummy coefficient.
pub fn weekend_effect(beta_weekend: f64) -> f64 {
    beta_weekend.exp() - 1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub date: NaiveDate,
    pub truth: f64,
    pub other: f64,
    /// |other − truth| / truth
    pub ape: f64,
    /// (other − truth) / truth
    pub signed_diff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawComparison {
    pub truth: String,
    pub other: String,
    pub mape: f64,
    pub rows: Vec<ComparisonRow>,
}

/// Model-free comparison of `other` against the reference series `truth`.
pub fn compare_raw(truth: &DailySeries, other: &DailySeries, window: &DateWindow) -> Result<RawComparison> {
    align(&[truth, other], window)?;
    let mut rows = Vec::with_capacity(window.len_days());
    for date in window.dates() {
        let a = truth.get(date).ok_or_else(|| Error::MissingValue {
            date,
            source_name: truth.source_name().to_string(),
        })?;
        let b = other.get(date).ok_or_else(|| Error::MissingValue {
            date,
            source_name: other.source_name().to_string(),
        })?;
        if a <= 0.0 {
            return Err(Error::NonPositiveValue {
                date,
                source_name: truth.source_name().to_string(),
                value: a,
            });
        }
        let signed_diff = (b - a) / a;
        rows.push(ComparisonRow {
            date,
            truth: a,
            other: b,
            ape: signed_diff.abs(),
            signed_diff,
        });
    }
    let mape = rows.iter().map(|r| r.ape).sum::<f64>() / rows.len() as f64;
    Ok(RawComparison {
        truth: truth.source_name().to_string(),
        other: other.source_name().to_string(),
        mape,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(m: u32, day: u32) -> NaiveDate {
        NaiveDate::from_ymd_opt(2020, m, day).unwrap()
    }

    #[test]
    fn weekend_effect_values() {
        assert!((weekend_effect(-0.482) - -0.382).abs() < 5e-4);
        assert_eq!(weekend_effect(0.0), 0.0);
        assert!((weekend_effect(-0.685) - -0.496).abs() < 5e-4);
    }

    #[test]
    fn compare_identity_and_hand_example() {
        let w = DateWindow::new(d(3, 1), d(3, 2)).unwrap();
        let a = DailySeries::from_values("a", d(3, 1), &[100.0, 200.0]).unwrap();
        let b = DailySeries::from_values("b", d(3, 1), &[110.0, 180.0]).unwrap();
        assert_eq!(compare_raw(&a, &a, &w).unwrap().mape, 0.0);
        let cmp = compare_raw(&a, &b, &w).unwrap();
        assert!((cmp.mape - 0.10).abs() < 1e-12);
        assert!((cmp.rows[1].signed_diff - -0.10).abs() < 1e-12);
    }

    #[test]
    fn compare_errors() {
        let a = DailySeries::from_values("a", d(3, 1), &[0.0, 200.0]).unwrap();
        let w = DateWindow::new(d(3, 1), d(3, 2)).unwrap();
        assert!(matches!(compare_raw(&a, &a, &w), Err(Error::NonPositiveValue { .. })));
        let outside = DateWindow::new(d(5, 1), d(5, 2)).unwrap();
        assert_eq!(compare_raw(&a, &a, &outside), Err(Error::EmptyIntersection));
        let wide = DateWindow::new(d(3, 1), d(3, 5)).unwrap();
        let pos = DailySeries::from_values("p", d(3, 1), &[1.0, 2.0]).unwrap();
        assert!(matches!(
            compare_raw(&pos, &pos, &wide),
            Err(Error::MissingValue { .. })
        ));
    }

    #[test]
    fn predict_edge_cases() {
        let c = LogLinearCoefficients {
            intercept: 0.3,
            slope: 1.1,
            weekend: 0.0,
            smearing_factor: 1.0,
        };
        // Saturday vs Monday with a zero weekend coefficient
        assert_eq!(c.predict(50.0, d(3, 7)).unwrap(), c.predict(50.0, d(3, 9)).unwrap());
        let c = LogLinearCoefficients { weekend: -0.5, ..c };
        assert!((c.predict(1.0, d(3, 9)).unwrap() - 0.3f64.exp()).abs() < 1e-12);
        assert!((c.predict(1.0, d(3, 7)).unwrap() - (-0.2f64).exp()).abs() < 1e-12);
        assert!(matches!(c.predict(0.0, d(3, 9)), Err(Error::NonPositiveValue { .. })));
        assert!(c.predict(10.0, d(3, 9)).unwrap() < c.predict(11.0, d(3, 9)).unwrap());
    }

    #[test]
    fn build_design_rejects_zero_target() {
        let t = DailySeries::from_values("RKI", d(3, 1), &[3.0, 0.0, 5.0, 6.0]).unwrap();
        let x = DailySeries::from_values("JHU", d(3, 1), &[3.0, 4.0, 5.0, 6.0]).unwrap();
        let spec = NowcastSpec::new(&t, &x, 0, DateWindow::new(d(3, 1), d(3, 4)).unwrap());
        match build_design(&spec) {
            Err(Error::NonPositiveValue { date, source_name, .. }) => {
                assert_eq!(date, d(3, 2));
                assert_eq!(source_name, "RKI");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn build_design_reports_missing_lagged_value() {
        let t = DailySeries::from_values("RKI", d(3, 1), &[3.0, 4.0, 5.0, 6.0]).unwrap();
        let x = DailySeries::from_values("G", d(3, 1), &[3.0, 4.0, 5.0, 6.0]).unwrap();
        let spec = NowcastSpec::new(&t, &x, 2, DateWindow::new(d(3, 1), d(3, 4)).unwrap());
        assert_eq!(
            build_design(&spec).unwrap_err(),
            Error::MissingValue {
                date: NaiveDate::from_ymd_opt(2020, 2, 28).unwrap(),
                source_name: "G".into()
            }
        );
        let spec = NowcastSpec { lag_days: 31, ..spec };
        assert!(matches!(build_design(&spec), Err(Error::InvalidSpec(_))));
    }
}
