//! Serializable fit reports and their text rendering.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nowcast::{LogLinearCoefficients, ModelSpec, NowcastModel, WEEKEND};
use crate::ols::{self, FStatistic, INTERCEPT};

/// Serializes non-finite floats as `null` and reads `null` back as NaN.
pub(crate) mod nullable_f64 {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientReport {
    #[serde(with = "nullable_f64")]
    pub estimate: f64,
    #[serde(with = "nullable_f64")]
    pub se: f64,
    #[serde(with = "nullable_f64")]
    pub t: f64,
    #[serde(with = "nullable_f64")]
    pub p: f64,
    pub stars: String,
}

/// Machine-readable summary of one fitted nowcast model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub spec: ModelSpec,
    pub coefficients: BTreeMap<String, CoefficientReport>,
    #[serde(with = "nullable_f64")]
    pub r2: f64,
    #[serde(with = "nullable_f64")]
    pub adj_r2: f64,
    #[serde(with = "nullable_f64")]
    pub mae_log: f64,
    #[serde(with = "nullable_f64")]
    pub mape_original: f64,
    pub weekend_effect: Option<f64>,
    #[serde(with = "nullable_f64")]
    pub residual_se: f64,
    pub f: FStatistic,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub smearing_factor: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generated_at: Option<String>,
}

impl FitReport {
    pub fn from_model(model: &NowcastModel) -> Self {
        let coefficients = model
            .fit
            .coefficients
            .iter()
            .map(|c| {
                (
                    c.name.clone(),
                    CoefficientReport {
                        estimate: c.estimate,
                        se: c.std_error,
                        t: c.t_stat,
                        p: c.p_value,
                        stars: c.stars().to_string(),
                    },
                )
            })
            .collect();
        Self {
            spec: model.spec.clone(),
            coefficients,
            r2: model.fit.r_squared,
            adj_r2: model.fit.adj_r_squared,
            mae_log: model.mae_log,
            mape_original: model.mape_original,
            weekend_effect: model.weekend_effect,
            residual_se: model.fit.residual_std_error,
            f: model.fit.f_statistic,
            n: model.fit.n,
            smearing_factor: model.smearing_factor,
            generated_at: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("fit report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line() as u64,
            reason: e.to_string(),
        })
    }

    pub fn coefficients(&self) -> Result<LogLinearCoefficients> {
        let get = |name: &str| {
            self.coefficients
                .get(name)
                .map(|c| c.estimate)
                .ok_or_else(|| Error::InvalidSpec(format!("report has no coefficient '{name}'")))
        };
        Ok(LogLinearCoefficients {
            intercept: get(INTERCEPT)?,
            slope: get(&self.spec.predictor_column())?,
            weekend: if self.spec.weekend_dummy { get(WEEKEND)? } else { 0.0 },
            smearing_factor: self.smearing_factor.unwrap_or(1.0),
        })
    }

    /// Regression table in the usual econometrics layout, three decimals.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let s = &self.spec;
        let _ = writeln!(out, "Dependent variable: ln({})", s.target);
        let _ = writeln!(
            out,
            "Predictor: {} (lag {} day{}), window {} to {}",
            s.predictor,
            s.lag_days,
            if s.lag_days == 1 { "" } else { "s" },
            s.window.start(),
            s.window.end()
        );
        let _ = writeln!(out, "{}", "-".repeat(52));
        let mut order = vec![self.spec.predictor_column()];
        if s.weekend_dummy {
            order.push(WEEKEND.to_string());
        }
        order.push(INTERCEPT.to_string());
        for name in order {
            if let Some(c) = self.coefficients.get(&name) {
                let label = if name == INTERCEPT {
                    "Constant".to_string()
                } else {
                    name.clone()
                };
                let est = format!("{:.3}{}", c.estimate, ols::stars(c.p));
                let _ = writeln!(out, "{label:<28}{est:>12} ({:.3})", c.se);
            }
        }
        let _ = writeln!(out, "{}", "-".repeat(52));
        let df2 = self.f.df2;
        let rows: Vec<(String, String)> = vec![
            ("Number of Observations".into(), self.n.to_string()),
            ("R2".into(), format!("{:.3}", self.r2)),
            ("Adjusted R2".into(), format!("{:.3}", self.adj_r2)),
            ("Mean Absolute Error (MAE)".into(), format!("{:.3}", self.mae_log)),
            ("MAPE on original data".into(), format!("{:.3}", self.mape_original)),
            (
                format!("Residual Std. Error (df = {df2})"),
                format!("{:.3}", self.residual_se),
            ),
            (
                format!("F Statistic (df = {}; {df2})", self.f.df1),
                format!("{:.3}{}", self.f.value, ols::stars(self.f.p_value())),
            ),
        ];
        for (k, v) in rows {
            let _ = writeln!(out, "{k:<36}{v:>16}");
        }
        if let Some(w) = self.weekend_effect {
            let _ = writeln!(out, "{:<36}{:>15.1}%", "Weekend effect", 100.0 * w);
        }
        let _ = writeln!(out, "Note: *p<0.1; **p<0.05; ***p<0.01");
        if let Some(stamp) = &self.generated_at {
            let _ = writeln!(out, "Generated at {stamp}");
        }
        out
    }
}
