//! Ordinary least squares with classical (homoskedastic) inference.
//!
//! The production path solves the least-squares problem through a Householder
//! QR factorization of the design; standard errors come from `s²·(XᵀX)⁻¹`,
//! which is evaluated as `s²·R⁻¹R⁻ᵀ` so the normal equations are never formed.

use serde::{Deserialize, Serialize};

use crate::dist::{f_survival, t_two_tailed_p};
use crate::error::{Error, Result};
use crate::linalg::HouseholderQr;

pub const INTERCEPT: &str = "intercept";

/// Default relative tolerance on the diagonal of R below which the design is
/// declared rank deficient.
pub const DEFAULT_RANK_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OlsConfig {
    pub rank_tolerance: f64,
}

impl Default for OlsConfig {
    fn default() -> Self {
        Self {
            rank_tolerance: DEFAULT_RANK_TOLERANCE,
        }
    }
}

/// Response vector plus named regressor columns.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    names: Vec<String>,
    columns: Vec<Vec<f64>>,
    response: Vec<f64>,
    intercept: bool,
}

impl DesignMatrix {
    /// Builds a design. When `intercept` is true a column of ones named
    /// [`INTERCEPT`] is prepended to `regressors`.
    pub fn new(response: Vec<f64>, regressors: Vec<(String, Vec<f64>)>, intercept: bool) -> Result<Self> {
        let n = response.len();
        let mut names = Vec::with_capacity(regressors.len() + 1);
        let mut columns = Vec::with_capacity(regressors.len() + 1);
        if intercept {
            names.push(INTERCEPT.to_string());
            columns.push(vec![1.0; n]);
        }
        for (name, col) in regressors {
            if col.len() != n {
                return Err(Error::InvalidDesign(format!(
                    "column '{name}' has {} rows, response has {n}",
                    col.len()
                )));
            }
            if names.contains(&name) {
                return Err(Error::InvalidDesign(format!("duplicate column name '{name}'")));
            }
            names.push(name);
            columns.push(col);
        }
        if response.iter().chain(columns.iter().flatten()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidDesign("non-finite entry".into()));
        }
        if columns.is_empty() {
            return Err(Error::InvalidDesign("no columns".into()));
        }
        Ok(Self {
            names,
            columns,
            response,
            intercept,
        })
    }

    pub fn n(&self) -> usize {
        self.response.len()
    }

    pub fn k(&self) -> usize {
        self.columns.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn columns(&self) -> &[Vec<f64>] {
        &self.columns
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| self.columns[i].as_slice())
    }

    pub fn response(&self) -> &[f64] {
        &self.response
    }

    pub fn has_intercept(&self) -> bool {
        self.intercept
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        self.columns.iter().map(|c| c[i]).collect()
    }
}

/// One estimated coefficient with its inference statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct Coefficient {
    pub name: String,
    pub estimate: f64,
    pub std_error: f64,
    pub t_stat: f64,
    pub p_value: f64,
}

impl Coefficient {
    pub fn stars(&self) -> &'static str {
        stars(self.p_value)
    }
}

/// F statistic of the regression with its degrees of freedom.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FStatistic {
    #[serde(with = "crate::report::nullable_f64")]
    pub value: f64,
    pub df1: u32,
    pub df2: u32,
}

impl FStatistic {
    pub fn p_value(&self) -> f64 {
        f_survival(self.value, self.df1, self.df2)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OlsFit {
    pub coefficients: Vec<Coefficient>,
    pub r_squared: f64,
    pub adj_r_squared: f64,
    pub residual_std_error: f64,
    pub f_statistic: FStatistic,
    pub residuals: Vec<f64>,
    pub fitted: Vec<f64>,
    pub n: usize,
    pub k: usize,
    pub sse: f64,
    pub sst: f64,
    pub intercept: bool,
}

impl OlsFit {
    pub fn df_resid(&self) -> usize {
        self.n - self.k
    }

    pub fn coefficient(&self, name: &str) -> Option<&Coefficient> {
        self.coefficients.iter().find(|c| c.name == name)
    }

    pub fn estimates(&self) -> Vec<f64> {
        self.coefficients.iter().map(|c| c.estimate).collect()
    }
}

/// Fits with the default rank tolerance.
pub fn fit(design: &DesignMatrix) -> Result<OlsFit> {
    fit_with(design, &OlsConfig::default())
}

pub fn fit_with(design: &DesignMatrix, config: &OlsConfig) -> Result<OlsFit> {
    let n = design.n();
    let k = design.k();
    if n <= k {
        return Err(Error::TooFewObservations { n, k });
    }

    let qr = HouseholderQr::new(design.columns());
    let diag = qr.r_diagonal();
    let largest = diag.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if let Some(j) = diag
        .iter()
        .position(|v| largest == 0.0 || v.abs() <= config.rank_tolerance * largest)
    {
        return Err(Error::RankDeficient {
            column: design.names()[j].clone(),
        });
    }

    let y = design.response();
    let beta = qr.solve(y);
    let fitted: Vec<f64> = (0..n)
        .map(|i| design.columns().iter().zip(&beta).map(|(c, b)| c[i] * b).sum())
        .collect();
    let residuals: Vec<f64> = y.iter().zip(&fitted).map(|(y, f)| y - f).collect();

    let sse: f64 = residuals.iter().map(|r| r * r).sum();
    let sst: f64 = if design.has_intercept() {
        let mean = y.iter().sum::<f64>() / n as f64;
        y.iter().map(|v| (v - mean) * (v - mean)).sum()
    } else {
        y.iter().map(|v| v * v).sum()
    };
    let df_resid = n - k;
    let sigma2 = sse / df_resid as f64;

    let r_squared = if sst > 0.0 { 1.0 - sse / sst } else { 1.0 };
    let df_model = if design.has_intercept() { k - 1 } else { k };
    let adj_r_squared = if design.has_intercept() {
        1.0 - (1.0 - r_squared) * (n - 1) as f64 / df_resid as f64
    } else {
        1.0 - (1.0 - r_squared) * n as f64 / df_resid as f64
    };
    let f_value = if df_model == 0 {
        f64::NAN
    } else {
        (r_squared / df_model as f64) / ((1.0 - r_squared) / df_resid as f64)
    };

    let r_inv = qr.r_inverse();
    let coefficients = design
        .names()
        .iter()
        .enumerate()
        .map(|(j, name)| {
            let var = sigma2 * r_inv[j].iter().map(|v| v * v).sum::<f64>();
            let se = var.sqrt();
            let t = beta[j] / se;
            Coefficient {
                name: name.clone(),
                estimate: beta[j],
                std_error: se,
                t_stat: t,
                p_value: t_two_tailed_p(t, df_resid as u32),
            }
        })
        .collect();

    Ok(OlsFit {
        coefficients,
        r_squared,
        adj_r_squared,
        residual_std_error: sigma2.sqrt(),
        f_statistic: FStatistic {
            value: f_value,
            df1: df_model as u32,
            df2: df_resid as u32,
        },
        residuals,
        fitted,
        n,
        k,
        sse,
        sst,
        intercept: design.has_intercept(),
    })
}

/// Significance marker: `***` below 0.01, `**` below 0.05, `*` below 0.1.
pub fn stars(p: f64) -> &'static str {
    if p < 0.01 {
        "***"
    } else if p < 0.05 {
        "**"
    } else if p < 0.1 {
        "*"
    } else {
        ""
    }
}
