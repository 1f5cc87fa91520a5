//! Least-squares growth fits of an error statistic against the threshold.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

pub const MIN_POINTS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    /// `y ~ C t^alpha`.
    Power,
    /// `y ~ C t^alpha (log t)^beta`.
    PowerLog,
    /// `y ~ C (log t)^gamma`.
    PolyLog,
}

impl Model {
    fn params(self) -> &'static [&'static str] {
        match self {
            Model::Power => &["log_c", "alpha"],
            Model::PowerLog => &["log_c", "alpha", "beta"],
            Model::PolyLog => &["log_c", "gamma"],
        }
    }

    fn design_row(self, t: f64) -> Vec<f64> {
        let l = t.ln();
        match self {
            Model::Power => vec![1.0, l],
            Model::PowerLog => vec![1.0, l, l.ln()],
            Model::PolyLog => vec![1.0, l.ln()],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitParam {
    pub name: &'static str,
    pub value: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub model: Model,
    /// What was fitted, e.g. `rrr_open`.
    pub target: String,
    pub params: Vec<FitParam>,
    pub residual_norm: f64,
    pub n_points: usize,
    /// Points dropped because the statistic was not positive.
    pub skipped: usize,
    pub t_min: f64,
    pub t_max: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FitError {
    TooFewPoints { got: usize, need: usize },
    Singular,
}

impl std::fmt::Display for FitError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FitError::TooFewPoints { got, need } => write!(f, "fit needs at least {need} usable points, got {got}"),
            FitError::Singular => write!(f, "fit design matrix is singular"),
        }
    }
}

impl std::error::Error for FitError {}

impl FitResult {
    pub fn param(&self, name: &str) -> Option<&FitParam> {
        self.params.iter().find(|p| p.name == name)
    }

    pub fn exponent(&self) -> f64 {
        let name = match self.model {
            Model::Power | Model::PowerLog => "alpha",
            Model::PolyLog => "gamma",
        };
        self.param(name).expect("model has an exponent").value
    }
}

/// Ordinary least squares of `log y` on the model's design in `t`.
/// Requires `t > 1` for the log-log models.
pub fn fit(model: Model, target: &str, t: &[f64], y: &[f64]) -> Result<FitResult, FitError> {
    assert_eq!(t.len(), y.len());
    let usable: Vec<(f64, f64)> =
        t.iter().zip(y).filter(|(ti, yi)| **yi > 0.0 && yi.is_finite() && **ti > 1.0).map(|(a, b)| (*a, *b)).collect();
    let skipped = t.len() - usable.len();
    let p = model.params().len();
    let need = MIN_POINTS.max(p + 1);
    if usable.len() < need {
        return Err(FitError::TooFewPoints { got: usable.len(), need });
    }
    let n = usable.len();
    let x = DMatrix::from_row_iterator(n, p, usable.iter().flat_map(|(ti, _)| model.design_row(*ti)));
    let z = DVector::from_iterator(n, usable.iter().map(|(_, yi)| yi.ln()));
    let xtx = x.transpose() * &x;
    let inv = xtx.try_inverse().ok_or(FitError::Singular)?;
    let beta = &inv * x.transpose() * &z;
    let resid = &z - &x * &beta;
    let rss = resid.norm_squared();
    let sigma2 = rss / (n - p) as f64;
    let params = model
        .params()
        .iter()
        .enumerate()
        .map(|(i, name)| FitParam { name, value: beta[i], stderr: (sigma2 * inv[(i, i)]).max(0.0).sqrt() })
        .collect();
    let (t_min, t_max) = usable.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (ti, _)| (lo.min(*ti), hi.max(*ti)));
    Ok(FitResult { model, target: target.to_string(), params, residual_norm: rss.sqrt(), n_points: n, skipped, t_min, t_max })
}
