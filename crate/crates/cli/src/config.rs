//! Sweep configuration shared by all subcommands.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use simplex_lattice::Weights;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum GridKind {
    Geometric,
    Arithmetic,
    /// Thresholds `t = w.m` on the jumps of the count.
    JumpAligned,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// A rejected configuration (exit code 2).
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid configuration: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

fn bad(msg: impl Into<String>) -> anyhow::Error {
    ConfigError(msg.into()).into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub preset: Option<String>,
    pub weights: Option<String>,
    pub t_min: f64,
    pub t_max: f64,
    pub grid: GridKind,
    pub points: usize,
    pub delta: f64,
    pub kappa: f64,
    pub precision_bits: usize,
    pub seed: u64,
    /// Worker threads; 0 means one per core.
    pub jobs: usize,
    pub out: Option<PathBuf>,
    pub format: Format,
    /// Random shifts per threshold for the invariance check in `count`.
    pub shifts: usize,
    /// Scan length for approximability profiles.
    pub scan: u64,
    /// Slack constant on the smoothing term of the balanced bound.
    pub slack: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            preset: None,
            weights: None,
            t_min: 10.0,
            t_max: 1000.0,
            grid: GridKind::Geometric,
            points: 20,
            delta: 0.1,
            kappa: 0.0,
            precision_bits: 128,
            seed: 0,
            jobs: 1,
            out: None,
            format: Format::Csv,
            shifts: 0,
            scan: 100_000,
            slack: 1.0,
        }
    }
}

impl SweepConfig {
    pub fn from_json_file(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| bad(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| bad(format!("{}: {e}", path.display())))
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        if !(self.t_min > 0.0 && self.t_min.is_finite()) {
            return Err(bad(format!("t-min must be positive, got {}", self.t_min)));
        }
        if !(self.t_max >= self.t_min && self.t_max.is_finite()) {
            return Err(bad(format!("t-max must be at least t-min, got {}", self.t_max)));
        }
        if self.points == 0 {
            return Err(bad("points must be at least 1"));
        }
        if !(self.delta > 0.0 && self.delta < 0.5) {
            return Err(bad(format!("delta must lie in (0, 1/2), got {}", self.delta)));
        }
        if !(self.kappa >= 0.0 && self.kappa.is_finite()) {
            return Err(bad(format!("kappa must be non-negative, got {}", self.kappa)));
        }
        if self.precision_bits < 64 {
            return Err(bad(format!("precision-bits must be at least 64, got {}", self.precision_bits)));
        }
        if self.preset.is_some() && self.weights.is_some() {
            return Err(bad("give either a preset or explicit weights, not both"));
        }
        if !(self.slack >= 0.0) {
            return Err(bad("slack must be non-negative"));
        }
        if self.preset.is_some() || self.weights.is_some() {
            self.weight_vector()?;
        }
        Ok(())
    }

    pub fn weight_vector(&self) -> anyhow::Result<Weights> {
        match (&self.preset, &self.weights) {
            (Some(p), None) => Weights::preset(p).map_err(|e| bad(e.to_string())),
            (None, Some(w)) => Weights::parse(w).map_err(|e| bad(e.to_string())),
            (None, None) => Err(bad("a weight preset or explicit weights are required")),
            (Some(_), Some(_)) => Err(bad("give either a preset or explicit weights, not both")),
        }
    }

    /// Weights whose inclines are all irrational, as error analysis needs.
    pub fn irrational_weights(&self) -> anyhow::Result<Weights> {
        let w = self.weight_vector()?;
        if w.dim() < 2 {
            return Err(bad("error analysis needs at least two weights"));
        }
        if w.has_rational_incline() == Some(true) {
            return Err(bad(format!("degenerate incline: {w} has a rational weight ratio")));
        }
        Ok(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> SweepConfig {
        SweepConfig { preset: Some("golden".into()), ..SweepConfig::default() }
    }

    #[test]
    fn defaults_validate() {
        base().validate().unwrap();
    }

    #[test]
    fn rejects_bad_values() {
        for cfg in [
            SweepConfig { t_min: 0.0, ..base() },
            SweepConfig { t_max: 1.0, ..base() },
            SweepConfig { points: 0, ..base() },
            SweepConfig { delta: 0.5, ..base() },
            SweepConfig { precision_bits: 32, ..base() },
            SweepConfig { weights: Some("1,2".into()), ..base() },
            SweepConfig { preset: Some("nope".into()), ..base() },
        ] {
            let err = cfg.validate().unwrap_err();
            assert!(err.downcast_ref::<ConfigError>().is_some(), "{cfg:?}");
        }
    }

    #[test]
    fn rational_inclines_rejected_for_error_analysis() {
        let cfg = SweepConfig { preset: None, weights: Some("2,3".into()), ..SweepConfig::default() };
        assert!(cfg.weight_vector().is_ok());
        assert!(SweepConfig::default().validate().is_ok());
        assert!(SweepConfig::default().weight_vector().unwrap_err().downcast_ref::<ConfigError>().is_some());
        let err = cfg.irrational_weights().unwrap_err();
        assert!(err.to_string().contains("degenerate incline"));
    }

    #[test]
    fn json_round_trip() {
        let cfg = SweepConfig { grid: GridKind::JumpAligned, seed: 9, ..base() };
        let text = serde_json::to_string(&cfg).unwrap();
        assert!(text.contains("jump-aligned"));
        let back: SweepConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cfg);
        let partial: SweepConfig = serde_json::from_str(r#"{"preset": "sqrt2", "points": 3}"#).unwrap();
        assert_eq!(partial.points, 3);
        assert_eq!(partial.t_min, 10.0);
    }
}
