//! Threshold grids.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use simplex_lattice::{Real, Surd, Weights};

use crate::config::{ConfigError, GridKind, SweepConfig};

/// Grid values are rounded to this many decimals so they stay exact and short.
const DECIMALS: i64 = 1000;

#[derive(Debug, Clone, PartialEq)]
pub struct GridPoint {
    pub t: Surd,
    pub value: f64,
}

impl GridPoint {
    fn new(t: Surd) -> Self {
        GridPoint { value: t.to_f64(), t }
    }

    pub fn real(&self) -> Real {
        Real::Exact(self.t.clone())
    }
}

fn targets(kind: GridKind, t_min: f64, t_max: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![t_min];
    }
    (0..n)
        .map(|i| {
            let s = i as f64 / (n - 1) as f64;
            match kind {
                GridKind::Arithmetic => t_min + (t_max - t_min) * s,
                _ => t_min * (t_max / t_min).powf(s),
            }
        })
        .collect()
}

fn rounded(x: f64) -> Surd {
    Surd::from_ratio((x * DECIMALS as f64).round() as i64, DECIMALS)
}

/// Sorted, de-duplicated grid for the configured kind.
pub fn build_grid(cfg: &SweepConfig, w: &Weights) -> anyhow::Result<Vec<GridPoint>> {
    let mut points: Vec<GridPoint> = match cfg.grid {
        GridKind::Geometric | GridKind::Arithmetic => targets(cfg.grid, cfg.t_min, cfg.t_max, cfg.points)
            .into_iter()
            .map(|x| GridPoint::new(rounded(x)))
            .filter(|p| p.t.is_positive())
            .collect(),
        GridKind::JumpAligned => {
            let ws = w.surds().ok_or_else(|| ConfigError("jump-aligned grids need exact weights".into()))?;
            let sum: f64 = w.to_f64().iter().sum();
            if cfg.t_min < sum {
                return Err(ConfigError(format!("jump-aligned grids need t-min >= sum of weights ({sum:.6})")).into());
            }
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            targets(GridKind::Geometric, cfg.t_min, cfg.t_max, cfg.points)
                .into_iter()
                .map(|x| GridPoint::new(jump_below(ws, x, &mut rng)))
                .collect()
        }
    };
    points.sort_by(|a, b| a.t.cmp(&b.t));
    points.dedup_by(|a, b| a.t == b.t);
    Ok(points)
}

/// A random `t = w.m` with `m_j >= 1` and `t <= target`, as close to the
/// target as the last coordinate allows.
pub fn jump_below(w: &[Surd], target: f64, rng: &mut impl Rng) -> Surd {
    let wf: Vec<f64> = w.iter().map(Surd::to_f64).collect();
    let d = w.len();
    let mut budget = target - wf.iter().sum::<f64>();
    let mut t = Surd::zero();
    for j in 0..d - 1 {
        let room = (budget / wf[j]).floor().max(0.0) as i64;
        let extra = if room > 0 { rng.gen_range(0..=room) } else { 0 };
        t = &t + &w[j].scale_int(1 + extra);
        budget -= wf[j] * extra as f64;
    }
    let target = rounded(target);
    let last = (&(&target - &t) / &w[d - 1]).floor();
    let last = if last < BigInt::from(1) { 1 } else { i64::try_from(last).expect("grid fits in i64") };
    &t + &w[d - 1].scale_int(last)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(kind: GridKind) -> SweepConfig {
        SweepConfig { preset: Some("golden".into()), grid: kind, t_min: 10.0, t_max: 1000.0, points: 9, ..SweepConfig::default() }
    }

    #[test]
    fn geometric_and_arithmetic_endpoints() {
        let w = Weights::preset("golden").unwrap();
        let g = build_grid(&cfg(GridKind::Geometric), &w).unwrap();
        assert_eq!(g.len(), 9);
        assert_eq!(g[0].value, 10.0);
        assert_eq!(g[8].value, 1000.0);
        assert!((g[4].value - 100.0).abs() < 1e-3);
        let a = build_grid(&cfg(GridKind::Arithmetic), &w).unwrap();
        assert!((a[4].value - 505.0).abs() < 1e-9);
    }

    #[test]
    fn jump_points_are_lattice_values_below_target() {
        let w = Weights::preset("sqrt2-sqrt3").unwrap();
        let ws = w.surds().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for target in [10.0, 55.5, 400.0] {
            let t = jump_below(ws, target, &mut rng);
            assert!(t.to_f64() <= target + 1e-9);
            // t = m_1 + m_2 sqrt2 + m_3 sqrt3 with integer coefficients >= 1
            for r in [1u64, 2, 3] {
                let c = t.coefficient(r);
                assert!(c.is_integer() && c >= num_rational::BigRational::from_integer(1.into()));
            }
        }
    }

    #[test]
    fn jump_grid_is_deterministic() {
        let w = Weights::preset("golden").unwrap();
        let c = cfg(GridKind::JumpAligned);
        assert_eq!(build_grid(&c, &w).unwrap(), build_grid(&c, &w).unwrap());
        let other = SweepConfig { seed: 1, ..c.clone() };
        assert_ne!(build_grid(&c, &w).unwrap(), build_grid(&other, &w).unwrap());
    }
}
