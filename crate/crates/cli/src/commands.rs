//! The subcommands. Each builds a sorted table; work over grid points runs on
//! a rayon pool and is gathered in grid order.

use anyhow::Context;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use simplex_lattice::counting::{Simplex, SimplexCounter};
use simplex_lattice::diophantine::{continued_fraction, hl_partial_quotient_bound, ApproximabilityProfile};
use simplex_lattice::fourier::{
    fourier_coefficient_decomposed, fourier_coefficient_n, partial_fraction_check, simplex_ft_closed,
    simplex_ft_decomposed, simplex_ft_quadrature, symmetrization_identity,
};
use simplex_lattice::latticesums::{balanced_scale, s2_row_with, spencer_sums, Envelope};
use simplex_lattice::{Real, Surd, Weights};

use crate::config::{ConfigError, GridKind, SweepConfig};
use crate::fit::{fit, Model};
use crate::grid::build_grid;
use crate::table::{Cell, Table};

fn pool(jobs: usize) -> anyhow::Result<rayon::ThreadPool> {
    Ok(rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?)
}

fn parallel_map<T, R, F>(jobs: usize, items: &[T], f: F) -> anyhow::Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(usize, &T) -> anyhow::Result<R> + Sync + Send,
{
    pool(jobs)?.install(|| items.par_iter().enumerate().map(|(i, x)| f(i, x)).collect())
}

/// Per-item generator, independent of scheduling order.
fn item_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64 + 1);
    rng
}

fn counter(cfg: &SweepConfig, w: Weights) -> SimplexCounter {
    SimplexCounter::with_precision(w, cfg.precision_bits)
}

/// A random shift in `U(delta)` with thousandths as coordinates.
fn random_shift(rng: &mut impl Rng, d: usize, delta: f64) -> Vec<Real> {
    let lo = (delta * 1000.0).ceil() as i64;
    let hi = 1000 - lo;
    (0..d).map(|_| Real::Exact(Surd::from_ratio(rng.gen_range(lo..=hi), 1000))).collect()
}

pub fn count(cfg: &SweepConfig) -> anyhow::Result<Table> {
    let w = cfg.weight_vector()?;
    if w.has_rational_incline() == Some(true) {
        eprintln!("warning: degenerate incline: {w} has a rational weight ratio; error terms are not meaningful");
    }
    let grid = build_grid(cfg, &w)?;
    let c = counter(cfg, w.clone());
    let rows = parallel_map(cfg.jobs, &grid, |i, p| {
        let t = p.real();
        let mut out = Vec::new();
        for simplex in [Simplex::Open, Simplex::Closed] {
            let r = c.error_report(&t, simplex).with_context(|| format!("at t = {}", p.t))?;
            let invariance = if simplex == Simplex::Open && cfg.shifts > 0 {
                let mut rng = item_rng(cfg.seed, i);
                let shifts: Vec<Vec<Real>> = (0..cfg.shifts).map(|_| random_shift(&mut rng, w.dim(), cfg.delta)).collect();
                let inv = c.invariance_check(&t, &shifts).with_context(|| format!("at t = {}", p.t))?;
                inv.holds.to_string()
            } else {
                String::new()
            };
            out.push(vec![
                Cell::from(p.value),
                Cell::from(p.t.to_string()),
                Cell::from(if simplex == Simplex::Open { "open" } else { "closed" }),
                Cell::from(r.exact_count),
                Cell::from(r.count_left),
                Cell::from(r.count_right),
                Cell::from(r.leading.to_f64()),
                Cell::from(r.error_left.to_f64()),
                Cell::from(r.error_right.to_f64()),
                Cell::from(r.rrr.to_f64()),
                Cell::from(r.tau),
                Cell::from(invariance),
            ]);
        }
        Ok(out)
    })?;
    let mut table = Table::new(&[
        "t",
        "t_exact",
        "simplex",
        "exact_count",
        "count_left",
        "count_right",
        "leading",
        "error_left",
        "error_right",
        "rrr",
        "tau",
        "invariance_holds",
    ]);
    for r in rows.into_iter().flatten() {
        table.push(r);
    }
    Ok(table)
}

pub fn error_sweep(cfg: &SweepConfig) -> anyhow::Result<Table> {
    let w = cfg.irrational_weights()?;
    let d = w.dim();
    let grid = build_grid(cfg, &w)?;
    let c = counter(cfg, w);
    let rows = parallel_map(cfg.jobs, &grid, |_, p| {
        let t = p.real();
        let open = c.error_report(&t, Simplex::Open).with_context(|| format!("at t = {}", p.t))?;
        let closed = c.error_report(&t, Simplex::Closed).with_context(|| format!("at t = {}", p.t))?;
        let log_t = p.value.ln();
        let rrr = open.rrr.to_f64();
        Ok(vec![
            Cell::from(p.value),
            Cell::from(p.t.to_string()),
            Cell::from(open.exact_count),
            Cell::from(open.leading.to_f64()),
            Cell::from(rrr),
            Cell::from(closed.exact_count),
            Cell::from(closed.leading.to_f64()),
            Cell::from(closed.rrr.to_f64()),
            Cell::from(open.tau),
            Cell::from(rrr / log_t),
            Cell::from(rrr / log_t.powi(d as i32)),
        ])
    })?;
    let mut table = Table::new(&[
        "t",
        "t_exact",
        "count_open",
        "leading_open",
        "rrr_open",
        "count_closed",
        "leading_closed",
        "rrr_closed",
        "tau",
        "rrr_open_over_log",
        "rrr_open_over_log_d",
    ]);
    for r in rows {
        table.push(r);
    }
    let t = table.floats("t");
    for target in ["rrr_open", "rrr_closed"] {
        let y = table.floats(target);
        for model in [Model::Power, Model::PowerLog, Model::PolyLog] {
            match fit(model, target, &t, &y) {
                Ok(f) => table.fits.push(f),
                Err(e) => eprintln!("warning: {target} {model:?} fit skipped: {e}"),
            }
        }
    }
    Ok(table)
}

pub fn dioph(cfg: &SweepConfig) -> anyhow::Result<Table> {
    let w = cfg.weight_vector()?;
    let d = w.dim();
    if d < 2 {
        return Err(ConfigError("incline profiles need at least two weights".into()).into());
    }
    let rows: Vec<usize> = (0..d).collect();
    let out = parallel_map(cfg.jobs, &rows, |_, &j| {
        let row = w.incline_row(j);
        let profile = ApproximabilityProfile::scan(&row, cfg.scan);
        let min = profile.min_with_kappa(cfg.kappa);
        let kappa_hat = profile.kappa_estimate().map(|k| k.kappa_hat).unwrap_or(f64::NAN);
        let mut lines = Vec::new();
        for l in (0..d).filter(|&l| l != j) {
            let theta = w.incline(j, l);
            let cf = continued_fraction(&theta, 20)?;
            let terms: Vec<String> = cf.a.iter().map(BigInt::to_string).collect();
            let hl = match hl_partial_quotient_bound(&theta, cfg.t_max, 1.0) {
                Ok(v) => v.to_string(),
                Err(e) => format!("n/a ({e})"),
            };
            lines.push(vec![
                Cell::from(j),
                Cell::from(l),
                Cell::from(theta.to_f64()),
                Cell::from(theta.to_string()),
                Cell::from(terms.join(" ")),
                Cell::from(hl),
                Cell::from(cfg.scan),
                Cell::from(min.value),
                Cell::from(min.argmin),
                Cell::from(kappa_hat),
                Cell::from(profile.records.len()),
                Cell::from(min.degenerate),
            ]);
        }
        Ok(lines)
    })?;
    let mut table = Table::new(&[
        "row",
        "col",
        "theta",
        "theta_exact",
        "partial_quotients",
        "hl_quotient_sum",
        "scan",
        "row_min",
        "row_argmin",
        "row_kappa_hat",
        "row_records",
        "degenerate",
    ]);
    for r in out.into_iter().flatten() {
        table.push(r);
    }
    Ok(table)
}

struct Check {
    suite: &'static str,
    d: usize,
    point: String,
    lhs: (f64, f64),
    rhs: (f64, f64),
    pass: bool,
}

fn rel_err(lhs: (f64, f64), rhs: (f64, f64)) -> (f64, f64) {
    let abs = ((lhs.0 - rhs.0).powi(2) + (lhs.1 - rhs.1).powi(2)).sqrt();
    let scale = (rhs.0 * rhs.0 + rhs.1 * rhs.1).sqrt().max((lhs.0 * lhs.0 + lhs.1 * lhs.1).sqrt()).max(1e-9);
    (abs, abs / scale)
}

fn random_nondiagonal(rng: &mut impl Rng, d: usize) -> Vec<f64> {
    loop {
        let y: Vec<f64> = (0..d).map(|_| (rng.gen_range(-12.0f64..12.0) * 100.0).round() / 100.0).collect();
        let ok = y.iter().all(|v| v.abs() >= 0.5)
            && (0..d).all(|j| (j + 1..d).all(|l| (y[j] - y[l]).abs() >= 0.5));
        if ok {
            return y;
        }
    }
}

fn random_distinct_rationals(rng: &mut impl Rng, n: usize) -> Vec<BigRational> {
    loop {
        let y: Vec<BigRational> = (0..n)
            .map(|_| {
                let num = rng.gen_range(1i64..60) * if rng.gen_bool(0.5) { 1 } else { -1 };
                BigRational::new(num.into(), rng.gen_range(1i64..10).into())
            })
            .collect();
        if (0..n).all(|j| (j + 1..n).all(|l| y[j] != y[l])) {
            return y;
        }
    }
}

fn fmt_vec<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

fn ratio_f64(q: &BigRational) -> f64 {
    simplex_lattice::HighPrec::from_rational(q, 64).to_f64()
}

/// Cheap suites run at least this many instances.
pub const MIN_EXACT_INSTANCES: usize = 50;

/// Runs the identity suites; the second value counts failures. Quadrature
/// suites use `points` instances per dimension.
pub fn fourier_check(cfg: &SweepConfig) -> anyhow::Result<(Table, usize)> {
    let n = cfg.points;
    let n_exact = n.max(MIN_EXACT_INSTANCES);
    let coefficient_weights: Vec<Weights> = match (&cfg.preset, &cfg.weights) {
        (None, None) => vec![Weights::parse("sqrt2")?, Weights::preset("golden")?, Weights::preset("sqrt2-sqrt3")?],
        _ => {
            let w = cfg.irrational_weights()?;
            if w.dim() > 4 {
                return Err(ConfigError("Fourier checks support d <= 4".into()).into());
            }
            vec![w]
        }
    };
    let mut jobs: Vec<(&'static str, usize, usize)> = Vec::new();
    for d in 1..=3 {
        for i in 0..n {
            jobs.push(("closed-vs-quadrature", d, i));
            jobs.push(("decomposition", d, i));
        }
    }
    for i in 0..n_exact {
        jobs.push(("symmetrization", 0, i));
        jobs.push(("partial-fraction", 0, i));
    }
    for (k, _) in coefficient_weights.iter().enumerate() {
        for i in 0..n_exact {
            jobs.push(("coefficient", k, i));
        }
    }
    let checks = parallel_map(cfg.jobs, &jobs, |idx, &(suite, d, _)| -> anyhow::Result<Check> {
        let mut rng = item_rng(cfg.seed, idx);
        Ok(match suite {
            "closed-vs-quadrature" | "decomposition" => {
                let y = random_nondiagonal(&mut rng, d);
                let value = if suite == "decomposition" { simplex_ft_decomposed(&y)?.total() } else { simplex_ft_closed(&y)?.value };
                let quad = simplex_ft_quadrature(&y, 1e-11)?;
                let lhs = (value.re, value.im);
                let rhs = (quad.re, quad.im);
                Check { suite, d, point: fmt_vec(&y), lhs, rhs, pass: rel_err(lhs, rhs).1 <= 1e-6 }
            }
            "symmetrization" => {
                let size = rng.gen_range(1..=4);
                let y = random_distinct_rationals(&mut rng, size);
                let power = size + rng.gen_range(0..=4);
                let id = symmetrization_identity(&y, power)?;
                Check {
                    suite,
                    d: size,
                    point: format!("{} n={power}", fmt_vec(&y)),
                    lhs: (ratio_f64(&id.lhs), 0.0),
                    rhs: (ratio_f64(&id.rhs), 0.0),
                    pass: id.holds(),
                }
            }
            "partial-fraction" => {
                let size = rng.gen_range(1..=5);
                let mut y = random_distinct_rationals(&mut rng, size + 1);
                let z = y.pop().expect("size + 1 values");
                let id = partial_fraction_check(&z, &y)?;
                Check {
                    suite,
                    d: size,
                    point: format!("z={z} y={}", fmt_vec(&y)),
                    lhs: (ratio_f64(&id.lhs), 0.0),
                    rhs: (ratio_f64(&id.rhs), 0.0),
                    pass: id.holds(),
                }
            }
            _ => {
                let w = coefficient_weights[d].to_f64();
                let dim = w.len();
                let m: Vec<i64> = loop {
                    let m: Vec<i64> = (0..dim).map(|_| rng.gen_range(-5i64..=5)).collect();
                    if m.iter().any(|&x| x != 0) {
                        break m;
                    }
                };
                let t = (rng.gen_range(1.0f64..50.0) * 1000.0).round() / 1000.0;
                let direct = fourier_coefficient_n(&m, t, &w)?.value;
                let split = fourier_coefficient_decomposed(&m, t, &w)?.total();
                let lhs = (split.re, split.im);
                let rhs = (direct.re, direct.im);
                Check { suite, d: dim, point: format!("m={} t={t}", fmt_vec(&m)), lhs, rhs, pass: rel_err(lhs, rhs).1 <= 1e-9 }
            }
        })
    })?;
    let mut table = Table::new(&["suite", "d", "index", "point", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "abs_err", "rel_err", "pass"]);
    let mut failures = 0;
    for (k, c) in checks.into_iter().enumerate() {
        if !c.pass {
            failures += 1;
            eprintln!("identity failure: {} d={} at {}", c.suite, c.d, c.point);
        }
        let (abs, rel) = rel_err(c.lhs, c.rhs);
        table.push(vec![
            Cell::from(c.suite),
            Cell::from(c.d),
            Cell::from(jobs[k].2),
            Cell::from(c.point),
            Cell::from(c.lhs.0),
            Cell::from(c.lhs.1),
            Cell::from(c.rhs.0),
            Cell::from(c.rhs.1),
            Cell::from(abs),
            Cell::from(rel),
            Cell::from(c.pass),
        ]);
    }
    Ok((table, failures))
}

pub fn lattice_sum(cfg: &SweepConfig) -> anyhow::Result<Table> {
    let w = cfg.irrational_weights()?;
    if cfg.grid == GridKind::JumpAligned {
        return Err(ConfigError("lattice-sum uses a geometric or arithmetic grid".into()).into());
    }
    let d = w.dim();
    let grid = build_grid(cfg, &w)?;
    let c = counter(cfg, w.clone());
    let scan = cfg.scan.min(1 << 20);
    // one envelope per row at the configured kappa, from a profile scan
    let envelopes: Vec<Envelope> = (0..d)
        .map(|j| {
            let profile = ApproximabilityProfile::scan(&w.incline_row(j), scan);
            Envelope { kappa: cfg.kappa, c_kappa: profile.min_with_kappa(cfg.kappa).value }
        })
        .collect();
    if let Some(e) = envelopes.iter().find(|e| !(e.c_kappa > 0.0)) {
        return Err(ConfigError(format!("incline profile gives c_kappa = {}", e.c_kappa)).into());
    }
    let rows = parallel_map(cfg.jobs, &grid, |_, p| {
        let t_scale = balanced_scale(p.value, d, cfg.kappa).max(1.0);
        let mut s2 = Vec::with_capacity(d);
        let mut tail = 0.0;
        let mut m = 0;
        for (j, env) in envelopes.iter().enumerate() {
            let row = s2_row_with(&w.incline_row(j), t_scale, None, Some(*env))?;
            s2.push(row.value);
            tail += row.tail;
            m = row.m;
        }
        let rrr = c.error_report(&p.real(), Simplex::Open).with_context(|| format!("at t = {}", p.t))?.rrr.to_f64();
        Ok((p.value, t_scale, m, s2, tail, p.value.powi(d as i32 - 1) / t_scale, rrr))
    })?;
    // slack calibrated on the first decade of the grid
    let t0 = rows.first().map(|r| r.0).unwrap_or(1.0);
    let calibrated = rows
        .iter()
        .filter(|r| r.0 <= 10.0 * t0)
        .map(|r| (r.6 - r.3.iter().sum::<f64>() - r.4) / r.5)
        .fold(0.0, f64::max);
    let mut columns = vec!["t".to_string(), "T".into(), "M".into()];
    columns.extend((0..d).map(|j| format!("s2_row_{j}")));
    columns.extend(["s2_total", "tail", "smoothing", "bound", "calibrated_slack", "calibrated_bound", "rrr_open", "covered"].map(String::from));
    let mut table = Table { columns, rows: Vec::new(), fits: Vec::new() };
    for (t, t_scale, m, s2, tail, smoothing, rrr) in rows {
        let total: f64 = s2.iter().sum();
        let bound = total + tail + cfg.slack * smoothing;
        let cal_bound = total + tail + calibrated * smoothing;
        let mut row = vec![Cell::from(t), Cell::from(t_scale), Cell::from(m)];
        row.extend(s2.into_iter().map(Cell::from));
        row.extend([
            Cell::from(total),
            Cell::from(tail),
            Cell::from(smoothing),
            Cell::from(bound),
            Cell::from(calibrated),
            Cell::from(cal_bound),
            Cell::from(rrr),
            Cell::from(cal_bound >= rrr),
        ]);
        table.push(row);
    }
    Ok(table)
}

/// Spencer sums over an integer grid of `K` in `[t_min, t_max]`, with a
/// poly-log growth fit per incline row.
pub fn spencer(cfg: &SweepConfig) -> anyhow::Result<Table> {
    let w = cfg.irrational_weights()?;
    let d = w.dim();
    let mut ks: Vec<u64> = build_grid(&SweepConfig { grid: GridKind::Geometric, ..cfg.clone() }, &w)?
        .iter()
        .map(|p| p.value.round().max(1.0) as u64)
        .collect();
    ks.dedup();
    let rows: Vec<usize> = (0..d).collect();
    let sums = parallel_map(cfg.jobs, &rows, |_, &j| Ok(spencer_sums(&w.incline_row(j), &ks)?))?;
    let mut table = Table::new(&["row", "K", "spencer", "spencer_over_log_d"]);
    for (j, row) in sums.iter().enumerate() {
        for &(k, v) in row {
            table.push(vec![Cell::from(j), Cell::from(k), Cell::from(v), Cell::from(v / (k as f64).ln().powi(d as i32))]);
        }
        let kf: Vec<f64> = row.iter().map(|(k, _)| *k as f64).collect();
        let vf: Vec<f64> = row.iter().map(|(_, v)| *v).collect();
        match fit(Model::PolyLog, &format!("spencer_row_{j}"), &kf, &vf) {
            Ok(f) => table.fits.push(f),
            Err(e) => eprintln!("warning: row {j} fit skipped: {e}"),
        }
    }
    Ok(table)
}
