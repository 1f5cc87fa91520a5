//! Adaptive Gauss-Kronrod (7/15) quadrature for real and complex integrands.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("quadrature did not converge: error estimate {estimate:e} after {intervals} intervals")]
pub struct QuadratureError {
    pub estimate: f64,
    pub intervals: usize,
}

/// Default cap on the number of subintervals.
pub const MAX_INTERVALS: usize = 20_000;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for i in 0..7 {
        let x = h * XGK[i];
        let s = f(c - x) + f(c + x);
        kronrod += s * WGK[i];
        if i % 2 == 1 {
            gauss += s * WG[i / 2];
        }
    }
    let k = kronrod * h;
    let g = gauss * h;
    (k, (k - g).norm())
}

/// `int_a^b f` to absolute accuracy `tol`.
pub fn integrate_complex<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, tol: f64) -> Result<Complex64, QuadratureError> {
    integrate_complex_with_limit(f, a, b, tol, MAX_INTERVALS)
}

pub fn integrate_complex_with_limit<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
    max_intervals: usize,
) -> Result<Complex64, QuadratureError> {
    if a == b {
        return Ok(Complex64::new(0.0, 0.0));
    }
    // (a, b, value, error), refined by splitting the worst interval
    let (v, e) = gk15(&f, a, b);
    let mut intervals = vec![(a, b, v, e)];
    loop {
        let total_err: f64 = intervals.iter().map(|x| x.3).sum();
        if total_err <= tol {
            break;
        }
        if intervals.len() >= max_intervals {
            return Err(QuadratureError { estimate: total_err, intervals: intervals.len() });
        }
        let worst = intervals
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .expect("non-empty");
        let (lo, hi, _, _) = intervals.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&f, lo, mid);
        let (v2, e2) = gk15(&f, mid, hi);
        intervals.push((lo, mid, v1, e1));
        intervals.push((mid, hi, v2, e2));
    }
    // sum small contributions first
    intervals.sort_by(|x, y| x.2.norm().total_cmp(&y.2.norm()));
    Ok(intervals.iter().fold(Complex64::new(0.0, 0.0), |acc, x| acc + x.2))
}

pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64, QuadratureError> {
    integrate_complex(|x| Complex64::new(f(x), 0.0), a, b, tol).map(|z| z.re)
}
