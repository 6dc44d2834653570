//! Small-radius limits of rescaled central charges.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::{Error, Result};

const EXTRAPOLATION_POINTS: usize = 6;
const SLOPE_THRESHOLD: f64 = 0.02;

/// Extrapolated limit of `g(r) = e^{u/r} (2πr)^{-(n-1)/2} Z(r)` as `r -> 0⁺`.
#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticEstimate {
    /// Extrapolated value of `g(0⁺)`.
    pub limit: Complex64,
    /// Difference between extrapolations of consecutive orders, relative to
    /// the limit.
    pub spread: f64,
    /// Fitted coefficient of `1/r` in `ln |g(r)|`; near zero for the correct
    /// exponential rate.
    pub slope: f64,
    /// Whether `|g(r) - limit|` decreases monotonically as `r` decreases
    /// over the extrapolation window.
    pub monotone: bool,
    /// Whether the spread is below `1e-3`.
    pub converged: bool,
}

/// Neville extrapolation of the interpolating polynomial to `x = 0`.
fn neville_at_zero(xs: &[f64], ys: &[Complex64]) -> Complex64 {
    let mut p: Vec<Complex64> = ys.to_vec();
    let m = xs.len();
    for level in 1..m {
        for i in 0..m - level {
            let (xi, xj) = (xs[i], xs[i + level]);
            p[i] = (p[i] * xj - p[i + 1] * xi) / (xj - xi);
        }
    }
    p[0]
}

/// Least-squares fit of `y ≈ a + b/r + c r + d r²`; returns `b`.
fn inverse_slope(rs: &[f64], ys: &[f64]) -> f64 {
    let basis = |r: f64| [1.0, 1.0 / r, r, r * r];
    let k = if rs.len() >= 5 { 4 } else { 2 };
    let mut ata = nalgebra::DMatrix::<f64>::zeros(k, k);
    let mut aty = nalgebra::DVector::<f64>::zeros(k);
    for (&r, &y) in rs.iter().zip(ys) {
        let b = basis(r);
        for i in 0..k {
            aty[i] += b[i] * y;
            for j in 0..k {
                ata[(i, j)] += b[i] * b[j];
            }
        }
    }
    ata.lu().solve(&aty).map(|s| s[1]).unwrap_or(f64::NAN)
}

/// Same as [`asymptotic_limit`] with samples given as `(r, ln Z(r))`, which
/// avoids overflow when `Z` spans hundreds of orders of magnitude.
pub fn asymptotic_limit_log(samples: &[(f64, Complex64)], u: Complex64, n: usize) -> Result<AsymptoticEstimate> {
    if samples.len() < 3 {
        return Err(Error::InvalidArgument("need at least three samples".into()));
    }
    if samples.windows(2).any(|w| !(w[1].0 < w[0].0)) || samples.iter().any(|s| !(s.0 > 0.0)) {
        return Err(Error::InvalidArgument("radii must be positive and strictly decreasing".into()));
    }
    let half = (n as f64 - 1.0) / 2.0;
    let logs: Vec<Complex64> =
        samples.iter().map(|&(r, lz)| lz + u / r - Complex64::new(half * (2.0 * PI * r).ln(), 0.0)).collect();
    let rs: Vec<f64> = samples.iter().map(|s| s.0).collect();
    let slope = inverse_slope(&rs, &logs.iter().map(|l| l.re).collect::<Vec<_>>());
    if !slope.is_finite() || slope.abs() > SLOPE_THRESHOLD {
        return Err(Error::WrongRate { slope });
    }
    let g: Vec<Complex64> = logs.iter().map(|l| l.exp()).collect();
    let m = EXTRAPOLATION_POINTS.min(g.len());
    let start = g.len() - m;
    let limit = neville_at_zero(&rs[start..], &g[start..]);
    let lower = neville_at_zero(&rs[start + 1..], &g[start + 1..]);
    let spread = (limit - lower).norm() / limit.norm().max(1e-300);
    let dist: Vec<f64> = g[start..].iter().map(|x| (x - limit).norm()).collect();
    let monotone = dist.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-9));
    Ok(AsymptoticEstimate { limit, spread, slope, monotone, converged: spread < 1e-3 })
}

/// Extrapolated limit of `e^{u/r} (2πr)^{-(n-1)/2} Z(r)` from samples
/// `(r, Z(r))` with strictly decreasing `r`.
///
/// Fails with [`Error::WrongRate`] when `ln|g(r)|` carries a `1/r` term,
/// meaning `u` is not the exponential rate of the object.
pub fn asymptotic_limit(samples: &[(f64, Complex64)], u: Complex64, n: usize) -> Result<AsymptoticEstimate> {
    let logs: Vec<(f64, Complex64)> = samples.iter().map(|&(r, z)| (r, z.ln())).collect();
    asymptotic_limit_log(&logs, u, n)
}
