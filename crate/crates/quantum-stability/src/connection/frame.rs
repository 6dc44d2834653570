//! Numerical continuation of the canonical fundamental solution along a
//! path in ℂ* with an adaptive Dormand–Prince 5(4) scheme.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{max_eigenvalue_modulus, ode_matrix, s_series, ChargeEvaluator};
use crate::khomology::{gamma_chern, ComplexClass, KClass};
use crate::quantum::QuantumParams;
use crate::{Error, Result};

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const ERR: [f64; 7] =
    [71.0 / 57600.0, 0.0, -71.0 / 16695.0, 71.0 / 1920.0, -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0];
const MAX_STEPS: usize = 2_000_000;

/// Frame value at one path point.
#[derive(Clone, Debug)]
pub struct FramePoint {
    /// The point `z`.
    pub z: Complex64,
    /// Continuously tracked `log z`.
    pub log_z: Complex64,
    /// Matrix whose columns are flat sections, equal to `S(z) z^{-μ} z^{ρ}`.
    pub value: DMatrix<Complex64>,
}

/// The canonical fundamental solution sampled along a path.
#[derive(Clone, Debug)]
pub struct FlatFrame {
    params: QuantumParams,
    tol: f64,
    points: Vec<FramePoint>,
}

/// Integrates `z Y' = A(z) Y` along the straight segment `za -> zb`.
pub(crate) fn integrate_segment(
    params: &QuantumParams,
    za: Complex64,
    zb: Complex64,
    y0: &DMatrix<Complex64>,
    tol: f64,
) -> Result<DMatrix<Complex64>> {
    let dz = zb - za;
    let rhs = |s: f64, y: &DMatrix<Complex64>| -> DMatrix<Complex64> {
        let z = za + dz * s;
        ode_matrix(params, z) * y * (dz / z)
    };
    let col_norms = |y: &DMatrix<Complex64>| -> Vec<f64> { y.column_iter().map(|c| max_modulus(c.iter())).collect() };
    let mut s = 0.0f64;
    let mut y = y0.clone();
    let stiffness = max_eigenvalue_modulus(params) * dz.norm() / za.norm().min(zb.norm()).powi(2)
        + dz.norm() / za.norm().min(zb.norm());
    let mut h = (0.1 / stiffness.max(1e-3)).min(1.0);
    let mut k1 = rhs(0.0, &y);
    let mut steps = 0usize;
    while s < 1.0 {
        steps += 1;
        if steps > MAX_STEPS {
            let z = za + dz * s;
            return Err(Error::TooCloseToSingularity { re: z.re, im: z.im });
        }
        h = h.min(1.0 - s);
        let mut ks: Vec<DMatrix<Complex64>> = Vec::with_capacity(7);
        ks.push(k1.clone());
        for stage in 1..7 {
            let mut arg = y.clone();
            for (j, kj) in ks.iter().enumerate() {
                let a = A[stage][j];
                if a != 0.0 {
                    arg += kj * Complex64::new(a * h, 0.0);
                }
            }
            ks.push(rhs(s + C[stage] * h, &arg));
        }
        let mut y_new = y.clone();
        for (j, kj) in ks.iter().enumerate().take(6) {
            let b = A[6][j];
            if b != 0.0 {
                y_new += kj * Complex64::new(b * h, 0.0);
            }
        }
        let mut err = DMatrix::<Complex64>::zeros(y.nrows(), y.ncols());
        for (j, kj) in ks.iter().enumerate() {
            if ERR[j] != 0.0 {
                err += kj * Complex64::new(ERR[j] * h, 0.0);
            }
        }
        if y_new.iter().any(|v| !v.is_finite()) {
            let z = za + dz * s;
            return Err(Error::TooCloseToSingularity { re: z.re, im: z.im });
        }
        let scale_old = col_norms(&y);
        let scale_new = col_norms(&y_new);
        let mut ratio = 0.0f64;
        for (j, e) in err.column_iter().enumerate() {
            let sc = tol * scale_old[j].max(scale_new[j]) + 1e-300;
            ratio = ratio.max(max_modulus(e.iter()) / sc);
        }
        if !ratio.is_finite() {
            h *= 0.1;
        } else if ratio <= 1.0 {
            s += h;
            y = y_new;
            k1 = ks.pop().unwrap_or_else(|| rhs(s, &y));
            let factor = if ratio == 0.0 { 5.0 } else { (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0) };
            h *= factor;
        } else {
            h *= (0.9 * ratio.powf(-0.25)).clamp(0.1, 0.9);
        }
        if h < 1e-14 {
            let z = za + dz * s;
            return Err(Error::TooCloseToSingularity { re: z.re, im: z.im });
        }
    }
    Ok(y)
}

fn max_modulus<'a>(it: impl Iterator<Item = &'a Complex64>) -> f64 {
    it.fold(0.0, |m, v| m.max(v.norm()))
}

/// Rejects paths that pass through the origin or wind around it, and
/// returns the continuously tracked `log z` at every point.
fn track_logarithm(path: &[Complex64]) -> Result<Vec<Complex64>> {
    let first = *path.first().ok_or_else(|| Error::InvalidArgument("empty path".into()))?;
    if first.norm() == 0.0 || !first.is_finite() {
        return Err(Error::PathThroughOrigin);
    }
    let mut logs = Vec::with_capacity(path.len());
    logs.push(first.ln());
    let (mut lo, mut hi) = (first.arg(), first.arg());
    for w in path.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b.norm() == 0.0 || !b.is_finite() {
            return Err(Error::PathThroughOrigin);
        }
        let d = b - a;
        if d.norm() > 0.0 {
            let t = (-(a.conj() * d).re / d.norm_sqr()).clamp(0.0, 1.0);
            let closest = (a + d * t).norm();
            if closest <= 1e-14 * a.norm().max(b.norm()) {
                return Err(Error::PathThroughOrigin);
            }
        }
        let prev = *logs.last().unwrap_or(&first);
        let next = prev + (b / a).ln();
        lo = lo.min(next.im);
        hi = hi.max(next.im);
        if hi - lo >= 2.0 * PI {
            return Err(Error::PathThroughOrigin);
        }
        logs.push(next);
    }
    Ok(logs)
}

/// Seeds the canonical solution from the series at `path[0]` and integrates
/// it along the polygonal path at relative tolerance `tol`.
///
/// The first point must satisfy `|z| >= 10 max|u_j|`.
pub fn flat_frame(params: &QuantumParams, path: &[Complex64], tol: f64) -> Result<FlatFrame> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tol must be positive".into()));
    }
    let logs = track_logarithm(path)?;
    let z0 = path[0];
    let bound = 10.0 * max_eigenvalue_modulus(params);
    if z0.norm() < bound * (1.0 - 1e-12) {
        return Err(Error::Precondition(format!("path must start at |z| >= {bound}")));
    }
    let series = s_series(params, 1e-17)?;
    let mut y = series.fundamental_solution(z0, logs[0]);
    let mut points = Vec::with_capacity(path.len());
    points.push(FramePoint { z: z0, log_z: logs[0], value: y.clone() });
    let local = tol / 10.0;
    for (i, w) in path.windows(2).enumerate() {
        y = integrate_segment(params, w[0], w[1], &y, local)?;
        points.push(FramePoint { z: w[1], log_z: logs[i + 1], value: y.clone() });
    }
    Ok(FlatFrame { params: *params, tol, points })
}

/// Geometric grid `start, start·ratio, …` down to and including `end`.
pub fn geometric_grid(start: f64, end: f64, ratio: f64) -> Result<Vec<f64>> {
    if !(start > end && end > 0.0 && ratio > 0.0 && ratio < 1.0) {
        return Err(Error::InvalidArgument("grid must decrease towards a positive end".into()));
    }
    let mut out = Vec::new();
    let mut r = start;
    while r > end * (1.0 + 1e-12) {
        out.push(r);
        r *= ratio;
    }
    out.push(end);
    Ok(out)
}

impl FlatFrame {
    /// Quantum parameters.
    pub fn params(&self) -> &QuantumParams {
        &self.params
    }

    /// Tolerance the frame was built with.
    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Sampled points in path order.
    pub fn points(&self) -> &[FramePoint] {
        &self.points
    }

    /// The sample at `z`, matched to relative accuracy `1e-12`.
    pub fn locate(&self, z: Complex64) -> Result<&FramePoint> {
        self.points.iter().find(|p| (p.z - z).norm() <= 1e-12 * z.norm().max(1e-300)).ok_or(Error::NotOnPath)
    }

    /// `Φ^τ(α) = (2π)^{-(n-1)/2} S(z) z^{-μ} z^{ρ} α` at a path point.
    pub fn phi(&self, alpha: &ComplexClass, z: Complex64) -> Result<ComplexClass> {
        let n = self.params.n();
        if alpha.n() != n {
            return Err(Error::DimensionMismatch { left: n, right: alpha.n() });
        }
        let p = self.locate(z)?;
        let v = &p.value * DVector::from_column_slice(alpha.coeffs());
        let norm = (2.0 * PI).powf(-(n as f64 - 1.0) / 2.0);
        ComplexClass::from_coeffs(v.iter().map(|x| x * norm).collect())
    }

    /// `Z^τ(V) = (2πr)^{(n-1)/2} ∫ Φ^τ(Γ̂ · Ch(V))` at a positive real path point.
    pub fn central_charge(&self, v: &KClass, r: f64) -> Result<Complex64> {
        let n = self.params.n();
        let phi = self.phi(&gamma_chern(v), Complex64::new(r, 0.0))?;
        Ok(phi.integrate() * (2.0 * PI * r).powf((n as f64 - 1.0) / 2.0))
    }

    /// Relative ODE residuals `‖z Y' - A(z) Y‖ / ‖Y‖` at interior points.
    ///
    /// `Y'` is a five-point finite difference of short probe integrations
    /// started from the stored frame value.
    pub fn residuals(&self) -> Result<Vec<f64>> {
        let umax = max_eigenvalue_modulus(&self.params);
        let probe_tol = 1e-13;
        let mut out = Vec::new();
        for i in 1..self.points.len().saturating_sub(1) {
            let p = &self.points[i];
            let z = p.z;
            let tangent = {
                let d = self.points[i + 1].z - self.points[i - 1].z;
                if d.norm() > 0.0 {
                    d / d.norm()
                } else {
                    Complex64::new(1.0, 0.0)
                }
            };
            let h = tangent * 1e-3 * z.norm().min(z.norm_sqr() / umax.max(1e-300));
            let at = |m: f64| integrate_segment(&self.params, z, z + h * m, &p.value, probe_tol);
            let (ym2, ym1, yp1, yp2) = (at(-2.0)?, at(-1.0)?, at(1.0)?, at(2.0)?);
            let deriv = (ym2 - ym1 * Complex64::new(8.0, 0.0) + yp1 * Complex64::new(8.0, 0.0) - yp2) / (h * 12.0);
            let res = deriv * z - ode_matrix(&self.params, z) * &p.value;
            out.push(res.norm() / p.value.norm());
        }
        Ok(out)
    }

    /// Determinants of the sampled frames.
    pub fn determinants(&self) -> Vec<Complex64> {
        self.points.iter().map(|p| p.value.determinant()).collect()
    }
}

impl ChargeEvaluator for FlatFrame {
    fn n(&self) -> usize {
        self.params.n()
    }

    fn charges(&self, classes: &[KClass], r: f64) -> Result<Vec<Complex64>> {
        classes.iter().map(|v| self.central_charge(v, r)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connection::SeriesSolution;
    use crate::khomology::chern_character;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn real_path(p: &QuantumParams, end: f64) -> Vec<Complex64> {
        let start = 10.0 * max_eigenvalue_modulus(p);
        geometric_grid(start, end, 0.85).unwrap().into_iter().map(|r| c(r, 0.0)).collect()
    }

    #[test]
    fn frame_matches_series_at_moderate_radius() {
        let p = QuantumParams::new(3, c(0.3, 0.2)).unwrap();
        let path = real_path(&p, 8.0);
        let frame = flat_frame(&p, &path, 1e-11).unwrap();
        let last = frame.points().last().unwrap();
        let series: SeriesSolution = crate::connection::s_series(&p, 1e-18).unwrap();
        let expected = series.fundamental_solution(last.z, last.log_z);
        assert!((&last.value - &expected).norm() / expected.norm() < 1e-9);
    }

    #[test]
    fn out_and_back_returns_start_frame() {
        let p = QuantumParams::new(3, c(0.0, 0.0)).unwrap();
        let y0 = DMatrix::<Complex64>::identity(3, 3);
        let a = c(30.0, 0.0);
        let b = c(2.0, 1.0);
        let there = integrate_segment(&p, a, b, &y0, 1e-12).unwrap();
        let back = integrate_segment(&p, b, a, &there, 1e-12).unwrap();
        assert!((back - y0).norm() < 1e-8);
    }

    #[test]
    fn residual_certificate_on_real_path() {
        let p = QuantumParams::new(2, c(0.0, 0.0)).unwrap();
        let frame = flat_frame(&p, &real_path(&p, 0.1), 1e-10).unwrap();
        let worst = frame.residuals().unwrap().into_iter().fold(0.0, f64::max);
        assert!(worst < 1e-8, "residual {worst}");
        assert!(frame.determinants().iter().all(|d| d.norm() > 0.0 && d.is_finite()));
        assert!(frame.points().iter().all(|q| q.log_z.im == 0.0));
    }

    #[test]
    fn phi_is_linear() {
        let p = QuantumParams::new(3, c(0.1, -0.4)).unwrap();
        let path = real_path(&p, 2.0);
        let frame = flat_frame(&p, &path, 1e-10).unwrap();
        let z = *path.last().unwrap();
        let a = ComplexClass::from_coeffs(alloc::vec![c(1.0, 0.0), c(0.5, 2.0), c(-1.0, 0.0)]).unwrap();
        let b = ComplexClass::from_coeffs(alloc::vec![c(0.0, 1.0), c(3.0, 0.0), c(0.25, 0.5)]).unwrap();
        let lhs = frame.phi(&a.add(&b).unwrap(), z).unwrap();
        let rhs = frame.phi(&a, z).unwrap().add(&frame.phi(&b, z).unwrap()).unwrap();
        for (x, y) in lhs.coeffs().iter().zip(rhs.coeffs()) {
            assert!((x - y).norm() < 1e-10 * (1.0 + y.norm()));
        }
        let zero = frame.phi(&ComplexClass::zero(3), z).unwrap();
        assert!(zero.coeffs().iter().all(|x| x.norm() == 0.0));
        assert_eq!(frame.phi(&a, c(123.0, 0.0)), Err(Error::NotOnPath));
    }

    #[test]
    fn central_charge_is_additive() {
        let p = QuantumParams::new(2, c(0.0, 0.0)).unwrap();
        let path = real_path(&p, 1.0);
        let frame = flat_frame(&p, &path, 1e-10).unwrap();
        let o = chern_character(2, 0);
        let o1 = chern_character(2, 1);
        let sum = KClass::new("sum", o.ch().add(o1.ch()).unwrap());
        let z = frame.central_charge(&sum, 1.0).unwrap();
        let parts = frame.central_charge(&o, 1.0).unwrap() + frame.central_charge(&o1, 1.0).unwrap();
        assert!((z - parts).norm() < 1e-10 * parts.norm());
    }

    #[test]
    fn rejects_paths_through_or_around_origin() {
        let p = QuantumParams::new(2, c(0.0, 0.0)).unwrap();
        let through = [c(20.0, 0.0), c(-20.0, 0.0)];
        assert_eq!(flat_frame(&p, &through, 1e-8).unwrap_err(), Error::PathThroughOrigin);
        let around: Vec<Complex64> = (0..=8).map(|k| Complex64::from_polar(20.0, 2.0 * PI * k as f64 / 8.0)).collect();
        assert_eq!(flat_frame(&p, &around, 1e-8).unwrap_err(), Error::PathThroughOrigin);
    }

    #[test]
    fn step_size_underflow_is_reported() {
        let p = QuantumParams::new(2, c(0.0, 0.0)).unwrap();
        let y0 = DMatrix::<Complex64>::identity(2, 2);
        let err = integrate_segment(&p, c(1.0, 0.0), c(1e-6, 0.0), &y0, 1e-10).unwrap_err();
        assert!(matches!(err, Error::TooCloseToSingularity { .. }));
    }
}
