//! The series `S(z) = I + Σ_k S_k z^{-k}` in double precision.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{fundamental_factor, max_eigenvalue_modulus};
use crate::quantum::{self, QuantumParams};
use crate::{Error, Result};

const MAX_ORDER: usize = 4000;

/// Truncated series solution `S(z) = I + Σ_{k=1}^{K} S_k z^{-k}`.
#[derive(Clone, Debug)]
pub struct SeriesSolution {
    params: QuantumParams,
    terms: Vec<DMatrix<Complex64>>,
    z0: Complex64,
    tail: f64,
    resonance_residual: f64,
}

/// Solves `(μ_a - μ_b - k) S_k[a][b] = (𝓔 S_{k-1} - S_{k-1} ρ)[a][b]`.
/// Resonant entries (`μ_a - μ_b = k`) carry the integration constants
/// `(-τ)^k / k!`; their right-hand side must vanish.
fn next_term(
    params: &QuantumParams,
    e: &DMatrix<Complex64>,
    rho: &DMatrix<Complex64>,
    prev: &DMatrix<Complex64>,
    k: usize,
    resonant_value: Complex64,
    worst: &mut f64,
) -> Result<DMatrix<Complex64>> {
    let n = params.n();
    let rhs = e * prev - prev * rho;
    let scale = rhs.iter().map(|x| x.norm()).fold(prev.iter().map(|x| x.norm()).fold(0.0, f64::max), f64::max);
    let mut out = DMatrix::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            let d = a as i64 - b as i64 - k as i64;
            if d == 0 {
                let r = rhs[(a, b)].norm();
                *worst = worst.max(if scale > 0.0 { r / scale } else { r });
                if r > 1e-18 * scale {
                    return Err(Error::ResonanceViolation { order: k, row: a, col: b, residual: r });
                }
                out[(a, b)] = resonant_value;
            } else {
                out[(a, b)] = rhs[(a, b)] / d as f64;
            }
        }
    }
    Ok(out)
}

fn build(params: &QuantumParams, tol: Option<f64>, order: usize) -> Result<SeriesSolution> {
    let n = params.n();
    let e = quantum::euler_mult_matrix(params);
    let rho = quantum::rho_matrix(n);
    let z0 = Complex64::new(10.0 * max_eigenvalue_modulus(params), 0.0);
    let mut terms = vec![DMatrix::<Complex64>::identity(n, n)];
    let mut resonant = Complex64::new(1.0, 0.0);
    let mut worst = 0.0f64;
    let mut tail = f64::INFINITY;
    for k in 1..=order {
        resonant = resonant * (-params.tau()) / k as f64;
        let prev = terms.last().ok_or_else(|| Error::Numerical("empty series".into()))?;
        let next = next_term(params, &e, &rho, prev, k, resonant, &mut worst)?;
        tail = next.norm() * z0.norm().powi(-(k as i32));
        terms.push(next);
        if let Some(t) = tol {
            if tail < t && k >= n {
                break;
            }
            if k == order {
                return Err(Error::Numerical("series did not reach the requested tolerance".into()));
            }
        }
    }
    Ok(SeriesSolution { params: *params, terms, z0, tail, resonance_residual: worst })
}

/// Series solution with the order chosen so that the tail estimate
/// `‖S_K‖ |z0|^{-K}` at `z0 = 10 max|u_j|` is below `tol`.
pub fn s_series(params: &QuantumParams, tol: f64) -> Result<SeriesSolution> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tol must be positive".into()));
    }
    build(params, Some(tol), MAX_ORDER)
}

/// Series solution with a fixed number of terms.
pub fn s_series_with_order(params: &QuantumParams, order: usize) -> Result<SeriesSolution> {
    build(params, None, order)
}

impl SeriesSolution {
    /// Quantum parameters.
    pub fn params(&self) -> &QuantumParams {
        &self.params
    }

    /// Coefficients `S_0 = I, S_1, …, S_K`.
    pub fn terms(&self) -> &[DMatrix<Complex64>] {
        &self.terms
    }

    /// Truncation order `K`.
    pub fn order(&self) -> usize {
        self.terms.len() - 1
    }

    /// Anchor point `z0 = 10 max|u_j|`.
    pub fn z0(&self) -> Complex64 {
        self.z0
    }

    /// Tail estimate `‖S_K‖ |z0|^{-K}`.
    pub fn tail_estimate(&self) -> f64 {
        self.tail
    }

    /// Largest relative right-hand side met at a resonant entry.
    pub fn resonance_residual(&self) -> f64 {
        self.resonance_residual
    }

    /// `S(z)` by Horner evaluation in `1/z`.
    pub fn s_at(&self, z: Complex64) -> DMatrix<Complex64> {
        let w = z.inv();
        let n = self.params.n();
        let mut acc = DMatrix::<Complex64>::zeros(n, n);
        for t in self.terms.iter().rev() {
            acc = acc * w + t;
        }
        acc
    }

    /// The canonical fundamental solution `S(z) z^{-μ} z^{ρ}` on the branch
    /// `log_z`.
    pub fn fundamental_solution(&self, z: Complex64, log_z: Complex64) -> DMatrix<Complex64> {
        self.s_at(z) * fundamental_factor(self.params.n(), log_z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connection::ode_matrix;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn leading_term_is_identity() {
        let s = s_series(&QuantumParams::new(3, c(0.2, 0.1)).unwrap(), 1e-14).unwrap();
        assert_eq!(s.terms()[0], DMatrix::identity(3, 3));
        assert!(s.tail_estimate() < 1e-14);
    }

    #[test]
    fn p1_resonances_vanish_at_order_one() {
        let s = s_series_with_order(&QuantumParams::new(2, c(0.0, 0.0)).unwrap(), 1).unwrap();
        assert_eq!(s.resonance_residual(), 0.0);
        assert_eq!(s.terms()[1][(1, 0)], c(0.0, 0.0));
    }

    #[test]
    fn canonical_solution_is_flat_at_anchor() {
        let p = QuantumParams::new(3, c(0.3, 0.2)).unwrap();
        let s = s_series(&p, 1e-15).unwrap();
        let z = s.z0();
        let h = 1e-3 * z.norm();
        let y = |zz: Complex64| s.fundamental_solution(zz, zz.ln());
        let eight = c(8.0, 0.0);
        let d = (y(z - 2.0 * h) - y(z - h) * eight + y(z + h) * eight - y(z + 2.0 * h)) / c(12.0 * h, 0.0);
        let alpha = nalgebra::DVector::from_vec(vec![c(0.3, -1.0), c(2.0, 0.5), c(-0.7, 0.1)]);
        let lhs = &d * &alpha * z;
        let rhs = ode_matrix(&p, z) * y(z) * &alpha;
        assert!((lhs - &rhs).norm() / rhs.norm() < 1e-10);
    }

    proptest! {
        #[test]
        fn resonant_right_hand_sides_vanish(n in 2usize..7, re in -2.0f64..2.0, im in -10.0f64..10.0) {
            let s = s_series(&QuantumParams::new(n, c(re, im)).unwrap(), 1e-12).unwrap();
            prop_assert!(s.resonance_residual() <= 1e-18);
        }
    }
}
