//! Flat sections of the quantum connection of ℙ^{n-1}
//! `∇_{z∂z} = z∂z - (1/z) 𝓔_τ + μ` and quantum central charges.
//!
//! The canonical fundamental solution is `L(z) = S(z) z^{-μ} z^{ρ}` with
//! `S(z) = I + Σ_k S_k z^{-k}`. Three evaluators are provided:
//!
//! * [`SeriesSolution`]: the truncated series in double precision, valid for
//!   large `|z|`;
//! * [`FlatFrame`]: adaptive Runge–Kutta continuation of the series along a
//!   path in ℂ*, with residual certificates;
//! * [`PreciseCharges`]: the series summed in multiprecision, for central
//!   charges at small radius where cancellations defeat double precision.

mod asymptotics;
mod frame;
mod precise;
mod series;

use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::khomology::KClass;
use crate::quantum::{self, QuantumParams};
use crate::Result;

pub use asymptotics::{asymptotic_limit, asymptotic_limit_log, AsymptoticEstimate};
pub use frame::{flat_frame, geometric_grid, FlatFrame, FramePoint};
pub use precise::PreciseCharges;
pub use series::{s_series, s_series_with_order, SeriesSolution};

/// Anything that can evaluate quantum central charges `Z^τ(V)` at radius `r`.
pub trait ChargeEvaluator {
    /// Rank `n`.
    fn n(&self) -> usize;

    /// `Z^τ(V)` for every class at the positive real point `r`.
    fn charges(&self, classes: &[KClass], r: f64) -> Result<Vec<Complex64>>;

    /// `ln Z^τ(V)` with principal argument, robust to over- and underflow.
    fn log_charges(&self, classes: &[KClass], r: f64) -> Result<Vec<Complex64>> {
        Ok(self.charges(classes, r)?.into_iter().map(|z| z.ln()).collect())
    }
}

/// Largest eigenvalue modulus `n |e^{τ/n}|`.
pub fn max_eigenvalue_modulus(p: &QuantumParams) -> f64 {
    quantum::eigenvalues(p).iter().map(|u| u.norm()).fold(0.0, f64::max)
}

/// Coefficient matrix `A(z) = (1/z) 𝓔_τ - μ` of the system `z Y' = A(z) Y`.
pub fn ode_matrix(p: &QuantumParams, z: Complex64) -> DMatrix<Complex64> {
    let n = p.n();
    let mut a = quantum::euler_mult_matrix(p) / z;
    for (i, m) in quantum::grading_diagonal(n).into_iter().enumerate() {
        a[(i, i)] -= m;
    }
    a
}

/// The factor `z^{-μ} z^{ρ}` on the branch given by `log_z`.
pub fn fundamental_factor(n: usize, log_z: Complex64) -> DMatrix<Complex64> {
    let rho = quantum::rho_matrix(n);
    let mut z_rho = DMatrix::<Complex64>::identity(n, n);
    let mut term = DMatrix::<Complex64>::identity(n, n);
    for m in 1..n {
        term = &term * &rho * (log_z / m as f64);
        z_rho += &term;
    }
    let mut out = z_rho;
    for (i, mu) in quantum::grading_diagonal(n).into_iter().enumerate() {
        let s = (-log_z * mu).exp();
        for j in 0..n {
            out[(i, j)] *= s;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fundamental_factor_at_one_is_identity() {
        let f = fundamental_factor(4, Complex64::new(0.0, 0.0));
        assert!((f - DMatrix::identity(4, 4)).norm() < 1e-15);
    }

    #[test]
    fn fundamental_factor_solves_grading_equation() {
        // F = z^{-μ} z^{ρ} satisfies dF/d(log z) = -μ F + F ρ.
        let n = 3;
        let lz = Complex64::new(0.3, 0.2);
        let h = 1e-5;
        let d = (fundamental_factor(n, lz + h) - fundamental_factor(n, lz - h)) / Complex64::new(2.0 * h, 0.0);
        let f = fundamental_factor(n, lz);
        let mut mu = DMatrix::<Complex64>::zeros(n, n);
        for (i, m) in quantum::grading_diagonal(n).into_iter().enumerate() {
            mu[(i, i)] = Complex64::new(m, 0.0);
        }
        let rho = quantum::rho_matrix(n);
        let expected = -&mu * &f + &f * &rho;
        assert!((d - expected).norm() < 1e-8);
    }
}
