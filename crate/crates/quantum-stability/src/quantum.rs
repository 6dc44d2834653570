//! Small quantum cohomology of ℙ^{n-1} at a parameter `τ ∈ H²`.
//!
//! The quantum product is `h^a ⋆ h^b = h^{a+b}` for `a + b < n` and
//! `e^τ h^{a+b-n}` otherwise. Multiplication by the first Chern class
//! `n·h` is the Euler operator `𝓔`, whose eigenvalues are
//! `u_j = n ζ^j e^{τ/n}` with `ζ = e^{2πi/n}`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::khomology::ComplexClass;
use crate::{Error, Result};

/// Rank and quantum parameter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuantumParams {
    n: usize,
    tau: Complex64,
}

impl QuantumParams {
    /// Validates `n >= 2`.
    pub fn new(n: usize, tau: Complex64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(alloc::format!("n must be at least 2, got {n}")));
        }
        if !(tau.re.is_finite() && tau.im.is_finite()) {
            return Err(Error::InvalidArgument("tau must be finite".into()));
        }
        Ok(Self { n, tau })
    }

    /// Rank `n`; the space is ℙ^{n-1}.
    pub fn n(&self) -> usize {
        self.n
    }

    /// The parameter `τ`.
    pub fn tau(&self) -> Complex64 {
        self.tau
    }

    /// The same rank at another parameter.
    pub fn with_tau(&self, tau: Complex64) -> Self {
        Self { n: self.n, tau }
    }
}

/// Eigenvalues, idempotents and normalized idempotents of `⋆_τ`.
#[derive(Clone, Debug)]
pub struct SemisimpleData {
    /// `u_j = n ζ^j e^{τ/n}` in canonical order.
    pub eigenvalues: Vec<Complex64>,
    /// Idempotents `e_j` with `e_j ⋆ e_j = e_j` and `𝓔 e_j = u_j e_j`.
    pub idempotents: Vec<ComplexClass>,
    /// `Ψ_j = e_j / sqrt((e_j, e_j))` with the principal square root.
    pub normalized: Vec<ComplexClass>,
}

fn check_rank(c: &ComplexClass, n: usize) -> Result<()> {
    if c.n() != n {
        return Err(Error::DimensionMismatch { left: n, right: c.n() });
    }
    Ok(())
}

/// The quantum product `a ⋆_τ b`.
pub fn qmul(a: &ComplexClass, b: &ComplexClass, p: &QuantumParams) -> Result<ComplexClass> {
    let n = p.n;
    check_rank(a, n)?;
    check_rank(b, n)?;
    let q = p.tau.exp();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (i, x) in a.coeffs().iter().enumerate() {
        for (j, y) in b.coeffs().iter().enumerate() {
            let k = i + j;
            if k < n {
                out[k] += x * y;
            } else {
                out[k - n] += q * x * y;
            }
        }
    }
    ComplexClass::from_coeffs(out)
}

/// Matrix of `h ⋆_τ` acting on coefficient vectors: ones on the
/// subdiagonal and `e^τ` in the top-right corner.
pub fn hyperplane_matrix(p: &QuantumParams) -> DMatrix<Complex64> {
    let n = p.n;
    let mut m = DMatrix::zeros(n, n);
    for a in 1..n {
        m[(a, a - 1)] = Complex64::new(1.0, 0.0);
    }
    m[(0, n - 1)] += p.tau.exp();
    m
}

/// The Euler operator `𝓔_τ = c_1 ⋆_τ = n · (h ⋆_τ)`.
pub fn euler_mult_matrix(p: &QuantumParams) -> DMatrix<Complex64> {
    hyperplane_matrix(p) * Complex64::new(p.n as f64, 0.0)
}

/// Classical multiplication by `c_1 = n h`, the nilpotent matrix `ρ`.
pub fn rho_matrix(n: usize) -> DMatrix<Complex64> {
    let mut m = DMatrix::zeros(n, n);
    for a in 1..n {
        m[(a, a - 1)] = Complex64::new(n as f64, 0.0);
    }
    m
}

/// `ζ^j = e^{2πij/n}`.
pub fn root_of_unity(n: usize, j: i64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * (j.rem_euclid(n as i64) as f64) / n as f64)
}

/// The eigenvalue `u_j = n ζ^j e^{τ/n}`.
pub fn eigenvalue(p: &QuantumParams, j: usize) -> Complex64 {
    root_of_unity(p.n, j as i64) * (p.tau / p.n as f64).exp() * p.n as f64
}

/// All eigenvalues in canonical order `j = 0, …, n-1`.
pub fn eigenvalues(p: &QuantumParams) -> Vec<Complex64> {
    (0..p.n).map(|j| eigenvalue(p, j)).collect()
}

/// Classical Poincaré pairing `∫ a ∪ b`.
pub fn poincare_pairing(a: &ComplexClass, b: &ComplexClass) -> Result<Complex64> {
    Ok(a.cup(b)?.integrate())
}

/// Idempotent basis of `⋆_τ` and its Poincaré normalization.
pub fn idempotents(p: &QuantumParams) -> Result<SemisimpleData> {
    let n = p.n;
    let us = eigenvalues(p);
    let mut idempotents = Vec::with_capacity(n);
    let mut normalized = Vec::with_capacity(n);
    for u in &us {
        let lambda = u / n as f64;
        let inv = lambda.inv();
        let v = ComplexClass::from_coeffs((0..n).map(|k| inv.powu(k as u32)).collect())?;
        let sq = qmul(&v, &v, p)?;
        let scale = sq.coeffs()[0] / v.coeffs()[0];
        if scale.norm() == 0.0 || !scale.is_finite() {
            return Err(Error::Numerical("degenerate idempotent eigenvector".into()));
        }
        let e = v.scale(&scale.inv());
        let norm = poincare_pairing(&e, &e)?.sqrt();
        if norm.norm() == 0.0 {
            return Err(Error::Numerical("idempotent with vanishing Poincaré norm".into()));
        }
        normalized.push(e.scale(&norm.inv()));
        idempotents.push(e);
    }
    Ok(SemisimpleData { eigenvalues: us, idempotents, normalized })
}

/// Diagonal entries `p - (n-1)/2` of the grading operator `μ`.
pub fn grading_diagonal(n: usize) -> Vec<f64> {
    (0..n).map(|p| p as f64 - (n as f64 - 1.0) / 2.0).collect()
}

/// The grading operator `μ` as a diagonal matrix.
pub fn grading_matrix(n: usize) -> DMatrix<f64> {
    DMatrix::from_diagonal(&nalgebra::DVector::from_vec(grading_diagonal(n)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn class(v: &[Complex64]) -> ComplexClass {
        ComplexClass::from_coeffs(v.to_vec()).unwrap()
    }

    fn close(a: &ComplexClass, b: &ComplexClass, tol: f64) -> bool {
        a.coeffs().iter().zip(b.coeffs()).all(|(x, y)| (x - y).norm() <= tol * (1.0 + y.norm()))
    }

    /// Determinant by cofactor-free Gaussian elimination, an oracle
    /// independent of nalgebra's eigen machinery.
    fn det(mut m: Vec<Vec<Complex64>>) -> Complex64 {
        let n = m.len();
        let mut d = c(1.0, 0.0);
        for col in 0..n {
            let piv = (col..n).max_by(|&a, &b| m[a][col].norm().total_cmp(&m[b][col].norm())).unwrap();
            if m[piv][col].norm() == 0.0 {
                return c(0.0, 0.0);
            }
            if piv != col {
                m.swap(piv, col);
                d = -d;
            }
            d *= m[col][col];
            for r in col + 1..n {
                let f = m[r][col] / m[col][col];
                for k in col..n {
                    let v = m[col][k];
                    m[r][k] -= f * v;
                }
            }
        }
        d
    }

    #[test]
    fn product_rule_examples() {
        let p = QuantumParams::new(3, c(0.0, 0.0)).unwrap();
        let h = class(&[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let h2 = class(&[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(qmul(&h, &h2, &p).unwrap(), class(&[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]));
        assert_eq!(qmul(&h, &h, &p).unwrap(), h2);
        let tau = c(0.4, 1.1);
        let p2 = QuantumParams::new(2, tau).unwrap();
        let h = class(&[c(0.0, 0.0), c(1.0, 0.0)]);
        let sq = qmul(&h, &h, &p2).unwrap();
        assert!((sq.coeffs()[0] - tau.exp()).norm() < 1e-15);
    }

    #[test]
    fn euler_matrix_examples() {
        let m = euler_mult_matrix(&QuantumParams::new(2, c(0.0, 0.0)).unwrap());
        assert_eq!(m[(0, 1)], c(2.0, 0.0));
        assert_eq!(m[(1, 0)], c(2.0, 0.0));
        let m = euler_mult_matrix(&QuantumParams::new(3, c(2f64.ln(), 0.0)).unwrap());
        assert!((m[(0, 2)] - c(6.0, 0.0)).norm() < 1e-14);
        assert_eq!(m[(2, 1)], c(3.0, 0.0));
    }

    #[test]
    fn eigenvalue_examples() {
        let u = eigenvalues(&QuantumParams::new(2, c(0.0, 0.0)).unwrap());
        assert!((u[0] - c(2.0, 0.0)).norm() < 1e-15 && (u[1] + c(2.0, 0.0)).norm() < 1e-15);
        let tau = c(0.0, 1.5 * PI);
        let u = eigenvalues(&QuantumParams::new(3, tau).unwrap());
        assert!((u[0] - c(0.0, 3.0)).norm() < 1e-14);
    }

    #[test]
    fn idempotents_of_p1() {
        let s = idempotents(&QuantumParams::new(2, c(0.0, 0.0)).unwrap()).unwrap();
        assert!(close(&s.idempotents[0], &class(&[c(0.5, 0.0), c(0.5, 0.0)]), 1e-15));
        assert!(close(&s.idempotents[1], &class(&[c(0.5, 0.0), c(-0.5, 0.0)]), 1e-15));
        let pair = poincare_pairing(&s.idempotents[0], &s.idempotents[0]).unwrap();
        assert!((pair - c(0.5, 0.0)).norm() < 1e-15);
        let r = 2f64.sqrt().recip();
        assert!(close(&s.normalized[0], &class(&[c(r, 0.0), c(r, 0.0)]), 1e-15));
    }

    #[test]
    fn grading_examples() {
        assert_eq!(grading_diagonal(2), vec![-0.5, 0.5]);
        assert_eq!(grading_diagonal(3), vec![-1.0, 0.0, 1.0]);
        assert_eq!(grading_matrix(5).trace(), 0.0);
    }

    fn arb_tau() -> impl Strategy<Value = Complex64> {
        (-3.0f64..3.0, -12.0f64..12.0).prop_map(|(a, b)| c(a, b))
    }

    fn arb_class(n: usize) -> impl Strategy<Value = ComplexClass> {
        proptest::collection::vec((-2.0f64..2.0, -2.0f64..2.0), n)
            .prop_map(|v| ComplexClass::from_coeffs(v.into_iter().map(|(a, b)| c(a, b)).collect()).unwrap())
    }

    proptest! {
        #[test]
        fn qmul_is_commutative_associative_unital(
            tau in arb_tau(),
            (a, b, d) in (2usize..7).prop_flat_map(|n| (arb_class(n), arb_class(n), arb_class(n))),
        ) {
            let p = QuantumParams::new(a.n(), tau).unwrap();
            let ab = qmul(&a, &b, &p).unwrap();
            prop_assert!(close(&ab, &qmul(&b, &a, &p).unwrap(), 1e-12));
            let lhs = qmul(&ab, &d, &p).unwrap();
            let rhs = qmul(&a, &qmul(&b, &d, &p).unwrap(), &p).unwrap();
            let scale = 1.0 + p.tau().exp().norm().powi(2);
            prop_assert!(close(&lhs, &rhs, 1e-12 * scale));
            let one = ComplexClass::one(a.n());
            prop_assert!(close(&qmul(&one, &a, &p).unwrap(), &a, 1e-15));
        }

        #[test]
        fn eigenvalues_annihilate_characteristic_polynomial(n in 2usize..7, tau in arb_tau()) {
            let p = QuantumParams::new(n, tau).unwrap();
            let e = euler_mult_matrix(&p);
            for u in eigenvalues(&p) {
                let rows: Vec<Vec<Complex64>> = (0..n)
                    .map(|a| (0..n).map(|b| e[(a, b)] - if a == b { u } else { c(0.0, 0.0) }).collect())
                    .collect();
                let scale = u.norm().powi(n as i32);
                prop_assert!(det(rows).norm() <= 1e-9 * scale);
            }
        }

        #[test]
        fn idempotents_form_orthogonal_partition(n in 2usize..7, tau in arb_tau()) {
            let p = QuantumParams::new(n, tau).unwrap();
            let s = idempotents(&p).unwrap();
            let mut sum = ComplexClass::zero(n);
            let e = euler_mult_matrix(&p);
            for (j, ej) in s.idempotents.iter().enumerate() {
                sum = sum.add(ej).unwrap();
                for (k, ek) in s.idempotents.iter().enumerate() {
                    let prod = qmul(ej, ek, &p).unwrap();
                    let target = if j == k { ej.clone() } else { ComplexClass::zero(n) };
                    prop_assert!(close(&prod, &target, 1e-10));
                }
                let v = nalgebra::DVector::from_column_slice(ej.coeffs());
                let ev = &e * &v - &v * s.eigenvalues[j];
                prop_assert!(ev.norm() <= 1e-10 * (1.0 + s.eigenvalues[j].norm()));
                prop_assert!(s.normalized[j].integrate().norm() > 1e-6);
            }
            prop_assert!(close(&sum, &ComplexClass::one(n), 1e-10));
        }

        #[test]
        fn eigenvalues_closed_under_zeta(n in 2usize..7, tau in arb_tau()) {
            let p = QuantumParams::new(n, tau).unwrap();
            let u = eigenvalues(&p);
            let z = root_of_unity(n, 1);
            for j in 0..n {
                prop_assert!((u[j] * z - u[(j + 1) % n]).norm() < 1e-12 * u[j].norm());
            }
        }
    }
}
