//! Central charges from the series `S(z)` summed in multiprecision.
//!
//! At small radius the entries of `S(r)` reach `e^{max|u|/r}` while the
//! charges of subdominant objects decay like `e^{-max|u|/r}`, so double
//! precision cannot resolve them. The working precision grows like
//! `2 max|u| / r` bits.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{LN_2, LOG2_E};

use astro_float::{BigFloat, Consts};
use num_complex::Complex64;

use super::{max_eigenvalue_modulus, ChargeEvaluator};
use crate::khomology::KClass;
use crate::mp::{self, MpComplex, RM};
use crate::quantum::QuantumParams;
use crate::{Error, Result};

const GUARD_BITS: usize = 128;
const MAX_ORDER: usize = 200_000;

/// Multiprecision evaluator of `Z^τ(V)` on the positive real axis.
#[derive(Clone, Debug)]
pub struct PreciseCharges {
    params: QuantumParams,
    r_min: f64,
    max_prec: usize,
    /// Last row of `S_k` for `k = 0, …, K`.
    rows: Vec<Vec<MpComplex>>,
    /// `log2` of the largest entry of each row.
    row_log2: Vec<Option<i64>>,
}

fn bits_for(umax: f64, n: usize, r: f64) -> usize {
    let raw = (2.0 * umax / r) * LOG2_E;
    let bits = raw.ceil() as usize + GUARD_BITS + 16 * n;
    bits.div_ceil(64) * 64
}

impl PreciseCharges {
    /// Precomputes enough series terms for every `r >= r_min`.
    pub fn new(params: &QuantumParams, r_min: f64) -> Result<Self> {
        if !(r_min > 0.0 && r_min.is_finite()) {
            return Err(Error::InvalidArgument("r_min must be positive".into()));
        }
        let n = params.n();
        let umax = max_eigenvalue_modulus(params);
        let p = bits_for(umax, n, r_min);
        let mut cc = mp::consts()?;
        let nn = BigFloat::from_u64(n as u64, p);
        let tau = MpComplex::from_c64(params.tau(), p);
        let q = tau.exp(p, &mut cc);
        let neg_tau = tau.neg();
        let log2_x = -r_min.log2();

        let mut current: Vec<Vec<MpComplex>> = (0..n)
            .map(|a| {
                (0..n).map(|b| MpComplex::from_c64(Complex64::new(if a == b { 1.0 } else { 0.0 }, 0.0), p)).collect()
            })
            .collect();
        let mut rows = vec![current[n - 1].clone()];
        let mut row_log2 = vec![Some(0i64)];
        let mut resonant = MpComplex::from_c64(Complex64::new(1.0, 0.0), p);
        let mut peak = 0.0f64;
        let mut small_run = 0usize;
        for k in 1..=MAX_ORDER {
            resonant = resonant.mul(&neg_tau, p).div_real(&BigFloat::from_u64(k as u64, p), p);
            let mut next = vec![vec![MpComplex::zero(p); n]; n];
            for a in 0..n {
                for b in 0..n {
                    let d = a as i64 - b as i64 - k as i64;
                    let up = if a >= 1 { current[a - 1][b].clone() } else { q.mul(&current[n - 1][b], p) };
                    let rhs = if b + 1 < n { up.sub(&current[a][b + 1], p) } else { up };
                    if d == 0 {
                        if !rhs.is_zero() {
                            return Err(Error::ResonanceViolation {
                                order: k,
                                row: a,
                                col: b,
                                residual: rhs.to_c64().norm(),
                            });
                        }
                        next[a][b] = resonant.clone();
                    } else {
                        let denom = BigFloat::from_i64(d, p);
                        next[a][b] = rhs.mul_real(&nn, p).div_real(&denom, p);
                    }
                }
            }
            current = next;
            let lg = current[n - 1].iter().filter_map(MpComplex::log2_abs).max();
            rows.push(current[n - 1].clone());
            row_log2.push(lg);
            let term = lg.map(|e| e as f64 + k as f64 * log2_x);
            if let Some(t) = term {
                peak = peak.max(t);
                if k as f64 > 2.0 * umax / r_min && t < peak - p as f64 - 16.0 {
                    small_run += 1;
                } else {
                    small_run = 0;
                }
            }
            if small_run >= 4 {
                return Ok(Self { params: *params, r_min, max_prec: p, rows, row_log2 });
            }
        }
        Err(Error::Numerical(format!("series did not converge at r = {r_min}")))
    }

    /// Quantum parameters.
    pub fn params(&self) -> &QuantumParams {
        &self.params
    }

    /// Smallest supported radius.
    pub fn r_min(&self) -> f64 {
        self.r_min
    }

    /// Number of stored series terms.
    pub fn order(&self) -> usize {
        self.rows.len() - 1
    }

    /// Working precision in bits used at radius `r`.
    pub fn precision_at(&self, r: f64) -> usize {
        bits_for(max_eigenvalue_modulus(&self.params), self.params.n(), r).min(self.max_prec)
    }

    /// Last row of `S(r)`, summed until the terms drop below the working
    /// precision.
    fn last_row(&self, r: f64, p: usize) -> Result<Vec<MpComplex>> {
        let n = self.params.n();
        let x = BigFloat::from_f64(1.0, p).div(&BigFloat::from_f64(r, p), p, RM);
        let log2_x = -r.log2();
        let mut xk = BigFloat::from_f64(1.0, p);
        let mut acc = vec![MpComplex::zero(p); n];
        let mut peak = f64::NEG_INFINITY;
        let mut small_run = 0usize;
        let umax = max_eigenvalue_modulus(&self.params);
        for (k, row) in self.rows.iter().enumerate() {
            if k > 0 {
                xk = xk.mul(&x, p, RM);
            }
            for (slot, entry) in acc.iter_mut().zip(row) {
                *slot = slot.add(&entry.mul_real(&xk, p), p);
            }
            if let Some(e) = self.row_log2[k] {
                let t = e as f64 + k as f64 * log2_x;
                peak = peak.max(t);
                if k as f64 > 2.0 * umax / r && t < peak - p as f64 - 16.0 {
                    small_run += 1;
                } else {
                    small_run = 0;
                }
            }
            if small_run >= 4 {
                return Ok(acc);
            }
        }
        Err(Error::Precondition(format!("r = {r} is below the precomputed range (r_min = {})", self.r_min)))
    }

    fn evaluate(&self, classes: &[KClass], r: f64) -> Result<Vec<MpComplex>> {
        let n = self.params.n();
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::InvalidArgument("r must be positive".into()));
        }
        for v in classes {
            if v.n() != n {
                return Err(Error::DimensionMismatch { left: n, right: v.n() });
            }
        }
        if r < self.r_min * (1.0 - 1e-12) {
            return Err(Error::Precondition(format!("r = {r} is below r_min = {}", self.r_min)));
        }
        let p = self.precision_at(r);
        let mut cc: Consts = mp::consts()?;
        let row = self.last_row(r, p)?;
        let gamma = mp::gamma_class(n, p, &mut cc);
        let two_pi = cc.pi(p, RM).mul(&BigFloat::from_u64(2, p), p, RM);
        let rr = BigFloat::from_f64(r, p);
        let log_r = rr.ln(p, RM, &mut cc);
        let nn = BigFloat::from_u64(n as u64, p);
        let powers: Vec<BigFloat> = (0..n).map(|e| rr.powi(n - 1 - e, p, RM)).collect();
        let mut out = Vec::with_capacity(classes.len());
        for v in classes {
            // Ch(V): coefficient p of ch(V) times (2π i)^p.
            let mut ch = Vec::with_capacity(n);
            let mut scale = BigFloat::from_f64(1.0, p);
            for (deg, c) in v.ch().coeffs().iter().enumerate() {
                let val = MpComplex::from_real(mp::from_rational(c, p, &mut cc).mul(&scale, p, RM), p);
                let rotated = match deg % 4 {
                    0 => val,
                    1 => val.mul_i(),
                    2 => val.neg(),
                    _ => val.mul_i().neg(),
                };
                ch.push(rotated);
                scale = scale.mul(&two_pi, p, RM);
            }
            let mut g = vec![MpComplex::zero(p); n];
            for (i, gi) in gamma.iter().enumerate() {
                for (j, cj) in ch.iter().enumerate().take(n - i) {
                    g[i + j] = g[i + j].add(&cj.mul_real(gi, p), p);
                }
            }
            // r^ρ g = Σ_m (log r)^m / m! ρ^m g with (ρ g)_a = n g_{a-1}.
            let mut w = g.clone();
            let mut term = g;
            for m in 1..n {
                let factor = log_r.mul(&nn, p, RM).div(&BigFloat::from_u64(m as u64, p), p, RM);
                let mut shifted = vec![MpComplex::zero(p); n];
                for a in 1..n {
                    shifted[a] = term[a - 1].mul_real(&factor, p);
                }
                term = shifted;
                for a in 0..n {
                    w[a] = w[a].add(&term[a], p);
                }
            }
            let mut z = MpComplex::zero(p);
            for e in 0..n {
                z = z.add(&row[e].mul(&w[e], p).mul_real(&powers[e], p), p);
            }
            out.push(z);
        }
        Ok(out)
    }
}

fn scaled_log(z: &MpComplex) -> Complex64 {
    let Some(e) = z.log2_abs() else {
        return Complex64::new(f64::NEG_INFINITY, 0.0);
    };
    let scaled = Complex64::new(mp::to_f64_scaled(&z.re, -e), mp::to_f64_scaled(&z.im, -e));
    let l = scaled.ln();
    Complex64::new(l.re + e as f64 * LN_2, l.im)
}

impl ChargeEvaluator for PreciseCharges {
    fn n(&self) -> usize {
        self.params.n()
    }

    fn charges(&self, classes: &[KClass], r: f64) -> Result<Vec<Complex64>> {
        Ok(self.evaluate(classes, r)?.iter().map(MpComplex::to_c64).collect())
    }

    fn log_charges(&self, classes: &[KClass], r: f64) -> Result<Vec<Complex64>> {
        Ok(self.evaluate(classes, r)?.iter().map(scaled_log).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connection::{flat_frame, geometric_grid};
    use crate::khomology::chern_character;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn agrees_with_flat_frame_at_moderate_radius() {
        let p = QuantumParams::new(3, c(0.3, 0.2)).unwrap();
        let path: Vec<Complex64> = geometric_grid(10.0 * max_eigenvalue_modulus(&p), 1.0, 0.8)
            .unwrap()
            .into_iter()
            .map(|r| c(r, 0.0))
            .collect();
        let frame = flat_frame(&p, &path, 1e-12).unwrap();
        let precise = PreciseCharges::new(&p, 0.5).unwrap();
        let classes: Vec<KClass> = (0..3).map(|j| chern_character(3, j)).collect();
        let a = frame.charges(&classes, 1.0).unwrap();
        let b = precise.charges(&classes, 1.0).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).norm() < 1e-8 * y.norm(), "{x} vs {y}");
        }
        let logs = precise.log_charges(&classes, 1.0).unwrap();
        for (l, y) in logs.iter().zip(&b) {
            assert!((l.exp() - y).norm() < 1e-12 * y.norm());
        }
    }

    #[test]
    fn rejects_radius_below_range() {
        let p = QuantumParams::new(2, c(0.0, 0.0)).unwrap();
        let precise = PreciseCharges::new(&p, 0.5).unwrap();
        let err = precise.charges(&[chern_character(2, 0)], 0.1).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn log_charges_survive_underflow() {
        let p = QuantumParams::new(2, c(0.0, 0.0)).unwrap();
        let precise = PreciseCharges::new(&p, 0.004).unwrap();
        let o = chern_character(2, 0);
        let om1 = chern_character(2, -1);
        let v = KClass::new("difference", om1.ch().sub(o.ch()).unwrap());
        let logs = precise.log_charges(&[v.clone(), o], 0.004).unwrap();
        assert!(logs[0].re.is_finite() && logs[1].re.is_finite());
        assert!(logs[0].re > 400.0 && logs[1].re < -400.0);
    }
}
