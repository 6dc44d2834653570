//! Thin multiprecision complex arithmetic on top of `astro-float`.

use alloc::string::ToString;
use alloc::vec::Vec;

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign, WORD_BIT_SIZE};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;

use crate::constants::{EULER_GAMMA, ZETA};
use crate::{Error, Result};

pub(crate) const RM: RoundingMode = RoundingMode::ToEven;

/// Multiplies `v` by `2^k` without intermediate overflow.
pub(crate) fn ldexp(mut v: f64, mut k: i64) -> f64 {
    let big = f64::from_bits((1023u64 + 1000) << 52);
    let small = f64::from_bits((1023u64 - 1000) << 52);
    while k > 1000 {
        v *= big;
        k -= 1000;
        if v.is_infinite() {
            return v;
        }
    }
    while k < -1000 {
        v *= small;
        k += 1000;
        if v == 0.0 {
            return v;
        }
    }
    v * f64::from_bits(((1023 + k) as u64) << 52)
}

/// `f64` approximation of a big float, truncated to the top mantissa word.
pub(crate) fn to_f64(x: &BigFloat) -> f64 {
    to_f64_scaled(x, 0)
}

/// `f64` approximation of `x · 2^shift`.
pub(crate) fn to_f64_scaled(x: &BigFloat, shift: i64) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    match x.as_raw_parts() {
        Some((m, _, sign, e, _)) => {
            let top = m.last().copied().unwrap_or(0);
            let v = ldexp(top as f64, i64::from(e) + shift - WORD_BIT_SIZE as i64);
            if sign == Sign::Neg {
                -v
            } else {
                v
            }
        }
        None => f64::NAN,
    }
}

/// Binary exponent of a big float, `None` for zero.
pub(crate) fn exponent(x: &BigFloat) -> Option<i64> {
    if x.is_zero() {
        None
    } else {
        x.exponent().map(i64::from)
    }
}

pub(crate) fn consts() -> Result<Consts> {
    Consts::new().map_err(|e| Error::Numerical(alloc::format!("multiprecision constants: {e:?}")))
}

pub(crate) fn from_bigint(v: &BigInt, p: usize, cc: &mut Consts) -> BigFloat {
    BigFloat::parse(&v.to_string(), Radix::Dec, p, RM, cc)
}

pub(crate) fn from_rational(v: &BigRational, p: usize, cc: &mut Consts) -> BigFloat {
    let num = from_bigint(v.numer(), p, cc);
    let den = from_bigint(v.denom(), p, cc);
    num.div(&den, p, RM)
}

/// Complex number with big-float parts.
#[derive(Clone, Debug)]
pub(crate) struct MpComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl MpComplex {
    pub fn zero(p: usize) -> Self {
        Self { re: BigFloat::from_f64(0.0, p), im: BigFloat::from_f64(0.0, p) }
    }

    pub fn from_real(re: BigFloat, p: usize) -> Self {
        Self { re, im: BigFloat::from_f64(0.0, p) }
    }

    pub fn from_c64(z: Complex64, p: usize) -> Self {
        Self { re: BigFloat::from_f64(z.re, p), im: BigFloat::from_f64(z.im, p) }
    }

    pub fn add(&self, o: &Self, p: usize) -> Self {
        Self { re: self.re.add(&o.re, p, RM), im: self.im.add(&o.im, p, RM) }
    }

    pub fn sub(&self, o: &Self, p: usize) -> Self {
        Self { re: self.re.sub(&o.re, p, RM), im: self.im.sub(&o.im, p, RM) }
    }

    pub fn mul(&self, o: &Self, p: usize) -> Self {
        let re = self.re.mul(&o.re, p, RM).sub(&self.im.mul(&o.im, p, RM), p, RM);
        let im = self.re.mul(&o.im, p, RM).add(&self.im.mul(&o.re, p, RM), p, RM);
        Self { re, im }
    }

    pub fn mul_real(&self, x: &BigFloat, p: usize) -> Self {
        Self { re: self.re.mul(x, p, RM), im: self.im.mul(x, p, RM) }
    }

    pub fn div_real(&self, x: &BigFloat, p: usize) -> Self {
        Self { re: self.re.div(x, p, RM), im: self.im.div(x, p, RM) }
    }

    pub fn neg(&self) -> Self {
        Self { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn mul_i(&self) -> Self {
        Self { re: self.im.neg(), im: self.re.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// `e^{self}`.
    pub fn exp(&self, p: usize, cc: &mut Consts) -> Self {
        let m = self.re.exp(p, RM, cc);
        Self { re: m.mul(&self.im.cos(p, RM, cc), p, RM), im: m.mul(&self.im.sin(p, RM, cc), p, RM) }
    }

    /// Approximate `log2 |self|`, `None` for zero.
    pub fn log2_abs(&self) -> Option<i64> {
        match (exponent(&self.re), exponent(&self.im)) {
            (None, None) => None,
            (a, b) => Some(a.unwrap_or(i64::MIN).max(b.unwrap_or(i64::MIN))),
        }
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(to_f64(&self.re), to_f64(&self.im))
    }
}

/// Coefficients of `Γ̂ = Γ(1 + h)^n` in multiprecision.
pub(crate) fn gamma_class(n: usize, p: usize, cc: &mut Consts) -> Vec<BigFloat> {
    let nn = BigFloat::from_u64(n as u64, p);
    let mut log = Vec::with_capacity(n);
    log.push(BigFloat::from_f64(0.0, p));
    for k in 1..n {
        let v = if k == 1 {
            BigFloat::parse(EULER_GAMMA, Radix::Dec, p, RM, cc).neg()
        } else {
            let z = match ZETA.get(k - 2) {
                Some(s) => BigFloat::parse(s, Radix::Dec, p, RM, cc),
                None => zeta_by_sum(k, p, cc),
            };
            let z = if k % 2 == 0 { z } else { z.neg() };
            z.div(&BigFloat::from_u64(k as u64, p), p, RM)
        };
        log.push(v.mul(&nn, p, RM));
    }
    let mut f: Vec<BigFloat> = Vec::with_capacity(n);
    f.push(BigFloat::from_f64(1.0, p));
    for m in 1..n {
        let mut acc = BigFloat::from_f64(0.0, p);
        for k in 1..=m {
            let t = log[k].mul(&f[m - k], p, RM).mul(&BigFloat::from_u64(k as u64, p), p, RM);
            acc = acc.add(&t, p, RM);
        }
        f.push(acc.div(&BigFloat::from_u64(m as u64, p), p, RM));
    }
    f
}

fn zeta_by_sum(k: usize, p: usize, cc: &mut Consts) -> BigFloat {
    let terms = 1 + p / k.max(1) * 2;
    let mut acc = BigFloat::from_f64(0.0, p);
    let s = BigFloat::from_i64(-(k as i64), p);
    for m in (1..=terms).rev() {
        let base = BigFloat::from_u64(m as u64, p);
        acc = acc.add(&base.ln(p, RM, cc).mul(&s, p, RM).exp(p, RM, cc), p, RM);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conversion_round_trips() {
        for v in [1.0, -3.5, 1e-200, 7.25e150, core::f64::consts::PI] {
            let b = BigFloat::from_f64(v, 256);
            assert_eq!(to_f64(&b), v);
        }
        assert_eq!(ldexp(1.0, -1074), f64::from_bits(1));
        assert_eq!(ldexp(3.0, 2), 12.0);
    }

    #[test]
    fn gamma_class_matches_double_precision() {
        let mut cc = consts().unwrap();
        let g = gamma_class(4, 256, &mut cc);
        let d = crate::khomology::gamma_class(4);
        for (a, b) in g.iter().zip(d.coeffs()) {
            assert!((to_f64(a) - b.re).abs() < 1e-14 * (1.0 + b.re.abs()));
        }
    }

    #[test]
    fn complex_exponential() {
        let mut cc = consts().unwrap();
        let z = MpComplex::from_c64(Complex64::new(0.5, 2.0), 192);
        let e = z.exp(192, &mut cc).to_c64();
        assert!((e - Complex64::new(0.5, 2.0).exp()).norm() < 1e-15);
    }
}
