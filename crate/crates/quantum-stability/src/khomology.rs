//! Cohomology and K-theory of ℙ^{n-1}.
//!
//! Cohomology classes are truncated polynomials `Σ c_p h^p` with `h^n = 0`,
//! stored as the coefficient vector `(c_0, …, c_{n-1})`. K-theory classes are
//! represented by their exact rational Chern character.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::constants::{EULER_GAMMA, ZETA};
use crate::exact;
use crate::{Error, Result};

/// Coefficient ring usable in [`CohClass`].
pub trait Coefficient:
    Clone + PartialEq + Zero + One + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
}

impl<T> Coefficient for T where
    T: Clone + PartialEq + Zero + One + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + Neg<Output = T>
{
}

/// A cohomology class of ℙ^{n-1} in the basis `1, h, …, h^{n-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct CohClass<T> {
    coeffs: Vec<T>,
}

/// Cohomology class with exact rational coefficients.
pub type RatClass = CohClass<BigRational>;
/// Cohomology class with complex floating-point coefficients.
pub type ComplexClass = CohClass<Complex64>;

impl<T> CohClass<T> {
    /// Wraps a coefficient vector. The length is the rank `n >= 1`.
    pub fn from_coeffs(coeffs: Vec<T>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("a class needs at least one coefficient".into()));
        }
        Ok(Self { coeffs })
    }

    /// Rank `n` of the cohomology ring.
    pub fn n(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficients of `1, h, …, h^{n-1}`.
    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Consumes the class and returns its coefficients.
    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Applies `f(p, c_p)` to every coefficient.
    pub fn map<U>(&self, mut f: impl FnMut(usize, &T) -> U) -> CohClass<U> {
        CohClass { coeffs: self.coeffs.iter().enumerate().map(|(p, c)| f(p, c)).collect() }
    }

    fn check_rank(&self, other: &Self) -> Result<()> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch { left: self.n(), right: other.n() });
        }
        Ok(())
    }
}

impl<T: Coefficient> CohClass<T> {
    /// The zero class of rank `n`.
    pub fn zero(n: usize) -> Self {
        Self { coeffs: vec![T::zero(); n.max(1)] }
    }

    /// The unit class `1` of rank `n`.
    pub fn one(n: usize) -> Self {
        Self::monomial(n, 0, T::one())
    }

    /// The class `c · h^p` (zero when `p >= n`).
    pub fn monomial(n: usize, p: usize, c: T) -> Self {
        let mut out = Self::zero(n);
        if p < out.n() {
            out.coeffs[p] = c;
        }
        out
    }

    /// Integration over ℙ^{n-1}: the coefficient of `h^{n-1}`.
    pub fn integrate(&self) -> T {
        self.coeffs[self.n() - 1].clone()
    }

    /// Sum of two classes.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        Ok(Self { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() + b.clone()).collect() })
    }

    /// Difference of two classes.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        Ok(Self { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() - b.clone()).collect() })
    }

    /// Multiplication by a scalar.
    pub fn scale(&self, c: &T) -> Self {
        Self { coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect() }
    }

    /// Truncated cup product.
    pub fn cup(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        let n = self.n();
        let mut out = vec![T::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..n - i].iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Ok(Self { coeffs: out })
    }

    /// The dual class: the coefficient of `h^p` is multiplied by `(-1)^p`.
    pub fn dual(&self) -> Self {
        self.map(|p, c| if p % 2 == 1 { -c.clone() } else { c.clone() })
    }
}

/// Truncated cup product of two classes of equal rank.
pub fn cup<T: Coefficient>(a: &CohClass<T>, b: &CohClass<T>) -> Result<CohClass<T>> {
    a.cup(b)
}

fn factorial(k: usize) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < k || n < 0 {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Inverse of a power series with invertible constant term, truncated at
/// `h^n`.
fn series_inverse(q: &[BigRational]) -> Vec<BigRational> {
    let n = q.len();
    let mut t = vec![BigRational::zero(); n];
    t[0] = BigRational::one() / q[0].clone();
    for m in 1..n {
        let mut acc = BigRational::zero();
        for k in 1..=m {
            acc += q[k].clone() * t[m - k].clone();
        }
        t[m] = -acc * t[0].clone();
    }
    t
}

/// Exponential of a power series with zero constant term, truncated at
/// `h^n`, via `f_m = (1/m) Σ_{k=1}^{m} k L_k f_{m-k}`.
pub(crate) fn exp_series<T, F>(log: &[T], from_usize: F) -> Vec<T>
where
    T: Coefficient + core::ops::Div<Output = T>,
    F: Fn(usize) -> T,
{
    let n = log.len();
    let mut f = vec![T::zero(); n];
    f[0] = T::one();
    for m in 1..n {
        let mut acc = T::zero();
        for k in 1..=m {
            acc = acc + from_usize(k) * log[k].clone() * f[m - k].clone();
        }
        f[m] = acc / from_usize(m);
    }
    f
}

/// A K-theory class of ℙ^{n-1}, stored through its exact Chern character.
#[derive(Clone, Debug, PartialEq)]
pub struct KClass {
    label: String,
    ch: RatClass,
}

impl KClass {
    /// Builds a class from a label and a Chern character.
    pub fn new(label: impl Into<String>, ch: RatClass) -> Self {
        Self { label: label.into(), ch }
    }

    /// Rank `n` of the ambient cohomology ring.
    pub fn n(&self) -> usize {
        self.ch.n()
    }

    /// Exact Chern character.
    pub fn ch(&self) -> &RatClass {
        &self.ch
    }

    /// Human-readable name.
    pub fn label(&self) -> &str {
        &self.label
    }

    /// Replaces the label.
    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Rank, the constant term of the Chern character.
    pub fn rank(&self) -> BigRational {
        self.ch.coeffs()[0].clone()
    }

    /// Chern character as floating-point numbers.
    pub fn ch_f64(&self) -> Vec<f64> {
        self.ch.coeffs().iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
    }

    /// The class `self - c · other`.
    pub fn minus_multiple(&self, c: &BigInt, other: &KClass, label: impl Into<String>) -> Result<Self> {
        let scaled = other.ch.scale(&BigRational::from_integer(c.clone()));
        Ok(Self { label: label.into(), ch: self.ch.sub(&scaled)? })
    }

    /// Tensor product with the line bundle `O(j)`.
    pub fn twist(&self, j: i64) -> Result<Self> {
        let line = chern_character(self.n(), j);
        Ok(Self { label: format!("{}({j})", self.label), ch: self.ch.cup(line.ch())? })
    }
}

/// Label of the line bundle `O(j)`.
pub fn line_label(j: i64) -> String {
    if j == 0 {
        "O".to_string()
    } else {
        format!("O({j})")
    }
}

/// The line bundle `O(j)` on ℙ^{n-1}: `ch_p = j^p / p!`.
pub fn chern_character(n: usize, j: i64) -> KClass {
    let n = n.max(1);
    let mut coeffs = Vec::with_capacity(n);
    let mut power = BigInt::one();
    for p in 0..n {
        coeffs.push(BigRational::new(power.clone(), factorial(p)));
        power *= BigInt::from(j);
    }
    KClass { label: line_label(j), ch: RatClass { coeffs } }
}

/// Todd class `(h / (1 - e^{-h}))^n` of ℙ^{n-1}.
pub fn todd_class(n: usize) -> RatClass {
    let n = n.max(1);
    let q: Vec<BigRational> = (0..n)
        .map(|k| {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            BigRational::new(BigInt::from(sign), factorial(k + 1))
        })
        .collect();
    let base = RatClass { coeffs: series_inverse(&q) };
    let mut out = RatClass::one(n);
    for _ in 0..n {
        out = out.cup(&base).unwrap_or_else(|_| RatClass::zero(n));
    }
    out
}

/// Exact Euler pairing `χ(a, b) = ∫ ch(a)^∨ ch(b) td` of two Chern characters.
pub fn euler_form_exact(a: &RatClass, b: &RatClass) -> Result<BigRational> {
    let td = todd_class(a.n());
    Ok(a.dual().cup(b)?.cup(&td)?.integrate())
}

/// Euler pairing of two K-classes. Fails when the value is not an integer.
pub fn euler_form(a: &KClass, b: &KClass) -> Result<BigInt> {
    let v = euler_form_exact(&a.ch, &b.ch)?;
    if !v.is_integer() {
        return Err(Error::NonIntegralPairing { value: v.to_string() });
    }
    Ok(v.to_integer())
}

/// Zeta value `ζ(k)` for `k >= 2` in double precision.
pub(crate) fn zeta_f64(k: usize) -> f64 {
    if let Some(s) = k.checked_sub(2).and_then(|i| ZETA.get(i)) {
        return s.parse().unwrap_or(f64::NAN);
    }
    let mut acc = 0.0;
    for m in (1..=64u32).rev() {
        acc += f64::from(m).powf(-(k as f64));
    }
    acc
}

/// Coefficients of `n · log Γ(1 + h)` truncated at `h^n`, in double precision.
pub(crate) fn log_gamma_series(n: usize) -> Vec<f64> {
    let gamma: f64 = EULER_GAMMA.parse().unwrap_or(f64::NAN);
    let mut log = vec![0.0; n];
    if n > 1 {
        log[1] = -gamma * n as f64;
    }
    for (k, entry) in log.iter_mut().enumerate().skip(2) {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        *entry = n as f64 * sign * zeta_f64(k) / k as f64;
    }
    log
}

/// Gamma class `Γ̂ = Γ(1 + h)^n` of ℙ^{n-1}.
pub fn gamma_class(n: usize) -> ComplexClass {
    let n = n.max(1);
    let log: Vec<Complex64> = log_gamma_series(n).into_iter().map(Complex64::from).collect();
    let coeffs = exp_series(&log, |k| Complex64::new(k as f64, 0.0));
    ComplexClass { coeffs }
}

/// Modified Chern character `Ch(V)`: the `h^p` coefficient of `ch(V)` times
/// `(2πi)^p`.
pub fn modified_chern(v: &KClass) -> ComplexClass {
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    v.ch.map(|p, c| two_pi_i.powu(p as u32) * c.to_f64().unwrap_or(f64::NAN))
}

/// `Γ̂ ∪ Ch(V)`, the characteristic vector paired with flat sections.
pub fn gamma_chern(v: &KClass) -> ComplexClass {
    let n = v.n();
    gamma_class(n).cup(&modified_chern(v)).unwrap_or_else(|_| ComplexClass::zero(n))
}

/// Coordinates of a Chern character in the basis `ch(O), …, ch(O(n-1))`.
pub fn lattice_coordinates(v: &KClass) -> Result<Vec<BigRational>> {
    let n = v.n();
    let basis: Vec<KClass> = (0..n as i64).map(|j| chern_character(n, j)).collect();
    let m: Vec<Vec<BigRational>> = (0..n).map(|p| basis.iter().map(|b| b.ch.coeffs()[p].clone()).collect()).collect();
    exact::solve(&m, v.ch.coeffs()).ok_or_else(|| Error::Numerical("line bundle basis is singular".into()))
}

/// The twisted cotangent bundles `Ω^p(p)` for `p = n-1, …, 1, 0`, built from
/// `ch(Ω^p(p)) = C(n, p) - ch(Ω^{p-1}(p-1)) · ch(O(1))` with `Ω^0 = O`.
pub fn omega_twists(n: usize) -> Vec<KClass> {
    let n = n.max(1);
    let o1 = chern_character(n, 1);
    let mut current = chern_character(n, 0);
    let mut ascending = vec![current.clone()];
    for p in 1..n {
        let c = BigRational::from_integer(binomial(n as i64, p as i64));
        let prod = current.ch.cup(o1.ch()).unwrap_or_else(|_| RatClass::zero(n));
        let ch = RatClass::monomial(n, 0, c).sub(&prod).unwrap_or_else(|_| RatClass::zero(n));
        current = KClass::new(format!("Ω^{p}({p})"), ch);
        ascending.push(current.clone());
    }
    ascending.reverse();
    ascending
}

/// An ordered exceptional collection of K-classes.
///
/// Invariants: `χ(E_i, E_i) = 1`, `χ(E_b, E_a) = 0` for `a < b`, every class
/// has integral coordinates in the line bundle basis, and a collection of
/// length `n` generates the lattice (change of basis determinant `±1`).
#[derive(Clone, Debug, PartialEq)]
pub struct ExceptionalCollection {
    objects: Vec<KClass>,
}

impl ExceptionalCollection {
    /// Validates and wraps a collection.
    pub fn new(objects: Vec<KClass>) -> Result<Self> {
        let Some(first) = objects.first() else {
            return Err(Error::NotExceptional("empty collection".into()));
        };
        let n = first.n();
        if objects.len() > n {
            return Err(Error::NotExceptional(format!("{} objects exceed rank {n}", objects.len())));
        }
        for e in &objects {
            if e.n() != n {
                return Err(Error::DimensionMismatch { left: n, right: e.n() });
            }
        }
        let mut coords = Vec::with_capacity(objects.len());
        for e in &objects {
            let c = lattice_coordinates(e)?;
            if c.iter().any(|x| !x.is_integer()) {
                return Err(Error::NotExceptional(format!("{} is not an integral class", e.label)));
            }
            coords.push(c);
        }
        for (i, a) in objects.iter().enumerate() {
            if euler_form(a, a)? != BigInt::one() {
                return Err(Error::NotExceptional(format!("chi({0}, {0}) != 1", a.label)));
            }
            for b in &objects[i + 1..] {
                if !euler_form(b, a)?.is_zero() {
                    return Err(Error::NotExceptional(format!("chi({}, {}) != 0", b.label, a.label)));
                }
            }
        }
        if objects.len() == n {
            let det = exact::determinant(&coords);
            if det.abs() != BigRational::one() {
                return Err(Error::NotExceptional(format!("lattice determinant {det} is not a unit")));
            }
        }
        Ok(Self { objects })
    }

    /// The collection `O(k), …, O(k + n - 1)`.
    pub fn twists(n: usize, k: i64) -> Self {
        let objects = (0..n.max(1) as i64).map(|j| chern_character(n, k + j)).collect();
        Self { objects }
    }

    /// The collection `Ω^{n-1}(n-1), …, Ω^1(1), O`.
    pub fn omega(n: usize) -> Self {
        Self { objects: omega_twists(n) }
    }

    /// Number of objects.
    pub fn len(&self) -> usize {
        self.objects.len()
    }

    /// Whether the collection is empty (never true for validated values).
    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    /// Rank `n` of the ambient cohomology ring.
    pub fn n(&self) -> usize {
        self.objects[0].n()
    }

    /// Objects in order.
    pub fn objects(&self) -> &[KClass] {
        &self.objects
    }

    /// Consumes the collection.
    pub fn into_objects(self) -> Vec<KClass> {
        self.objects
    }

    /// Labels in order.
    pub fn labels(&self) -> Vec<String> {
        self.objects.iter().map(|e| e.label.clone()).collect()
    }

    /// Gram matrix `χ(E_i, E_j)`, upper unitriangular.
    pub fn gram_matrix(&self) -> Result<Vec<Vec<BigInt>>> {
        self.objects.iter().map(|a| self.objects.iter().map(|b| euler_form(a, b)).collect()).collect()
    }

    /// Determinant of the coordinate matrix in the line bundle basis.
    pub fn lattice_determinant(&self) -> Result<BigRational> {
        let coords: Vec<Vec<BigRational>> = self.objects.iter().map(lattice_coordinates).collect::<Result<_>>()?;
        if coords.len() != self.n() {
            return Err(Error::Precondition("lattice determinant needs a full collection".into()));
        }
        Ok(exact::determinant(&coords))
    }

    fn check_pair(&self, i: usize) -> Result<()> {
        if i + 1 >= self.len() {
            return Err(Error::InvalidArgument(format!("no adjacent pair at position {i}")));
        }
        Ok(())
    }

    /// Right mutation at `i`: `(E_i, E_{i+1}) -> (E_{i+1}, E_i - χ(E_i, E_{i+1}) E_{i+1})`.
    pub fn mutate_right(&self, i: usize) -> Result<Self> {
        self.check_pair(i)?;
        let (e, f) = (&self.objects[i], &self.objects[i + 1]);
        let c = euler_form(e, f)?;
        let label = format!("R_{{{}}}{}", f.label, e.label);
        let mutated = e.minus_multiple(&c, f, label)?;
        let mut objects = self.objects.clone();
        objects[i] = f.clone();
        objects[i + 1] = mutated;
        Self::new(objects)
    }

    /// Left mutation at `i`: `(E_i, E_{i+1}) -> (E_{i+1} - χ(E_i, E_{i+1}) E_i, E_i)`.
    pub fn mutate_left(&self, i: usize) -> Result<Self> {
        self.check_pair(i)?;
        let (e, f) = (&self.objects[i], &self.objects[i + 1]);
        let c = euler_form(e, f)?;
        let label = format!("L_{{{}}}{}", e.label, f.label);
        let mutated = f.minus_multiple(&c, e, label)?;
        let mut objects = self.objects.clone();
        objects[i] = mutated;
        objects[i + 1] = e.clone();
        Self::new(objects)
    }
}

/// Binomial coefficient `C(n, k)` as an integer (zero outside `0 <= k <= n`).
pub fn binomial_coefficient(n: i64, k: i64) -> BigInt {
    binomial(n, k)
}
