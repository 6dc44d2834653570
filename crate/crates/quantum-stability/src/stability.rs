//! Algebraic stability conditions generated by full exceptional collections.
//!
//! A datum assigns a mass `m_i > 0` and a phase `φ_i` to every object `E_i`
//! so that `⌈φ_i⌉ < φ_{i+1}`. The shifts `p_i = ⌊1 - φ_i⌋` place the shifted
//! generators `E_i[p_i]` in the heart, where their central charges
//! `m_i e^{iπ(φ_i + p_i)}` have phases in `(0, 1]`.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::exact;
use crate::khomology::{chern_character, omega_twists, ExceptionalCollection, KClass, RatClass};
use crate::{Error, Result};

const CONE_TOL: f64 = 1e-12;

/// One algebraic stability condition: masses and phases of the objects of an
/// exceptional collection.
#[derive(Clone, Debug, PartialEq)]
pub struct StabilityDatum {
    collection: ExceptionalCollection,
    masses: Vec<f64>,
    phases: Vec<f64>,
    shifts: Vec<i64>,
}

/// Validates masses and phases and computes the heart shifts.
pub fn make_stability(collection: &ExceptionalCollection, masses: &[f64], phases: &[f64]) -> Result<StabilityDatum> {
    let len = collection.len();
    if masses.len() != len {
        return Err(Error::DimensionMismatch { left: len, right: masses.len() });
    }
    if phases.len() != len {
        return Err(Error::DimensionMismatch { left: len, right: phases.len() });
    }
    if let Some(m) = masses.iter().find(|m| !(m.is_finite() && **m > 0.0)) {
        return Err(Error::InvalidArgument(format!("masses must be positive and finite, got {m}")));
    }
    if let Some(p) = phases.iter().find(|p| !p.is_finite()) {
        return Err(Error::InvalidArgument(format!("phases must be finite, got {p}")));
    }
    for i in 0..len.saturating_sub(1) {
        if phases[i].ceil() >= phases[i + 1] {
            return Err(Error::GapViolation { index: i });
        }
    }
    let shifts: Vec<i64> = phases.iter().map(|&phi| (1.0 - phi).floor() as i64).collect();
    if let Some(i) = (0..len.saturating_sub(1)).find(|&i| shifts[i] <= shifts[i + 1]) {
        return Err(Error::GapViolation { index: i });
    }
    Ok(StabilityDatum { collection: collection.clone(), masses: masses.to_vec(), phases: phases.to_vec(), shifts })
}

impl StabilityDatum {
    /// Underlying collection.
    pub fn collection(&self) -> &ExceptionalCollection {
        &self.collection
    }

    /// Masses `m_i`.
    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    /// Phases `φ_i`.
    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    /// Shifts `p_i` with `φ_i + p_i ∈ (0, 1]`.
    pub fn shifts(&self) -> &[i64] {
        &self.shifts
    }

    /// Consecutive differences `φ_{i+1} - φ_i`.
    pub fn gaps(&self) -> Vec<f64> {
        self.phases.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Phase of the shifted generator `E_i[p_i]`, in `(0, 1]`.
    pub fn heart_phase(&self, i: usize) -> f64 {
        self.phases[i] + self.shifts[i] as f64
    }

    /// `Z(E_i) = m_i e^{iπφ_i}`.
    pub fn central_charge_of_object(&self, i: usize) -> Complex64 {
        Complex64::from_polar(self.masses[i], PI * self.phases[i])
    }

    /// Central charge of an arbitrary class, extended linearly from the
    /// generators. Requires a full collection.
    pub fn central_charge(&self, class: &RatClass) -> Result<Complex64> {
        let coords = self.coordinates(class)?;
        Ok(coords
            .iter()
            .enumerate()
            .map(|(i, c)| self.central_charge_of_object(i) * c.to_f64().unwrap_or(f64::NAN))
            .sum())
    }

    /// Coordinates of `class` in the basis `ch(E_i)`.
    fn coordinates(&self, class: &RatClass) -> Result<Vec<BigRational>> {
        let n = self.collection.n();
        if self.collection.len() != n {
            return Err(Error::Precondition("the collection must be full".into()));
        }
        if class.n() != n {
            return Err(Error::DimensionMismatch { left: n, right: class.n() });
        }
        let objects = self.collection.objects();
        let m: Vec<Vec<BigRational>> =
            (0..n).map(|p| objects.iter().map(|e| e.ch().coeffs()[p].clone()).collect()).collect();
        exact::solve(&m, class.coeffs()).ok_or_else(|| Error::Numerical("collection basis is singular".into()))
    }

    fn shifted_class(&self, i: usize) -> RatClass {
        let ch = self.collection.objects()[i].ch();
        if self.shifts[i].rem_euclid(2) == 0 {
            ch.clone()
        } else {
            ch.scale(&BigRational::from_integer(BigInt::from(-1)))
        }
    }
}

/// `max_i ‖ch(E_i)‖₂ / min_i m_i`.
pub fn support_constant(datum: &StabilityDatum) -> f64 {
    let max_norm = datum
        .collection
        .objects()
        .iter()
        .map(|e| e.ch_f64().iter().map(|c| c * c).sum::<f64>().sqrt())
        .fold(0.0, f64::max);
    let min_mass = datum.masses.iter().copied().fold(f64::INFINITY, f64::min);
    max_norm / min_mass
}

/// Whether every consecutive gap exceeds 2, or exceeds 1 when
/// `projective_plane` is set and the collection lives on ℙ².
pub fn is_pure(datum: &StabilityDatum, projective_plane: bool) -> bool {
    let threshold = if projective_plane && datum.collection.n() == 3 { 1.0 } else { 2.0 };
    datum.gaps().iter().all(|&g| g > threshold)
}

/// A class written as `Σ b_i E_i[p_i]` with nonnegative integers `b_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeartClass {
    multiplicities: Vec<BigInt>,
}

impl HeartClass {
    /// Wraps nonnegative multiplicities.
    pub fn new(multiplicities: Vec<BigInt>) -> Result<Self> {
        if multiplicities.iter().any(|b| b.is_negative()) {
            return Err(Error::NotInHeart("negative multiplicity".into()));
        }
        Ok(Self { multiplicities })
    }

    /// Multiplicities `b_i`.
    pub fn multiplicities(&self) -> &[BigInt] {
        &self.multiplicities
    }

    /// `Σ b_i (-1)^{p_i} ch(E_i)`.
    pub fn class(&self, datum: &StabilityDatum) -> Result<RatClass> {
        self.check_len(datum)?;
        let mut acc = RatClass::zero(datum.collection.n());
        for (i, b) in self.multiplicities.iter().enumerate() {
            acc = acc.add(&datum.shifted_class(i).scale(&BigRational::from_integer(b.clone())))?;
        }
        Ok(acc)
    }

    /// `Σ b_i m_i e^{iπ(φ_i + p_i)}`.
    pub fn central_charge(&self, datum: &StabilityDatum) -> Result<Complex64> {
        self.check_len(datum)?;
        Ok(self
            .multiplicities
            .iter()
            .enumerate()
            .map(|(i, b)| {
                Complex64::from_polar(datum.masses[i], PI * datum.heart_phase(i)) * b.to_f64().unwrap_or(f64::NAN)
            })
            .sum())
    }

    fn check_len(&self, datum: &StabilityDatum) -> Result<()> {
        if self.multiplicities.len() != datum.collection.len() {
            return Err(Error::DimensionMismatch { left: datum.collection.len(), right: self.multiplicities.len() });
        }
        Ok(())
    }
}

/// Writes `class` as a nonnegative integral combination of the shifted
/// generators `E_i[p_i]`.
pub fn decompose_in_heart(class: &KClass, datum: &StabilityDatum) -> Result<HeartClass> {
    let coords = datum.coordinates(class.ch())?;
    let mut b = Vec::with_capacity(coords.len());
    for (i, c) in coords.into_iter().enumerate() {
        let c = if datum.shifts[i].rem_euclid(2) == 0 { c } else { -c };
        if !c.is_integer() {
            return Err(Error::NotInHeart(format!("multiplicity {c} of generator {i} is not an integer")));
        }
        if c.is_negative() {
            return Err(Error::NotInHeart(format!("multiplicity {c} of generator {i} is negative")));
        }
        b.push(c.to_integer());
    }
    HeartClass::new(b)
}

/// Phase in `(0, 1]` of a central charge lying in the heart cone.
pub fn cone_phase(z: Complex64) -> Result<f64> {
    if !z.is_finite() || z.norm() == 0.0 {
        return Err(Error::Degenerate("vanishing central charge".into()));
    }
    let mut a = z.arg();
    if a <= -PI + CONE_TOL {
        a = PI;
    }
    if a.abs() <= CONE_TOL {
        return Err(Error::Degenerate(format!("central charge {z} lies on the cone boundary")));
    }
    if a < 0.0 {
        return Err(Error::NotInHeart(format!("central charge {z} lies below the real axis")));
    }
    Ok(a / PI)
}

fn check_chain(chain: &[KClass], quotients: &[usize], datum: &StabilityDatum, strict: bool) -> Result<bool> {
    if chain.len() != quotients.len() || chain.is_empty() {
        return Err(Error::InvalidArgument("chain and quotient lists must be non-empty and of equal length".into()));
    }
    if let Some(&i) = quotients.iter().find(|&&i| i >= datum.collection.len()) {
        return Err(Error::InvalidArgument(format!("quotient index {i} out of range")));
    }
    for w in quotients.windows(2) {
        let (a, b) = (datum.heart_phase(w[0]), datum.heart_phase(w[1]));
        if if strict { b <= a } else { b < a } {
            return Err(Error::Precondition("quotient phases must increase along the chain".into()));
        }
    }
    let mut previous = RatClass::zero(datum.collection.n());
    for (a, &q) in chain.iter().zip(quotients) {
        if a.ch().sub(&previous)? != datum.shifted_class(q) {
            return Err(Error::InvalidArgument(format!("{} is not an extension by generator {q}", a.label())));
        }
        previous = a.ch().clone();
    }
    let mut phases = Vec::with_capacity(chain.len());
    for a in chain {
        phases.push(cone_phase(datum.central_charge(a.ch())?)?);
    }
    let mut ok = true;
    for j in 0..chain.len() - 1 {
        let next_quotient = datum.heart_phase(quotients[j + 1]);
        ok &= phases[j] < phases[j + 1] && phases[j + 1] < next_quotient;
    }
    Ok(ok)
}

/// Checks the phase recursion `φ(A_j) < φ(A_{j+1}) < φ(E_{i_{j+1}})` along a
/// chain `A_1 ⊂ A_2 ⊂ …` of partial sums with quotients `E_{i_j}[p_{i_j}]`.
///
/// The quotient phases must strictly increase.
pub fn chain_stability_check(chain: &[KClass], quotients: &[usize], datum: &StabilityDatum) -> Result<bool> {
    check_chain(chain, quotients, datum, true)
}

fn matches_classes(objects: &[KClass], expected: &[KClass]) -> bool {
    objects.len() == expected.len() && objects.iter().zip(expected).all(|(a, b)| a.ch() == b.ch())
}

/// Checks that the skyscraper sheaf of a point is stable for the stability
/// condition with the given masses and phases on `collection`.
///
/// The collection must be `Ω^{n-1}(n-1), …, Ω^1(1), O`, or on ℙ² any
/// `O(k), O(k+1), O(k+2)`, and consecutive phase gaps must lie in `(0, 1)`.
/// All phases are first translated by a common real number so that the gap
/// condition holds; this rotates every central charge by the same angle and
/// leaves the verdict unchanged. The point class is then filtered by its
/// resolution with quotients `E_{n-1}, …, E_0` and the chain recursion is
/// checked.
pub fn skyscraper_geometric_check(collection: &ExceptionalCollection, masses: &[f64], phases: &[f64]) -> Result<bool> {
    let n = collection.n();
    if collection.len() != n {
        return Err(Error::Precondition("the collection must be full".into()));
    }
    let objects = collection.objects();
    let first_degree = objects[0].ch().coeffs().get(1).cloned().unwrap_or_else(BigRational::zero);
    let accepted = matches_classes(objects, &omega_twists(n))
        || (n == 3
            && first_degree.is_integer()
            && first_degree.to_integer().to_i64().is_some_and(|k| {
                let twists: Vec<KClass> = (0..3).map(|j| chern_character(3, k + j)).collect();
                matches_classes(objects, &twists)
            }));
    if !accepted {
        return Err(Error::Precondition(
            "skyscraper check needs the Ω-twist collection or a ℙ² line bundle triple".into(),
        ));
    }
    if phases.len() != n {
        return Err(Error::DimensionMismatch { left: n, right: phases.len() });
    }
    if phases.windows(2).any(|w| !(w[1] - w[0] > 0.0 && w[1] - w[0] < 1.0)) {
        return Err(Error::Precondition("consecutive phase gaps must lie in (0, 1)".into()));
    }
    let offsets: Vec<f64> = phases.iter().enumerate().map(|(j, &phi)| phi - j as f64).collect();
    let lo = -offsets.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = 1.0 - offsets.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(lo < hi) {
        return Err(Error::Precondition("phases cannot be translated into a common heart".into()));
    }
    let shift = 0.5 * (lo + hi);
    let translated: Vec<f64> = phases.iter().map(|p| p + shift).collect();
    let datum = make_stability(collection, masses, &translated)?;

    let point = KClass::new("O_pt", RatClass::monomial(n, n - 1, BigRational::from_integer(BigInt::from(1))));
    let heart = decompose_in_heart(&point, &datum).or_else(|_| {
        decompose_in_heart(&KClass::new("O_pt", point.ch().scale(&BigRational::from_integer(BigInt::from(-1)))), &datum)
    })?;
    let mut chain = Vec::new();
    let mut quotients = Vec::new();
    let mut acc = RatClass::zero(n);
    for i in (0..n).rev() {
        let copies = heart.multiplicities()[i].to_usize().unwrap_or(0);
        for _ in 0..copies {
            acc = acc.add(&datum.shifted_class(i))?;
            chain.push(KClass::new(format!("A_{}", chain.len() + 1), acc.clone()));
            quotients.push(i);
        }
    }
    check_chain(&chain, &quotients, &datum, false)
}
