//! Quasi-convergent paths of algebraic stability conditions.
//!
//! Given a full exceptional collection `E_0, …, E_d` whose objects have
//! exponential rates `u_j` with strictly increasing `Im(-u_j)`, the twisted
//! charges `a_j(r) = e^{iβ_j} Z^τ(E_j)(r)` define phases
//! `φ_j(r) = arg a_j(r) / π` whose consecutive gaps are below one near
//! `r = δ` and grow without bound as `r -> 0⁺`. Every sample is an algebraic
//! stability condition, and the path converges to the semiorthogonal
//! decomposition `⟨E_0, …, E_d⟩`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::connection::{asymptotic_limit_log, ChargeEvaluator};
use crate::khomology::{ExceptionalCollection, KClass};
use crate::stability::{is_pure, make_stability};
use crate::{Error, Result};

const LEX_TOL: f64 = 1e-12;
const MAX_REFINEMENTS: usize = 8;

/// Lexicographic order on ℂ: real parts first, then imaginary parts.
pub fn lex_less(u: Complex64, v: Complex64) -> bool {
    if (u.re - v.re).abs() <= LEX_TOL {
        u.im <= v.im
    } else {
        u.re < v.re
    }
}

fn lex_cmp(u: Complex64, v: Complex64) -> Ordering {
    match (lex_less(u, v), lex_less(v, u)) {
        (true, true) => Ordering::Equal,
        (true, false) => Ordering::Less,
        _ => Ordering::Greater,
    }
}

/// An exceptional object with the exponential rate of its central charge.
#[derive(Clone, Debug, PartialEq)]
pub struct PathObject {
    /// Display label.
    pub label: String,
    /// Rate `u` with `Z(E) ~ e^{-u/r}` as `r -> 0⁺`.
    pub rate: Complex64,
}

/// Grouping key `Im(-u)`.
fn key(u: Complex64) -> f64 {
    -u.im
}

/// Whether `Im(-u_j)` is non-decreasing along the collection order.
pub fn check_monotone(rates: &[Complex64]) -> bool {
    rates.windows(2).all(|w| key(w[0]) <= key(w[1]))
}

/// One component of a semiorthogonal decomposition.
#[derive(Clone, Debug, PartialEq)]
pub struct SodComponent {
    /// Common value of `Im(-u)` of its objects (cluster mean).
    pub key: f64,
    /// Labels of its objects, in lexicographic order of `-u`.
    pub labels: Vec<String>,
}

/// A limit semiorthogonal decomposition, components ordered by key.
#[derive(Clone, Debug, PartialEq)]
pub struct Sod {
    /// Components in increasing key order.
    pub components: Vec<SodComponent>,
}

/// Groups objects by `Im(-u)` with absolute tolerance `tol`.
///
/// Fails with [`Error::AmbiguousGrouping`] when two neighbouring keys differ
/// by an amount in `(tol, 10 tol)`.
pub fn limit_sod(objects: &[PathObject], tol: f64) -> Result<Sod> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidArgument("grouping tolerance must be positive".into()));
    }
    let mut order: Vec<&PathObject> = objects.iter().collect();
    order.sort_by(|a, b| key(a.rate).total_cmp(&key(b.rate)).then_with(|| a.label.cmp(&b.label)));
    let mut clusters: Vec<Vec<&PathObject>> = Vec::new();
    for obj in order {
        match clusters.last_mut() {
            Some(cluster) => {
                let last = cluster[cluster.len() - 1];
                let gap = key(obj.rate) - key(last.rate);
                if gap <= tol {
                    cluster.push(obj);
                } else if gap < 10.0 * tol {
                    return Err(Error::AmbiguousGrouping { gap });
                } else {
                    clusters.push(vec![obj]);
                }
            }
            None => clusters.push(vec![obj]),
        }
    }
    let components = clusters
        .into_iter()
        .map(|mut cluster| {
            let mean = cluster.iter().map(|o| key(o.rate)).sum::<f64>() / cluster.len() as f64;
            cluster.sort_by(|a, b| lex_cmp(-a.rate, -b.rate).then_with(|| a.label.cmp(&b.label)));
            SodComponent { key: mean, labels: cluster.into_iter().map(|o| o.label.clone()).collect() }
        })
        .collect();
    Ok(Sod { components })
}

/// Tuning knobs for [`build_path`].
#[derive(Clone, Debug, PartialEq)]
pub struct PathOptions {
    /// Starting value for `ε`, halved until `ε |Im u_j| / π < 1/4`.
    pub eps_hint: f64,
    /// Starting value for `δ'`, shrunk until the phase model is accurate.
    pub delta_prime_hint: f64,
    /// Smallest radius at which charges are evaluated.
    pub r_min: f64,
    /// Number of radii in the sampling grid.
    pub grid_points: usize,
    /// Number of radii used to calibrate `δ'`.
    pub calibration_points: usize,
}

impl Default for PathOptions {
    fn default() -> Self {
        Self { eps_hint: 1.0, delta_prime_hint: 1.0, r_min: 0.02, grid_points: 120, calibration_points: 160 }
    }
}

/// A constructed path: the collection with its rates, the bookkeeping
/// constants and the sampling grid.
#[derive(Clone, Debug, PartialEq)]
pub struct PathSpec {
    /// Rank `n`.
    pub n: usize,
    /// Quantum parameter.
    pub tau: Complex64,
    /// Collection, ordered by increasing `Im(-u_j)`.
    pub collection: ExceptionalCollection,
    /// Rates `u_j` of the objects.
    pub rates: Vec<Complex64>,
    /// `ε` with `ε |Im u_j| / π < 1/4`.
    pub eps: f64,
    /// Calibrated `δ'`.
    pub delta_prime: f64,
    /// `δ` with `1/δ = 1/δ' - ε`.
    pub delta: f64,
    /// Twists `β_j` in radians.
    pub beta: Vec<f64>,
    /// `μ = min_j (ε/π)(Im u_{j+1} - Im u_j) < 0`.
    pub mu: f64,
    /// `μ' = min_j (ε/π)(Im u_j - Im u_{j+1}) > 0`.
    pub mu_prime: f64,
    /// Constant phase of each charge, `lim (arg Z_j(r) - Im(-u_j)/r)`.
    pub offsets: Vec<f64>,
    /// Largest measured deviation from the linear phase model on `(0, 2δ']`,
    /// in phase units.
    pub model_error: f64,
    /// Sampling radii, decreasing, in `(0, δ)`.
    pub r_grid: Vec<f64>,
}

impl PathSpec {
    /// Linear phase model `(Im(-u_j)/r + β_j) / π`.
    pub fn model_phase(&self, j: usize, r: f64) -> f64 {
        (key(self.rates[j]) / r + self.beta[j]) / PI
    }

    /// Residuals of the defining identities for `β`: first
    /// `(Im(-u_0)/δ' + β_0)/π - 1/2`, then
    /// `(Im(-u_{i+1})/δ' + β_{i+1})/π - (Im(-u_i)/δ' + β_i)/π - 1`.
    pub fn beta_residuals(&self) -> Vec<f64> {
        let m = |j: usize| self.model_phase(j, self.delta_prime);
        let mut out = vec![m(0) - 0.5];
        out.extend((0..self.rates.len().saturating_sub(1)).map(|i| m(i + 1) - m(i) - 1.0));
        out
    }

    /// Threshold in phase units below which the model error must stay.
    pub fn error_budget(&self) -> f64 {
        (-self.mu / 4.0).min(self.mu_prime / 4.0)
    }
}

/// Deflated argument `arg Z_j - c_j - Im(-u_j)/r`, wrapped to `(-π, π]`.
fn deflated_arg(log_z: Complex64, offset: f64, rate: Complex64, r: f64) -> f64 {
    wrap(log_z.im - offset - key(rate) / r)
}

fn wrap(x: f64) -> f64 {
    let y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y - 2.0 * PI
    } else {
        y
    }
}

/// Radii uniformly spaced in `1/r` between `1/r_start` and `1/r_end`.
fn inverse_uniform(r_start: f64, r_end: f64, points: usize) -> Vec<f64> {
    let (a, b) = (1.0 / r_start, 1.0 / r_end);
    let m = points.max(2);
    (0..m).map(|k| 1.0 / (a + (b - a) * k as f64 / (m - 1) as f64)).collect()
}

/// Radii, log charges and unwrapped residual arguments on a refined grid.
type UnwrappedGrid = (Vec<f64>, Vec<Vec<Complex64>>, Vec<Vec<f64>>);

/// Evaluates the deflated arguments of all objects on a decreasing grid,
/// refining where consecutive values jump by half a phase unit or more, and
/// unwraps them starting from `anchor_first` (largest radius) or from the
/// smallest radius.
fn unwrapped_residuals(
    evaluator: &dyn ChargeEvaluator,
    objects: &[KClass],
    rates: &[Complex64],
    offsets: &[f64],
    grid: &[f64],
    anchor_first: bool,
) -> Result<UnwrappedGrid> {
    let mut radii = grid.to_vec();
    let mut logs: Vec<Vec<Complex64>> =
        radii.iter().map(|&r| evaluator.log_charges(objects, r)).collect::<Result<_>>()?;
    for _ in 0..=MAX_REFINEMENTS {
        let raw: Vec<Vec<f64>> = radii
            .iter()
            .zip(&logs)
            .map(|(&r, l)| (0..objects.len()).map(|j| deflated_arg(l[j], offsets[j], rates[j], r)).collect())
            .collect();
        let mut bad = Vec::new();
        for i in 0..radii.len().saturating_sub(1) {
            if (0..objects.len()).any(|j| wrap(raw[i + 1][j] - raw[i][j]).abs() >= PI / 2.0) {
                bad.push(i);
            }
        }
        if bad.is_empty() {
            let m = radii.len();
            let mut out = raw.clone();
            if anchor_first {
                for i in 1..m {
                    for j in 0..objects.len() {
                        out[i][j] = out[i - 1][j] + wrap(raw[i][j] - out[i - 1][j]);
                    }
                }
            } else {
                for i in (0..m - 1).rev() {
                    for j in 0..objects.len() {
                        out[i][j] = out[i + 1][j] + wrap(raw[i][j] - out[i + 1][j]);
                    }
                }
            }
            return Ok((radii, logs, out));
        }
        for &i in bad.iter().rev() {
            let mid = 2.0 / (1.0 / radii[i] + 1.0 / radii[i + 1]);
            let l = evaluator.log_charges(objects, mid)?;
            radii.insert(i + 1, mid);
            logs.insert(i + 1, l);
        }
    }
    Err(Error::UnwrapFailure(format!("phase jumps persist after {MAX_REFINEMENTS} refinements")))
}

/// Constructs the path: chooses `ε`, `μ`, `μ'`, calibrates `δ'` against the
/// measured phases, solves for `β` and builds the sampling grid.
pub fn build_path(
    tau: Complex64,
    collection: &ExceptionalCollection,
    rates: &[Complex64],
    evaluator: &dyn ChargeEvaluator,
    options: &PathOptions,
) -> Result<PathSpec> {
    let n = collection.n();
    let len = collection.len();
    if rates.len() != len {
        return Err(Error::DimensionMismatch { left: len, right: rates.len() });
    }
    if evaluator.n() != n {
        return Err(Error::DimensionMismatch { left: n, right: evaluator.n() });
    }
    if len < 2 {
        return Err(Error::InvalidArgument("a path needs at least two objects".into()));
    }
    if rates.windows(2).any(|w| !(key(w[0]) < key(w[1]))) {
        return Err(Error::NotOrdered);
    }
    if !(options.r_min > 0.0 && options.eps_hint > 0.0 && options.delta_prime_hint > options.r_min) {
        return Err(Error::InvalidArgument(
            "path options must satisfy 0 < r_min < delta_prime_hint, eps_hint > 0".into(),
        ));
    }

    let max_im = rates.iter().map(|u| u.im.abs()).fold(0.0, f64::max);
    let mut eps = options.eps_hint;
    while eps * max_im / PI >= 0.25 {
        eps *= 0.5;
    }
    let steps: Vec<f64> = rates.windows(2).map(|w| key(w[1]) - key(w[0])).collect();
    let max_step = steps.iter().copied().fold(0.0, f64::max);
    let min_step = steps.iter().copied().fold(f64::INFINITY, f64::min);
    let mu = -(eps / PI) * max_step;
    let mu_prime = (eps / PI) * min_step;
    let budget = (-mu / 4.0).min(mu_prime / 4.0);

    let objects = collection.objects();
    let limit_samples: Vec<f64> = (0..14).map(|k| options.r_min * 1.12f64.powi(13 - k)).collect();
    let mut offsets = Vec::with_capacity(len);
    let sample_logs: Vec<Vec<Complex64>> =
        limit_samples.iter().map(|&r| evaluator.log_charges(objects, r)).collect::<Result<_>>()?;
    for j in 0..len {
        let series: Vec<(f64, Complex64)> = limit_samples.iter().zip(&sample_logs).map(|(&r, l)| (r, l[j])).collect();
        let est = asymptotic_limit_log(&series, rates[j], n)?;
        offsets.push(est.limit.arg());
    }

    let top = 2.0 * options.delta_prime_hint;
    let cal_grid = inverse_uniform(top, options.r_min, options.calibration_points);
    let (cal_r, _, cal_res) = unwrapped_residuals(evaluator, objects, rates, &offsets, &cal_grid, false)?;
    let worst_above = |threshold: f64| -> f64 {
        cal_r
            .iter()
            .zip(&cal_res)
            .filter(|(&r, _)| r <= threshold)
            .flat_map(|(_, row)| row.iter().map(|x| x.abs() / PI))
            .fold(0.0, f64::max)
    };
    let mut delta_prime = options.delta_prime_hint;
    while worst_above(2.0 * delta_prime) >= budget {
        delta_prime *= 0.95;
        if 1.0 / delta_prime - eps <= 0.0 || delta_prime < 2.0 * options.r_min {
            return Err(Error::Numerical(format!(
                "phase model error stays above {budget:e} down to r = {}",
                2.0 * delta_prime
            )));
        }
    }
    let model_error = worst_above(2.0 * delta_prime);
    if 1.0 / delta_prime <= eps {
        return Err(Error::Numerical("delta' must satisfy 1/delta' > eps".into()));
    }
    let delta = 1.0 / (1.0 / delta_prime - eps);

    let mut beta = Vec::with_capacity(len);
    beta.push(PI / 2.0 - key(rates[0]) / delta_prime);
    for i in 0..len - 1 {
        let next = key(rates[i]) / delta_prime + beta[i] + PI - key(rates[i + 1]) / delta_prime;
        beta.push(next);
    }

    let inv_end = (1.0 / delta_prime + 2.0 * PI / min_step).min(1.0 / options.r_min);
    let m = options.grid_points.max(4);
    let inv_start = 1.0 / delta;
    let r_grid: Vec<f64> = (1..=m).map(|k| 1.0 / (inv_start + (inv_end - inv_start) * k as f64 / m as f64)).collect();

    Ok(PathSpec {
        n,
        tau,
        collection: collection.clone(),
        rates: rates.to_vec(),
        eps,
        delta_prime,
        delta,
        beta,
        mu,
        mu_prime,
        offsets,
        model_error,
        r_grid,
    })
}

/// Masses and phases of all objects at one radius.
#[derive(Clone, Debug, PartialEq)]
pub struct PathSample {
    /// Radius.
    pub r: f64,
    /// `ln m_j(r) = ln |a_j(r)|`.
    pub log_masses: Vec<f64>,
    /// `m_j(r)`, possibly infinite or zero when out of `f64` range.
    pub masses: Vec<f64>,
    /// `φ_j(r)`.
    pub phases: Vec<f64>,
    /// Whether the masses and phases form a stability datum.
    pub valid: bool,
    /// Whether every gap exceeds 2.
    pub pure: bool,
}

impl PathSample {
    /// Consecutive phase gaps.
    pub fn gaps(&self) -> Vec<f64> {
        self.phases.windows(2).map(|w| w[1] - w[0]).collect()
    }
}

fn samples_on(spec: &PathSpec, evaluator: &dyn ChargeEvaluator, grid: &[f64]) -> Result<Vec<PathSample>> {
    let objects = spec.collection.objects();
    let (radii, logs, residuals) = unwrapped_residuals(evaluator, objects, &spec.rates, &spec.offsets, grid, true)?;
    let mut out = Vec::with_capacity(radii.len());
    for ((&r, l), res) in radii.iter().zip(&logs).zip(&residuals) {
        let log_masses: Vec<f64> = l.iter().map(|z| z.re).collect();
        let masses: Vec<f64> = log_masses.iter().map(|x| x.exp()).collect();
        let phases: Vec<f64> =
            (0..objects.len()).map(|j| (key(spec.rates[j]) / r + res[j] + spec.beta[j]) / PI).collect();
        let datum = make_stability(&spec.collection, &masses, &phases);
        let pure = datum.as_ref().map(|d| is_pure(d, false)).unwrap_or(false);
        out.push(PathSample { r, log_masses, masses, phases, valid: datum.is_ok(), pure });
    }
    Ok(out)
}

/// Samples masses and phases on the grid of `spec`, refining the grid where
/// the phase unwrapping needs it.
pub fn sample_path(spec: &PathSpec, evaluator: &dyn ChargeEvaluator) -> Result<Vec<PathSample>> {
    samples_on(spec, evaluator, &spec.r_grid)
}

/// Masses and phases at a single radius, unwrapped from the small deflated
/// argument at that radius.
pub fn sample_at(spec: &PathSpec, evaluator: &dyn ChargeEvaluator, r: f64) -> Result<PathSample> {
    let mut s = samples_on(spec, evaluator, &[r])?;
    Ok(s.remove(0))
}

/// Certificates of a sampled path.
#[derive(Clone, Debug, PartialEq)]
pub struct PathCertificate {
    /// Every sample is a stability datum.
    pub gaps_ok: bool,
    /// All gaps at `r = δ` are below one.
    pub gaps_below_one_at_delta: bool,
    /// Largest gap at `r = δ`.
    pub max_gap_at_delta: f64,
    /// All gaps at `r = δ` are below `1 + μ/2`.
    pub gaps_within_margin_at_delta: bool,
    /// Some sample has all gaps above two.
    pub pure_region_found: bool,
    /// Largest absolute residual of the `β` identities.
    pub beta_residual: f64,
}

/// Checks the path against its defining properties.
pub fn certify(spec: &PathSpec, at_delta: &PathSample, samples: &[PathSample]) -> PathCertificate {
    let gaps = at_delta.gaps();
    let max_gap = gaps.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    PathCertificate {
        gaps_ok: samples.iter().all(|s| s.valid),
        gaps_below_one_at_delta: max_gap < 1.0,
        max_gap_at_delta: max_gap,
        gaps_within_margin_at_delta: max_gap < 1.0 + spec.mu / 2.0,
        pure_region_found: samples.iter().any(|s| s.pure),
        beta_residual: spec.beta_residuals().iter().map(|x| x.abs()).fold(0.0, f64::max),
    }
}

/// Diagnostic for one ordered pair of objects.
#[derive(Clone, Debug, PartialEq)]
pub struct PairDiagnostic {
    /// Index of `E`.
    pub first: usize,
    /// Index of `F`.
    pub second: usize,
    /// Extrapolated `lim l/(1+|l|)` with `l = ln(m_E/m_F) + iπ(φ_E - φ_F)`.
    pub limit: Complex64,
    /// Modulus of the limit.
    pub modulus: f64,
    /// Whether successive extrapolations agree to `1e-3`.
    pub converged: bool,
    /// Whether `|l|` stays below its value at the largest radius, meaning the
    /// dominant exponents cancel.
    pub bounded: bool,
}

fn neville_at_zero(xs: &[f64], ys: &[Complex64]) -> Complex64 {
    let mut p = ys.to_vec();
    let m = xs.len();
    for level in 1..m {
        for i in 0..m - level {
            let (xi, xj) = (xs[i], xs[i + level]);
            p[i] = (p[i] * xj - p[i + 1] * xi) / (xj - xi);
        }
    }
    p[0]
}

/// Normalised log-ratio limits for every ordered pair of objects.
pub fn quasiconvergence_diagnostics(samples: &[PathSample]) -> Vec<PairDiagnostic> {
    let Some(first) = samples.first() else {
        return Vec::new();
    };
    let len = first.phases.len();
    let window = 5.min(samples.len());
    let mut out = Vec::with_capacity(len * len);
    for e in 0..len {
        for f in 0..len {
            let ls: Vec<Complex64> = samples
                .iter()
                .map(|s| Complex64::new(s.log_masses[e] - s.log_masses[f], PI * (s.phases[e] - s.phases[f])))
                .collect();
            let qs: Vec<Complex64> = ls.iter().map(|l| l / (1.0 + l.norm())).collect();
            let rs: Vec<f64> = samples.iter().map(|s| s.r).collect();
            let m = samples.len();
            let limit = neville_at_zero(&rs[m - window..], &qs[m - window..]);
            let converged = if m > window {
                let previous = neville_at_zero(&rs[m - window - 1..m - 1], &qs[m - window - 1..m - 1]);
                (limit - previous).norm() < 1e-3
            } else {
                false
            };
            let bounded = ls.iter().all(|l| l.norm() <= ls[0].norm() + 1.0);
            out.push(PairDiagnostic { first: e, second: f, limit, modulus: limit.norm(), converged, bounded });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connection::PreciseCharges;
    use crate::mutationflow::bend_to_admissible;
    use crate::quantum::{eigenvalues, QuantumParams};
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn objects(rates: &[Complex64]) -> Vec<PathObject> {
        rates.iter().enumerate().map(|(j, &u)| PathObject { label: format!("E{j}"), rate: u }).collect()
    }

    #[test]
    fn lex_order_examples() {
        assert!(lex_less(c(1.0, 0.0), c(2.0, 0.0)));
        assert!(!lex_less(c(1.0, 5.0), c(1.0, 4.0)));
        assert!(lex_less(c(1.0, 5.0), c(1.0, 5.0)));
    }

    #[test]
    fn sod_of_p1_is_a_single_component() {
        let u = eigenvalues(&QuantumParams::new(2, c(0.0, 0.0)).unwrap());
        let sod = limit_sod(&objects(&u), 1e-9).unwrap();
        assert_eq!(sod.components.len(), 1);
        assert_eq!(sod.components[0].labels.len(), 2);
        assert_eq!(sod.components[0].labels, vec![String::from("E0"), String::from("E1")]);
    }

    #[test]
    fn sod_of_p2_has_three_singletons() {
        let u = eigenvalues(&QuantumParams::new(3, c(0.0, 0.0)).unwrap());
        let sod = limit_sod(&objects(&u), 1e-9).unwrap();
        assert_eq!(sod.components.len(), 3);
        assert!(sod.components.windows(2).all(|w| w[0].key < w[1].key));
        assert_eq!(sod.components[0].labels, vec![String::from("E1")]);
    }

    #[test]
    fn ambiguous_band_is_reported() {
        let objs = objects(&[c(0.0, 0.0), c(1.0, 5e-9)]);
        assert!(matches!(limit_sod(&objs, 1e-9), Err(Error::AmbiguousGrouping { .. })));
    }

    #[test]
    fn monotonicity_examples() {
        assert!(check_monotone(&[c(1.0, 0.0)]));
        assert!(check_monotone(&[c(0.0, 1.0), c(0.0, 0.0), c(5.0, -1.0)]));
        assert!(!check_monotone(&[c(0.0, -1.0), c(0.0, 1.0)]));
    }

    #[test]
    fn unordered_rates_are_rejected() {
        let p = QuantumParams::new(2, c(0.0, 0.0)).unwrap();
        let ev = PreciseCharges::new(&p, 0.1).unwrap();
        let coll = ExceptionalCollection::twists(2, 0);
        let u = eigenvalues(&p);
        let err = build_path(p.tau(), &coll, &u, &ev, &PathOptions::default()).unwrap_err();
        assert_eq!(err, Error::NotOrdered);
    }

    #[test]
    fn p2_path_is_certified() {
        let p = QuantumParams::new(3, c(0.3, 0.2)).unwrap();
        let bent = bend_to_admissible(&p, 2, 0.02).unwrap();
        let u = eigenvalues(&p);
        let rates: Vec<Complex64> = bent.bijection.iter().map(|&a| u[a]).collect();
        assert!(check_monotone(&rates));
        let options = PathOptions { grid_points: 40, calibration_points: 80, ..PathOptions::default() };
        let ev = PreciseCharges::new(&p, options.r_min).unwrap();
        let spec = build_path(p.tau(), &bent.collection, &rates, &ev, &options).unwrap();
        assert!(spec.beta_residuals().iter().all(|x| x.abs() < 1e-12));
        assert!(spec.model_error < spec.error_budget());
        let samples = sample_path(&spec, &ev).unwrap();
        let at_delta = sample_at(&spec, &ev, spec.delta).unwrap();
        let cert = certify(&spec, &at_delta, &samples);
        assert!(cert.gaps_ok, "{samples:?}");
        assert!(cert.gaps_below_one_at_delta);
        assert!(cert.pure_region_found);
        let diag = quasiconvergence_diagnostics(&samples);
        for d in &diag {
            if d.first == d.second {
                assert_eq!(d.limit, c(0.0, 0.0));
            } else {
                assert!((d.modulus - 1.0).abs() < 0.05, "{d:?}");
            }
        }
    }

    proptest! {
        #[test]
        fn grouping_is_permutation_invariant(n in 2usize..7, re in -1.0f64..1.0, im in -3.0f64..3.0, seed in any::<u64>()) {
            let u = eigenvalues(&QuantumParams::new(n, c(re, im)).unwrap());
            let objs = objects(&u);
            let mut shuffled = objs.clone();
            let len = shuffled.len();
            for i in (1..len).rev() {
                let j = (seed.rotate_left(i as u32) % (i as u64 + 1)) as usize;
                shuffled.swap(i, j);
            }
            match (limit_sod(&objs, 1e-9), limit_sod(&shuffled, 1e-9)) {
                (Ok(a), Ok(b)) => {
                    prop_assert_eq!(&a, &b);
                    let mut keys: Vec<f64> = u.iter().map(|z| -z.im).collect();
                    keys.sort_by(f64::total_cmp);
                    let distinct = 1 + keys.windows(2).filter(|w| w[1] - w[0] > 1e-9).count();
                    prop_assert_eq!(a.components.len(), distinct);
                    let total: usize = a.components.iter().map(|c| c.labels.len()).sum();
                    prop_assert_eq!(total, n);
                }
                (Err(_), Err(_)) => {}
                _ => prop_assert!(false, "grouping depends on input order"),
            }
        }
    }
}
