//! Integration rays and the mutations they induce.
//!
//! Each slot of an exceptional collection is attached to an eigenvalue
//! `u_a` of `𝓔_τ`; its integration ray is `u_a + ℝ_{≥0} e^{iφ}`. When the
//! phase rotates or `τ` moves, a ray may sweep across another eigenvalue
//! `u_b`. With `f(t) = Im(e^{-iφ}(u_b - u_a))` and `Re(e^{-iφ}(u_b - u_a)) > 0`
//! at the sign change, a decreasing `f` gives a left mutation and an
//! increasing `f` a right mutation of the adjacent pair formed by the two
//! slots; the mutated object stays attached to `u_a`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::khomology::{chern_character, euler_form, ExceptionalCollection, KClass};
use crate::quantum::{self, QuantumParams};
use crate::{Error, Result};

const ANGLE_TOL: f64 = 1e-9;
const BISECTION_TOL: f64 = 1e-12;
const SIMULTANEITY_TOL: f64 = 1e-9;

/// Eigenvalues with an integration phase and slot attachments.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenRayConfig {
    params: QuantumParams,
    phase: f64,
    slots: Vec<usize>,
    sector_margin: f64,
}

impl EigenRayConfig {
    /// `slots[j]` is the canonical eigenvalue index attached to slot `j`; it
    /// must be a permutation of `0..n`.
    pub fn new(params: QuantumParams, phase: f64, slots: Vec<usize>) -> Result<Self> {
        let n = params.n();
        let mut seen = vec![false; n];
        if slots.len() != n {
            return Err(Error::InvalidArgument(format!("expected {n} slots, got {}", slots.len())));
        }
        for &s in &slots {
            if s >= n || seen[s] {
                return Err(Error::InvalidArgument("slots must be a permutation of 0..n".into()));
            }
            seen[s] = true;
        }
        if !phase.is_finite() {
            return Err(Error::InvalidArgument("phase must be finite".into()));
        }
        Ok(Self { params, phase, slots, sector_margin: 0.0 })
    }

    /// Helix attachment for `O(k), …, O(k+n-1)`: slot `j` carries the
    /// eigenvalue `u_a` with `a ≡ -(k + j) (mod n)`, whose radial direction
    /// is the straight ray of `O(k + j)`.
    pub fn helix(params: QuantumParams, k: i64, phase: f64) -> Self {
        let n = params.n() as i64;
        let slots = (0..n).map(|j| (-(k + j)).rem_euclid(n) as usize).collect();
        Self { params, phase, slots, sector_margin: 0.0 }
    }

    /// Sets the sector margin `ε` reported with the configuration.
    pub fn with_sector_margin(mut self, eps: f64) -> Self {
        self.sector_margin = eps;
        self
    }

    /// Quantum parameters.
    pub fn params(&self) -> &QuantumParams {
        &self.params
    }

    /// Integration phase `φ`.
    pub fn phase(&self) -> f64 {
        self.phase
    }

    /// Canonical eigenvalue index attached to each slot.
    pub fn slots(&self) -> &[usize] {
        &self.slots
    }

    /// Sector margin `ε`.
    pub fn sector_margin(&self) -> f64 {
        self.sector_margin
    }

    /// Eigenvalues in canonical order.
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        quantum::eigenvalues(&self.params)
    }

    /// Eigenvalue attached to each slot.
    pub fn slot_eigenvalues(&self) -> Vec<Complex64> {
        let u = self.eigenvalues();
        self.slots.iter().map(|&a| u[a]).collect()
    }

    fn slot_of(&self, canonical: usize) -> usize {
        self.slots.iter().position(|&a| a == canonical).unwrap_or(usize::MAX)
    }
}

/// Whether `e^{-iφ}(u_j - u_k) ∉ ℝ_{>0}` for all distinct pairs, with
/// angular tolerance `1e-9`.
pub fn is_admissible(config: &EigenRayConfig) -> bool {
    admissible_at(&config.eigenvalues(), config.phase)
}

fn admissible_at(u: &[Complex64], phase: f64) -> bool {
    let rot = Complex64::from_polar(1.0, -phase);
    for (j, uj) in u.iter().enumerate() {
        for (k, uk) in u.iter().enumerate() {
            if j != k {
                let w = rot * (uj - uk);
                if w.norm() == 0.0 || w.arg().abs() < ANGLE_TOL {
                    return false;
                }
            }
        }
    }
    true
}

/// What moved when a crossing happened.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EventKind {
    /// The phase rotated.
    RayRotation,
    /// The eigenvalues moved with `τ`.
    EigenvalueMotion,
    /// A straight ray was bent towards the target phase.
    RayBending,
}

/// Side of the ray on which the crossed eigenvalue lay before the event.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// Clockwise side of the ray (negative `Im(e^{-iφ}(u_b - u_a))`).
    FromRight,
    /// Counter-clockwise side of the ray.
    FromLeft,
}

/// Mutation applied at an event.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MutationKind {
    /// Right mutation.
    Right,
    /// Left mutation.
    Left,
}

/// One crossing and its effect on the collection.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowEvent {
    /// Flow parameter `t ∈ [0, 1]` of the crossing.
    pub t: f64,
    /// Rotation, eigenvalue motion or bending.
    pub kind: EventKind,
    /// Canonical index of the eigenvalue owning the moving ray.
    pub moving: usize,
    /// Canonical index of the crossed eigenvalue.
    pub stationary: usize,
    /// Side the crossed eigenvalue came from.
    pub side: Side,
    /// Mutation applied.
    pub mutation: MutationKind,
    /// Collection in slot order after the event.
    pub collection: Vec<KClass>,
    /// Slot attachments after the event.
    pub slots: Vec<usize>,
}

/// Result of a flow.
#[derive(Clone, Debug)]
pub struct FlowOutcome {
    /// Configuration at the end of the flow.
    pub config: EigenRayConfig,
    /// Collection at the end of the flow.
    pub collection: ExceptionalCollection,
    /// Events ordered by parameter.
    pub events: Vec<FlowEvent>,
}

/// A path `t ↦ τ(t)` on `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub enum TauPath {
    /// `τ(t) = τ`.
    Constant(Complex64),
    /// `τ(t) = (1 - t) start + t end`.
    Linear {
        /// Value at `t = 0`.
        start: Complex64,
        /// Value at `t = 1`.
        end: Complex64,
    },
}

impl TauPath {
    /// `τ(t)`.
    pub fn at(&self, t: f64) -> Complex64 {
        match *self {
            TauPath::Constant(tau) => tau,
            TauPath::Linear { start, end } => start + (end - start) * t,
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Crossing {
    t: f64,
    owner: usize,
    crossed: usize,
    increasing: bool,
}

/// Finds every crossing of a ray `u_a + ℝ_{≥0} e^{iφ(t)}` with another
/// eigenvalue `u_b(t)` for `t ∈ [0, 1]`.
fn scan_crossings<F>(state: F, n: usize, steps: usize) -> Result<Vec<Crossing>>
where
    F: Fn(f64) -> (Vec<Complex64>, f64),
{
    let steps = steps.max(1);
    let rel = |u: &[Complex64], phase: f64, a: usize, b: usize| Complex64::from_polar(1.0, -phase) * (u[b] - u[a]);
    let mut out = Vec::new();
    let mut prev = state(0.0);
    for i in 0..steps {
        let (t0, t1) = (i as f64 / steps as f64, (i + 1) as f64 / steps as f64);
        let next = state(t1);
        for a in 0..n {
            for b in 0..n {
                if a == b {
                    continue;
                }
                let f0 = rel(&prev.0, prev.1, a, b).im;
                let f1 = rel(&next.0, next.1, a, b).im;
                if (f0 > 0.0) == (f1 > 0.0) {
                    continue;
                }
                let (mut lo, mut hi, mut flo) = (t0, t1, f0);
                while hi - lo > BISECTION_TOL {
                    let mid = 0.5 * (lo + hi);
                    let (u, ph) = state(mid);
                    let fm = rel(&u, ph, a, b).im;
                    if (fm > 0.0) == (flo > 0.0) {
                        lo = mid;
                        flo = fm;
                    } else {
                        hi = mid;
                    }
                }
                let t = 0.5 * (lo + hi);
                let (u, ph) = state(t);
                let w = rel(&u, ph, a, b);
                if w.re <= 0.0 {
                    continue;
                }
                if w.norm() < ANGLE_TOL {
                    return Err(Error::NonGeneric(format!("eigenvalues {a} and {b} collide at t = {t}")));
                }
                out.push(Crossing { t, owner: a, crossed: b, increasing: f1 > f0 });
            }
        }
        prev = next;
    }
    out.sort_by(|x, y| x.t.total_cmp(&y.t));
    for w in out.windows(2) {
        if w[1].t - w[0].t < SIMULTANEITY_TOL {
            return Err(Error::NonGeneric(format!("simultaneous crossings at t = {}, perturb the path", w[0].t)));
        }
    }
    Ok(out)
}

fn apply_crossings(
    mut config: EigenRayConfig,
    mut collection: ExceptionalCollection,
    crossings: &[Crossing],
    kind: EventKind,
) -> Result<(EigenRayConfig, ExceptionalCollection, Vec<FlowEvent>)> {
    let mut events = Vec::with_capacity(crossings.len());
    for c in crossings {
        let sa = config.slot_of(c.owner);
        let sb = config.slot_of(c.crossed);
        let (mutation, side) = if c.increasing {
            if sa + 1 != sb {
                return Err(Error::NonGeneric(format!("non-adjacent crossing of slots {sa} and {sb} at t = {}", c.t)));
            }
            collection = collection.mutate_right(sa)?;
            (MutationKind::Right, Side::FromRight)
        } else {
            if sb + 1 != sa {
                return Err(Error::NonGeneric(format!("non-adjacent crossing of slots {sa} and {sb} at t = {}", c.t)));
            }
            collection = collection.mutate_left(sb)?;
            (MutationKind::Left, Side::FromLeft)
        };
        config.slots.swap(sa, sb);
        events.push(FlowEvent {
            t: c.t,
            kind,
            moving: c.owner,
            stationary: c.crossed,
            side,
            mutation,
            collection: collection.objects().to_vec(),
            slots: config.slots.clone(),
        });
    }
    Ok((config, collection, events))
}

fn check_collection(config: &EigenRayConfig, coll: &ExceptionalCollection) -> Result<()> {
    if coll.len() != config.params.n() || coll.n() != config.params.n() {
        return Err(Error::DimensionMismatch { left: config.params.n(), right: coll.len() });
    }
    Ok(())
}

/// Rotates the phase linearly from its current value to `target` and
/// mutates the collection at every crossing.
pub fn rotate_phase(
    config: &EigenRayConfig,
    coll: &ExceptionalCollection,
    target: f64,
    steps: usize,
) -> Result<FlowOutcome> {
    check_collection(config, coll)?;
    if !is_admissible(config) {
        return Err(Error::Inadmissible { t: 0.0 });
    }
    let u = config.eigenvalues();
    if !admissible_at(&u, target) {
        return Err(Error::Inadmissible { t: 1.0 });
    }
    let start = config.phase;
    let crossings = scan_crossings(|t| (u.clone(), start + (target - start) * t), u.len(), steps)?;
    let (mut cfg, collection, events) =
        apply_crossings(config.clone(), coll.clone(), &crossings, EventKind::RayRotation)?;
    cfg.phase = target;
    Ok(FlowOutcome { config: cfg, collection, events })
}

/// Moves `τ` along `path` at fixed phase and mutates the collection at every
/// crossing. The phase must be admissible at every sampled parameter.
pub fn move_tau(
    config: &EigenRayConfig,
    coll: &ExceptionalCollection,
    path: &TauPath,
    steps: usize,
) -> Result<FlowOutcome> {
    check_collection(config, coll)?;
    let steps = steps.max(1);
    let params = config.params;
    let eig = |t: f64| quantum::eigenvalues(&params.with_tau(path.at(t)));
    for i in 0..=steps {
        let t = i as f64 / steps as f64;
        if !admissible_at(&eig(t), config.phase) {
            return Err(Error::Inadmissible { t });
        }
    }
    let phase = config.phase;
    let crossings = scan_crossings(|t| (eig(t), phase), params.n(), steps)?;
    let (mut cfg, collection, events) =
        apply_crossings(config.clone(), coll.clone(), &crossings, EventKind::EigenvalueMotion)?;
    cfg.params = params.with_tau(path.at(1.0));
    Ok(FlowOutcome { config: cfg, collection, events })
}

/// Result of bending the straight rays of a helix segment.
#[derive(Clone, Debug)]
pub struct BendOutcome {
    /// The mutated collection, ordered by increasing `Im(-e^{-iφ} u_{i(j)})`.
    pub collection: ExceptionalCollection,
    /// `i(j)`: canonical eigenvalue index attached to slot `j`.
    pub bijection: Vec<usize>,
    /// Helix index in `k..k+n-1` congruent to `-i(j)` modulo `n`.
    pub helix_indices: Vec<i64>,
    /// Final configuration at the target phase.
    pub config: EigenRayConfig,
    /// Single-object mutations performed while bending, ordered by parameter.
    pub events: Vec<FlowEvent>,
}

/// Helix member `O(j)` with `j ≡ -b (mod n)` whose straight ray direction
/// `-2πj/n + Im τ/n` lies nearest to the angle `d`.
fn nearest_helix_member(n: usize, b: usize, d: f64, twist_arg: f64) -> i64 {
    let nn = n as i64;
    let step = 2.0 * PI;
    let base = -(b as i64);
    let theta = |j: i64| -2.0 * PI * j as f64 / n as f64 + twist_arg;
    let m = ((theta(base) - d) / step).round() as i64;
    let mut best = base + nn * m;
    for cand in [base + nn * (m - 1), base + nn * (m + 1)] {
        if (theta(cand) - d).abs() < (theta(best) - d).abs() {
            best = cand;
        }
    }
    best
}

/// Bends the straight rays of `O(k), …, O(k+n-1)` to the phase `φ`.
///
/// The ray of `O(k+j)` starts in the radial direction of `u_a`,
/// `a ≡ -(k+j) (mod n)`, and rotates on the universal cover to `φ`. Each
/// time it sweeps across `u_b`, the object is mutated across the helix
/// member sitting on `u_b` in that direction: counter-clockwise sweeps
/// give left mutations, clockwise sweeps right mutations. The bent objects
/// are finally ordered by increasing `Im(-e^{-iφ} u_a)`.
pub fn bend_to_admissible(params: &QuantumParams, k: i64, phase: f64) -> Result<BendOutcome> {
    let n = params.n();
    let u = quantum::eigenvalues(params);
    if !admissible_at(&u, phase) {
        return Err(Error::Inadmissible { t: 1.0 });
    }
    let twist_arg = params.tau().im / n as f64;
    struct Bent {
        class: KClass,
        canonical: usize,
    }
    let mut bent: Vec<Bent> = Vec::with_capacity(n);
    let mut raw_events: Vec<(f64, usize, usize, MutationKind, usize)> = Vec::new();
    let mut classes_by_step: Vec<Vec<(f64, KClass)>> = Vec::with_capacity(n);
    for s in 0..n {
        let j = k + s as i64;
        let a = (-j).rem_euclid(n as i64) as usize;
        let theta0 = -2.0 * PI * j as f64 / n as f64 + twist_arg;
        let (lo, hi) = if phase > theta0 { (theta0, phase) } else { (phase, theta0) };
        let mut hits: Vec<(f64, usize, f64)> = Vec::new();
        for b in 0..n {
            if b == a {
                continue;
            }
            let d = (u[b] - u[a]).arg();
            let mut m = ((lo - d) / (2.0 * PI)).ceil() as i64;
            while d + 2.0 * PI * m as f64 <= hi {
                let dm = d + 2.0 * PI * m as f64;
                if dm > lo {
                    hits.push(((dm - theta0).abs(), b, dm));
                }
                m += 1;
            }
        }
        hits.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut class = chern_character(n, j);
        let mut trail = Vec::with_capacity(hits.len());
        let sweep = (phase - theta0).abs();
        for (dist, b, dm) in hits {
            let member = chern_character(n, nearest_helix_member(n, b, dm, twist_arg));
            let (mutation, new_class) = if phase > theta0 {
                let c = euler_form(&member, &class)?;
                let label = format!("L_{{{}}}{}", member.label(), class.label());
                (MutationKind::Left, class.minus_multiple(&c, &member, label)?)
            } else {
                let c = euler_form(&class, &member)?;
                let label = format!("R_{{{}}}{}", member.label(), class.label());
                (MutationKind::Right, class.minus_multiple(&c, &member, label)?)
            };
            class = new_class;
            let t = if sweep > 0.0 { dist / sweep } else { 1.0 };
            raw_events.push((t, a, b, mutation, s));
            trail.push((t, class.clone()));
        }
        classes_by_step.push(trail);
        bent.push(Bent { class, canonical: a });
    }
    let rot = Complex64::from_polar(1.0, -phase);
    let key = |a: usize| (-(rot * u[a])).im;
    bent.sort_by(|x, y| key(x.canonical).total_cmp(&key(y.canonical)));
    let bijection: Vec<usize> = bent.iter().map(|b| b.canonical).collect();
    let helix_indices: Vec<i64> = bijection.iter().map(|&a| k + (-(a as i64) - k).rem_euclid(n as i64)).collect();
    let collection = ExceptionalCollection::new(bent.into_iter().map(|b| b.class).collect())?;

    raw_events.sort_by(|x, y| x.0.total_cmp(&y.0));
    let start_slots: Vec<usize> = (0..n as i64).map(|j| (-(k + j)).rem_euclid(n as i64) as usize).collect();
    let mut current: Vec<KClass> = (0..n as i64).map(|j| chern_character(n, k + j)).collect();
    let mut cursor = vec![0usize; n];
    let mut events = Vec::with_capacity(raw_events.len());
    for (t, a, b, mutation, s) in raw_events {
        current[s] = classes_by_step[s][cursor[s]].1.clone();
        cursor[s] += 1;
        let side = match mutation {
            MutationKind::Left => Side::FromLeft,
            MutationKind::Right => Side::FromRight,
        };
        events.push(FlowEvent {
            t,
            kind: EventKind::RayBending,
            moving: a,
            stationary: b,
            side,
            mutation,
            collection: current.clone(),
            slots: start_slots.clone(),
        });
    }
    let config = EigenRayConfig::new(*params, phase, bijection.clone())?;
    Ok(BendOutcome { collection, bijection, helix_indices, config, events })
}

/// A ray segment for plotting.
#[derive(Clone, Debug, PartialEq)]
pub struct RaySegment {
    /// Slot index.
    pub slot: usize,
    /// Canonical eigenvalue index.
    pub canonical: usize,
    /// Ray origin `u_a`.
    pub start: Complex64,
    /// Ray end `u_a + length · e^{iφ}`.
    pub end: Complex64,
}

/// Ray segments of a configuration, truncated at `length`.
pub fn ray_segments(config: &EigenRayConfig, length: f64) -> Vec<RaySegment> {
    let dir = Complex64::from_polar(length, config.phase);
    let u = config.eigenvalues();
    config
        .slots
        .iter()
        .enumerate()
        .map(|(slot, &a)| RaySegment { slot, canonical: a, start: u[a], end: u[a] + dir })
        .collect()
}

/// Human-readable rendering of a mutation kind.
pub fn mutation_name(m: MutationKind) -> String {
    match m {
        MutationKind::Right => "right".into(),
        MutationKind::Left => "left".into(),
    }
}
