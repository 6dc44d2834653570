//! The five subcommands. Each produces a JSON report and named output files.

use num_complex::Complex64;
use quantum_stability::connection::{
    asymptotic_limit_log, flat_frame, geometric_grid, max_eigenvalue_modulus, ChargeEvaluator, PreciseCharges,
};
use quantum_stability::khomology::ExceptionalCollection;
use quantum_stability::mutationflow::{
    bend_to_admissible, move_tau, mutation_name, ray_segments, rotate_phase, EigenRayConfig, EventKind, FlowEvent, Side,
};
use quantum_stability::pathsim::{
    build_path, certify, check_monotone, limit_sod, sample_at, sample_path, PathObject, PathOptions, PathSample, Sod,
};
use quantum_stability::quantum::{self, QuantumParams};
use quantum_stability::stability::{
    is_pure, make_stability, skyscraper_geometric_check, support_constant, HeartClass, StabilityDatum,
};
use quantum_stability::{Error, ErrorKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::{CollectionSpec, RunConfig};
use crate::error::CliError;
use crate::output::{csv_text, exact_class, fixed, labelled, pair, to_json};

const DEFAULT_BEND_PHASE: f64 = 0.02;
const ASYMPTOTIC_R_MAX: f64 = 1.0;
const ASYMPTOTIC_R_MIN: f64 = 0.08;
const GRID_RATIO: f64 = 0.85;
const FRAME_R_MIN: f64 = 0.05;
const FRAME_RATIO: f64 = 0.8;
const RESIDUAL_FACTOR: f64 = 100.0;
const RAY_LENGTH_FACTOR: f64 = 1.5;
const SUPPORT_COORDINATE_MAX: u32 = 100;

/// Result of a subcommand: the main JSON report and additional files.
#[derive(Clone, Debug)]
pub struct CommandOutput {
    /// Main report, also printed to standard output.
    pub report: String,
    /// File name and contents of every output file, the report included.
    pub files: Vec<(String, String)>,
}

/// Options given on the command line rather than in the config file.
#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions {
    /// Overrides the integrator tolerance.
    pub tol: Option<f64>,
    /// Seed for randomized probes.
    pub seed: u64,
}

type Labelled = (String, Vec<[i64; 2]>);

fn params(config: &RunConfig) -> Result<QuantumParams, CliError> {
    Ok(QuantumParams::new(config.n, config.tau_start())?)
}

fn single(name: &str, report: String) -> CommandOutput {
    CommandOutput { files: vec![(name.to_owned(), report.clone())], report }
}

fn twist_start(config: &RunConfig, default_first: i64, command: &str) -> Result<(i64, f64), CliError> {
    match config.collection {
        CollectionSpec::Twists { first, bend_phase } => {
            Ok((first.unwrap_or(default_first), bend_phase.unwrap_or(DEFAULT_BEND_PHASE)))
        }
        CollectionSpec::Omega => Err(CliError::Config(format!(
            "collection.kind: `{command}` needs a twist collection whose rays can be attached to eigenvalues"
        ))),
    }
}

fn ode_tol(config: &RunConfig, options: RunOptions) -> Result<f64, CliError> {
    let tol = options.tol.unwrap_or(config.tolerances.ode);
    if !(tol > 0.0) {
        return Err(CliError::Config(format!("--tol: must be positive, got {tol}")));
    }
    Ok(tol)
}

/// Report of `quantum`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantumReport {
    /// Rank.
    pub n: usize,
    /// Quantum parameter.
    pub tau: [f64; 2],
    /// Eigenvalues of quantum multiplication by the Euler field.
    pub eigenvalues: Vec<[f64; 2]>,
    /// Idempotents in the basis `1, h, …, h^{n-1}`.
    pub idempotents: Vec<Vec<[f64; 2]>>,
    /// Integrals of the normalized idempotents.
    pub normalized_integrals: Vec<[f64; 2]>,
    /// Diagonal of the grading operator.
    pub grading: Vec<Vec<f64>>,
}

/// Eigenvalues, idempotents and grading operator at a point `τ`.
pub fn cmd_quantum(config: &RunConfig) -> Result<CommandOutput, CliError> {
    let p = params(config)?;
    let data = quantum::idempotents(&p)?;
    let grading = quantum::grading_matrix(p.n());
    let report = QuantumReport {
        n: p.n(),
        tau: pair(p.tau()),
        eigenvalues: data.eigenvalues.iter().map(|&u| pair(u)).collect(),
        idempotents: data.idempotents.iter().map(|e| e.coeffs().iter().map(|&c| pair(c)).collect()).collect(),
        normalized_integrals: data.normalized.iter().map(|e| pair(e.integrate())).collect(),
        grading: (0..p.n()).map(|i| (0..p.n()).map(|j| grading[(i, j)]).collect()).collect(),
    };
    Ok(single("quantum.json", to_json(&report)))
}

/// One logged crossing.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EventRecord {
    /// Flow parameter of the crossing within its stage.
    pub t: f64,
    /// `rotation`, `motion` or `bending`.
    pub kind: String,
    /// Canonical index of the eigenvalue whose ray moved.
    pub moving: usize,
    /// Canonical index of the crossed eigenvalue.
    pub stationary: usize,
    /// `right` or `left`.
    pub side: String,
    /// `right` or `left`.
    pub mutation: String,
    /// Collection after the event as `[label, class]` pairs.
    pub collection: Vec<Labelled>,
}

/// Report of `flow`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowReport {
    /// Rank.
    pub n: usize,
    /// Crossings in the order they happened.
    pub events: Vec<EventRecord>,
    /// Final collection as `[label, class]` pairs.
    pub final_collection: Vec<Labelled>,
    /// Canonical eigenvalue index attached to each slot at the end.
    pub final_slots: Vec<usize>,
    /// Final phase.
    pub final_phase: f64,
    /// Final quantum parameter.
    pub final_tau: [f64; 2],
    /// Eigenvalues in slot order at the end.
    pub final_eigenvalues: Vec<[f64; 2]>,
}

fn event_record(e: &FlowEvent) -> Result<EventRecord, CliError> {
    let kind = match e.kind {
        EventKind::RayRotation => "rotation",
        EventKind::EigenvalueMotion => "motion",
        EventKind::RayBending => "bending",
    };
    let side = match e.side {
        Side::FromRight => "right",
        Side::FromLeft => "left",
    };
    Ok(EventRecord {
        t: e.t,
        kind: kind.into(),
        moving: e.moving,
        stationary: e.stationary,
        side: side.into(),
        mutation: mutation_name(e.mutation),
        collection: e.collection.iter().map(labelled).collect::<Result<_, _>>()?,
    })
}

fn ray_rows(frame: usize, config: &EigenRayConfig) -> Vec<Vec<String>> {
    let length = RAY_LENGTH_FACTOR * max_eigenvalue_modulus(config.params());
    ray_segments(config, length)
        .into_iter()
        .map(|s| {
            vec![
                frame.to_string(),
                s.slot.to_string(),
                s.canonical.to_string(),
                fixed(s.start.re),
                fixed(s.start.im),
                fixed(s.end.re),
                fixed(s.end.im),
            ]
        })
        .collect()
}

/// Rotates the phase to its target, then moves `τ` along its path, mutating
/// `O(first), …, O(first+n-1)` at every crossing.
pub fn cmd_flow(config: &RunConfig) -> Result<CommandOutput, CliError> {
    let (first, _) = twist_start(config, 0, "flow")?;
    let p = params(config)?;
    let mut cfg = EigenRayConfig::helix(p, first, config.flow_start_phase());
    let mut coll = ExceptionalCollection::twists(config.n, first);
    let mut events = Vec::new();
    let mut frames = vec![ray_rows(0, &cfg)];
    if let Some(target) = config.phase.target {
        if target != cfg.phase() {
            let out = rotate_phase(&cfg, &coll, target, config.phase.steps)?;
            events.extend(out.events);
            cfg = out.config;
            coll = out.collection;
            frames.push(ray_rows(frames.len(), &cfg));
        }
    }
    if let Some((path, steps)) = config.tau_path() {
        let out = move_tau(&cfg, &coll, &path, steps)?;
        events.extend(out.events);
        cfg = out.config;
        coll = out.collection;
        frames.push(ray_rows(frames.len(), &cfg));
    }
    let report = FlowReport {
        n: config.n,
        events: events.iter().map(event_record).collect::<Result<_, _>>()?,
        final_collection: coll.objects().iter().map(labelled).collect::<Result<_, _>>()?,
        final_slots: cfg.slots().to_vec(),
        final_phase: cfg.phase(),
        final_tau: pair(cfg.params().tau()),
        final_eigenvalues: cfg.slot_eigenvalues().into_iter().map(pair).collect(),
    };
    let header: Vec<String> =
        ["frame", "slot", "canonical", "start_re", "start_im", "end_re", "end_im"].map(String::from).to_vec();
    let rays = csv_text(&header, &frames.concat())?;
    let report = to_json(&report);
    Ok(CommandOutput { files: vec![("flow.json".into(), report.clone()), ("rays.csv".into(), rays)], report })
}

/// One component of a semiorthogonal decomposition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentRecord {
    /// Common value of `Im(-u)`.
    pub key: f64,
    /// Labels of the generators.
    pub labels: Vec<String>,
}

/// A semiorthogonal decomposition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SodRecord {
    /// Components ordered by increasing key.
    pub components: Vec<ComponentRecord>,
}

impl From<&Sod> for SodRecord {
    fn from(sod: &Sod) -> Self {
        SodRecord {
            components: sod
                .components
                .iter()
                .map(|c| ComponentRecord { key: c.key, labels: c.labels.clone() })
                .collect(),
        }
    }
}

/// Certificates of a path of stability conditions.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CertificateRecord {
    /// Every sample on the grid is a stability datum.
    pub gaps_ok: bool,
    /// Some sample satisfies the purity condition.
    pub pure_region_found: bool,
    /// The point class is stable at the start of the path.
    pub geometric_at_delta: bool,
    /// All consecutive phase gaps at the start are below one.
    pub gaps_below_one_at_delta: bool,
    /// All consecutive phase gaps at the start are within the model margin.
    pub gaps_within_margin_at_delta: bool,
    /// Largest consecutive phase gap at the start.
    pub max_gap_at_delta: Option<f64>,
    /// Largest deviation of the model phase differences from one.
    pub beta_residual: Option<f64>,
}

/// Parameters of a constructed path.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathParameters {
    /// Rescaling parameter.
    pub eps: f64,
    /// Radius where the exact phases match the model.
    pub delta_prime: f64,
    /// Radius where the path starts.
    pub delta: f64,
    /// Largest scaled gap of `Im(-u)`, negated.
    pub mu: f64,
    /// Smallest scaled gap of `Im(-u)`.
    pub mu_prime: f64,
    /// Phase shifts in radians.
    pub beta: Vec<f64>,
    /// Limits of the arguments of the rescaled charges.
    pub offsets: Vec<f64>,
    /// Largest deviation from the model phases on the calibration window.
    pub model_error: f64,
}

/// Report of `path`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathReport {
    /// `path` when the full path was built, `grouping` when only the limit
    /// decomposition could be computed.
    pub mode: String,
    /// Rank.
    pub n: usize,
    /// Quantum parameter.
    pub tau: [f64; 2],
    /// Bent collection as `[label, class]` pairs.
    pub collection: Vec<Labelled>,
    /// Exponential rate of each object.
    pub rates: Vec<[f64; 2]>,
    /// Limit semiorthogonal decomposition.
    pub sod: SodRecord,
    /// Path certificates.
    pub certificate: CertificateRecord,
    /// Path parameters, absent in grouping mode.
    pub parameters: Option<PathParameters>,
}

fn phase_table(n: usize, samples: &[PathSample]) -> Result<String, CliError> {
    let mut header = vec!["r".to_owned(), "inv_r".to_owned()];
    header.extend((0..n).map(|j| format!("phi_{j}")));
    header.extend((0..n).map(|j| format!("m_{j}")));
    header.extend(["valid".to_owned(), "pure".to_owned()]);
    let rows: Vec<Vec<String>> = samples
        .iter()
        .map(|s| {
            let mut row = vec![fixed(s.r), fixed(1.0 / s.r)];
            row.extend(s.phases.iter().map(|&p| fixed(p)));
            row.extend(s.masses.iter().map(|&m| fixed(m)));
            row.extend([s.valid.to_string(), s.pure.to_string()]);
            row
        })
        .collect();
    csv_text(&header, &rows)
}

fn soft_verdict(result: Result<bool, Error>) -> Result<bool, CliError> {
    match result {
        Ok(v) => Ok(v),
        Err(e) if e.kind() == ErrorKind::Numerical => Err(e.into()),
        Err(_) => Ok(false),
    }
}

/// Bends a twist collection to an admissible phase, builds the path of
/// stability conditions and extracts the limit decomposition. Falls back to
/// grouping mode when `Im(-u)` does not increase along the bent collection
/// by more than the grouping tolerance at every step.
pub fn cmd_path(config: &RunConfig) -> Result<CommandOutput, CliError> {
    let n = config.n;
    let (first, bend_phase) = twist_start(config, n.div_ceil(2) as i64, "path")?;
    let p = params(config)?;
    let bent = bend_to_admissible(&p, first, bend_phase)?;
    let u = quantum::eigenvalues(&p);
    let rates: Vec<Complex64> = bent.bijection.iter().map(|&a| u[a]).collect();
    let objects: Vec<PathObject> = bent
        .collection
        .objects()
        .iter()
        .zip(&rates)
        .map(|(o, &rate)| PathObject { label: o.label().to_owned(), rate })
        .collect();
    let sod = SodRecord::from(&limit_sod(&objects, config.tolerances.grouping)?);

    let defaults = PathOptions::default();
    let options = PathOptions {
        r_min: config.grid.r_min.unwrap_or(defaults.r_min),
        grid_points: config.grid.points.unwrap_or(defaults.grid_points),
        calibration_points: config.grid.calibration_points.unwrap_or(defaults.calibration_points),
        ..defaults
    };

    let mut files = Vec::new();
    let separated = sod.components.len() == n && check_monotone(&rates);
    let (mode, certificate, parameters) = if separated {
        let ev = PreciseCharges::new(&p, options.r_min)?;
        let spec = build_path(p.tau(), &bent.collection, &rates, &ev, &options)?;
        let samples = sample_path(&spec, &ev)?;
        let at_delta = sample_at(&spec, &ev, spec.delta)?;
        let cert = certify(&spec, &at_delta, &samples);
        let geometric = soft_verdict(skyscraper_geometric_check(
            &ExceptionalCollection::omega(n),
            &at_delta.masses,
            &at_delta.phases,
        ))?;
        files.push(("phases.csv".to_owned(), phase_table(n, &samples)?));
        let certificate = CertificateRecord {
            gaps_ok: cert.gaps_ok,
            pure_region_found: cert.pure_region_found,
            geometric_at_delta: geometric,
            gaps_below_one_at_delta: cert.gaps_below_one_at_delta,
            gaps_within_margin_at_delta: cert.gaps_within_margin_at_delta,
            max_gap_at_delta: Some(cert.max_gap_at_delta),
            beta_residual: Some(cert.beta_residual),
        };
        let parameters = PathParameters {
            eps: spec.eps,
            delta_prime: spec.delta_prime,
            delta: spec.delta,
            mu: spec.mu,
            mu_prime: spec.mu_prime,
            beta: spec.beta.clone(),
            offsets: spec.offsets.clone(),
            model_error: spec.model_error,
        };
        ("path", certificate, Some(parameters))
    } else {
        ("grouping", CertificateRecord::default(), None)
    };

    let report = PathReport {
        mode: mode.into(),
        n,
        tau: pair(p.tau()),
        collection: bent.collection.objects().iter().map(labelled).collect::<Result<_, _>>()?,
        rates: rates.iter().map(|&z| pair(z)).collect(),
        sod,
        certificate,
        parameters,
    };
    let json = to_json(&report);
    files.push(("path.json".into(), json.clone()));
    files.push(("sod.json".into(), to_json(&report.sod)));
    files.push(("certificate.json".into(), to_json(&report.certificate)));
    Ok(CommandOutput { report: json, files })
}

/// Report of `stability-check`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    /// Whether masses and phases define a stability condition.
    pub valid: bool,
    /// Reason the datum is invalid.
    pub error: Option<String>,
    /// Shift of each object into the standard heart.
    pub shifts: Vec<i64>,
    /// Constant of the support property.
    pub support_constant: Option<f64>,
    /// Whether the phase gaps satisfy the purity condition.
    pub pure: bool,
    /// Whether the point class is stable.
    pub geometric_candidate: bool,
    /// Number of random heart classes probed.
    pub support_samples: usize,
    /// Largest ratio of `|ch| / |Z|` to the support constant among them.
    pub worst_support_ratio: Option<f64>,
}

fn support_probe(datum: &StabilityDatum, samples: usize, seed: u64) -> Result<Option<f64>, CliError> {
    let n = datum.collection().n();
    let bound = support_constant(datum);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: Option<f64> = None;
    for _ in 0..samples {
        let b: Vec<u32> = (0..n).map(|_| rng.gen_range(0..SUPPORT_COORDINATE_MAX)).collect();
        if b.iter().all(|&x| x == 0) {
            continue;
        }
        let heart = HeartClass::new(b.into_iter().map(Into::into).collect())?;
        let class = exact_class(&heart.class(datum)?)?;
        let norm = class.iter().map(|[a, b]| (*a as f64 / *b as f64).powi(2)).sum::<f64>().sqrt();
        let ratio = norm / heart.central_charge(datum)?.norm() / bound;
        worst = Some(worst.map_or(ratio, |w| w.max(ratio)));
    }
    Ok(worst)
}

/// Validates masses and phases on the configured collection and reports
/// shifts, support constant, purity and stability of the point class. The
/// point-class verdict is reported for invalid data too, since it only
/// depends on the phases up to a common translation.
pub fn cmd_stability_check(config: &RunConfig, options: RunOptions) -> Result<CommandOutput, CliError> {
    let input = config
        .stability
        .as_ref()
        .ok_or_else(|| CliError::Config("stability: section with masses and phases is required".into()))?;
    let coll = match config.collection {
        CollectionSpec::Twists { first, .. } => ExceptionalCollection::twists(config.n, first.unwrap_or(0)),
        CollectionSpec::Omega => ExceptionalCollection::omega(config.n),
    };
    let geometric = soft_verdict(skyscraper_geometric_check(&coll, &input.masses, &input.phases))?;
    let report = match make_stability(&coll, &input.masses, &input.phases) {
        Ok(datum) => StabilityReport {
            valid: true,
            error: None,
            shifts: datum.shifts().to_vec(),
            support_constant: Some(support_constant(&datum)),
            pure: is_pure(&datum, config.n == 3),
            geometric_candidate: geometric,
            support_samples: input.support_samples,
            worst_support_ratio: support_probe(&datum, input.support_samples, options.seed)?,
        },
        Err(e) if e.kind() == ErrorKind::Input => StabilityReport {
            valid: false,
            error: Some(e.to_string()),
            shifts: Vec::new(),
            support_constant: None,
            pure: false,
            geometric_candidate: geometric,
            support_samples: 0,
            worst_support_ratio: None,
        },
        Err(e) => return Err(e.into()),
    };
    Ok(single("stability.json", to_json(&report)))
}

/// Small-radius limit of one rescaled central charge.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitRecord {
    /// Object label.
    pub label: String,
    /// Canonical index of its exponential rate.
    pub canonical: usize,
    /// Exponential rate.
    pub rate: [f64; 2],
    /// Extrapolated limit.
    pub limit: [f64; 2],
    /// Relative difference between extrapolations of consecutive orders.
    pub spread: f64,
    /// Residual `1/r` slope of the rescaled logarithm.
    pub slope: f64,
    /// Whether the samples approach the limit monotonically.
    pub monotone: bool,
    /// Whether the spread is small.
    pub converged: bool,
}

/// Report of `asymptotics`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticsReport {
    /// Rank.
    pub n: usize,
    /// Quantum parameter.
    pub tau: [f64; 2],
    /// Radii at which the charges were sampled.
    pub radii: Vec<f64>,
    /// One record per object of the bent collection.
    pub objects: Vec<LimitRecord>,
    /// Largest relative residual of the flat frame along the real axis.
    pub frame_residual: f64,
    /// Integrator tolerance.
    pub ode_tol: f64,
}

/// Certifies the flat frame along the positive real axis and extrapolates
/// the rescaled central charges of a bent twist collection as `r → 0⁺`.
pub fn cmd_asymptotics(config: &RunConfig, options: RunOptions) -> Result<CommandOutput, CliError> {
    let tol = ode_tol(config, options)?;
    let (first, bend_phase) = twist_start(config, 0, "asymptotics")?;
    let p = params(config)?;

    let frame_path: Vec<Complex64> =
        geometric_grid(10.0 * max_eigenvalue_modulus(&p), config.grid.r_min.unwrap_or(FRAME_R_MIN), FRAME_RATIO)?
            .into_iter()
            .map(|r| Complex64::new(r, 0.0))
            .collect();
    let frame = flat_frame(&p, &frame_path, tol)?;
    let frame_residual = frame.residuals()?.into_iter().fold(0.0, f64::max);
    if !(frame_residual <= RESIDUAL_FACTOR * tol) {
        return Err(Error::Numerical(format!(
            "flat frame residual {frame_residual:e} exceeds {RESIDUAL_FACTOR} times the tolerance"
        ))
        .into());
    }

    let bent = bend_to_admissible(&p, first, bend_phase)?;
    let u = quantum::eigenvalues(&p);
    let r_min = config.grid.r_min.unwrap_or(ASYMPTOTIC_R_MIN);
    let radii =
        geometric_grid(config.grid.r_max.unwrap_or(ASYMPTOTIC_R_MAX), r_min, config.grid.ratio.unwrap_or(GRID_RATIO))?;
    let ev = PreciseCharges::new(&p, r_min)?;
    let logs: Vec<Vec<Complex64>> =
        radii.iter().map(|&r| ev.log_charges(bent.collection.objects(), r)).collect::<Result<_, _>>()?;
    let mut objects = Vec::with_capacity(config.n);
    for (j, (&a, object)) in bent.bijection.iter().zip(bent.collection.objects()).enumerate() {
        let samples: Vec<(f64, Complex64)> = radii.iter().zip(&logs).map(|(&r, l)| (r, l[j])).collect();
        let est = asymptotic_limit_log(&samples, u[a], config.n)?;
        objects.push(LimitRecord {
            label: object.label().to_owned(),
            canonical: a,
            rate: pair(u[a]),
            limit: pair(est.limit),
            spread: est.spread,
            slope: est.slope,
            monotone: est.monotone,
            converged: est.converged,
        });
    }
    let report = AsymptoticsReport { n: config.n, tau: pair(p.tau()), radii, objects, frame_residual, ode_tol: tol };
    Ok(single("asymptotics.json", to_json(&report)))
}
