//! Declarative run configuration, read from TOML or JSON.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use quantum_stability::mutationflow::TauPath;
use serde::Deserialize;

use crate::error::CliError;

const DEFAULT_STEPS: usize = 2000;
const DEFAULT_ODE_TOL: f64 = 1e-10;
const DEFAULT_GROUPING_TOL: f64 = 1e-9;
const DEFAULT_FLOW_PHASE: f64 = 1e-3;

/// A complete run description.
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Rank of the cohomology ring of `ℙ^{n-1}`.
    pub n: usize,
    /// Fixed quantum parameter, or a linear path of them.
    #[serde(default)]
    pub tau: TauSpec,
    /// Phase of the integration rays and an optional rotation target.
    #[serde(default)]
    pub phase: PhaseSchedule,
    /// Starting exceptional collection.
    #[serde(default)]
    pub collection: CollectionSpec,
    /// Radius grid parameters; unset fields fall back to per-command defaults.
    #[serde(default)]
    pub grid: GridConfig,
    /// Numerical tolerances.
    #[serde(default)]
    pub tolerances: Tolerances,
    /// Masses and phases for `stability-check`.
    #[serde(default)]
    pub stability: Option<StabilityInput>,
}

/// `τ` as a point `[re, im]` or a linear path between two points.
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(untagged, expecting = "tau: expected [re, im] or a table with start, end, kind and steps")]
pub enum TauSpec {
    /// A single value.
    Point([f64; 2]),
    /// A linear path.
    Path(TauPathSpec),
}

impl Default for TauSpec {
    fn default() -> Self {
        TauSpec::Point([0.0, 0.0])
    }
}

/// A parametric path for `τ`.
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct TauPathSpec {
    /// Value at the start of the path.
    pub start: [f64; 2],
    /// Value at the end of the path.
    pub end: [f64; 2],
    /// Interpolation; only `linear` is supported.
    #[serde(default)]
    pub kind: PathKind,
    /// Number of sampling steps for crossing detection.
    #[serde(default = "default_steps")]
    pub steps: usize,
}

/// Interpolation kinds for `τ` paths.
#[derive(Clone, Copy, Debug, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum PathKind {
    /// Straight segment.
    #[default]
    Linear,
}

/// Rotation direction of the phase.
#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Chirality {
    /// Increasing phase.
    Counterclockwise,
    /// Decreasing phase.
    Clockwise,
}

/// Starting phase and optional rotation target.
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PhaseSchedule {
    /// Initial phase in radians.
    #[serde(default)]
    pub start: Option<f64>,
    /// Final phase in radians; no rotation when absent.
    #[serde(default)]
    pub target: Option<f64>,
    /// Expected rotation direction, checked against `start` and `target`.
    #[serde(default)]
    pub chirality: Option<Chirality>,
    /// Number of sampling steps for crossing detection.
    #[serde(default = "default_steps")]
    pub steps: usize,
}

impl Default for PhaseSchedule {
    fn default() -> Self {
        PhaseSchedule { start: None, target: None, chirality: None, steps: DEFAULT_STEPS }
    }
}

/// The starting exceptional collection.
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum CollectionSpec {
    /// `O(first), …, O(first+n-1)`, bent to `bend_phase` where a command
    /// needs an admissible collection.
    Twists {
        /// First twist; the default depends on the command.
        #[serde(default)]
        first: Option<i64>,
        /// Phase the straight rays are bent to.
        #[serde(default)]
        bend_phase: Option<f64>,
    },
    /// `Ω^{n-1}(n-1), …, Ω^1(1), O`.
    Omega,
}

impl Default for CollectionSpec {
    fn default() -> Self {
        CollectionSpec::Twists { first: None, bend_phase: None }
    }
}

/// Radius grid parameters.
#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    /// Largest radius of geometric grids.
    pub r_max: Option<f64>,
    /// Smallest radius.
    pub r_min: Option<f64>,
    /// Ratio of consecutive radii in geometric grids.
    pub ratio: Option<f64>,
    /// Number of points of the phase table.
    pub points: Option<usize>,
    /// Number of points used to calibrate the path.
    pub calibration_points: Option<usize>,
}

/// Numerical tolerances.
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Local tolerance of the flat-frame integrator.
    #[serde(default = "default_ode_tol")]
    pub ode: f64,
    /// Tolerance for grouping equal `Im(-u)` into one component.
    #[serde(default = "default_grouping_tol")]
    pub grouping: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { ode: DEFAULT_ODE_TOL, grouping: DEFAULT_GROUPING_TOL }
    }
}

/// Masses and phases of a stability datum.
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct StabilityInput {
    /// Positive masses, one per object.
    pub masses: Vec<f64>,
    /// Phases, one per object.
    pub phases: Vec<f64>,
    /// Number of random heart classes used to probe the support property.
    #[serde(default = "default_support_samples")]
    pub support_samples: usize,
}

fn default_steps() -> usize {
    DEFAULT_STEPS
}

fn default_ode_tol() -> f64 {
    DEFAULT_ODE_TOL
}

fn default_grouping_tol() -> f64 {
    DEFAULT_GROUPING_TOL
}

fn default_support_samples() -> usize {
    1000
}

fn complex(v: [f64; 2]) -> Complex64 {
    Complex64::new(v[0], v[1])
}

impl RunConfig {
    /// Reads a configuration file. Files ending in `.json` are parsed as
    /// JSON, everything else as TOML.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
        let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
        let config = if is_json { Self::from_json(&text)? } else { Self::from_toml(&text)? };
        config.validate()?;
        Ok(config)
    }

    /// Parses TOML text without validating.
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    /// Parses JSON text without validating.
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    /// Checks the invariants that serde cannot express.
    pub fn validate(&self) -> Result<(), CliError> {
        let fail = |msg: String| Err(CliError::Config(msg));
        if self.n < 2 {
            return fail(format!("n: must be at least 2, got {}", self.n));
        }
        let finite = |v: [f64; 2]| v.iter().all(|x| x.is_finite());
        match &self.tau {
            TauSpec::Point(v) if !finite(*v) => return fail("tau: entries must be finite".into()),
            TauSpec::Path(p) if !finite(p.start) || !finite(p.end) => {
                return fail("tau: start and end must be finite".into())
            }
            TauSpec::Path(p) if p.steps == 0 => return fail("tau.steps: must be positive".into()),
            _ => {}
        }
        if self.phase.steps == 0 {
            return fail("phase.steps: must be positive".into());
        }
        if let (Some(start), Some(target), Some(chirality)) =
            (self.phase.start, self.phase.target, self.phase.chirality)
        {
            let matches = match chirality {
                Chirality::Counterclockwise => target >= start,
                Chirality::Clockwise => target <= start,
            };
            if !matches {
                return fail(format!("phase.chirality: {chirality:?} rotation cannot go from {start} to {target}"));
            }
        }
        if !(self.tolerances.ode > 0.0) {
            return fail("tolerances.ode: must be positive".into());
        }
        if !(self.tolerances.grouping > 0.0) {
            return fail("tolerances.grouping: must be positive".into());
        }
        let g = &self.grid;
        if g.r_min.is_some_and(|r| !(r > 0.0)) {
            return fail("grid.r_min: must be positive".into());
        }
        if let (Some(hi), Some(lo)) = (g.r_max, g.r_min) {
            if !(hi > lo) {
                return fail("grid: r_max must exceed r_min so the grid decreases".into());
            }
        }
        if g.ratio.is_some_and(|q| !(q > 0.0 && q < 1.0)) {
            return fail("grid.ratio: must lie in (0, 1)".into());
        }
        if g.points.is_some_and(|p| p < 2) || g.calibration_points.is_some_and(|p| p < 2) {
            return fail("grid: point counts must be at least 2".into());
        }
        if let Some(s) = &self.stability {
            if s.masses.len() != self.n || s.phases.len() != self.n {
                return fail(format!("stability: expected {} masses and phases", self.n));
            }
        }
        Ok(())
    }

    /// `τ` at the start of the run.
    pub fn tau_start(&self) -> Complex64 {
        match &self.tau {
            TauSpec::Point(v) => complex(*v),
            TauSpec::Path(p) => complex(p.start),
        }
    }

    /// The `τ` path, when one was given.
    pub fn tau_path(&self) -> Option<(TauPath, usize)> {
        match &self.tau {
            TauSpec::Point(_) => None,
            TauSpec::Path(p) => Some((TauPath::Linear { start: complex(p.start), end: complex(p.end) }, p.steps)),
        }
    }

    /// Phase the flow starts from.
    pub fn flow_start_phase(&self) -> f64 {
        self.phase.start.unwrap_or(DEFAULT_FLOW_PHASE)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_toml_uses_defaults() {
        let cfg = RunConfig::from_toml("n = 3").unwrap();
        assert_eq!(cfg.tau, TauSpec::Point([0.0, 0.0]));
        assert_eq!(cfg.collection, CollectionSpec::default());
        assert_eq!(cfg.tolerances, Tolerances::default());
        cfg.validate().unwrap();
    }

    #[test]
    fn toml_and_json_agree() {
        let toml = r#"
            n = 3
            [tau]
            start = [0.0, 0.0]
            end = [0.0, 4.0]
            steps = 100
            [phase]
            start = 0.001
            target = 1.5
            chirality = "counterclockwise"
            [collection]
            kind = "twists"
            first = 0
        "#;
        let json = r#"{"n": 3,
            "tau": {"start": [0.0, 0.0], "end": [0.0, 4.0], "steps": 100},
            "phase": {"start": 0.001, "target": 1.5, "chirality": "counterclockwise"},
            "collection": {"kind": "twists", "first": 0}}"#;
        let a = RunConfig::from_toml(toml).unwrap();
        let b = RunConfig::from_json(json).unwrap();
        assert_eq!(a, b);
        a.validate().unwrap();
        assert!(a.tau_path().is_some());
    }

    #[test]
    fn omega_collection_parses() {
        let cfg = RunConfig::from_toml("n = 4\n[collection]\nkind = \"omega\"").unwrap();
        assert_eq!(cfg.collection, CollectionSpec::Omega);
    }

    #[test]
    fn invariants_are_enforced() {
        for text in [
            "n = 1",
            "n = 3\n[tolerances]\node = 0.0",
            "n = 3\n[tolerances]\ngrouping = -1.0",
            "n = 3\n[grid]\nr_max = 0.1\nr_min = 0.2",
            "n = 3\n[phase]\nstart = 1.0\ntarget = 0.5\nchirality = \"counterclockwise\"",
            "n = 3\n[stability]\nmasses = [1.0]\nphases = [0.0]",
        ] {
            let cfg = RunConfig::from_toml(text).unwrap();
            assert!(matches!(cfg.validate(), Err(CliError::Config(_))), "{text}");
        }
    }

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(RunConfig::from_toml("n = 3\ntypo = 1").is_err());
    }
}
