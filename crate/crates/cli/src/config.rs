//! JSON experiment configuration.
//!
//! ```json
//! {
//!   "command": "sim",
//!   "scenario": {
//!     "slots": 200,
//!     "classes": [
//!       { "count": 50, "weight": 0.7, "dist": "e" },
//!       { "count": 50, "weight": 0.3, "dist": { "2": 0.5, "3": 0.5 } }
//!     ]
//!   },
//!   "sweep": { "from": 0.1, "to": 1.0, "step": 0.05 },
//!   "trials": 1000,
//!   "seed": 7
//! }
//! ```
//!
//! Distributions are either a catalog name (`"a"` … `"f"`) or an inline
//! degree → probability map.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use irsa_core::optimizer::{ClassCandidates, SimulatedCriterion};
use irsa_core::scenario::{ClassSpec, ScenarioConfig, DEFAULT_MAX_ITERS};
use irsa_core::utility::{UtilityFn, UtilityModel};
use irsa_core::{CandidateSpace, Catalog, CountRange, DegreeDistribution};
use serde::de::Error as _;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::table::Format;

pub const DEFAULT_TRIALS: u64 = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    De,
    Sim,
    Stability,
    Threshold,
    Region,
    Optimize,
    ReproduceFigure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Figure {
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
    Fig9,
    Fig10,
}

impl std::str::FromStr for Figure {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        serde_json::from_value(serde_json::Value::String(s.to_ascii_lowercase()))
            .map_err(|_| format!("unknown figure `{s}` (expected fig4 … fig10)"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum DistSpec {
    Named(String),
    Inline(BTreeMap<u32, f64>),
}

impl<'de> Deserialize<'de> for DistSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        // Untagged enums buffer map keys as strings, so integer keys are
        // parsed by hand.
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Named(String),
            Inline(BTreeMap<String, f64>),
        }
        match Raw::deserialize(d).map_err(|_| {
            D::Error::custom("expected a catalog name or a degree -> coefficient map")
        })? {
            Raw::Named(s) => Ok(DistSpec::Named(s)),
            Raw::Inline(m) => m
                .into_iter()
                .map(|(k, v)| {
                    k.parse::<u32>()
                        .map(|k| (k, v))
                        .map_err(|_| D::Error::custom(format!("degree `{k}` is not an integer")))
                })
                .collect::<std::result::Result<_, _>>()
                .map(DistSpec::Inline),
        }
    }
}

impl DistSpec {
    pub fn resolve(&self) -> Result<DegreeDistribution> {
        match self {
            DistSpec::Named(name) => Catalog::builtin()
                .get(name)
                .cloned()
                .ok_or_else(|| CliError::Invalid(format!("unknown distribution `{name}`"))),
            DistSpec::Inline(map) => {
                Ok(DegreeDistribution::new(map.iter().map(|(&d, &p)| (d, p)))?)
            }
        }
    }

    /// Short label for tables.
    pub fn label(&self) -> String {
        match self {
            DistSpec::Named(name) => name.clone(),
            DistSpec::Inline(map) => map
                .iter()
                .map(|(d, p)| format!("{p}x^{d}"))
                .collect::<Vec<_>>()
                .join("+"),
        }
    }
}

fn default_max_iters() -> u32 {
    DEFAULT_MAX_ITERS
}

fn is_default_max_iters(v: &u32) -> bool {
    *v == DEFAULT_MAX_ITERS
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassEntry {
    pub count: u64,
    pub weight: f64,
    pub dist: DistSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub slots: u64,
    #[serde(
        default = "default_max_iters",
        skip_serializing_if = "is_default_max_iters"
    )]
    pub max_iters: u32,
    pub classes: Vec<ClassEntry>,
}

impl ScenarioSpec {
    pub fn build(&self) -> Result<ScenarioConfig> {
        let classes = self
            .classes
            .iter()
            .map(|c| Ok(ClassSpec::new(c.count, c.weight, c.dist.resolve()?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(ScenarioConfig::new(self.slots, classes, self.max_iters)?)
    }
}

/// Traffic sweep `from, from + step, …` up to `to` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub from: f64,
    pub to: f64,
    pub step: f64,
}

impl SweepSpec {
    pub fn points(&self) -> Result<Vec<f64>> {
        if !self.step.is_finite() || self.step <= 0.0 {
            return Err(CliError::Invalid(format!(
                "sweep step must be positive, got {}",
                self.step
            )));
        }
        if !(self.from.is_finite() && self.to.is_finite()) || self.from < 0.0 || self.to < self.from
        {
            return Err(CliError::Invalid(format!(
                "empty sweep range [{}, {}]",
                self.from, self.to
            )));
        }
        let n = ((self.to - self.from) / self.step + 1e-9).floor() as usize;
        // Rounded to 12 decimals so that 0.1 + 2 * 0.05 prints as 0.2.
        Ok((0..=n)
            .map(|i| ((self.from + i as f64 * self.step) * 1e12).round() / 1e12)
            .collect())
    }
}

fn default_step() -> u64 {
    1
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RangeSpec {
    pub min: u64,
    pub max: u64,
    #[serde(default = "default_step")]
    pub step: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceClass {
    pub distributions: Vec<DistSpec>,
    pub counts: RangeSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceSpec {
    pub slots: u64,
    #[serde(
        default = "default_max_iters",
        skip_serializing_if = "is_default_max_iters"
    )]
    pub max_iters: u32,
    pub weights: Vec<f64>,
    pub classes: Vec<SpaceClass>,
}

impl SpaceSpec {
    pub fn build(&self) -> Result<CandidateSpace> {
        let classes = self
            .classes
            .iter()
            .map(|c| {
                Ok(ClassCandidates {
                    distributions: c
                        .distributions
                        .iter()
                        .map(DistSpec::resolve)
                        .collect::<Result<_>>()?,
                    counts: CountRange::new(c.counts.min, c.counts.max, c.counts.step)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CandidateSpace::new(self.slots, classes, self.max_iters)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegionKind {
    Theoretical,
    Safe,
    Simulated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: CommandKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scenario: Option<ScenarioSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<SpaceSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    /// Per-class utility functions; log utility when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub utility: Option<Vec<UtilityFn>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub figure: Option<Figure>,
    /// Candidate index per class for `region`; first candidate when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub assignment: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regions: Option<Vec<RegionKind>>,
    /// Boundary shrink for the safe region.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shrink: Option<f64>,
    /// Bisection tolerance for `threshold`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    /// Also run the exhaustive oracle in `optimize`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exhaustive: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
}

impl ExperimentConfig {
    /// Bare config for a shipped figure preset.
    pub fn for_figure(figure: Figure) -> Self {
        ExperimentConfig {
            command: CommandKind::ReproduceFigure,
            scenario: None,
            space: None,
            sweep: None,
            utility: None,
            figure: Some(figure),
            assignment: None,
            regions: None,
            shrink: None,
            tolerance: None,
            exhaustive: None,
            trials: None,
            seed: None,
            output: None,
            format: None,
        }
    }

    /// Parses JSON text; `origin` names the source in diagnostics.
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: ExperimentConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let field = e.path().to_string();
            let inner = e.into_inner();
            let message = inner.to_string();
            let message = match message.rfind(" at line ") {
                Some(i) => message[..i].to_string(),
                None => message,
            };
            CliError::Parse {
                file: origin.to_string(),
                line: inner.line(),
                column: inner.column(),
                field,
                message,
            }
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    /// Serialization hashed into result provenance: everything that
    /// affects the numbers, without the output destination and format.
    pub fn digest_json(&self) -> String {
        let mut c = self.clone();
        c.output = None;
        c.format = None;
        if c.seed.is_none() {
            c.seed = Some(self.seed());
        }
        c.to_json()
    }

    fn require<'a, T>(&self, field: &'a Option<T>, name: &str) -> Result<&'a T> {
        field.as_ref().ok_or_else(|| {
            CliError::Invalid(format!(
                "command `{}` needs a `{name}` section",
                serde_json::to_value(self.command)
                    .unwrap()
                    .as_str()
                    .unwrap()
            ))
        })
    }

    pub fn scenario_spec(&self) -> Result<&ScenarioSpec> {
        self.require(&self.scenario, "scenario")
    }

    pub fn space_spec(&self) -> Result<&SpaceSpec> {
        self.require(&self.space, "space")
    }

    /// Checks that the payload fits the command and that every section
    /// builds into a valid model object.
    pub fn validate(&self) -> Result<()> {
        if let Some(s) = &self.sweep {
            s.points()?;
        }
        if self.trials == Some(0) {
            return Err(CliError::Invalid("trials must be positive".into()));
        }
        if let Some(s) = self.shrink {
            if !(0.0..0.5).contains(&s) {
                return Err(CliError::Invalid(format!("shrink {s} outside [0, 0.5)")));
            }
        }
        if let Some(t) = self.tolerance {
            if t.is_nan() || t <= 0.0 {
                return Err(CliError::Invalid(format!(
                    "tolerance must be positive, got {t}"
                )));
            }
        }
        match self.command {
            CommandKind::De
            | CommandKind::Sim
            | CommandKind::Stability
            | CommandKind::Threshold => {
                let cfg = self.scenario_spec()?.build()?;
                if self.command == CommandKind::Sim {
                    self.utility_for(&cfg.weights())?;
                }
            }
            CommandKind::Region => {
                let space = self.space_spec()?.build()?;
                self.assignment_for(&space)?;
            }
            CommandKind::Optimize => {
                let spec = self.space_spec()?;
                let space = spec.build()?;
                self.utility_for(&spec.weights)?;
                if space.num_classes() != spec.weights.len() {
                    return Err(CliError::Invalid(format!(
                        "{} weights for {} classes",
                        spec.weights.len(),
                        space.num_classes()
                    )));
                }
            }
            CommandKind::ReproduceFigure => {
                self.require(&self.figure, "figure")?;
            }
        }
        Ok(())
    }

    pub fn trials(&self) -> u64 {
        self.trials.unwrap_or(DEFAULT_TRIALS)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn utility_for(&self, weights: &[f64]) -> Result<UtilityModel> {
        let functions = match &self.utility {
            Some(f) => f.clone(),
            None => vec![UtilityFn::Log; weights.len()],
        };
        Ok(UtilityModel::new(functions, weights.to_vec())?)
    }

    pub fn assignment_for(&self, space: &CandidateSpace) -> Result<Vec<usize>> {
        let a = self
            .assignment
            .clone()
            .unwrap_or_else(|| vec![0; space.num_classes()]);
        space.check_priority(&a)?;
        Ok(a)
    }

    pub fn simulated_criterion(&self) -> SimulatedCriterion {
        SimulatedCriterion {
            seed: self.seed(),
            min_trials: self.trials.unwrap_or(100),
            ..Default::default()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sim_json() -> &'static str {
        r#"{
  "command": "sim",
  "scenario": {
    "slots": 200,
    "classes": [
      { "count": 50, "weight": 0.7, "dist": "e" },
      { "count": 50, "weight": 0.3, "dist": { "2": 0.5, "3": 0.5 } }
    ]
  },
  "sweep": { "from": 0.1, "to": 1.0, "step": 0.05 },
  "trials": 10,
  "seed": 7
}"#
    }

    #[test]
    fn parses_named_and_inline_distributions() {
        let cfg = ExperimentConfig::parse(sim_json(), "t.json").unwrap();
        let s = cfg.scenario_spec().unwrap().build().unwrap();
        assert_eq!(
            s.classes()[0].dist,
            Catalog::builtin().get("e").unwrap().clone()
        );
        assert_eq!(s.classes()[1].dist.prob(3), 0.5);
        assert_eq!(s.max_iters(), 100);
        assert_eq!(cfg.sweep.unwrap().points().unwrap().len(), 19);
    }

    #[test]
    fn round_trip() {
        let cfg = ExperimentConfig::parse(sim_json(), "t.json").unwrap();
        let again = ExperimentConfig::parse(&cfg.to_json(), "t.json").unwrap();
        assert_eq!(cfg, again);
    }

    #[test]
    fn parse_error_names_line_and_field() {
        let bad = sim_json().replace("\"weight\": 0.3", "\"weight\": \"heavy\"");
        match ExperimentConfig::parse(&bad, "t.json") {
            Err(CliError::Parse {
                line, field, file, ..
            }) => {
                assert_eq!(line, 7);
                assert_eq!(field, "scenario.classes[1].weight");
                assert_eq!(file, "t.json");
            }
            other => panic!("unexpected {other:?}"),
        }
        let unknown = sim_json().replace("\"trials\"", "\"trails\"");
        assert!(matches!(
            ExperimentConfig::parse(&unknown, "t.json"),
            Err(CliError::Parse { .. })
        ));
    }

    #[test]
    fn validation_errors() {
        let empty = sim_json().replace("\"from\": 0.1, \"to\": 1.0", "\"from\": 0.5, \"to\": 0.2");
        assert!(matches!(
            ExperimentConfig::parse(&empty, "t"),
            Err(CliError::Invalid(_))
        ));
        let zero_step = sim_json().replace("\"step\": 0.05", "\"step\": 0");
        assert!(matches!(
            ExperimentConfig::parse(&zero_step, "t"),
            Err(CliError::Invalid(_))
        ));
        let weights = sim_json().replace("\"weight\": 0.3", "\"weight\": 0.4");
        assert!(matches!(
            ExperimentConfig::parse(&weights, "t"),
            Err(CliError::Model(_))
        ));
        let missing = r#"{ "command": "optimize" }"#;
        assert!(matches!(
            ExperimentConfig::parse(missing, "t"),
            Err(CliError::Invalid(_))
        ));
        let name = sim_json().replace("\"dist\": \"e\"", "\"dist\": \"z\"");
        assert!(matches!(
            ExperimentConfig::parse(&name, "t"),
            Err(CliError::Invalid(_))
        ));
    }

    #[test]
    fn sweep_points_are_clean() {
        let s = SweepSpec {
            from: 0.1,
            to: 0.3,
            step: 0.05,
        };
        assert_eq!(s.points().unwrap(), vec![0.1, 0.15, 0.2, 0.25, 0.3]);
    }

    #[test]
    fn figure_names() {
        assert_eq!("fig10".parse::<Figure>().unwrap(), Figure::Fig10);
        assert_eq!("FIG4".parse::<Figure>().unwrap(), Figure::Fig4);
        assert!("fig3".parse::<Figure>().is_err());
    }
}
