use serde::{Deserialize, Serialize};

use crate::distribution::{DegreeDistribution, NORMALIZATION_TOL};
use crate::error::{IrsaError, Result};

/// Iteration cap used throughout the reference experiments.
pub const DEFAULT_MAX_ITERS: u32 = 100;

/// One importance class: how many sources it holds, how much it matters and
/// how its sources replicate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassSpec {
    pub count: u64,
    pub weight: f64,
    pub dist: DegreeDistribution,
}

impl ClassSpec {
    pub fn new(count: u64, weight: f64, dist: DegreeDistribution) -> Self {
        ClassSpec {
            count,
            weight,
            dist,
        }
    }
}

/// A frame of `slots` slots shared by classes ordered from most to least
/// important.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawScenario")]
pub struct ScenarioConfig {
    slots: u64,
    classes: Vec<ClassSpec>,
    max_iters: u32,
}

#[derive(Deserialize)]
struct RawScenario {
    slots: u64,
    classes: Vec<ClassSpec>,
    max_iters: u32,
}

impl TryFrom<RawScenario> for ScenarioConfig {
    type Error = IrsaError;

    fn try_from(raw: RawScenario) -> Result<Self> {
        ScenarioConfig::new(raw.slots, raw.classes, raw.max_iters)
    }
}

impl ScenarioConfig {
    pub fn new(slots: u64, classes: Vec<ClassSpec>, max_iters: u32) -> Result<Self> {
        if slots == 0 {
            return Err(IrsaError::Config(
                "frame must have at least one slot".into(),
            ));
        }
        if max_iters == 0 {
            return Err(IrsaError::Config("iteration cap must be at least 1".into()));
        }
        if classes.is_empty() {
            return Err(IrsaError::Config("at least one class is required".into()));
        }
        let mut total_weight = 0.0;
        for (k, c) in classes.iter().enumerate() {
            if !(0.0..=1.0).contains(&c.weight) {
                return Err(IrsaError::Config(format!(
                    "class {k} weight {} outside [0, 1]",
                    c.weight
                )));
            }
            total_weight += c.weight;
            c.dist.validate()?;
            if u64::from(c.dist.max_degree()) > slots {
                return Err(IrsaError::Config(format!(
                    "class {k} may send {} replicas but the frame has {slots} slots",
                    c.dist.max_degree()
                )));
            }
        }
        if (total_weight - 1.0).abs() > NORMALIZATION_TOL {
            return Err(IrsaError::Config(format!(
                "class weights sum to {total_weight}, expected 1"
            )));
        }
        Ok(ScenarioConfig {
            slots,
            classes,
            max_iters,
        })
    }

    pub fn slots(&self) -> u64 {
        self.slots
    }

    pub fn classes(&self) -> &[ClassSpec] {
        &self.classes
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn max_iters(&self) -> u32 {
        self.max_iters
    }

    /// `M`, the total number of sources.
    pub fn total_sources(&self) -> u64 {
        self.classes.iter().map(|c| c.count).sum()
    }

    /// `G = M / N`.
    pub fn traffic(&self) -> f64 {
        self.total_sources() as f64 / self.slots as f64
    }

    pub fn counts(&self) -> Vec<u64> {
        self.classes.iter().map(|c| c.count).collect()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.classes.iter().map(|c| c.weight).collect()
    }

    /// Same scenario with new per-class source counts.
    pub fn with_counts(&self, counts: &[u64]) -> Result<Self> {
        if counts.len() != self.classes.len() {
            return Err(IrsaError::Config(format!(
                "{} counts given for {} classes",
                counts.len(),
                self.classes.len()
            )));
        }
        let mut cfg = self.clone();
        for (c, &n) in cfg.classes.iter_mut().zip(counts) {
            c.count = n;
        }
        Ok(cfg)
    }

    pub fn with_max_iters(&self, max_iters: u32) -> Result<Self> {
        ScenarioConfig::new(self.slots, self.classes.clone(), max_iters)
    }

    /// Counts rescaled to traffic `g` keeping the class ratios, each rounded
    /// to the nearest integer. A scenario with no sources is split evenly.
    pub fn at_traffic(&self, g: f64) -> Result<Self> {
        if !(g >= 0.0 && g.is_finite()) {
            return Err(IrsaError::Domain {
                what: "traffic",
                value: g,
                domain: "[0, inf)",
            });
        }
        let ratios = self.class_ratios();
        let counts: Vec<u64> = ratios
            .iter()
            .map(|a| (a * g * self.slots as f64).round() as u64)
            .collect();
        self.with_counts(&counts)
    }

    /// `α_k = L_k / M`; uniform when there are no sources.
    pub fn class_ratios(&self) -> Vec<f64> {
        let m = self.total_sources();
        if m == 0 {
            let k = self.classes.len() as f64;
            return vec![1.0 / k; self.classes.len()];
        }
        self.classes
            .iter()
            .map(|c| c.count as f64 / m as f64)
            .collect()
    }
}
