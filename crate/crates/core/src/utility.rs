use serde::{Deserialize, Serialize};

use crate::error::{IrsaError, Result};

/// Per-class utility of receiving `r` messages. Every variant is
/// nondecreasing in `r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UtilityFn {
    /// `ln r`, with `U(0) = 0`.
    Log,
    /// `r`.
    Linear,
}

impl UtilityFn {
    pub fn eval(self, received: u64) -> f64 {
        match self {
            UtilityFn::Log if received == 0 => 0.0,
            UtilityFn::Log => (received as f64).ln(),
            UtilityFn::Linear => received as f64,
        }
    }
}

/// Per-class utility functions and importance weights `w_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UtilityModel {
    pub functions: Vec<UtilityFn>,
    pub weights: Vec<f64>,
}

impl UtilityModel {
    pub fn new(functions: Vec<UtilityFn>, weights: Vec<f64>) -> Result<Self> {
        if functions.len() != weights.len() || functions.is_empty() {
            return Err(IrsaError::Config(format!(
                "{} utility functions for {} weights",
                functions.len(),
                weights.len()
            )));
        }
        if weights.iter().any(|w| !(0.0..=1.0).contains(w)) {
            return Err(IrsaError::Config(
                "utility weights must lie in [0, 1]".into(),
            ));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(IrsaError::Config(format!(
                "utility weights sum to {total}, expected 1"
            )));
        }
        Ok(UtilityModel { functions, weights })
    }

    /// Log utility in every class.
    pub fn log(weights: Vec<f64>) -> Result<Self> {
        Self::new(vec![UtilityFn::Log; weights.len()], weights)
    }

    pub fn num_classes(&self) -> usize {
        self.weights.len()
    }

    /// `Σ_k w_k U_k(R_k)`.
    pub fn score(&self, received: &[u64]) -> f64 {
        self.functions
            .iter()
            .zip(&self.weights)
            .zip(received)
            .map(|((f, w), &r)| w * f.eval(r))
            .sum()
    }
}
