//! Analysis, simulation and optimization of prioritized irregular-repetition
//! slotted ALOHA (IRSA).
//!
//! Sources are split into importance classes. Each class picks a replica
//! distribution and a source count; the receiver resolves collisions with
//! successive interference cancellation (SIC). This crate provides:
//!
//! * [`distribution`]: replica-count polynomials and the reference catalog,
//! * [`analysis`]: slot-degree models, per-class density evolution,
//!   the global stability test and traffic thresholds,
//! * [`simulator`]: random frame generation, the peeling decoder and a
//!   reproducible parallel Monte Carlo driver,
//! * [`optimizer`]: expected utility and the strategy selection algorithms.

#[cfg(test)]
macro_rules! assert_close {
    ($a:expr, $b:expr, $tol:expr) => {{
        let (a, b): (f64, f64) = ($a, $b);
        assert!((a - b).abs() <= $tol, "{} != {} (tol {})", a, b, $tol);
    }};
}

pub mod analysis;
pub mod distribution;
pub mod error;
pub mod optimizer;
pub mod scenario;
pub mod simulator;
pub mod utility;

pub use analysis::{
    DensityEvolutionOutcome, Ensemble, SlotDegreeModel, SlotModelMode, StabilityReport,
    ThresholdResult,
};
pub use distribution::{dominates, Catalog, DegreeDistribution, EdgePerspective};
pub use error::{IrsaError, Result};
pub use optimizer::{
    CandidateSpace, ClassCandidates, CountRange, OnRegion, OptimizationMethod, OptimizationResult,
    RegionMode,
};
pub use scenario::{ClassSpec, ScenarioConfig};
pub use simulator::{DecodeResult, FrameGraph, MonteCarloReport};
pub use utility::{UtilityFn, UtilityModel};
