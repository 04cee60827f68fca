//! Fixtures shared by the criterion benches under `benches/`.

use irsa_core::scenario::DEFAULT_MAX_ITERS;
use irsa_core::{Catalog, ClassSpec, ScenarioConfig};

/// Two classes with equal counts at traffic `g`, weights (0.7, 0.3).
pub fn two_class(slots: u64, d1: &str, d2: &str, g: f64) -> ScenarioConfig {
    let cat = Catalog::builtin();
    let l = (g * slots as f64 / 2.0).round() as u64;
    ScenarioConfig::new(
        slots,
        vec![
            ClassSpec::new(l, 0.7, cat.get(d1).unwrap().clone()),
            ClassSpec::new(l, 0.3, cat.get(d2).unwrap().clone()),
        ],
        DEFAULT_MAX_ITERS,
    )
    .unwrap()
}
