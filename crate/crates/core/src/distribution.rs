//! Node- and edge-perspective replica-count distributions.
//!
//! A [`DegreeDistribution`] is the probability polynomial `Λ(x) = Σ Λ_l x^l`
//! over the number of replicas a source sends in one frame. Its
//! edge-perspective form `λ(x) = Λ'(x) / Λ'(1)` is what the iterative
//! decoding analysis consumes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{check_unit, IrsaError, Result};

/// Tolerance on `Σ Λ_l = 1`.
pub const NORMALIZATION_TOL: f64 = 1e-9;

/// Default resolution of the grid used by [`dominates`].
pub const DEFAULT_DOMINANCE_STEP: f64 = 1e-3;

/// Slack absorbed by [`dominates`] at each grid point.
const DOMINANCE_SLACK: f64 = 1e-12;

/// Node-perspective degree distribution over replica counts.
///
/// Coefficients are stored sparsely, sorted by degree, with zero entries
/// dropped. Degree 0 is rejected: every active source sends at least one
/// replica.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<u32, f64>", into = "BTreeMap<u32, f64>")]
pub struct DegreeDistribution {
    coeffs: Vec<(u32, f64)>,
    label: Option<String>,
}

impl DegreeDistribution {
    /// Builds and validates a distribution from `(degree, probability)` pairs.
    pub fn new(coeffs: impl IntoIterator<Item = (u32, f64)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (degree, value) in coeffs {
            if map.insert(degree, value).is_some() {
                return Err(IrsaError::DuplicateDegree { degree });
            }
        }
        let dist = DegreeDistribution {
            coeffs: map.into_iter().filter(|&(_, v)| v != 0.0).collect(),
            label: None,
        };
        validate_coeffs(dist.coeffs.iter().copied())?;
        Ok(dist)
    }

    /// Single-degree distribution `x^degree`.
    pub fn regular(degree: u32) -> Result<Self> {
        Self::new([(degree, 1.0)])
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// Nonzero `(degree, Λ_l)` pairs in increasing degree order.
    pub fn coeffs(&self) -> &[(u32, f64)] {
        &self.coeffs
    }

    /// Probability of sending exactly `degree` replicas.
    pub fn prob(&self, degree: u32) -> f64 {
        self.coeffs
            .binary_search_by_key(&degree, |&(d, _)| d)
            .map(|i| self.coeffs[i].1)
            .unwrap_or(0.0)
    }

    pub fn min_degree(&self) -> u32 {
        self.coeffs.first().map(|&(d, _)| d).unwrap_or(0)
    }

    pub fn max_degree(&self) -> u32 {
        self.coeffs.last().map(|&(d, _)| d).unwrap_or(0)
    }

    /// Re-checks the distribution invariants.
    pub fn validate(&self) -> Result<&Self> {
        validate_coeffs(self.coeffs.iter().copied())?;
        Ok(self)
    }

    /// `Λ(x)` for `x ∈ [0, 1]`.
    pub fn evaluate(&self, x: f64) -> Result<f64> {
        check_unit("x", x)?;
        Ok(self.poly(x))
    }

    pub(crate) fn poly(&self, x: f64) -> f64 {
        self.coeffs.iter().map(|&(d, c)| c * x.powi(d as i32)).sum()
    }

    /// `Λ'(1)`, the average number of replicas per source.
    pub fn mean_degree(&self) -> f64 {
        self.coeffs.iter().map(|&(d, c)| d as f64 * c).sum()
    }

    pub fn to_edge_perspective(&self) -> EdgePerspective {
        let mean = self.mean_degree();
        EdgePerspective {
            coeffs: self
                .coeffs
                .iter()
                .map(|&(d, c)| (d, d as f64 * c / mean))
                .collect(),
        }
    }
}

fn validate_coeffs(coeffs: impl Iterator<Item = (u32, f64)>) -> Result<()> {
    let mut sum = 0.0;
    for (degree, value) in coeffs {
        if degree == 0 {
            return Err(IrsaError::ZeroDegree);
        }
        if !value.is_finite() {
            return Err(IrsaError::NonFiniteCoefficient { degree });
        }
        if value < 0.0 {
            return Err(IrsaError::NegativeCoefficient { degree, value });
        }
        sum += value;
    }
    if (sum - 1.0).abs() > NORMALIZATION_TOL {
        return Err(IrsaError::Normalization { sum });
    }
    Ok(())
}

impl TryFrom<BTreeMap<u32, f64>> for DegreeDistribution {
    type Error = IrsaError;

    fn try_from(map: BTreeMap<u32, f64>) -> Result<Self> {
        Self::new(map)
    }
}

impl From<DegreeDistribution> for BTreeMap<u32, f64> {
    fn from(d: DegreeDistribution) -> Self {
        d.coeffs.into_iter().collect()
    }
}

/// Edge-perspective distribution `λ_l = l Λ_l / Λ'(1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgePerspective {
    coeffs: Vec<(u32, f64)>,
}

impl EdgePerspective {
    pub fn coeffs(&self) -> &[(u32, f64)] {
        &self.coeffs
    }

    pub fn prob(&self, degree: u32) -> f64 {
        self.coeffs
            .iter()
            .find(|&&(d, _)| d == degree)
            .map_or(0.0, |&(_, c)| c)
    }

    /// `λ(z) = Σ λ_l z^(l-1)` for `z ∈ [0, 1]`.
    pub fn eval_edge(&self, z: f64) -> Result<f64> {
        check_unit("z", z)?;
        Ok(self.poly(z))
    }

    pub(crate) fn poly(&self, z: f64) -> f64 {
        self.coeffs
            .iter()
            .map(|&(d, c)| c * z.powi(d as i32 - 1))
            .sum()
    }

    /// `λ'(0)`, equal to the weight on degree-2 nodes.
    pub(crate) fn slope_at_origin(&self) -> f64 {
        self.prob(2)
    }
}

/// Grid points `0, step, 2 step, …, 1`, always ending exactly at 1.
pub(crate) fn unit_grid(step: f64, include_zero: bool) -> impl Iterator<Item = f64> {
    assert!(
        step > 0.0 && step <= 0.01,
        "grid step {step} outside (0, 0.01]"
    );
    let n = (1.0 / step).round() as usize;
    let exact = ((n as f64) * step - 1.0).abs() < 1e-12;
    let start = usize::from(!include_zero);
    (start..=n)
        .map(move |i| (i as f64 * step).min(1.0))
        .chain((!exact).then_some(1.0))
}

/// `true` iff `low(x) ≤ high(x)` at every point of a uniform grid on `[0, 1]`.
///
/// `low` belongs to the more important class: a pointwise-smaller
/// polynomial yields a smaller residual error at every decoding iteration.
pub fn dominates(low: &DegreeDistribution, high: &DegreeDistribution, grid_step: f64) -> bool {
    unit_grid(grid_step, true).all(|x| low.poly(x) <= high.poly(x) + DOMINANCE_SLACK)
}

/// Named collection of distributions.
#[derive(Debug, Clone, PartialEq)]
pub struct Catalog {
    entries: Vec<DegreeDistribution>,
}

impl Catalog {
    pub fn new(entries: Vec<DegreeDistribution>) -> Result<Self> {
        for (i, e) in entries.iter().enumerate() {
            e.validate()?;
            let name = e
                .label()
                .ok_or_else(|| IrsaError::Config(format!("catalog entry {i} has no name")))?;
            if entries[..i].iter().any(|o| o.label() == Some(name)) {
                return Err(IrsaError::Config(format!(
                    "duplicate catalog name {name:?}"
                )));
            }
        }
        Ok(Catalog { entries })
    }

    /// The six reference distributions `a` … `f`, tuned for high decoding
    /// thresholds.
    pub fn builtin() -> Self {
        let table: [(&str, &[(u32, f64)]); 6] = [
            ("a", &[(2, 0.5102), (4, 0.4898)]),
            ("b", &[(2, 0.5631), (3, 0.0436), (5, 0.3933)]),
            ("c", &[(2, 0.5465), (3, 0.1623), (6, 0.2912)]),
            ("d", &[(2, 0.5), (3, 0.28), (8, 0.22)]),
            (
                "e",
                &[
                    (3, 0.08),
                    (4, 0.14),
                    (5, 0.3),
                    (6, 0.17),
                    (7, 0.14),
                    (9, 0.17),
                ],
            ),
            (
                "f",
                &[
                    (2, 0.4977),
                    (3, 0.2207),
                    (4, 0.0381),
                    (5, 0.0756),
                    (6, 0.0398),
                    (7, 0.0009),
                    (8, 0.0088),
                    (9, 0.0068),
                    (11, 0.0030),
                    (14, 0.0429),
                    (15, 0.0081),
                    (16, 0.0576),
                ],
            ),
        ];
        let entries = table
            .iter()
            .map(|(name, coeffs)| {
                DegreeDistribution::new(coeffs.iter().copied())
                    .expect("builtin catalog entry is normalized")
                    .with_label(*name)
            })
            .collect();
        Catalog { entries }
    }

    pub fn entries(&self) -> &[DegreeDistribution] {
        &self.entries
    }

    pub fn get(&self, name: &str) -> Option<&DegreeDistribution> {
        self.entries.iter().find(|e| e.label() == Some(name))
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.entries.iter().position(|e| e.label() == Some(name))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cat(name: &str) -> DegreeDistribution {
        Catalog::builtin().get(name).unwrap().clone()
    }

    #[test]
    fn validate_examples() {
        assert!(DegreeDistribution::new([(2, 0.5102), (4, 0.4898)]).is_ok());
        assert!(DegreeDistribution::new([(1, 1.0)]).is_ok());
        assert!(matches!(
            DegreeDistribution::new([(2, 0.5), (4, 0.4)]),
            Err(IrsaError::Normalization { .. })
        ));
        assert!(matches!(
            DegreeDistribution::new([(2, 1.2), (4, -0.2)]),
            Err(IrsaError::NegativeCoefficient { degree: 4, .. })
        ));
        assert_eq!(
            DegreeDistribution::new([(0, 0.5), (2, 0.5)]),
            Err(IrsaError::ZeroDegree)
        );
        assert!(matches!(
            DegreeDistribution::new([(2, f64::NAN)]),
            Err(IrsaError::NonFiniteCoefficient { .. })
        ));
        assert!(matches!(
            DegreeDistribution::new(Vec::<(u32, f64)>::new()),
            Err(IrsaError::Normalization { .. })
        ));
    }

    #[test]
    fn zero_entries_are_dropped() {
        let d = DegreeDistribution::new([(2, 0.0), (3, 1.0)]).unwrap();
        assert_eq!(d.coeffs(), &[(3, 1.0)]);
        assert_eq!(d.min_degree(), 3);
    }

    #[test]
    fn evaluate_examples() {
        let a = cat("a");
        assert_close!(a.evaluate(1.0).unwrap(), 1.0, 1e-12);
        assert_eq!(a.evaluate(0.0).unwrap(), 0.0);
        assert_close!(
            a.evaluate(0.5).unwrap(),
            0.5102 * 0.25 + 0.4898 * 0.0625,
            1e-15
        );
        assert_close!(a.evaluate(0.5).unwrap(), 0.158163, 1e-6);
        assert!(matches!(a.evaluate(1.5), Err(IrsaError::Domain { .. })));
        assert!(matches!(a.evaluate(-0.1), Err(IrsaError::Domain { .. })));
    }

    #[test]
    fn mean_degree_examples() {
        assert_close!(cat("a").mean_degree(), 2.9796, 1e-12);
        assert_eq!(DegreeDistribution::regular(1).unwrap().mean_degree(), 1.0);
        // 2(0.5631) + 3(0.0436) + 5(0.3933)
        assert_close!(cat("b").mean_degree(), 3.2235, 1e-12);
    }

    #[test]
    fn edge_perspective_examples() {
        let e = cat("a").to_edge_perspective();
        assert_close!(e.prob(2), 0.342462, 1e-6);
        assert_close!(e.prob(4), 0.657538, 1e-6);

        let r = DegreeDistribution::regular(3)
            .unwrap()
            .to_edge_perspective();
        assert_eq!(r.coeffs(), &[(3, 1.0)]);

        let h = DegreeDistribution::new([(1, 0.5), (2, 0.5)])
            .unwrap()
            .to_edge_perspective();
        assert_close!(h.prob(1), 1.0 / 3.0, 1e-12);
        assert_close!(h.prob(2), 2.0 / 3.0, 1e-12);
    }

    #[test]
    fn eval_edge_examples() {
        let e = cat("a").to_edge_perspective();
        assert_close!(e.eval_edge(1.0).unwrap(), 1.0, 1e-12);
        assert_close!(e.eval_edge(0.5).unwrap(), 0.253423, 1e-6);
        let two = DegreeDistribution::regular(2)
            .unwrap()
            .to_edge_perspective();
        for z in [0.0, 0.3, 0.77, 1.0] {
            assert_close!(two.eval_edge(z).unwrap(), z, 1e-15);
        }
        assert!(e.eval_edge(1.01).is_err());
    }

    #[test]
    fn dominance_examples() {
        let x2 = DegreeDistribution::regular(2).unwrap();
        let x3 = DegreeDistribution::regular(3).unwrap();
        assert!(dominates(&x3, &x2, 1e-3));
        assert!(!dominates(&x2, &x3, 1e-3));
        assert!(dominates(&cat("a"), &cat("a"), 1e-3));
        assert_close!(cat("a").poly(0.9), 0.5102 * 0.81 + 0.4898 * 0.6561, 1e-12);
        assert_close!(
            cat("b").poly(0.9),
            0.5631 * 0.81 + 0.0436 * 0.729 + 0.3933 * 0.59049,
            1e-12
        );
        assert!(!dominates(&cat("a"), &cat("b"), 1e-3));
    }

    #[test]
    fn grid_ends_at_one() {
        let pts: Vec<f64> = unit_grid(0.003, true).collect();
        assert_eq!(pts[0], 0.0);
        assert_eq!(*pts.last().unwrap(), 1.0);
        let pts: Vec<f64> = unit_grid(0.01, false).collect();
        assert_eq!(pts.len(), 100);
        assert_eq!(*pts.last().unwrap(), 1.0);
    }

    #[test]
    fn builtin_catalog_is_valid() {
        let c = Catalog::builtin();
        assert_eq!(c.entries().len(), 6);
        let rebuilt = Catalog::new(c.entries().to_vec()).unwrap();
        assert_eq!(rebuilt, c);
        assert_eq!(c.index_of("e"), Some(4));
        assert_eq!(c.get("f").unwrap().max_degree(), 16);
        assert_close!(c.get("f").unwrap().prob(11), 0.0030, 0.0);
    }

    #[test]
    fn catalog_rejects_duplicate_names() {
        let a = cat("a");
        assert!(Catalog::new(vec![a.clone(), a]).is_err());
    }

    #[test]
    fn json_literal_round_trip() {
        let d: DegreeDistribution = serde_json::from_str(r#"{"2": 0.5102, "4": 0.4898}"#).unwrap();
        assert_eq!(d.coeffs(), cat("a").coeffs());
        let s = serde_json::to_string(&d).unwrap();
        assert_eq!(s, r#"{"2":0.5102,"4":0.4898}"#);
        assert!(serde_json::from_str::<DegreeDistribution>(r#"{"2": 0.5}"#).is_err());
    }
}
