//! Strategy selection: which distribution and how many sources per class.
//!
//! The theoretical ON region is the set of count vectors for which the
//! asymptotic decoder is globally stable. Algorithm 1 maximizes
//! `Σ_k w_k U_k(L_k)` over its boundary. Because the large-frame analysis
//! overestimates what a finite frame can carry, Algorithm 2 first shrinks the
//! region by a fixed fraction (10% by default) and optimizes over that safe
//! boundary instead. [`exhaustive_oracle`] scores every candidate by
//! simulation and serves as the reference.

use std::cmp::Ordering;

use crate::analysis::{Ensemble, StabilityReport};
use crate::distribution::{dominates, DegreeDistribution};
use crate::error::{check_unit, IrsaError, Result};
use crate::scenario::{ClassSpec, ScenarioConfig};
use crate::simulator::monte_carlo;
use crate::utility::{UtilityFn, UtilityModel};

/// Boundary shrink used by Algorithm 2.
pub const DEFAULT_SAFE_SHRINK: f64 = 0.10;

/// Empirical error probability below which a point is in the simulated ON
/// region.
pub const SIMULATED_ON_MAX_PE: f64 = 1e-4;

/// Messages simulated per point when mapping the simulated ON region.
pub const SIMULATED_ON_MIN_MESSAGES: u64 = 100_000;

/// Inclusive arithmetic range of source counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountRange {
    pub min: u64,
    pub max: u64,
    pub step: u64,
}

impl CountRange {
    pub fn new(min: u64, max: u64, step: u64) -> Result<Self> {
        if step == 0 || min > max {
            return Err(IrsaError::Config(format!(
                "invalid count range {min}..={max} step {step}"
            )));
        }
        Ok(CountRange { min, max, step })
    }

    pub fn single(count: u64) -> Self {
        CountRange {
            min: count,
            max: count,
            step: 1,
        }
    }

    pub fn values(&self) -> Vec<u64> {
        (self.min..=self.max).step_by(self.step as usize).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassCandidates {
    pub distributions: Vec<DegreeDistribution>,
    pub counts: CountRange,
}

/// Everything the optimizer may choose from.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateSpace {
    slots: u64,
    classes: Vec<ClassCandidates>,
    max_iters: u32,
    priority_step: f64,
    stability_step: f64,
}

impl CandidateSpace {
    pub fn new(slots: u64, classes: Vec<ClassCandidates>, max_iters: u32) -> Result<Self> {
        if slots == 0 || max_iters == 0 {
            return Err(IrsaError::Config(
                "slots and iteration cap must be positive".into(),
            ));
        }
        if classes.is_empty() {
            return Err(IrsaError::Config("at least one class is required".into()));
        }
        for (k, c) in classes.iter().enumerate() {
            if c.distributions.is_empty() {
                return Err(IrsaError::Config(format!(
                    "class {k} has no candidate distribution"
                )));
            }
            CountRange::new(c.counts.min, c.counts.max, c.counts.step)?;
            for d in &c.distributions {
                d.validate()?;
                if u64::from(d.max_degree()) > slots {
                    return Err(IrsaError::Config(format!(
                        "class {k} candidate has degree {} > {slots} slots",
                        d.max_degree()
                    )));
                }
            }
        }
        Ok(CandidateSpace {
            slots,
            classes,
            max_iters,
            priority_step: crate::distribution::DEFAULT_DOMINANCE_STEP,
            stability_step: crate::analysis::DEFAULT_STABILITY_STEP,
        })
    }

    /// Grid step for the dominance check between consecutive classes.
    pub fn with_priority_step(mut self, step: f64) -> Result<Self> {
        if !(step > 0.0 && step <= 0.01) {
            return Err(IrsaError::Config(format!(
                "priority grid step {step} outside (0, 0.01]"
            )));
        }
        self.priority_step = step;
        Ok(self)
    }

    pub fn slots(&self) -> u64 {
        self.slots
    }

    pub fn classes(&self) -> &[ClassCandidates] {
        &self.classes
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn max_iters(&self) -> u32 {
        self.max_iters
    }

    fn check_assignment(&self, assignment: &[usize]) -> Result<()> {
        if assignment.len() != self.classes.len()
            || assignment
                .iter()
                .zip(&self.classes)
                .any(|(&i, c)| i >= c.distributions.len())
        {
            return Err(IrsaError::Config(format!(
                "assignment {assignment:?} does not index the candidate space"
            )));
        }
        Ok(())
    }

    pub fn distributions(&self, assignment: &[usize]) -> Vec<DegreeDistribution> {
        assignment
            .iter()
            .zip(&self.classes)
            .map(|(&i, c)| c.distributions[i].clone())
            .collect()
    }

    /// Checks `Λ_k(x) ≤ Λ_{k+1}(x)` for consecutive classes.
    pub fn check_priority(&self, assignment: &[usize]) -> Result<()> {
        self.check_assignment(assignment)?;
        let dists = self.distributions(assignment);
        for k in 1..dists.len() {
            if !dominates(&dists[k - 1], &dists[k], self.priority_step) {
                return Err(IrsaError::PriorityViolation {
                    class: k - 1,
                    next: k,
                });
            }
        }
        Ok(())
    }

    /// All assignments passing the priority constraint, in lexicographic
    /// index order.
    pub fn feasible_assignments(&self) -> Vec<Vec<usize>> {
        let sizes: Vec<usize> = self.classes.iter().map(|c| c.distributions.len()).collect();
        cartesian(&sizes)
            .into_iter()
            .filter(|a| self.check_priority(a).is_ok())
            .collect()
    }

    /// Scenario for the given choice, with weights taken from `utility` or
    /// uniform when none is supplied.
    pub fn scenario(
        &self,
        assignment: &[usize],
        counts: &[u64],
        utility: Option<&UtilityModel>,
    ) -> Result<ScenarioConfig> {
        self.check_assignment(assignment)?;
        let k = self.classes.len();
        let weights = match utility {
            Some(u) => u.weights.clone(),
            None => vec![1.0 / k as f64; k],
        };
        if weights.len() != k || counts.len() != k {
            return Err(IrsaError::Config("class count mismatch".into()));
        }
        let classes = self
            .distributions(assignment)
            .into_iter()
            .zip(counts)
            .zip(weights)
            .map(|((d, &l), w)| ClassSpec::new(l, w, d))
            .collect();
        ScenarioConfig::new(self.slots, classes, self.max_iters)
    }

    fn ensemble(&self, assignment: &[usize], loads: impl Iterator<Item = f64>) -> Ensemble {
        let n = self.slots as f64;
        Ensemble::new(
            loads
                .zip(self.distributions(assignment))
                .map(|(l, d)| (l / n, d)),
        )
    }

    pub fn stability_at(&self, assignment: &[usize], counts: &[u64]) -> StabilityReport {
        self.ensemble(assignment, counts.iter().map(|&c| c as f64))
            .stability(self.stability_step)
    }

    pub fn is_stable(&self, assignment: &[usize], counts: &[u64]) -> bool {
        self.stability_at(assignment, counts).stable
    }

    /// Membership in the theoretical region shrunk by `shrink`: the point
    /// scaled up by `1 / (1 - shrink)` must be stable.
    pub fn is_safe(&self, assignment: &[usize], counts: &[u64], shrink: f64) -> bool {
        let scale = 1.0 / (1.0 - shrink);
        self.ensemble(assignment, counts.iter().map(|&c| c as f64 * scale))
            .stability(self.stability_step)
            .stable
    }

    /// Count vectors for every class but the last.
    pub fn prefixes(&self) -> Vec<Vec<u64>> {
        let k = self.classes.len();
        let values: Vec<Vec<u64>> = self.classes[..k - 1]
            .iter()
            .map(|c| c.counts.values())
            .collect();
        let sizes: Vec<usize> = values.iter().map(Vec::len).collect();
        cartesian(&sizes)
            .into_iter()
            .map(|idx| idx.iter().zip(&values).map(|(&i, v)| v[i]).collect())
            .collect()
    }

    /// Largest last-class count in range such that `accept` holds, assuming
    /// `accept` is monotone (true up to some count, false beyond).
    pub fn max_last_count(
        &self,
        prefix: &[u64],
        mut accept: impl FnMut(&[u64]) -> bool,
    ) -> Option<u64> {
        let values = self.classes.last().unwrap().counts.values();
        let mut point = prefix.to_vec();
        point.push(0);
        let mut test = |c: u64| {
            *point.last_mut().unwrap() = c;
            accept(&point)
        };
        if !test(values[0]) {
            return None;
        }
        let (mut lo, mut hi) = (0usize, values.len());
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if test(values[mid]) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(values[lo])
    }
}

/// Index tuples `0..sizes[0] × 0..sizes[1] × …`, first coordinate slowest.
fn cartesian(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &n in sizes {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..n).map(move |i| {
                    let mut q = p.clone();
                    q.push(i);
                    q
                })
            })
            .collect();
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionMode {
    Theoretical,
    Safe,
    Simulated,
}

/// Boundary of the ON region for a fixed assignment: for each count prefix
/// `(L_1, …, L_{K-1})`, the largest admissible `L_K`.
#[derive(Debug, Clone, PartialEq)]
pub struct OnRegion {
    pub assignment: Vec<usize>,
    pub boundary: Vec<Vec<u64>>,
    pub mode: RegionMode,
}

/// Stable-set boundary under the asymptotic stability condition.
pub fn on_region_theoretical(space: &CandidateSpace, assignment: &[usize]) -> Result<OnRegion> {
    space.check_priority(assignment)?;
    let boundary = space
        .prefixes()
        .into_iter()
        .filter_map(|prefix| {
            space
                .max_last_count(&prefix, |p| space.is_stable(assignment, p))
                .map(|last| [prefix, vec![last]].concat())
        })
        .collect();
    Ok(OnRegion {
        assignment: assignment.to_vec(),
        boundary,
        mode: RegionMode::Theoretical,
    })
}

/// Boundary of the safe region used by Algorithm 2: for each prefix, the
/// largest `L_K` whose count vector scaled by `1 / (1 - shrink)` is stable.
pub fn on_region_safe(
    space: &CandidateSpace,
    assignment: &[usize],
    shrink: f64,
) -> Result<OnRegion> {
    space.check_priority(assignment)?;
    if !(0.0..0.5).contains(&shrink) {
        return Err(IrsaError::Domain {
            what: "shrink",
            value: shrink,
            domain: "[0, 0.5)",
        });
    }
    let boundary = space
        .prefixes()
        .into_iter()
        .filter_map(|prefix| {
            space
                .max_last_count(&prefix, |p| space.is_safe(assignment, p, shrink))
                .map(|last| [prefix, vec![last]].concat())
        })
        .collect();
    Ok(OnRegion {
        assignment: assignment.to_vec(),
        boundary,
        mode: RegionMode::Safe,
    })
}

/// Scales every boundary vector by `1 - shrink`, rounding down.
pub fn safe_boundary(region: &OnRegion, shrink: f64) -> Result<OnRegion> {
    if region.mode != RegionMode::Theoretical {
        return Err(IrsaError::Config(
            "safe boundary needs a theoretical region".into(),
        ));
    }
    if !(0.0..0.5).contains(&shrink) {
        return Err(IrsaError::Domain {
            what: "shrink",
            value: shrink,
            domain: "[0, 0.5)",
        });
    }
    let boundary = region
        .boundary
        .iter()
        .map(|p| {
            p.iter()
                .map(|&c| (c as f64 * (1.0 - shrink) + 1e-9).floor() as u64)
                .collect()
        })
        .collect();
    Ok(OnRegion {
        assignment: region.assignment.clone(),
        boundary,
        mode: RegionMode::Safe,
    })
}

/// Simulation settings for mapping the empirical ON region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulatedCriterion {
    pub max_pe: f64,
    pub min_messages: u64,
    pub min_trials: u64,
    pub seed: u64,
}

impl Default for SimulatedCriterion {
    fn default() -> Self {
        SimulatedCriterion {
            max_pe: SIMULATED_ON_MAX_PE,
            min_messages: SIMULATED_ON_MIN_MESSAGES,
            min_trials: 100,
            seed: 0,
        }
    }
}

impl SimulatedCriterion {
    /// Empirical overall error probability at `counts`.
    pub fn error_rate(
        &self,
        space: &CandidateSpace,
        assignment: &[usize],
        counts: &[u64],
    ) -> Result<f64> {
        let m: u64 = counts.iter().sum();
        if m == 0 {
            return Ok(0.0);
        }
        let cfg = space.scenario(assignment, counts, None)?;
        let trials = self.min_trials.max(self.min_messages.div_ceil(m));
        let flat = UtilityModel::new(vec![UtilityFn::Linear; counts.len()], cfg.weights())?;
        Ok(monte_carlo(&cfg, trials, self.seed, &flat)?.overall_pe)
    }
}

/// Boundary of the region where the simulated error probability stays
/// below `criterion.max_pe`.
pub fn on_region_simulated(
    space: &CandidateSpace,
    assignment: &[usize],
    criterion: &SimulatedCriterion,
) -> Result<OnRegion> {
    space.check_priority(assignment)?;
    let mut failure = None;
    let mut boundary = Vec::new();
    for prefix in space.prefixes() {
        let last = space.max_last_count(&prefix, |p| {
            match criterion.error_rate(space, assignment, p) {
                Ok(pe) => pe < criterion.max_pe,
                Err(e) => {
                    failure.get_or_insert(e);
                    false
                }
            }
        });
        if let Some(last) = last {
            boundary.push([prefix, vec![last]].concat());
        }
    }
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(OnRegion {
        assignment: assignment.to_vec(),
        boundary,
        mode: RegionMode::Simulated,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptimizationMethod {
    Alg1,
    Alg2,
    Exhaustive,
}

impl OptimizationMethod {
    pub fn tag(self) -> &'static str {
        match self {
            OptimizationMethod::Alg1 => "alg1",
            OptimizationMethod::Alg2 => "alg2",
            OptimizationMethod::Exhaustive => "exhaustive",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult {
    pub assignment: Vec<usize>,
    pub distributions: Vec<DegreeDistribution>,
    pub counts: Vec<u64>,
    /// `Σ w_k U_k(L_k)` for the region methods, mean simulated utility for
    /// the exhaustive oracle.
    pub utility: f64,
    pub method: OptimizationMethod,
    /// Theoretical boundary point the choice was derived from.
    pub boundary_point: Vec<u64>,
    pub stability: StabilityReport,
}

struct Candidate {
    assignment: Vec<usize>,
    counts: Vec<u64>,
    utility: f64,
    boundary_point: Vec<u64>,
}

/// Higher utility first, then larger counts from class 1 down, then lower
/// catalog indices.
fn better(a: &Candidate, b: &Candidate) -> bool {
    let ord = a
        .utility
        .partial_cmp(&b.utility)
        .unwrap_or(Ordering::Equal)
        .then_with(|| a.counts.cmp(&b.counts))
        .then_with(|| b.assignment.cmp(&a.assignment));
    ord == Ordering::Greater
}

fn pick_best(candidates: impl IntoIterator<Item = Candidate>) -> Option<Candidate> {
    candidates.into_iter().fold(None, |best, c| match best {
        Some(b) if !better(&c, &b) => Some(b),
        _ => Some(c),
    })
}

fn finish(
    space: &CandidateSpace,
    best: Option<Candidate>,
    method: OptimizationMethod,
) -> Result<OptimizationResult> {
    let best = best.ok_or(IrsaError::Infeasible)?;
    Ok(OptimizationResult {
        distributions: space.distributions(&best.assignment),
        stability: space.stability_at(&best.assignment, &best.counts),
        assignment: best.assignment,
        counts: best.counts,
        utility: best.utility,
        method,
        boundary_point: best.boundary_point,
    })
}

fn check_utility(space: &CandidateSpace, u: &UtilityModel) -> Result<()> {
    if u.num_classes() != space.num_classes() {
        return Err(IrsaError::Config(format!(
            "utility model has {} classes, candidate space has {}",
            u.num_classes(),
            space.num_classes()
        )));
    }
    Ok(())
}

fn optimize_over_regions(
    space: &CandidateSpace,
    u: &UtilityModel,
    shrink: Option<f64>,
) -> Result<Option<Candidate>> {
    check_utility(space, u)?;
    let assignments = space.feasible_assignments();
    if assignments.is_empty() {
        return Err(IrsaError::Infeasible);
    }
    if let Some(s) = shrink {
        if !(0.0..0.5).contains(&s) {
            return Err(IrsaError::Domain {
                what: "shrink",
                value: s,
                domain: "[0, 0.5)",
            });
        }
    }
    let mut candidates = Vec::new();
    for a in assignments {
        for region_point in on_region_theoretical(space, &a)?.boundary {
            let prefix = &region_point[..region_point.len() - 1];
            let counts = match shrink {
                None => region_point.clone(),
                Some(s) => match space.max_last_count(prefix, |p| space.is_safe(&a, p, s)) {
                    Some(last) => [prefix, &[last]].concat(),
                    None => continue,
                },
            };
            candidates.push(Candidate {
                assignment: a.clone(),
                utility: u.score(&counts),
                counts,
                boundary_point: region_point,
            });
        }
    }
    Ok(pick_best(candidates))
}

/// Maximizes `Σ_k w_k U_k(L_k)` over the theoretical ON-region boundary of
/// every priority-feasible assignment.
pub fn algorithm1(space: &CandidateSpace, u: &UtilityModel) -> Result<OptimizationResult> {
    let best = optimize_over_regions(space, u, None)?;
    finish(space, best, OptimizationMethod::Alg1)
}

/// Algorithm 1 restricted to the safe region: a count vector qualifies when
/// scaling it up by `1 / (1 - shrink)` (default shrink 10%) stays stable.
pub fn algorithm2(space: &CandidateSpace, u: &UtilityModel) -> Result<OptimizationResult> {
    algorithm2_with_shrink(space, u, DEFAULT_SAFE_SHRINK)
}

pub fn algorithm2_with_shrink(
    space: &CandidateSpace,
    u: &UtilityModel,
    shrink: f64,
) -> Result<OptimizationResult> {
    let best = optimize_over_regions(space, u, Some(shrink))?;
    finish(space, best, OptimizationMethod::Alg2)
}

/// Scores every priority-feasible `(assignment, counts)` pair by Monte Carlo
/// and returns the best. All candidates share the same seed.
pub fn exhaustive_oracle(
    space: &CandidateSpace,
    u: &UtilityModel,
    trials: u64,
    seed: u64,
) -> Result<OptimizationResult> {
    check_utility(space, u)?;
    if trials < 100 {
        return Err(IrsaError::Config(format!(
            "exhaustive search needs at least 100 trials per point, got {trials}"
        )));
    }
    let assignments = space.feasible_assignments();
    if assignments.is_empty() {
        return Err(IrsaError::Infeasible);
    }
    let values: Vec<Vec<u64>> = space.classes.iter().map(|c| c.counts.values()).collect();
    let sizes: Vec<usize> = values.iter().map(Vec::len).collect();
    let grid: Vec<Vec<u64>> = cartesian(&sizes)
        .into_iter()
        .map(|idx| idx.iter().zip(&values).map(|(&i, v)| v[i]).collect())
        .collect();
    let mut candidates = Vec::new();
    for a in &assignments {
        for counts in &grid {
            let cfg = space.scenario(a, counts, Some(u))?;
            let report = monte_carlo(&cfg, trials, seed, u)?;
            candidates.push(Candidate {
                assignment: a.clone(),
                counts: counts.clone(),
                utility: report.utility_mean,
                boundary_point: counts.clone(),
            });
        }
    }
    finish(space, pick_best(candidates), OptimizationMethod::Exhaustive)
}

/// Expected utility `Σ_k w_k E[U_k(R_k)]` with `R_k ~ Binomial(L_k, 1 - pe_k)`.
///
/// The joint law of `(R_1, …, R_K)` factorizes over classes and the utility
/// is additive, so each class contributes its own binomial expectation.
pub fn expected_utility(cfg: &ScenarioConfig, pe: &[f64], u: &UtilityModel) -> Result<f64> {
    if pe.len() != cfg.num_classes() || u.num_classes() != cfg.num_classes() {
        return Err(IrsaError::Config(
            "per-class inputs do not match the scenario".into(),
        ));
    }
    for &p in pe {
        check_unit("pe", p)?;
    }
    let max_count = cfg.counts().into_iter().max().unwrap_or(0) as usize;
    let mut ln_fact = vec![0.0f64; max_count + 1];
    for i in 1..=max_count {
        ln_fact[i] = ln_fact[i - 1] + (i as f64).ln();
    }
    let total = cfg
        .classes()
        .iter()
        .zip(pe)
        .enumerate()
        .map(|(k, (c, &p))| {
            let l = c.count;
            let f = u.functions[k];
            let mean = if p == 0.0 {
                f.eval(l)
            } else if p == 1.0 {
                f.eval(0)
            } else {
                let (ln_ok, ln_err) = ((1.0 - p).ln(), p.ln());
                (0..=l)
                    .map(|r| {
                        let ln_pmf =
                            ln_fact[l as usize] - ln_fact[r as usize] - ln_fact[(l - r) as usize]
                                + r as f64 * ln_ok
                                + (l - r) as f64 * ln_err;
                        f.eval(r) * ln_pmf.exp()
                    })
                    .sum()
            };
            c.weight * mean
        })
        .sum();
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::Catalog;

    fn cat(name: &str) -> DegreeDistribution {
        Catalog::builtin().get(name).unwrap().clone()
    }

    fn x2() -> DegreeDistribution {
        DegreeDistribution::regular(2).unwrap()
    }

    fn space(slots: u64, classes: Vec<(Vec<DegreeDistribution>, CountRange)>) -> CandidateSpace {
        CandidateSpace::new(
            slots,
            classes
                .into_iter()
                .map(|(distributions, counts)| ClassCandidates {
                    distributions,
                    counts,
                })
                .collect(),
            100,
        )
        .unwrap()
    }

    #[test]
    fn count_range_values() {
        assert_eq!(CountRange::new(0, 10, 5).unwrap().values(), vec![0, 5, 10]);
        assert_eq!(CountRange::new(1, 8, 3).unwrap().values(), vec![1, 4, 7]);
        assert!(CountRange::new(3, 1, 1).is_err());
        assert!(CountRange::new(0, 1, 0).is_err());
    }

    #[test]
    fn cartesian_order() {
        assert_eq!(
            cartesian(&[2, 2]),
            vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]
        );
        assert_eq!(cartesian(&[]), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn expected_utility_examples() {
        let d = x2();
        let cfg = ScenarioConfig::new(
            10,
            vec![
                ClassSpec::new(4, 0.6, d.clone()),
                ClassSpec::new(3, 0.4, d.clone()),
            ],
            10,
        )
        .unwrap();
        let log = UtilityModel::log(vec![0.6, 0.4]).unwrap();
        let all = expected_utility(&cfg, &[0.0, 0.0], &log).unwrap();
        assert_close!(all, 0.6 * 4f64.ln() + 0.4 * 3f64.ln(), 1e-12);
        assert_eq!(expected_utility(&cfg, &[1.0, 1.0], &log).unwrap(), 0.0);
        assert!(expected_utility(&cfg, &[1.5, 0.0], &log).is_err());
        assert!(expected_utility(&cfg, &[0.5], &log).is_err());

        let one = ScenarioConfig::new(10, vec![ClassSpec::new(2, 1.0, d)], 10).unwrap();
        let lin = UtilityModel::new(vec![UtilityFn::Linear], vec![1.0]).unwrap();
        assert_close!(expected_utility(&one, &[0.5], &lin).unwrap(), 1.0, 1e-12);
    }

    #[test]
    fn region_single_class_regular_two() {
        let s = space(200, vec![(vec![x2()], CountRange::new(0, 200, 1).unwrap())]);
        let r = on_region_theoretical(&s, &[0]).unwrap();
        assert_eq!(r.boundary, vec![vec![99]]);
        // G = 0.5 sits exactly on the threshold: f'(0) = 1 is not stable.
        assert!(!s.is_stable(&[0], &[100]));
    }

    #[test]
    fn region_all_zero_ranges() {
        let s = space(
            200,
            vec![
                (vec![cat("e")], CountRange::single(0)),
                (vec![cat("a")], CountRange::single(0)),
            ],
        );
        let r = on_region_theoretical(&s, &[0, 0]).unwrap();
        assert_eq!(r.boundary, vec![vec![0, 0]]);
    }

    #[test]
    fn region_priority_violation() {
        let s = space(
            200,
            vec![
                (vec![cat("a")], CountRange::single(10)),
                (vec![cat("b")], CountRange::single(10)),
            ],
        );
        assert_eq!(
            on_region_theoretical(&s, &[0, 0]),
            Err(IrsaError::PriorityViolation { class: 0, next: 1 })
        );
        let u = UtilityModel::log(vec![0.5, 0.5]).unwrap();
        assert_eq!(algorithm1(&s, &u), Err(IrsaError::Infeasible));
    }

    #[test]
    fn safe_boundary_examples() {
        let region = OnRegion {
            assignment: vec![0, 0],
            boundary: vec![vec![100, 60], vec![7, 3]],
            mode: RegionMode::Theoretical,
        };
        let safe = safe_boundary(&region, 0.10).unwrap();
        assert_eq!(safe.boundary, vec![vec![90, 54], vec![6, 2]]);
        assert_eq!(safe.mode, RegionMode::Safe);
        assert_eq!(
            safe_boundary(&region, 0.0).unwrap().boundary,
            region.boundary
        );
        assert!(safe_boundary(&region, 0.6).is_err());
        assert!(safe_boundary(&safe, 0.1).is_err());
    }

    #[test]
    fn safe_region_is_membership_of_scaled_point() {
        let s = space(200, vec![(vec![x2()], CountRange::new(0, 200, 1).unwrap())]);
        let safe = on_region_safe(&s, &[0], 0.10).unwrap();
        assert_eq!(safe.boundary, vec![vec![89]]);
        assert_eq!(safe.mode, RegionMode::Safe);
        assert_eq!(
            on_region_safe(&s, &[0], 0.0).unwrap().boundary,
            vec![vec![99]]
        );
        assert!(on_region_safe(&s, &[0], 0.5).is_err());
    }

    #[test]
    fn algorithm1_single_class_picks_boundary() {
        let s = space(200, vec![(vec![x2()], CountRange::new(0, 200, 1).unwrap())]);
        let u = UtilityModel::log(vec![1.0]).unwrap();
        let r = algorithm1(&s, &u).unwrap();
        assert_eq!(r.counts, vec![99]);
        assert_eq!(r.method, OptimizationMethod::Alg1);
        assert!(r.stability.stable);
        let r2 = algorithm2(&s, &u).unwrap();
        // 89 / 0.9 = 98.9 is stable, 90 / 0.9 = 100 sits on the threshold.
        assert_eq!(r2.counts, vec![89]);
        assert_eq!(r2.boundary_point, vec![99]);
    }

    #[test]
    fn algorithm2_single_point() {
        let u = UtilityModel::log(vec![1.0]).unwrap();
        let s = space(200, vec![(vec![cat("c")], CountRange::single(50))]);
        assert_eq!(algorithm2(&s, &u).unwrap().counts, vec![50]);
        // Stable, but not once scaled up by 1 / 0.9.
        let s = space(200, vec![(vec![x2()], CountRange::single(95))]);
        assert!(s.is_stable(&[0], &[95]));
        assert_eq!(algorithm2(&s, &u), Err(IrsaError::Infeasible));
    }

    #[test]
    fn exhaustive_single_point() {
        let s = space(100, vec![(vec![cat("c")], CountRange::single(20))]);
        let u = UtilityModel::log(vec![1.0]).unwrap();
        let r = exhaustive_oracle(&s, &u, 100, 5).unwrap();
        assert_eq!(r.counts, vec![20]);
        assert_eq!(r.method, OptimizationMethod::Exhaustive);
        assert!(exhaustive_oracle(&s, &u, 99, 5).is_err());
    }

    #[test]
    fn symmetric_classes_tie_break_to_class_one() {
        let s = space(
            100,
            vec![
                (vec![cat("c")], CountRange::new(0, 60, 10).unwrap()),
                (vec![cat("c")], CountRange::new(0, 60, 10).unwrap()),
            ],
        );
        let u = UtilityModel::new(vec![UtilityFn::Linear; 2], vec![0.5, 0.5]).unwrap();
        let r = algorithm1(&s, &u).unwrap();
        let total: u64 = r.counts.iter().sum();
        // With linear utility every boundary point with the same total ties;
        // the rule favors class 1.
        let region = on_region_theoretical(&s, &[0, 0]).unwrap();
        let best_total = region
            .boundary
            .iter()
            .map(|p| p.iter().sum::<u64>())
            .max()
            .unwrap();
        assert_eq!(total, best_total);
        let max_l1 = region
            .boundary
            .iter()
            .filter(|p| p.iter().sum::<u64>() == best_total)
            .map(|p| p[0])
            .max()
            .unwrap();
        assert_eq!(r.counts[0], max_l1);
    }
}
