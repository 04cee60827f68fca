//! Asymptotic analysis of the SIC decoder.
//!
//! Slot-node degree models, the per-class AND-OR tree recursion, the global
//! stability condition `f(z) < z` and the traffic threshold search all live
//! here. The asymptotic model only depends on the per-slot load `L_k / N` of
//! each class, which is what [`Ensemble`] stores; that lets the threshold
//! search scale the load continuously.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::distribution::{unit_grid, DegreeDistribution, EdgePerspective};
use crate::error::{check_unit, IrsaError, Result};
use crate::scenario::{ClassSpec, ScenarioConfig};

/// Default early-stop tolerance for [`density_evolution`].
pub const DEFAULT_DE_EPS: f64 = 1e-12;

/// Default grid resolution for [`stability_margin`].
pub const DEFAULT_STABILITY_STEP: f64 = 1e-3;

/// Above this many sources the exact slot model falls back to Poisson.
pub const EXACT_SLOT_MODEL_MAX_SOURCES: u64 = 500;

const IMAG_RESIDUE_TOL: f64 = 1e-9;

/// Bisection bracket on traffic.
const BRACKET: (f64, f64) = (0.01, 1.0);

/// Per-class asymptotic description: load per slot plus the node and edge
/// polynomials.
#[derive(Debug, Clone)]
pub struct Ensemble {
    classes: Vec<EnsembleClass>,
}

#[derive(Debug, Clone)]
struct EnsembleClass {
    load: f64,
    node: DegreeDistribution,
    edge: EdgePerspective,
    mean_degree: f64,
}

impl Ensemble {
    /// Builds an ensemble from `(L_k / N, Λ_k)` pairs.
    pub fn new(classes: impl IntoIterator<Item = (f64, DegreeDistribution)>) -> Self {
        Ensemble {
            classes: classes
                .into_iter()
                .map(|(load, node)| EnsembleClass {
                    load,
                    edge: node.to_edge_perspective(),
                    mean_degree: node.mean_degree(),
                    node,
                })
                .collect(),
        }
    }

    pub fn from_scenario(cfg: &ScenarioConfig) -> Self {
        let n = cfg.slots() as f64;
        Self::new(
            cfg.classes()
                .iter()
                .map(|c| (c.count as f64 / n, c.dist.clone())),
        )
    }

    /// Continuous-load ensemble at traffic `g` with fixed class ratios.
    pub fn at_traffic(ratios: &[f64], dists: &[DegreeDistribution], g: f64) -> Self {
        Self::new(ratios.iter().zip(dists).map(|(a, d)| (a * g, d.clone())))
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    /// `G = Σ L_k / N`.
    pub fn traffic(&self) -> f64 {
        self.classes.iter().map(|c| c.load).sum()
    }

    /// Average number of replicas per slot, `Σ_k L_k Λ'_k(1) / N`.
    pub fn edge_load(&self) -> f64 {
        self.classes.iter().map(|c| c.load * c.mean_degree).sum()
    }

    /// `q_k`, the fraction of edges that belong to class `k`.
    pub fn edge_fractions(&self) -> Result<Vec<f64>> {
        let total = self.edge_load();
        if total <= 0.0 {
            return Err(IrsaError::EmptySystem);
        }
        Ok(self
            .classes
            .iter()
            .map(|c| c.load * c.mean_degree / total)
            .collect())
    }

    /// Slot edge-perspective polynomial in the large-frame limit,
    /// `ρ(x) = exp(-(Σ_k L_k Λ'_k(1) / N)(1 - x))`.
    pub fn rho(&self, x: f64) -> f64 {
        (-self.edge_load() * (1.0 - x)).exp()
    }

    fn fractions_or_zero(&self) -> Vec<f64> {
        self.edge_fractions()
            .unwrap_or_else(|_| vec![0.0; self.classes.len()])
    }

    /// `f(z) = 1 - exp(-(Σ L_k Λ'_k(1) / N) Σ_k q_k λ_k(z))`.
    pub fn stability_map(&self, z: f64) -> f64 {
        let q = self.fractions_or_zero();
        self.stability_map_with(&q, z)
    }

    fn stability_map_with(&self, q: &[f64], z: f64) -> f64 {
        let mix: f64 = self
            .classes
            .iter()
            .zip(q)
            .map(|(c, qk)| qk * c.edge.poly(z))
            .sum();
        1.0 - (-self.edge_load() * mix).exp()
    }

    /// Runs the per-class recursion from `y_{0,k} = 1`.
    ///
    /// Each step computes `z_{i-1} = 1 - ρ(1 - Σ_k q_k y_{i-1,k})` and then
    /// `y_{i,k} = λ_k(z_{i-1})`; the run stops after `max_iters` steps or once
    /// no `y` moves by more than `eps`.
    pub fn density_evolution(&self, max_iters: u32, eps: f64) -> DensityEvolutionOutcome {
        let k = self.classes.len();
        let q = self.fractions_or_zero();
        let a = self.edge_load();
        let mut y: Vec<Vec<f64>> = vec![vec![1.0]; k];
        let mut z = Vec::new();
        let mut converged = false;
        let mut iterations_run = 0;

        for _ in 0..max_iters {
            let erased: f64 = q
                .iter()
                .zip(&y)
                .map(|(qk, yk)| qk * yk.last().unwrap())
                .sum();
            let zi = (1.0 - (-a * erased).exp()).clamp(0.0, 1.0);
            z.push(zi);
            let mut change: f64 = 0.0;
            for (c, yk) in self.classes.iter().zip(y.iter_mut()) {
                let prev = *yk.last().unwrap();
                let next = c.edge.poly(zi).clamp(0.0, 1.0);
                debug_assert!(
                    next <= prev + 1e-12,
                    "edge erasure rose from {prev} to {next}"
                );
                change = change.max((next - prev).abs());
                yk.push(next);
            }
            iterations_run += 1;
            if change < eps {
                converged = true;
                break;
            }
        }

        let pe = self
            .classes
            .iter()
            .zip(&y)
            .map(|(c, yk)| c.node.poly(*yk.last().unwrap()))
            .collect();
        DensityEvolutionOutcome {
            y,
            z,
            pe,
            iterations_run,
            converged,
        }
    }

    /// Evaluates `z - f(z)` on `{step, 2 step, …, 1}`.
    ///
    /// The grid cannot resolve behaviour right at the origin, so the report
    /// is also marked unstable when `f(0) > 0` (degree-1 edges present) or
    /// when the slope `f'(0)` is at least 1.
    pub fn stability(&self, grid_step: f64) -> StabilityReport {
        let q = self.fractions_or_zero();
        let mut min_margin = f64::INFINITY;
        let mut argmin_z = 1.0;
        for z in unit_grid(grid_step, false) {
            let m = z - self.stability_map_with(&q, z);
            if m < min_margin {
                min_margin = m;
                argmin_z = z;
            }
        }
        let value_at_origin = self.stability_map_with(&q, 0.0);
        let a = self.edge_load();
        let slope_at_origin = a * self
            .classes
            .iter()
            .zip(&q)
            .map(|(c, qk)| qk * c.edge.slope_at_origin())
            .sum::<f64>();
        StabilityReport {
            stable: min_margin > 0.0 && value_at_origin == 0.0 && slope_at_origin < 1.0,
            min_margin,
            argmin_z,
            slope_at_origin,
            value_at_origin,
        }
    }

    pub fn is_stable(&self) -> bool {
        self.stability(DEFAULT_STABILITY_STEP).stable
    }
}

/// Trajectories of the per-class recursion.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityEvolutionOutcome {
    /// `y[k][i]` is the edge erasure probability of class `k` after `i`
    /// iterations; `y[k][0] = 1`.
    pub y: Vec<Vec<f64>>,
    /// `z[i]` is the slot erasure probability feeding iteration `i + 1`.
    pub z: Vec<f64>,
    /// Final per-class message error probability `Λ_k(y_{I,k})`.
    pub pe: Vec<f64>,
    pub iterations_run: u32,
    pub converged: bool,
}

impl DensityEvolutionOutcome {
    pub fn max_pe(&self) -> f64 {
        self.pe.iter().copied().fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityReport {
    pub stable: bool,
    /// Minimum of `z - f(z)` over the grid.
    pub min_margin: f64,
    pub argmin_z: f64,
    pub slope_at_origin: f64,
    pub value_at_origin: f64,
}

/// Critical traffic for fixed class ratios.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdResult {
    pub g_star: f64,
    pub ratios: Vec<f64>,
    pub tolerance: f64,
    /// Largest traffic known to be stable.
    pub stable_below: f64,
    /// Smallest traffic known to be unstable.
    pub unstable_above: f64,
}

impl ThresholdResult {
    /// Integer source counts for a frame of `slots` slots at traffic
    /// `g_star - tolerance`, rounded down and re-checked for stability.
    pub fn stable_counts(&self, dists: &[DegreeDistribution], slots: u64) -> Result<Vec<u64>> {
        let g = (self.g_star - self.tolerance).max(0.0);
        let counts: Vec<u64> = self
            .ratios
            .iter()
            .map(|a| (a * g * slots as f64).floor() as u64)
            .collect();
        let n = slots as f64;
        let ens = Ensemble::new(
            counts
                .iter()
                .zip(dists)
                .map(|(&l, d)| (l as f64 / n, d.clone())),
        );
        if !ens.is_stable() {
            return Err(IrsaError::Bracket(format!(
                "rounded counts {counts:?} are not stable"
            )));
        }
        Ok(counts)
    }
}

/// `p_k = Λ'_k(1) / N`, the chance that a given source of the class uses a
/// given slot.
pub fn replica_slot_prob(spec: &ClassSpec, slots: u64) -> Result<f64> {
    let p = spec.dist.mean_degree() / slots as f64;
    if p > 1.0 || slots == 0 {
        return Err(IrsaError::Domain {
            what: "replica slot probability",
            value: p,
            domain: "[0, 1]",
        });
    }
    Ok(p)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlotModelMode {
    Exact,
    Poisson,
}

/// Finite-frame slot-node degree distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct SlotDegreeModel {
    /// `omega[l]`, probability that a slot holds `l` replicas, `l = 0..=M`.
    pub omega: Vec<f64>,
    /// `rho[l]`, probability that an edge lands on a degree-`l` slot.
    /// `rho[0]` is always 0.
    pub rho: Vec<f64>,
    pub mode: SlotModelMode,
    /// `χ = Σ_k L_k p_k`, the mean slot degree.
    pub chi: f64,
}

impl SlotDegreeModel {
    fn from_omega(omega: Vec<f64>, mode: SlotModelMode, chi: f64) -> Self {
        let edges: f64 = omega.iter().enumerate().map(|(l, w)| l as f64 * w).sum();
        let rho = omega
            .iter()
            .enumerate()
            .map(|(l, w)| {
                if edges > 0.0 {
                    l as f64 * w / edges
                } else {
                    0.0
                }
            })
            .collect();
        SlotDegreeModel {
            omega,
            rho,
            mode,
            chi,
        }
    }
}

fn slot_probs(cfg: &ScenarioConfig) -> Result<Vec<f64>> {
    cfg.classes()
        .iter()
        .map(|c| replica_slot_prob(c, cfg.slots()))
        .collect()
}

/// Poisson-binomial slot degree distribution, computed with the discrete
/// Fourier form `Ω_l = (M+1)^-1 Σ_{j=0}^{M} C^{-jl} Π_k (1 + (C^j - 1) p_k)^{L_k}`
/// where `C = exp(2πi / (M+1))`.
pub fn slot_distribution_exact(cfg: &ScenarioConfig) -> Result<SlotDegreeModel> {
    let m = cfg.total_sources();
    if m == 0 {
        return Err(IrsaError::EmptySystem);
    }
    let probs = slot_probs(cfg)?;
    let counts = cfg.counts();
    let size = (m + 1) as usize;
    let roots: Vec<Complex64> = (0..size)
        .map(|t| Complex64::from_polar(1.0, 2.0 * PI * t as f64 / size as f64))
        .collect();

    let products: Vec<Complex64> = roots
        .iter()
        .map(|&c| {
            probs
                .iter()
                .zip(&counts)
                .filter(|(_, &l)| l > 0)
                .map(|(&p, &l)| (Complex64::new(1.0, 0.0) + (c - 1.0) * p).powi(l as i32))
                .product()
        })
        .collect();

    let mut omega = Vec::with_capacity(size);
    for l in 0..size {
        let sum: Complex64 = products
            .iter()
            .enumerate()
            .map(|(j, prod)| roots[(size - (j * l) % size) % size] * prod)
            .sum();
        let value = sum / size as f64;
        if value.im.abs() > IMAG_RESIDUE_TOL {
            return Err(IrsaError::NumericInstability {
                degree: l,
                residue: value.im.abs(),
            });
        }
        omega.push(value.re.max(0.0));
    }
    let chi = probs.iter().zip(&counts).map(|(p, &l)| p * l as f64).sum();
    Ok(SlotDegreeModel::from_omega(
        omega,
        SlotModelMode::Exact,
        chi,
    ))
}

/// Poisson approximation `Ω_l = χ^l e^{-χ} / l!`, truncated at `M` and
/// renormalized.
pub fn slot_distribution_poisson(cfg: &ScenarioConfig) -> Result<SlotDegreeModel> {
    let probs = slot_probs(cfg)?;
    let chi: f64 = probs
        .iter()
        .zip(cfg.counts())
        .map(|(p, l)| p * l as f64)
        .sum();
    let m = cfg.total_sources() as usize;
    let mut omega = Vec::with_capacity(m + 1);
    let mut term = (-chi).exp();
    omega.push(term);
    for l in 1..=m {
        term *= chi / l as f64;
        omega.push(term);
    }
    let total: f64 = omega.iter().sum();
    omega.iter_mut().for_each(|w| *w /= total);
    Ok(SlotDegreeModel::from_omega(
        omega,
        SlotModelMode::Poisson,
        chi,
    ))
}

/// Exact model when it is affordable and numerically clean, Poisson
/// otherwise.
pub fn slot_distribution(cfg: &ScenarioConfig) -> Result<SlotDegreeModel> {
    if cfg.total_sources() == 0 || cfg.total_sources() > EXACT_SLOT_MODEL_MAX_SOURCES {
        return slot_distribution_poisson(cfg);
    }
    match slot_distribution_exact(cfg) {
        Err(IrsaError::NumericInstability { .. }) => slot_distribution_poisson(cfg),
        other => other,
    }
}

pub fn rho_asymptotic(cfg: &ScenarioConfig, x: f64) -> Result<f64> {
    check_unit("x", x)?;
    Ok(Ensemble::from_scenario(cfg).rho(x))
}

/// `q_k = L_k Λ'_k(1) / Σ_j L_j Λ'_j(1)`.
pub fn class_edge_fraction(cfg: &ScenarioConfig, class: usize) -> Result<f64> {
    if class >= cfg.num_classes() {
        return Err(IrsaError::Config(format!("no class with index {class}")));
    }
    Ok(Ensemble::from_scenario(cfg).edge_fractions()?[class])
}

/// Density evolution for `cfg`, capped at `cfg.max_iters()` iterations.
pub fn density_evolution(cfg: &ScenarioConfig, eps: f64) -> DensityEvolutionOutcome {
    Ensemble::from_scenario(cfg).density_evolution(cfg.max_iters(), eps)
}

pub fn stability_margin(cfg: &ScenarioConfig, grid_step: f64) -> StabilityReport {
    Ensemble::from_scenario(cfg).stability(grid_step)
}

/// Bisects the traffic at which the fixed-ratio ensemble stops being
/// stable, searching within `[0.01, 1]`.
pub fn threshold_for_ratios(
    ratios: &[f64],
    dists: &[DegreeDistribution],
    tol: f64,
) -> Result<ThresholdResult> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(IrsaError::Domain {
            what: "tolerance",
            value: tol,
            domain: "(0, inf)",
        });
    }
    if ratios.len() != dists.len() || ratios.is_empty() {
        return Err(IrsaError::Config(
            "need one ratio per distribution".to_string(),
        ));
    }
    let stable = |g: f64| Ensemble::at_traffic(ratios, dists, g).is_stable();
    let (mut lo, mut hi) = BRACKET;
    if !stable(lo) {
        return Err(IrsaError::Bracket(format!(
            "traffic {lo} is already unstable"
        )));
    }
    if stable(hi) {
        return Err(IrsaError::Bracket(format!("traffic {hi} is still stable")));
    }
    while hi - lo >= tol {
        let mid = 0.5 * (lo + hi);
        if stable(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(ThresholdResult {
        g_star: 0.5 * (lo + hi),
        ratios: ratios.to_vec(),
        tolerance: tol,
        stable_below: lo,
        unstable_above: hi,
    })
}

/// Threshold of `base` with its class ratios `L_k / M` held fixed.
pub fn threshold_bisection(base: &ScenarioConfig, tol: f64) -> Result<ThresholdResult> {
    let dists: Vec<DegreeDistribution> = base.classes().iter().map(|c| c.dist.clone()).collect();
    threshold_for_ratios(&base.class_ratios(), &dists, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::Catalog;

    fn cat(name: &str) -> DegreeDistribution {
        Catalog::builtin().get(name).unwrap().clone()
    }

    fn scenario(slots: u64, classes: &[(u64, DegreeDistribution)], iters: u32) -> ScenarioConfig {
        let w = 1.0 / classes.len() as f64;
        ScenarioConfig::new(
            slots,
            classes
                .iter()
                .map(|(l, d)| ClassSpec::new(*l, w, d.clone()))
                .collect(),
            iters,
        )
        .unwrap()
    }

    fn x2() -> DegreeDistribution {
        DegreeDistribution::regular(2).unwrap()
    }

    /// Brute-force convolution of per-class binomials.
    fn convolve_binomials(parts: &[(u64, f64)]) -> Vec<f64> {
        let mut acc = vec![1.0];
        for &(n, p) in parts {
            for _ in 0..n {
                let mut next = vec![0.0; acc.len() + 1];
                for (i, w) in acc.iter().enumerate() {
                    next[i] += w * (1.0 - p);
                    next[i + 1] += w * p;
                }
                acc = next;
            }
        }
        acc
    }

    #[test]
    fn replica_slot_prob_examples() {
        let s = ClassSpec::new(1, 1.0, cat("a"));
        assert_close!(replica_slot_prob(&s, 200).unwrap(), 0.014898, 1e-12);
        let one = ClassSpec::new(1, 1.0, DegreeDistribution::regular(1).unwrap());
        assert_close!(replica_slot_prob(&one, 10).unwrap(), 0.1, 1e-15);
        let b = ClassSpec::new(1, 1.0, cat("b"));
        assert_close!(replica_slot_prob(&b, 100).unwrap(), 0.032235, 1e-12);
        let big = ClassSpec::new(1, 1.0, cat("e"));
        assert!(replica_slot_prob(&big, 5).is_err());
    }

    #[test]
    fn exact_slot_model_examples() {
        let one = DegreeDistribution::regular(1).unwrap();
        // p = 1/2
        let cfg = scenario(2, &[(1, one.clone())], 10);
        let m = slot_distribution_exact(&cfg).unwrap();
        assert_eq!(m.omega.len(), 2);
        assert_close!(m.omega[0], 0.5, 1e-12);
        assert_close!(m.omega[1], 0.5, 1e-12);

        // p = (0.1, 0.5): slots 10 and 2 are not combinable in one frame, so
        // build the mixed case from a degree-1 class (p = 1/10) and a
        // degree-5 class (p = 5/10).
        let five = DegreeDistribution::regular(5).unwrap();
        let cfg = scenario(10, &[(1, one.clone()), (1, five)], 10);
        let m = slot_distribution_exact(&cfg).unwrap();
        assert_close!(m.omega[0], 0.45, 1e-12);
        assert_close!(m.omega[1], 0.50, 1e-12);
        assert_close!(m.omega[2], 0.05, 1e-12);

        let cfg = scenario(2, &[(2, one)], 10);
        let m = slot_distribution_exact(&cfg).unwrap();
        for (got, want) in m.omega.iter().zip([0.25, 0.5, 0.25]) {
            assert_close!(*got, want, 1e-12);
        }
        assert_close!(m.rho[1], 0.5, 1e-12);
        assert_close!(m.rho[2], 0.5, 1e-12);
    }

    #[test]
    fn exact_slot_model_matches_convolution() {
        let dists = ["a", "b", "c", "d", "e", "f"].map(cat);
        for (i, da) in dists.iter().enumerate() {
            for db in &dists[i..] {
                for (la, lb) in [(1, 0), (3, 5), (10, 10), (7, 13), (0, 20)] {
                    let cfg = scenario(40, &[(la, da.clone()), (lb, db.clone())], 10);
                    let m = slot_distribution_exact(&cfg).unwrap();
                    let oracle = convolve_binomials(&[
                        (la, da.mean_degree() / 40.0),
                        (lb, db.mean_degree() / 40.0),
                    ]);
                    assert_eq!(m.omega.len(), oracle.len());
                    for (got, want) in m.omega.iter().zip(&oracle) {
                        assert_close!(*got, *want, 1e-9);
                    }
                }
            }
        }
    }

    #[test]
    fn exact_slot_model_needs_sources() {
        let cfg = scenario(10, &[(0, x2())], 10);
        assert_eq!(slot_distribution_exact(&cfg), Err(IrsaError::EmptySystem));
    }

    #[test]
    fn poisson_slot_model_examples() {
        let cfg = scenario(10, &[(0, x2())], 10);
        let m = slot_distribution_poisson(&cfg).unwrap();
        assert_eq!(m.omega, vec![1.0]);
        assert_eq!(m.chi, 0.0);

        let cfg = scenario(200, &[(100, x2())], 10);
        let m = slot_distribution_poisson(&cfg).unwrap();
        assert_close!(m.chi, 1.0, 1e-12);
        let e1 = (-1.0f64).exp();
        assert_close!(m.omega[0], e1, 1e-9);
        assert_close!(m.omega[1], e1, 1e-9);
        assert_close!(m.omega[2], e1 / 2.0, 1e-9);
        assert_close!(m.omega.iter().sum::<f64>(), 1.0, 1e-12);
    }

    #[test]
    fn auto_mode_degrades_to_poisson() {
        let cfg = scenario(2000, &[(600, x2())], 10);
        assert_eq!(
            slot_distribution(&cfg).unwrap().mode,
            SlotModelMode::Poisson
        );
        let cfg = scenario(200, &[(60, x2())], 10);
        assert_eq!(slot_distribution(&cfg).unwrap().mode, SlotModelMode::Exact);
    }

    #[test]
    fn rho_examples() {
        let cfg = scenario(100, &[(100, x2())], 10);
        assert_close!(rho_asymptotic(&cfg, 1.0).unwrap(), 1.0, 1e-15);
        assert_close!(rho_asymptotic(&cfg, 0.0).unwrap(), (-2.0f64).exp(), 1e-12);
        let empty = scenario(100, &[(0, x2())], 10);
        assert_eq!(rho_asymptotic(&empty, 0.3).unwrap(), 1.0);
        assert!(rho_asymptotic(&cfg, 2.0).is_err());
    }

    #[test]
    fn edge_fraction_examples() {
        let cfg = scenario(200, &[(50, cat("c"))], 10);
        assert_close!(class_edge_fraction(&cfg, 0).unwrap(), 1.0, 1e-15);

        let cfg = scenario(200, &[(40, cat("c")), (40, cat("c"))], 10);
        assert_close!(class_edge_fraction(&cfg, 0).unwrap(), 0.5, 1e-15);
        assert_close!(class_edge_fraction(&cfg, 1).unwrap(), 0.5, 1e-15);

        let cfg = scenario(200, &[(100, cat("a")), (100, cat("b"))], 10);
        // 2.9796 / (2.9796 + 3.2235)
        assert_close!(class_edge_fraction(&cfg, 0).unwrap(), 0.480341, 1e-6);

        let empty = scenario(200, &[(0, cat("a"))], 10);
        assert_eq!(class_edge_fraction(&empty, 0), Err(IrsaError::EmptySystem));
        assert!(class_edge_fraction(&cfg, 2).is_err());
    }

    #[test]
    fn density_evolution_low_traffic() {
        let cfg = scenario(1_000_000, &[(1, cat("a")), (1, cat("c"))], 100);
        let out = density_evolution(&cfg, DEFAULT_DE_EPS);
        for pe in &out.pe {
            assert!(*pe < 1e-9, "pe = {pe}");
        }
    }

    #[test]
    fn density_evolution_first_step() {
        let cfg = scenario(200, &[(200, x2())], 1);
        let out = density_evolution(&cfg, DEFAULT_DE_EPS);
        let z0 = 1.0 - (-2.0f64).exp();
        assert_close!(out.z[0], z0, 1e-12);
        assert_close!(out.y[0][1], z0, 1e-12);
        assert_close!(out.z[0], 0.864665, 1e-6);
        assert_eq!(out.iterations_run, 1);
    }

    #[test]
    fn density_evolution_fixed_point() {
        // Root of z = 1 - exp(-2z) on (0, 1] by bisection.
        let (mut lo, mut hi) = (0.5f64, 1.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid - (1.0 - (-2.0 * mid).exp()) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let z_star = 0.5 * (lo + hi);
        assert!((z_star - (1.0 - (-2.0 * z_star).exp())).abs() < 1e-9);

        let cfg = scenario(200, &[(200, x2())], 10_000);
        let out = density_evolution(&cfg, 1e-15);
        assert!(out.converged);
        let y_final = *out.y[0].last().unwrap();
        assert_close!(y_final, z_star, 1e-9);
        assert_close!(out.pe[0], z_star * z_star, 1e-9);
    }

    #[test]
    fn empty_system_decodes_trivially() {
        let cfg = scenario(100, &[(0, cat("a")), (0, cat("b"))], 50);
        let out = density_evolution(&cfg, DEFAULT_DE_EPS);
        assert_eq!(out.pe, vec![0.0, 0.0]);
        assert!(stability_margin(&cfg, 1e-3).stable);
    }

    #[test]
    fn stability_examples() {
        let empty = scenario(100, &[(0, x2())], 10);
        let r = stability_margin(&empty, 1e-3);
        assert!(r.stable);
        assert_close!(r.min_margin, 1e-3, 1e-15);

        // f(z) = 1 - exp(-0.8 z) <= 0.8 z
        let cfg = scenario(100, &[(40, x2())], 10);
        let r = stability_margin(&cfg, 1e-3);
        assert!(r.stable);
        assert_close!(r.slope_at_origin, 0.8, 1e-12);

        // f'(0) = 1.2
        let cfg = scenario(100, &[(60, x2())], 10);
        let r = stability_margin(&cfg, 1e-3);
        assert!(!r.stable);
        assert!(r.min_margin < 0.0);
        assert!(r.argmin_z < 0.5);
        assert_close!(r.slope_at_origin, 1.2, 1e-12);
    }

    #[test]
    fn degree_one_edges_break_stability() {
        let one = DegreeDistribution::new([(1, 0.001), (3, 0.999)]).unwrap();
        let cfg = scenario(1000, &[(10, one)], 10);
        let r = stability_margin(&cfg, 1e-3);
        assert!(r.value_at_origin > 0.0);
        assert!(!r.stable);
    }

    #[test]
    fn threshold_regular_two() {
        let cfg = scenario(200, &[(10, x2())], 100);
        let t = threshold_bisection(&cfg, 1e-4).unwrap();
        assert_close!(t.g_star, 0.5, 1e-4);
        assert!(t.stable_below < 0.5 && t.unstable_above >= 0.5);
        let counts = t.stable_counts(&[x2()], 200).unwrap();
        assert_eq!(counts, vec![99]);
    }

    #[test]
    fn threshold_degree_one_has_no_bracket() {
        let one = DegreeDistribution::regular(1).unwrap();
        let cfg = scenario(200, &[(10, one)], 100);
        assert!(matches!(
            threshold_bisection(&cfg, 1e-3),
            Err(IrsaError::Bracket(_))
        ));
    }

    #[test]
    fn threshold_bad_tolerance() {
        let cfg = scenario(200, &[(10, x2())], 100);
        assert!(threshold_bisection(&cfg, 0.0).is_err());
    }
}
