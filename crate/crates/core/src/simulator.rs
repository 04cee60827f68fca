//! Monte Carlo simulation of IRSA frames.
//!
//! A frame is a bipartite graph between bursts (one per source) and slots.
//! [`sic_peel`] resolves it with synchronous sweeps: every slot holding a
//! single unresolved replica reveals that burst, and all replicas of the
//! revealed bursts are cancelled before the next sweep.
//!
//! Randomness is reproducible: trial `t` of a run seeded with `s` draws from
//! ChaCha8 stream `t` under seed `s`, so results do not depend on how trials
//! are scheduled across threads.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{IrsaError, Result};
use crate::scenario::ScenarioConfig;
use crate::utility::UtilityModel;

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Burst {
    pub class: usize,
    pub slots: Vec<u32>,
}

/// One realized frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameGraph {
    num_slots: usize,
    bursts: Vec<Burst>,
    incidence: Vec<Vec<u32>>,
}

impl FrameGraph {
    /// Builds the graph and its slot-side incidence lists. Slots must be in
    /// range and distinct within each burst.
    pub fn new(num_slots: usize, bursts: Vec<Burst>) -> Result<Self> {
        let mut incidence = vec![Vec::new(); num_slots];
        for (b, burst) in bursts.iter().enumerate() {
            for (i, &s) in burst.slots.iter().enumerate() {
                if s as usize >= num_slots {
                    return Err(IrsaError::Config(format!(
                        "burst {b} uses slot {s} of a {num_slots}-slot frame"
                    )));
                }
                if burst.slots[..i].contains(&s) {
                    return Err(IrsaError::Config(format!("burst {b} uses slot {s} twice")));
                }
                incidence[s as usize].push(b as u32);
            }
        }
        Ok(FrameGraph {
            num_slots,
            bursts,
            incidence,
        })
    }

    pub fn num_slots(&self) -> usize {
        self.num_slots
    }

    pub fn bursts(&self) -> &[Burst] {
        &self.bursts
    }

    /// Bursts transmitting in `slot`, in burst order.
    pub fn slot_bursts(&self, slot: usize) -> &[u32] {
        &self.incidence[slot]
    }

    pub fn slot_degrees(&self) -> impl Iterator<Item = usize> + '_ {
        self.incidence.iter().map(Vec::len)
    }

    pub fn num_edges(&self) -> usize {
        self.bursts.iter().map(|b| b.slots.len()).sum()
    }

    /// `true` iff the slot lists are exactly the transpose of the burst
    /// slot sets.
    pub fn is_consistent(&self) -> bool {
        transpose_matches(
            self.bursts.iter().map(|b| b.slots.as_slice()),
            &self.incidence,
        )
    }
}

fn transpose_matches<'a>(bursts: impl Iterator<Item = &'a [u32]>, slots: &[Vec<u32>]) -> bool {
    let mut edges = 0;
    for (b, burst_slots) in bursts.enumerate() {
        for &s in burst_slots {
            match slots.get(s as usize) {
                Some(list) if list.contains(&(b as u32)) => edges += 1,
                _ => return false,
            }
        }
    }
    edges == slots.iter().map(Vec::len).sum::<usize>()
}

/// Draws frames for a fixed scenario.
#[derive(Debug, Clone)]
pub struct FrameSampler {
    num_slots: u32,
    classes: Vec<ClassSampler>,
    /// Slot permutation, restored to the identity after every burst.
    scratch: Vec<u32>,
}

#[derive(Debug, Clone)]
struct ClassSampler {
    count: u64,
    degrees: Vec<u32>,
    index: WeightedIndex<f64>,
}

impl FrameSampler {
    pub fn new(cfg: &ScenarioConfig) -> Self {
        let classes = cfg
            .classes()
            .iter()
            .map(|c| {
                let (degrees, weights): (Vec<u32>, Vec<f64>) =
                    c.dist.coeffs().iter().copied().unzip();
                ClassSampler {
                    count: c.count,
                    degrees,
                    index: WeightedIndex::new(weights).expect("validated distribution"),
                }
            })
            .collect();
        let num_slots = u32::try_from(cfg.slots()).expect("frame size fits in u32");
        FrameSampler {
            num_slots,
            classes,
            scratch: (0..num_slots).collect(),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&mut self, rng: &mut R) -> FrameGraph {
        let n = self.num_slots;
        let mut bursts = Vec::new();
        for (k, class) in self.classes.iter().enumerate() {
            for _ in 0..class.count {
                let degree = class.degrees[class.index.sample(rng)];
                debug_assert!(degree <= n);
                let mut swaps = Vec::with_capacity(degree as usize);
                // partial Fisher-Yates
                for i in 0..degree {
                    let j = rng.random_range(i..n);
                    self.scratch.swap(i as usize, j as usize);
                    swaps.push(j);
                }
                let slots = self.scratch[..degree as usize].to_vec();
                for (i, &j) in swaps.iter().enumerate().rev() {
                    self.scratch.swap(i, j as usize);
                }
                bursts.push(Burst { class: k, slots });
            }
        }
        FrameGraph::new(n as usize, bursts).expect("sampled slots are distinct and in range")
    }
}

/// Draws one frame: each source picks a replica count from its class
/// distribution and that many distinct slots uniformly at random.
pub fn generate_frame<R: Rng + ?Sized>(cfg: &ScenarioConfig, rng: &mut R) -> FrameGraph {
    FrameSampler::new(cfg).sample(rng)
}

/// Residual graph during SIC.
#[derive(Debug, Clone)]
pub struct Peeler {
    slot_lists: Vec<Vec<u32>>,
    burst_lists: Vec<Vec<u32>>,
    decoded: Vec<bool>,
}

impl Peeler {
    pub fn new(g: &FrameGraph) -> Self {
        Peeler {
            slot_lists: g.incidence.clone(),
            burst_lists: g.bursts.iter().map(|b| b.slots.clone()).collect(),
            decoded: vec![false; g.bursts.len()],
        }
    }

    /// One synchronous sweep. Returns the bursts revealed, in increasing
    /// order; their replicas are cancelled before returning.
    pub fn sweep(&mut self) -> Vec<u32> {
        let mut revealed: Vec<u32> = self
            .slot_lists
            .iter()
            .filter(|l| l.len() == 1)
            .map(|l| l[0])
            .collect();
        revealed.sort_unstable();
        revealed.dedup();
        for &b in &revealed {
            self.cancel(b);
        }
        revealed
    }

    fn cancel(&mut self, burst: u32) {
        self.decoded[burst as usize] = true;
        for s in std::mem::take(&mut self.burst_lists[burst as usize]) {
            let list = &mut self.slot_lists[s as usize];
            if let Some(pos) = list.iter().position(|&b| b == burst) {
                list.swap_remove(pos);
            }
        }
    }

    pub fn decoded(&self) -> &[bool] {
        &self.decoded
    }

    pub fn remaining_edges(&self) -> usize {
        self.burst_lists.iter().map(Vec::len).sum()
    }

    pub fn is_consistent(&self) -> bool {
        transpose_matches(self.burst_lists.iter().map(Vec::as_slice), &self.slot_lists)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeResult {
    pub decoded: Vec<bool>,
    /// `R_k`, decoded bursts per class.
    pub recovered: Vec<u64>,
    /// Number of sweeps that revealed at least one burst.
    pub iterations_used: u32,
}

/// Peeling decoder with at most `max_iters` sweeps. A burst revealed in
/// sweep `max_iters` counts as decoded.
pub fn sic_peel(g: &FrameGraph, max_iters: u32) -> DecodeResult {
    let num_classes = g.bursts.iter().map(|b| b.class + 1).max().unwrap_or(0);
    sic_peel_classes(g, max_iters, num_classes)
}

fn sic_peel_classes(g: &FrameGraph, max_iters: u32, num_classes: usize) -> DecodeResult {
    let mut peeler = Peeler::new(g);
    let mut iterations_used = 0;
    while iterations_used < max_iters {
        if peeler.sweep().is_empty() {
            break;
        }
        iterations_used += 1;
    }
    let mut recovered = vec![0; num_classes];
    for (burst, &ok) in g.bursts.iter().zip(&peeler.decoded) {
        if ok {
            recovered[burst.class] += 1;
        }
    }
    DecodeResult {
        decoded: peeler.decoded,
        recovered,
        iterations_used,
    }
}

/// Child generator for trial `trial` of a run seeded with `base_seed`.
pub fn trial_rng(base_seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(base_seed);
    rng.set_stream(trial);
    rng
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassStats {
    pub sources: u64,
    /// Fraction of this class's messages left undecoded.
    pub pe: f64,
    /// `G (1 - P_e)`.
    pub throughput: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloReport {
    pub trials: u64,
    pub seed: u64,
    pub traffic: f64,
    pub classes: Vec<ClassStats>,
    /// Undecoded fraction over all messages of all trials.
    pub overall_pe: f64,
    pub utility_mean: f64,
    /// Half-width of the normal-approximation 95% interval on the mean.
    pub utility_ci95: f64,
    pub mean_iterations: f64,
}

struct TrialOutcome {
    recovered: Vec<u64>,
    utility: f64,
    iterations: u32,
}

/// Runs `trials` independent frames and aggregates per-class statistics.
///
/// Per-trial outcomes are reduced in trial order, so the report is
/// bit-identical for a given `(cfg, trials, base_seed)` whatever the thread
/// pool size.
pub fn monte_carlo(
    cfg: &ScenarioConfig,
    trials: u64,
    base_seed: u64,
    utility: &UtilityModel,
) -> Result<MonteCarloReport> {
    if trials == 0 {
        return Err(IrsaError::Config("at least one trial is required".into()));
    }
    if utility.num_classes() != cfg.num_classes() {
        return Err(IrsaError::Config(format!(
            "utility model has {} classes, scenario has {}",
            utility.num_classes(),
            cfg.num_classes()
        )));
    }
    let k = cfg.num_classes();
    let outcomes: Vec<TrialOutcome> = (0..trials)
        .into_par_iter()
        .map_init(
            || FrameSampler::new(cfg),
            |sampler, t| {
                let mut rng = trial_rng(base_seed, t);
                let frame = sampler.sample(&mut rng);
                let res = sic_peel_classes(&frame, cfg.max_iters(), k);
                TrialOutcome {
                    utility: utility.score(&res.recovered),
                    recovered: res.recovered,
                    iterations: res.iterations_used,
                }
            },
        )
        .collect();

    let mut recovered = vec![0u64; k];
    let mut iterations = 0u64;
    let mut sum = 0.0;
    for o in &outcomes {
        for (acc, r) in recovered.iter_mut().zip(&o.recovered) {
            *acc += r;
        }
        iterations += u64::from(o.iterations);
        sum += o.utility;
    }
    let n = trials as f64;
    let mean = sum / n;
    let ci = if trials > 1 {
        let var = outcomes
            .iter()
            .map(|o| (o.utility - mean).powi(2))
            .sum::<f64>()
            / (n - 1.0);
        Z95 * (var / n).sqrt()
    } else {
        0.0
    };

    let traffic = cfg.traffic();
    let classes: Vec<ClassStats> = cfg
        .classes()
        .iter()
        .zip(&recovered)
        .map(|(c, &r)| {
            let sent = c.count * trials;
            let pe = if sent == 0 {
                0.0
            } else {
                (sent - r) as f64 / sent as f64
            };
            ClassStats {
                sources: c.count,
                pe,
                throughput: traffic * (1.0 - pe),
            }
        })
        .collect();
    let sent_total = cfg.total_sources() * trials;
    let overall_pe = if sent_total == 0 {
        0.0
    } else {
        (sent_total - recovered.iter().sum::<u64>()) as f64 / sent_total as f64
    };

    Ok(MonteCarloReport {
        trials,
        seed: base_seed,
        traffic,
        classes,
        overall_pe,
        utility_mean: mean,
        utility_ci95: ci,
        mean_iterations: iterations as f64 / n,
    })
}

/// Empirical degree statistics gathered over many frames.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDegrees {
    /// Fraction of edges attached to a burst of degree `l` (index `l`).
    pub burst_edge: Vec<f64>,
    /// Fraction of edges attached to a slot of degree `l`.
    pub slot_edge: Vec<f64>,
    /// Fraction of slots with degree `l`.
    pub slot_node: Vec<f64>,
}

fn normalized(counts: Vec<u64>) -> Vec<f64> {
    let total: u64 = counts.iter().sum();
    counts
        .into_iter()
        .map(|c| {
            if total == 0 {
                0.0
            } else {
                c as f64 / total as f64
            }
        })
        .collect()
}

fn bump(hist: &mut Vec<u64>, index: usize, by: u64) {
    if hist.len() <= index {
        hist.resize(index + 1, 0);
    }
    hist[index] += by;
}

/// Burst and slot degree histograms over `frames` frames drawn with the
/// same per-trial streams as [`monte_carlo`].
pub fn empirical_degrees(cfg: &ScenarioConfig, frames: u64, base_seed: u64) -> EmpiricalDegrees {
    let hists: Vec<[Vec<u64>; 3]> = (0..frames)
        .into_par_iter()
        .map_init(
            || FrameSampler::new(cfg),
            |sampler, t| {
                let g = sampler.sample(&mut trial_rng(base_seed, t));
                let mut h: [Vec<u64>; 3] = Default::default();
                for b in g.bursts() {
                    bump(&mut h[0], b.slots.len(), b.slots.len() as u64);
                }
                for d in g.slot_degrees() {
                    bump(&mut h[1], d, d as u64);
                    bump(&mut h[2], d, 1);
                }
                h
            },
        )
        .collect();
    let mut total: [Vec<u64>; 3] = Default::default();
    for h in hists {
        for (acc, part) in total.iter_mut().zip(h) {
            for (i, c) in part.into_iter().enumerate() {
                bump(acc, i, c);
            }
        }
    }
    let [burst_edge, slot_edge, slot_node] = total;
    EmpiricalDegrees {
        burst_edge: normalized(burst_edge),
        slot_edge: normalized(slot_edge),
        slot_node: normalized(slot_node),
    }
}

/// `Σ |a_i - b_i|` over the union of supports.
pub fn l1_distance(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| (a.get(i).copied().unwrap_or(0.0) - b.get(i).copied().unwrap_or(0.0)).abs())
        .sum()
}
