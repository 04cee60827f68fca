//! Command dispatch and the shipped figure presets.

use irsa_core::analysis::{
    density_evolution, slot_distribution_exact, stability_margin, threshold_bisection,
    DEFAULT_DE_EPS, DEFAULT_STABILITY_STEP,
};
use irsa_core::optimizer::{
    algorithm1, algorithm2_with_shrink, exhaustive_oracle, expected_utility, on_region_safe,
    on_region_simulated, on_region_theoretical, DEFAULT_SAFE_SHRINK,
};
use irsa_core::simulator::{empirical_degrees, monte_carlo, MonteCarloReport};
use irsa_core::{
    CandidateSpace, Catalog, ClassCandidates, ClassSpec, CountRange, DegreeDistribution, Ensemble,
    OptimizationResult, ScenarioConfig, UtilityModel,
};

use crate::config::{CommandKind, ExperimentConfig, Figure, RegionKind};
use crate::error::Result;
use crate::table::{Cell, Provenance, ResultTable};

/// Iteration cap of every preset.
const PRESET_ITERS: u32 = 100;
/// Frames per load point in the degree-statistics preset.
const FIG4_FRAMES: u64 = 10_000;

/// Runs `cfg` and returns its result table.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ResultTable> {
    cfg.validate()?;
    let prov = Provenance::new(cfg.seed(), &cfg.digest_json());
    match cfg.command {
        CommandKind::De => run_de(cfg, prov),
        CommandKind::Sim => run_sim(cfg, prov),
        CommandKind::Stability => run_stability(cfg, prov),
        CommandKind::Threshold => run_threshold(cfg, prov),
        CommandKind::Region => run_region(cfg, prov),
        CommandKind::Optimize => run_optimize(cfg, prov),
        CommandKind::ReproduceFigure => {
            let figure = cfg.figure.expect("validated");
            run_figure(figure, cfg, prov)
        }
    }
}

fn dist_name(d: &DegreeDistribution) -> String {
    match d.label() {
        Some(l) => l.to_string(),
        None => d
            .coeffs()
            .iter()
            .map(|(deg, p)| format!("{p}x^{deg}"))
            .collect::<Vec<_>>()
            .join("+"),
    }
}

fn join_counts(counts: &[u64]) -> String {
    counts
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(";")
}

fn db(x: f64) -> Cell {
    if x > 0.0 {
        Cell::Float(10.0 * x.log10())
    } else {
        Cell::Empty
    }
}

fn sweep_points(cfg: &ExperimentConfig, base: &ScenarioConfig) -> Result<Vec<f64>> {
    match &cfg.sweep {
        Some(s) => s.points(),
        None => Ok(vec![base.traffic()]),
    }
}

fn run_de(cfg: &ExperimentConfig, prov: Provenance) -> Result<ResultTable> {
    let base = cfg.scenario_spec()?.build()?;
    let mut t = ResultTable::new(
        &[
            "G",
            "class",
            "count",
            "pe_theory",
            "iterations",
            "converged",
        ],
        prov,
    );
    for g in sweep_points(cfg, &base)? {
        let s = base.at_traffic(g)?;
        let de = density_evolution(&s, DEFAULT_DE_EPS);
        for (k, c) in s.classes().iter().enumerate() {
            t.push(vec![
                g.into(),
                (k + 1).into(),
                c.count.into(),
                de.pe[k].into(),
                de.iterations_run.into(),
                de.converged.into(),
            ]);
        }
    }
    Ok(t)
}

const SIM_COLUMNS: [&str; 9] = [
    "G",
    "class",
    "count",
    "pe_theory",
    "pe_sim",
    "throughput",
    "utility_theory",
    "utility_mean",
    "utility_ci95",
];

/// One row per class: theory and Monte Carlo at traffic `g`, class ratios
/// taken from `base`.
fn sim_rows(
    base: &ScenarioConfig,
    g: f64,
    trials: u64,
    seed: u64,
    u: &UtilityModel,
) -> Result<Vec<Vec<Cell>>> {
    let s = base.at_traffic(g)?;
    let de = density_evolution(&s, DEFAULT_DE_EPS);
    let u_theory = expected_utility(&s, &de.pe, u)?;
    let mc = monte_carlo(&s, trials, seed, u)?;
    Ok(s.classes()
        .iter()
        .zip(&mc.classes)
        .enumerate()
        .map(|(k, (c, stats))| {
            vec![
                g.into(),
                (k + 1).into(),
                c.count.into(),
                de.pe[k].into(),
                stats.pe.into(),
                stats.throughput.into(),
                u_theory.into(),
                mc.utility_mean.into(),
                mc.utility_ci95.into(),
            ]
        })
        .collect())
}

fn run_sim(cfg: &ExperimentConfig, prov: Provenance) -> Result<ResultTable> {
    let base = cfg.scenario_spec()?.build()?;
    let u = cfg.utility_for(&base.weights())?;
    let mut t = ResultTable::new(&SIM_COLUMNS, prov);
    for g in sweep_points(cfg, &base)? {
        for row in sim_rows(&base, g, cfg.trials(), cfg.seed(), &u)? {
            t.push(row);
        }
    }
    Ok(t)
}

fn run_stability(cfg: &ExperimentConfig, prov: Provenance) -> Result<ResultTable> {
    let base = cfg.scenario_spec()?.build()?;
    let mut t = ResultTable::new(
        &["G", "stable", "min_margin", "argmin_z", "slope_at_origin"],
        prov,
    );
    for g in sweep_points(cfg, &base)? {
        let r = stability_margin(&base.at_traffic(g)?, DEFAULT_STABILITY_STEP);
        t.push(vec![
            g.into(),
            r.stable.into(),
            r.min_margin.into(),
            r.argmin_z.into(),
            r.slope_at_origin.into(),
        ]);
    }
    Ok(t)
}

fn run_threshold(cfg: &ExperimentConfig, prov: Provenance) -> Result<ResultTable> {
    let base = cfg.scenario_spec()?.build()?;
    let tol = cfg.tolerance.unwrap_or(1e-4);
    let r = threshold_bisection(&base, tol)?;
    let dists: Vec<DegreeDistribution> = base.classes().iter().map(|c| c.dist.clone()).collect();
    let counts = r.stable_counts(&dists, base.slots()).ok();
    let mut t = ResultTable::new(
        &[
            "g_star",
            "stable_below",
            "unstable_above",
            "tolerance",
            "stable_counts",
        ],
        prov,
    );
    t.push(vec![
        r.g_star.into(),
        r.stable_below.into(),
        r.unstable_above.into(),
        tol.into(),
        counts.as_deref().map(join_counts).into(),
    ]);
    Ok(t)
}

fn region_columns(k: usize) -> Vec<String> {
    std::iter::once("mode".to_string())
        .chain((1..=k).map(|i| format!("L{i}")))
        .collect()
}

fn run_region(cfg: &ExperimentConfig, prov: Provenance) -> Result<ResultTable> {
    let space = cfg.space_spec()?.build()?;
    let a = cfg.assignment_for(&space)?;
    let modes = cfg
        .regions
        .clone()
        .unwrap_or_else(|| vec![RegionKind::Theoretical, RegionKind::Safe]);
    let shrink = cfg.shrink.unwrap_or(DEFAULT_SAFE_SHRINK);
    let cols = region_columns(space.num_classes());
    let cols: Vec<&str> = cols.iter().map(String::as_str).collect();
    let mut t = ResultTable::new(&cols, prov);
    for mode in modes {
        let (name, region) = match mode {
            RegionKind::Theoretical => ("theoretical", on_region_theoretical(&space, &a)?),
            RegionKind::Safe => ("safe", on_region_safe(&space, &a, shrink)?),
            RegionKind::Simulated => (
                "simulated",
                on_region_simulated(&space, &a, &cfg.simulated_criterion())?,
            ),
        };
        for point in region.boundary {
            let mut row = vec![Cell::from(name)];
            row.extend(point.into_iter().map(Cell::from));
            t.push(row);
        }
    }
    Ok(t)
}

/// Monte Carlo run at the chosen point.
fn simulate_choice(
    space: &CandidateSpace,
    r: &OptimizationResult,
    u: &UtilityModel,
    trials: u64,
    seed: u64,
) -> Result<MonteCarloReport> {
    let s = space.scenario(&r.assignment, &r.counts, Some(u))?;
    Ok(monte_carlo(&s, trials, seed, u)?)
}

fn run_optimize(cfg: &ExperimentConfig, prov: Provenance) -> Result<ResultTable> {
    let spec = cfg.space_spec()?;
    let space = spec.build()?;
    let u = cfg.utility_for(&spec.weights)?;
    let shrink = cfg.shrink.unwrap_or(DEFAULT_SAFE_SHRINK);
    let (trials, seed) = (cfg.trials(), cfg.seed());
    let mut results = vec![
        algorithm1(&space, &u)?,
        algorithm2_with_shrink(&space, &u, shrink)?,
    ];
    if cfg.exhaustive.unwrap_or(false) {
        results.push(exhaustive_oracle(&space, &u, trials.max(100), seed)?);
    }
    let mut t = ResultTable::new(
        &[
            "method",
            "class",
            "dist",
            "count",
            "boundary_count",
            "utility",
            "utility_sim",
            "utility_sim_db",
            "utility_sim_ci95",
            "pe_sim",
        ],
        prov,
    );
    for r in &results {
        let mc = simulate_choice(&space, r, &u, trials, seed)?;
        for k in 0..space.num_classes() {
            t.push(vec![
                r.method.tag().into(),
                (k + 1).into(),
                dist_name(&r.distributions[k]).into(),
                r.counts[k].into(),
                r.boundary_point[k].into(),
                r.utility.into(),
                mc.utility_mean.into(),
                db(mc.utility_mean),
                mc.utility_ci95.into(),
                mc.classes[k].pe.into(),
            ]);
        }
    }
    Ok(t)
}

fn cat(name: &str) -> DegreeDistribution {
    Catalog::builtin()
        .get(name)
        .cloned()
        .expect("catalog entry")
}

/// Equal-count scenario with one class per distribution.
fn preset_scenario(
    slots: u64,
    dists: &[&str],
    weights: &[f64],
    counts: &[u64],
) -> Result<ScenarioConfig> {
    let classes = dists
        .iter()
        .zip(weights)
        .zip(counts)
        .map(|((d, &w), &l)| ClassSpec::new(l, w, cat(d)))
        .collect();
    Ok(ScenarioConfig::new(slots, classes, PRESET_ITERS)?)
}

fn two_class_space(
    slots: u64,
    d1: &[DegreeDistribution],
    d2: &[DegreeDistribution],
    r1: CountRange,
    r2: CountRange,
) -> Result<CandidateSpace> {
    Ok(CandidateSpace::new(
        slots,
        vec![
            ClassCandidates {
                distributions: d1.to_vec(),
                counts: r1,
            },
            ClassCandidates {
                distributions: d2.to_vec(),
                counts: r2,
            },
        ],
        PRESET_ITERS,
    )?)
}

fn traffic_grid(from: f64, to: f64, step: f64) -> Vec<f64> {
    let n = ((to - from) / step + 1e-9).floor() as usize;
    (0..=n)
        .map(|i| ((from + i as f64 * step) * 1e12).round() / 1e12)
        .collect()
}

fn run_figure(fig: Figure, cfg: &ExperimentConfig, prov: Provenance) -> Result<ResultTable> {
    let seed = cfg.seed();
    let trials = cfg.trials();
    match fig {
        Figure::Fig4 => fig4(cfg.trials.unwrap_or(FIG4_FRAMES), seed, prov),
        Figure::Fig5 => fig5(trials, seed, prov),
        Figure::Fig6 => fig6(trials, seed, prov),
        Figure::Fig7 => fig7(trials, seed, prov),
        Figure::Fig8 => fig8(cfg, prov),
        Figure::Fig9 => fig9(trials, seed, cfg.exhaustive.unwrap_or(false), prov),
        Figure::Fig10 => fig10(trials, seed, prov),
    }
}

/// Edge-perspective degree statistics, theory against sampled frames, for
/// (f, a) at N = 200 and L1 = L2 in {25, 50, 100}.
fn fig4(frames: u64, seed: u64, prov: Provenance) -> Result<ResultTable> {
    let mut t = ResultTable::new(&["L1", "L2", "side", "degree", "theory", "empirical"], prov);
    for l in [25, 50, 100] {
        let s = preset_scenario(200, &["f", "a"], &[0.5, 0.5], &[l, l])?;
        let emp = empirical_degrees(&s, frames, seed);
        let q = Ensemble::from_scenario(&s).edge_fractions()?;
        let edge: Vec<_> = s
            .classes()
            .iter()
            .map(|c| c.dist.to_edge_perspective())
            .collect();
        let max_burst = s
            .classes()
            .iter()
            .map(|c| c.dist.max_degree())
            .max()
            .unwrap_or(0);
        for d in 1..=max_burst {
            let theory: f64 = edge.iter().zip(&q).map(|(e, qk)| qk * e.prob(d)).sum();
            let empirical = emp.burst_edge.get(d as usize).copied().unwrap_or(0.0);
            t.push(vec![
                l.into(),
                l.into(),
                "burst".into(),
                d.into(),
                theory.into(),
                empirical.into(),
            ]);
        }
        let rho = slot_distribution_exact(&s)?.rho;
        let last = rho
            .iter()
            .rposition(|&p| p >= 1e-6)
            .max(emp.slot_edge.iter().rposition(|&p| p > 0.0))
            .unwrap_or(0);
        for d in 1..=last {
            let theory = rho.get(d).copied().unwrap_or(0.0);
            let empirical = emp.slot_edge.get(d).copied().unwrap_or(0.0);
            t.push(vec![
                l.into(),
                l.into(),
                "slot".into(),
                d.into(),
                theory.into(),
                empirical.into(),
            ]);
        }
    }
    Ok(t)
}

fn prefixed(prefix: Vec<Cell>, rows: Vec<Vec<Cell>>) -> impl Iterator<Item = Vec<Cell>> {
    rows.into_iter()
        .map(move |r| prefix.iter().cloned().chain(r).collect())
}

/// EEP (e, e) against UEP (e, b), N = 200, L1 = L2, w = (0.7, 0.3).
fn fig5(trials: u64, seed: u64, prov: Provenance) -> Result<ResultTable> {
    let cols: Vec<&str> = std::iter::once("strategy").chain(SIM_COLUMNS).collect();
    let mut t = ResultTable::new(&cols, prov);
    let w = [0.7, 0.3];
    let u = UtilityModel::log(w.to_vec())?;
    for (name, dists) in [("EEP", ["e", "e"]), ("UEP", ["e", "b"])] {
        let base = preset_scenario(200, &dists, &w, &[1, 1])?;
        for g in traffic_grid(0.1, 1.0, 0.02) {
            for row in prefixed(vec![name.into()], sim_rows(&base, g, trials, seed, &u)?) {
                t.push(row);
            }
        }
    }
    Ok(t)
}

/// Two sweeps: (d, a) with L1 = L2 over several frame sizes, and UEP (e, b)
/// at N = 200 with L2 = alpha L1.
fn fig6(trials: u64, seed: u64, prov: Provenance) -> Result<ResultTable> {
    let cols: Vec<&str> = ["part", "N", "alpha"]
        .into_iter()
        .chain(SIM_COLUMNS)
        .collect();
    let mut t = ResultTable::new(&cols, prov);
    let w = [0.7, 0.3];
    let u = UtilityModel::log(w.to_vec())?;
    let grid = traffic_grid(0.1, 1.0, 0.05);
    for n in [50, 100, 200, 400] {
        let base = preset_scenario(n, &["d", "a"], &w, &[1, 1])?;
        for &g in &grid {
            let prefix = vec!["frame_size".into(), n.into(), 1.0.into()];
            for row in prefixed(prefix, sim_rows(&base, g, trials, seed, &u)?) {
                t.push(row);
            }
        }
    }
    for (alpha, counts) in [(0.1, [10, 1]), (0.33, [100, 33])] {
        let base = preset_scenario(200, &["e", "b"], &w, &counts)?;
        for &g in &grid {
            let prefix = vec!["ratio".into(), 200u64.into(), f64::into(alpha)];
            for row in prefixed(prefix, sim_rows(&base, g, trials, seed, &u)?) {
                t.push(row);
            }
        }
    }
    Ok(t)
}

const PER_L1_COLUMNS: [&str; 8] = [
    "N",
    "L1",
    "method",
    "L2",
    "utility_model",
    "utility_sim",
    "utility_sim_ci95",
    "pe_sim",
];

/// Simulated outcome of `(l1, l2)` under assignment `[0, 0]`.
fn per_l1_row(
    space: &CandidateSpace,
    u: &UtilityModel,
    method: &str,
    counts: [u64; 2],
    trials: u64,
    seed: u64,
) -> Result<Vec<Cell>> {
    let s = space.scenario(&[0, 0], &counts, Some(u))?;
    let mc = monte_carlo(&s, trials, seed, u)?;
    Ok(vec![
        space.slots().into(),
        counts[0].into(),
        method.into(),
        counts[1].into(),
        u.score(&counts).into(),
        mc.utility_mean.into(),
        mc.utility_ci95.into(),
        mc.overall_pe.into(),
    ])
}

/// Best `L2` on a grid for fixed `L1`, by simulated utility.
fn exhaustive_l2(
    space: &CandidateSpace,
    u: &UtilityModel,
    l1: u64,
    trials: u64,
    seed: u64,
) -> Result<u64> {
    let r2 = space.classes()[1].counts;
    let restricted = two_class_space(
        space.slots(),
        &space.classes()[0].distributions,
        &space.classes()[1].distributions,
        CountRange::single(l1),
        r2,
    )?;
    Ok(exhaustive_oracle(&restricted, u, trials.max(100), seed)?.counts[1])
}

/// Per-L1 optimization with identical distributions (e, e), w = (0.7, 0.3),
/// N in {100, 200}: largest stable L2 against the simulated optimum.
fn fig7(trials: u64, seed: u64, prov: Provenance) -> Result<ResultTable> {
    let mut t = ResultTable::new(&PER_L1_COLUMNS, prov);
    let u = UtilityModel::log(vec![0.7, 0.3])?;
    for n in [100, 200] {
        let step = n / 20;
        let e = [cat("e")];
        let space = two_class_space(
            n,
            &e,
            &e,
            CountRange::new(0, n, step)?,
            CountRange::new(0, 2 * n, 1)?,
        )?;
        let grid = two_class_space(
            n,
            &e,
            &e,
            CountRange::new(0, n, step)?,
            CountRange::new(0, n, step)?,
        )?;
        for l1 in (0..=n).step_by(step as usize) {
            if let Some(l2) = space.max_last_count(&[l1], |p| space.is_stable(&[0, 0], p)) {
                t.push(per_l1_row(&space, &u, "alg1", [l1, l2], trials, seed)?);
            }
            let l2 = exhaustive_l2(&grid, &u, l1, trials, seed)?;
            t.push(per_l1_row(
                &space,
                &u,
                "exhaustive",
                [l1, l2],
                trials,
                seed,
            )?);
        }
    }
    Ok(t)
}

/// ON-region boundaries for (e, a) at N = 200.
fn fig8(cfg: &ExperimentConfig, prov: Provenance) -> Result<ResultTable> {
    let space = two_class_space(
        200,
        &[cat("e")],
        &[cat("a")],
        CountRange::new(0, 200, 10)?,
        CountRange::new(0, 400, 1)?,
    )?;
    let a = [0, 0];
    let crit = cfg.simulated_criterion();
    let shrink = cfg.shrink.unwrap_or(DEFAULT_SAFE_SHRINK);
    let mut t = ResultTable::new(&["L1", "L2_theoretical", "L2_simulated", "L2_safe"], prov);
    let mut failure = None;
    for l1 in (0..=200).step_by(10) {
        let th = space.max_last_count(&[l1], |p| space.is_stable(&a, p));
        let safe = space.max_last_count(&[l1], |p| space.is_safe(&a, p, shrink));
        let sim = space.max_last_count(&[l1], |p| match crit.error_rate(&space, &a, p) {
            Ok(pe) => pe < crit.max_pe,
            Err(e) => {
                failure.get_or_insert(e);
                false
            }
        });
        t.push(vec![l1.into(), th.into(), sim.into(), safe.into()]);
    }
    match failure {
        Some(e) => Err(e.into()),
        None => Ok(t),
    }
}

/// 9a: per-L1 comparison for (c, c), N = 200, w = (0.7, 0.3).
/// 9b: Algorithm 1 and 2 for each first-class distribution in the catalog,
/// second class free over the catalog.
fn fig9(trials: u64, seed: u64, exhaustive: bool, prov: Provenance) -> Result<ResultTable> {
    let cols: Vec<&str> = ["part", "lambda1", "lambda2"]
        .into_iter()
        .chain(PER_L1_COLUMNS)
        .collect();
    let mut t = ResultTable::new(&cols, prov);
    let u = UtilityModel::log(vec![0.7, 0.3])?;
    let c = [cat("c")];
    let fine = two_class_space(
        200,
        &c,
        &c,
        CountRange::new(0, 200, 10)?,
        CountRange::new(0, 400, 1)?,
    )?;
    let grid = two_class_space(
        200,
        &c,
        &c,
        CountRange::new(0, 200, 10)?,
        CountRange::new(0, 200, 10)?,
    )?;
    let a = [0, 0];
    for l1 in (0..=200).step_by(10) {
        let th = fine.max_last_count(&[l1], |p| fine.is_stable(&a, p));
        let safe = fine.max_last_count(&[l1], |p| fine.is_safe(&a, p, DEFAULT_SAFE_SHRINK));
        let ex = exhaustive_l2(&grid, &u, l1, trials, seed)?;
        for (method, l2) in [("alg1", th), ("alg2", safe), ("exhaustive", Some(ex))] {
            if let Some(l2) = l2 {
                let row = per_l1_row(&fine, &u, method, [l1, l2], trials, seed)?;
                t.push(
                    vec!["9a".into(), "c".into(), "c".into()]
                        .into_iter()
                        .chain(row)
                        .collect(),
                );
            }
        }
    }
    let catalog = Catalog::builtin();
    for d1 in catalog.entries() {
        let space = two_class_space(
            200,
            std::slice::from_ref(d1),
            catalog.entries(),
            CountRange::new(0, 200, 10)?,
            CountRange::new(0, 200, 10)?,
        )?;
        if space.feasible_assignments().is_empty() {
            continue;
        }
        let mut results = vec![
            ("alg1", algorithm1(&space, &u)?),
            (
                "alg2",
                algorithm2_with_shrink(&space, &u, DEFAULT_SAFE_SHRINK)?,
            ),
        ];
        if exhaustive {
            results.push((
                "exhaustive",
                exhaustive_oracle(&space, &u, trials.max(100), seed)?,
            ));
        }
        for (method, r) in results {
            let mc = simulate_choice(&space, &r, &u, trials, seed)?;
            t.push(vec![
                "9b".into(),
                dist_name(&r.distributions[0]).into(),
                dist_name(&r.distributions[1]).into(),
                200u64.into(),
                r.counts[0].into(),
                method.into(),
                r.counts[1].into(),
                r.utility.into(),
                mc.utility_mean.into(),
                mc.utility_ci95.into(),
                mc.overall_pe.into(),
            ]);
        }
    }
    Ok(t)
}

/// 10a: (e, a) with two weight pairs over N in {50, …, 300}.
/// 10b: four classes of e with w = (0.6, 0.2, 0.1, 0.1).
fn fig10(trials: u64, seed: u64, prov: Provenance) -> Result<ResultTable> {
    let mut t = ResultTable::new(
        &[
            "part",
            "weights",
            "N",
            "method",
            "counts",
            "utility_model",
            "utility_sim",
            "utility_sim_ci95",
            "pe_sim",
        ],
        prov,
    );
    let push = |t: &mut ResultTable,
                part: &str,
                u: &UtilityModel,
                space: &CandidateSpace,
                r: &OptimizationResult|
     -> Result<()> {
        let mc = simulate_choice(space, r, u, trials, seed)?;
        let w: Vec<String> = u.weights.iter().map(f64::to_string).collect();
        t.push(vec![
            part.into(),
            w.join(";").into(),
            space.slots().into(),
            r.method.tag().into(),
            join_counts(&r.counts).into(),
            r.utility.into(),
            mc.utility_mean.into(),
            mc.utility_ci95.into(),
            mc.overall_pe.into(),
        ]);
        Ok(())
    };
    for w in [[0.7, 0.3], [0.5, 0.5]] {
        let u = UtilityModel::log(w.to_vec())?;
        for n in (50..=300).step_by(50) {
            let step = n / 20;
            let space = two_class_space(
                n,
                &[cat("e")],
                &[cat("a")],
                CountRange::new(0, n, step)?,
                CountRange::new(0, n, step)?,
            )?;
            for r in [
                algorithm1(&space, &u)?,
                algorithm2_with_shrink(&space, &u, DEFAULT_SAFE_SHRINK)?,
                exhaustive_oracle(&space, &u, trials.max(100), seed)?,
            ] {
                push(&mut t, "10a", &u, &space, &r)?;
            }
        }
    }
    let u = UtilityModel::log(vec![0.6, 0.2, 0.1, 0.1])?;
    for n in (50..=300).step_by(50) {
        let step = n / 10;
        let classes = (0..4)
            .map(|_| ClassCandidates {
                distributions: vec![cat("e")],
                counts: CountRange::new(0, n / 2, step).expect("valid range"),
            })
            .collect();
        let space = CandidateSpace::new(n, classes, PRESET_ITERS)?;
        for r in [
            algorithm2_with_shrink(&space, &u, DEFAULT_SAFE_SHRINK)?,
            exhaustive_oracle(&space, &u, trials.max(100), seed)?,
        ] {
            push(&mut t, "10b", &u, &space, &r)?;
        }
    }
    Ok(t)
}
