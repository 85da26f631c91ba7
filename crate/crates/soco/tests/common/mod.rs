//! Random instance generators and the acceptance checks shared by the integration tests
//! and the `acceptance` target.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use soco::model::{presets, DataCenterModel, InstanceKind, OnlineInput, DEFAULT_PROFILE_SAMPLES};
use soco::numerics::{derivative1, integrate_finite, integrate_semi_infinite, Direction, Tolerance};
use soco::offline::{
    brute_force_offline, fractional_offline, graph_search_1d, graph_search_md, GraphSearchOptions,
};
use soco::online::multi::{Afhc, BudgetMode, LazyBudgetSblo, LazyBudgetSbloRefined, LazyBudgetSlo, Rhc};
use soco::online::uni::{round_step, IntLcp, Lcp, Memoryless, Probabilistic, RoundingState};
use soco::online::{run_online, OnlineAlgorithm, OnlineSpec};
use soco::problem::{
    evaluate_cost, reduce_slo_to_sblo, reduce_ssco_to_sco, EvalOptions, LoadCost, Problem, ProblemInstance,
    SbloProblem, Schedule, SloProblem, SscoProblem,
};
use soco::runtime::output::write_schedule_csv;
use soco::runtime::{compare, ingest_trace, trace_inputs, PredictionNoise, StreamSession};
use std::path::PathBuf;

/// Outcome of one check: a short detail line either way.
pub type Check = Result<String, String>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn tol() -> Tolerance {
    Tolerance::new(1e-6, false).unwrap()
}

fn cost_of<P: Problem + ?Sized>(p: &P, s: &Schedule) -> f64 {
    evaluate_cost(p, s, &EvalOptions::default()).unwrap().total
}

/// Cost of a schedule, infinite where the instance rejects it.
fn cost_or_infinity<P: Problem + ?Sized>(p: &P, s: &Schedule) -> f64 {
    evaluate_cost(p, s, &EvalOptions::default()).map_or(f64::INFINITY, |c| c.total)
}

/// Uni-dimensional instance with convex costs `a (x - c)^2 + b |x - k| + e`.
pub fn uni_instance(rng: &mut ChaCha8Rng, max_t: usize, max_m: usize, smooth: bool) -> SscoProblem {
    let t = rng.gen_range(1..=max_t);
    let m = rng.gen_range(1..=max_m) as f64;
    let beta = rng.gen_range(0.2..4.0);
    let terms: Vec<[f64; 5]> = (0..t)
        .map(|_| {
            [
                rng.gen_range(0.05..2.0),
                rng.gen_range(0.0..=m),
                if smooth { 0.0 } else { rng.gen_range(0.0..2.0) },
                rng.gen_range(0.0..=m),
                rng.gen_range(0.0..1.0),
            ]
        })
        .collect();
    SscoProblem::uni(t, m, beta, move |s, x| {
        let [a, c, b, k, e] = terms[s - 1];
        a * (x - c).powi(2) + b * (x - k).abs() + e
    })
    .unwrap()
}

/// Two-dimensional integral instance with coupled quadratic costs.
pub fn md_instance(rng: &mut ChaCha8Rng, max_t: usize, max_m: usize) -> SscoProblem {
    use soco::problem::HittingCostStore;
    let t = rng.gen_range(1..=max_t);
    let bounds: Vec<f64> = (0..2).map(|_| rng.gen_range(1..=max_m) as f64).collect();
    let switching: Vec<f64> = (0..2).map(|_| rng.gen_range(0.2..3.0)).collect();
    let terms: Vec<[f64; 6]> = (0..t)
        .map(|_| {
            [
                rng.gen_range(0.1..2.0),
                rng.gen_range(0.0..=bounds[0]),
                rng.gen_range(0.1..2.0),
                rng.gen_range(0.0..=bounds[1]),
                rng.gen_range(0.0..1.0),
                rng.gen_range(0.0..(bounds[0] + bounds[1])),
            ]
        })
        .collect();
    let costs = HittingCostStore::certain(move |s, x| {
        let [a, c, b, k, g, l] = terms[s - 1];
        a * (x[0] - c).powi(2) + b * (x[1] - k).powi(2) + g * (x[0] + x[1] - l).powi(2)
    });
    SscoProblem::new(t, bounds, switching, costs).unwrap().integral()
}

/// Random SBLO instance with stationary convex per-server costs.
pub fn sblo_instance(rng: &mut ChaCha8Rng, d: usize, max_t: usize, max_m: usize) -> SbloProblem {
    let t = rng.gen_range(2..=max_t);
    let bounds: Vec<f64> = (0..d).map(|_| rng.gen_range(2..=max_m) as f64).collect();
    let switching: Vec<f64> = (0..d).map(|_| rng.gen_range(0.5..6.0)).collect();
    let load_costs: Vec<LoadCost> = (0..d)
        .map(|_| {
            let (idle, slope, curve) = (rng.gen_range(0.2..2.0), rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0));
            let max_load = rng.gen_range(1.0..3.0);
            LoadCost::stationary(move |l| idle + slope * l + curve * l * l, max_load)
        })
        .collect();
    let capacity: f64 = bounds.iter().zip(&load_costs).map(|(m, g)| m * g.max_load).sum();
    let loads = (0..t).map(|_| (rng.gen_range(0.0..0.9) * capacity * 10.0).round() / 10.0).collect();
    SbloProblem::new(bounds, switching, load_costs, loads).unwrap()
}

/// Random SLO instance with efficient server types.
pub fn slo_instance(rng: &mut ChaCha8Rng, d: usize, max_t: usize, max_m: usize) -> SloProblem {
    let t = rng.gen_range(2..=max_t);
    let bounds: Vec<f64> = (0..d).map(|_| rng.gen_range(1..=max_m) as f64).collect();
    let mut costs: Vec<f64> = (0..d).map(|_| rng.gen_range(0.2..3.0)).collect();
    let mut switching: Vec<f64> = (0..d).map(|_| rng.gen_range(0.5..10.0)).collect();
    costs.sort_by(|a, b| b.total_cmp(a));
    switching.sort_by(f64::total_cmp);
    for k in 1..d {
        costs[k] = costs[k].min(costs[k - 1] - 0.05);
        switching[k] = switching[k].max(switching[k - 1] + 0.05);
    }
    for c in &mut costs {
        *c = c.max(0.01);
    }
    let total: f64 = bounds.iter().sum();
    let loads = (0..t).map(|_| rng.gen_range(0..=total as usize) as f64).collect();
    SloProblem::new(bounds, switching, costs, loads).unwrap()
}

fn worst(ratios: &[f64]) -> f64 {
    ratios.iter().cloned().fold(0.0, f64::max)
}

fn within(cost: f64, bound: f64) -> bool {
    cost <= bound * (1.0 + 1e-3) + 1e-9
}

// ---------------------------------------------------------------------------------------
// Offline exactness

pub fn offline_exactness(instances: u64) -> Check {
    let start = std::time::Instant::now();
    let opts = GraphSearchOptions::default();
    let mut checked = (0, 0);
    for seed in 0..instances {
        let mut r = rng(seed);
        let p = loop {
            let p = uni_instance(&mut r, 8, 8, false).integral();
            if (p.bounds[0] + 1.0).powi(p.horizon as i32) <= 2e5 {
                break p;
            }
        };
        let brute = brute_force_offline(&p, &opts).map_err(|e| e.to_string())?.cost;
        let graph = graph_search_1d(&p, &opts).map_err(|e| e.to_string())?.cost;
        if (brute - graph).abs() > 1e-9 * brute.abs().max(1.0) {
            return Err(format!("1-d seed {seed}: graph {graph} vs brute {brute}"));
        }
        checked.0 += 1;
        let q = md_instance(&mut r, 4, 3);
        let brute = brute_force_offline(&q, &opts).map_err(|e| e.to_string())?.cost;
        let graph = graph_search_md(&q, &opts).map_err(|e| e.to_string())?.cost;
        if (brute - graph).abs() > 1e-9 * brute.abs().max(1.0) {
            return Err(format!("2-d seed {seed}: graph {graph} vs brute {brute}"));
        }
        checked.1 += 1;
    }
    let secs = start.elapsed().as_secs_f64();
    if secs >= 60.0 {
        return Err(format!("took {secs:.1}s"));
    }
    Ok(format!("{} uni and {} two-dimensional instances agree with brute force in {secs:.1}s", checked.0, checked.1))
}

// ---------------------------------------------------------------------------------------
// Approximation

pub fn approximation(instances: u64) -> Check {
    let mut ratios: Vec<(f64, f64)> = Vec::new();
    for seed in 0..instances {
        let mut r = rng(1000 + seed);
        let sblo = sblo_instance(&mut r, 2, 5, 12);
        let p = sblo.to_ssco();
        let opt = graph_search_md(&p, &GraphSearchOptions::default()).map_err(|e| e.to_string())?.cost;
        for gamma in [1.1, 1.5, 2.0, 1.25] {
            let cost = graph_search_md(&p, &GraphSearchOptions::approximate(gamma)).map_err(|e| e.to_string())?.cost;
            // gamma = 1 + eps / 2 with eps = 0.5
            let bound = if gamma == 1.25 { 1.5 } else { 2.0 * gamma + 1.0 };
            if !within(cost, bound * opt) {
                return Err(format!("seed {seed}, gamma {gamma}: {cost} > {bound} * {opt}"));
            }
            if cost < opt - 1e-9 * opt.abs().max(1.0) {
                return Err(format!("seed {seed}, gamma {gamma}: approximation {cost} beats the optimum {opt}"));
            }
            ratios.push((gamma, if opt > 0.0 { cost / opt } else { 1.0 }));
        }
    }
    let w = |g: f64| worst(&ratios.iter().filter(|(x, _)| *x == g).map(|(_, r)| *r).collect::<Vec<_>>());
    Ok(format!(
        "{instances} SBLO instances; worst ratios {:.4} (1.1), {:.4} (1.5), {:.4} (2), {:.4} (eps 0.5)",
        w(1.1),
        w(1.5),
        w(2.0),
        w(1.25)
    ))
}

// ---------------------------------------------------------------------------------------
// Competitive ratios

fn ratio_over(
    instances: u64,
    seed0: u64,
    bound: impl Fn(usize) -> f64,
    mut make: impl FnMut(&mut ChaCha8Rng) -> (ProblemInstance, Box<dyn OnlineAlgorithm>, f64),
) -> Result<f64, String> {
    let mut ratios = Vec::new();
    for seed in 0..instances {
        let mut r = rng(seed0 + seed);
        let (inst, mut alg, opt) = make(&mut r);
        let schedule = run_online(alg.as_mut(), &inst).map_err(|e| format!("seed {seed}: {e}"))?;
        let cost = cost_of(&inst, &schedule);
        let b = bound(inst.dim());
        if !within(cost, b * opt) {
            return Err(format!("{} seed {seed}: {cost} > {b} * {opt}", alg.name()));
        }
        ratios.push(if opt > 0.0 { cost / opt } else { 1.0 });
    }
    Ok(worst(&ratios))
}

fn fractional_opt(p: &SscoProblem) -> f64 {
    fractional_offline(p, &GraphSearchOptions::default(), tol()).unwrap().cost
}

fn integral_opt(p: &SscoProblem) -> f64 {
    graph_search_md(p, &GraphSearchOptions::default()).unwrap().cost
}

pub fn competitive_ratios(instances: u64) -> Check {
    let mut lines = Vec::new();
    let lcp = ratio_over(instances, 2000, |_| 3.0, |r| {
        let p = uni_instance(r, 8, 8, false);
        let w = r.gen_range(0..3);
        let opt = fractional_opt(&p);
        (ProblemInstance::Ssco(p), Box::new(Lcp::new(w)), opt)
    })?;
    lines.push(format!("lcp {lcp:.3}"));
    let int_lcp = ratio_over(instances, 3000, |_| 3.0, |r| {
        let p = uni_instance(r, 8, 8, false).integral();
        let opt = integral_opt(&p);
        (ProblemInstance::Ssco(p), Box::new(IntLcp::new(0)), opt)
    })?;
    lines.push(format!("int-lcp {int_lcp:.3}"));
    let memoryless = ratio_over(instances, 4000, |_| 3.0, |r| {
        let p = uni_instance(r, 8, 8, false);
        let opt = fractional_opt(&p);
        (ProblemInstance::Ssco(p), Box::new(Memoryless::new()), opt)
    })?;
    lines.push(format!("memoryless {memoryless:.3}"));
    // The 1% numeric slack of the probabilistic algorithm.
    let probabilistic = ratio_over(instances, 5000, |_| 2.0 * 1.01, |r| {
        let p = uni_instance(r, 6, 6, true);
        let opt = fractional_opt(&p);
        (ProblemInstance::Ssco(p), Box::new(Probabilistic::new(1e-3)), opt)
    })?;
    lines.push(format!("probabilistic {probabilistic:.3}"));
    let slo = ratio_over(instances, 6000, |d| 2.0 * d as f64, |r| {
        let d = r.gen_range(1..=3);
        let p = slo_instance(r, d, 6, 3);
        let opt = integral_opt(&p.to_ssco());
        (ProblemInstance::Slo(p), Box::new(LazyBudgetSlo::new()), opt)
    })?;
    lines.push(format!("lb-slo {slo:.3}"));
    let sblo = ratio_over(instances, 7000, |d| 2.0 * d as f64 + 1.0, |r| {
        let d = r.gen_range(1..=2);
        let p = sblo_instance(r, d, 6, 4);
        let opt = integral_opt(&p.to_ssco());
        (ProblemInstance::Sblo(p), Box::new(LazyBudgetSblo::new(BudgetMode::TimeIndependent)), opt)
    })?;
    lines.push(format!("lb-sblo {sblo:.3}"));
    let eps = 0.5;
    let refined = ratio_over(instances, 8000, |d| 2.0 * d as f64 + 1.0 + eps, |r| {
        let d = r.gen_range(1..=2);
        let p = sblo_instance(r, d, 6, 4);
        let opt = integral_opt(&p.to_ssco());
        (ProblemInstance::Sblo(p), Box::new(LazyBudgetSbloRefined::new(eps).unwrap()), opt)
    })?;
    lines.push(format!("lb-sblo-refined {refined:.3}"));
    Ok(format!("{instances} instances each; worst ratios {}", lines.join(", ")))
}

// ---------------------------------------------------------------------------------------
// Reductions

pub fn reductions(schedules: u64) -> Check {
    let mut r = rng(9000);
    let mut max_gap = 0.0f64;
    for i in 0..schedules {
        let d = r.gen_range(1..=3);
        let slo = slo_instance(&mut r, d, 6, 4);
        let sblo = reduce_slo_to_sblo(&slo);
        let s = Schedule::from_rows(
            (0..slo.horizon)
                .map(|t| {
                    // Mostly feasible schedules: enough servers for the load.
                    let mut x: Vec<f64> = slo.bounds.iter().map(|m| r.gen_range(0..=*m as usize) as f64).collect();
                    if r.gen_bool(0.8) {
                        let mut missing = slo.loads[t] - x.iter().sum::<f64>();
                        for (k, m) in slo.bounds.iter().enumerate() {
                            let add = missing.clamp(0.0, m - x[k]);
                            x[k] += add;
                            missing -= add;
                        }
                    }
                    x
                })
                .collect(),
        );
        let (a, b) = (cost_or_infinity(&slo, &s), cost_or_infinity(&sblo, &s));
        if a.is_finite() != b.is_finite() || (a.is_finite() && (a - b).abs() > 1e-9 * a.abs().max(1.0)) {
            return Err(format!("SLO schedule {i}: {a} vs {b}"));
        }
        if a.is_finite() {
            max_gap = max_gap.max((a - b).abs());
        }
    }
    for i in 0..schedules {
        let p = md_instance(&mut r, 5, 4);
        let sco = reduce_ssco_to_sco(&p).map_err(|e| e.to_string())?;
        let s = Schedule::from_rows(
            (0..p.horizon).map(|_| p.bounds.iter().map(|m| r.gen_range(0.0..=*m)).collect()).collect(),
        );
        let (a, b) = (cost_of(&p, &s), cost_of(&sco, &s));
        if (a - b).abs() > 1e-9 * a.abs().max(1.0) {
            return Err(format!("SSCO schedule {i}: {a} vs {b}"));
        }
        max_gap = max_gap.max((a - b).abs());
    }
    Ok(format!("{schedules} schedules per reduction; largest difference {max_gap:.2e}"))
}

// ---------------------------------------------------------------------------------------
// Model identities and convexity

pub fn model_identities(segments: u64) -> Check {
    use soco::model::{EnergyConsumptionModel, EnergyPricing, Series, SwitchingSpec};
    let mut r = rng(10_000);
    // Multi-type cost without revenue loss equals the dispatch of the balanced-load instance.
    let mut pair = presets::two_server_classes(6, 6);
    pair.slot_length_seconds = 1.0;
    pair.pricing = EnergyPricing::Flat { cost: Series::Constant(1.0) };
    for (k, s) in pair.server_types.iter_mut().enumerate() {
        s.energy = EnergyConsumptionModel::Nonlinear { exponent: 2.0, scale: 1.0 + k as f64, idle: 0.5 };
        s.max_jobs = 2.0;
        s.switching = SwitchingSpec::Direct { beta: 1.0 };
    }
    let mut worst_gap = 0.0f64;
    for _ in 0..200 {
        let load = r.gen_range(0.0..15.0);
        let x = [r.gen_range(0..=6) as f64, r.gen_range(0..=6) as f64];
        let sblo = pair.generate_sblo(&[vec![load]]).map_err(|e| e.to_string())?;
        let a = pair.hitting_cost_at(1, &x, &[load]).map_or(f64::INFINITY, |o| o.cost);
        let b = sblo.hit(1, &x).map_err(|e| e.to_string())?;
        if a.is_finite() != b.is_finite() || (a.is_finite() && (a - b).abs() > 1e-6 * a.abs().max(1.0)) {
            return Err(format!("model {a} vs balanced-load {b} at x = {x:?}, load {load}"));
        }
        if a.is_finite() {
            worst_gap = worst_gap.max((a - b).abs() / a.abs().max(1.0));
        }
    }
    // Single type: the balanced-load cost equals the closed form x g(load / x).
    let single = presets::linear_energy(40);
    for _ in 0..200 {
        let x = r.gen_range(1..=40) as f64;
        let load = r.gen_range(0.0..(2.0 * x));
        let sblo = single.generate_sblo(&[vec![load]]).map_err(|e| e.to_string())?;
        let u = load / x;
        let energy = x * 0.0677 * 3600.0 * (0.5 * u * 1800.0 / 3600.0 + 0.5);
        let revenue = if load > 0.0 {
            let delay = 1.0 / (1.0 / 1800.0 - u / 3600.0);
            load * 0.1 * (delay + 1800.0 - 4500.0).max(0.0)
        } else {
            0.0
        };
        let closed = if u < 2.0 { energy + revenue } else { f64::INFINITY };
        let b = sblo.hit(1, &[x]).map_err(|e| e.to_string())?;
        if closed.is_finite() != b.is_finite() || (b.is_finite() && (closed - b).abs() > 1e-6 * b.abs().max(1.0)) {
            return Err(format!("closed form {closed} vs balanced-load {b} at x = {x}, load {load}"));
        }
        if b.is_finite() {
            worst_gap = worst_gap.max((closed - b).abs() / b.abs().max(1.0));
        }
    }
    let classes = presets::two_server_classes(20, 20);
    let mut checked = 0;
    let mut attempts = 0;
    while checked < segments {
        attempts += 1;
        let load = [r.gen_range(1.0..30.0)];
        let a = [r.gen_range(0.0..20.0), r.gen_range(0.0..20.0)];
        let b = [r.gen_range(0.0..20.0), r.gen_range(0.0..20.0)];
        let mid = [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0];
        let f = |x: &[f64]| classes.hitting_cost_at(1, x, &load).map(|o| o.cost).unwrap_or(f64::INFINITY);
        let (fa, fb) = (f(&a), f(&b));
        if !(fa.is_finite() && fb.is_finite()) {
            continue;
        }
        let fm = f(&mid);
        if fm > (fa + fb) / 2.0 + 1e-6 * fm.abs().max(1.0) {
            return Err(format!("midpoint violation between {a:?} and {b:?} at load {load:?}"));
        }
        checked += 1;
    }
    Ok(format!("identities within {worst_gap:.1e} relative; {checked} feasible segments convex ({attempts} drawn)"))
}

// ---------------------------------------------------------------------------------------
// Fractional and integral optima

pub fn fractional_integral_gap() -> Check {
    let model = presets::linear_energy(200);
    let loads: Vec<Vec<f64>> = (0..24)
        .map(|t| {
            let phase = 2.0 * std::f64::consts::PI * t as f64 / 24.0;
            vec![(150.0 + 120.0 * phase.sin()).round()]
        })
        .collect();
    let p = model.generate_ssco(&loads).map_err(|e| e.to_string())?;
    let frac = fractional_offline(&p, &GraphSearchOptions::default(), tol()).map_err(|e| e.to_string())?.cost;
    let int = graph_search_1d(&p.clone().integral(), &GraphSearchOptions::default()).map_err(|e| e.to_string())?.cost;
    let gap = (frac / int - 1.0).abs();
    if gap > 1e-3 {
        return Err(format!("fractional {frac} vs integral {int}: gap {gap:.2e}"));
    }
    Ok(format!("m = 200, T = 24: fractional/integral = 1 - {gap:.2e}"))
}

// ---------------------------------------------------------------------------------------
// Numerics

pub fn numerics() -> Check {
    let mut r = rng(11_000);
    let mut worst_d = 0.0f64;
    for _ in 0..200 {
        let deg = r.gen_range(0..=4);
        let c: Vec<f64> = (0..=deg).map(|_| r.gen_range(-3.0..3.0)).collect();
        let x0: f64 = r.gen_range(-2.0..2.0);
        let f = |x: f64| c.iter().enumerate().map(|(i, a)| a * x.powi(i as i32)).sum::<f64>();
        let exact: f64 = c.iter().enumerate().skip(1).map(|(i, a)| i as f64 * a * x0.powi(i as i32 - 1)).sum();
        let num = derivative1(f, x0, 1e-3).map_err(|e| e.to_string())?;
        worst_d = worst_d.max((num - exact).abs());
    }
    if worst_d > 1e-4 {
        return Err(format!("derivative error {worst_d:.2e}"));
    }
    let cases: [(&dyn Fn(f64) -> f64, f64, f64, f64); 4] = [
        (&|x: f64| x.exp(), 0.0, 1.0, std::f64::consts::E - 1.0),
        (&|x: f64| x.sin(), 0.0, std::f64::consts::PI, 2.0),
        (&|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, 2.0f64),
        (&|x: f64| 1.0 / (1.0 + x * x), -1.0, 1.0, std::f64::consts::FRAC_PI_2),
    ];
    let mut worst_q = 0.0f64;
    for (f, a, b, exact) in cases {
        let v = integrate_finite(f, a, b, 1e-10).map_err(|e| e.to_string())?;
        worst_q = worst_q.max((v - exact).abs());
    }
    let right = integrate_semi_infinite(|x: f64| (-x).exp() * x, 0.0, Direction::Right).map_err(|e| e.to_string())?;
    let left = integrate_semi_infinite(|x: f64| (2.0 * x).exp(), 1.0, Direction::Left).map_err(|e| e.to_string())?;
    worst_q = worst_q.max((right - 1.0).abs()).max((left - 2f64.exp() / 2.0).abs());
    if worst_q > 1e-5 {
        return Err(format!("quadrature error {worst_q:.2e}"));
    }
    // Probability mass of the probabilistic algorithm over a 20-slot run.
    let targets: Vec<f64> = (0..20).map(|_| r.gen_range(0.0..8.0)).collect();
    let weights: Vec<f64> = (0..20).map(|_| r.gen_range(0.2..2.0)).collect();
    let cost = move |t: usize, x: f64| weights[t - 1] * (x - targets[t - 1]).powi(2);
    let mut alg = Probabilistic::new(1e-3);
    let mut worst_m = 0.0f64;
    for t in 1..=20 {
        alg.step_with(&cost, 8.0, 1.5, t).map_err(|e| e.to_string())?;
        let mass = alg.distribution().expect("stepped").mass(&cost);
        worst_m = worst_m.max((mass - 1.0).abs());
    }
    if worst_m > 1e-4 {
        return Err(format!("probability mass off by {worst_m:.2e}"));
    }
    Ok(format!("derivative {worst_d:.1e}, quadrature {worst_q:.1e}, mass {worst_m:.1e}"))
}

// ---------------------------------------------------------------------------------------
// Prediction control

pub fn prediction_control() -> Check {
    let eps = 1e-4;
    let mut worst_gap = 0.0f64;
    for seed in 0..20 {
        let mut r = rng(12_000 + seed);
        let p = uni_instance(&mut r, 6, 6, false);
        let opt = fractional_opt(&p);
        let inst = ProblemInstance::Ssco(p.clone());
        let rhc = run_online(&mut Rhc::new(p.horizon.saturating_sub(1)), &inst).map_err(|e| e.to_string())?;
        let cost = cost_of(&inst, &rhc);
        let gap = (cost - opt).abs() / opt.abs().max(1.0);
        if gap > eps {
            return Err(format!("seed {seed}: full-window RHC {cost} vs optimum {opt}"));
        }
        worst_gap = worst_gap.max(gap);
        let a = run_online(&mut Afhc::new(0), &inst).map_err(|e| e.to_string())?;
        let b = run_online(&mut Rhc::new(0), &inst).map_err(|e| e.to_string())?;
        if a != b {
            return Err(format!("seed {seed}: AFHC(0) differs from RHC(0)"));
        }
    }
    let nc = sampled_pipeline(OnlineSpec::Rhc { window: 2 }, 2, DEFAULT_PROFILE_SAMPLES)?;
    Ok(format!("full-window RHC within {worst_gap:.1e}; AFHC(0) = RHC(0); sampled pipeline NC {nc:.4}"))
}

/// Streams the diurnal fixture with sampled predictions and returns the normalized cost.
pub fn sampled_pipeline(spec: OnlineSpec, window: usize, samples: usize) -> Result<f64, String> {
    let text = std::fs::read_to_string(fixture("model.json")).map_err(|e| e.to_string())?;
    let model = DataCenterModel::from_json(&text).map_err(|e| e.to_string())?;
    let trace = ingest_trace(&fixture("diurnal.csv"), model.slot_length_seconds, None).map_err(|e| e.to_string())?;
    let opts = PredictionNoise { window, samples, noise: 0.2, seed: 17 };
    let inputs: Vec<OnlineInput> = trace_inputs(&trace, opts).map_err(|e| e.to_string())?;
    let mut session = StreamSession::new(model.clone(), InstanceKind::Ssco, spec, samples, 17).map_err(|e| e.to_string())?;
    session.replay(inputs).map_err(|e| e.to_string())?;
    let full = model.generate_instance(InstanceKind::Ssco, &trace.loads).map_err(|e| e.to_string())?;
    let rows = compare(&full, &[("online".into(), session.schedule().clone())]).map_err(|e| e.to_string())?;
    let nc = rows[0].metrics.normalized_cost;
    if !nc.is_finite() {
        return Err(format!("normalized cost {nc}"));
    }
    Ok(nc)
}

// ---------------------------------------------------------------------------------------
// Determinism and rounding marginals

fn schedule_bytes(spec: &OnlineSpec, inst: &ProblemInstance) -> Result<Vec<u8>, String> {
    let mut alg = spec.build().map_err(|e| e.to_string())?;
    let s = run_online(alg.as_mut(), inst).map_err(|e| e.to_string())?;
    let mut buf = Vec::new();
    write_schedule_csv(&s, &mut buf).map_err(|e| e.to_string())?;
    Ok(buf)
}

pub fn determinism(draws: usize) -> Check {
    use soco::online::uni::FractionalKind;
    let mut r = rng(13_000);
    let uni = ProblemInstance::Ssco(uni_instance(&mut r, 8, 8, false).integral());
    let slo = ProblemInstance::Slo(slo_instance(&mut r, 2, 8, 4));
    let runs = [
        (OnlineSpec::RandomizedRelaxation { kind: FractionalKind::Probabilistic, seed: 5 }, &uni),
        (OnlineSpec::RandomizedRelaxation { kind: FractionalKind::Rbg, seed: 5 }, &uni),
        (OnlineSpec::LazyBudgetSlo { randomized: true, seed: 5 }, &slo),
        (OnlineSpec::Rbg { theta: 1.0, seed: 5 }, &uni),
    ];
    for (spec, inst) in runs {
        if schedule_bytes(&spec, inst)? != schedule_bytes(&spec, inst)? {
            return Err(format!("{spec:?} is not reproducible"));
        }
    }
    // Marginals of the randomized rounding: E[X_t] equals the fractional X_t.
    let fractional: Vec<f64> = vec![0.3, 1.7, 2.2, 2.9, 1.1, 0.6, 3.5, 3.45, 0.0, 0.8];
    let mut sums = vec![0.0; fractional.len()];
    let mut u = rng(14_000);
    for _ in 0..draws {
        let mut state = RoundingState::default();
        for (t, &frac) in fractional.iter().enumerate() {
            let x = round_step(state, frac, u.gen::<f64>());
            sums[t] += x;
            state = RoundingState { prev_frac: frac, prev_int: x };
        }
    }
    let mut worst_rel = 0.0f64;
    for (t, &frac) in fractional.iter().enumerate() {
        let mean = sums[t] / draws as f64;
        let err = (mean - frac).abs() / frac.max(1.0);
        if err > 0.01 {
            return Err(format!("slot {}: mean {mean} vs fractional {frac}", t + 1));
        }
        worst_rel = worst_rel.max(err);
    }
    Ok(format!("seeded schedules byte-identical; rounding marginals within {worst_rel:.1e} over {draws} draws"))
}
