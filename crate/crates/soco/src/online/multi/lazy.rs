use super::super::OnlineAlgorithm;
use crate::error::{Result, SocoError};
use crate::offline::{GraphSearch, GraphSearchOptions};
use crate::problem::{reduce_slo_to_sblo, Config, ProblemInstance, SbloProblem, SloProblem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Per-lane server types (`0` when empty) and power-down deadlines.
///
/// Lane `j` carries the `j`-th job; lanes are filled with the most efficient
/// (highest-index) types first.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaneState {
    pub y: Vec<usize>,
    pub h: Vec<usize>,
}

impl LaneState {
    pub fn new(lanes: usize) -> Self {
        LaneState { y: vec![0; lanes], h: vec![0; lanes] }
    }

    /// Number of active servers per type.
    pub fn config(&self, d: usize) -> Config {
        let mut x = vec![0.0; d];
        for &k in &self.y {
            if k > 0 {
                x[k - 1] += 1.0;
            }
        }
        Config(x)
    }

    pub fn is_sorted(&self) -> bool {
        self.y.windows(2).all(|w| w[0] >= w[1])
    }
}

/// Lane assignment of a configuration: lane `j` gets the largest type `k` with
/// `x_k + ... + x_d >= j`.
pub fn build_lanes(x: &[f64], lanes: usize) -> Vec<usize> {
    let mut y = vec![0; lanes];
    let mut j = 0;
    for k in (0..x.len()).rev() {
        let n = x[k].round().max(0.0) as usize;
        for _ in 0..n {
            if j < lanes {
                y[j] = k + 1;
                j += 1;
            }
        }
    }
    y
}

/// Checks that types are sorted by strictly decreasing operating cost and strictly
/// increasing switching cost.
pub fn validate_server_types(costs: &[f64], switching: &[f64]) -> Result<()> {
    for k in 1..costs.len() {
        let (a, b) = (k - 1, k);
        if costs[a] > costs[b] && switching[a] < switching[b] {
            continue;
        }
        if costs[a] <= costs[b] && switching[a] <= switching[b] {
            return Err(SocoError::InefficientServerType(b));
        }
        if costs[a] >= costs[b] && switching[a] >= switching[b] {
            return Err(SocoError::InefficientServerType(a));
        }
        return Err(SocoError::InvalidArgument(
            "server types must be sorted by decreasing operating cost".into(),
        ));
    }
    Ok(())
}

fn integral_bounds(bounds: &[f64]) -> Result<usize> {
    let mut total = 0usize;
    for m in bounds {
        if m.fract() != 0.0 {
            return Err(SocoError::InvalidArgument(format!("integral instances need integer bounds, got {m}")));
        }
        total += *m as usize;
    }
    Ok(total)
}

fn expect_next(search: &GraphSearch, t: usize) -> Result<()> {
    if search.slots() + 1 != t {
        return Err(SocoError::InvalidArgument(format!("expected slot {}, got {t}", search.slots() + 1)));
    }
    Ok(())
}

/// Lazy budgeting for SLO, optionally with randomized running times.
#[derive(Debug, Clone)]
pub struct LazyBudgetSlo {
    pub randomized: bool,
    pub seed: u64,
    pub lanes: LaneState,
    /// Running time per type, index 0 for empty lanes.
    running: Vec<usize>,
    search: Option<GraphSearch>,
}

impl LazyBudgetSlo {
    pub fn new() -> Self {
        LazyBudgetSlo { randomized: false, seed: 0, lanes: LaneState::default(), running: Vec::new(), search: None }
    }

    pub fn randomized(seed: u64) -> Self {
        LazyBudgetSlo { randomized: true, seed, ..Self::new() }
    }

    /// Fraction of the budget `beta / c` a server stays idle before powering down.
    pub fn budget_factor(&self) -> f64 {
        if !self.randomized {
            return 1.0;
        }
        let u: f64 = ChaCha8Rng::seed_from_u64(self.seed).gen();
        (u * (std::f64::consts::E - 1.0) + 1.0).ln()
    }

    fn init(&mut self, p: &SloProblem) -> Result<()> {
        validate_server_types(&p.costs, &p.switching)?;
        let lanes = integral_bounds(&p.bounds)?;
        let gamma = self.budget_factor();
        let cap = p.horizon.max(1);
        self.running = std::iter::once(0)
            .chain(p.costs.iter().zip(&p.switching).map(|(c, b)| {
                if *c <= 0.0 {
                    log::warn!("free idling: servers are kept for the whole horizon");
                    cap
                } else {
                    ((gamma * b / c).floor() as usize).min(cap)
                }
            }))
            .collect();
        self.lanes = LaneState::new(lanes);
        let ssco = p.to_ssco();
        self.search = Some(GraphSearch::exact(&ssco, &GraphSearchOptions::default(), &Config::zeros(p.dim()))?);
        Ok(())
    }

    /// One step on an SLO instance.
    pub fn step_slo(&mut self, p: &SloProblem, t: usize) -> Result<Config> {
        if self.search.is_none() {
            self.init(p)?;
        }
        let load = p.load(t)?;
        let capacity: f64 = p.bounds.iter().sum();
        if load > capacity {
            return Err(SocoError::InfeasibleLoad { slot: t, reason: format!("load {load} exceeds {capacity} servers") });
        }
        let search = self.search.as_mut().expect("initialized");
        expect_next(search, t)?;
        search.extend(|x| p.hit(t, x).unwrap_or(f64::INFINITY));
        let target = search.last_config().expect("one slot searched");
        let optimal = build_lanes(&target, self.lanes.y.len());
        for (j, &k) in optimal.iter().enumerate() {
            let deadline = t + self.running[k];
            if self.lanes.y[j] < k || t >= self.lanes.h[j] {
                self.lanes.y[j] = k;
                self.lanes.h[j] = deadline;
            } else {
                self.lanes.h[j] = self.lanes.h[j].max(deadline);
            }
        }
        if !self.lanes.is_sorted() {
            log::warn!("lanes at slot {t} are not sorted by server type");
        }
        Ok(self.lanes.config(p.dim()))
    }
}

impl Default for LazyBudgetSlo {
    fn default() -> Self {
        Self::new()
    }
}

impl OnlineAlgorithm for LazyBudgetSlo {
    fn name(&self) -> &'static str {
        if self.randomized {
            "lazy_budget_slo_randomized"
        } else {
            "lazy_budget_slo"
        }
    }

    fn step(&mut self, problem: &ProblemInstance, t: usize) -> Result<Config> {
        match problem {
            ProblemInstance::Slo(p) => self.step_slo(p, t),
            _ => Err(SocoError::InvalidArgument("lazy budgeting for SLO needs an SLO instance".into())),
        }
    }
}

/// How long a server of each type stays powered up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BudgetMode {
    /// Fixed running time `max(floor(beta / g(0)), 1)` from time-independent idle costs.
    TimeIndependent,
    /// Power down once the idle costs accumulated since power-up exceed `beta`.
    TimeDependent,
}

/// Power-up and power-down bookkeeping shared by the SBLO variants.
#[derive(Debug, Clone)]
struct SbloCore {
    mode: BudgetMode,
    switching: Vec<f64>,
    /// Fixed running times (time-independent mode).
    running: Vec<usize>,
    search: GraphSearch,
    x: Vec<f64>,
    /// Servers powered up per (sub-)slot and type, index 0 unused.
    powered: Vec<Vec<f64>>,
    /// Cumulative idle costs per (sub-)slot and type, index 0 is zero.
    idle_sum: Vec<Vec<f64>>,
}

impl SbloCore {
    fn new(p: &SbloProblem, mode: BudgetMode, horizon_cap: usize) -> Result<Self> {
        integral_bounds(&p.bounds)?;
        let d = p.dim();
        let running = match mode {
            BudgetMode::TimeIndependent => {
                if let Some(k) = p.load_costs.iter().position(|g| !g.time_independent) {
                    return Err(SocoError::InvalidArgument(format!(
                        "server type {k} has time-dependent costs; use the time-dependent mode"
                    )));
                }
                p.load_costs
                    .iter()
                    .zip(&p.switching)
                    .map(|(g, b)| {
                        let idle = g.idle(1);
                        if idle <= 0.0 {
                            log::warn!("free idling: servers are kept for the whole horizon");
                            horizon_cap
                        } else {
                            ((b / idle).floor() as usize).clamp(1, horizon_cap.max(1))
                        }
                    })
                    .collect()
            }
            BudgetMode::TimeDependent => Vec::new(),
        };
        let search = GraphSearch::exact(&p.to_ssco(), &GraphSearchOptions::default(), &Config::zeros(d))?;
        Ok(SbloCore {
            mode,
            switching: p.switching.clone(),
            running,
            search,
            x: vec![0.0; d],
            powered: vec![vec![0.0; d]],
            idle_sum: vec![vec![0.0; d]],
        })
    }

    /// Advances one (sub-)slot with hitting cost `f` and per-type idle costs `idle`.
    fn advance(&mut self, f: impl Fn(&[f64]) -> f64, idle: &[f64]) -> Config {
        let u = self.powered.len();
        let d = self.x.len();
        let sums: Vec<f64> = (0..d).map(|k| self.idle_sum[u - 1][k] + idle[k]).collect();
        self.idle_sum.push(sums);
        self.search.extend(f);
        let target = self.search.last_config().expect("one slot searched");
        let mut up = vec![0.0; d];
        for k in 0..d {
            let expired: f64 = match self.mode {
                BudgetMode::TimeIndependent => {
                    let r = self.running[k];
                    if u > r {
                        self.powered[u - r][k]
                    } else {
                        0.0
                    }
                }
                BudgetMode::TimeDependent => (1..u)
                    .filter(|&s| {
                        let before = self.idle_sum[u - 1][k] - self.idle_sum[s][k];
                        let now = self.idle_sum[u][k] - self.idle_sum[s][k];
                        before <= self.switching[k] && self.switching[k] < now
                    })
                    .map(|s| self.powered[s][k])
                    .sum(),
            };
            let after_down = (self.x[k] - expired).max(0.0);
            self.x[k] = after_down;
            if after_down < target[k] {
                up[k] = target[k] - after_down;
                self.x[k] = target[k];
            }
        }
        self.powered.push(up);
        Config(self.x.clone())
    }
}

fn sblo_view(problem: &ProblemInstance) -> Result<SbloProblem> {
    match problem {
        ProblemInstance::Sblo(p) => Ok(p.clone()),
        ProblemInstance::Slo(p) => Ok(reduce_slo_to_sblo(p)),
        _ => Err(SocoError::InvalidArgument("lazy budgeting for SBLO needs an SBLO or SLO instance".into())),
    }
}

fn check_capacity(p: &SbloProblem, t: usize) -> Result<f64> {
    let load = p.load(t)?;
    let capacity: f64 = p.bounds.iter().zip(&p.load_costs).map(|(m, g)| m * g.max_load).sum();
    if load > capacity + crate::problem::FEASIBILITY_SLACK {
        return Err(SocoError::InfeasibleLoad { slot: t, reason: format!("load {load} exceeds capacity {capacity}") });
    }
    Ok(load)
}

/// Lazy budgeting for SBLO.
#[derive(Debug, Clone)]
pub struct LazyBudgetSblo {
    pub mode: BudgetMode,
    core: Option<SbloCore>,
}

impl LazyBudgetSblo {
    pub fn new(mode: BudgetMode) -> Self {
        LazyBudgetSblo { mode, core: None }
    }

    pub fn step_sblo(&mut self, p: &SbloProblem, t: usize) -> Result<Config> {
        if self.core.is_none() {
            self.core = Some(SbloCore::new(p, self.mode, p.horizon)?);
        }
        check_capacity(p, t)?;
        let core = self.core.as_mut().expect("initialized");
        expect_next(&core.search, t)?;
        let idle: Vec<f64> = p.load_costs.iter().map(|g| g.idle(t)).collect();
        Ok(core.advance(|x| p.hit(t, x).unwrap_or(f64::INFINITY), &idle))
    }
}

impl OnlineAlgorithm for LazyBudgetSblo {
    fn name(&self) -> &'static str {
        match self.mode {
            BudgetMode::TimeIndependent => "lazy_budget_sblo",
            BudgetMode::TimeDependent => "lazy_budget_sblo_time_dependent",
        }
    }

    fn step(&mut self, problem: &ProblemInstance, t: usize) -> Result<Config> {
        let p = sblo_view(problem)?;
        self.step_sblo(&p, t)
    }
}

/// Lazy budgeting for SBLO on refined sub-slots, trading runtime for a competitive ratio
/// closer to `2d + 1`.
#[derive(Debug, Clone)]
pub struct LazyBudgetSbloRefined {
    pub epsilon: f64,
    /// Maximum number of sub-slots per slot.
    pub cap: usize,
    core: Option<SbloCore>,
    slots: usize,
}

impl LazyBudgetSbloRefined {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0) {
            return Err(SocoError::InvalidArgument(format!("epsilon must be positive, got {epsilon}")));
        }
        Ok(LazyBudgetSbloRefined { epsilon, cap: 1000, core: None, slots: 0 })
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    /// Number of sub-slots of slot `t`.
    pub fn sub_slots(&self, p: &SbloProblem, t: usize) -> Result<usize> {
        let d = p.dim() as f64;
        let ratio = p
            .load_costs
            .iter()
            .zip(&p.switching)
            .map(|(g, b)| g.idle(t) / b)
            .fold(0.0, f64::max);
        let n = (d / self.epsilon * ratio).ceil();
        if !n.is_finite() || n > self.cap as f64 {
            let needed = if n.is_finite() { n as usize } else { usize::MAX };
            return Err(SocoError::BudgetExceeded { needed, cap: self.cap });
        }
        Ok((n as usize).max(1))
    }

    pub fn step_sblo(&mut self, p: &SbloProblem, t: usize) -> Result<Config> {
        if self.core.is_none() {
            self.core = Some(SbloCore::new(p, BudgetMode::TimeDependent, p.horizon)?);
        }
        if self.slots + 1 != t {
            return Err(SocoError::InvalidArgument(format!("expected slot {}, got {t}", self.slots + 1)));
        }
        check_capacity(p, t)?;
        let n = self.sub_slots(p, t)?;
        let scale = 1.0 / n as f64;
        let idle: Vec<f64> = p.load_costs.iter().map(|g| g.idle(t) * scale).collect();
        let f = |x: &[f64]| p.hit(t, x).unwrap_or(f64::INFINITY) * scale;
        let core = self.core.as_mut().expect("initialized");
        let mut best: Option<(f64, Config)> = None;
        for _ in 0..n {
            let x = core.advance(f, &idle);
            let v = f(&x);
            if best.as_ref().map_or(true, |(b, _)| v < *b) {
                best = Some((v, x));
            }
        }
        self.slots += 1;
        Ok(best.expect("at least one sub-slot").1)
    }
}

impl OnlineAlgorithm for LazyBudgetSbloRefined {
    fn name(&self) -> &'static str {
        "lazy_budget_sblo_refined"
    }

    fn step(&mut self, problem: &ProblemInstance, t: usize) -> Result<Config> {
        let p = sblo_view(problem)?;
        self.step_sblo(&p, t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::online::run_online;
    use crate::problem::LoadCost;

    #[test]
    fn lanes_fill_efficient_types_first() {
        assert_eq!(build_lanes(&[1.0, 2.0], 4), vec![2, 2, 1, 0]);
        assert_eq!(build_lanes(&[0.0, 0.0], 2), vec![0, 0]);
    }

    #[test]
    fn rejects_inefficient_types() {
        assert!(matches!(validate_server_types(&[2.0, 1.0], &[1.0, 1.0]), Err(SocoError::InefficientServerType(0))));
        assert!(matches!(validate_server_types(&[1.0, 2.0], &[1.0, 2.0]), Err(SocoError::InefficientServerType(1))));
        assert!(validate_server_types(&[2.0, 1.0], &[1.0, 2.0]).is_ok());
    }

    #[test]
    fn uni_slo_keeps_server_for_budget() {
        // c = 1, beta = 3: the server runs floor(3 / 1) slots from its last use.
        let p = SloProblem::new(vec![1.0], vec![3.0], vec![1.0], vec![1.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        let s = run_online(&mut LazyBudgetSlo::new(), &ProblemInstance::Slo(p)).unwrap();
        assert_eq!(s.column(0), vec![1.0, 1.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn zero_load_stays_off() {
        let p = SloProblem::new(vec![2.0, 2.0], vec![1.0, 2.0], vec![2.0, 1.0], vec![0.0; 4]).unwrap();
        let s = run_online(&mut LazyBudgetSlo::new(), &ProblemInstance::Slo(p)).unwrap();
        assert!(s.iter().all(|x| x.total() == 0.0));
    }

    #[test]
    fn randomized_factor_in_unit_interval() {
        for seed in 0..20 {
            let g = LazyBudgetSlo::randomized(seed).budget_factor();
            assert!((0.0..=1.0).contains(&g));
        }
    }

    #[test]
    fn sblo_zero_optimum_stays_off() {
        let costs = vec![LoadCost::stationary(|l| 1.0 + l, 1.0)];
        let p = SbloProblem::new(vec![2.0], vec![1.0], costs, vec![0.0; 3]).unwrap();
        for mode in [BudgetMode::TimeIndependent, BudgetMode::TimeDependent] {
            let s = run_online(&mut LazyBudgetSblo::new(mode), &ProblemInstance::Sblo(p.clone())).unwrap();
            assert!(s.iter().all(|x| x.total() == 0.0));
        }
    }

    #[test]
    fn free_idling_never_powers_down() {
        let costs = vec![LoadCost::stationary(|l| l, 1.0)];
        let p = SbloProblem::new(vec![1.0], vec![1.0], costs, vec![1.0, 0.0, 0.0]).unwrap();
        let s = run_online(&mut LazyBudgetSblo::new(BudgetMode::TimeIndependent), &ProblemInstance::Sblo(p)).unwrap();
        assert_eq!(s.column(0), vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn refined_with_one_sub_slot_matches_time_dependent() {
        let costs = vec![LoadCost::stationary(|l| 0.5 + l, 1.0), LoadCost::stationary(|l| 0.2 + 2.0 * l, 1.0)];
        let p = SbloProblem::new(vec![2.0, 2.0], vec![4.0, 6.0], costs, vec![1.0, 2.0, 0.0, 1.0, 0.0]).unwrap();
        let inst = ProblemInstance::Sblo(p);
        let a = run_online(&mut LazyBudgetSblo::new(BudgetMode::TimeDependent), &inst).unwrap();
        let b = run_online(&mut LazyBudgetSbloRefined::new(100.0).unwrap(), &inst).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn refined_budget_exceeded() {
        let costs = vec![LoadCost::stationary(|l| 10.0 + l, 1.0)];
        let p = SbloProblem::new(vec![1.0], vec![1.0], costs, vec![1.0]).unwrap();
        let mut alg = LazyBudgetSbloRefined::new(1e-3).unwrap().with_cap(10);
        assert!(matches!(alg.step(&ProblemInstance::Sblo(p), 1), Err(SocoError::BudgetExceeded { .. })));
    }
}
