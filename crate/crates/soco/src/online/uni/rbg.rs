use super::super::OnlineAlgorithm;
use crate::error::{Result, SocoError};
use crate::problem::{Config, Problem, ProblemInstance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Work-function state of randomly biased greedy, tabulated on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RbgState {
    pub theta: f64,
    /// Bias drawn once from `(-1, 1)`.
    pub r: f64,
    /// Movement cost per unit distance.
    pub scale: f64,
    pub grid: Vec<f64>,
    /// Work function of the latest folded slot on `grid`.
    pub work: Vec<f64>,
    pub slots: usize,
}

impl RbgState {
    pub fn new(theta: f64, r: f64, scale: f64, bound: f64, points: usize) -> Result<Self> {
        if !(theta >= 1.0) {
            return Err(SocoError::InvalidArgument(format!("theta must be at least 1, got {theta}")));
        }
        if !(r > -1.0 && r < 1.0) {
            return Err(SocoError::InvalidArgument(format!("bias must lie in (-1, 1), got {r}")));
        }
        if points < 2 || !(bound > 0.0) {
            return Err(SocoError::InvalidArgument("work-function grid needs two points and a positive bound".into()));
        }
        let grid: Vec<f64> = (0..points).map(|i| bound * i as f64 / (points - 1) as f64).collect();
        let work = grid.iter().map(|x| theta * scale * x).collect();
        Ok(RbgState { theta, r, scale, grid, work, slots: 0 })
    }

    /// Draws the bias from a seeded generator.
    pub fn seeded(theta: f64, seed: u64, scale: f64, bound: f64, points: usize) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut r = -1.0;
        while r <= -1.0 {
            r = rng.gen_range(-1.0..1.0);
        }
        Self::new(theta, r, scale, bound, points)
    }

    /// Minimizer of the current work function plus the random bias; smallest on ties.
    pub fn choose(&self) -> f64 {
        let bias = self.r * self.theta * self.scale;
        let mut best = (f64::INFINITY, 0.0);
        for (x, w) in self.grid.iter().zip(&self.work) {
            let v = w + bias * x;
            if v < best.0 {
                best = (v, *x);
            }
        }
        best.1
    }

    /// Folds the next slot's hitting cost into the work function.
    pub fn fold(&mut self, f: impl Fn(f64) -> f64) {
        let unit = self.theta * self.scale;
        let mut next: Vec<f64> = self.grid.iter().zip(&self.work).map(|(x, w)| w + f(*x)).collect();
        for i in 1..next.len() {
            let step = unit * (self.grid[i] - self.grid[i - 1]);
            next[i] = next[i].min(next[i - 1] + step);
        }
        for i in (0..next.len() - 1).rev() {
            let step = unit * (self.grid[i + 1] - self.grid[i]);
            next[i] = next[i].min(next[i + 1] + step);
        }
        self.work = next;
        self.slots += 1;
    }

    /// Raw step for slot `t = slots + 1`: the choice is made before `f_t` is folded, so it
    /// is scored against `f_{t-1}` (lookahead one).
    pub fn step(&mut self, f: impl Fn(f64) -> f64) -> f64 {
        let x = self.choose();
        self.fold(f);
        x
    }
}

/// Movement cost per unit of a uni-dimensional instance.
fn unit_scale(problem: &ProblemInstance) -> Result<f64> {
    match problem {
        ProblemInstance::Sco(p) => {
            let one = p.norm.eval(&[1.0]);
            let two = p.norm.eval(&[2.0]);
            if (two - 2.0 * one).abs() > 1e-9 * one.max(1.0) {
                return Err(SocoError::InvalidArgument("randomly biased greedy needs a homogeneous norm".into()));
            }
            Ok(one)
        }
        // Movement charged on increases equals half the total variation up to the final
        // power-down, so the symmetric norm uses half the switching cost.
        _ => Ok(problem.to_ssco()?.switching[0] / 2.0),
    }
}

/// Randomly biased greedy.
///
/// As an online algorithm for slot `t` it folds `f_t` first and then chooses, which is
/// the raw algorithm shifted one slot into the past.
#[derive(Debug, Clone)]
pub struct RandomlyBiasedGreedy {
    pub theta: f64,
    pub seed: u64,
    pub points: usize,
    state: Option<RbgState>,
}

impl RandomlyBiasedGreedy {
    pub fn new(theta: f64, seed: u64) -> Self {
        RandomlyBiasedGreedy { theta, seed, points: 2001, state: None }
    }

    pub fn with_points(mut self, points: usize) -> Self {
        self.points = points;
        self
    }

    pub fn state(&self) -> Option<&RbgState> {
        self.state.as_ref()
    }

    /// Shifted step against an arbitrary cost source; `t` must be the next unfolded slot.
    pub fn step_with(&mut self, cost: &dyn Fn(usize, f64) -> f64, bound: f64, scale: f64, t: usize) -> Result<f64> {
        if self.state.is_none() {
            self.state = Some(RbgState::seeded(self.theta, self.seed, scale, bound, self.points)?);
        }
        let state = self.state.as_mut().expect("initialized");
        if t != state.slots + 1 {
            return Err(SocoError::InvalidArgument(format!("expected slot {}, got {t}", state.slots + 1)));
        }
        state.fold(|x| cost(t, x));
        Ok(state.choose())
    }
}

impl OnlineAlgorithm for RandomlyBiasedGreedy {
    fn name(&self) -> &'static str {
        "rbg"
    }

    fn step(&mut self, problem: &ProblemInstance, t: usize) -> Result<Config> {
        if problem.dim() != 1 {
            return Err(SocoError::InvalidArgument("randomly biased greedy is uni-dimensional".into()));
        }
        let bound = problem
            .bounds()
            .ok_or_else(|| SocoError::InvalidArgument("randomly biased greedy needs a bounded decision space".into()))?[0];
        let scale = unit_scale(problem)?;
        let cost = |s: usize, x: f64| problem.hitting_cost(s, &[x]).unwrap_or(f64::INFINITY);
        problem.hitting_cost(t, &[0.0])?;
        Ok(Config(vec![self.step_with(&cost, bound, scale, t)?]))
    }
}
