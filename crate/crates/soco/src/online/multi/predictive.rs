use super::super::{window_end, OnlineAlgorithm};
use crate::error::Result;
use crate::numerics::Tolerance;
use crate::offline::window_optimum;
use crate::problem::{Config, ProblemInstance};

/// A committed plan covering slots `start..start + plan.len()`.
#[derive(Debug, Clone, Default)]
struct Trajectory {
    start: usize,
    plan: Vec<Config>,
    /// Configuration before `start`.
    before: Option<Config>,
}

impl Trajectory {
    fn at(&self, t: usize) -> Option<&Config> {
        if t < self.start {
            return if t + 1 == self.start { self.before.as_ref() } else { None };
        }
        self.plan.get(t - self.start)
    }
}

/// Averaging fixed horizon control over `w + 1` staggered trajectories.
///
/// Trajectory `k` replans at every slot congruent to `k` modulo `w + 1`, from its own last
/// committed configuration, and commits to the plan over the next `w + 1` slots. With `w = 0`
/// this is receding horizon control.
#[derive(Debug, Clone)]
pub struct Afhc {
    pub window: usize,
    pub tol: Tolerance,
    trajectories: Vec<Trajectory>,
    /// Whether a single trajectory is kept (receding horizon control).
    receding: bool,
}

impl Afhc {
    pub fn new(window: usize) -> Self {
        Afhc { window, tol: Tolerance::new(1e-9, false).unwrap(), trajectories: Vec::new(), receding: false }
    }


    /// Fractional configuration played at slot `t`, before rounding.
    pub fn fractional_step(&mut self, problem: &ProblemInstance, t: usize) -> Result<Config> {
        let problem = &problem.to_ssco()?;
        let d = problem.dim;
        let lanes = if self.receding { 1 } else { self.window + 1 };
        if self.trajectories.is_empty() {
            self.trajectories = vec![Trajectory { start: 1, plan: Vec::new(), before: Some(Config::zeros(d)) }; lanes];
            // Trajectories that started before the first slot plan from zero over their remainder.
            for k in 1..lanes {
                let end = window_end(problem, 1, k - 1);
                let plan = window_optimum(problem, 1, end, &Config::zeros(d), self.tol)?;
                self.trajectories[k] = Trajectory { start: 1, plan, before: Some(Config::zeros(d)) };
            }
        }
        let lane = (t - 1) % lanes;
        let prev = if t == 1 {
            Config::zeros(d)
        } else {
            self.trajectories[lane].at(t - 1).cloned().unwrap_or_else(|| Config::zeros(d))
        };
        let end = window_end(problem, t, self.window);
        let plan = window_optimum(problem, t, end, &prev, self.tol)?;
        self.trajectories[lane] = Trajectory { start: t, plan, before: Some(prev) };
        let mut sum = vec![0.0; d];
        let mut count = 0.0;
        for tr in &self.trajectories {
            let x = tr.at(t).cloned().unwrap_or_else(|| Config::zeros(d));
            for (s, v) in sum.iter_mut().zip(x.iter()) {
                *s += v;
            }
            count += 1.0;
        }
        Ok(Config(sum.into_iter().map(|s| s / count).collect()))
    }
}

fn round_up(x: Config, integral: bool, tol: Tolerance) -> Config {
    if integral {
        Config(x.iter().map(|v| tol.ceil(*v)).collect())
    } else {
        x
    }
}

impl OnlineAlgorithm for Afhc {
    fn name(&self) -> &'static str {
        if self.receding {
            "rhc"
        } else {
            "afhc"
        }
    }

    fn step(&mut self, problem: &ProblemInstance, t: usize) -> Result<Config> {
        let x = self.fractional_step(problem, t)?;
        Ok(round_up(x, problem.is_integral(), Tolerance::new(1e-6, false)?))
    }
}

/// Receding horizon control: replans over the prediction window every slot and plays the
/// first configuration.
#[derive(Debug, Clone)]
pub struct Rhc(Afhc);

impl Default for Rhc {
    fn default() -> Self {
        Rhc::new(0)
    }
}

impl Rhc {
    pub fn new(window: usize) -> Self {
        Rhc(Afhc { receding: true, ..Afhc::new(window) })
    }

    pub fn fractional_step(&mut self, problem: &ProblemInstance, t: usize) -> Result<Config> {
        self.0.fractional_step(problem, t)
    }
}

impl OnlineAlgorithm for Rhc {
    fn name(&self) -> &'static str {
        "rhc"
    }

    fn step(&mut self, problem: &ProblemInstance, t: usize) -> Result<Config> {
        self.0.step(problem, t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::offline::fractional_offline;
    use crate::offline::GraphSearchOptions;
    use crate::online::run_online;
    use crate::problem::SscoProblem;

    fn instance() -> SscoProblem {
        let targets = [2.0, 0.0, 3.0, 1.0, 4.0, 0.5];
        SscoProblem::uni(6, 4.0, 1.5, move |t, x| (x - targets[(t - 1) % targets.len()]).powi(2)).unwrap()
    }

    #[test]
    fn zero_window_afhc_is_rhc() {
        let p = ProblemInstance::Ssco(instance());
        let a = run_online(&mut Afhc::new(0), &p).unwrap();
        let r = run_online(&mut Rhc::new(0), &p).unwrap();
        assert_eq!(a, r);
    }

    #[test]
    fn full_window_rhc_follows_offline_prefix() {
        let s = instance();
        let p = ProblemInstance::Ssco(s.clone());
        let r = run_online(&mut Rhc::new(6), &p).unwrap();
        let tol = Tolerance::new(1e-9, false).unwrap();
        let opt = fractional_offline(&s, &GraphSearchOptions::default(), tol).unwrap();
        for t in 0..6 {
            assert!((r.0[t][0] - opt.schedule.0[t][0]).abs() < 1e-4, "{t}: {:?} vs {:?}", r, opt.schedule);
        }
    }

    #[test]
    fn afhc_averages_trajectories() {
        let p = ProblemInstance::Ssco(instance());
        let mut alg = Afhc::new(1);
        let x1 = alg.fractional_step(&p, 1).unwrap();
        // One trajectory plans slots 1..=2, the other only slot 1, both from zero.
        let s = instance();
        let tol = Tolerance::new(1e-9, false).unwrap();
        let long = window_optimum(&s, 1, 2, &Config::zeros(1), tol).unwrap();
        let short = window_optimum(&s, 1, 1, &Config::zeros(1), tol).unwrap();
        assert!((x1[0] - 0.5 * (long[0][0] + short[0][0])).abs() < 1e-9);
    }

    #[test]
    fn integral_output_is_rounded_up() {
        let p = ProblemInstance::Ssco(instance().integral());
        let s = run_online(&mut Afhc::new(1), &p).unwrap();
        assert!(s.0.iter().all(|x| x[0].fract() == 0.0));
    }
}
