use super::super::OnlineAlgorithm;
use crate::error::{Result, SocoError};
use crate::numerics::{derivative1, find_root, minimize, ConvexProgram, Tolerance};
use crate::problem::{Config, Norm, ProblemInstance, ScoProblem};
use serde::{Deserialize, Serialize};

/// Distance-generating function of mirror-descent style updates.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceGenerating {
    /// `h(x) = ||x||_2^2 / 2`
    #[default]
    SquaredL2,
    /// `h(x) = sum x log x`, undefined at the boundary of the nonnegative orthant.
    NegativeEntropy,
}

impl DistanceGenerating {
    fn check(&self, lower: &[f64]) -> Result<()> {
        if *self == DistanceGenerating::NegativeEntropy && lower.iter().any(|l| *l <= 0.0) {
            return Err(SocoError::InvalidArgument(
                "negative entropy is not differentiable on a decision space containing zero".into(),
            ));
        }
        Ok(())
    }

    fn eval(&self, x: &[f64]) -> f64 {
        match self {
            DistanceGenerating::SquaredL2 => 0.5 * x.iter().map(|v| v * v).sum::<f64>(),
            DistanceGenerating::NegativeEntropy => x.iter().map(|v| v * v.ln()).sum(),
        }
    }

    fn grad(&self, x: &[f64]) -> Vec<f64> {
        match self {
            DistanceGenerating::SquaredL2 => x.to_vec(),
            DistanceGenerating::NegativeEntropy => x.iter().map(|v| v.ln() + 1.0).collect(),
        }
    }

    /// Bregman divergence `h(x) - h(y) - <grad h(y), x - y>`.
    pub fn divergence(&self, x: &[f64], y: &[f64]) -> f64 {
        let g = self.grad(y);
        self.eval(x) - self.eval(y) - g.iter().zip(x.iter().zip(y)).map(|(gi, (a, b))| gi * (a - b)).sum::<f64>()
    }
}

/// Options of the balanced descent methods.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObdOptions {
    pub h: DistanceGenerating,
    /// Movement allowed per unit of hitting cost (primal balance).
    pub beta_balance: f64,
    /// Ratio of dual movement to gradient norm (dual balance).
    pub eta: f64,
    pub tol: Tolerance,
}

impl Default for ObdOptions {
    fn default() -> Self {
        ObdOptions { h: DistanceGenerating::SquaredL2, beta_balance: 0.5, eta: 1.0, tol: Tolerance::new(1e-6, false).unwrap() }
    }
}

/// Numerical gradient by central differences per coordinate.
pub fn gradient(f: &dyn Fn(&[f64]) -> f64, x: &[f64], epsilon: f64) -> Result<Vec<f64>> {
    (0..x.len())
        .map(|k| {
            derivative1(
                |v| {
                    let mut y = x.to_vec();
                    y[k] = v;
                    f(&y)
                },
                x[k],
                epsilon,
            )
        })
        .collect()
}

/// Euclidean projection onto the box.
fn project(x: &mut [f64], lower: &[f64], upper: &[f64]) {
    for (k, v) in x.iter_mut().enumerate() {
        *v = v.clamp(lower[k], upper[k]);
    }
}

/// Gradient step on `f` from `prev` with rate `eta`, projected onto the box.
pub fn ogd_step(f: &dyn Fn(&[f64]) -> f64, prev: &[f64], eta: f64, lower: &[f64], upper: &[f64], epsilon: f64) -> Result<Vec<f64>> {
    let g = gradient(f, prev, epsilon)?;
    if g.iter().any(|v| !v.is_finite()) {
        return Err(SocoError::NonFinite(format!("gradient at {prev:?}")));
    }
    let mut x: Vec<f64> = prev.iter().zip(&g).map(|(p, gk)| p - eta * gk).collect();
    project(&mut x, lower, upper);
    Ok(x)
}

/// Minimizer and minimum of `f` over the box.
pub fn box_minimum(f: &dyn Fn(&[f64]) -> f64, lower: &[f64], upper: &[f64], tol: Tolerance) -> Result<(Vec<f64>, f64)> {
    let m = minimize(&ConvexProgram::new(f, lower.to_vec(), upper.to_vec()), tol)?;
    Ok((m.point, m.value))
}

/// Bregman projection of `prev` onto the sub-level set `{x : f(x) <= level}`.
///
/// `minimum` is the minimizer of `f` with its value, which is feasible for every level.
pub fn obd_meta(
    f: &dyn Fn(&[f64]) -> f64,
    prev: &[f64],
    level: f64,
    minimum: (&[f64], f64),
    h: DistanceGenerating,
    lower: &[f64],
    upper: &[f64],
    tol: Tolerance,
) -> Result<Vec<f64>> {
    h.check(lower)?;
    if f(prev) <= level {
        return Ok(prev.to_vec());
    }
    let (argmin, min) = minimum;
    let slack = tol.absolute_for(min);
    if level < min - slack {
        return Err(SocoError::InfeasibleLevel { level, min });
    }
    if level <= min + 1e-12 * min.abs().max(1.0) {
        return Ok(argmin.to_vec());
    }
    let program = ConvexProgram::new(|x: &[f64]| h.divergence(x, prev), lower.to_vec(), upper.to_vec())
        .with_constraint(|x: &[f64]| f(x) - level)
        .with_start(argmin.to_vec());
    Ok(minimize(&program, tol)?.point)
}

fn level_root(g: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: Tolerance) -> Result<f64> {
    let xtol = 1e-9 * hi.abs().max(1.0) * tol.epsilon.max(1e-6) / 1e-6;
    find_root(g, lo, hi, xtol.min(1e-3 * (hi - lo).abs().max(1e-12))).map_err(|e| SocoError::RootBracketFailure(e.to_string()))
}

/// Primal online balanced descent: the movement is at most `beta_balance` times the hitting cost.
pub fn p_obd_step(
    f: &dyn Fn(&[f64]) -> f64,
    prev: &[f64],
    norm: &Norm,
    opts: &ObdOptions,
    lower: &[f64],
    upper: &[f64],
) -> Result<Vec<f64>> {
    opts.h.check(lower)?;
    let (argmin, min) = box_minimum(f, lower, upper, opts.tol)?;
    let beta = opts.beta_balance;
    if norm.distance(&argmin, prev) <= beta * min {
        return Ok(argmin);
    }
    let top = f(prev);
    if top <= min {
        return Ok(prev.to_vec());
    }
    let at = |l: f64| obd_meta(f, prev, l, (&argmin, min), opts.h, lower, upper, opts.tol);
    let balance = |l: f64| at(l).map(|x| norm.distance(&x, prev) - beta * l).unwrap_or(f64::NAN);
    let l = level_root(balance, min, top, opts.tol)?;
    at(l)
}

/// Dual online balanced descent: balances the movement in the mirror image against the
/// gradient norm.
pub fn d_obd_step(
    f: &dyn Fn(&[f64]) -> f64,
    prev: &[f64],
    norm: &Norm,
    opts: &ObdOptions,
    lower: &[f64],
    upper: &[f64],
) -> Result<Vec<f64>> {
    opts.h.check(lower)?;
    let (argmin, min) = box_minimum(f, lower, upper, opts.tol)?;
    let top = f(prev);
    if top <= min || norm.distance(&argmin, prev) == 0.0 {
        return Ok(argmin);
    }
    let dual = norm.plain().dual();
    let grad_prev = opts.h.grad(prev);
    let at = |l: f64| obd_meta(f, prev, l, (&argmin, min), opts.h, lower, upper, opts.tol);
    let epsilon = 1e-6 * upper.iter().cloned().fold(1.0, f64::max);
    let balance = |l: f64| -> f64 {
        let Ok(x) = at(l) else { return f64::NAN };
        let moved: Vec<f64> = opts.h.grad(&x).iter().zip(&grad_prev).map(|(a, b)| a - b).collect();
        let Ok(g) = gradient(f, &x, epsilon) else { return f64::NAN };
        dual.eval(&moved) - opts.eta * dual.eval(&g)
    };
    if balance(min) <= 0.0 {
        return Ok(argmin);
    }
    let l = level_root(balance, min, top, opts.tol)?;
    at(l)
}

/// SCO view of an instance; SSCO-type instances use half the switching costs as weights.
fn sco_view(problem: &ProblemInstance) -> Result<ScoProblem> {
    match problem {
        ProblemInstance::Sco(p) => Ok(p.clone()),
        other => {
            let s = other.to_ssco()?;
            let weights = s.switching.iter().map(|b| b / 2.0).collect();
            let mut p = ScoProblem::new(s.dim, s.horizon, Some(s.bounds.clone()), Norm::scaled_manhattan(weights)?, s.costs.clone())?;
            p.integral = s.integral;
            Ok(p)
        }
    }
}

fn box_of(p: &ScoProblem) -> Result<(Vec<f64>, Vec<f64>)> {
    let upper = p.require_bounds()?.to_vec();
    Ok((vec![0.0; upper.len()], upper))
}

/// Online gradient descent with rates `eta0 / sqrt(t)`.
///
/// Slot `t` plays the gradient step on `f_t` from the previous configuration.
#[derive(Debug, Clone)]
pub struct Ogd {
    pub eta0: f64,
    pub epsilon: f64,
    prev: Option<Vec<f64>>,
}

impl Ogd {
    pub fn new(eta0: f64) -> Self {
        Ogd { eta0, epsilon: 1e-4, prev: None }
    }
}

impl OnlineAlgorithm for Ogd {
    fn name(&self) -> &'static str {
        "ogd"
    }

    fn step(&mut self, problem: &ProblemInstance, t: usize) -> Result<Config> {
        let p = sco_view(problem)?;
        let (lower, upper) = box_of(&p)?;
        let prev = self.prev.clone().unwrap_or_else(|| lower.clone());
        p.costs.resolve(t)?;
        let f = |x: &[f64]| p.hit(t, x).unwrap_or(f64::INFINITY);
        let eta = self.eta0 / (t as f64).sqrt();
        let x = ogd_step(&f, &prev, eta, &lower, &upper, self.epsilon)?;
        self.prev = Some(x.clone());
        Ok(Config(x))
    }
}

/// Which balance condition an OBD variant enforces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Balance {
    Primal,
    Dual,
}

/// Online balanced descent in its primal or dual form.
#[derive(Debug, Clone)]
pub struct Obd {
    pub balance: Balance,
    pub opts: ObdOptions,
    prev: Option<Vec<f64>>,
}

impl Obd {
    pub fn primal(beta_balance: f64) -> Self {
        Obd { balance: Balance::Primal, opts: ObdOptions { beta_balance, ..Default::default() }, prev: None }
    }

    pub fn dual(eta: f64) -> Self {
        Obd { balance: Balance::Dual, opts: ObdOptions { eta, ..Default::default() }, prev: None }
    }
}

impl OnlineAlgorithm for Obd {
    fn name(&self) -> &'static str {
        match self.balance {
            Balance::Primal => "p_obd",
            Balance::Dual => "d_obd",
        }
    }

    fn step(&mut self, problem: &ProblemInstance, t: usize) -> Result<Config> {
        let p = sco_view(problem)?;
        let (lower, upper) = box_of(&p)?;
        let prev = self.prev.clone().unwrap_or_else(|| lower.clone());
        p.costs.resolve(t)?;
        let f = |x: &[f64]| p.hit(t, x).unwrap_or(f64::INFINITY);
        let x = match self.balance {
            Balance::Primal => p_obd_step(&f, &prev, &p.norm, &self.opts, &lower, &upper)?,
            Balance::Dual => d_obd_step(&f, &prev, &p.norm, &self.opts, &lower, &upper)?,
        };
        self.prev = Some(x.clone());
        Ok(Config(x))
    }
}
