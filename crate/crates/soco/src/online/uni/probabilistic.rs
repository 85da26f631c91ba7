use super::super::{uni_view, OnlineAlgorithm};
use crate::error::{Result, SocoError};
use crate::numerics::{derivative1, find_root, integrate_finite, minimize_scalar};
use crate::problem::{Config, ProblemInstance};

/// Width of the uniform initial distribution approximating a point mass at zero.
pub const INITIAL_SPREAD: f64 = 1e-5;

const QUADRATURE_TOL: f64 = 1e-8;
const FALLBACK_CELLS: usize = 512;

/// Distribution over configurations maintained by the probabilistic algorithm.
///
/// It is stored through its cumulative distribution function, which obeys
/// `C_t(x) = clamp(C_{t-1}(x) + f_t'(x) / (2 beta), 0, 1)`. Integrating the density
/// update between the two balance points yields exactly this form, and clamping at
/// the ends of `[0, m]` keeps the total mass at one.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbDistribution {
    pub bound: f64,
    pub beta: f64,
    /// Step of the finite-difference derivatives.
    pub epsilon: f64,
    /// Minimizer of every folded slot, in slot order starting at slot 1.
    pub minimizers: Vec<f64>,
    /// Points where the density may be discontinuous, sorted.
    pub breakpoints: Vec<f64>,
    /// Support `[x_l, x_r]` after the latest update.
    pub support: (f64, f64),
}

impl ProbDistribution {
    /// Uniform distribution on `[0, INITIAL_SPREAD]`.
    pub fn initial(bound: f64, beta: f64, epsilon: f64, breakpoints: &[f64]) -> Self {
        let mut bp: Vec<f64> = vec![0.0, INITIAL_SPREAD.min(bound), bound];
        bp.extend(breakpoints.iter().copied().filter(|b| *b > 0.0 && *b < bound));
        let mut d = ProbDistribution {
            bound,
            beta,
            epsilon,
            minimizers: Vec::new(),
            breakpoints: Vec::new(),
            support: (0.0, INITIAL_SPREAD.min(bound)),
        };
        d.add_breakpoints(&bp);
        d
    }

    fn add_breakpoints(&mut self, points: &[f64]) {
        self.breakpoints.extend_from_slice(points);
        self.breakpoints.sort_by(f64::total_cmp);
        self.breakpoints.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);
    }

    pub fn slots(&self) -> usize {
        self.minimizers.len()
    }

    fn shift(&self, cost: &dyn Fn(usize, f64) -> f64, t: usize, minimizer: f64, x: f64) -> f64 {
        let f = |y: f64| cost(t, y);
        if !f(x).is_finite() {
            return if x < minimizer { f64::NEG_INFINITY } else { f64::INFINITY };
        }
        match derivative1(f, x, self.epsilon) {
            Ok(d) => d / (2.0 * self.beta),
            Err(_) => 0.0,
        }
    }

    fn cdf_upto(&self, cost: &dyn Fn(usize, f64) -> f64, slots: usize, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        if x >= self.bound {
            return 1.0;
        }
        let mut c = (x / INITIAL_SPREAD).clamp(0.0, 1.0);
        for (i, &xm) in self.minimizers.iter().take(slots).enumerate() {
            c = (c + self.shift(cost, i + 1, xm, x)).clamp(0.0, 1.0);
        }
        c
    }

    /// Cumulative distribution function at `x`.
    pub fn cdf(&self, cost: &dyn Fn(usize, f64) -> f64, x: f64) -> f64 {
        self.cdf_upto(cost, self.slots(), x)
    }

    /// Probability mass within `[0, m]`.
    pub fn mass(&self, cost: &dyn Fn(usize, f64) -> f64) -> f64 {
        self.cdf(cost, self.bound) - self.cdf(cost, -1.0)
    }

    /// Expected configuration `int_0^m (1 - C(x)) dx`, integrated piecewise between breakpoints.
    pub fn mean(&self, cost: &dyn Fn(usize, f64) -> f64) -> Result<f64> {
        let tail = |x: f64| 1.0 - self.cdf(cost, x);
        let mut total = 0.0;
        for w in self.breakpoints.windows(2) {
            let (a, b) = (w[0], w[1]);
            if b <= a {
                continue;
            }
            let (ta, tb) = (tail(a + 1e-12 * (b - a)), tail(b - 1e-12 * (b - a)));
            if ta == tb && (ta == 0.0 || ta == 1.0) {
                total += ta * (b - a);
                continue;
            }
            total += match integrate_finite(tail, a, b, QUADRATURE_TOL) {
                Ok(v) => v,
                Err(SocoError::QuadratureFailure(msg)) => {
                    log::debug!("falling back to midpoint rule on [{a}, {b}]: {msg}");
                    let h = (b - a) / FALLBACK_CELLS as f64;
                    (0..FALLBACK_CELLS).map(|i| tail(a + (i as f64 + 0.5) * h)).sum::<f64>() * h
                }
                Err(e) => return Err(e),
            };
        }
        Ok(total)
    }
}

/// Folds slot `t = dist.slots() + 1` into the distribution and returns its expected
/// configuration together with the updated distribution.
pub fn probabilistic_step(
    cost: &dyn Fn(usize, f64) -> f64,
    t: usize,
    dist: &ProbDistribution,
) -> Result<(f64, ProbDistribution)> {
    if t != dist.slots() + 1 {
        return Err(SocoError::InvalidArgument(format!(
            "distribution covers {} slots, cannot fold slot {t}",
            dist.slots()
        )));
    }
    let m = dist.bound;
    let xtol = 1e-10 * m.max(1.0);
    let target = minimize_scalar(|x| cost(t, x), 0.0, m, xtol)?.x;
    let level = |x: f64| dist.cdf(cost, x) + dist.shift(cost, t, target, x);
    let bracket_err = |e: SocoError| SocoError::RootBracketFailure(e.to_string());
    let right = if level(m) - 1.0 < 0.0 || target >= m {
        m
    } else if level(target) - 1.0 >= 0.0 {
        target
    } else {
        find_root(|x| level(x) - 1.0, target, m, xtol).map_err(bracket_err)?
    };
    let left = if level(0.0) >= 0.0 || target <= 0.0 {
        0.0
    } else if level(target) <= 0.0 {
        target
    } else {
        find_root(level, 0.0, target, xtol).map_err(bracket_err)?
    };
    let mut next = dist.clone();
    next.minimizers.push(target);
    next.add_breakpoints(&[left, right]);
    next.support = (left, right);
    let mass = next.mass(cost);
    if (mass - 1.0).abs() > 1e-4 {
        log::warn!("probability mass drifted to {mass} at slot {t}");
    }
    let mean = next.mean(cost)?.clamp(left, right);
    Ok((mean, next))
}

/// Deterministic probabilistic algorithm: plays the expectation of the distribution.
#[derive(Debug, Clone)]
pub struct Probabilistic {
    pub epsilon: f64,
    /// Known kinks of the hitting costs.
    pub breakpoints: Vec<f64>,
    dist: Option<ProbDistribution>,
}

impl Probabilistic {
    pub fn new(epsilon: f64) -> Self {
        Probabilistic { epsilon, breakpoints: Vec::new(), dist: None }
    }

    pub fn with_breakpoints(mut self, breakpoints: Vec<f64>) -> Self {
        self.breakpoints = breakpoints;
        self
    }

    pub fn distribution(&self) -> Option<&ProbDistribution> {
        self.dist.as_ref()
    }

    /// Step against an arbitrary uni-dimensional cost source.
    pub fn step_with(&mut self, cost: &dyn Fn(usize, f64) -> f64, bound: f64, beta: f64, t: usize) -> Result<f64> {
        let dist = self
            .dist
            .take()
            .unwrap_or_else(|| ProbDistribution::initial(bound, beta, self.epsilon, &self.breakpoints));
        match probabilistic_step(cost, t, &dist) {
            Ok((x, next)) => {
                self.dist = Some(next);
                Ok(x)
            }
            Err(e) => {
                self.dist = Some(dist);
                Err(e)
            }
        }
    }
}

impl Default for Probabilistic {
    fn default() -> Self {
        Probabilistic::new(1e-3)
    }
}

impl OnlineAlgorithm for Probabilistic {
    fn name(&self) -> &'static str {
        "probabilistic"
    }

    fn step(&mut self, problem: &ProblemInstance, t: usize) -> Result<Config> {
        let p = uni_view(problem)?;
        let cost = |s: usize, x: f64| p.hit(s, &[x]).unwrap_or(f64::INFINITY);
        Ok(Config(vec![self.step_with(&cost, p.bounds[0], p.switching[0], t)?]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initial_distribution_is_uniform() {
        let d = ProbDistribution::initial(4.0, 1.0, 1e-3, &[]);
        let none = |_: usize, _: f64| 0.0;
        assert_eq!(d.cdf(&none, 0.5 * INITIAL_SPREAD), 0.5);
        assert_eq!(d.cdf(&none, 2.0 * INITIAL_SPREAD), 1.0);
        assert!((d.mean(&none).unwrap() - 0.5 * INITIAL_SPREAD).abs() < 1e-12);
    }

    #[test]
    fn minimizer_at_zero_stays_near_zero() {
        let cost = |_: usize, x: f64| x;
        let d = ProbDistribution::initial(4.0, 1.0, 1e-3, &[]);
        let (x, next) = probabilistic_step(&cost, 1, &d).unwrap();
        assert!(x < 1e-4, "{x}");
        assert!((next.mass(&cost) - 1.0).abs() < 1e-4);
    }

    #[test]
    fn quadratic_spreads_between_balance_points() {
        // f = (x - 2)^2, beta = 1: C(x) = clamp(x - 2 + C_0(x), 0, 1) so the mass is uniform
        // on [1, 2] up to the initial sliver, with mean 1.5.
        let cost = |_: usize, x: f64| (x - 2.0).powi(2);
        let d = ProbDistribution::initial(4.0, 1.0, 1e-3, &[]);
        let (x, next) = probabilistic_step(&cost, 1, &d).unwrap();
        assert!((x - 1.5).abs() < 1e-4, "{x}");
        assert!((next.support.0 - 1.0).abs() < 1e-4 && (next.support.1 - 2.0).abs() < 1e-4);
        assert!(x >= next.support.0 && x <= next.support.1);
    }
}
