use super::super::{uni_view, OnlineAlgorithm};
use super::{Probabilistic, RandomlyBiasedGreedy};
use crate::error::Result;
use crate::offline::require_integral_bounds;
use crate::problem::{Config, ProblemInstance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Linear interpolation of an integral cost between neighbouring integers.
pub fn relaxed_cost(f: impl Fn(f64) -> f64, x: f64) -> f64 {
    let (lo, hi) = (x.floor(), x.ceil());
    if lo == hi {
        return f(x);
    }
    let (a, b) = (f(lo), f(hi));
    if !a.is_finite() || !b.is_finite() {
        return f64::INFINITY;
    }
    (hi - x) * a + (x - lo) * b
}

/// Fractional and integral configuration of the previous slot.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct RoundingState {
    pub prev_frac: f64,
    pub prev_int: f64,
}

/// Rounds the fractional configuration `frac` given the previous state and a uniform draw
/// `u` from `[0, 1)`.
///
/// The previous fractional point is first clamped to `[floor(frac), ceil(frac)]`; its
/// position inside that unit interval is measured from `floor(frac)`.
pub fn round_step(state: RoundingState, frac: f64, u: f64) -> f64 {
    let (lo, hi) = (frac.floor(), frac.ceil());
    if lo == hi {
        return frac;
    }
    let clamped = state.prev_frac.clamp(lo, hi);
    let offset = clamped - lo;
    if state.prev_frac <= frac {
        if state.prev_int == hi {
            return hi;
        }
        let p_up = (frac - clamped) / (1.0 - offset);
        if u < p_up {
            hi
        } else {
            lo
        }
    } else {
        if state.prev_int == lo {
            return lo;
        }
        let p_down = (clamped - frac) / offset;
        if u < p_down {
            lo
        } else {
            hi
        }
    }
}

/// Fractional algorithm run on the relaxed instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FractionalKind {
    Probabilistic,
    Rbg,
}

#[derive(Debug, Clone)]
enum Inner {
    Probabilistic(Probabilistic),
    Rbg(RandomlyBiasedGreedy),
}

/// Randomized rounding of a 2-competitive fractional algorithm on the relaxed instance.
#[derive(Debug, Clone)]
pub struct RandomizedRelaxation {
    inner: Inner,
    rng: ChaCha8Rng,
    pub state: RoundingState,
}

impl RandomizedRelaxation {
    pub fn new(kind: FractionalKind, seed: u64) -> Self {
        let inner = match kind {
            FractionalKind::Probabilistic => Inner::Probabilistic(Probabilistic::default()),
            FractionalKind::Rbg => Inner::Rbg(RandomlyBiasedGreedy::new(1.0, seed)),
        };
        RandomizedRelaxation { inner, rng: ChaCha8Rng::seed_from_u64(seed), state: RoundingState::default() }
    }
}

impl OnlineAlgorithm for RandomizedRelaxation {
    fn name(&self) -> &'static str {
        "randomized_relaxation"
    }

    fn step(&mut self, problem: &ProblemInstance, t: usize) -> Result<Config> {
        let p = uni_view(problem)?;
        let m = require_integral_bounds(&p)?[0];
        let beta = p.switching[0];
        let relaxed = |s: usize, x: f64| relaxed_cost(|y| p.hit(s, &[y]).unwrap_or(f64::INFINITY), x);
        let frac = match &mut self.inner {
            Inner::Probabilistic(alg) => {
                if alg.distribution().is_none() {
                    alg.breakpoints = (0..=m).map(|k| k as f64).collect();
                }
                alg.step_with(&relaxed, m as f64, beta, t)?
            }
            Inner::Rbg(alg) => alg.step_with(&relaxed, m as f64, beta / 2.0, t)?,
        };
        let u: f64 = self.rng.gen();
        let x = round_step(self.state, frac, u);
        self.state = RoundingState { prev_frac: frac, prev_int: x };
        Ok(Config(vec![x]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integral_fraction_is_kept() {
        for u in [0.0, 0.5, 0.99] {
            assert_eq!(round_step(RoundingState { prev_frac: 0.3, prev_int: 1.0 }, 2.0, u), 2.0);
        }
    }

    #[test]
    fn unchanged_when_already_at_ceiling() {
        let s = RoundingState { prev_frac: 1.4, prev_int: 2.0 };
        for u in [0.0, 0.5, 0.99] {
            assert_eq!(round_step(s, 1.4, u), 2.0);
        }
    }

    #[test]
    fn increase_probability() {
        let s = RoundingState { prev_frac: 0.0, prev_int: 0.0 };
        assert_eq!(round_step(s, 0.5, 0.49), 1.0);
        assert_eq!(round_step(s, 0.5, 0.5), 0.0);
    }

    #[test]
    fn decrease_from_upper_integer() {
        // Previous point 2.0 clamps to the ceiling of 1.25, a full unit above the floor.
        let s = RoundingState { prev_frac: 2.0, prev_int: 2.0 };
        assert_eq!(round_step(s, 1.25, 0.74), 1.0);
        assert_eq!(round_step(s, 1.25, 0.76), 2.0);
    }

    #[test]
    fn relaxed_cost_interpolates() {
        let f = |x: f64| x * x;
        assert_eq!(relaxed_cost(f, 1.5), 2.5);
        assert_eq!(relaxed_cost(f, 2.0), 4.0);
    }
}
