use super::QUADRATURE_BUDGET;
use crate::error::{Result, SocoError};
use std::f64::consts::FRAC_PI_2;
use std::sync::OnceLock;

/// Orientation of a semi-infinite integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `[a, inf)`
    Right,
    /// `(-inf, a]`
    Left,
}

/// Tanh-sinh quadrature of `f` over `[a, b]` to relative precision `tol`.
///
/// The rule never evaluates the endpoints, so integrable endpoint singularities are fine.
pub fn integrate_finite(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    if b < a {
        return integrate_finite(f, b, a, tol).map(|v| -v);
    }
    let half = 0.5 * (b - a);
    let t_max = 4.0;
    let nodes = std::cell::Cell::new(0usize);
    let eval = |t: f64| -> Result<f64> {
        let u = FRAC_PI_2 * t.sinh();
        let w = FRAC_PI_2 * t.cosh() / u.cosh().powi(2);
        if w == 0.0 {
            return Ok(0.0);
        }
        let e = (-2.0 * u.abs()).exp();
        let gap = half * 2.0 * e / (1.0 + e);
        let x = if u >= 0.0 { b - gap } else { a + gap };
        if x <= a || x >= b {
            return Ok(0.0);
        }
        nodes.set(nodes.get() + 1);
        let v = f(x);
        if !v.is_finite() {
            return Err(SocoError::QuadratureFailure(format!("non-finite integrand at {x}")));
        }
        Ok(w * v)
    };
    let mut h = 0.5;
    let mut sum = eval(0.0)?;
    let mut k = 1;
    while k as f64 * h <= t_max {
        let t = k as f64 * h;
        sum += eval(t)? + eval(-t)?;
        k += 1;
    }
    let mut estimate = half * h * sum;
    for level in 1.. {
        h *= 0.5;
        let mut k = 1;
        while k as f64 * h <= t_max {
            let t = k as f64 * h;
            sum += eval(t)? + eval(-t)?;
            k += 2;
        }
        let next = half * h * sum;
        let converged = (next - estimate).abs() <= tol * next.abs().max(1e-300) || next == estimate;
        estimate = next;
        if level >= 3 && converged {
            return Ok(estimate);
        }
        if nodes.get() > QUADRATURE_BUDGET {
            break;
        }
    }
    Err(SocoError::QuadratureFailure(format!("no convergence within {QUADRATURE_BUDGET} nodes")))
}

const LAGUERRE_ORDER: usize = 48;

/// Gauss-Laguerre nodes and weights multiplied by `e^x`.
fn laguerre_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = LAGUERRE_ORDER;
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        let mut z = 0.0f64;
        for i in 0..n {
            z = match i {
                0 => 3.0 / (1.0 + 2.4 * n as f64),
                1 => z + 15.0 / (1.0 + 2.5 * n as f64),
                _ => {
                    let ai = (i - 1) as f64;
                    z + ((1.0 + 2.55 * ai) / (1.9 * ai)) * (z - nodes[i - 2])
                }
            };
            let mut pp = 0.0;
            let mut p2 = 0.0;
            for _ in 0..100 {
                let mut p1 = 1.0;
                p2 = 0.0;
                for j in 0..n {
                    let p3 = p2;
                    p2 = p1;
                    p1 = ((2.0 * j as f64 + 1.0 - z) * p2 - j as f64 * p3) / (j as f64 + 1.0);
                }
                pp = (n as f64 * p1 - n as f64 * p2) / z;
                let z1 = z;
                z = z1 - p1 / pp;
                if (z - z1).abs() <= 1e-15 * z.abs() {
                    break;
                }
            }
            nodes.push(z);
            let w = -1.0 / (pp * n as f64 * p2);
            weights.push(w * z.exp());
        }
        (nodes, weights)
    })
}

/// Semi-infinite integral over `[a, inf)` or `(-inf, a]` by Gauss-Laguerre quadrature.
///
/// The exponential weight is eliminated by integrating `e^x f(a +- x)`.
pub fn integrate_semi_infinite(f: impl Fn(f64) -> f64, a: f64, direction: Direction) -> Result<f64> {
    let (nodes, weights) = laguerre_rule();
    let mut sum = 0.0;
    for (x, w) in nodes.iter().zip(weights) {
        let point = match direction {
            Direction::Right => a + x,
            Direction::Left => a - x,
        };
        let v = f(point);
        if !v.is_finite() {
            return Err(SocoError::QuadratureFailure(format!("non-finite integrand at {point}")));
        }
        sum += w * v;
    }
    Ok(sum)
}
