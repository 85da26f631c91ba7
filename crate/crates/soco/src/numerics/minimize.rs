use super::{Tolerance, MINIMIZE_BUDGET};
use crate::error::{Result, SocoError};

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Result of a one-dimensional minimization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarMinimum {
    pub x: f64,
    pub value: f64,
}

/// Result of a multi-dimensional minimization.
#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub point: Vec<f64>,
    pub value: f64,
}

fn finite(v: f64) -> bool {
    v.is_finite()
}

/// Finds a point of `[lo, hi]` where `f` is finite, preferring the upper bound.
fn feasible_point(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64) -> Option<f64> {
    if finite(f(hi)) {
        return Some(hi);
    }
    if finite(f(lo)) {
        return Some(lo);
    }
    let mut n = 2usize;
    while n <= 4096 {
        for i in (1..n).step_by(2) {
            let x = lo + (hi - lo) * i as f64 / n as f64;
            if finite(f(x)) {
                return Some(x);
            }
        }
        n *= 2;
    }
    None
}

/// Shrinks `[lo, hi]` to the closed interval on which the convex `f` is finite.
fn effective_domain(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64) -> Result<(f64, f64)> {
    let p = feasible_point(f, lo, hi)
        .ok_or_else(|| SocoError::Infeasible(format!("no finite value on [{lo}, {hi}]")))?;
    let mut left = lo;
    if !finite(f(lo)) {
        let (mut bad, mut good) = (lo, p);
        for _ in 0..200 {
            let mid = 0.5 * (bad + good);
            if mid <= bad || mid >= good {
                break;
            }
            if finite(f(mid)) {
                good = mid;
            } else {
                bad = mid;
            }
        }
        left = good;
    }
    let mut right = hi;
    if !finite(f(hi)) {
        let (mut good, mut bad) = (p, hi);
        for _ in 0..200 {
            let mid = 0.5 * (bad + good);
            if mid <= good || mid >= bad {
                break;
            }
            if finite(f(mid)) {
                good = mid;
            } else {
                bad = mid;
            }
        }
        right = good;
    }
    Ok((left, right))
}

/// Minimizes a convex (possibly extended-valued) function on `[lo, hi]`.
///
/// The finite domain is located first, then golden-section search runs until
/// the bracket is narrower than `xtol`.
pub fn minimize_scalar(f: impl Fn(f64) -> f64, lo: f64, hi: f64, xtol: f64) -> Result<ScalarMinimum> {
    if !(lo <= hi) {
        return Err(SocoError::InvalidArgument(format!("empty interval [{lo}, {hi}]")));
    }
    let f = &f as &dyn Fn(f64) -> f64;
    if lo == hi {
        let v = f(lo);
        if !finite(v) {
            return Err(SocoError::Infeasible(format!("no finite value at {lo}")));
        }
        return Ok(ScalarMinimum { x: lo, value: v });
    }
    let (left, right) = effective_domain(f, lo, hi)?;
    golden(f, left, right, xtol)
}

fn golden(f: &dyn Fn(f64) -> f64, left: f64, right: f64, xtol: f64) -> Result<ScalarMinimum> {
    let mut best = ScalarMinimum { x: left, value: f(left) };
    let fr = f(right);
    if fr < best.value {
        best = ScalarMinimum { x: right, value: fr };
    }
    let (mut a, mut b) = (left, right);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let xtol = xtol.max(f64::EPSILON * (a.abs() + b.abs()));
    let mut iterations = 0;
    while (b - a) > xtol && iterations < 400 {
        iterations += 1;
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    for (x, v) in [(c, fc), (d, fd)] {
        if v < best.value {
            best = ScalarMinimum { x, value: v };
        }
    }
    let mid = 0.5 * (a + b);
    let fm = f(mid);
    if fm < best.value {
        best = ScalarMinimum { x: mid, value: fm };
    }
    if !finite(best.value) {
        return Err(SocoError::Infeasible("objective is infinite on its domain".into()));
    }
    Ok(best)
}

/// Smallest and largest minimizers of a convex function on `[lo, hi]`.
///
/// Points whose value is within a relative `1e-11` of the minimum count as minimizers.
pub fn minimizer_extremes(
    f: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    xtol: f64,
) -> Result<(f64, f64, f64)> {
    let min = minimize_scalar(&f, lo, hi, xtol)?;
    let threshold = min.value + 1e-11 * min.value.abs().max(1.0);
    let within = |x: f64| f(x) <= threshold;
    let smallest = if within(lo) {
        lo
    } else {
        let (mut out, mut inside) = (lo, min.x);
        for _ in 0..200 {
            let mid = 0.5 * (out + inside);
            if mid <= out || mid >= inside {
                break;
            }
            if within(mid) {
                inside = mid;
            } else {
                out = mid;
            }
        }
        inside
    };
    let largest = if within(hi) {
        hi
    } else {
        let (mut inside, mut out) = (min.x, hi);
        for _ in 0..200 {
            let mid = 0.5 * (out + inside);
            if mid <= inside || mid >= out {
                break;
            }
            if within(mid) {
                inside = mid;
            } else {
                out = mid;
            }
        }
        inside
    };
    Ok((smallest, largest, min.value))
}

/// A convex program over a box with optional convex inequality constraints `g(x) <= 0`.
pub struct ConvexProgram<'a> {
    pub objective: Box<dyn Fn(&[f64]) -> f64 + 'a>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub constraints: Vec<Box<dyn Fn(&[f64]) -> f64 + 'a>>,
    pub start: Option<Vec<f64>>,
}

impl<'a> ConvexProgram<'a> {
    pub fn new(objective: impl Fn(&[f64]) -> f64 + 'a, lower: Vec<f64>, upper: Vec<f64>) -> Self {
        ConvexProgram { objective: Box::new(objective), lower, upper, constraints: Vec::new(), start: None }
    }

    pub fn with_constraint(mut self, g: impl Fn(&[f64]) -> f64 + 'a) -> Self {
        self.constraints.push(Box::new(g));
        self
    }

    pub fn with_start(mut self, start: Vec<f64>) -> Self {
        self.start = Some(start);
        self
    }

    fn dim(&self) -> usize {
        self.lower.len()
    }

    fn project(&self, x: &mut [f64]) {
        for (k, v) in x.iter_mut().enumerate() {
            *v = v.clamp(self.lower[k], self.upper[k]);
        }
    }

    fn violation(&self, x: &[f64]) -> f64 {
        self.constraints.iter().map(|g| g(x).max(0.0)).sum()
    }
}

/// Minimizes a convex program to precision `tol`.
///
/// One-dimensional programs use golden-section search on the feasible interval.
/// Otherwise a box-projected Nelder-Mead simplex search is restarted until it stalls;
/// constraints are handled with an exact penalty whose weight grows until the
/// returned point is feasible. The default start point is the upper bound of the box.
pub fn minimize(program: &ConvexProgram<'_>, tol: Tolerance) -> Result<Minimum> {
    let n = program.dim();
    if n == 0 || program.upper.len() != n {
        return Err(SocoError::InvalidArgument("box bounds must be non-empty and of equal length".into()));
    }
    if program.lower.iter().zip(&program.upper).any(|(l, u)| !(l <= u)) {
        return Err(SocoError::InvalidArgument("lower bound exceeds upper bound".into()));
    }
    if n == 1 {
        let f = |x: f64| {
            let p = [x];
            if program.constraints.iter().any(|g| g(&p) > 0.0) {
                f64::INFINITY
            } else {
                (program.objective)(&p)
            }
        };
        let xtol = 1e-10 * (program.upper[0] - program.lower[0]).abs().max(1.0);
        let m = minimize_scalar(f, program.lower[0], program.upper[0], xtol)?;
        return Ok(Minimum { point: vec![m.x], value: m.value });
    }
    let mut start = program.start.clone().unwrap_or_else(|| program.upper.clone());
    program.project(&mut start);
    let budget = MINIMIZE_BUDGET * n;
    let mut used = 0usize;
    if program.constraints.is_empty() {
        let (point, value) = restarted_simplex(program, &|x| (program.objective)(x), start, tol, budget, &mut used)?;
        if !value.is_finite() {
            return Err(SocoError::Infeasible("no finite objective value found".into()));
        }
        return Ok(Minimum { point, value });
    }
    let mut weight = 10.0;
    let mut point = start;
    for _ in 0..12 {
        let penalized = |x: &[f64]| (program.objective)(x) + weight * program.violation(x);
        let (p, _) = restarted_simplex(program, &penalized, point, tol, budget, &mut used)?;
        point = p;
        if program.violation(&point) <= 1e-9 {
            let value = (program.objective)(&point);
            if value.is_finite() {
                return Ok(Minimum { point, value });
            }
        }
        weight *= 10.0;
    }
    Err(SocoError::Infeasible("constraints could not be satisfied".into()))
}

fn restarted_simplex(
    program: &ConvexProgram<'_>,
    f: &dyn Fn(&[f64]) -> f64,
    start: Vec<f64>,
    tol: Tolerance,
    budget: usize,
    used: &mut usize,
) -> Result<(Vec<f64>, f64)> {
    let mut point = start;
    let mut value = f(&point);
    *used += 1;
    let mut scale = 0.1;
    for _ in 0..30 {
        let (p, v) = nelder_mead(program, f, &point, scale, budget, used)?;
        let improvement = value - v;
        let settled = v.is_finite() && improvement.abs() <= 1e-11 * tol.absolute_for(v);
        if v <= value {
            point = p;
            value = v;
        }
        if settled && scale < 1e-3 {
            break;
        }
        scale = if settled { scale * 0.1 } else { scale.max(1e-3) };
    }
    Ok((point, value))
}

fn nelder_mead(
    program: &ConvexProgram<'_>,
    f: &dyn Fn(&[f64]) -> f64,
    start: &[f64],
    scale: f64,
    budget: usize,
    used: &mut usize,
) -> Result<(Vec<f64>, f64)> {
    let n = start.len();
    let eval = |x: &[f64], used: &mut usize| -> Result<f64> {
        *used += 1;
        if *used > budget {
            return Err(SocoError::NonConverged { what: "simplex search".into(), budget });
        }
        Ok(f(x))
    };
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((start.to_vec(), eval(start, used)?));
    for k in 0..n {
        let mut p = start.to_vec();
        let width = (program.upper[k] - program.lower[k]).abs();
        let step = if width.is_finite() && width > 0.0 { scale * width } else { scale.max(1e-3) };
        p[k] = if p[k] - step >= program.lower[k] { p[k] - step } else { p[k] + step };
        program.project(&mut p);
        let v = eval(&p, used)?;
        simplex.push((p, v));
    }
    let order = |s: &mut Vec<(Vec<f64>, f64)>| {
        s.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
    };
    for _ in 0..budget {
        order(&mut simplex);
        let best = simplex[0].1;
        let worst = simplex[n].1;
        let spread = if best.is_finite() && worst.is_finite() { worst - best } else { f64::INFINITY };
        let diameter = simplex
            .iter()
            .skip(1)
            .map(|(p, _)| p.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if (spread <= 1e-14 * best.abs().max(1.0) && best.is_finite()) || diameter <= 1e-12 {
            break;
        }
        let mut centroid = vec![0.0; n];
        for (p, _) in simplex.iter().take(n) {
            for k in 0..n {
                centroid[k] += p[k] / n as f64;
            }
        }
        let along = |t: f64| -> Vec<f64> {
            let mut x: Vec<f64> = (0..n).map(|k| centroid[k] + t * (simplex[n].0[k] - centroid[k])).collect();
            program.project(&mut x);
            x
        };
        let reflected = along(-1.0);
        let fr = eval(&reflected, used)?;
        if fr < simplex[0].1 {
            let expanded = along(-2.0);
            let fe = eval(&expanded, used)?;
            simplex[n] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
            continue;
        }
        if fr < simplex[n - 1].1 {
            simplex[n] = (reflected, fr);
            continue;
        }
        let (contracted, fc) = if fr < simplex[n].1 {
            let c = along(-0.5);
            let v = eval(&c, used)?;
            (c, v)
        } else {
            let c = along(0.5);
            let v = eval(&c, used)?;
            (c, v)
        };
        if fc < simplex[n].1.min(fr) {
            simplex[n] = (contracted, fc);
            continue;
        }
        let anchor = simplex[0].0.clone();
        for entry in simplex.iter_mut().skip(1) {
            let mut p: Vec<f64> = (0..n).map(|k| anchor[k] + 0.5 * (entry.0[k] - anchor[k])).collect();
            program.project(&mut p);
            let v = eval(&p, used)?;
            *entry = (p, v);
        }
    }
    order(&mut simplex);
    let (p, v) = simplex.swap_remove(0);
    Ok((p, v))
}
